import os
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from uvbkit.words import Letter, lam, rho, sigma  # noqa: E402

settings.register_profile("default", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

exps = st.integers(-3, 3).filter(bool)


@st.composite
def sr_letters(draw, n):
    kind = draw(st.sampled_from("sr"))
    i = draw(st.integers(1, n - 1))
    e = draw(exps)
    return sigma(i, e) if kind == "s" else rho(i, e)


@st.composite
def lam_letters(draw, n):
    i, j = draw(st.permutations(range(1, n + 1)))[:2]
    return lam(i, j, draw(exps))


def sr_words(n, max_size=12):
    return st.lists(sr_letters(n), max_size=max_size)


def lam_words(n, max_size=12):
    return st.lists(lam_letters(n), max_size=max_size)


def mixed_words(n, max_size=12):
    return st.lists(st.one_of(sr_letters(n), lam_letters(n)), max_size=max_size)


ns = st.integers(2, 5)

__all__ = ["Letter", "sr_words", "lam_words", "mixed_words", "ns", "exps"]


ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
