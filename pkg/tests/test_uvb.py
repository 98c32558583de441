from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import lam_words, mixed_words, sr_words
from oracles import SanovModel
from uvbkit import perms as P
from uvbkit import uvb as V
from uvbkit.uvp import parse_uvp, uvp_from_letters, uvp_generator
from uvbkit.words import lam, parse_word, print_word, rho, sigma


def g(text, n):
    return V.nf(text, n)


def test_act_examples():
    assert V.act(P.s(2, 3), parse_uvp("l1,2", 3)) == parse_uvp("l1,3", 3)
    x = parse_uvp("l1,2^-1 l2,1", 3)
    assert V.act(P.identity_perm(3), x) == x
    assert V.act(P.s(1, 3), x) == parse_uvp("l2,1^-1 l1,2", 3)


def test_product_examples():
    n = 3
    left = V.UvbElement(parse_uvp("l1,2", n), P.s(1, n))
    right = V.pure(parse_uvp("l1,2", n))
    assert V.uvb_multiply(left, right) == V.UvbElement(parse_uvp("l1,2 l2,1", n), P.s(1, n))
    s, t = P.s(1, n), P.s(2, n)
    assert V.uvb_multiply(V.iota(s), V.iota(t)) == V.iota(P.compose(s, t))


@pytest.mark.parametrize("word,lam_text", [("s1 r1", "l1,2^-1"), ("r1 s1^-1", "l1,2"), ("s1^-1 r1", "l2,1")])
def test_rewriter_examples(word, lam_text):
    out = V.rewrite_to_normal_form(parse_word(word, 3), 3)
    assert out == V.pure(parse_uvp(lam_text, 3))


def test_expand_examples():
    assert print_word(V.expand_lambda(1, 3, 3)) == "r2 r1 s1^-1 r2"
    assert V.embed_lambda(1, 2, 2) == V.pure(uvp_generator(1, 2, 2))
    for n in range(2, 6):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i != j:
                    assert V.rewrite_to_normal_form(V.expand_lambda(i, j, n), n) == V.embed_lambda(i, j, n)


def test_phi_and_kernel_examples():
    assert str(V.phi(g("s1 s2", 3))) == "[2,3,1]"
    assert V.in_kernel(V.embed_lambda(2, 5, 5))
    assert not V.in_kernel(g("s1", 3))


def test_abelianize_examples():
    assert V.abelianize_uvb(g("s1", 3)) == (1, 0)
    assert V.abelianize_uvb(g("r1", 3)) == (0, 1)
    assert V.abelianize_uvb(V.embed_lambda(1, 2, 3)) == (-1, 1)
    assert V.abelianize_uvb(V.uvb_identity(3)) == (0, 0)


@given(st.integers(2, 6).flatmap(lambda n: st.tuples(st.just(n), sr_words(n, 15), sr_words(n, 15))))
def test_rewriter_soundness(args):
    n, u, v = args
    nu, nv = V.rewrite_to_normal_form(u, n), V.rewrite_to_normal_form(v, n)
    assert V.rewrite_to_normal_form(u + v, n) == V.uvb_multiply(nu, nv)
    uinv = [x.inverse() for x in reversed(u)]
    assert V.rewrite_to_normal_form(u + uinv, n).is_identity()
    assert V.phi(nu) == V.perm_image(u, n)
    assert V.abelianize_uvb(u) == V.abelianize_uvb(nu)
    M = SanovModel(n)
    assert M.word(u) == M.from_element(nu)


@given(st.integers(2, 5).flatmap(lambda n: st.tuples(st.just(n), mixed_words(n, 10))))
def test_to_word_roundtrip(args):
    n, w = args
    x = V.nf(print_word(w), n)
    assert V.rewrite_to_normal_form(V.to_word(x), n) == x
    assert V.uvb_multiply(x, V.uvb_invert(x)).is_identity()


def test_eq2_exhaustive_n4():
    n = 4
    for s in P.all_perms(n):
        for i, j in [(i, j) for i in range(1, 5) for j in range(1, 5) if i != j]:
            lhs = V.uvb_product(V.iota(s), V.embed_lambda(i, j, n), V.uvb_invert(V.iota(s)))
            assert lhs == V.embed_lambda(s(i), s(j), n)


@pytest.mark.parametrize("n,expected", [(2, 1), (3, 7), (4, 17), (5, 31), (6, 49)])
def test_relators_hold(n, expected):
    table = V.presentation("UVB", n)
    assert len(table.relators) == expected
    rep = V.verify_presentation(table)
    assert rep.all_ok()
    M = SanovModel(n)
    assert all(M.is_identity(M.word(r.word)) for r in table.relators)


def test_family_sizes():
    assert V.family_sizes("UVB", 6) == {"R1": 4, "R2": 6, "R3": 4, "R4": 6, "R5": 5,
                                        "R6": 12, "R7": 4, "R8": 4, "R9": 4}
    assert "R9" not in V.family_sizes("WB", 5)
    assert set(V.family_sizes("S", 5)) == {"R3", "R4", "R5"}


def test_r8_rearranged():
    assert V.check_word("r1 s2 s1 r2 s1^-1 s2^-1", 3)


def test_engine_mismatch():
    with pytest.raises(V.EngineMismatch):
        V.verify_presentation(V.presentation("WB", 3), "normal_form")


def test_syntactic_engine_on_own_relators():
    for name in ("WB", "UVB"):
        rep = V.verify_presentation(V.presentation(name, 4), "syntactic")
        assert rep.all_ok()


def test_syntactic_engine_fail_and_unknown():
    table = V.presentation("WB", 3)
    # sigma_1 -> sigma_1^2 breaks R1 in the UVB quotient already
    images = {(V.SIGMA, (1,)): [sigma(1, 2)], (V.SIGMA, (2,)): [sigma(2, 2)],
              (V.RHO, (1,)): [rho(1)], (V.RHO, (2,)): [rho(2)]}
    rep = V.verify_presentation(table, "syntactic", images)
    assert dict(rep.results)["R1.1"] == V.FAIL
    # R9 holds in UVB but is not a WB consequence the rewriter can find
    rw = V.SymbolicRewriter(table)
    r9 = V.presentation("UVB", 3).relators[-1]
    assert r9.rid.startswith("R9")
    assert not rw.derives_identity(r9.word, budget=200)


def test_report_format():
    rep = V.verify_presentation(V.presentation("UVB", 3))
    lines = rep.text().splitlines()
    assert lines[0] == "R1.1 OK"
    assert lines[-1] == "summary OK=7 FAIL=0 UNKNOWN=0"
    assert '"summary"' in rep.dumps()


def test_commutes_with_pure_examples():
    assert V.commutes_with_all_pure_generators(V.uvb_identity(3))
    assert not V.commutes_with_all_pure_generators(V.iota(P.s(1, 3)))
    assert not V.commutes_with_all_pure_generators(V.embed_lambda(1, 2, 3))


@pytest.mark.parametrize("n", [2, 3])
def test_centralizer_of_pure_subgroup_trivial(n):
    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    letters = [lam(i, j, e) for i, j in pairs for e in (1, -1)]
    seen = set()
    for k in range(4):
        for combo in product(letters, repeat=k):
            seen.add(uvp_from_letters(list(combo), n))
    hits = [V.UvbElement(x, s) for x in seen for s in P.all_perms(n)
            if V.commutes_with_all_pure_generators(V.UvbElement(x, s))]
    assert hits == [V.uvb_identity(n)]
