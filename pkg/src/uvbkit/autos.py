"""Endomorphisms of UVP_n and UVB_n as generator-image tables.

A spec never holds a closure: images are explicit group elements, so specs
compose by substitution and compare by the solved word problem.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import perms as P
from . import uvb as V
from .uvp import (
    A,
    abelianize_uvp,
    apply_uvp_endo,
    check_uvp_endo,
    f2_endo_injective,
    f2_endo_surjective,
    factor_keys,
    ordered_pairs,
    parse_uvp,
    uvp_equal,
    uvp_generator,
    uvp_multiply,
)
from .words import LAMBDA, RHO, SIGMA, ReducedWord, commutator, parse_word, print_word, rho, sigma, subgroup_membership

UVP, UVB, WB = "UVP", "UVB", "WB"


class AutosError(ValueError):
    code = "AutosError"


@dataclass
class EndoSpec:
    """Generator-image table.

    UVP: ``images[(i, j)]`` is a UvpElement.  UVB: ``images[base]`` is a
    UvbElement for ``base`` in ``("r", (i,))``, ``("s", (i,))``.  WB:
    ``images[base]`` is a sigma/rho letter list and ``checked`` is one of
    OK / FAIL / UNKNOWN rather than a boolean.
    """

    target: str
    n: int
    images: dict
    checked: object = False
    name: str = ""
    _lam_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def generators(self) -> list:
        if self.target == UVP:
            return ordered_pairs(self.n)
        return [(RHO, (i,)) for i in range(1, self.n)] + [(SIGMA, (i,)) for i in range(1, self.n)]

    # --- evaluation -----------------------------------------------------
    def lambda_image(self, i: int, j: int):
        """Image of l_{i,j}; for UVB specs this goes through the sigma/rho expansion."""
        if self.target == UVP:
            return self.images[(i, j)]
        key = (i, j)
        if key not in self._lam_cache:
            self._lam_cache[key] = V.evaluate(V.expand_lambda(i, j, self.n), self.n, self.images)
        return self._lam_cache[key]

    def __call__(self, x):
        if self.target == UVP:
            return apply_uvp_endo(self, x, skip_check=True)
        if self.target == UVB:
            return apply_uvb_endo(self, x)
        raise AutosError("WB specs are symbolic; use V.substitute")


def apply_uvb_endo(spec: EndoSpec, g: V.UvbElement) -> V.UvbElement:
    out = V.uvb_identity(spec.n)
    for x in g.lam.letters():
        img = spec.lambda_image(*x.idx)
        if x.exp < 0:
            img = V.uvb_invert(img)
        for _ in range(abs(x.exp)):
            out = V.uvb_multiply(out, img)
    for i in P.adjacent_word(g.perm):
        out = V.uvb_multiply(out, spec.images[(RHO, (i,))])
    return out


def apply_endo(spec: EndoSpec, x):
    return spec(x)


# ---------------------------------------------------------------------------
# construction

def uvp_spec(n: int, changes: dict, name: str = "") -> EndoSpec:
    """UVP spec fixing every generator not listed in ``changes``; checked on construction."""
    images = {p: uvp_generator(p[0], p[1], n) for p in ordered_pairs(n)}
    images.update(changes)
    spec = EndoSpec(UVP, n, images, name=name)
    spec.checked = check_uvp_endo(spec)
    return spec


def uvb_spec(n: int, images: dict, name: str = "") -> EndoSpec:
    spec = EndoSpec(UVB, n, dict(images), name=name)
    report = V.verify_presentation(V.presentation("UVB", n), "normal_form", spec.images)
    spec.checked = report.all_ok()
    return spec


def identity_spec(target: str, n: int) -> EndoSpec:
    if target == UVP:
        return uvp_spec(n, {}, name="id")
    return uvb_spec(n, {b: V.letter_element(_gen_letter(b), n) for b in _uvb_gens(n)}, name="id")


def _uvb_gens(n: int) -> list:
    return [(RHO, (i,)) for i in range(1, n)] + [(SIGMA, (i,)) for i in range(1, n)]


def _gen_letter(base):
    return rho(base[1][0]) if base[0] == RHO else sigma(base[1][0])


def _gen(i, j, n, e=1):
    return uvp_generator(i, j, n, e)


def make_theoremC_generator(kind: str, indices, n: int) -> EndoSpec:
    """Build I, T, E or P.

    ``I (i,j)``: l_{i,j} -> l_{i,j}^-1.  ``T (j,i)``: the transvection
    T_{l_{j,i}}, l_{i,j} -> l_{i,j} l_{j,i}.  ``E (i,j)``: swap l_{i,j}, l_{j,i}.
    ``P ((i,j),(k,l))``: l_{i,j} <-> l_{k,l} and l_{j,i} <-> l_{l,k}.
    """
    kind = kind.upper()
    if kind == "P":
        (i, j), (k, l) = indices
        for a, b in ((i, j), (k, l)):
            _check_pair(a, b, n)
        if {i, j} == {k, l}:
            raise AutosError("P needs two different factors")
        changes = {(i, j): _gen(k, l, n), (k, l): _gen(i, j, n),
                   (j, i): _gen(l, k, n), (l, k): _gen(j, i, n)}
        name = f"P{i}{j},{k}{l}"
    else:
        a, b = indices
        _check_pair(a, b, n)
        if kind == "I":
            changes = {(a, b): _gen(a, b, n, -1)}
            name = f"I{a},{b}"
        elif kind == "T":
            # T_{l_{a,b}} moves l_{b,a}
            changes = {(b, a): uvp_multiply(_gen(b, a, n), _gen(a, b, n))}
            name = f"T{a},{b}"
        elif kind == "E":
            changes = {(a, b): _gen(b, a, n), (b, a): _gen(a, b, n)}
            name = f"E{min(a, b)},{max(a, b)}"
        else:
            raise AutosError(f"unknown generator kind {kind!r}")
    spec = uvp_spec(n, changes, name)
    if spec.checked is not True:
        raise AutosError(f"{name} failed the commutation check")
    return spec


def _check_pair(a, b, n):
    if a == b or not (1 <= a <= n and 1 <= b <= n):
        raise AutosError(f"bad index pair ({a},{b}) for n={n}")


def theoremC_generators(n: int) -> list[EndoSpec]:
    """Every I, T, E and P for the given n."""
    out = []
    for i, j in ordered_pairs(n):
        out.append(make_theoremC_generator("I", (i, j), n))
        out.append(make_theoremC_generator("T", (i, j), n))
    for i, j in factor_keys(n):
        out.append(make_theoremC_generator("E", (i, j), n))
    keys = factor_keys(n)
    for x in range(len(keys)):
        for y in range(x + 1, len(keys)):
            out.append(make_theoremC_generator("P", (keys[x], keys[y]), n))
    return out


def make_h(n: int) -> EndoSpec:
    """l_{i,j} -> l_{i,j} l_{j,i} on UVP_n."""
    return uvp_spec(n, {(i, j): uvp_multiply(_gen(i, j, n), _gen(j, i, n))
                        for i, j in ordered_pairs(n)}, name="h")


def _sr(text: str, n: int) -> V.UvbElement:
    return V.rewrite_to_normal_form(parse_word(text, n), n)


def make_beta(n: int) -> EndoSpec:
    images = {}
    for i in range(1, n):
        images[(SIGMA, (i,))] = _sr(f"s{i}^-1", n)
        images[(RHO, (i,))] = _sr(f"r{i}", n)
    return uvb_spec(n, images, name="beta")


def make_gamma(n: int) -> EndoSpec:
    images = {}
    for i in range(1, n):
        images[(SIGMA, (i,))] = _sr(f"r{i} s{i} r{i}", n)
        images[(RHO, (i,))] = _sr(f"r{i}", n)
    return uvb_spec(n, images, name="gamma")


def make_hbar(n: int) -> EndoSpec:
    """Extension of h fixing iota(S_n): sigma_i = l_{i,i+1}^-1 rho_i goes to h(l_{i,i+1})^-1 rho_i."""
    images = {}
    for i in range(1, n):
        hl = V.pure(uvp_multiply(_gen(i, i + 1, n), _gen(i + 1, i, n)))
        images[(SIGMA, (i,))] = V.uvb_multiply(V.uvb_invert(hl), _sr(f"r{i}", n))
        images[(RHO, (i,))] = _sr(f"r{i}", n)
    return uvb_spec(n, images, name="hbar")


def make_alpha2() -> EndoSpec:
    """sigma_1 -> sigma_1^-1 rho_1, rho_1 -> rho_1 on UVB_2."""
    return uvb_spec(2, {(SIGMA, (1,)): _sr("s1^-1 r1", 2), (RHO, (1,)): _sr("r1", 2)}, name="alpha2")


def make_alpha_wb(n: int, budget: int = 4000) -> EndoSpec:
    """sigma_i -> rho_i sigma_i^-1 rho_i on WB_n, checked symbolically (three-valued)."""
    images = {}
    for i in range(1, n):
        images[(SIGMA, (i,))] = [rho(i), sigma(i, -1), rho(i)]
        images[(RHO, (i,))] = [rho(i)]
    spec = EndoSpec(WB, n, images, name="alpha")
    report = V.verify_presentation(V.presentation("WB", n), "syntactic", images, budget=budget)
    sm = report.summary()
    spec.checked = V.FAIL if sm[V.FAIL] else V.UNKNOWN if sm[V.UNKNOWN] else V.OK
    return spec


def inner_by(g: V.UvbElement) -> EndoSpec:
    n = g.n
    images = {b: V.conjugate(g, V.letter_element(_gen_letter(b), n)) for b in _uvb_gens(n)}
    return EndoSpec(UVB, n, images, checked=True, name="inner")


# ---------------------------------------------------------------------------
# algebra of specs

def compose_endo(f: EndoSpec, g: EndoSpec) -> EndoSpec:
    """``f o g``: apply g first."""
    if f.target != g.target or f.n != g.n:
        raise AutosError(f"cannot compose {f.target}_{f.n} with {g.target}_{g.n}")
    if f.target == WB:
        images = {b: V.substitute(w, f.images) for b, w in g.images.items()}
        return EndoSpec(WB, f.n, images, checked=V.UNKNOWN, name=f"{f.name}o{g.name}")
    images = {b: f(x) for b, x in g.images.items()}
    checked = f.checked is True and g.checked is True
    return EndoSpec(f.target, f.n, images, checked=checked, name=f"{f.name}o{g.name}")


def endo_equal(f: EndoSpec, g: EndoSpec) -> bool:
    if f.target != g.target or f.n != g.n:
        raise AutosError("target mismatch")
    if f.target == UVP:
        return all(uvp_equal(f.images[k], g.images[k]) for k in f.generators())
    if f.target == UVB:
        return all(V.uvb_equal(f.images[k], g.images[k]) for k in f.generators())
    raise AutosError("WB specs have no decidable equality here")


# ---------------------------------------------------------------------------
# abelianization

@dataclass(frozen=True)
class IntegerMatrix:
    rows: tuple
    modulus_rows: tuple = ()   # rows read mod 2 (the Z_2 coordinate of UVB)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def is_identity(self) -> bool:
        for r, row in enumerate(self.rows):
            for c, v in enumerate(row):
                want = 1 if r == c else 0
                if r in self.modulus_rows:
                    v, want = v % 2, want % 2
                if v != want:
                    return False
        return True

    def determinant(self) -> int:
        return bareiss_det([list(r) for r in self.rows])

    def is_unimodular(self) -> bool:
        return abs(self.determinant()) == 1

    def tolist(self) -> list:
        return [list(r) for r in self.rows]


def bareiss_det(m: list) -> int:
    """Fraction-free integer determinant."""
    m = [row[:] for row in m]
    size = len(m)
    if size == 0:
        return 1
    sign, prev = 1, 1
    for k in range(size - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, size) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1]


def abelianized_matrix(spec: EndoSpec) -> IntegerMatrix:
    """Column c is the abelianized image of generator c.

    UVP: basis ``ordered_pairs(n)``.  UVB: basis ``(sigma_1, rho_1)`` of
    Z x Z_2, second row read mod 2.
    """
    if spec.target == UVP:
        cols = [abelianize_uvp(spec.images[p]).entries for p in ordered_pairs(spec.n)]
        rows = tuple(tuple(col[r] for col in cols) for r in range(len(cols)))
        return IntegerMatrix(rows)
    if spec.target == UVB:
        s1 = V.abelianize_uvb(spec.images[(SIGMA, (1,))])
        r1 = V.abelianize_uvb(spec.images[(RHO, (1,))])
        return IntegerMatrix(((s1[0], r1[0]), (s1[1] % 2, r1[1] % 2)), modulus_rows=(1,))
    raise AutosError("no abelianization for WB specs")


# ---------------------------------------------------------------------------
# innerness obstructions

PROVEN_NOT_INNER, UNKNOWN = "ProvenNotInner", "Unknown"
ABELIANIZATION, PAIR_SWAP = "ABELIANIZATION", "PAIR_SWAP"


@dataclass(frozen=True)
class InnerVerdict:
    status: str
    reason: str = ""
    evidence: str = ""

    def __str__(self) -> str:
        return f"{self.status}({self.reason})" if self.reason else self.status


def swaps_all_couples(spec: EndoSpec) -> bool:
    n = spec.n
    for k, l in ordered_pairs(n):
        img = spec.lambda_image(k, l)
        want = V.embed_lambda(l, k, n) if spec.target == UVB else uvp_generator(l, k, n)
        eq = V.uvb_equal(img, want) if spec.target == UVB else uvp_equal(img, want)
        if not eq:
            return False
    return True


def not_inner_witness(spec: EndoSpec) -> InnerVerdict:
    """Sound obstruction check; never claims non-inner without a certificate."""
    if spec.target not in (UVB, UVP):
        return InnerVerdict(UNKNOWN)
    mat = abelianized_matrix(spec)
    if not mat.is_identity():
        return InnerVerdict(PROVEN_NOT_INNER, ABELIANIZATION, f"matrix {mat.tolist()}")
    if spec.target == UVB and swaps_all_couples(spec):
        n = spec.n
        hits = [s for s in P.all_perms(n)
                if all(s(k) == l and s(l) == k for k, l in ordered_pairs(n))]
        if not hits:
            return InnerVerdict(PROVEN_NOT_INNER, PAIR_SWAP,
                                f"no permutation of degree {n} swaps every couple")
    return InnerVerdict(UNKNOWN)


# ---------------------------------------------------------------------------
# h-bar certificate

def certify_hbar(n: int) -> dict:
    """Per-factor injectivity / surjectivity of h plus the UVB relator check of h-bar."""
    h = make_h(n)
    hbar = make_hbar(n)
    factors = []
    for i, j in factor_keys(n):
        w = h.images[(i, j)].factor(i, j)
        v = h.images[(j, i)].factor(i, j)
        comm = commutator(w, v)
        factors.append({
            "factor": f"{i},{j}",
            "image_A": str(w),
            "image_B": str(v),
            "commutator": str(comm),
            "injective": f2_endo_injective(w, v),
            "surjective": f2_endo_surjective(w, v),
            "A_in_image": subgroup_membership([w, v], ReducedWord.gen(A)),
        })
    lifted = all(
        V.uvb_equal(hbar.lambda_image(i, j), V.pure(h.images[(i, j)]))
        for i, j in ordered_pairs(n)
    )
    return {
        "n": n,
        "h_is_endomorphism": h.checked is True,
        "hbar_is_endomorphism": hbar.checked is True,
        "hbar_restricts_to_h": lifted,
        "factors": factors,
        "injective": all(f["injective"] for f in factors),
        "surjective": all(f["surjective"] for f in factors),
    }


# ---------------------------------------------------------------------------
# JSON spec files

def spec_to_json(spec: EndoSpec) -> dict:
    images = {}
    for b in spec.generators():
        if spec.target == UVP:
            images[f"l{b[0]},{b[1]}"] = str(spec.images[b])
        elif spec.target == UVB:
            g = spec.images[b]
            toks = [x.token() for x in g.lam.letters()] + [f"r{i}" for i in P.adjacent_word(g.perm)]
            images[f"{b[0]}{b[1][0]}"] = " ".join(toks) or "1"
        else:
            images[f"{b[0]}{b[1][0]}"] = print_word(spec.images[b])
    return {"target": spec.target, "n": spec.n, "images": images}


def spec_from_json(data: dict) -> EndoSpec:
    """Load ``{"target", "n", "images": {token: word}}``; unlisted generators are fixed.

    A flat layout with the generator tokens at top level is accepted too.
    """
    target = str(data["target"]).upper()
    n = int(data["n"])
    raw = data.get("images")
    if raw is None:
        raw = {k: v for k, v in data.items() if k not in ("target", "n")}
    if target == UVP:
        changes = {}
        for tok, word in raw.items():
            (x,) = parse_word(tok, n)
            if x.kind != LAMBDA or x.exp != 1:
                raise AutosError(f"bad UVP generator token {tok!r}")
            changes[x.idx] = parse_uvp(word, n)
        return uvp_spec(n, changes)
    if target in (UVB, WB):
        images = {b: ([_gen_letter(b)] if target == WB else V.letter_element(_gen_letter(b), n))
                  for b in _uvb_gens(n)}
        for tok, word in raw.items():
            (x,) = parse_word(tok, n)
            if x.kind == LAMBDA or x.exp != 1:
                raise AutosError(f"bad generator token {tok!r}")
            images[x.base] = parse_word(word, n) if target == WB else V.nf(word, n)
        if target == UVB:
            return uvb_spec(n, images)
        spec = EndoSpec(WB, n, images)
        report = V.verify_presentation(V.presentation("WB", n), "syntactic", images)
        sm = report.summary()
        spec.checked = V.FAIL if sm[V.FAIL] else V.UNKNOWN if sm[V.UNKNOWN] else V.OK
        return spec
    raise AutosError(f"unknown target {target!r}")


def load_spec(path) -> EndoSpec:
    with open(path) as fh:
        return spec_from_json(json.load(fh))


__all__ = [
    "EndoSpec", "IntegerMatrix", "InnerVerdict",
    "make_theoremC_generator", "theoremC_generators", "make_h", "make_beta", "make_gamma",
    "make_hbar", "make_alpha2", "make_alpha_wb", "inner_by", "identity_spec",
    "compose_endo", "endo_equal", "abelianized_matrix", "not_inner_witness",
    "certify_hbar", "spec_to_json", "spec_from_json", "load_spec", "apply_endo",
    "uvp_spec", "uvb_spec", "swaps_all_couples", "bareiss_det",
]
