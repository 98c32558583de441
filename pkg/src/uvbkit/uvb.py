"""UVB_n as UVP_n x| S_n: normal forms, the sigma/rho rewriter and relator checks.

An element is a pair ``(lam, perm)`` read as ``lam * iota(perm)``; the
permutation is always pushed to the right.  Conjugation by ``iota(s)`` sends
``l_{i,j}`` to ``l_{s(i),s(j)}``, which gives the product rule

    (L1, S1)(L2, S2) = (L1 * act(S1, L2), S1 o S2).
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from itertools import permutations

from . import perms as P
from .uvp import (
    A,
    B,
    UvpElement,
    relabel,
    uvp_equal,
    uvp_generator,
    uvp_identity,
    uvp_invert,
    uvp_multiply,
)
from .words import (
    F2,
    LAMBDA,
    RHO,
    SIGMA,
    EqualIndices,
    Letter,
    ReducedWord,
    parse_word,
    rho,
    sigma,
)


class UvbError(ValueError):
    code = "UvbError"


class EngineMismatch(UvbError):
    code = "EngineMismatch"


@dataclass(frozen=True)
class UvbElement:
    lam: UvpElement
    perm: P.Permutation

    def __post_init__(self):
        if self.lam.n != self.perm.n:
            raise UvbError(f"lam has n={self.lam.n}, perm has degree {self.perm.n}")

    @property
    def n(self) -> int:
        return self.lam.n

    def __mul__(self, other: "UvbElement") -> "UvbElement":
        return uvb_multiply(self, other)

    def is_identity(self) -> bool:
        return self.lam.is_identity() and self.perm.is_identity()

    def __str__(self) -> str:
        return f"{self.lam} | {self.perm}"


def act(s: P.Permutation, x: UvpElement) -> UvpElement:
    return relabel(x, s)


def uvb_identity(n: int) -> UvbElement:
    return UvbElement(uvp_identity(n), P.identity_perm(n))


def _same_n(g: UvbElement, h: UvbElement) -> None:
    if g.n != h.n:
        raise P.DegreeMismatch(f"{g.n} vs {h.n}")


def uvb_multiply(g: UvbElement, h: UvbElement) -> UvbElement:
    _same_n(g, h)
    return UvbElement(uvp_multiply(g.lam, act(g.perm, h.lam)), P.compose(g.perm, h.perm))


def uvb_invert(g: UvbElement) -> UvbElement:
    sinv = P.inverse(g.perm)
    return UvbElement(act(sinv, uvp_invert(g.lam)), sinv)


def uvb_equal(g: UvbElement, h: UvbElement) -> bool:
    _same_n(g, h)
    return uvp_equal(g.lam, h.lam) and g.perm == h.perm


def uvb_product(*elements: UvbElement) -> UvbElement:
    out = elements[0]
    for x in elements[1:]:
        out = uvb_multiply(out, x)
    return out


def conjugate(g: UvbElement, x: UvbElement) -> UvbElement:
    """``g x g^-1``."""
    return uvb_multiply(uvb_multiply(g, x), uvb_invert(g))


def phi(g: UvbElement) -> P.Permutation:
    return g.perm


def iota(s: P.Permutation) -> UvbElement:
    return UvbElement(uvp_identity(s.n), s)


def in_kernel(g: UvbElement) -> bool:
    return g.perm.is_identity()


def pure(x: UvpElement) -> UvbElement:
    return UvbElement(x, P.identity_perm(x.n))


def embed_lambda(i: int, j: int, n: int) -> UvbElement:
    return pure(uvp_generator(i, j, n))


def expand_lambda(i: int, j: int, n: int) -> list[Letter]:
    """sigma/rho word for l_{i,j}: conjugate of l_{a,a+1} or l_{a+1,a} by rho's."""
    if i == j:
        raise EqualIndices(f"l{i},{j}")
    lo, hi = min(i, j), max(i, j)
    if not (1 <= lo and hi <= n):
        raise UvbError(f"l{i},{j} outside 1..{n}")
    core = [rho(lo), sigma(lo, -1)] if i < j else [sigma(lo, -1), rho(lo)]
    outer = [rho(k) for k in range(hi - 1, lo, -1)]
    return outer + core + outer[::-1]


def rewrite_to_normal_form(word, n: int) -> UvbElement:
    """Normal form of a sigma/rho word.

    sigma_i = l_{i,i+1}^-1 rho_i and sigma_i^-1 = rho_i l_{i,i+1}; every rho
    is absorbed into the running permutation.
    """
    if isinstance(word, str):
        word = parse_word(word, n)
    perm = list(range(1, n + 1))     # running S, one-line
    stacks: dict = {}                # factor -> syllable stack

    def push(a: int, b: int, e: int) -> None:
        key, letter = ((a, b), A) if a < b else ((b, a), B)
        st = stacks.setdefault(key, [])
        if st and st[-1][0] == letter:
            t = st[-1][1] + e
            if t:
                st[-1] = (letter, t)
            else:
                st.pop()
        else:
            st.append((letter, e))

    for x in word:
        if x.kind == LAMBDA:
            raise UvbError("lambda letters are not accepted here; use embed_lambda")
        x.validate(n)
        i = x.idx[0]
        if x.kind == RHO:
            if x.exp % 2:
                perm[i - 1], perm[i] = perm[i], perm[i - 1]
            continue
        a, b = perm[i - 1], perm[i]
        if x.exp > 0:
            # (l_{S(i),S(i+1)})^-1, then S <- S o s_i
            for _ in range(x.exp):
                push(a, b, -1)
                a, b = b, a
        else:
            for _ in range(-x.exp):
                push(b, a, 1)
                a, b = b, a
        perm[i - 1], perm[i] = a, b
    lam = UvpElement.from_dict(n, {k: ReducedWord(tuple(v), F2) for k, v in stacks.items()})
    return UvbElement(lam, P.Permutation(tuple(perm)))


def nf(text: str, n: int) -> UvbElement:
    """Normal form of a word that may mix sigma/rho and lambda tokens."""
    out = uvb_identity(n)
    for x in parse_word(text, n):
        out = uvb_multiply(out, letter_element(x, n))
    return out


def letter_element(x: Letter, n: int) -> UvbElement:
    x.validate(n)
    if x.kind == LAMBDA:
        return pure(uvp_generator(x.idx[0], x.idx[1], n, x.exp))
    return rewrite_to_normal_form([x], n)


def perm_image(word, n: int) -> P.Permutation:
    """phi of a sigma/rho word computed directly in S_n."""
    out = P.identity_perm(n)
    for x in word:
        if x.exp % 2:
            out = P.compose(out, P.s(x.idx[0], n))
    return out


def to_word(g: UvbElement) -> list[Letter]:
    """A sigma/rho word representing ``g`` (lambda letters expanded)."""
    out: list[Letter] = []
    for x in g.lam.letters():
        body = expand_lambda(x.idx[0], x.idx[1], g.n)
        if x.exp < 0:
            body = [y.inverse() if y.kind == SIGMA else y for y in reversed(body)]
        out.extend(body * abs(x.exp))
    out.extend(rho(i) for i in P.adjacent_word(g.perm))
    return out


# ---------------------------------------------------------------------------
# abelianization Z x Z_2

def abelianize_uvb(g) -> tuple[int, int]:
    """``(sigma degree, rho parity)``; accepts an element or a sigma/rho word."""
    if isinstance(g, UvbElement):
        deg = 0
        par = P.parity(g.perm)
        for x in g.lam.letters():
            deg -= x.exp
            par += x.exp
        return deg, par % 2
    deg = sum(x.exp for x in g if x.kind == SIGMA)
    par = sum(x.exp for x in g if x.kind == RHO) % 2
    for x in g:
        if x.kind == LAMBDA:
            deg -= x.exp
            par += x.exp
    return deg, par % 2


# ---------------------------------------------------------------------------
# presentations

@dataclass(frozen=True)
class Relator:
    rid: str
    lhs: tuple
    rhs: tuple

    @property
    def word(self) -> list[Letter]:
        return list(self.lhs) + [x.inverse() for x in reversed(self.rhs)]

    def text(self) -> str:
        left = " ".join(x.token() for x in self.lhs) or "1"
        right = " ".join(x.token() for x in self.rhs) or "1"
        return f"{left} = {right}"


@dataclass(frozen=True)
class PresentationTable:
    name: str          # "UVB", "WB" or "S"
    n: int
    relators: tuple
    generators: tuple = field(default=())


def family_sizes(name: str, n: int) -> dict:
    m = max(n - 2, 0)
    far = (n - 2) * (n - 3) // 2 if n >= 3 else 0
    sizes = {"R1": m, "R2": far, "R3": m, "R4": far, "R5": n - 1,
             "R6": 2 * far, "R7": m, "R8": m, "R9": m}
    if name == "WB":
        del sizes["R9"]
    if name == "S":
        sizes = {k: sizes[k] for k in ("R3", "R4", "R5")}
    return sizes


def presentation(name: str, n: int) -> PresentationTable:
    """Relators of UVB_n (R1-R9), WB_n (R1-R8) or S_n on the rho's (R3-R5)."""
    name = name.upper()
    if name not in ("UVB", "WB", "S"):
        raise UvbError(f"unknown presentation {name!r}")
    if n < 2:
        raise UvbError("n must be at least 2")
    s_, r_ = sigma, rho
    fam: dict = {f"R{k}": [] for k in range(1, 10)}
    for i in range(1, n - 1):
        fam["R1"].append(((s_(i), s_(i + 1), s_(i)), (s_(i + 1), s_(i), s_(i + 1))))
        fam["R3"].append(((r_(i), r_(i + 1), r_(i)), (r_(i + 1), r_(i), r_(i + 1))))
        fam["R7"].append(((s_(i), r_(i + 1), r_(i)), (r_(i + 1), r_(i), s_(i + 1))))
        fam["R8"].append(((r_(i), s_(i + 1), s_(i)), (s_(i + 1), s_(i), r_(i + 1))))
        fam["R9"].append(((r_(i + 1), s_(i), s_(i + 1)), (s_(i), s_(i + 1), r_(i))))
    for i in range(1, n):
        for j in range(i + 2, n):
            fam["R2"].append(((s_(i), s_(j)), (s_(j), s_(i))))
            fam["R4"].append(((r_(i), r_(j)), (r_(j), r_(i))))
    for i in range(1, n):
        fam["R5"].append(((r_(i, 2),), ()))
    for i in range(1, n):
        for j in range(1, n):
            if abs(i - j) > 1:
                fam["R6"].append(((s_(i), r_(j)), (r_(j), s_(i))))
    keep = list(family_sizes(name, n))
    rels = []
    for f in keep:
        for k, (lhs, rhs) in enumerate(fam[f], 1):
            rels.append(Relator(f"{f}.{k}", lhs, rhs))
    gens = [rho(i) for i in range(1, n)]
    if name != "S":
        gens += [sigma(i) for i in range(1, n)]
    table = PresentationTable(name, n, tuple(rels), tuple(g.base for g in gens))
    counts = {f: sum(1 for r in rels if r.rid.split(".")[0] == f) for f in keep}
    assert counts == family_sizes(name, n), counts
    return table


# ---------------------------------------------------------------------------
# relator verification

OK, FAIL, UNKNOWN = "OK", "FAIL", "UNKNOWN"


@dataclass
class RelatorReport:
    presentation: str
    n: int
    engine: str
    results: list          # [(rid, status)]

    def summary(self) -> dict:
        out = {OK: 0, FAIL: 0, UNKNOWN: 0}
        for _, st in self.results:
            out[st] += 1
        return out

    def all_ok(self) -> bool:
        return all(st == OK for _, st in self.results)

    def text(self) -> str:
        lines = [f"{rid} {st}" for rid, st in self.results]
        sm = self.summary()
        lines.append(f"summary OK={sm[OK]} FAIL={sm[FAIL]} UNKNOWN={sm[UNKNOWN]}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {"presentation": self.presentation, "n": self.n, "engine": self.engine,
                "relators": [{"id": rid, "status": st} for rid, st in self.results],
                "summary": self.summary()}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def evaluate(word, n: int, images: dict | None = None) -> UvbElement:
    """Normal form of a sigma/rho word, optionally after substituting images.

    ``images`` maps generator bases ``("s", (i,))``/``("r", (i,))`` to UvbElements.
    """
    if images is None:
        return rewrite_to_normal_form(word, n)
    out = uvb_identity(n)
    for x in word:
        img = images[x.base]
        if x.exp < 0:
            img = uvb_invert(img)
        for _ in range(abs(x.exp)):
            out = uvb_multiply(out, img)
    return out


def substitute(word, images: dict) -> list[Letter]:
    """Letter-level substitution; ``images`` maps bases to letter lists."""
    out: list[Letter] = []
    for x in word:
        img = list(images[x.base])
        if x.exp < 0:
            img = [y.inverse() for y in reversed(img)]
        out.extend(img * abs(x.exp))
    return out


def verify_presentation(table: PresentationTable, engine: str = "normal_form",
                        images: dict | None = None, *, budget: int = 4000) -> RelatorReport:
    """Check every relator (or its image under ``images``) is trivial.

    ``normal_form`` decides equality in UVB_n and is only accepted for the UVB
    table.  ``syntactic`` rewrites symbolically with the table's own relators
    and answers OK only on a derivation of the empty word; FAIL is reported
    only when the image is nontrivial in UVB_n, which is a quotient of both
    WB_n and UVB_n.  Anything else is UNKNOWN.
    """
    n = table.n
    results = []
    if engine == "normal_form":
        if table.name != "UVB":
            raise EngineMismatch(f"normal_form engine needs UVB, got {table.name}")
        for r in table.relators:
            g = evaluate(r.word, n, images)
            results.append((r.rid, OK if g.is_identity() else FAIL))
    elif engine == "syntactic":
        rw = SymbolicRewriter(table)
        for r in table.relators:
            w = r.word if images is None else substitute(r.word, images)
            if not rewrite_to_normal_form(w, n).is_identity():
                status = FAIL
            elif rw.derives_identity(w, budget=budget):
                status = OK
            else:
                status = UNKNOWN
            results.append((r.rid, status))
    else:
        raise UvbError(f"unknown engine {engine!r}")
    return RelatorReport(table.name, n, engine, results)


def check_word(text: str, n: int) -> bool:
    """True iff the word (relator form ``lhs = rhs`` allowed) is trivial in UVB_n."""
    if "=" in text:
        lhs, rhs = text.split("=")
        return uvb_equal(nf(lhs.strip(), n), nf(rhs.strip(), n))
    return nf(text, n).is_identity()


class SymbolicRewriter:
    """Best-first search for a derivation of the empty word.

    Moves: free reduction, replacing any maximal run of rho letters with a
    fixed word for its permutation (sound because R3-R5 present S_n), and
    applying rules ``u -> v`` where ``u v^-1`` is a cyclic rotation of a
    relator or its inverse.  Words may grow at most ``slack`` letters past
    the starting length.  The word is handled
    cyclically, since a conjugate of a word is trivial iff the word is.
    """

    def __init__(self, table: PresentationTable):
        self.n = table.n
        self.rules: dict = {}
        for r in table.relators:
            base = self._units(r.word)
            for rel in (base, self._inv(base)):
                m = len(rel)
                for t in range(m):
                    rot = rel[t:] + rel[:t]
                    for k in range(1, m + 1):
                        u, rest = rot[:k], rot[k:]
                        v = self._inv(rest)
                        self.rules.setdefault(u[0], set()).add((u, v))
        for key in self.rules:
            self.rules[key] = sorted(self.rules[key])

    @staticmethod
    def _units(word) -> tuple:
        out = []
        for x in word:
            if x.kind == RHO:
                out.extend([(x.base, 1)] * (abs(x.exp) % 2))
            else:
                out.extend([(x.base, 1 if x.exp > 0 else -1)] * abs(x.exp))
        return tuple(out)

    @staticmethod
    def _inv(w: tuple) -> tuple:
        return tuple((b, 1 if b[0] == RHO else -e) for b, e in reversed(w))

    def _perm_word(self, run) -> list:
        perm = P.identity_perm(self.n)
        for i in run:
            perm = P.compose(perm, P.s(i, self.n))
        return [((RHO, (i,)), 1) for i in P.adjacent_word(perm)]

    def _step(self, w: tuple) -> tuple:
        # free reduction with rho^2 = 1, cyclically
        st: list = []
        for b, e in w:
            if st and st[-1][0] == b and (b[0] == RHO or st[-1][1] == -e):
                st.pop()
            else:
                st.append((b, e))
        while len(st) >= 2 and st[0][0] == st[-1][0] and (
                st[0][0][0] == RHO or st[0][1] == -st[-1][1]):
            st = st[1:-1]
        sig = [k for k, (b, _) in enumerate(st) if b[0] == SIGMA]
        if not sig:
            return tuple(self._perm_word(b[1][0] for b, _ in st))
        # start at a sigma letter so no rho run straddles the seam
        st = st[sig[0]:] + st[:sig[0]]
        out: list = []
        run: list = []
        for b, e in st:
            if b[0] == RHO:
                run.append(b[1][0])
            else:
                out.extend(self._perm_word(run))
                run.clear()
                out.append((b, e))
        out.extend(self._perm_word(run))
        return tuple(out)

    def _normalize(self, w: tuple) -> tuple:
        w = tuple(w)
        while True:
            nxt = self._step(w)
            if nxt == w:
                return w
            w = nxt

    def _key(self, w: tuple) -> tuple:
        if not w:
            return ()
        return min(w[t:] + w[:t] for t in range(len(w)))

    def derives_identity(self, word, budget: int = 4000, slack: int = 4) -> bool:
        start = self._normalize(self._units(word))
        if not start:
            return True
        cap = len(start) + slack
        seen = {self._key(start)}
        heap = [(len(start), start)]
        expanded = 0
        while heap and expanded < budget:
            _, w = heapq.heappop(heap)
            expanded += 1
            m = len(w)
            for t in range(m):
                rot = w[t:] + w[:t]
                for u, v in self.rules.get(rot[0], ()):
                    if rot[:len(u)] == u:
                        nxt = self._normalize(v + rot[len(u):])
                        if not nxt:
                            return True
                        key = self._key(nxt)
                        if len(nxt) <= cap and key not in seen:
                            seen.add(key)
                            heapq.heappush(heap, (len(nxt), nxt))
        return False


# ---------------------------------------------------------------------------

def commutes_with_all_pure_generators(g: UvbElement) -> bool:
    n = g.n
    for i, j in permutations(range(1, n + 1), 2):
        x = embed_lambda(i, j, n)
        if not uvb_equal(uvb_multiply(g, x), uvb_multiply(x, g)):
            return False
    return True

