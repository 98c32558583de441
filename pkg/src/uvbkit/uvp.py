"""Normal forms in UVP_n, the direct product of n(n-1)/2 free groups of rank 2.

Factor ``(i, j)`` with ``i < j`` holds a reduced word over ``A = l_{i,j}``
and ``B = l_{j,i}``.  Missing factors are trivial, so two elements are equal
exactly when their factor tables are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

from .words import (
    F2,
    LAMBDA,
    EqualIndices,
    IndexOutOfRange,
    Letter,
    ReducedWord,
    commutator,
    parse_word,
    subgroup_membership,
)

A, B = "A", "B"


class UvpError(ValueError):
    code = "UvpError"


def ordered_pairs(n: int) -> list[tuple[int, int]]:
    """All (i, j) with i != j, lexicographic; the abelianization basis order."""
    return list(permutations(range(1, n + 1), 2))


def factor_keys(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(1, n + 1), 2))


def _key(i: int, j: int):
    """Factor key and letter for l_{i,j}."""
    return ((i, j), A) if i < j else ((j, i), B)


@dataclass(frozen=True)
class UvpElement:
    n: int
    factors: tuple = ()   # sorted ((i, j), ReducedWord) with nonempty words

    @classmethod
    def from_dict(cls, n: int, d: dict) -> "UvpElement":
        return cls(n, tuple(sorted((k, w) for k, w in d.items() if w.syllables)))

    def as_dict(self) -> dict:
        return dict(self.factors)

    def factor(self, i: int, j: int) -> ReducedWord:
        return self.as_dict().get((min(i, j), max(i, j)), ReducedWord((), F2))

    def is_identity(self) -> bool:
        return not self.factors

    def __mul__(self, other: "UvpElement") -> "UvpElement":
        return uvp_multiply(self, other)

    def letters(self) -> list[Letter]:
        """Lambda letters in canonical order (ascending factor, then word order)."""
        out = []
        for (i, j), w in self.factors:
            for b, e in w.syllables:
                out.append(Letter(LAMBDA, (i, j) if b == A else (j, i), e))
        return out

    def letter_count(self) -> int:
        return sum(len(w) for _, w in self.factors)

    def __str__(self) -> str:
        return " ".join(x.token() for x in self.letters()) or "1"


def uvp_identity(n: int) -> UvpElement:
    return UvpElement(n)


def uvp_generator(i: int, j: int, n: int, exp: int = 1) -> UvpElement:
    if i == j:
        raise EqualIndices(f"l{i},{j}")
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexOutOfRange(f"l{i},{j} outside 1..{n}")
    key, letter = _key(i, j)
    return UvpElement.from_dict(n, {key: ReducedWord.gen(letter, exp)})


def _same_n(x: UvpElement, y: UvpElement) -> None:
    if x.n != y.n:
        raise UvpError(f"mismatched n: {x.n} vs {y.n}")


def uvp_multiply(x: UvpElement, y: UvpElement) -> UvpElement:
    _same_n(x, y)
    if not y.factors:
        return x
    if not x.factors:
        return y
    d = dict(x.factors)
    for k, w in y.factors:
        d[k] = d[k] * w if k in d else w
    return UvpElement.from_dict(x.n, d)


def uvp_invert(x: UvpElement) -> UvpElement:
    return UvpElement(x.n, tuple((k, w.inverse()) for k, w in x.factors))


def uvp_equal(x: UvpElement, y: UvpElement) -> bool:
    _same_n(x, y)
    return x.factors == y.factors


def uvp_commute(x: UvpElement, y: UvpElement) -> bool:
    return uvp_equal(uvp_multiply(x, y), uvp_multiply(y, x))


def uvp_from_letters(letters, n: int) -> UvpElement:
    out = uvp_identity(n)
    for x in letters:
        if x.kind != LAMBDA:
            raise UvpError(f"non-lambda letter {x.token()} in a UVP word")
        x.validate(n)
        out = uvp_multiply(out, uvp_generator(x.idx[0], x.idx[1], n, x.exp))
    return out


def parse_uvp(text: str, n: int) -> UvpElement:
    return uvp_from_letters(parse_word(text, n), n)


def relabel(x: UvpElement, perm) -> UvpElement:
    """Send every l_{i,j} to l_{p(i),p(j)}."""
    if perm.n != x.n:
        raise UvpError(f"degree mismatch: {perm.n} vs {x.n}")
    d = {}
    for (i, j), w in x.factors:
        a, b = perm(i), perm(j)
        if a < b:
            d[(a, b)] = w
        else:
            d[(b, a)] = w.map_bases(lambda t: B if t == A else A)
    return UvpElement.from_dict(x.n, d)


# ---------------------------------------------------------------------------
# abelianization

@dataclass(frozen=True)
class AbelianVector:
    n: int
    entries: tuple   # aligned with ordered_pairs(n)

    def __getitem__(self, pair) -> int:
        return self.entries[ordered_pairs(self.n).index(tuple(pair))]

    def __add__(self, other: "AbelianVector") -> "AbelianVector":
        return AbelianVector(self.n, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def as_dict(self) -> dict:
        return dict(zip(ordered_pairs(self.n), self.entries))


def abelianize_uvp(x: UvpElement) -> AbelianVector:
    counts = dict.fromkeys(ordered_pairs(x.n), 0)
    for (i, j), w in x.factors:
        counts[(i, j)] += w.exponent_sum(A)
        counts[(j, i)] += w.exponent_sum(B)
    return AbelianVector(x.n, tuple(counts.values()))


# ---------------------------------------------------------------------------
# endomorphisms given by generator-image tables

class UncheckedSpec(UvpError):
    code = "UncheckedSpec"


def apply_uvp_endo(spec, x: UvpElement, *, skip_check: bool = False) -> UvpElement:
    """Homomorphic extension of ``spec.images`` (ordered pair -> UvpElement)."""
    if not (spec.checked or skip_check):
        raise UncheckedSpec("spec has not passed check_uvp_endo")
    out = uvp_identity(spec.n)
    for letter in x.letters():
        img = spec.images[letter.idx]
        if letter.exp < 0:
            img = uvp_invert(img)
        for _ in range(abs(letter.exp)):
            out = uvp_multiply(out, img)
    return out


def check_uvp_endo(spec) -> bool:
    """True iff the images of every commuting pair of generators commute."""
    gens = ordered_pairs(spec.n)
    for a, b in combinations(gens, 2):
        if a == (b[1], b[0]):
            continue
        if not uvp_commute(spec.images[a], spec.images[b]):
            return False
    return True


def f2_endo_injective(image_a: ReducedWord, image_b: ReducedWord) -> bool:
    """A -> image_a, B -> image_b is injective iff the images do not commute.

    A two-generated subgroup of a free group is free of rank <= 2, and F_2 is
    Hopfian, so the map onto its image is an isomorphism exactly when the
    image has rank 2, i.e. when the images do not commute.
    """
    return not commutator(image_a, image_b).is_identity()


def f2_endo_surjective(image_a: ReducedWord, image_b: ReducedWord) -> bool:
    gens = [image_a, image_b]
    return (subgroup_membership(gens, ReducedWord.gen(A))
            and subgroup_membership(gens, ReducedWord.gen(B)))
