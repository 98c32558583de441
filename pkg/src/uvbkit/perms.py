"""Symmetric group arithmetic in one-line notation, plus the exotic S_6 automorphism.

Convention: ``compose(p, q)(x) = p(q(x))``.  Degrees are explicit and never
inferred across values.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache


class PermError(ValueError):
    code = "PermError"


class DegreeMismatch(PermError):
    code = "DegreeMismatch"


@dataclass(frozen=True, order=True)
class Permutation:
    """Position ``k-1`` of ``images`` holds the image of ``k``."""

    images: tuple

    def __post_init__(self):
        imgs = tuple(self.images)
        object.__setattr__(self, "images", imgs)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise PermError(f"not a permutation: {list(imgs)}")

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def is_identity(self) -> bool:
        return all(v == k for k, v in enumerate(self.images, 1))

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.images)) + "]"


def identity_perm(n: int) -> Permutation:
    return Permutation(tuple(range(1, n + 1)))


def compose(p: Permutation, q: Permutation) -> Permutation:
    if p.n != q.n:
        raise DegreeMismatch(f"{p.n} vs {q.n}")
    pi = p.images
    return Permutation(tuple(pi[x - 1] for x in q.images))


def inverse(p: Permutation) -> Permutation:
    out = [0] * p.n
    for k, v in enumerate(p.images, 1):
        out[v - 1] = k
    return Permutation(tuple(out))


def transposition(i: int, j: int, n: int) -> Permutation:
    if not (1 <= i <= n and 1 <= j <= n) or i == j:
        raise PermError(f"bad transposition ({i} {j}) in degree {n}")
    imgs = list(range(1, n + 1))
    imgs[i - 1], imgs[j - 1] = j, i
    return Permutation(tuple(imgs))


def s(i: int, n: int) -> Permutation:
    """Adjacent transposition ``(i, i+1)``."""
    return transposition(i, i + 1, n)


def cycles(p: Permutation) -> list[tuple]:
    seen = set()
    out = []
    for start in range(1, p.n + 1):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        x = p(start)
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = p(x)
        out.append(tuple(cyc))
    return out


def conjugacy_type(p: Permutation) -> tuple:
    return tuple(sorted((len(c) for c in cycles(p)), reverse=True))


def parity(p: Permutation) -> int:
    return sum(len(c) - 1 for c in cycles(p)) % 2


def order(p: Permutation) -> int:
    from math import lcm

    return lcm(*(len(c) for c in cycles(p)))


def all_perms(n: int) -> list[Permutation]:
    return [Permutation(t) for t in itertools.permutations(range(1, n + 1))]


def centralizer(generators, n: int) -> list[Permutation]:
    """All g in S_n commuting with every listed permutation (exhaustive, n <= 10)."""
    gens = list(generators)
    for h in gens:
        if h.n != n:
            raise DegreeMismatch(f"{h.n} vs {n}")
    return [g for g in all_perms(n) if all(compose(g, h) == compose(h, g) for h in gens)]


def adjacent_word(p: Permutation) -> list[int]:
    """Indices i_1..i_k with ``p = s_{i_1} o ... o s_{i_k}`` (bubble sort)."""
    # sort p's one-line form by adjacent swaps on positions: p o s_i swaps entries i, i+1
    arr = list(p.images)
    swaps = []
    changed = True
    while changed:
        changed = False
        for i in range(len(arr) - 1):
            if arr[i] > arr[i + 1]:
                arr[i], arr[i + 1] = arr[i + 1], arr[i]
                swaps.append(i + 1)
                changed = True
    # p o s_{a1} o ... o s_{ak} = id  =>  p = s_{ak} o ... o s_{a1}
    return swaps[::-1]


def parse_perm(text: str, n: int | None = None) -> Permutation:
    """Parse ``[2,1,3]`` (one-line) or ``(1 2)(3 4)`` (cycles; needs ``n``)."""
    text = text.strip()
    if text.startswith("["):
        body = text.strip("[]").strip()
        imgs = tuple(int(x) for x in body.split(",")) if body else ()
        p = Permutation(imgs)
        if n is not None and p.n != n:
            raise DegreeMismatch(f"expected degree {n}, got {p.n}")
        return p
    if n is None:
        raise PermError("cycle notation requires an explicit degree")
    imgs = list(range(1, n + 1))
    if text in ("", "()"):
        return Permutation(tuple(imgs))
    groups = re.findall(r"\(([^()]*)\)", text)
    if "".join(f"({g})" for g in groups).replace(" ", "") != text.replace(" ", ""):
        raise PermError(f"malformed cycle notation {text!r}")
    p = identity_perm(n)
    for g in groups:
        pts = [int(x) for x in g.replace(",", " ").split()]
        if len(set(pts)) != len(pts) or not all(1 <= x <= n for x in pts):
            raise PermError(f"bad cycle ({g})")
        c = list(range(1, n + 1))
        for a, b in zip(pts, pts[1:] + pts[:1]):
            c[a - 1] = b
        p = compose(p, Permutation(tuple(c)))
    return p


# ---------------------------------------------------------------------------
# exotic automorphism of S_6

@dataclass(frozen=True)
class S6OuterWitness:
    images: tuple                      # images of s_1..s_5
    checks: dict = field(default_factory=dict, compare=False)

    def apply(self, p: Permutation) -> Permutation:
        """Extend ``s_i -> images[i-1]`` homomorphically to all of S_6."""
        out = identity_perm(6)
        for i in adjacent_word(p):
            out = compose(out, self.images[i - 1])
        return out

    def all_ok(self) -> bool:
        return all(self.checks.values())


def _coxeter_ok(imgs, n) -> bool:
    e = identity_perm(n)
    for a in range(len(imgs)):
        if compose(imgs[a], imgs[a]) != e:
            return False
        for b in range(a):
            ab = compose(imgs[a], imgs[b])
            k = 3 if a - b == 1 else 2
            acc = e
            for _ in range(k):
                acc = compose(acc, ab)
            if acc != e:
                return False
    return True


def generated_order(gens, n: int) -> int:
    """Order of the subgroup generated, by orbit enumeration from the identity."""
    e = identity_perm(n)
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return len(seen)


@lru_cache(maxsize=None)
def find_outer_s6() -> S6OuterWitness:
    """Backtrack over triple-transposition images of s_1..s_5."""
    n = 6
    candidates = sorted(p for p in all_perms(n) if conjugacy_type(p) == (2, 2, 2))
    e = identity_perm(n)

    def extend(prefix):
        if len(prefix) == 5:
            if generated_order(prefix, n) == 720:
                return prefix
            return None
        for c in candidates:
            trial = prefix + [c]
            last = len(trial) - 1
            ok = True
            for b in range(last):
                ab = compose(c, trial[b])
                k = 3 if last - b == 1 else 2
                acc = e
                for _ in range(k):
                    acc = compose(acc, ab)
                if acc != e:
                    ok = False
                    break
            if ok:
                found = extend(trial)
                if found:
                    return found
        return None

    imgs = extend([])
    if imgs is None:
        raise RuntimeError("S6 outer automorphism search exhausted")
    imgs = tuple(imgs)
    witness = S6OuterWitness(imgs)
    conj_hits = [g for g in all_perms(n)
                 if conjugacy_type(compose(compose(g, s(1, n)), inverse(g))) == (2, 2, 2)]
    checks = {
        "involutions": all(compose(x, x) == e for x in imgs),
        "relations": _coxeter_ok(imgs, n),
        "cycle_type_222": all(conjugacy_type(x) == (2, 2, 2) for x in imgs),
        "generates_S6": generated_order(imgs, n) == 720,
        "not_inner": not conj_hits,
    }
    return S6OuterWitness(imgs, checks)
