"""Homomorphism census from UVB_n (and friends) into finite groups.

Search is a depth-first assignment of generator images in the order
rho_1..rho_{n-1}, sigma_1..sigma_{n-1}; a relator is tested as soon as all
of its generators carry an image.  Output order is lexicographic in image
ids, so serial and sharded runs agree byte for byte.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from . import perms as P
from . import uvb as V
from .words import RHO, SIGMA

DEFAULT_BUDGET = 50_000_000


class CensusError(ValueError):
    code = "CensusError"


class BudgetExceeded(CensusError):
    code = "BudgetExceeded"


class NotAGroup(CensusError):
    code = "NotAGroup"


def default_budget() -> int:
    return int(os.environ.get("UVBKIT_BUDGET", DEFAULT_BUDGET))


# ---------------------------------------------------------------------------
# finite group tables

@dataclass
class FiniteGroupTable:
    name: str
    mul: list            # mul[a][b] = id of a*b, rows are tuples
    labels: list
    identity: int = 0
    inv: list = field(default_factory=list)

    def __post_init__(self):
        if not self.inv:
            self.inv = [row.index(self.identity) for row in self.mul]

    @property
    def order(self) -> int:
        return len(self.mul)

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv[a], -k
        out = self.identity
        for _ in range(k):
            out = self.mul[out][a]
        return out

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul[x][a]
            k += 1
        return k

    def conj(self, c: int, a: int) -> int:
        """c a c^-1."""
        return self.mul[self.mul[c][a]][self.inv[c]]

    def closure(self, gens) -> set:
        seen = {self.identity}
        frontier = [self.identity]
        gens = sorted(set(gens))
        while frontier:
            nxt = []
            for x in frontier:
                row = self.mul[x]
                for g in gens:
                    y = row[g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return seen

    def commute(self, a: int, b: int) -> bool:
        return self.mul[a][b] == self.mul[b][a]

    def relabeled(self, perm: list) -> "FiniteGroupTable":
        """Same group with element ``k`` renamed ``perm[k]``; ``perm[0]`` must be 0."""
        if perm[0] != 0:
            raise CensusError("relabeling must fix the identity")
        N = self.order
        mul = [[0] * N for _ in range(N)]
        labels = [None] * N
        for a in range(N):
            labels[perm[a]] = self.labels[a]
            for b in range(N):
                mul[perm[a]][perm[b]] = perm[self.mul[a][b]]
        return FiniteGroupTable(self.name + "'", [tuple(r) for r in mul], labels)


def validate_table(mul) -> None:
    """Raise NotAGroup unless ``mul`` is a group table with identity 0."""
    T = np.asarray(mul, dtype=np.int64)
    N = T.shape[0]
    if T.ndim != 2 or T.shape != (N, N):
        raise NotAGroup("table is not square")
    if T.min() < 0 or T.max() >= N:
        raise NotAGroup("entry out of range")
    ids = np.arange(N)
    if not (np.array_equal(T[0], ids) and np.array_equal(T[:, 0], ids)):
        raise NotAGroup("element 0 is not a two-sided identity")
    for a in range(N):
        if 0 not in T[a] or len(set(T[a].tolist())) != N:
            raise NotAGroup(f"row {a} is not a permutation")
    inv = np.argmax(T == 0, axis=1)
    if not np.array_equal(T[ids, inv], np.zeros(N, dtype=np.int64)) or not np.array_equal(
            T[inv, ids], np.zeros(N, dtype=np.int64)):
        raise NotAGroup("missing two-sided inverses")
    if N <= 256:
        for a in range(N):
            left = T[T[a]]            # (a b) c  for all b, c
            right = T[a][T]           # a (b c)
            if not np.array_equal(left, right):
                raise NotAGroup(f"associativity fails with first factor {a}")


def _table(name, mul, labels) -> FiniteGroupTable:
    return FiniteGroupTable(name, [tuple(r) for r in mul], list(labels))


def symmetric_group_table(m: int) -> FiniteGroupTable:
    elems = P.all_perms(m)          # lexicographic; identity first
    index = {p: k for k, p in enumerate(elems)}
    mul = [[index[P.compose(a, b)] for b in elems] for a in elems]
    return _table(f"S{m}", mul, [str(p) for p in elems])


def cyclic_table(m: int) -> FiniteGroupTable:
    if m < 1:
        raise CensusError("cyclic group order must be positive")
    mul = [[(a + b) % m for b in range(m)] for a in range(m)]
    return _table(f"Z{m}", mul, [str(k) for k in range(m)])


def product_table(G: FiniteGroupTable, H: FiniteGroupTable) -> FiniteGroupTable:
    NH = H.order
    N = G.order * NH
    mul = [[0] * N for _ in range(N)]
    for a in range(N):
        ga, ha = divmod(a, NH)
        for b in range(N):
            gb, hb = divmod(b, NH)
            mul[a][b] = G.mul[ga][gb] * NH + H.mul[ha][hb]
    labels = [f"({G.labels[k // NH]},{H.labels[k % NH]})" for k in range(N)]
    return _table(f"{G.name}x{H.name}", mul, labels)


def permutation_group_table(gens, n: int, name: str = "G") -> FiniteGroupTable:
    """Table of the subgroup of S_n generated by ``gens`` (identity first)."""
    e = P.identity_perm(n)
    elems = [e]
    seen = {e}
    k = 0
    while k < len(elems):
        for g in gens:
            y = P.compose(elems[k], g)
            if y not in seen:
                seen.add(y)
                elems.append(y)
        k += 1
    elems = [e] + sorted(elems[1:])
    index = {p: i for i, p in enumerate(elems)}
    mul = [[index[P.compose(a, b)] for b in elems] for a in elems]
    return _table(name, mul, [str(p) for p in elems])


def load_table(path) -> FiniteGroupTable:
    """Read ``N`` then N rows of N space separated ids; identity is id 0."""
    with open(path) as fh:
        lines = [ln.split() for ln in fh if ln.strip()]
    try:
        N = int(lines[0][0])
        mul = [[int(x) for x in row] for row in lines[1:]]
    except (ValueError, IndexError) as exc:
        raise NotAGroup(f"unreadable table: {exc}") from None
    if len(mul) != N or any(len(r) != N for r in mul):
        raise NotAGroup(f"expected {N} rows of {N} entries")
    validate_table(mul)
    return _table(os.path.basename(str(path)), mul, [str(k) for k in range(N)])


def parse_target(spec: str) -> FiniteGroupTable:
    """``s4``, ``z6``, ``s3xz2`` (direct product) or a table file path."""
    parts = spec.lower().split("x") if not os.path.exists(spec) else [spec]
    tables = []
    for part in parts:
        if os.path.exists(part):
            tables.append(load_table(part))
        elif part[:1] in ("s", "z") and part[1:].isdigit():
            m = int(part[1:])
            tables.append(symmetric_group_table(m) if part[0] == "s" else cyclic_table(m))
        else:
            raise CensusError(f"unknown target {spec!r}")
    out = tables[0]
    for t in tables[1:]:
        out = product_table(out, t)
    return out


# ---------------------------------------------------------------------------
# enumeration

@dataclass(frozen=True)
class HomImage:
    n: int
    gens: tuple       # generator bases in assignment order
    images: tuple     # element ids aligned with gens

    def image_of(self, base) -> int:
        return self.images[self.gens.index(base)]

    def rho_images(self) -> list:
        return [self.image_of((RHO, (i,))) for i in range(1, self.n)]

    def sigma_images(self) -> list:
        return [self.image_of((SIGMA, (i,))) for i in range(1, self.n)
                if (SIGMA, (i,)) in self.gens]

    def labelled(self, target: FiniteGroupTable) -> dict:
        return {_tok(b): target.labels[x] for b, x in zip(self.gens, self.images)}


def _tok(base) -> str:
    return f"{base[0]}{base[1][0]}"


def _compile(table: V.PresentationTable):
    gens = list(table.generators)
    pos = {b: k for k, b in enumerate(gens)}
    checks: list = [[] for _ in gens]
    for r in table.relators:
        word = [(pos[x.base], x.exp) for x in r.word]
        ready = max(p for p, _ in word)
        checks[ready].append((r.rid, word))
    return gens, checks


def _eval(word, imgs, G: FiniteGroupTable) -> int:
    mul, inv = G.mul, G.inv
    x = G.identity
    for p, e in word:
        g = imgs[p]
        if e < 0:
            g, e = inv[g], -e
        for _ in range(e):
            x = mul[x][g]
    return x


def _dfs(gens, checks, G, prefix, budget):
    """All completions of ``prefix``; returns (results, nodes)."""
    depth_total = len(gens)
    involutions = [a for a in range(G.order) if G.mul[a][a] == G.identity]
    everything = list(range(G.order))
    results = []
    nodes = 0
    imgs = list(prefix) + [0] * (depth_total - len(prefix))
    ident = G.identity

    for d in range(len(prefix)):
        for _, word in checks[d]:
            if _eval(word, imgs, G) != ident:
                return results, nodes

    def rec(d):
        nonlocal nodes
        if d == depth_total:
            results.append(tuple(imgs))
            return
        cands = involutions if gens[d][0] == RHO else everything
        for a in cands:
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(f"node budget {budget} exceeded")
            imgs[d] = a
            ok = True
            for _, word in checks[d]:
                if _eval(word, imgs, G) != ident:
                    ok = False
                    break
            if ok:
                rec(d + 1)
        imgs[d] = 0

    rec(len(prefix))
    return results, nodes


def _shard(args):
    gens, checks, G, prefix, budget = args
    return _dfs(gens, checks, G, prefix, budget)


@dataclass
class CensusResult:
    presentation: str
    n: int
    target: FiniteGroupTable
    homs: list
    node_count: int
    wall_time: float = 0.0


def enumerate_homs(table: V.PresentationTable, target: FiniteGroupTable, *,
                   budget: int | None = None, workers: int = 1,
                   fixed: dict | None = None) -> CensusResult:
    """Every relator-satisfying assignment of generator images.

    ``fixed`` pins images for a leading block of generators (used by the
    staged Theorem A verifier).  Exceeding ``budget`` nodes raises; partial
    results are never returned.
    """
    budget = default_budget() if budget is None else budget
    if budget <= 0:
        raise CensusError("budget must be positive")
    t0 = time.perf_counter()
    gens, checks = _compile(table)
    prefix: list = []
    if fixed:
        for b in gens:
            if b not in fixed:
                break
            prefix.append(fixed[b])
    if workers > 1 and len(prefix) < len(gens):
        d = len(prefix)
        cands = [a for a in range(target.order)
                 if gens[d][0] != RHO or target.mul[a][a] == target.identity]
        jobs = [(gens, checks, target, prefix + [a], budget) for a in cands]
        homs, nodes = [], len(cands)
        with ProcessPoolExecutor(max_workers=workers) as ex:
            for res, cnt in ex.map(_shard, jobs, chunksize=max(1, len(jobs) // (4 * workers))):
                homs.extend(res)
                nodes += cnt
        if nodes > budget:
            raise BudgetExceeded(f"node budget {budget} exceeded")
    else:
        homs, nodes = _dfs(gens, checks, target, prefix, budget)
    out = [HomImage(table.n, tuple(gens), h) for h in homs]
    return CensusResult(table.name, table.n, target, out, nodes, time.perf_counter() - t0)


def naive_homs(table: V.PresentationTable, target: FiniteGroupTable) -> list:
    """Full product scan; the oracle for :func:`enumerate_homs`."""
    from itertools import product

    gens = list(table.generators)
    pos = {b: k for k, b in enumerate(gens)}
    words = [[(pos[x.base], x.exp) for x in r.word] for r in table.relators]
    out = []
    for imgs in product(range(target.order), repeat=len(gens)):
        if all(_eval(w, imgs, target) == target.identity for w in words):
            out.append(HomImage(table.n, tuple(gens), imgs))
    return out


# ---------------------------------------------------------------------------
# conjugation classes

def canonical_form(images: tuple, G: FiniteGroupTable) -> tuple:
    """Least image tuple over simultaneous conjugation by every element of G."""
    best = images
    mul, inv = G.mul, G.inv
    for c in range(G.order):
        row, ci = mul[c], inv[c]
        cand = tuple(mul[row[a]][ci] for a in images)
        if cand < best:
            best = cand
    return best


@dataclass
class HomClass:
    representative: HomImage
    size: int
    members: list = field(default_factory=list, repr=False)
    bucket: str = ""
    evidence: dict = field(default_factory=dict)


def dedup_conjugation(homs: list, G: FiniteGroupTable, workers: int = 1) -> list:
    if not homs:
        return []
    if workers > 1 and len(homs) > 64:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            canon = list(ex.map(_canon_job, [(h.images, G) for h in homs], chunksize=64))
    else:
        canon = [canonical_form(h.images, G) for h in homs]
    groups: dict = {}
    for h, c in zip(homs, canon):
        groups.setdefault(c, []).append(h)
    h0 = homs[0]
    return [HomClass(HomImage(h0.n, h0.gens, c), len(ms), ms) for c, ms in sorted(groups.items())]


def _canon_job(args):
    return canonical_form(*args)


# ---------------------------------------------------------------------------
# Theorem A

PHI_CONJUGATE = "PHI_CONJUGATE"
CYCLIC_ORDER_LE_2 = "CYCLIC_ORDER_LE_2"
ABELIAN = "ABELIAN"
V6_PHI_CONJUGATE = "V6_PHI_CONJUGATE"
OTHER = "OTHER"


def _perm_id(G: FiniteGroupTable, p: P.Permutation) -> int:
    return G.labels.index(str(p))


def phi_hom(n: int, G: FiniteGroupTable, gens: tuple, twist=None) -> HomImage:
    """phi (or twist o phi) as a HomImage into the S_n table ``G``."""
    imgs = []
    for b in gens:
        p = P.s(b[1][0], n)
        if twist is not None:
            p = twist(p)
        imgs.append(_perm_id(G, p))
    return HomImage(n, tuple(gens), tuple(imgs))


def image_is_abelian(imgs, G) -> bool:
    gens = sorted(set(imgs))
    return all(G.commute(a, b) for a in gens for b in gens)


def classify_theorem_A(cls: HomImage, n: int, G: FiniteGroupTable) -> str:
    canon = canonical_form(cls.images, G)
    if canon == canonical_form(phi_hom(n, G, cls.gens).images, G):
        return PHI_CONJUGATE
    if n == 6:
        v6 = P.find_outer_s6()
        if canon == canonical_form(phi_hom(n, G, cls.gens, v6.apply).images, G):
            return V6_PHI_CONJUGATE
    if len(G.closure(cls.images)) == 2:
        return CYCLIC_ORDER_LE_2
    if image_is_abelian(cls.images, G):
        return ABELIAN
    return OTHER


@dataclass
class TheoremAReport:
    n: int
    stages: dict
    classes: list
    node_count: int
    wall_time: float = 0.0

    def summary(self) -> dict:
        out: dict = {}
        for c in self.classes:
            out[c.bucket] = out.get(c.bucket, 0) + 1
        return dict(sorted(out.items()))

    @property
    def deviation(self) -> bool:
        return OTHER in self.summary()

    def to_json(self, target: FiniteGroupTable, timing: bool = False) -> dict:
        return {
            "meta": {"n": self.n, "target": target.name, "node_count": self.node_count,
                     "wall_time": round(self.wall_time, 3) if timing else None},
            "stages": self.stages,
            "classes": [{"representative": c.representative.labelled(target),
                         "size": c.size, "bucket": c.bucket} for c in self.classes],
            "summary": self.summary(),
            "flags": ["THEOREM_DEVIATION"] if self.deviation else [],
        }


def verify_theorem_A_staged(n: int, *, budget: int | None = None, workers: int = 1) -> TheoremAReport:
    """Staged census of UVB_n -> S_n following the proof.

    1. enumerate the rho part (homs S_n -> S_n), split into conjugacy classes;
    2. record the centralizer of <h(rho_3), ..., h(rho_{n-1})>, which bounds h(sigma_1);
    3. extend each class representative over the sigma's by constrained search;
    4. canonicalize the full homs under S_n conjugation and bucket them.
    """
    if n not in (5, 6):
        raise CensusError("staged Theorem A verifier supports n = 5 or 6")
    budget = default_budget() if budget is None else budget
    t0 = time.perf_counter()
    G = symmetric_group_table(n)
    sym = enumerate_homs(V.presentation("S", n), G, budget=budget, workers=workers)
    rho_classes = dedup_conjugation(sym.homs, G, workers=workers)
    nodes = sym.node_count
    full_uvb = V.presentation("UVB", n)
    perms = [P.Permutation(tuple(int(x) for x in lab.strip("[]").split(","))) for lab in G.labels]
    stage_rho = []
    full: list = []
    for rc in rho_classes:
        rimgs = rc.representative.images
        kind = _rho_kind(rc.representative, G, n)
        cent = P.centralizer([perms[a] for a in rimgs[2:]], n)
        stage_rho.append({"rho": [G.labels[a] for a in rimgs], "class_size": rc.size,
                          "kind": kind, "sigma1_candidates": len(cent),
                          "centralizer": [str(c) for c in cent] if len(cent) <= 4 else None})
        fixed = {b: a for b, a in zip(rc.representative.gens, rimgs)}
        ext = enumerate_homs(full_uvb, G, budget=max(1, budget - nodes), fixed=fixed)
        nodes += ext.node_count
        full.extend(ext.homs)
    classes = dedup_conjugation(full, G, workers=workers)
    for c in classes:
        c.bucket = classify_theorem_A(c.representative, n, G)
        # class size = number of distinct conjugates of the representative
        c.size = len({canonical_conj(c.representative.images, G, k) for k in range(G.order)})
        c.members = []
    stages = {"rho_homs": len(sym.homs), "rho_classes": stage_rho,
              "phi_centralizer": [str(p) for p in _phi_centralizer(n)]}
    return TheoremAReport(n, stages, classes, nodes, time.perf_counter() - t0)


def canonical_conj(images, G, c):
    return tuple(G.conj(c, a) for a in images)


def _phi_centralizer(n: int) -> list:
    return P.centralizer([P.s(i, n) for i in range(3, n)], n)


def _rho_kind(h: HomImage, G, n) -> str:
    imgs = h.images
    if len(set(imgs)) == 1:
        return "abelian"
    canon = canonical_form(imgs, G)
    if canon == canonical_form(tuple(_perm_id(G, P.s(i, n)) for i in range(1, n)), G):
        return "identity"
    if n == 6:
        v6 = P.find_outer_s6()
        if canon == canonical_form(tuple(_perm_id(G, v6.images[i - 1]) for i in range(1, n)), G):
            return "v6"
    return "other"


# ---------------------------------------------------------------------------
# Theorem B

ABELIAN_ZM_X_Z2 = "ABELIAN_ZM_X_Z2"
LARGE = "LARGE"
ZM_X_SN_IMAGE = "ZM_X_SN_IMAGE"
VIOLATION = "VIOLATION"


def km_bound(k: int) -> int:
    """2^(k-1) k!, exact."""
    return 2 ** (k - 1) * math.factorial(k) if k >= 1 else 1


def lambda_images(h: HomImage, G: FiniteGroupTable) -> dict:
    table_gens = list(h.gens)
    out = {}
    for i, j in permutations(range(1, h.n + 1), 2):
        word = [(table_gens.index(x.base), x.exp) for x in V.expand_lambda(i, j, h.n)]
        out[(i, j)] = _eval(word, h.images, G)
    return out


def classify_theorem_B(classes: list, n: int, G: FiniteGroupTable) -> list:
    """Attach a Theorem B bucket and evidence to every class."""
    k = n * (n - 1) // 2
    bound = km_bound(k)
    A_sets = [build_A_i(i, n) for i in range(1, n + 1)] if n >= 3 else []
    for c in classes:
        h = c.representative
        rhos, sigmas = h.rho_images(), h.sigma_images()
        image = G.closure(h.images)
        lam = lambda_images(h, G)
        km = [len({lam[p] for p in A}) for A in A_sets]
        km_ok = all(sz in (1, len(A)) for sz, A in zip(km, A_sets))
        ev = {"image_order": len(image), "bound": bound,
              "lambda_image_count": len(set(lam.values())),
              "A_i_image_sizes": km, "km_shadow_ok": km_ok}
        if image_is_abelian(h.images, G):
            shape_ok = (len(set(sigmas)) <= 1 and len(set(rhos)) <= 1
                        and all(G.mul[r][r] == G.identity for r in rhos))
            bucket = ABELIAN_ZM_X_Z2 if shape_ok else VIOLATION
        elif len(image) >= bound:
            bucket = LARGE
        elif len(set(lam.values())) == 1 and all(
                G.commute(next(iter(lam.values())), r) for r in rhos):
            bucket = ZM_X_SN_IMAGE
        else:
            bucket = VIOLATION
        c.bucket = bucket
        c.evidence = ev
    return classes


# ---------------------------------------------------------------------------
# totally symmetric sets

def build_A_i(i: int, n: int) -> list:
    """The sets A_i as sorted lists of ordered pairs.

    B_i collects l_{j,k} for j = n..i+1 and 1 <= k <= j-1, k != i;
    C_i collects l_{s,t} for s = i-1..2 and 1 <= t < s.
    """
    if n < 3 or not 1 <= i <= n:
        raise CensusError(f"A_i needs n >= 3 and 1 <= i <= n (got i={i}, n={n})")
    out = [(i, k) for k in range(1, n + 1) if k != i]
    for j in range(n, i, -1):
        out += [(j, k) for k in range(1, j) if k != i]
    for s_ in range(i - 1, 1, -1):
        out += [(s_, t) for t in range(1, s_)]
    return out


@dataclass
class TotSymReport:
    X: list
    n: int
    commuting: bool
    stabilizer: list
    induced: list
    full_symmetry: bool
    km_bound: int

    @property
    def flagged(self) -> bool:
        return len(self.X) > 1 and not self.full_symmetry

    def to_json(self) -> dict:
        return {
            "X": [f"l{i},{j}" for i, j in self.X],
            "size": len(self.X),
            "commuting": self.commuting,
            "stabilizer": [str(p) for p in self.stabilizer],
            "stabilizer_order": len(self.stabilizer),
            "induced_order": len(self.induced),
            "sym_X_order": math.factorial(len(self.X)),
            "full_symmetry": self.full_symmetry,
            "km_bound": str(self.km_bound),
            "flagged": self.flagged,
        }


def analyze_totally_symmetric(X, n: int) -> TotSymReport:
    """Commutation plus the permutations of X realized by the index action.

    Conjugating a lambda generator by an element of UVB_n lands on a lambda
    generator only through the S_n index action, so the realizable subgroup
    of Sym(X) is the image of the setwise stabilizer of X in S_n.
    """
    from .uvp import uvp_commute, uvp_generator

    X = sorted(set(tuple(p) for p in X))
    gens = {p: uvp_generator(p[0], p[1], n) for p in X}
    commuting = all(uvp_commute(gens[a], gens[b]) for a in X for b in X if a < b)
    Xset = set(X)
    stab = [s for s in P.all_perms(n) if {(s(i), s(j)) for i, j in X} == Xset]
    pos = {p: k for k, p in enumerate(X)}
    induced = sorted({tuple(pos[(s(i), s(j))] for i, j in X) for s in stab})
    full = len(induced) == math.factorial(len(X))
    return TotSymReport(X, n, commuting, stab, induced, full, km_bound(len(X)))
