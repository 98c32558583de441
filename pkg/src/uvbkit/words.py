"""Freely reduced words, the generator-word grammar, and Stallings folding.

Words are stored run-length encoded as ``(base, exponent)`` syllables.  Every
word carries an alphabet tag and binary operations refuse to mix alphabets.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

SIGMA = "s"
RHO = "r"
LAMBDA = "l"

# alphabet tags
SR = "sr"          # sigma/rho words
LAM = "lambda"     # lambda_{i,j} words
F2 = "F2"          # rank-2 factor words over {A, B}


class WordError(ValueError):
    """Base class for grammar and alphabet errors."""

    code = "WordError"


class MalformedToken(WordError):
    code = "MalformedToken"


class IndexOutOfRange(WordError):
    code = "IndexOutOfRange"


class EqualIndices(WordError):
    code = "EqualIndices"


class ZeroExponent(WordError):
    code = "ZeroExponent"


class AlphabetMismatch(WordError):
    code = "AlphabetMismatch"


@dataclass(frozen=True, order=True)
class Letter:
    """A generator power: ``s<i>^e``, ``r<i>^e`` or ``l<i>,<j>^e``."""

    kind: str
    idx: tuple
    exp: int = 1

    def __post_init__(self):
        if self.exp == 0:
            raise ZeroExponent(f"zero exponent on {self.kind}{self.idx}")
        if self.kind == LAMBDA:
            if len(self.idx) != 2:
                raise MalformedToken(f"lambda needs two indices, got {self.idx}")
            if self.idx[0] == self.idx[1]:
                raise EqualIndices(f"l{self.idx[0]},{self.idx[1]}")
        elif self.kind in (SIGMA, RHO):
            if len(self.idx) != 1:
                raise MalformedToken(f"{self.kind} needs one index, got {self.idx}")
        else:
            raise MalformedToken(f"unknown generator kind {self.kind!r}")

    @property
    def base(self):
        return (self.kind, self.idx)

    def validate(self, n: int) -> None:
        if self.kind == LAMBDA:
            if not all(1 <= k <= n for k in self.idx):
                raise IndexOutOfRange(f"{self.token()} outside 1..{n}")
        elif not 1 <= self.idx[0] <= n - 1:
            raise IndexOutOfRange(f"{self.token()} outside 1..{n - 1}")

    def token(self) -> str:
        if self.kind == LAMBDA:
            head = f"l{self.idx[0]},{self.idx[1]}"
        else:
            head = f"{self.kind}{self.idx[0]}"
        return head if self.exp == 1 else f"{head}^{self.exp}"

    def inverse(self) -> "Letter":
        return Letter(self.kind, self.idx, -self.exp)


def sigma(i: int, exp: int = 1) -> Letter:
    return Letter(SIGMA, (i,), exp)


def rho(i: int, exp: int = 1) -> Letter:
    return Letter(RHO, (i,), exp)


def lam(i: int, j: int, exp: int = 1) -> Letter:
    return Letter(LAMBDA, (i, j), exp)


def _push(stack: list, base, exp: int) -> None:
    if exp == 0:
        return
    if stack and stack[-1][0] == base:
        e = stack[-1][1] + exp
        if e:
            stack[-1] = (base, e)
        else:
            stack.pop()
    else:
        stack.append((base, exp))


@dataclass(frozen=True)
class ReducedWord:
    """Freely reduced word as a tuple of ``(base, exponent)`` syllables."""

    syllables: tuple = ()
    alphabet: str = F2

    @classmethod
    def from_syllables(cls, pairs: Iterable, alphabet: str = F2) -> "ReducedWord":
        stack: list = []
        for base, exp in pairs:
            _push(stack, base, exp)
        return cls(tuple(stack), alphabet)

    @classmethod
    def gen(cls, base, exp: int = 1, alphabet: str = F2) -> "ReducedWord":
        return cls(((base, exp),) if exp else (), alphabet)

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.syllables)

    def __bool__(self) -> bool:
        return bool(self.syllables)

    def is_identity(self) -> bool:
        return not self.syllables

    def _check(self, other: "ReducedWord") -> None:
        if self.alphabet != other.alphabet:
            raise AlphabetMismatch(f"{self.alphabet} vs {other.alphabet}")

    def __mul__(self, other: "ReducedWord") -> "ReducedWord":
        self._check(other)
        if not other.syllables:
            return self
        if not self.syllables:
            return other
        stack = list(self.syllables)
        it = iter(other.syllables)
        for base, exp in it:
            _push(stack, base, exp)
            # once the junction has settled the rest copies verbatim
            if stack and stack[-1] == (base, exp):
                stack.extend(it)
                break
        return ReducedWord(tuple(stack), self.alphabet)

    def inverse(self) -> "ReducedWord":
        return ReducedWord(tuple((b, -e) for b, e in reversed(self.syllables)), self.alphabet)

    def __pow__(self, k: int) -> "ReducedWord":
        base = self if k >= 0 else self.inverse()
        out = ReducedWord((), self.alphabet)
        for _ in range(abs(k)):
            out = out * base
        return out

    def exponent_sum(self, base) -> int:
        return sum(e for b, e in self.syllables if b == base)

    def letters(self) -> list:
        """Expand to unit steps ``(base, +-1)``."""
        out = []
        for b, e in self.syllables:
            s = 1 if e > 0 else -1
            out.extend([(b, s)] * abs(e))
        return out

    def map_bases(self, f) -> "ReducedWord":
        return ReducedWord.from_syllables(((f(b), e) for b, e in self.syllables), self.alphabet)

    def __str__(self) -> str:
        if not self.syllables:
            return "1"
        parts = []
        for b, e in self.syllables:
            name = _base_name(b)
            parts.append(name if e == 1 else f"{name}^{e}")
        return " ".join(parts)


def _base_name(b) -> str:
    if isinstance(b, tuple) and len(b) == 2 and b[0] in (SIGMA, RHO, LAMBDA):
        kind, idx = b
        return f"l{idx[0]},{idx[1]}" if kind == LAMBDA else f"{kind}{idx[0]}"
    return str(b)


def identity(alphabet: str = F2) -> ReducedWord:
    return ReducedWord((), alphabet)


def reduce(raw: Sequence, alphabet: str | None = None) -> ReducedWord:
    """Freely reduce a sequence of letters.

    Accepts :class:`Letter` objects or raw ``(base, exponent)`` pairs.  Zero
    exponents are dropped and adjacent equal bases merged.
    """
    pairs = []
    for item in raw:
        if isinstance(item, Letter):
            pairs.append((item.base, item.exp))
            if alphabet is None:
                alphabet = LAM if item.kind == LAMBDA else SR
        else:
            pairs.append(tuple(item))
    return ReducedWord.from_syllables(pairs, alphabet or F2)


def multiply(u: ReducedWord, v: ReducedWord) -> ReducedWord:
    return u * v


def invert(u: ReducedWord) -> ReducedWord:
    return u.inverse()


def commutator(u: ReducedWord, v: ReducedWord) -> ReducedWord:
    """``u v u^-1 v^-1``, freely reduced."""
    return u * v * u.inverse() * v.inverse()


def word_letters(w: ReducedWord) -> list[Letter]:
    """Turn a sigma/rho/lambda word back into :class:`Letter` syllables."""
    return [Letter(b[0], b[1], e) for b, e in w.syllables]


# ---------------------------------------------------------------------------
# grammar

_TOKEN = re.compile(r"^(?:([sr])(\d+)|l(\d+),(\d+))(?:\^([+-]?\d+))?$")


def parse_token(tok: str, n: int | None = None) -> Letter:
    m = _TOKEN.match(tok)
    if not m:
        raise MalformedToken(tok)
    kind, i, a, b, exp = m.groups()
    e = int(exp) if exp is not None else 1
    if e == 0:
        raise ZeroExponent(tok)
    if kind:
        idx = (int(i),)
        if idx[0] < 1:
            raise IndexOutOfRange(tok)
        letter = Letter(kind, idx, e)
    else:
        ia, ib = int(a), int(b)
        if ia < 1 or ib < 1:
            raise IndexOutOfRange(tok)
        if ia == ib:
            raise EqualIndices(tok)
        letter = Letter(LAMBDA, (ia, ib), e)
    if n is not None:
        letter.validate(n)
    return letter


def parse_word(text: str, n: int | None = None) -> list[Letter]:
    """Parse whitespace separated tokens such as ``"r2 l1,3^-2 s4"``.

    Tokens are split on runs of ASCII spaces; tabs and other whitespace are
    rejected as malformed.
    """
    if text.strip(" ") == "" or text.strip(" ") == "1":
        return []
    return [parse_token(t, n) for t in text.split(" ") if t != ""]


def print_word(w) -> str:
    """Render a word (ReducedWord or letter list) in the token grammar."""
    if isinstance(w, ReducedWord):
        if w.alphabet == F2:
            return str(w)
        w = word_letters(w)
    if not w:
        return "1"
    return " ".join(x.token() for x in w)


def normalize_text(text: str, n: int | None = None) -> str:
    """Canonical spelling of a token string (single spaces, ``^1`` dropped)."""
    return print_word(parse_word(text, n))


# ---------------------------------------------------------------------------
# Stallings folding

class FoldedGraph:
    """Folded core graph of a finitely generated subgroup of a free group.

    Vertex 0 is the base point.  ``edges[v]`` maps ``(base, +-1)`` to the
    unique target; folding guarantees determinism, so membership is a plain
    walk from the base point.
    """

    def __init__(self, generators: Iterable[ReducedWord]):
        self._parent: list[int] = [0]
        self.edges: list[dict] = [{}]
        for g in generators:
            self._add_petal(g)
        self._fold()
        self._compact()

    def _new_vertex(self) -> int:
        self._parent.append(len(self._parent))
        self.edges.append({})
        return len(self._parent) - 1

    def _find(self, v: int) -> int:
        while self._parent[v] != v:
            self._parent[v] = self._parent[self._parent[v]]
            v = self._parent[v]
        return v

    def _add_petal(self, w: ReducedWord) -> None:
        steps = w.letters()
        if not steps:
            return
        v = 0
        for k, (b, s) in enumerate(steps):
            u = 0 if k == len(steps) - 1 else self._new_vertex()
            self.edges[v].setdefault((b, s), set()).add(u)
            self.edges[u].setdefault((b, -s), set()).add(v)
            v = u

    def _fold(self) -> None:
        pending = list(range(len(self.edges)))
        while pending:
            v = self._find(pending.pop())
            for label, targets in list(self.edges[v].items()):
                reps = {self._find(t) for t in targets}
                if len(reps) <= 1:
                    self.edges[v][label] = reps
                    continue
                keep, *rest = sorted(reps)
                for r in rest:
                    self._merge(keep, r)
                    pending.append(keep)
                pending.append(v)
                break

    def _merge(self, a: int, b: int) -> None:
        a, b = self._find(a), self._find(b)
        if a == b:
            return
        self._parent[b] = a
        for label, targets in self.edges[b].items():
            self.edges[a].setdefault(label, set()).update(targets)
        self.edges[b] = {}

    def _compact(self) -> None:
        out: list[dict] = []
        index: dict[int, int] = {}
        for v in range(len(self.edges)):
            if self._find(v) == v:
                index[v] = len(out)
                out.append({})
        for v, k in index.items():
            for label, targets in self.edges[v].items():
                reps = {self._find(t) for t in targets}
                assert len(reps) == 1, "graph not folded"
                out[k][label] = index[reps.pop()]
        self.edges = out
        del self._parent

    @property
    def num_vertices(self) -> int:
        return len(self.edges)

    def rank(self) -> int:
        """Rank of the subgroup: E - V + 1 on the core graph."""
        num_edges = sum(len(d) for d in self.edges) // 2
        return num_edges - self.num_vertices + 1

    def accepts(self, w: ReducedWord) -> bool:
        v = 0
        for step in w.letters():
            nxt = self.edges[v].get(step)
            if nxt is None:
                return False
            v = nxt
        return v == 0


def subgroup_membership(generators: Iterable[ReducedWord], candidate: ReducedWord) -> bool:
    """Decide ``candidate in <generators>`` by walking the folded subgroup graph."""
    gens = list(generators)
    for g in gens:
        candidate._check(g)
    return FoldedGraph(gens).accepts(candidate)


def f2(text: str) -> ReducedWord:
    """Small helper: ``f2("A B^-1")`` builds a rank-2 factor word."""
    pairs = []
    for tok in text.split():
        name, _, exp = tok.partition("^")
        pairs.append((name, int(exp) if exp else 1))
    return ReducedWord.from_syllables(pairs, F2)

