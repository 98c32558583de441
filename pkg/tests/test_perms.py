import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy.combinatorics import Permutation as SymPerm
from sympy.combinatorics import PermutationGroup

from oracles import naive_centralizer
from uvbkit import perms as P


def perm_strategy(n):
    return st.permutations(range(1, n + 1)).map(lambda t: P.Permutation(tuple(t)))


def test_compose_inverse_examples():
    e3 = P.identity_perm(3)
    assert P.compose(P.s(1, 3), P.s(1, 3)) == e3
    assert str(P.compose(P.s(1, 3), P.s(2, 3))) == "[2,3,1]"
    assert str(P.inverse(P.parse_perm("[2,3,1]"))) == "[3,1,2]"


def test_degree_mismatch():
    with pytest.raises(P.DegreeMismatch):
        P.compose(P.s(1, 3), P.s(1, 4))
    with pytest.raises(P.PermError):
        P.Permutation((1, 1, 2))


@pytest.mark.parametrize("gens,n", [((3, 4), 5), ((3, 4, 5), 6)])
def test_centralizer_step(gens, n):
    cent = P.centralizer([P.s(i, n) for i in gens], n)
    assert cent == [P.identity_perm(n), P.s(1, n)]


def test_centralizer_empty():
    assert len(P.centralizer([], 3)) == 6


@given(st.lists(perm_strategy(5), max_size=2))
def test_centralizer_matches_naive_and_is_subgroup(gens):
    cent = P.centralizer(gens, 5)
    assert [p.images for p in cent] == naive_centralizer([g.images for g in gens], 5)
    cs = set(cent)
    for x in cent:
        assert P.inverse(x) in cs
        for y in cent[:5]:
            assert P.compose(x, y) in cs


@pytest.mark.parametrize("text,typ,par", [
    ("[2,1,3,4,5,6]", (2, 1, 1, 1, 1), 1), ("[1,2,3,4,5,6]", (1,) * 6, 0), ("[2,1,4,3,6,5]", (2, 2, 2), 1),
])
def test_conjugacy_type(text, typ, par):
    p = P.parse_perm(text)
    assert P.conjugacy_type(p) == typ
    assert P.parity(p) == par


@given(perm_strategy(6), perm_strategy(6))
def test_conjugation_invariants(g, p):
    q = P.compose(P.compose(g, p), P.inverse(g))
    assert P.conjugacy_type(q) == P.conjugacy_type(p)
    assert P.compose(p, P.inverse(p)).is_identity()
    assert sorted(P.compose(g, p).images) == list(range(1, 7))


@given(perm_strategy(6))
def test_adjacent_word_and_sympy_agree(p):
    out = P.identity_perm(6)
    for i in P.adjacent_word(p):
        out = P.compose(out, P.s(i, 6))
    assert out == p
    sp = SymPerm([x - 1 for x in p.images])
    assert P.parity(p) == sp.parity()
    assert P.order(p) == sp.order()


def test_cycle_notation():
    assert P.parse_perm("(1 2)(3 4)", 5) == P.parse_perm("[2,1,4,3,5]")
    assert P.parse_perm("()", 3).is_identity()
    with pytest.raises(P.PermError):
        P.parse_perm("(1 2)")
    with pytest.raises(P.PermError):
        P.parse_perm("(1 1)", 3)


def test_outer_s6_witness():
    w = P.find_outer_s6()
    assert w.all_ok()
    assert P.conjugacy_type(w.images[0]) == (2, 2, 2)
    assert P.conjugacy_type(w.apply(w.apply(P.s(1, 6)))) == (2, 1, 1, 1, 1)
    # sympy as an independent closure oracle
    G = PermutationGroup([SymPerm([x - 1 for x in p.images]) for p in w.images])
    assert G.order() == 720
    for g in P.all_perms(6):
        conj = P.compose(P.compose(g, P.s(1, 6)), P.inverse(g))
        assert P.conjugacy_type(conj) != (2, 2, 2)


def test_outer_s6_is_homomorphism():
    w = P.find_outer_s6()
    for p, q in [(P.parse_perm("[3,1,2,6,4,5]"), P.parse_perm("[2,3,4,5,6,1]")),
                 (P.s(2, 6), P.s(5, 6))]:
        assert w.apply(P.compose(p, q)) == P.compose(w.apply(p), w.apply(q))
