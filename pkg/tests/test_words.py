import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import mixed_words
from oracles import brute_membership, free_reduce
from uvbkit.words import (
    AlphabetMismatch,
    EqualIndices,
    FoldedGraph,
    IndexOutOfRange,
    MalformedToken,
    ReducedWord,
    ZeroExponent,
    commutator,
    f2,
    normalize_text,
    parse_word,
    print_word,
    reduce,
    sigma,
    lam,
    subgroup_membership,
)

a, b = "A", "B"
raw_syllables = st.lists(st.tuples(st.sampled_from("AB"), st.integers(-3, 3)), max_size=20)


def test_reduce_examples():
    assert reduce([(a, 1), (a, -1)]).is_identity()
    assert reduce([(a, 2), (a, -1), (b, 1)]) == f2("A B")
    assert reduce([(a, 1), (b, 1), (b, -1), (a, 1)]) == f2("A^2")


def test_multiply_invert_examples():
    assert (f2("A") * f2("A^-1")).is_identity()
    assert f2("A B").inverse() == f2("B^-1 A^-1")
    assert f2("A B") * f2("B^-1 A") == f2("A^2")


def test_commutator_examples():
    assert commutator(f2("A"), f2("A^5")).is_identity()
    assert commutator(f2("A"), f2("B")) == f2("A B A^-1 B^-1")
    assert commutator(f2("A B"), f2("B A")) == f2("A B^2 A B^-1 A^-2 B^-1")


def test_alphabet_mismatch():
    w = reduce([sigma(1)])
    v = reduce([lam(1, 2)])
    with pytest.raises(AlphabetMismatch):
        w * v


@pytest.mark.parametrize("text,err", [
    ("l1,1", EqualIndices), ("s0", IndexOutOfRange), ("s1^0", ZeroExponent),
    ("x1", MalformedToken), ("s1^", MalformedToken), ("l1,9", IndexOutOfRange),
    ("s1\ts2", MalformedToken),
])
def test_parse_errors(text, err):
    with pytest.raises(err):
        parse_word(text, 4)


def test_parse_examples():
    assert parse_word("s1^-1 r2", 3) == [sigma(1, -1), parse_word("r2")[0]]
    assert parse_word("l2,1^3", 3) == [lam(2, 1, 3)]
    assert parse_word("1") == []


@given(raw_syllables)
def test_reduce_idempotent_and_matches_letterwise(seq):
    w = reduce(seq)
    assert reduce(w.syllables) == w
    assert free_reduce(w.syllables) == free_reduce(seq)
    for (x, _), (y, _) in zip(w.syllables, w.syllables[1:]):
        assert x != y


@given(raw_syllables, raw_syllables, raw_syllables)
def test_group_laws(s1, s2, s3):
    u, v, w = reduce(s1), reduce(s2), reduce(s3)
    assert (u * v) * w == u * (v * w)
    assert (u * u.inverse()).is_identity()
    assert u.inverse().inverse() == u
    assert u * ReducedWord() == u


@given(mixed_words(5))
def test_parse_print_roundtrip(letters):
    w = reduce(letters)
    text = print_word(w)
    assert reduce(parse_word(text, 5)) == w
    assert normalize_text("  " + text.replace(" ", "   ") + " ", 5) == text


@settings(max_examples=60)
@given(st.lists(st.tuples(st.integers(0, 2), st.sampled_from([1, -1])), max_size=8))
def test_membership_of_random_products(picks):
    gens = [f2("A B"), f2("B A^2"), f2("A^3")]
    w = ReducedWord()
    for k, e in picks:
        w = w * (gens[k] if e > 0 else gens[k].inverse())
    assert subgroup_membership(gens, w)


def test_membership_examples():
    assert subgroup_membership([f2("A"), f2("B")], f2("A B A"))
    assert not subgroup_membership([f2("A^2")], f2("A"))
    assert not subgroup_membership([f2("A B"), f2("B A")], f2("A"))
    assert FoldedGraph([f2("A B"), f2("B A")]).rank() == 2


@pytest.mark.parametrize("gens,target", [
    (["A B", "B A"], "A B^2 A"), (["A B", "B A"], "B A^-1"), (["A^2", "B A B^-1"], "A^2 B A^3 B^-1"),
    (["A B A^-1"], "A B^3 A^-1"), (["A^2", "B^2"], "A B"),
])
def test_membership_matches_bounded_search(gens, target):
    g = [f2(x) for x in gens]
    t = f2(target)
    assert subgroup_membership(g, t) == brute_membership([list(x.syllables) for x in g], list(t.syllables), 4)
