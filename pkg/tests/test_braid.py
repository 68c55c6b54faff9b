import pytest
from hypothesis import given, settings, strategies as st

from knotmf.braid import (BraidWord, Permutation, full_twist, jm_element,
                          jm_power_braid, parse_braid)


@st.composite
def braids(draw, max_strands=4, max_len=8):
    n = draw(st.integers(2, max_strands))
    length = draw(st.integers(0, max_len))
    letters = []
    for _ in range(length):
        i = draw(st.integers(1, n - 1))
        sign = draw(st.booleans())
        letters.append(i if sign else -i)
    return BraidWord(n, tuple(letters))


def test_parse_examples():
    b = parse_braid("1 1 1")
    assert b.strands == 2 and b.letters == (1, 1, 1)
    b = parse_braid("1 -2 1 -2", strands=3)
    assert len(b) == 4
    with pytest.raises(ValueError):
        parse_braid("0")
    with pytest.raises(ValueError):
        parse_braid("3", strands=2)
    with pytest.raises(ValueError):
        parse_braid("one two")


def test_writhe():
    assert parse_braid("1 1 1").writhe() == 3
    assert parse_braid("1 -2").writhe() == 0
    assert BraidWord(2, ()).writhe() == 0


def test_closure_components():
    assert parse_braid("1").component_count() == 1          # unknot
    assert BraidWord(2, ()).component_count() == 2          # 2-unlink
    assert parse_braid("1 1").component_count() == 2        # Hopf link


@settings(max_examples=200, deadline=None)
@given(braids(), braids())
def test_closure_permutation_homomorphism(b1, b2):
    n = max(b1.strands, b2.strands)
    b1 = BraidWord(n, b1.letters)
    b2 = BraidWord(n, b2.letters)
    lhs = b1.concat(b2).closure_permutation()
    rhs = b1.closure_permutation() * b2.closure_permutation()
    assert lhs == rhs


@settings(max_examples=200, deadline=None)
@given(braids(), braids(), st.integers(0, 10))
def test_component_count_invariance(b, c, k):
    assert b.rotate(k).component_count() == b.component_count()
    c = BraidWord(b.strands, tuple(a for a in c.letters
                                   if abs(a) < b.strands))
    conj = c.concat(b).concat(c.inverse())
    assert conj.component_count() == b.component_count()


def test_jm_elements():
    assert jm_element(1, 2).letters == (1, 1)
    assert jm_element(2, 3).letters == (2, 2)
    for n in range(2, 6):
        for i in range(1, n):
            assert len(jm_element(i, n)) == 2 * (n - i)
    with pytest.raises(ValueError):
        jm_element(3, 3)


def test_full_twist():
    assert full_twist(2).letters == (1, 1)
    assert full_twist(1).letters == ()
    assert full_twist(3).writhe() == 6


def test_jm_power_braid():
    assert jm_power_braid([2], 2).letters == (1, 1, 1, 1)
    assert jm_power_braid([-1], 2).letters == (-1, -1)
    b = jm_power_braid([1, 1], 3)
    assert b.letters == jm_element(1, 3).letters + jm_element(2, 3).letters


def test_word_operations():
    b = parse_braid("1 -2 1", strands=3)
    assert b.mirror().letters == (-1, 2, -1)
    assert b.rotate(1).letters == (-2, 1, 1)
    c = parse_braid("2", strands=3)
    assert b.concat(c).writhe() == b.writhe() + c.writhe()
    with pytest.raises(ValueError):
        b.concat(parse_braid("1", strands=2))


def test_permutation_basics():
    s1 = Permutation.transposition(3, 1)
    s2 = Permutation.transposition(3, 2)
    assert (s1 * s2).length() == 2
    w = s1 * s2 * s1
    assert w.length() == 3
    assert w == s2 * s1 * s2
    word = w.reduced_word()
    rebuilt = Permutation.identity(3)
    for i in word:
        rebuilt = rebuilt * Permutation.transposition(3, i)
    assert rebuilt == w and len(word) == w.length()


def test_json_form():
    b = parse_braid("1 -2", strands=3)
    assert b.to_json() == {"strands": 3, "letters": [1, -2]}
