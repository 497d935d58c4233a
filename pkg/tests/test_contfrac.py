from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import cf_value, denominators as oracle_denominators, mech_word
from sturmspec.contfrac import (
    alpha_expansion,
    concatenation_holds,
    convergents,
    denominators,
    evaluate,
    is_degenerate,
    is_rotation,
    make_contfrac,
    parse_alpha,
    rational_digits,
    reduce,
    substitution_word,
    word_of,
    word_period,
)
from sturmspec.errors import MalformedDigits

digit_lists = st.lists(st.integers(1, 5), min_size=1, max_size=8).map(tuple)


@given(digit_lists)
def test_value_matches_nested_fraction(digits):
    assert evaluate(make_contfrac((0, 0) + digits)) == cf_value(digits)


@given(digit_lists)
def test_convergents_and_denominators(digits):
    k = len(digits)
    p, q = convergents(digits, k)
    assert Fraction(p, q) == cf_value(digits)
    assert denominators(digits, k)[1:] == oracle_denominators(digits, k)


def test_convergent_seed():
    assert convergents((1, 1), -1) == (1, 0)


@given(digit_lists)
def test_word_period_is_mechanical_word(digits):
    wp = word_period(make_contfrac((0, 0) + digits))
    alpha = cf_value(digits)
    assert list(wp.bits) == mech_word(alpha)
    assert sum(wp.bits) == wp.p == alpha.numerator
    assert len(wp.bits) == wp.q == alpha.denominator


@given(st.lists(st.integers(1, 4), min_size=2, max_size=7).map(tuple))
def test_substitution_is_rotation_of_period(digits):
    for n in range(1, len(digits) + 1):
        word = substitution_word(digits, n)
        assert is_rotation(word, str(word_period(alpha_expansion(digits, n))))


@given(st.lists(st.integers(1, 4), min_size=2, max_size=7).map(tuple))
def test_concatenation(digits):
    for n in range(2, len(digits) + 1):
        assert concatenation_holds(digits, n)


def test_small_words():
    assert str(word_of(Fraction(2, 5))) == "01010"
    assert str(word_period(make_contfrac((0, 0, 2, 1)))) == "010"
    assert substitution_word((1, 1, 1), 3) == "101"


@given(st.fractions(min_value=0, max_value=1, max_denominator=500).filter(lambda x: x > 0))
def test_rational_digits_round_trip(alpha):
    assert cf_value(rational_digits(alpha)) == alpha


def test_parse_alpha_grammar():
    assert parse_alpha("cf:1,2,3") == (1, 2, 3)
    assert parse_alpha("rat:2/5") == (2, 2)
    assert parse_alpha("golden", depth=5) == (1,) * 5
    assert parse_alpha("silver", depth=3) == (2,) * 3
    for bad in ("cf:0,1", "rat:3/2", "bronze", "cf:"):
        with pytest.raises(MalformedDigits):
            parse_alpha(bad)


@pytest.mark.parametrize("digits", [(), (1,), (0, 1), (0, 0, -2), (0, 0, 1, 0, 1)])
def test_malformed(digits):
    with pytest.raises(MalformedDigits):
        make_contfrac(digits)


def test_degenerate_expansions():
    for d in [(0,), (0, 0, 0), (0, 0, 1, -1), (0, 0, -1)]:
        assert is_degenerate(make_contfrac(d))
    assert reduce(make_contfrac((0, 0, 1, -1))).digits == (0,)
    assert reduce(make_contfrac((0, 0, 0))).digits == (0,)
    assert not is_degenerate(make_contfrac((0, 0, 1, 1)))


def test_alpha_expansion_levels():
    assert alpha_expansion((1, 2), -1).digits == (0,)
    assert alpha_expansion((1, 2), 0).digits == (0, 0)
    assert alpha_expansion((1, 2), 2).digits == (0, 0, 1, 2)
    with pytest.raises(MalformedDigits):
        alpha_expansion((1, 2), 3)


@given(st.text(alphabet="01", min_size=1, max_size=12), st.integers(0, 11))
def test_rotation_property(word, shift):
    shift %= len(word)
    assert is_rotation(word, word[shift:] + word[:shift])
