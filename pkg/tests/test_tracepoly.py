import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import cf_value, trace_product
from sturmspec.contfrac import make_contfrac
from sturmspec.errors import TraceOverflow
from sturmspec.tracepoly import (
    chebyshev_value,
    fricke_vogt_exact,
    fricke_vogt_residual,
    pmul,
    trace_eval,
    trace_poly,
    trace_recursion_check,
)

digit_lists = st.lists(st.integers(1, 3), min_size=1, max_size=5).map(tuple)
small_fractions = st.fractions(min_value=-4, max_value=4, max_denominator=7)


def poly(*c):
    return tuple(Fraction(x) for x in c)


@pytest.mark.parametrize("V", [Fraction(1), Fraction(3)])
def test_first_traces_by_hand(V):
    hand = {
        (0, 0): poly(0, 1),
        (0, 0, -1): poly(V, 1),
        (0, 0, 1): poly(-V, 1),
        (0, 0, 2): poly(-2, -V, 1),
        (0, 0, 1, 2): poly(2 * V, V * V - 3, -2 * V, 1),
        (0, 0, 3): poly(V, -3, -V, 1),
    }
    for digits, expect in hand.items():
        assert trace_poly(make_contfrac(digits), V).coefficients == expect


def test_constant_traces():
    for digits in [(0,), (0, 0, 0), (0, 0, 1, -1)]:
        assert trace_poly(make_contfrac(digits), 2).coefficients == poly(2)


@given(digit_lists, small_fractions, st.fractions(min_value=Fraction(1, 4), max_value=6, max_denominator=5))
def test_trace_poly_matches_transfer_product(digits, E, V):
    c = make_contfrac((0, 0) + digits)
    assert trace_poly(c, V)(E) == trace_product(cf_value(digits), E, V)


@given(digit_lists, st.floats(-4, 4), st.floats(0.1, 6))
def test_float_trace_matches_product(digits, E, V):
    got = trace_eval(make_contfrac((0, 0) + digits), E, V)
    ref = trace_product(cf_value(digits), E, V)
    assert got == pytest.approx(ref, rel=1e-9, abs=1e-9)


@given(st.lists(st.integers(1, 3), max_size=3).map(tuple), st.integers(0, 3), st.integers(1, 6))
def test_fricke_vogt_exact_vanishes(digits, n, V):
    assert fricke_vogt_exact(make_contfrac((0, 0) + digits), n, V) == ()


@given(st.lists(st.integers(1, 3), max_size=5).map(tuple), st.integers(0, 3), st.floats(-3, 3), st.floats(0.1, 3))
def test_fricke_vogt_float_scaled(digits, n, E, V):
    c = make_contfrac((0, 0) + digits)
    x, y, z = (trace_eval(cc, E, V) for cc in (c.extend(n + 1), c.extend(n), c))
    scale = 1 + x * x + y * y + z * z + abs(x * y * z)
    assert abs(fricke_vogt_residual(c, n, E, V)) / scale < 1e-10


def schoolbook(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


coeff_lists = st.lists(st.fractions(max_denominator=30).map(lambda f: f * 10**6), max_size=10).map(
    lambda xs: tuple(xs[: max((i + 1 for i, x in enumerate(xs) if x), default=0)])
)


@given(coeff_lists, coeff_lists)
def test_pmul_matches_schoolbook(a, b):
    assert pmul(a, b) == schoolbook(a, b)


@pytest.mark.parametrize("digits,m", [((0, 0, 1), 2), ((0, 0, 2), 1), ((0, 0, 1, 2), 3)])
def test_trace_recursion(digits, m):
    assert trace_recursion_check(make_contfrac(digits), m, 4)


@given(st.integers(0, 8), st.floats(-1.99, 1.99))
def test_chebyshev_inside(n, x):
    theta = math.acos(x / 2)
    assert chebyshev_value(n, x) == pytest.approx(math.sin((n + 1) * theta) / math.sin(theta), abs=1e-7)


def test_overflow_is_reported():
    c = make_contfrac((0, 0) + (1,) * 30)
    with pytest.raises(TraceOverflow):
        trace_eval(c.extend(2000), 1e3, 8.0)


def test_trace_eval_vectorised():
    c = make_contfrac((0, 0, 2))
    E = np.linspace(-2, 2, 5)
    assert np.allclose(trace_eval(c, E, 1.0), E * E - E - 2)
