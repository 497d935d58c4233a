import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import band_edges, cf_value
from sturmspec.bandscan import (
    Relation,
    band_relation,
    build_floquet,
    period,
    precedes,
    spectrum,
    spectrum_bands,
    strictly_inside,
    PI,
)
from sturmspec.contfrac import alpha_expansion, make_contfrac
from sturmspec.errors import DegenerateExpansion, ZeroCoupling
from sturmspec.suites import closed_form_edges
from sturmspec.tracepoly import trace_eval

# golden level-5 approximant (alpha = 5/8) at V = 1, from the dense numpy oracle
GOLDEN5_V1 = [
    (-1.460504870018764, -1.362339832857439),
    (-1.263077410313242, -1.0),
    (-0.8019377358048382, -0.5157215892913395),
    (0.1742154481146451, 0.5549581320873715),
    (0.7608767217434463, 1.182644323595947),
    (1.6796431855621226, 2.0),
    (2.2469796037174667, 2.5084811991806713),
    (2.5961546760086334, 2.6996281482753175),
]

digit_lists = st.lists(st.integers(1, 3), min_size=1, max_size=6).map(tuple)


def test_frozen_golden_edges():
    got = spectrum_bands(alpha_expansion((1,) * 5, 5), 1.0).edges
    assert np.max(np.abs(got - np.array(GOLDEN5_V1))) < 1e-12


@pytest.mark.parametrize("V", [0.5, 1.0, 2.0, 5.0])
def test_closed_form_edges(V):
    two, three = closed_form_edges(V)
    assert np.max(np.abs(spectrum_bands(make_contfrac((0, 0, 2)), V).edges - np.array(two))) < 1e-10
    assert np.max(np.abs(spectrum_bands(make_contfrac((0, 0, 2, 1)), V).edges - np.array(three))) < 1e-10


@given(digit_lists, st.sampled_from([0.3, 1.0, 2.5, 6.0]))
def test_bands_match_dense_oracle(digits, V):
    bs = spectrum_bands(make_contfrac((0, 0) + digits), V)
    ref = band_edges(cf_value(digits), V)
    assert len(bs) == ref.shape[0] == cf_value(digits).denominator
    assert np.max(np.abs(bs.edges - ref)) < 1e-9
    assert bs.disjoint()


@given(digit_lists, st.floats(0.2, 6))
def test_trace_is_two_at_edges_and_inside_at_centres(digits, V):
    c = make_contfrac((0, 0) + digits)
    for b in spectrum_bands(c, V):
        for E in (b.left, b.right):
            assert abs(abs(trace_eval(c, E, V)) - 2) < 1e-6 * max(1.0, abs(E)) * period(c) ** 2
        assert abs(trace_eval(c, 0.5 * (b.left + b.right), V)) < 2


@given(digit_lists, st.floats(0.2, 6))
def test_negative_coupling_mirror(digits, V):
    c = make_contfrac((0, 0) + digits)
    a = spectrum_bands(c, V).edges
    b = spectrum_bands(c, -V).edges
    assert np.max(np.abs(a + b[::-1, ::-1])) < 1e-10


def test_solvers_agree():
    c = alpha_expansion((1, 2, 1, 3), 4)
    ref = spectrum_bands(c, 1.5, "exact").edges
    for method in ("jacobi", "banded"):
        assert np.max(np.abs(spectrum_bands(c, 1.5, method).edges - ref)) < 1e-10


def test_errors_and_full_line():
    with pytest.raises(ZeroCoupling):
        spectrum_bands(make_contfrac((0, 0, 1)), 0)
    with pytest.raises(DegenerateExpansion):
        spectrum_bands(make_contfrac((0, 0, 0)), 1.0)
    full = spectrum(make_contfrac((0, 0, 0)), 1.0)
    assert full.full_line and math.isinf(full[0].left)
    # [0,0,-1] has a genuine band [-2-V, 2-V]
    b = spectrum_bands(make_contfrac((0, 0, -1)), 1.0)[0]
    assert b.as_interval() == pytest.approx((-3.0, 1.0))


def test_floquet_corner_merges_for_two_sites():
    m = build_floquet(make_contfrac((0, 0, 2)), 1.0, PI).matrix
    assert np.allclose(m, np.diag(np.diag(m)))
    assert sorted(np.diag(m)) == [0.0, 1.0]


def test_interval_relations():
    bs = spectrum_bands(make_contfrac((0, 0, 1, 1)), 1.0)
    root = spectrum_bands(make_contfrac((0, 0, 1)), 1.0)[0]
    assert precedes(bs[0], bs[1])
    assert band_relation(bs[0], bs[1]) in (Relation.STRICTLY_LEFT_OF, Relation.LEFT_OF)
    assert band_relation((0.0, 1.0), (-1.0, 2.0)) == Relation.STRICT_SUBSET
    assert band_relation((0.0, 1.0), (0.0, 2.0)) == Relation.SUBSET
    assert strictly_inside((0.1, 0.2), (0.0, 1.0)) and not strictly_inside((0.0, 0.2), (0.0, 1.0))
    assert not strictly_inside(root, bs[0])
