import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import band_edges, cf_value, denominators, open_chain_ids
from sturmspec.errors import InsufficientDepth, ZeroCoupling
from sturmspec.ids import (
    circle_distance,
    dry_tmp_verify,
    gaps,
    ids_bruteforce,
    ids_path,
    match_label,
    nearest_label,
    negative_v_check,
    sturmian_potential,
    union_gaps,
)
from sturmspec.spectree import boundary_energy, build_tree, energy_value, random_path

GOLDEN = (1,) * 40


@given(st.fractions(min_value=0, max_value=1, max_denominator=200), st.integers(5, 60), st.floats(0.2, 5), st.floats(-3, 6))
def test_bruteforce_matches_dense_count(alpha, n, V, E):
    diag = sturmian_potential(alpha, n, V)
    h = np.diag(diag) + np.diag(np.ones(n - 1), 1) + np.diag(np.ones(n - 1), -1)
    ev = np.linalg.eigvalsh(h)
    if np.min(np.abs(ev - E)) < 1e-9:
        return
    assert ids_bruteforce(alpha, V, E, n) == pytest.approx(open_chain_ids(alpha, V, E, n))


@given(st.floats(-5, 5), st.floats(-5, 5), st.integers(-3, 3))
def test_circle_distance(x, y, shift):
    d = circle_distance(x, y)
    assert 0 <= d <= 0.5 + 1e-12
    assert d == pytest.approx(circle_distance(y, x), abs=1e-12)
    assert d == pytest.approx(circle_distance(x + shift, y), abs=1e-9)


def test_label_matching_prefers_small_labels():
    alpha = float(cf_value((1,) * 12))
    # a value within tolerance of -2 alpha and also nearest to some large l
    value = (-2 * alpha) % 1 + 0.004
    label, _ = match_label(value, alpha, 144, 1 / 89)
    assert label == -2
    near, _ = nearest_label(value, alpha, 144)
    assert abs(near) > 2


def test_union_gaps():
    assert union_gaps(np.array([[0, 1], [2, 3], [0.5, 1.5]])) == [(1.5, 2.0)]
    assert union_gaps(np.array([[0, 1]])) == []


@pytest.mark.parametrize("V", [1.0, 5.0])
def test_path_series_against_bruteforce(V):
    tree = build_tree(GOLDEN, 12)
    rng = np.random.default_rng(1)
    tol = 2 / denominators(GOLDEN, 10)[-1]
    for _ in range(4):
        path = random_path(tree, 14, rng)
        E = energy_value(boundary_energy(tree, path, V))
        got = ids_path(tree, path).value
        assert abs(got - open_chain_ids(cf_value(GOLDEN[:20]), V, E, 3000)) <= tol


def test_path_series_tail_and_precision():
    tree = build_tree(GOLDEN, 6)
    path = random_path(tree, 3, np.random.default_rng(2))
    out = ids_path(tree, path)
    assert out.tail_bound > 0
    with pytest.raises(InsufficientDepth):
        ids_path(tree, path, precision=1e-9)


@pytest.mark.parametrize("V", [1.0, 3.0, 5.0])
def test_dry_tmp_golden(V):
    v = dry_tmp_verify(GOLDEN, 10, V, 5)
    assert v.status == "pass" and v.report.all_matched


def test_dry_tmp_labels_stable_across_coupling():
    a = {l for l in gaps(GOLDEN, 10, 1.0).labels if abs(l) <= 5}
    b = {l for l in gaps(GOLDEN, 10, 5.0).labels if abs(l) <= 5}
    assert a == b == {l for l in range(-5, 6) if l}


def test_largest_gaps_carry_unit_labels():
    rep = gaps(GOLDEN, 6, 2.0)
    widest = sorted(rep.gaps, key=lambda g: g.right - g.left)[-2:]
    assert {g.label for g in widest} == {-1, 1}


def test_too_shallow_and_zero_coupling():
    assert dry_tmp_verify(GOLDEN, 1, 1.0, 5).status == "insufficient depth"
    with pytest.raises(ZeroCoupling):
        gaps(GOLDEN, 4, 0.0)


def _oracle_gap_count(digits, k, V):
    e = np.vstack([band_edges(cf_value(digits[:k]), V), band_edges(cf_value(digits[: k + 1]), V)])
    e = e[np.argsort(e[:, 0])]
    cur, n = e[0, 1], 0
    for a, b in e[1:]:
        n += a > cur
        cur = max(cur, b)
    return n


@pytest.mark.parametrize("k", [4, 6, 8])
def test_gap_count_matches_oracle_at_strong_coupling(k):
    # at V = 8 every golden A-band lacks a child at the next level, giving q_{k+1} + q_{k-2} - 1 gaps
    qs = denominators(GOLDEN, k + 1)
    n = len(gaps(GOLDEN, k, 8.0).gaps)
    assert n == _oracle_gap_count(GOLDEN, k, 8.0) == qs[-1] + qs[-4] - 1


def test_mirror():
    tree = build_tree(GOLDEN, 6)
    rng = np.random.default_rng(3)
    paths = [random_path(tree, 12, rng) for _ in range(3)]
    rep = negative_v_check(tree, 6, 2.0, paths)
    assert rep.ok and rep.band_error < 1e-10
