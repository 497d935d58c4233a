import numpy as np
import pytest

from oracles import denominators
from sturmspec.bandscan import spectrum
from sturmspec.contfrac import alpha_expansion
from sturmspec.errors import DepthExceeded
from sturmspec.spectree import (
    EnergyInterval,
    ancestor_contains,
    boundary_energy,
    build_tree,
    compare_paths,
    energy_value,
    ids_by_counting,
    injectivity_bound_check,
    leftmost_path,
    lipschitz_check,
    order_preserved,
    position,
    psi,
    psi_by_position,
    random_path,
    rightmost_path,
)

GOLDEN = (1,) * 40


@pytest.fixture(scope="module")
def golden8():
    return build_tree(GOLDEN, 8)


def test_level_counts(golden8):
    for k in range(0, 9):
        qs = denominators(GOLDEN, k)
        prev = qs[-2] if k else 0
        assert golden8.counts(k) == (qs[-1] - prev, prev)


@pytest.mark.parametrize("V", [1.0, 5.0])
def test_inclusion_and_order(golden8, V):
    assert ancestor_contains(golden8, V)
    assert order_preserved(golden8, V, max_gap=1) == []


def test_position_matches_label_rank(golden8):
    for k in range(0, 9):
        for i, v in enumerate(golden8.level(k)):
            assert position(golden8, v.path) == i
            assert psi(golden8, v, 2.0) == psi_by_position(golden8, v, 2.0)


def test_two_level_counterexample():
    tree = build_tree((1, 2, 3, 1), 3)
    u, w = tree.vertex_at((0,)), tree.vertex_at((1, 1))
    assert (u.level, w.level, w.label) == (0, 2, "A")
    assert tree.precedes(u, w)
    pu, pw = psi(tree, u, 1.0), psi(tree, w, 1.0)
    assert pu.as_interval() == pytest.approx((-2.0, 2.0))
    assert pw.as_interval() == pytest.approx((0.0, 2**0.5), abs=1e-12)
    assert pu.left < pw.left and pw.right < pu.right


def _in_union(x, k, V):
    bands = list(spectrum(alpha_expansion(GOLDEN, k), V)) + list(spectrum(alpha_expansion(GOLDEN, k + 1), V))
    return any(b.left - 1e-9 <= x <= b.right + 1e-9 for b in bands)


@pytest.mark.parametrize("V", [1.0, 3.0])
def test_extreme_paths_nest(V):
    prev = {}
    for depth in (12, 14, 16, 18):
        tree = build_tree(GOLDEN, depth)
        for name, rule in (("left", leftmost_path), ("right", rightmost_path)):
            out = boundary_energy(tree, rule(tree, depth), V)
            iv = (out.left, out.right) if isinstance(out, EnergyInterval) else (out, out)
            if name in prev:
                assert prev[name][0] - 1e-12 <= iv[0] <= iv[1] <= prev[name][1] + 1e-12
            prev[name] = iv
    lo, hi = energy_value(prev["left"][0]), energy_value(prev["right"][1])
    for k in range(0, 12):
        assert _in_union(lo, k, V) and _in_union(hi, k, V)
        sig = spectrum(alpha_expansion(GOLDEN, k), V)
        assert lo >= min(sig[0].left, spectrum(alpha_expansion(GOLDEN, k + 1), V)[0].left) - 1e-9


def test_short_path_gives_interval(golden8):
    out = boundary_energy(golden8, (1, 0), 1.0)
    assert isinstance(out, EnergyInterval) and out.left < out.midpoint < out.right
    with pytest.raises(IndexError):
        boundary_energy(golden8, (0, 1), 1.0)


def test_depth_limits():
    tree = build_tree((1, 1, 1), 3)
    with pytest.raises(DepthExceeded):
        tree.children(tree.level(3)[0].id)


def test_compare_and_random_paths(golden8):
    rng = np.random.default_rng(0)
    paths = [random_path(golden8, 8, rng) for _ in range(6)]
    for p in paths:
        assert compare_paths(p, p) == "equal"
    assert compare_paths((0, 1), (1,)) == "less"
    assert compare_paths((1, 0), (0, 5)) == "greater"


def test_lipschitz_and_injectivity(golden8):
    p = leftmost_path(golden8, 8)
    assert lipschitz_check(golden8, p, 2.0, 2.5)
    rep = injectivity_bound_check(golden8, leftmost_path(golden8, 8), rightmost_path(golden8, 8), 5.0)
    assert rep.ok


def test_counting_fraction(golden8):
    v = golden8.level(4)[2]
    assert ids_by_counting(golden8, v) == pytest.approx(2 / 5)


def test_exports(golden8):
    assert '"level"' in golden8.to_json() or "level" in golden8.to_json()
    assert golden8.to_dot().startswith("digraph")
