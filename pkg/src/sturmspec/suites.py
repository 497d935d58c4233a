"""Acceptance checks, shared by the test suite and the `verify` command.

Each check returns a CheckResult; none of them raise on a failed criterion.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Callable

import numpy as np

from .bandscan import spectrum_bands
from .bandtype import band_labels, classify, duality_pair, trace_ladder_check
from .contfrac import (
    alpha_expansion,
    concatenation_holds,
    denominators,
    make_contfrac,
    substitution_word,
    word_period,
    is_rotation,
)
from .errors import MissingNeighbor, PreconditionFail, TraceOverflow
from .ids import dry_tmp_verify, ids_bruteforce, ids_path, negative_v_check
from .interlace import admissible_triples, interlacing_check, rank2_decomposition
from .spectree import (
    ancestor_contains,
    boundary_energy,
    build_tree,
    energy_value,
    order_preserved,
    psi,
    random_path,
)
from .tracepoly import fricke_vogt_exact, fricke_vogt_residual, trace_eval, trace_poly

GOLDEN = (1,) * 40
SILVER = (2,) * 40


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    budget: float | None = None
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        budget = f" (budget {self.budget:g} s)" if self.budget else ""
        return f"[{status}] {self.name}: {self.detail} [{self.seconds:.2f} s{budget}]"


def timed(name: str, budget: float | None = None):
    def wrap(fn: Callable[..., tuple[bool, str, dict]]):
        def run(*args, **kwargs) -> CheckResult:
            t0 = time.perf_counter()
            ok, detail, data = fn(*args, **kwargs)
            return CheckResult(name, ok, detail, time.perf_counter() - t0, budget, data)

        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run

    return wrap


def _poly(*coeffs) -> tuple[Fraction, ...]:
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def hand_traces(V) -> dict[tuple[int, ...], tuple[Fraction, ...]]:
    """Low-level traces written out by hand (ascending coefficients in E)."""
    V = Fraction(V)
    return {
        (0,): _poly(2),
        (0, 0, 0): _poly(2),
        (0, 0, 1, -1): _poly(2),
        (0, 0): _poly(0, 1),
        (0, 0, -1): _poly(V, 1),
        (0, 0, 1): _poly(-V, 1),
        (0, 0, 2): _poly(-2, -V, 1),
        (0, 0, 1, 2): _poly(2 * V, V * V - 3, -2 * V, 1),
        (0, 0, 3): _poly(V, -3, -V, 1),
    }


@timed("1 closed-form traces", 1.0)
def check_traces():
    bad = []
    for V in (1, 3):
        for digits, poly in hand_traces(V).items():
            if trace_poly(make_contfrac(digits), Fraction(V)).coefficients != poly:
                bad.append((digits, V))
    return not bad, f"{2 * len(hand_traces(1)) - len(bad)}/{2 * len(hand_traces(1))} exact matches", {"bad": bad}


def closed_form_edges(V: float) -> tuple[list[tuple[float, float]], list[tuple[float, float]]]:
    """Hand-solved band edges of [0,0,2] and [0,0,2,1]."""
    r = math.sqrt(V * V / 4 + 4)
    e0, e1, e2, e3 = V / 2 - r, 0.0, V, V / 2 + r
    s1, s2 = math.sqrt(V * V + 2 * V + 9), math.sqrt(V * V - 2 * V + 9)
    e4, e5 = (V - 1) / 2 - s1 / 2, -1.0
    e6, e7 = (V + 1) / 2 - s2 / 2, 1.0
    e8, e9 = (V - 1) / 2 + s1 / 2, (V + 1) / 2 + s2 / 2
    return [(e0, e1), (e2, e3)], [(e4, e5), (e6, e7), (e8, e9)]


@timed("2 closed-form band edges", 1.0)
def check_edges(tol: float = 1e-10):
    worst = 0.0
    for V in (0.5, 1.0, 2.0, 5.0):
        two, three = closed_form_edges(V)
        for digits, expect in (((0, 0, 2), two), ((0, 0, 2, 1), three)):
            got = spectrum_bands(make_contfrac(digits), V).edges
            worst = max(worst, float(np.max(np.abs(got - np.array(expect)))))
    return worst < tol, f"max edge error {worst:.2e} (tol {tol:g})", {"worst": worst}


def _random_c(rng, max_level: int = 8, max_digit: int = 3):
    k = int(rng.integers(0, max_level + 1))
    return make_contfrac((0, 0) + tuple(int(d) for d in rng.integers(1, max_digit + 1, size=k)))


@lru_cache(maxsize=4)
def _fv_samples(count: int, seed: int):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        c = _random_c(rng)
        n = int(rng.integers(0, 4))
        V = float(8.0 * (1.0 - rng.random()))
        box = 3.0 + V
        E = float(rng.uniform(-box, box))
        try:
            r = fricke_vogt_residual(c, n, E, V)
            x, y, z = (trace_eval(cc, E, V) for cc in (c.extend(n + 1), c.extend(n), c))
        except TraceOverflow:
            out.append((c, n, E, V, math.inf, math.inf))
            continue
        scale = 1.0 + x * x + y * y + z * z + abs(x * y * z)
        out.append((c, n, E, V, abs(r), scale))
    return tuple(out)


@timed("3a Fricke-Vogt float path, absolute residual < 1e-8 on the whole box", 10.0)
def check_fricke_absolute(count: int = 1000, seed: int = 3, tol: float = 1e-8):
    s = _fv_samples(count, seed)
    bad = [x for x in s if not x[4] < tol]
    overflow = sum(1 for x in s if math.isinf(x[4]))
    return not bad, f"{count - len(bad)}/{count} below tol ({overflow} left the float range)", {"bad": len(bad)}


@timed("3b Fricke-Vogt float path, residual / (1 + x^2 + y^2 + z^2 + |xyz|) < 1e-8", 10.0)
def check_fricke_relative(count: int = 1000, seed: int = 3, tol: float = 1e-8):
    s = [x for x in _fv_samples(count, seed) if math.isfinite(x[4])]
    worst = max(r / sc for *_, r, sc in s)
    return worst < tol, f"max scaled residual {worst:.2e} over {len(s)} in-range samples", {"worst": worst}


@timed("3c Fricke-Vogt exact path, residual identically 0", 10.0)
def check_fricke_exact(count: int = 50, seed: int = 4):
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(count):
        c = _random_c(rng, max_level=5)
        n = int(rng.integers(0, 4))
        V = Fraction(int(rng.integers(1, 17)), int(rng.integers(1, 5)))
        if fricke_vogt_exact(c, n, V) != ():
            bad += 1
    return bad == 0, f"{count - bad}/{count} exact zeros", {}


@timed("4 band count and disjointness", 30.0)
def check_band_counts():
    bad = []
    n = 0
    for name, digits in (("golden", GOLDEN), ("silver", SILVER)):
        for k in range(0, 11):
            c = alpha_expansion(digits, k)
            q = denominators(digits, k)[-1]
            for V in (0.3, 1.0, 4.5):
                bs = spectrum_bands(c, V)
                n += 1
                if len(bs) != q or not bs.disjoint():
                    bad.append((name, k, V))
    return not bad, f"{n - len(bad)}/{n} (alpha, k, V) with exactly q disjoint bands", {"bad": bad}


@timed("5 A/B dichotomy and stability", 60.0)
def check_dichotomy():
    grid = (0.5, 1.0, 2.0, 3.0, 4.5, 8.0)
    bad = []
    for k in range(0, 9):
        c = alpha_expansion(GOLDEN, k)
        reps = classify(c, grid, strict=False)
        finals = [r.final for r in reps]
        qs = denominators(GOLDEN, k)
        expect = (qs[-1] - qs[-2], qs[-2])
        got = (finals.count("A"), finals.count("B"))
        if "inconsistent" in finals or got != expect:
            bad.append((k, got, expect))
    return not bad, f"levels 0..8 typed and stable on {len(grid)} couplings, counts (q_k - q_k-1, q_k-1)", {"bad": bad}


@timed("6 duality [c,m] vs [c,m-1,1]", 10.0)
def check_duality(count: int = 20, seed: int = 6):
    rng = np.random.default_rng(seed)
    bad = []
    swap = {"A": "B", "B": "A"}
    for _ in range(count):
        c = _random_c(rng, max_level=4)
        m = int(rng.integers(2, 5))
        V = float(rng.choice([0.5, 1.0, 2.0, 5.0]))
        left, right, la, lb = duality_pair(c, m, V)
        err = float(np.max(np.abs(left.edges - right.edges)))
        if err >= 1e-10 or any(a not in swap or b != swap[a] for a, b in zip(la, lb)):
            bad.append((str(c), m, V, err))
    return not bad, f"{count - len(bad)}/{count} identical edges with swapped types", {"bad": bad}


@timed("7 tree bijection", 30.0)
def check_tree():
    tree = build_tree(GOLDEN, 8)
    bad = []
    for V in (1.0, 5.0):
        if not ancestor_contains(tree, V):
            bad.append(("inclusion", V))
        if order_preserved(tree, V, max_gap=1):
            bad.append(("order", V))
    ce = build_tree((1, 2, 3, 1, 1), 3)
    u, w = ce.vertex_at((0,)), ce.vertex_at((1, 1))
    pu, pw = psi(ce, u, 1.0), psi(ce, w, 1.0)
    reproduced = pu.left < pw.left and pw.right < pu.right and ce.precedes(u, w)
    if not reproduced:
        bad.append(("counterexample", pu.as_interval(), pw.as_interval()))
    detail = f"inclusion and adjacent order at V=1,5; two-level counterexample {pw.as_interval()} inside {pu.as_interval()}"
    return not bad, detail, {"bad": bad}


def admissible_instances(count: int, seed: int, max_size: int = 60):
    rng = np.random.default_rng(seed)
    triples = admissible_triples()
    out = []
    while len(out) < count:
        c = _random_c(rng, max_level=4)
        m, n = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        cmn = c.extend(m, n)
        q = word_period(cmn).q
        if q > max_size:
            continue
        V = float(rng.choice([0.5, 1.0, 5.0]))
        out.append((c, m, n, V, triples[int(rng.integers(len(triples)))]))
    return out


def expected_trace(c, m: int, n: int, thetas) -> float:
    """trace(Y - Z): zero unless a block is 1x1, where Z carries 2 cos(theta) on the diagonal."""
    q1, q2 = word_period(c).q, word_period(c.extend(m)).q
    out = 0.0
    if q1 == 1:
        out -= 2 * math.cos(thetas[0])
    if n * q2 == 1:
        out -= 2 * math.cos(thetas[1])
    return out


@timed("8 rank-two interlacing", 60.0)
def check_interlacing(count: int = 200, seed: int = 8):
    bad = []
    worst = 0.0
    traceless = 0
    for c, m, n, V, th in admissible_instances(count, seed):
        rep = interlacing_check(c, m, n, V, th)
        dec = rank2_decomposition(c, m, n, V, *th)
        worst = max(worst, rep.decomposition_residual)
        expect = expected_trace(c, m, n, th)
        traceless += expect == 0.0
        if rep.decomposition_residual >= 1e-10 or not rep.ok or dec.rank > 2 or abs(dec.trace - expect) > 1e-10:
            bad.append((str(c), m, n, V, th))
    detail = (f"{count - len(bad)}/{count} instances, max decomposition residual {worst:.1e}, "
              f"rank <= 2 throughout, trace 0 in the {traceless} without 1x1 blocks")
    return not bad, detail, {"bad": bad, "traceless": traceless}


@timed("9 IDS path series vs brute force", 60.0)
def check_ids(count: int = 10, seed: int = 9, n_sites: int = 20000):
    tree = build_tree(GOLDEN, 12)
    rng = np.random.default_rng(seed)
    q10 = denominators(GOLDEN, 10)[-1]
    tol = 2.0 / q10
    worst = 0.0
    for _ in range(count):
        path = random_path(tree, 14, rng)
        series = ids_path(tree, path).value
        for V in (1.0, 5.0):
            E = energy_value(boundary_energy(tree, path, V))
            worst = max(worst, abs(series - float(ids_bruteforce(GOLDEN, V, E, n_sites))))
    return worst <= tol, f"max gap {worst:.2e} <= 2/q_10 = {tol:.2e}", {"worst": worst}


@timed("10 gap labels at desk scale", 120.0)
def check_gap_labels(k: int = 10, L: int = 5):
    verdicts = {V: dry_tmp_verify(GOLDEN, k, V, L) for V in (1.0, 5.0)}
    small = {V: {l for l in v.report.labels if abs(l) <= L} for V, v in verdicts.items()}
    ok = all(v.status == "pass" for v in verdicts.values()) and small[1.0] == small[5.0]
    detail = ", ".join(f"V={V:g}: {v.status}, {len(v.report.gaps)} gaps" for V, v in verdicts.items())
    return ok, detail + f"; labels |l|<={L} equal across V: {small[1.0] == small[5.0]}", {}


@timed("11 negative coupling mirror", 10.0)
def check_mirror(k: int = 6, count: int = 5, seed: int = 11):
    tree = build_tree(GOLDEN, k)
    rng = np.random.default_rng(seed)
    paths = [random_path(tree, 14, rng) for _ in range(count)]
    reports = [negative_v_check(tree, k, V, paths) for V in (1.0, 5.0)]
    ok = all(r.ok for r in reports)
    worst_b = max(r.band_error for r in reports)
    worst_i = max(max(r.ids_errors) for r in reports)
    return ok, f"band mirror {worst_b:.1e}, IDS complement {worst_i:.1e} (tol {reports[0].tol:.2e})", {}


@timed("12 trace ladder on type-B bands", 30.0)
def check_ladder(V: float = 0.5, tol: float = 1e-8):
    applied = skipped = 0
    bad = []
    for k in range(0, 7):
        c = alpha_expansion(GOLDEN, k)
        for band in spectrum_bands(c, V):
            for m in (1, 2, 3):
                for side in ("J", "K"):
                    try:
                        rep = trace_ladder_check(band, m, 3, V, side)
                    except (PreconditionFail, MissingNeighbor):
                        skipped += 1
                        continue
                    applied += 1
                    if rep.max_error() > tol or not rep.monotone or not rep.signs_positive:
                        bad.append((k, band.index, m, side))
    ok = not bad and applied > 0
    return ok, f"{applied - len(bad)}/{applied} applicable instances ({skipped} outside the precondition)", {"applied": applied}


@timed("13 words", 5.0)
def check_words():
    bad = []
    for name, digits in (("golden", GOLDEN), ("silver", SILVER)):
        for k in range(0, 11):
            wp = word_period(alpha_expansion(digits, k))
            if sum(wp.bits) != wp.p:
                bad.append(("ones", name, k))
            if k >= 2 and not concatenation_holds(digits, k):
                bad.append(("concat", name, k))
            if k >= 1 and not is_rotation(substitution_word(digits, k), "".join(map(str, wp.bits))):
                bad.append(("rotation", name, k))
    return not bad, "ones count, concatenation and substitution rotation for k <= 10", {"bad": bad}


ALL_CHECKS = {
    "traces": [check_traces],
    "edges": [check_edges],
    "fricke": [check_fricke_absolute, check_fricke_relative, check_fricke_exact],
    "bands": [check_band_counts],
    "dichotomy": [check_dichotomy],
    "duality": [check_duality],
    "tree": [check_tree],
    "interlace": [check_interlacing],
    "ids": [check_ids],
    "dry-tmp": [check_gap_labels],
    "mirror": [check_mirror],
    "ladder": [check_ladder],
    "words": [check_words],
}
