"""Integrated density of states: brute-force counts, the tree-path series, gap labels."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .bandscan import spectrum
from .contfrac import alpha_expansion, convergents, denominators
from .errors import InsufficientDepth, ZeroCoupling
from .linalg import count_below
from .spectree import SpectralTree, boundary_energy, energy_value

INT64_SAFE = 2**62


def alpha_value(alpha_digits: Sequence[int]) -> Fraction:
    """Rational approximation of alpha from every supplied digit."""
    p, q = convergents(alpha_digits, len(alpha_digits))
    return Fraction(p, q)


def sturmian_potential(alpha: Fraction, n: int, V: float) -> np.ndarray:
    """V * omega(1..n) with omega(i) = floor((i+1) alpha) - floor(i alpha), in exact integers."""
    alpha = Fraction(alpha)
    p, q = alpha.numerator, alpha.denominator
    if (n + 1) * p < INT64_SAFE:
        i = np.arange(1, n + 1, dtype=np.int64)
        w = ((i + 1) * p) // q - (i * p) // q
    else:
        w = np.array([((i + 1) * p) // q - (i * p) // q for i in range(1, n + 1)], dtype=np.int64)
    return V * w.astype(float)


def ids_bruteforce(alpha: Fraction | Sequence[int], V: float, E, n: int):
    """Fraction of eigenvalues of the open n-site chain below E (vectorised over E)."""
    if not isinstance(alpha, Fraction):
        alpha = alpha_value(alpha)
    diag = sturmian_potential(alpha, n, V)
    counts = count_below(diag, np.ones(n - 1), E)
    return counts / n


@dataclass(frozen=True)
class PathIDS:
    value: float
    tail_bound: float
    terms: tuple[float, ...]


def ids_path(tree: SpectralTree, path: Sequence[int], precision: float | None = None, mirror: bool = False) -> PathIDS:
    """IDS at the boundary point of a tree path, summed level by level.

    Each visited vertex contributes (-1)^level (A-siblings passed + [vertex is A])
    times (q_level alpha - p_level); the root sits at level -1.  With
    mirror=True the root's two children swap roles, which is the tree for V < 0.
    Raises InsufficientDepth when the unsummed tail may exceed precision.
    """
    digits = tree.alpha_digits
    alpha = alpha_value(digits)
    walk = tree.walk(path)
    terms = []
    for u, nxt in zip(walk, walk[1:]):
        level = u.level
        kids = tree.children(u.id)
        rel = sum(1 for k in kids[: nxt.order] if tree.vertices[k].label == "A")
        if mirror and u.label == "root":
            rel = 1 - rel
        delta = 1 if u.label == "A" else 0
        p, q = convergents(digits, level)
        sign = -1 if level % 2 else 1
        terms.append(float(sign * (rel + delta) * (q * alpha - p)))
    value = -float(alpha) + math.fsum(terms)
    tail = _tail_bound(digits, walk[-1].level)
    if precision is not None and tail > precision:
        raise InsufficientDepth(f"tail bound {tail:.3g} exceeds requested precision {precision:.3g}")
    return PathIDS(value, tail, tuple(terms))


def _tail_bound(digits: Sequence[int], level: int) -> float:
    """Sum over unvisited levels l >= level of c_{l+1} / q_{l+1}, plus the truncated remainder."""
    qs = denominators(digits, len(digits))[1:]  # qs[l] = q_l
    total = 0.0
    for l in range(max(level, 0), len(digits)):
        total += (digits[l] + 1) / qs[l + 1]
    return total + 2.0 / qs[-1]


# -- gap labelling ---------------------------------------------------------------


@dataclass(frozen=True)
class Gap:
    left: float
    right: float
    ids: float
    label: int | None
    residual: float
    nearest: int

    @property
    def matched(self) -> bool:
        return self.label is not None


@dataclass
class GapReport:
    alpha_digits: tuple[int, ...]
    k: int
    V: float
    n: int
    tol: float
    gaps: list[Gap] = field(default_factory=list)

    @property
    def labels(self) -> set[int]:
        return {g.label for g in self.gaps if g.label is not None}

    @property
    def all_matched(self) -> bool:
        return all(g.matched for g in self.gaps)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["alpha", "V", "k", "gap_left", "gap_right", "ids", "l", "residual"])
        alpha = "cf:" + ",".join(map(str, self.alpha_digits[: self.k + 1]))
        for g in self.gaps:
            label = "" if g.label is None else g.label
            w.writerow([alpha, f"{self.V:.12g}", self.k, f"{g.left:.12g}", f"{g.right:.12g}", f"{g.ids:.12g}", label, f"{g.residual:.3g}"])
        return buf.getvalue()


def circle_distance(x: float, y: float) -> float:
    d = abs(x - y) % 1.0
    return min(d, 1.0 - d)


def _candidates(max_label: int, allow_zero: bool = True):
    if allow_zero:
        yield 0
    for mag in range(1, max_label + 1):
        yield mag
        yield -mag


def nearest_label(value: float, alpha: float, max_label: int, allow_zero: bool = True) -> tuple[int, float]:
    """l with |l| <= max_label minimising the circular distance of l*alpha to value; ties to smaller |l|."""
    best, best_r = 0, math.inf
    for l in _candidates(max_label, allow_zero):
        r = circle_distance(l * alpha, value)
        if r < best_r - 1e-15:
            best, best_r = l, r
    return best, best_r


def match_label(value: float, alpha: float, max_label: int, tol: float, allow_zero: bool = True) -> tuple[int | None, float]:
    """Smallest |l| <= max_label with l*alpha within tol of value (on the circle).

    The candidates l*alpha are packed more densely than the one-eigenvalue
    error of a finite open chain, so the nearest candidate is not a stable
    label; the smallest admissible one is.
    """
    for l in _candidates(max_label, allow_zero):
        r = circle_distance(l * alpha, value)
        if r <= tol:
            return l, r
    return None, nearest_label(value, alpha, max_label, allow_zero)[1]


def union_gaps(intervals: np.ndarray) -> list[tuple[float, float]]:
    """Bounded open intervals between the given closed intervals not covered by any of them."""
    ivs = sorted((float(a), float(b)) for a, b in intervals)
    out = []
    cur = ivs[0][1]
    for a, b in ivs[1:]:
        if a > cur:
            out.append((cur, a))
        cur = max(cur, b)
    return out


def gaps(alpha_digits: Sequence[int], k: int, V: float, max_label: int | None = None) -> GapReport:
    """Gaps of the union of the level-k and level-(k+1) bands, each labelled by its IDS.

    The IDS is evaluated at the gap midpoint on an open chain of q_{k+1} sites and
    matched against l*alpha mod 1 (0 < |l| <= q_k) with tolerance 1/q_k.  Only
    bounded gaps are listed; l = 0 belongs to the two unbounded ones.
    """
    if V == 0:
        raise ZeroCoupling("gap labels need V != 0")
    digits = tuple(alpha_digits)
    qs = denominators(digits, k + 1)
    qk, qk1 = qs[-2], qs[-1]
    if max_label is None:
        max_label = qk
    alpha = alpha_value(digits)
    edges = np.vstack([spectrum(alpha_expansion(digits, k), V).edges, spectrum(alpha_expansion(digits, k + 1), V).edges])
    holes = union_gaps(edges)
    mids = np.array([0.5 * (a + b) for a, b in holes])
    values = ids_bruteforce(alpha, V, mids, qk1) if len(mids) else np.array([])
    tol = 1.0 / qk
    report = GapReport(digits, k, V, qk1, tol)
    for (a, b), val in zip(holes, values):
        label, res = match_label(float(val), float(alpha), max_label, tol, allow_zero=False)
        near, _ = nearest_label(float(val), float(alpha), max_label, allow_zero=False)
        report.gaps.append(Gap(a, b, float(val), label, res, near))
    return report


@dataclass(frozen=True)
class GapVerdict:
    status: str
    missing: tuple[int, ...]
    unmatched: int
    report: GapReport


def dry_tmp_verify(alpha_digits: Sequence[int], k: int, V: float, L: int) -> GapVerdict:
    """Every gap carries a label, and every 1 <= |l| <= L shows up among the gaps.

    status is "pass", "insufficient depth" when some |l| <= L has no gap yet,
    or "unmatched" when a gap has no label within tolerance.
    """
    report = gaps(alpha_digits, k, V)
    seen = report.labels
    missing = tuple(l for l in range(-L, L + 1) if l and l not in seen)
    unmatched = sum(1 for g in report.gaps if not g.matched)
    if unmatched:
        status = "unmatched"
    elif missing:
        status = "insufficient depth"
    else:
        status = "pass"
    return GapVerdict(status, missing, unmatched, report)


@dataclass(frozen=True)
class MirrorReport:
    band_error: float
    ids_errors: tuple[float, ...]
    tol: float

    @property
    def ok(self) -> bool:
        return self.band_error <= 1e-10 and all(e <= self.tol for e in self.ids_errors)


def negative_v_check(tree: SpectralTree, k: int, V: float, paths: Sequence[Sequence[int]], n: int | None = None) -> MirrorReport:
    """Checks the V -> -V symmetry.

    Bands at -V are the negated bands at V, and the IDS at coupling -V
    evaluated at minus the boundary energy equals one minus the path series.
    """
    digits = tree.alpha_digits
    err = 0.0
    for lvl in range(0, k + 1):
        c = alpha_expansion(digits, lvl)
        a = spectrum(c, V).edges
        b = spectrum(c, -V).edges
        err = max(err, float(np.max(np.abs(a - (-b[::-1, ::-1])))))
    qs = denominators(digits, k)
    tol = 2.0 / qs[-1]
    if n is None:
        n = 40 * qs[-1]
    alpha = alpha_value(digits)
    errs = []
    for path in paths:
        E = energy_value(boundary_energy(tree, path, V))
        lhs = float(ids_bruteforce(alpha, -V, -E, n))
        rhs = 1.0 - ids_path(tree, path).value
        errs.append(abs(lhs - rhs))
    return MirrorReport(err, tuple(errs), tol)
