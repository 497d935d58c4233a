"""Spectral bands of periodic approximants, Floquet matrices and band bookkeeping."""
from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np
import scipy.linalg

from .contfrac import ContFrac, Degenerate, evaluate, make_contfrac, reduce, word_of
from .errors import DegenerateExpansion, ZeroCoupling
from .linalg import count_below, isolate_real_roots, jacobi_eigenvalues, periodic_banded_form
from .tracepoly import padd, pconst, trace_poly, trace_value

PI = math.pi
TOUCH_TOL = 1e-9
JACOBI_BAND_LIMIT = 96
EXACT_LIMIT = 64


@dataclass(frozen=True)
class Band:
    left: float
    right: float
    index: int
    parent: ContFrac
    theta_left: float = float("nan")
    theta_right: float = float("nan")

    @property
    def width(self) -> float:
        return self.right - self.left

    @property
    def is_full_line(self) -> bool:
        return math.isinf(self.left) and math.isinf(self.right)

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.left - tol <= x <= self.right + tol

    def as_interval(self) -> tuple[float, float]:
        return self.left, self.right

    def record(self, V: float, label: str | None = None) -> dict:
        return {
            "cf": list(self.parent.digits),
            "V": V,
            "index": self.index,
            "left": self.left,
            "right": self.right,
            "theta_left": self.theta_left,
            "theta_right": self.theta_right,
            "type": label,
        }


@dataclass(frozen=True)
class BandSet:
    cf: ContFrac
    V: float
    bands: tuple[Band, ...]
    full_line: bool = False

    def __len__(self) -> int:
        return len(self.bands)

    def __iter__(self) -> Iterator[Band]:
        return iter(self.bands)

    def __getitem__(self, i: int) -> Band:
        return self.bands[i]

    @property
    def edges(self) -> np.ndarray:
        return np.array([[b.left, b.right] for b in self.bands])

    def disjoint(self, tol: float = TOUCH_TOL) -> bool:
        return all(a.left < a.right and a.right + tol < b.left for a, b in zip(self.bands, self.bands[1:])) and (
            not self.bands or self.bands[-1].left < self.bands[-1].right
        )


def full_line(c: ContFrac, V: float) -> BandSet:
    return BandSet(c, V, (Band(-math.inf, math.inf, 0, c),), full_line=True)


@dataclass(frozen=True)
class FloquetMatrix:
    matrix: np.ndarray = field(compare=False)
    cf: ContFrac
    V: float
    theta: float
    n_copies: int

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


def _potential(c: ContFrac, V: float) -> np.ndarray:
    """Site potential over one period; [0,0,-1] behaves like [0,0,1] with -V."""
    r = reduce(c)
    if r.digits == (0, 0, -1):
        return np.array([-float(V)])
    val = evaluate(c)
    if isinstance(val, Degenerate):
        raise DegenerateExpansion(f"{c} has the whole line as spectrum")
    return float(V) * np.array(word_of(val).bits, dtype=float)


def period(c: ContFrac) -> int:
    r = reduce(c)
    if r.digits == (0, 0, -1):
        return 1
    val = evaluate(c)
    if isinstance(val, Degenerate):
        raise DegenerateExpansion(str(c))
    return val.denominator


def build_floquet(c: ContFrac, V: float, theta: float, n_copies: int = 1) -> FloquetMatrix:
    """Periodic tridiagonal matrix with boundary phase theta in {0, pi}."""
    diag = np.tile(_potential(c, V), n_copies)
    n = diag.shape[0]
    corner = math.cos(theta)
    corner = round(corner)
    h = np.diag(diag)
    for i in range(n - 1):
        h[i, i + 1] += 1.0
        h[i + 1, i] += 1.0
    h[0, n - 1] += corner
    h[n - 1, 0] += corner
    return FloquetMatrix(h, c, float(V), theta, n_copies)


def eigenvalues(m, cap: int | None = None) -> np.ndarray:
    mat = m.matrix if isinstance(m, FloquetMatrix) else np.asarray(m, dtype=float)
    if cap is None:
        return jacobi_eigenvalues(mat)
    return jacobi_eigenvalues(mat, cap=cap)


def counting(lam: float, m, tol: float = 0.0) -> int:
    """Number of eigenvalues strictly below lam - tol."""
    ev = eigenvalues(m) if not isinstance(m, np.ndarray) or m.ndim != 1 else m
    return int(np.sum(ev < lam - tol))


def _floquet_eigs(c: ContFrac, V: float, theta: float, method: str) -> np.ndarray:
    if method == "jacobi":
        return eigenvalues(build_floquet(c, V, theta))
    diag = _potential(c, V)
    if diag.shape[0] <= 2:
        return np.linalg.eigvalsh(build_floquet(c, V, theta).matrix)
    band = periodic_banded_form(diag, float(round(math.cos(theta))))
    return np.sort(scipy.linalg.eig_banded(band, lower=True, eigvals_only=True))


def exact_V(V) -> Fraction:
    if isinstance(V, Fraction):
        return V
    if isinstance(V, int):
        return Fraction(V)
    return Fraction(repr(float(V)))


def _exact_edges(c: ContFrac, V: float) -> tuple[np.ndarray, np.ndarray]:
    """Roots of t_c - 2 and t_c + 2 isolated by Sturm chains."""
    Vq = exact_V(V)
    t = trace_poly(c, Vq).coefficients
    box = 3 + abs(Vq)
    width = 1e-14
    plus = isolate_real_roots(padd(t, pconst(-2)), -box, box, width)
    minus = isolate_real_roots(padd(t, pconst(2)), -box, box, width)
    mid = lambda iv: float((iv[0] + iv[1]) / 2)  # noqa: E731
    return np.array([mid(iv) for iv in plus]), np.array([mid(iv) for iv in minus])


def _bands_from_pairs(c: ContFrac, zero: np.ndarray, pi: np.ndarray) -> tuple[Band, ...]:
    bands = []
    for j, (a, b) in enumerate(zip(zero, pi)):
        if a <= b:
            bands.append(Band(float(a), float(b), j, c, 0.0, PI))
        else:
            bands.append(Band(float(b), float(a), j, c, PI, 0.0))
    return tuple(bands)


def _bands_exact(c: ContFrac, V: float) -> tuple[Band, ...]:
    zero, pi = _exact_edges(c, V)
    tagged = sorted([(float(x), 0.0) for x in zero] + [(float(x), PI) for x in pi])
    q = period(c)
    if len(tagged) != 2 * q:
        raise ArithmeticError(f"expected {2 * q} edges, isolated {len(tagged)}")
    return tuple(
        Band(tagged[2 * j][0], tagged[2 * j + 1][0], j, c, tagged[2 * j][1], tagged[2 * j + 1][1]) for j in range(q)
    )


def choose_method(q: int) -> str:
    return "jacobi" if q <= JACOBI_BAND_LIMIT else "banded"


@functools.lru_cache(maxsize=8192)
def _spectrum_cached(digits: tuple[int, ...], V: float, method: str) -> BandSet:
    c = ContFrac(digits)
    if method == "auto":
        method = choose_method(period(c))
    if method == "exact":
        bands = _bands_exact(c, V)
    else:
        zero = _floquet_eigs(c, V, 0.0, method)
        pi = _floquet_eigs(c, V, PI, method)
        bands = _bands_from_pairs(c, zero, pi)
    return BandSet(c, V, bands)


def spectrum_bands(c: ContFrac | Sequence[int], V: float, method: str = "auto") -> BandSet:
    """The q bands of {E : |t_c(E, V)| <= 2}, ordered left to right.

    method is "jacobi" (own dense solver), "banded" (LAPACK on a
    bandwidth-two reordering), "exact" (Sturm chains) or "auto".
    """
    if not isinstance(c, ContFrac):
        c = make_contfrac(c)
    if V == 0:
        raise ZeroCoupling("V = 0 collapses every spectrum to [-2, 2]")
    r = reduce(c)
    if r.digits != (0, 0, -1) and isinstance(evaluate(c), Degenerate):
        raise DegenerateExpansion(f"{c} has the whole line as spectrum")
    return _spectrum_cached(c.digits, float(V), method)


def spectrum(c: ContFrac | Sequence[int], V: float, method: str = "auto") -> BandSet:
    """Like spectrum_bands but returns the full-line variant for degenerate expansions."""
    if not isinstance(c, ContFrac):
        c = make_contfrac(c)
    r = reduce(c)
    if r.digits != (0, 0, -1) and isinstance(evaluate(c), Degenerate):
        if V == 0:
            raise ZeroCoupling("V = 0")
        return full_line(c, float(V))
    return spectrum_bands(c, V, method)


# -- relations between intervals -------------------------------------------------


class Relation(str, enum.Enum):
    STRICT_SUBSET = "strict_subset"
    SUBSET = "subset"
    STRICTLY_LEFT_OF = "strictly_left_of"
    LEFT_OF = "left_of"
    STRICT_SUPERSET = "strict_superset"
    SUPERSET = "superset"
    STRICTLY_RIGHT_OF = "strictly_right_of"
    RIGHT_OF = "right_of"


def _lr(x) -> tuple[float, float]:
    if isinstance(x, Band):
        return x.left, x.right
    return float(x[0]), float(x[1])


def strictly_inside(inner, outer, tol: float = 0.0) -> bool:
    a, b = _lr(inner)
    c, d = _lr(outer)
    return c < a - tol and b + tol < d if tol else c < a and b < d


def weakly_inside(inner, outer, tol: float = TOUCH_TOL) -> bool:
    a, b = _lr(inner)
    c, d = _lr(outer)
    return c <= a + tol and b <= d + tol


def precedes(first, second) -> bool:
    a, b = _lr(first)
    c, d = _lr(second)
    return a < c and b < d


def strictly_left(first, second) -> bool:
    return _lr(first)[1] < _lr(second)[0]


def band_relation(I, J) -> Relation:
    """Strongest relation of I to J; every pair of compact intervals gets one."""
    if strictly_inside(I, J):
        return Relation.STRICT_SUBSET
    if weakly_inside(I, J, 0.0):
        return Relation.SUBSET
    if strictly_inside(J, I):
        return Relation.STRICT_SUPERSET
    if weakly_inside(J, I, 0.0):
        return Relation.SUPERSET
    if strictly_left(I, J):
        return Relation.STRICTLY_LEFT_OF
    if strictly_left(J, I):
        return Relation.STRICTLY_RIGHT_OF
    return Relation.LEFT_OF if precedes(I, J) else Relation.RIGHT_OF


def find_container(band, bandset: BandSet, strict: bool = True, tol: float = TOUCH_TOL) -> Band | None:
    for b in bandset:
        if (strictly_inside(band, b) if strict else weakly_inside(band, b, tol)):
            return b
    return None


# -- band edge attributes --------------------------------------------------------


def band_trace_zero(band: Band, V: float, iters: int = 200) -> float:
    """Zero of t_c inside the band, by bisection (t_c is monotone on a band)."""
    lo, hi = band.left, band.right
    flo = trace_value(band.parent, lo, V)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fm = trace_value(band.parent, mid, V)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def edge_theta(band: Band, side: str) -> float:
    """Boundary phase of an edge from index parity: left uses ind - q, right uses ind + 1 - q."""
    q = period(band.parent)
    if side in ("L", "left", 0):
        parity = (band.index - q) % 2
    elif side in ("R", "right", 1):
        parity = (band.index + 1 - q) % 2
    else:
        raise ValueError(f"side must be L or R, got {side!r}")
    return PI * parity


def admissible(ind_c: int, ind_cm: int, ind_cmn: int, side_c: int, side_cm: int, side_cmn: int, n: int) -> bool:
    """Index form of admissibility; sides are 0 for a left edge and 1 for a right edge."""
    return (ind_c + n * ind_cm + ind_cmn - side_c - n * side_cm - side_cmn) % 2 == 0


def theta_admissible(theta_c: float, theta_cm: float, theta_cmn: float) -> bool:
    total = round((theta_c + theta_cm + theta_cmn) / PI)
    return total % 2 == 0


def _distance_to_set(x: float, intervals: np.ndarray) -> float:
    inside = (intervals[:, 0] <= x) & (x <= intervals[:, 1])
    if np.any(inside):
        return 0.0
    return float(np.min(np.minimum(np.abs(intervals[:, 0] - x), np.abs(intervals[:, 1] - x))))


def _directed(a: np.ndarray, b: np.ndarray) -> float:
    points = list(a.ravel())
    gaps = [(b[i, 1], b[i + 1, 0]) for i in range(len(b) - 1)]
    for lo, hi in gaps:
        mid = 0.5 * (lo + hi)
        for l, r in a:
            if l <= mid <= r:
                points.append(mid)
    return max(_distance_to_set(x, b) for x in points)


def hausdorff_distance(A: BandSet, B: BandSet) -> float:
    a, b = A.edges, B.edges
    return max(_directed(a, b), _directed(b, a))


def open_chain_count(c: ContFrac, V: float, E) -> np.ndarray:
    """Eigenvalues below E of one period with open ends."""
    diag = _potential(c, V)
    return count_below(diag, np.ones(diag.shape[0] - 1), E)
