"""Rank-one and rank-two eigenvalue interlacing between H_[c,m,n] and the block matrix of H_[c,m]^(xn) and H_c."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bandscan import PI, _potential, build_floquet, eigenvalues, period
from .contfrac import ContFrac, is_rotation, make_contfrac
from .errors import NotAdmissible, SizeCap
from .linalg import JACOBI_CAP

SIMPLE_GAP = 1e-9
ORDER_TOL = 1e-10
STRICT_MARGIN = 1e-12


def rank1_interlace_check(X, v, tol: float = ORDER_TOL) -> bool:
    """lambda_{j-1}(X + vv^t) <= lambda_j(X) <= lambda_j(X + vv^t)."""
    X = np.asarray(X, dtype=float)
    v = np.asarray(v, dtype=float).reshape(-1)
    if X.shape != (v.size, v.size):
        raise ValueError("matrix and vector sizes differ")
    a = eigenvalues(X)
    b = eigenvalues(X + np.outer(v, v))
    lower = all(b[j - 1] <= a[j] + tol for j in range(1, a.size))
    upper = all(a[j] <= b[j] + tol for j in range(a.size))
    return lower and upper


def _periodic(diag: np.ndarray, theta: float) -> np.ndarray:
    n = diag.shape[0]
    h = np.diag(diag.astype(float))
    for i in range(n - 1):
        h[i, i + 1] += 1.0
        h[i + 1, i] += 1.0
    corner = round(math.cos(theta))
    h[0, n - 1] += corner
    h[n - 1, 0] += corner
    return h


def _theta_sum_ok(thetas) -> bool:
    s = sum(thetas) / PI
    return abs(s - round(s)) < 1e-12 and round(s) % 2 == 0


@dataclass
class Decomposition:
    Y: np.ndarray
    Z: np.ndarray
    x: np.ndarray
    y: np.ndarray
    d1: int
    d2: int
    long_first: bool

    @property
    def residual(self) -> float:
        return float(np.max(np.abs(self.Y - self.Z - np.outer(self.x, self.x) + np.outer(self.y, self.y))))

    @property
    def trace(self) -> float:
        return float(np.trace(self.Y - self.Z))

    def singular_values(self) -> np.ndarray:
        return np.linalg.svd(self.Y - self.Z, compute_uv=False)

    @property
    def rank(self) -> int:
        return int(np.sum(self.singular_values() > 1e-10))

    def orthogonality_forces_zero(self) -> bool:
        """A vector supported on one block and orthogonal to x and y vanishes at that block's two ends."""
        q3 = self.Y.shape[0]
        ok = True
        for lo, hi in ((0, self.d1), (self.d1, q3)):
            A = np.vstack([self.x[lo:hi], self.y[lo:hi]])
            # null space of A inside the block; its vectors must vanish at both block ends
            _, s, vt = np.linalg.svd(A)
            null = vt[int(np.sum(s > 1e-12)) :]
            if null.size:
                ok &= bool(np.all(np.abs(null[:, [0, -1]]) < 1e-10)) if hi - lo > 1 else bool(np.all(np.abs(null) < 1e-10))
        return ok


def explicit_xy(thetas: tuple[float, float, float], q1: int, q2: int, n: int) -> tuple[np.ndarray, np.ndarray] | None:
    """Closed-form x, y for even n and the four admissible phase triples (theta_c, theta_cm, theta_cmn)."""
    if n % 2:
        return None
    key = tuple(int(round(t / PI)) for t in thetas)
    signs = {
        (0, 0, 0): ((1, -1, -1, 1), (-1, -1, 1, 1)),
        (1, 1, 0): ((1, 1, 1, 1), (-1, 1, -1, 1)),
        (1, 0, 1): ((-1, 1, 1, 1), (1, 1, -1, 1)),
        (0, 1, 1): ((1, 1, 1, -1), (-1, 1, -1, -1)),
    }.get(key)
    if signs is None:
        return None
    q3 = n * q2 + q1
    idx = [0, n * q2 - 1, n * q2, q3 - 1]
    out = []
    for sg in signs:
        v = np.zeros(q3)
        for i, s in zip(idx, sg):
            v[i] += s
        out.append(v / math.sqrt(2))
    return out[0], out[1]


def _as_cf(c) -> ContFrac:
    return c if isinstance(c, ContFrac) else make_contfrac(c)


def rank2_decomposition(c, m: int, n: int, V: float, theta_c: float, theta_cm: float, theta_cmn: float) -> Decomposition:
    """Y - Z = xx^t - yy^t with Y = H_[c,m,n](theta_cmn) and Z the block-diagonal pair.

    Z puts H_[c,m]^(xn) first when n is even and H_c first when n is odd.  Y
    is the period of [c,m,n] read in the same block order, which is a cyclic
    rotation of the standard period and so has the same spectrum.
    """
    thetas = (theta_c, theta_cm, theta_cmn)
    if not _theta_sum_ok(thetas):
        raise NotAdmissible(f"phase sum {sum(thetas) / PI:g} pi is not 0 or 2 pi")
    c = _as_cf(c)
    cm = c.extend(m)
    cmn = cm.extend(n)
    short = _potential(c, V)
    long_ = np.tile(_potential(cm, V), n)
    long_first = n % 2 == 0
    diag = np.concatenate([long_, short] if long_first else [short, long_])
    word = "".join("1" if d else "0" for d in diag)
    target = "".join("1" if d else "0" for d in _potential(cmn, V))
    if not is_rotation(word, target):
        raise AssertionError(f"blocks of {cmn} do not concatenate to its period")
    Y = _periodic(diag, theta_cmn)
    blocks = [build_floquet(cm, V, theta_cm, n).matrix, build_floquet(c, V, theta_c).matrix]
    if not long_first:
        blocks.reverse()
    d1 = blocks[0].shape[0]
    Z = np.zeros_like(Y)
    Z[:d1, :d1] = blocks[0]
    Z[d1:, d1:] = blocks[1]
    xy = explicit_xy(thetas, period(c), period(cm), n)
    if xy is None:
        w, vecs = np.linalg.eigh(Y - Z)
        x = math.sqrt(max(w[-1], 0.0)) * vecs[:, -1]
        y = math.sqrt(max(-w[0], 0.0)) * vecs[:, 0]
    else:
        x, y = xy
    return Decomposition(Y, Z, x, y, d1, Y.shape[0] - d1, long_first)


@dataclass(frozen=True)
class InterlaceReport:
    eig_Y: np.ndarray
    eig_X: np.ndarray
    violations: tuple[int, ...]
    strict_failures: tuple[int, ...]
    simple: tuple[int, ...]
    decomposition_residual: float

    @property
    def holds(self) -> bool:
        return not self.violations

    @property
    def strict(self) -> bool:
        return not self.strict_failures

    @property
    def ok(self) -> bool:
        return self.holds and self.strict


def interlacing_check(c, m: int, n: int, V: float, thetas: tuple[float, float, float], cap: int = JACOBI_CAP) -> InterlaceReport:
    """lambda_{j-1}(Y) <= lambda_j(X) <= lambda_{j+1}(Y), strict wherever lambda_j(X) is simple."""
    c = _as_cf(c)
    q3 = period(c.extend(m, n))
    if q3 > cap:
        raise SizeCap(f"period {q3} exceeds cap {cap}")
    dec = rank2_decomposition(c, m, n, V, *thetas)
    ey = eigenvalues(dec.Y, cap)
    ex = eigenvalues(dec.Z, cap)
    size = ex.size
    bad, not_strict, simple = [], [], []
    for j in range(size):
        lo_ok = j == 0 or ey[j - 1] <= ex[j] + ORDER_TOL
        hi_ok = j == size - 1 or ex[j] <= ey[j + 1] + ORDER_TOL
        if not (lo_ok and hi_ok):
            bad.append(j)
        gaps = [abs(ex[j] - ex[i]) for i in (j - 1, j + 1) if 0 <= i < size]
        if all(g > SIMPLE_GAP for g in gaps):
            simple.append(j)
            lo_strict = j == 0 or ex[j] - ey[j - 1] > STRICT_MARGIN
            hi_strict = j == size - 1 or ey[j + 1] - ex[j] > STRICT_MARGIN
            if not (lo_strict and hi_strict):
                not_strict.append(j)
    return InterlaceReport(ey, ex, tuple(bad), tuple(not_strict), tuple(simple), dec.residual)


def admissible_triples() -> list[tuple[float, float, float]]:
    return [(0.0, 0.0, 0.0), (PI, PI, 0.0), (PI, 0.0, PI), (0.0, PI, PI)]
