"""Small numerical kernels: cyclic Jacobi, tridiagonal Sturm counts, exact Sturm chains."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import SizeCap

JACOBI_CAP = 600
JACOBI_TOL = 1e-13
MAX_SWEEPS = 60


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Tournament schedule: every index pair meets once per sweep, disjoint within a round."""
    players = list(range(n)) + ([-1] if n % 2 else [])
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a >= 0 and b >= 0:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=int), np.array(qs, dtype=int)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def jacobi_eigenvalues(matrix, cap: int = JACOBI_CAP, tol: float = JACOBI_TOL) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix by parallel-order cyclic Jacobi sweeps.

    Each round rotates a set of disjoint index pairs at once, so a sweep
    costs n-1 vectorised rounds.  Stops when the off-diagonal Frobenius
    norm drops below tol * ||M||_F.
    """
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    if n > cap:
        raise SizeCap(f"size {n} exceeds the Jacobi cap {cap}")
    if n <= 1:
        return np.sort(np.diag(a))
    a = 0.5 * (a + a.T)
    norm = np.linalg.norm(a)
    if norm == 0:
        return np.zeros(n)
    rounds = _round_robin(n)
    for _ in range(MAX_SWEEPS):
        off = math.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0))
        if off <= tol * norm:
            break
        for P, Q in rounds:
            apq = a[P, Q]
            active = np.abs(apq) > 1e-300
            if not np.any(active):
                continue
            P, Q, apq = P[active], Q[active], apq[active]
            with np.errstate(over="ignore"):
                theta = (a[Q, Q] - a[P, P]) / (2.0 * apq)
                t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            t[theta == 0] = 1.0
            t[~np.isfinite(theta)] = 0.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            rp, rq = a[P, :], a[Q, :]
            a[P, :] = c[:, None] * rp - s[:, None] * rq
            a[Q, :] = s[:, None] * rp + c[:, None] * rq
            cp, cq = a[:, P], a[:, Q]
            a[:, P] = cp * c - cq * s
            a[:, Q] = cp * s + cq * c
            a[P, Q] = 0.0
            a[Q, P] = 0.0
    return np.sort(np.diag(a))


def count_below(diag, offdiag, x, inclusive: bool = False):
    """Number of eigenvalues of the open tridiagonal matrix below x (Sylvester inertia).

    Vectorised over x.  With inclusive=True eigenvalues equal to x count too.
    """
    diag = np.asarray(diag, dtype=float)
    off2 = np.asarray(offdiag, dtype=float) ** 2
    x = np.asarray(x, dtype=float)
    if inclusive:
        x = np.nextafter(x, np.inf)
    tiny = np.finfo(float).tiny * 1e10
    d = diag[0] - x
    d = np.where(d == 0, -tiny, d)
    count = (d < 0).astype(np.int64)
    for i in range(1, diag.shape[0]):
        d = diag[i] - x - off2[i - 1] / d
        d = np.where(d == 0, -tiny, d)
        count += d < 0
    return count


def periodic_banded_form(diag, corner: float) -> np.ndarray:
    """Lower band storage (bandwidth 2) of a unit-hopping periodic tridiagonal matrix.

    Ordering the sites as 1, q, 2, q-1, ... turns the corner coupling into
    an entry within distance two of the diagonal.
    """
    diag = np.asarray(diag, dtype=float)
    n = diag.shape[0]
    order = []
    lo, hi = 0, n - 1
    while lo <= hi:
        order.append(lo)
        if hi != lo:
            order.append(hi)
        lo += 1
        hi -= 1
    pos = np.empty(n, dtype=int)
    pos[order] = np.arange(n)
    band = np.zeros((3, n))
    band[0] = diag[order]
    edges = [(i, i + 1, 1.0) for i in range(n - 1)] + [(0, n - 1, corner)]
    for i, j, w in edges:
        a, b = sorted((pos[i], pos[j]))
        band[b - a, a] += w
    return band


# -- exact Sturm chains ----------------------------------------------------------

IntPoly = list[int]


def to_int_poly(coeffs: Sequence[Fraction]) -> IntPoly:
    """Primitive integer multiple (positive scale) of a rational polynomial."""
    coeffs = [Fraction(c) for c in coeffs]
    lcm = 1
    for c in coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in coeffs]
    return _primitive(ints)


def _primitive(p: IntPoly) -> IntPoly:
    g = 0
    for c in p:
        g = math.gcd(g, c)
    if g > 1:
        p = [c // g for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def _derivative(p: IntPoly) -> IntPoly:
    return [i * p[i] for i in range(1, len(p))]


def _neg_prem(f: IntPoly, g: IntPoly) -> IntPoly:
    """A positive multiple of -(f mod g)."""
    r = list(f)
    lc = g[-1]
    dg = len(g) - 1
    scale_sign = 1
    while len(r) - 1 >= dg and r:
        shift = len(r) - 1 - dg
        lead = r[-1]
        r = [c * lc for c in r]
        if lc < 0:
            scale_sign = -scale_sign
        for i, gc in enumerate(g):
            r[i + shift] -= lead * gc
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return _primitive([-scale_sign * c for c in r])


def sturm_chain(p: IntPoly) -> list[IntPoly]:
    chain = [list(p), _primitive(_derivative(p))]
    while len(chain[-1]) > 1:
        nxt = _neg_prem(chain[-2], chain[-1])
        if not nxt:
            break
        chain.append(nxt)
    return chain


def _sign_at(p: IntPoly, x: Fraction) -> int:
    num, den = x.numerator, x.denominator
    acc = 0
    # sum c_i num^i den^(d-i); den > 0 so the sign matches p(x)
    d = len(p) - 1
    powers = [1] * (d + 1)
    for i in range(1, d + 1):
        powers[i] = powers[i - 1] * den
    npow = 1
    for i, c in enumerate(p):
        acc += c * npow * powers[d - i]
        npow *= num
    return (acc > 0) - (acc < 0)


def _variations(chain: list[IntPoly], x: Fraction) -> int:
    signs = [s for s in (_sign_at(p, x) for p in chain) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(chain: list[IntPoly], a: Fraction, b: Fraction) -> int:
    """Distinct real roots in (a, b]."""
    return _variations(chain, a) - _variations(chain, b)


def isolate_real_roots(coeffs: Sequence[Fraction], lo, hi, width: float = 1e-13) -> list[tuple[Fraction, Fraction]]:
    """Disjoint brackets around every distinct real root in (lo, hi], refined to the given width."""
    p = to_int_poly(coeffs)
    if len(p) <= 1:
        return []
    chain = sturm_chain(p)
    lo, hi = Fraction(lo), Fraction(hi)
    stack = [(lo, hi, count_roots(chain, lo, hi))]
    isolated = []
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            isolated.append((a, b))
            continue
        mid = (a + b) / 2
        stack.append((mid, b, count_roots(chain, mid, b)))
        stack.append((a, mid, count_roots(chain, a, mid)))
    out = []
    for a, b in sorted(isolated):
        if _sign_at(p, b) == 0:
            out.append((b, b))
            continue
        sb = _sign_at(p, b)
        while b - a > width:
            mid = (a + b) / 2
            sm = _sign_at(p, mid)
            if sm == 0:
                a = b = mid
                break
            if sm == sb:
                b = mid
            else:
                a = mid
        out.append((a, b))
    return out
