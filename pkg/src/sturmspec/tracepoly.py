"""Transfer matrices, their traces, and the Chebyshev identities behind them.

Polynomials in E are tuples of Fractions in ascending degree.  The
transfer matrix of ``[0]`` is ``[[1, -V], [0, 1]]`` and that of
``[0, 0]`` is ``[[E, -1], [1, 0]]``; longer expansions multiply the
grand-parent matrix by a power of the parent matrix.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .contfrac import ContFrac, evaluate, make_contfrac
from .errors import NotAnEdge, TraceOverflow

Poly = tuple[Fraction, ...]

ZERO: Poly = ()
ONE: Poly = (Fraction(1),)
X: Poly = (Fraction(0), Fraction(1))


def _trim(a: list[Fraction]) -> Poly:
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def padd(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def pneg(a: Poly) -> Poly:
    return tuple(-x for x in a)


def psub(a: Poly, b: Poly) -> Poly:
    return padd(a, pneg(b))


def pscale(a: Poly, s) -> Poly:
    return _trim([x * s for x in a])


def _integer_form(a: Poly) -> tuple[list[int], int]:
    den = math.lcm(*(x.denominator for x in a))
    return [x.numerator * (den // x.denominator) for x in a], den


def _pack(coeffs: list[int], bits: int) -> int:
    out = 0
    for c in reversed(coeffs):
        out = (out << bits) + c
    return out


def _unpack(n: int, bits: int, count: int) -> list[int]:
    mask, half = (1 << bits) - 1, 1 << (bits - 1)
    out = []
    for _ in range(count):
        r = n & mask
        if r >= half:
            r -= 1 << bits
        out.append(r)
        n = (n - r) >> bits
    return out


def pmul(a: Poly, b: Poly) -> Poly:
    """Product via one big-integer multiplication (Kronecker substitution)."""
    if not a or not b:
        return ZERO
    ia, da = _integer_form(a)
    ib, db = _integer_form(b)
    bound = max(map(abs, ia)) * max(map(abs, ib)) * min(len(ia), len(ib))
    bits = bound.bit_length() + 2
    prod = _unpack(_pack(ia, bits) * _pack(ib, bits), bits, len(ia) + len(ib) - 1)
    den = da * db
    return _trim([Fraction(c, den) for c in prod])


def pconst(c) -> Poly:
    return _trim([Fraction(c)])


def peval(a: Poly, x):
    acc = 0 * x
    for coef in reversed(a):
        acc = acc * x + coef
    return acc


def peval_float(a: Poly, x):
    acc = np.zeros_like(np.asarray(x, dtype=float))
    for coef in reversed(a):
        acc = acc * x + float(coef)
    return acc


def pcompose(a: Poly, b: Poly) -> Poly:
    out = ZERO
    for coef in reversed(a):
        out = padd(pmul(out, b), pconst(coef))
    return out


def degree(a: Poly) -> int:
    return len(a) - 1


@dataclass(frozen=True)
class ChebyshevS:
    """Dilated Chebyshev polynomial of the second kind, extended to n < -1."""

    n: int
    coefficients: tuple[int, ...]

    def __call__(self, x):
        return peval(tuple(Fraction(c) for c in self.coefficients), x)


def chebyshev_s(n: int) -> ChebyshevS:
    return ChebyshevS(n, tuple(int(c) for c in chebyshev_in(n, X)))


def chebyshev_in(n: int, x: Poly) -> Poly:
    """S_n(x) for a polynomial argument; S_{-n} = -S_{n-2}."""
    if n < -1:
        return pneg(chebyshev_in(-n - 2, x))
    prev, cur = ZERO, ONE
    if n == -1:
        return prev
    for _ in range(n):
        prev, cur = cur, psub(pmul(x, cur), prev)
    return cur


def chebyshev_value(n: int, x: float) -> float:
    if n < -1:
        return -chebyshev_value(-n - 2, x)
    prev, cur = 0.0, 1.0
    if n == -1:
        return prev
    for _ in range(n):
        prev, cur = cur, x * cur - prev
    return cur


PolyMatrix = tuple[tuple[Poly, Poly], tuple[Poly, Poly]]


def mat_mul(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    return tuple(  # type: ignore[return-value]
        tuple(padd(pmul(a[i][0], b[0][j]), pmul(a[i][1], b[1][j])) for j in range(2)) for i in range(2)
    )


def mat_trace(a: PolyMatrix) -> Poly:
    return padd(a[0][0], a[1][1])


def mat_power(a: PolyMatrix, n: int) -> PolyMatrix:
    """A^n = S_{n-1}(tr A) A - S_{n-2}(tr A) I, valid for det A = 1 and any integer n."""
    x = mat_trace(a)
    s1 = chebyshev_in(n - 1, x)
    s2 = chebyshev_in(n - 2, x)
    return (
        (psub(pmul(s1, a[0][0]), s2), pmul(s1, a[0][1])),
        (pmul(s1, a[1][0]), psub(pmul(s1, a[1][1]), s2)),
    )


def base_matrices(V) -> tuple[PolyMatrix, PolyMatrix]:
    V = Fraction(V)
    m0 = ((ONE, pconst(-V)), (ZERO, ONE))
    m00 = ((X, pconst(-1)), (ONE, ZERO))
    return m0, m00


_cache: dict[tuple[tuple[int, ...], Fraction], PolyMatrix] = {}
_cache_lock = threading.Lock()


def transfer_matrix(c: ContFrac, V) -> PolyMatrix:
    V = Fraction(V)
    key = (c.digits, V)
    with _cache_lock:
        hit = _cache.get(key)
    if hit is not None:
        return hit
    m0, m00 = base_matrices(V)
    if c.level == -1:
        out = m0
    elif c.level == 0:
        out = m00
    else:
        grand = transfer_matrix(ContFrac(c.digits[:-2]), V)
        par = transfer_matrix(ContFrac(c.digits[:-1]), V)
        out = mat_mul(grand, mat_power(par, c.digits[-1]))
    with _cache_lock:
        _cache.setdefault(key, out)
    return out


@dataclass(frozen=True)
class TracePoly:
    coefficients: Poly
    fixed_V: Fraction

    @property
    def degree(self) -> int:
        return degree(self.coefficients)

    def __call__(self, E):
        return peval(self.coefficients, E)


def trace_poly(c: ContFrac, V) -> TracePoly:
    return TracePoly(mat_trace(transfer_matrix(c, V)), Fraction(V))


def _as_contfrac(c) -> ContFrac:
    return c if isinstance(c, ContFrac) else make_contfrac(c)


# -- float path ---------------------------------------------------------------

_BIG = 1e250


def _fmul(a, b):
    # overflow surfaces as inf and is caught by _check
    with np.errstate(over="ignore", invalid="ignore"):
        return _fmul_raw(a, b)


def _fmul_raw(a, b):
    return np.stack(
        [
            np.stack([a[..., 0, 0] * b[..., 0, 0] + a[..., 0, 1] * b[..., 1, 0],
                      a[..., 0, 0] * b[..., 0, 1] + a[..., 0, 1] * b[..., 1, 1]], -1),
            np.stack([a[..., 1, 0] * b[..., 0, 0] + a[..., 1, 1] * b[..., 1, 0],
                      a[..., 1, 0] * b[..., 0, 1] + a[..., 1, 1] * b[..., 1, 1]], -1),
        ],
        -2,
    )


def _fpow(a, n: int):
    if n < 0:
        inv = np.empty_like(a)
        inv[..., 0, 0], inv[..., 1, 1] = a[..., 1, 1], a[..., 0, 0]
        inv[..., 0, 1], inv[..., 1, 0] = -a[..., 0, 1], -a[..., 1, 0]
        return _fpow(inv, -n)
    out = np.broadcast_to(np.eye(2), a.shape).copy()
    base = a
    while n:
        if n & 1:
            out = _fmul(out, base)
        n >>= 1
        if n:
            base = _fmul(base, base)
        _check(out, base)
    return out


def _check(*arrs) -> None:
    for a in arrs:
        if not np.all(np.isfinite(a)) or np.max(np.abs(a), initial=0.0) > _BIG:
            raise TraceOverflow("transfer product left the float range")


def transfer_matrix_float(c, E, V):
    c = _as_contfrac(c)
    E = np.asarray(E, dtype=float)
    shape = E.shape + (2, 2)
    m0 = np.zeros(shape)
    m0[..., 0, 0] = m0[..., 1, 1] = 1.0
    m0[..., 0, 1] = -float(V)
    m00 = np.zeros(shape)
    m00[..., 0, 0] = E
    m00[..., 0, 1] = -1.0
    m00[..., 1, 0] = 1.0
    if c.level == -1:
        return m0
    grand, par = m0, m00
    for d in c.tail:
        grand, par = par, _fmul(grand, _fpow(par, d))
        _check(par)
    return par


def trace_eval(c, E, V):
    """Float trace via the 2x2 product; raises TraceOverflow on blow-up."""
    m = transfer_matrix_float(c, E, V)
    t = m[..., 0, 0] + m[..., 1, 1]
    return float(t) if np.ndim(t) == 0 else t


def trace_eval_exact(c, E, V) -> Fraction:
    return trace_poly(_as_contfrac(c), Fraction(V))(Fraction(E))


def trace_value(c, E, V):
    """Float trace with an exact fallback when the float product overflows."""
    try:
        return trace_eval(c, E, V)
    except TraceOverflow:
        Vf = Fraction(V).limit_denominator(10**12)
        if np.ndim(E) == 0:
            return float(trace_poly(_as_contfrac(c), Vf)(Fraction(float(E))))
        return np.array([float(trace_poly(_as_contfrac(c), Vf)(Fraction(float(e)))) for e in np.ravel(E)]).reshape(np.shape(E))


def trace_sequence(c, E, V):
    """Floats t_{c'} for every prefix c' of c, from level -1 up."""
    c = _as_contfrac(c)
    return [trace_eval(ContFrac(c.digits[: j + 2]), E, V) for j in range(-1, c.level + 1)]


# -- trace identities -----------------------------------------------------------


def fricke_vogt_residual(c, n: int, E, V):
    c = _as_contfrac(c)
    x = trace_eval(c.extend(n + 1), E, V)
    y = trace_eval(c.extend(n), E, V)
    z = trace_eval(c, E, V)
    return x * x + y * y + z * z - x * y * z - (V * V + 4)


def fricke_vogt_exact(c, n: int, V) -> Poly:
    c = _as_contfrac(c)
    V = Fraction(V)
    x = trace_poly(c.extend(n + 1), V).coefficients
    y = trace_poly(c.extend(n), V).coefficients
    z = trace_poly(c, V).coefficients
    total = padd(padd(pmul(x, x), pmul(y, y)), pmul(z, z))
    total = psub(total, pmul(pmul(x, y), z))
    return psub(total, pconst(V * V + 4))


def trace_recursion_check(c, m: int, n_max: int, V=Fraction(1)) -> bool:
    """Exact checks of the extension identities and the Chebyshev recursion.

    - t_[c,m,0] = t_c, t_[c,m,1] = t_[c,m+1], t_[c,m,-1] = t_[c,m-1]
    - t_[c,n+1] = S_{l+1}(t_c) t_[c,n-l] - S_l(t_c) t_[c,n-l-1] for -1 <= l <= n
    """
    c = _as_contfrac(c)
    V = Fraction(V)

    def t(cc: ContFrac) -> Poly:
        return trace_poly(cc, V).coefficients

    tc = t(c)
    cm = c.extend(m)
    ok = t(cm.extend(0)) == tc and t(cm.extend(1)) == t(c.extend(m + 1))
    if m >= 1:
        ok = ok and t(cm.extend(-1)) == t(c.extend(m - 1))
    for n in range(0, n_max + 1):
        lhs = t(c.extend(n + 1))
        for l in range(-1, n + 1):
            a = t(c.extend(n - l)) if n - l >= -1 else None
            b = t(c.extend(n - l - 1)) if n - l - 1 >= -1 else None
            if a is None or b is None:
                continue
            rhs = psub(pmul(chebyshev_in(l + 1, tc), a), pmul(chebyshev_in(l, tc), b))
            ok = ok and rhs == lhs
    return ok


@dataclass(frozen=True)
class EdgeEstimateReport:
    E: float
    t_c: float
    t_cm: float
    t_cmn: float
    weak_implication: bool
    strict_implication: bool
    interior_implication: bool | None

    @property
    def ok(self) -> bool:
        return self.weak_implication and self.strict_implication and self.interior_implication is not False


def trace_edge_estimates(c, m: int, n: int, E: float, V: float, tol: float = 1e-7) -> EdgeEstimateReport:
    """Check the implications |t_cm| >= 2 => |t_cmn| >= 2 (and strict forms) at an edge."""
    c = _as_contfrac(c)
    tc = trace_eval(c, E, V)
    if abs(abs(tc) - 2) > tol:
        raise NotAnEdge(f"|t_c({E})| = {abs(tc)} is not 2")
    tcm = trace_eval(c.extend(m), E, V)
    tcmn = trace_eval(c.extend(m, n), E, V)
    weak = not (abs(tcm) >= 2 - tol) or abs(tcmn) >= 2 - tol
    strict = not (abs(tcm) > 2 + tol) or abs(tcmn) > 2
    interior = None
    val = evaluate(c)
    if not hasattr(val, "numerator") or 0 < val < 1:
        interior = not (abs(tcm) >= 2 - tol) or abs(tcmn) > 2
    return EdgeEstimateReport(E, tc, tcm, tcmn, weak, strict, interior)


def closed_form_traces(V) -> dict[str, Poly]:
    """The six low-level traces written out by hand, for comparison."""
    V = Fraction(V)
    return {
        "[0,0,-1]": (V, Fraction(1)),
        "[0,0,1]": (-V, Fraction(1)),
        "[0,0,2]": _trim([Fraction(-2), -V, Fraction(1)]),
        "[0,0,1,2]": _trim([2 * V, V * V - 3, -2 * V, Fraction(1)]),
        "[0,0,3]": _trim([V, Fraction(-3), -V, Fraction(1)]),
        "[0,0,1,-1]": (Fraction(2),),
    }
