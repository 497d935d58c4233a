"""Reference implementations that share no code with the package.

Everything here is written from the definitions with plain numpy and
Fraction arithmetic, so the tests can compare two independent routes.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np


def cf_value(digits) -> Fraction:
    """alpha = 1/(c1 + 1/(c2 + ...)) for digits c1..ck (k >= 1); 0 for no digits."""
    x = Fraction(0)
    for d in reversed(digits):
        x = 1 / (d + x)
    return x


def mech_word(alpha: Fraction, length: int | None = None, start: int = 1) -> list[int]:
    """omega(n) = floor((n+1) alpha) - floor(n alpha), n = start .. start + length - 1."""
    alpha = Fraction(alpha)
    if length is None:
        length = alpha.denominator
    return [((n + 1) * alpha).__floor__() - (n * alpha).__floor__() for n in range(start, start + length)]


def trace_product(alpha: Fraction, E, V):
    """Trace of prod_n [[E - V omega(n), -1], [1, 0]] over one period (exact for Fraction inputs)."""
    m = [[1, 0], [0, 1]]
    for w in mech_word(alpha):
        a = E - V * w
        m = [[a * m[0][0] - m[1][0], a * m[0][1] - m[1][1]], [m[0][0], m[0][1]]]
    return m[0][0] + m[1][1]


def periodic_matrix(alpha: Fraction, V: float, corner: float) -> np.ndarray:
    w = np.array(mech_word(alpha), dtype=float)
    q = w.size
    h = np.diag(V * w)
    for i in range(q - 1):
        h[i, i + 1] = h[i + 1, i] = 1.0
    if q == 1:
        h[0, 0] += 2 * corner
    elif q == 2:
        h[0, 1] += corner
        h[1, 0] += corner
    else:
        h[0, q - 1] += corner
        h[q - 1, 0] += corner
    return h


def band_edges(alpha: Fraction, V: float) -> np.ndarray:
    """(q, 2) band edges from the sorted union of periodic and antiperiodic eigenvalues."""
    ev = np.sort(np.concatenate([np.linalg.eigvalsh(periodic_matrix(alpha, V, s)) for s in (1.0, -1.0)]))
    return ev.reshape(-1, 2)


def open_chain_ids(alpha: Fraction, V: float, E: float, n: int) -> float:
    w = np.array(mech_word(alpha, n), dtype=float)
    h = np.diag(V * w) + np.diag(np.ones(n - 1), 1) + np.diag(np.ones(n - 1), -1)
    return float(np.sum(np.linalg.eigvalsh(h) < E)) / n


def denominators(digits, k):
    qs = [0, 1]
    for d in digits[:k]:
        qs.append(d * qs[-1] + qs[-2])
    return qs[1:]
