from fractions import Fraction

import numpy as np
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from sturmspec.linalg import count_below, isolate_real_roots, jacobi_eigenvalues


@given(st.integers(1, 12).flatmap(lambda n: arrays(float, (n, n), elements=st.floats(-5, 5))))
def test_jacobi_matches_lapack(a):
    s = (a + a.T) / 2
    assert np.allclose(jacobi_eigenvalues(s), np.linalg.eigvalsh(s), atol=1e-10)


@given(
    st.integers(2, 20).flatmap(lambda n: st.tuples(arrays(float, n, elements=st.floats(-3, 3)), arrays(float, n - 1, elements=st.floats(0.1, 2)))),
    st.floats(-6, 6),
)
def test_count_below_matches_eigvalsh(diag_off, x):
    d, e = diag_off
    ev = np.linalg.eigvalsh(np.diag(d) + np.diag(e, 1) + np.diag(e, -1))
    if np.min(np.abs(ev - x)) < 1e-9:
        return
    assert int(count_below(d, e, x)) == int(np.sum(ev < x))


def test_isolate_roots_of_quadratic():
    roots = isolate_real_roots((Fraction(-2), Fraction(0), Fraction(1)), Fraction(-3), Fraction(3))
    assert len(roots) == 2
    for (lo, hi), r in zip(roots, (-2**0.5, 2**0.5)):
        assert float(lo) <= r <= float(hi)
