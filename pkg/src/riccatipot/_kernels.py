"""Hot numeric kernels: Numerov sweeps and sign-change counting.

The Numerov recurrence is a sequential three-term loop executed thousands of
times inside the eigenvalue search, so it is JIT-compiled with numba by
default.  Setting the environment variable RICCATIPOT_NO_NUMBA=1 selects a
pure-Python/numpy fallback with identical numerics (used for debugging and
as the baseline in benchmarks/bench_numerov.py).
"""

import os

import numpy as np

RESCALE_LIMIT = 1e100


def _numerov_sweep_impl(g, h, y0, y1):
    """Numerov integration of y'' = g(x) y over a uniform grid.

    Returns the solution array and the number of overflow rescalings
    (the whole computed prefix is renormalized whenever |y| exceeds 1e100;
    eigenvalue logic only ever uses ratios, so rescaling is benign).
    """
    n = g.shape[0]
    y = np.empty(n)
    y[0] = y0
    y[1] = y1
    c = h * h / 12.0
    rescales = 0
    for i in range(1, n - 1):
        f_prev = 1.0 - c * g[i - 1]
        f_cur = 1.0 - c * g[i]
        f_next = 1.0 - c * g[i + 1]
        y[i + 1] = ((12.0 - 10.0 * f_cur) * y[i] - f_prev * y[i - 1]) / f_next
        if abs(y[i + 1]) > RESCALE_LIMIT:
            scale = 1.0 / abs(y[i + 1])
            for k in range(i + 2):
                y[k] *= scale
            rescales += 1
    return y, rescales


def _count_sign_changes_impl(values, tol):
    """Strict sign changes, ignoring entries with |v| < tol."""
    count = 0
    prev = 0.0
    for i in range(values.shape[0]):
        v = values[i]
        if v > tol:
            if prev < 0.0:
                count += 1
            prev = 1.0
        elif v < -tol:
            if prev > 0.0:
                count += 1
            prev = -1.0
    return count


USING_NUMBA = os.environ.get("RICCATIPOT_NO_NUMBA", "0") != "1"

if USING_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a hard dependency
        USING_NUMBA = False

if USING_NUMBA:
    numerov_sweep = njit(cache=True)(_numerov_sweep_impl)
    count_sign_changes = njit(cache=True)(_count_sign_changes_impl)
else:
    numerov_sweep = _numerov_sweep_impl
    count_sign_changes = _count_sign_changes_impl
