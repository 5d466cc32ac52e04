"""Independent shooting-method eigensolver for 1D potentials on an interval.

This is the ground truth every constructed family is validated against:
fourth-order Numerov sweeps from both ends, a Wronskian-style matching
defect at the classical turning point, node-count bracketing, and a
Richardson error estimate from a half-spacing re-solve.

Sign convention: psi'' = (V - E) psi.  (The transformed first-order form
used elsewhere in the package is W' - W^2 = E - V with W = -psi'/psi, which
forces exactly this second-order convention.)
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._kernels import count_sign_changes, numerov_sweep
from .errors import BracketFailure, GridMismatch, NodeMismatch

__all__ = ["Grid", "SweepResult", "EigenResult", "integrate_numerov",
           "find_eigenvalue", "inner_product", "count_nodes", "wkb_cutoff",
           "default_points"]

GRID_POINTS_ENV = "RICCATI_GRID_POINTS"
MAX_POINTS = 2_000_001
RICHARDSON_TARGET = 1e-6


def default_points() -> int:
    """Default grid density; RICCATI_GRID_POINTS overrides."""
    n = int(os.environ.get(GRID_POINTS_ENV, "8001"))
    return n if n % 2 == 1 else n + 1


@dataclass(frozen=True)
class Grid:
    """Uniform abscissas; n_points is odd so Simpson weights exist."""

    x_lo: float
    x_hi: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 64:
            raise ValueError("n_points must be at least 64")
        if self.n_points % 2 == 0:
            raise ValueError("n_points must be odd (Simpson quadrature)")
        if not self.x_hi > self.x_lo:
            raise ValueError("empty grid interval")

    @property
    def h(self) -> float:
        return (self.x_hi - self.x_lo) / (self.n_points - 1)

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.x_lo, self.x_hi, self.n_points)

    def doubled(self) -> "Grid":
        return Grid(self.x_lo, self.x_hi, 2 * self.n_points - 1)


@dataclass
class SweepResult:
    values: np.ndarray          # solution up to (and one past) the matching point
    log_derivative: float       # psi'/psi at the matching point
    matching_index: int
    rescalings: int


@dataclass
class EigenResult:
    energy: float
    wavefunction: np.ndarray    # normalized: sum(psi^2) * h = 1
    grid: Grid
    node_count: int
    converged: bool
    richardson_error: float
    rescalings: int = 0


def _matching_index(g: np.ndarray) -> int:
    """Classical turning point nearest mid-grid, or mid-grid if none."""
    n = g.shape[0]
    sign_flips = np.where(np.diff(np.sign(g)) != 0)[0]
    m = int(sign_flips[np.argmin(np.abs(sign_flips - n // 2))]) if sign_flips.size else n // 2
    return min(max(m, 2), n - 3)


def _sweeps(V_vals: np.ndarray, E: float, h: float, m: int):
    g = V_vals - E
    left, r1 = numerov_sweep(g[: m + 2], h, 0.0, h)
    right_rev, r2 = numerov_sweep(g[m - 1:][::-1].copy(), h, 0.0, h)
    right = right_rev[::-1]
    return left, right, r1 + r2


def integrate_numerov(V: Callable, E: float, grid: Grid, direction: str = "left") -> SweepResult:
    """One Numerov sweep toward the matching point.

    direction 'left' integrates upward from x_lo, 'right' downward from x_hi;
    both start from a Dirichlet zero.  The log-derivative at the matching
    point uses the centered three-point formula.
    """
    x = grid.values
    V_vals = np.asarray(V(x), dtype=float)
    if not np.all(np.isfinite(V_vals)):
        raise ValueError("potential must be finite on the grid")
    m = _matching_index(V_vals - E)
    h = grid.h
    g = V_vals - E
    if direction == "left":
        vals, resc = numerov_sweep(g[: m + 2], h, 0.0, h)
        deriv = (vals[m + 1] - vals[m - 1]) / (2 * h)
        psi_m = vals[m]
    elif direction == "right":
        rev, resc = numerov_sweep(g[m - 1:][::-1].copy(), h, 0.0, h)
        vals = rev[::-1]
        deriv = (vals[2] - vals[0]) / (2 * h)
        psi_m = vals[1]
        m_local = 1
        vals = vals
    else:
        raise ValueError("direction must be 'left' or 'right'")
    logd = deriv / psi_m if psi_m != 0 else math.inf
    keep = vals[: m + 2] if direction == "left" else vals
    return SweepResult(values=keep, log_derivative=float(logd),
                       matching_index=m, rescalings=int(resc))


def _defect(left: np.ndarray, right: np.ndarray, m: int) -> float:
    """Normalized Wronskian mismatch of the two sweeps at the matching point.

    Zero exactly when both sweeps are the same discrete solution, i.e. at a
    discrete eigenvalue; bounded to [-1, 1] for sign-stable bisection.
    """
    lm, lm1 = left[m], left[m + 1]
    rm, rm1 = right[1], right[2]     # right array starts at index m-1
    d = lm1 * rm - rm1 * lm
    scale = abs(lm1 * rm) + abs(rm1 * lm)
    return d / scale if scale > 0 else 0.0


def _count_levels_below(V_vals: np.ndarray, E: float, h: float) -> int:
    """Sturm oscillation count: interior sign changes of the full left sweep.

    Strict changes with zero threshold: the sweep grows by many orders of
    magnitude in classically forbidden tails, so any magnitude-relative
    cutoff would blind the counter to the oscillation region."""
    g = V_vals - E
    y, _ = numerov_sweep(g, h, 0.0, h)
    return int(count_sign_changes(y[1:-1], 0.0))


def _solve_on_grid(V_vals: np.ndarray, h: float, n: int, E_lo: float, E_hi: float):
    """Locate level n on a fixed grid.

    Node-count bisection pins the jump of the Sturm count from n to n+1;
    the jump sits within O(h * E) of the true level (a boundary node needs a
    whole grid cell to move into the interior), so the matching defect is
    scanned in a window around the jump and the crossing nearest to it is
    bisected to convergence.
    """
    lo_nodes = _count_levels_below(V_vals, E_lo, h)
    hi_nodes = _count_levels_below(V_vals, E_hi, h)
    if not (lo_nodes <= n < hi_nodes):
        raise BracketFailure(
            f"bracket ({E_lo:g}, {E_hi:g}) holds levels [{lo_nodes}, {hi_nodes}), "
            f"target {n} outside")
    a, b = E_lo, E_hi
    for _ in range(64):
        if b - a < 1e-5 * max(1.0, abs(a)):
            break
        mid = 0.5 * (a + b)
        if _count_levels_below(V_vals, mid, h) <= n:
            a = mid
        else:
            b = mid
    E_jump = 0.5 * (a + b)

    m_cache = {}

    def defect(E):
        m = _matching_index(V_vals - E)
        left, right, resc = _sweeps(V_vals, E, h, m)
        m_cache["resc"] = resc
        return _defect(left, right, m)

    span = max(100.0 * (b - a), 0.02 * max(1.0, abs(E_jump)))
    bracket = None
    for widen in (1.0, 4.0):
        es = np.linspace(E_jump - widen * span, E_jump + widen * span, 81)
        ds = np.array([defect(float(E)) for E in es])
        crossings = [(es[i], es[i + 1], ds[i], ds[i + 1])
                     for i in range(len(es) - 1) if ds[i] * ds[i + 1] <= 0]
        if crossings:
            bracket = min(crossings,
                          key=lambda c: abs(0.5 * (c[0] + c[1]) - E_jump))
            break
    if bracket is None:
        raise BracketFailure("matching defect has no sign change near the "
                             "node-count jump")
    lo_e, hi_e, lo_d, hi_d = bracket
    for _ in range(200):
        mid = 0.5 * (lo_e + hi_e)
        dm = defect(mid)
        if dm == 0.0:
            lo_e = hi_e = mid
            break
        if lo_d * dm < 0:
            hi_e, hi_d = mid, dm
        else:
            lo_e, lo_d = mid, dm
        if hi_e - lo_e < 1e-15 * max(1.0, abs(lo_e)):
            break
    E = 0.5 * (lo_e + hi_e)
    return E, m_cache.get("resc", 0)


def _assemble(V_vals: np.ndarray, E: float, h: float) -> tuple[np.ndarray, int]:
    """Join full left and right sweeps at the interior point where both are
    healthiest (a matching point that happens to sit on a node would make
    the junction scale 0/0)."""
    g = V_vals - E
    n = g.shape[0]
    left, _ = numerov_sweep(g, h, 0.0, h)
    right_rev, _ = numerov_sweep(g[::-1].copy(), h, 0.0, h)
    right = right_rev[::-1]
    ln = np.abs(left) / np.max(np.abs(left))
    rn = np.abs(right) / np.max(np.abs(right))
    m = int(np.argmax(np.minimum(ln, rn)[1:-1])) + 1
    scale = left[m] / right[m]
    psi = np.concatenate([left[:m], right[m:] * scale])
    psi[0] = 0.0
    psi[-1] = 0.0
    norm = math.sqrt(float(np.sum(psi * psi)) * h)
    return psi / norm, m


def find_eigenvalue(V: Callable, n: int, bracket: tuple[float, float],
                    grid: Grid, refine_grid: bool = True) -> EigenResult:
    """Shooting-method eigenvalue of level n inside the energy bracket.

    The bracket is widened (doubling, up to 3 times) until the node-count
    scan shows level n inside.  The grid is doubled until the Richardson
    estimate |E_h - E_h/2| / 15 falls below 1e-6 or the point cap is hit.
    """
    E_lo, E_hi = float(bracket[0]), float(bracket[1])
    x = grid.values
    V_vals = np.asarray(V(x), dtype=float)
    if not np.all(np.isfinite(V_vals)):
        raise ValueError("potential must be finite on the grid")

    for attempt in range(4):
        try:
            E_coarse, resc = _solve_on_grid(V_vals, grid.h, n, E_lo, E_hi)
            break
        except BracketFailure:
            if attempt == 3:
                raise
            width = E_hi - E_lo
            E_lo -= width / 2
            E_hi += width / 2

    E_prev = E_coarse
    g_cur = grid
    V_cur = V_vals
    rich = math.inf
    converged = False
    while True:
        g_next = g_cur.doubled()
        if g_next.n_points > MAX_POINTS:
            break
        V_next = np.asarray(V(g_next.values), dtype=float)
        # the Sturm jump is displaced O(h*E) above the level, so the refine
        # bracket must stay wide enough to straddle it on the finer grid
        pad = 0.02 * max(1.0, abs(E_prev))
        E_next, resc = _solve_on_grid(V_next, g_next.h, n, E_prev - pad, E_prev + pad)
        rich = abs(E_next - E_prev) / 15.0
        E_prev, g_cur, V_cur = E_next, g_next, V_next
        if rich < RICHARDSON_TARGET:
            converged = True
            break
        if not refine_grid:
            break

    psi, m = _assemble(V_cur, E_prev, g_cur.h)
    nodes = count_nodes(psi[1:-1])
    if nodes != n:
        raise NodeMismatch(f"solution at E={E_prev:.8g} has {nodes} nodes, expected {n}")
    return EigenResult(energy=float(E_prev), wavefunction=psi, grid=g_cur,
                       node_count=nodes, converged=converged,
                       richardson_error=float(rich), rescalings=int(resc))


def inner_product(f: np.ndarray, g: np.ndarray, grid: Grid) -> float:
    """Composite Simpson quadrature of f*g on the grid."""
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    if f.shape != (grid.n_points,) or g.shape != (grid.n_points,):
        raise GridMismatch("value arrays do not match the grid")
    w = np.ones(grid.n_points)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return float(np.sum(w * f * g) * grid.h / 3.0)


def count_nodes(values: np.ndarray) -> int:
    """Strict sign changes, ignoring magnitudes below 1e-12 * max|values|."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return 0
    tol = 1e-12 * float(np.max(np.abs(values)))
    return int(count_sign_changes(values, tol))


def wkb_cutoff(V: Callable, E: float, x_start: float, direction: int = 1,
               decay: float = 27.631021) -> float:
    """Truncation point where the WKB tail estimate exp(-int sqrt(V-E))
    drops below 1e-12 (decay = ln 1e12), stepping outward from x_start."""
    x = x_start
    acc = 0.0
    step = 0.25
    for _ in range(400_000):
        x_next = x + direction * step
        k2 = 0.5 * ((V(x) - E) + (V(x_next) - E))
        if k2 > 0:
            acc += math.sqrt(k2) * step
        if acc >= decay:
            return x_next
        x = x_next
    raise BracketFailure("WKB truncation search did not terminate")
