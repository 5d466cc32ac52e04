"""Cross-cutting verification: Riccati / Schrodinger / nonlinear residuals,
invariance-identity checks, limit-convergence suites, family invariants.

All derivative checks use extended-precision (longdouble) central stencils
of fourth order.  Step sizes scale with max(1,|x|) and shrink with the local
superpotential magnitude, because derivatives of W grow like |W|^3 near its
poles; with eps ~ 1e-19 this keeps finite-difference error near 1e-11 even
at |W| ~ 100, comfortably inside the 1e-8 residual tolerances.

Every check is deterministic: same window and point count, same verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .algebra import RationalFunction, seed_derivative
from .cascade import LadderRung
from .seed_quadratic import FamilySolution, Interval, QuadraticSeed, solve_seed

__all__ = [
    "VerificationReport",
    "riccati_residual",
    "riccati_seed_residual",
    "schrodinger_residual",
    "nonlinear_residual",
    "invariance_check",
    "limit_suite",
    "family_invariants",
    "d1",
    "d2",
]

_LD = np.longdouble
_EPS_LD = float(np.finfo(_LD).eps)
_H1 = _EPS_LD ** 0.2        # 4-point first-derivative stencil
_H2 = _EPS_LD ** (1.0 / 6.0)  # 5-point second-derivative stencil


@dataclass
class VerificationReport:
    check: str
    max_residual: float
    tolerance: float
    passed: bool
    grid: dict = field(default_factory=dict)
    notes: str = ""

    def as_dict(self) -> dict:
        return {
            "check": self.check,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "passed": bool(self.passed),
            "grid": self.grid,
            "notes": self.notes,
        }


def _grid_of(window, n_points: int) -> np.ndarray:
    if isinstance(window, Interval):
        lo, hi = window.lo, window.hi
    else:
        lo, hi = window
    return np.linspace(_LD(lo), _LD(hi), n_points)


def d1(f: Callable, x: np.ndarray, scale=None) -> np.ndarray:
    """Fourth-order first derivative in longdouble."""
    x = np.asarray(x, dtype=_LD)
    h = _H1 * np.maximum(1.0, np.abs(x))
    if scale is not None:
        h = h / (1.0 + np.abs(np.asarray(scale, dtype=_LD)))
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)


def d2(f: Callable, x: np.ndarray, scale=None) -> np.ndarray:
    """Fourth-order second derivative in longdouble."""
    x = np.asarray(x, dtype=_LD)
    h = _H2 * np.maximum(1.0, np.abs(x))
    if scale is not None:
        h = h / (1.0 + np.abs(np.asarray(scale, dtype=_LD))) ** 0.5
    return (-f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h)
            - f(x + 2 * h)) / (12 * h * h)


def _ratfunc_eval(rf: RationalFunction) -> Callable:
    num = np.array([float(c) for c in rf.num.coeffs], dtype=float)[::-1]
    den = np.array([float(c) for c in rf.den.coeffs], dtype=float)[::-1]

    def ev(w):
        w = np.asarray(w)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.polyval(num, w) / np.polyval(den, w)

    return ev


def riccati_residual(W: Callable, E_offset: float, sol, window=None,
                     n_points: int = 1001, tolerance: float = 1e-8) -> VerificationReport:
    """Pointwise residual of W' - W^2 - (E_n - V) with finite-difference W'.

    E_n = sol.e0 + E_offset; V is the family potential.  The default window
    is the family's pole-free core.
    """
    window = sol.check_window() if window is None else window
    xs = _grid_of(window, n_points)
    wv = np.asarray(W(xs), dtype=_LD)
    dW = d1(W, xs, scale=wv)
    En = sol.e0 + E_offset
    res = dW - wv * wv - (En - np.asarray(sol.potential(xs), dtype=_LD))
    mx = float(np.max(np.abs(res)))
    return VerificationReport(
        check="riccati_residual", max_residual=mx, tolerance=tolerance,
        passed=mx < tolerance,
        grid={"x_lo": float(xs[0]), "x_hi": float(xs[-1]), "points": n_points},
        notes=f"E_n = {En:.12g}")


def riccati_seed_residual(sol, window=None, n_points: int = 1001,
                          tolerance: float = 1e-8) -> VerificationReport:
    """|W0' - R(W0)| with finite-difference W0' against the seed polynomial
    or rational right-hand side."""
    window = sol.check_window() if window is None else window
    xs = _grid_of(window, n_points)
    wv = np.asarray(sol.w0(xs), dtype=_LD)
    dW = d1(sol.w0, xs, scale=wv)
    rhs = sol.seed.rhs(wv) if hasattr(sol.seed, "rhs") else sol.rhs(wv)
    res = dW - np.asarray(rhs, dtype=_LD)
    mx = float(np.max(np.abs(res)))
    return VerificationReport(
        check="riccati_seed_residual", max_residual=mx, tolerance=tolerance,
        passed=mx < tolerance,
        grid={"x_lo": float(xs[0]), "x_hi": float(xs[-1]), "points": n_points})


def schrodinger_residual(psi: Callable, E: float, V: Callable, window,
                         n_points: int = 2001, tolerance: float = 1e-6,
                         scale: Optional[Callable] = None) -> VerificationReport:
    """max |-psi'' + (V - E) psi| / max|psi| on the window."""
    xs = _grid_of(window, n_points)
    sc = np.asarray(scale(xs), dtype=_LD) if scale is not None else None
    pv = np.asarray(psi(xs), dtype=_LD)
    ppp = d2(psi, xs, scale=sc)
    res = -ppp + (np.asarray(V(xs), dtype=_LD) - _LD(E)) * pv
    mx = float(np.max(np.abs(res)) / np.max(np.abs(pv)))
    return VerificationReport(
        check="schrodinger_residual", max_residual=mx, tolerance=tolerance,
        passed=mx < tolerance,
        grid={"x_lo": float(xs[0]), "x_hi": float(xs[-1]), "points": n_points},
        notes=f"E = {E:.12g}")


def nonlinear_residual(psi: Callable, E0: float, R: RationalFunction, alpha: float,
                       window, n_points: int = 1001,
                       tolerance: float = 1e-8) -> VerificationReport:
    """Residual of the first-order-form nonlinear equation

        -psi'' psi - alpha (psi')^2 = [E0 - V(-psi'/psi)] psi^2,

    normalized by max|psi|^2.  The potential-as-a-function-of-the-log-
    derivative is the energy-consistent split of the seed, V(w) = E0 - R(w)
    + A_R w^2 with A_R the seed's asymptotic quadratic coefficient, which
    reduces to the linear Schrodinger form as alpha -> 0.  The residual
    vanishes identically only at alpha = A_R - 1.
    """
    xs = _grid_of(window, n_points)
    pv = np.asarray(psi(xs), dtype=_LD)
    dp = d1(psi, xs)
    dd = d2(psi, xs)
    w = -dp / pv
    A_R = float(R.num.coeffs[-1] / R.den.coeffs[-1])
    Rev = _ratfunc_eval(R)
    V_w = E0 - Rev(w) + A_R * w * w
    res = -dd * pv - alpha * dp * dp - (E0 - V_w) * pv * pv
    mx = float(np.max(np.abs(res)) / np.max(np.abs(pv)) ** 2)
    return VerificationReport(
        check="nonlinear_residual", max_residual=mx, tolerance=tolerance,
        passed=mx < tolerance,
        grid={"x_lo": float(xs[0]), "x_hi": float(xs[-1]), "points": n_points},
        notes=f"alpha = {alpha:.12g}, A_R = {A_R:.12g}")


def invariance_check(rung: LadderRung, seed: QuadraticSeed, n_points: int = 801,
                     tolerance: float = 1e-8) -> VerificationReport:
    """(W_n' - W_n^2) - (W0' - W0^2) must be the constant energy offset.

    Checked on the grid with finite differences, and exactly through the
    rational algebra whenever the rung and seed carry exact coefficients.
    """
    sol = solve_seed(seed)
    win = sol.check_window()
    xs = _grid_of(win, n_points)
    Wn_of_w = _ratfunc_eval(rung.rung_fn)

    def Wn(x):
        return Wn_of_w(sol.w0(x))

    wn = np.asarray(Wn(xs), dtype=_LD)
    # W_n has poles at the wavefunction nodes inside the window; finite
    # differences are meaningless there
    keep = np.isfinite(wn) & (np.abs(wn) <= 10.0)
    xs = xs[keep]
    wn = wn[keep]
    w0 = np.asarray(sol.w0(xs), dtype=_LD)
    lhs = d1(Wn, xs, scale=wn) - wn * wn
    rhs = d1(sol.w0, xs, scale=w0) - w0 * w0
    diff = lhs - rhs
    res = float(np.max(np.abs(diff - _LD(rung.energy_offset))))
    notes = f"grid offset spread {float(np.max(diff) - np.min(diff)):.3e}"
    exact_ok = None
    if rung.exact and seed.exact:
        A, B, C = seed.exact_coeffs()
        from .algebra import Polynomial
        R = RationalFunction(Polynomial([C, B, A]))
        w = RationalFunction(Polynomial([0, 1]))
        lhs_exact = seed_derivative(rung.rung_fn, R) - rung.rung_fn * rung.rung_fn
        rhs_exact = R - w * w
        const = lhs_exact - rhs_exact
        exact_ok = const.is_constant() and const.num.coeffs == (rung.energy_offset_exact,)
        if rung.energy_offset_exact == 0:
            exact_ok = const.is_zero()
        notes += f"; exact identity {'holds' if exact_ok else 'FAILS'}"
    passed = res < tolerance and exact_ok is not False
    return VerificationReport(
        check="invariance_check", max_residual=res, tolerance=tolerance,
        passed=passed,
        grid={"x_lo": float(xs[0]), "x_hi": float(xs[-1]), "points": n_points},
        notes=notes)


_LIMIT_LADDER = (0.5, 0.1, 0.01, 0.001)


def limit_suite(kind: str, n_points: int = 401) -> VerificationReport:
    """Parameter-ladder convergence to the classic limits.

    oscillator_A0: psi0(x; A), rescaled to psi(0) = 1, against exp(-x^2/2)
    on [-2, 2].  coulomb_A1 (B = 2): L2-normalized psi0 against the hydrogen
    ground shape B x exp(-B x / 2) / 2 on [0.1, 6].  morse_A0 (C = 1): W0
    against C - exp(-x) on [-1, 3].  Pass requires strictly decreasing
    sup-norm distances along the ladder and a final distance below 1e-2.
    """
    threshold = 1e-2
    dists = []
    if kind == "oscillator_A0":
        xs = np.linspace(-2.0, 2.0, n_points)
        target = np.exp(-xs ** 2 / 2)
        for A in _LIMIT_LADDER:
            sol = solve_seed(QuadraticSeed(A, 0, 1))
            psi = sol.psi0(xs)
            dists.append(float(np.max(np.abs(psi / sol.psi0(0.0) - target))))
    elif kind == "coulomb_A1":
        from .seed_quadratic import coulomb_family
        B = 2.0
        xs = np.linspace(0.1, 6.0, n_points)
        target = 0.5 * B * xs * np.exp(-0.5 * B * xs)
        target = target / np.sqrt(np.trapezoid(target ** 2, xs))
        for dA in _LIMIT_LADDER:
            sol = solve_seed(coulomb_family(1.0 + dA, B))
            psi = np.asarray(sol.psi0(xs), dtype=float)
            psi = psi / np.sqrt(np.trapezoid(psi ** 2, xs))
            dists.append(float(np.max(np.abs(psi - target))))
    elif kind == "morse_A0":
        from .seed_quadratic import morse_family
        C = 1.0
        xs = np.linspace(-1.0, 3.0, n_points)
        target = C - np.exp(-xs)
        for A in _LIMIT_LADDER:
            sol = solve_seed(morse_family(A, C))
            dists.append(float(np.max(np.abs(np.asarray(sol.w0(xs)) - target))))
    else:
        raise ValueError(f"unknown limit suite {kind!r}")
    monotone = all(b < a for a, b in zip(dists, dists[1:]))
    passed = monotone and dists[-1] < threshold
    return VerificationReport(
        check=f"limit_suite[{kind}]", max_residual=dists[-1], tolerance=threshold,
        passed=passed,
        grid={"points": n_points},
        notes="distances along ladder: " + ", ".join(f"{d:.3e}" for d in dists)
              + ("" if monotone else " (not monotone)"))


def family_invariants(sol: FamilySolution, n_points: int = 1001) -> list[VerificationReport]:
    """Grid checks of the family-solution contract: strict monotonicity of
    W0, the log-derivative identity psi0'/psi0 = -W0 (1e-9 relative), and
    positivity of psi0 inside the interval."""
    win = sol.check_window()
    xs = _grid_of(win, n_points)
    w = np.asarray(sol.w0(xs), dtype=_LD)

    mono = bool(np.all(np.diff(w) > 0))
    rep_mono = VerificationReport(
        check="w0_strictly_increasing", max_residual=0.0 if mono else 1.0,
        tolerance=0.5, passed=mono,
        grid={"x_lo": float(xs[0]), "x_hi": float(xs[-1]), "points": n_points})

    psi = np.asarray(sol.psi0(xs), dtype=_LD)
    dpsi = d1(sol.psi0, xs)
    rel = np.abs(dpsi / psi + w) / (1.0 + np.abs(w))
    mx = float(np.max(rel))
    rep_logd = VerificationReport(
        check="log_derivative_identity", max_residual=mx, tolerance=1e-9,
        passed=mx < 1e-9,
        grid={"x_lo": float(xs[0]), "x_hi": float(xs[-1]), "points": n_points})

    pos = bool(np.all(psi > 0))
    rep_pos = VerificationReport(
        check="psi0_positive_inside", max_residual=0.0 if pos else 1.0,
        tolerance=0.5, passed=pos,
        grid={"x_lo": float(xs[0]), "x_hi": float(xs[-1]), "points": n_points})
    return [rep_mono, rep_logd, rep_pos]
