"""Closed-form solvable families from the quadratic autonomous seed
W0' = A*W0^2 + B*W0 + C.

Branch classification is a pure function of the discriminant D = 4AC - B^2:
trigonometric (D > 0), degenerate (D = 0), hyperbolic (D < 0).  Every
branch shares the same structure

    psi0(x) = exp(B*(x-x0)/(2A)) * base(x)**(1/A),      W0 = -psi0'/psi0,

where `base` is cos, cosh, |sinh| or |x-x0| depending on the branch, and
(ln base)' = -(A*W0 + B/2) in all cases.  That shared identity is what the
excited-state assembly in `cascade` leans on.

The energy zero is fixed so that V -> 0 at an interval endpoint where the
potential has a finite limit (preferring the upper endpoint when both
qualify); when no endpoint qualifies, E0 = C, the seed's value at W0 = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Optional

import numpy as np

from .errors import InvalidSeed, NoMonotoneBranch

__all__ = [
    "QuadraticSeed",
    "Interval",
    "FamilySolution",
    "solve_seed",
    "ground_state",
    "potential_of",
    "oscillator_family",
    "coulomb_family",
    "morse_family",
]

TRIGONOMETRIC = "trigonometric"
DEGENERATE = "degenerate"
HYPERBOLIC = "hyperbolic"

# |W0| cap and half-width (around the zero of W0) of the default
# verification window; keeps finite-difference checks away from the walls.
W_CAP = 3.0
X_SPAN = 25.0


@dataclass(frozen=True)
class QuadraticSeed:
    """Coefficients of W0' = A*W0^2 + B*W0 + C plus the integration constant.

    A, B, C may be exact rationals (int/Fraction); exact coefficients enable
    the exact-identity mode of the ladder construction.
    """

    A: object
    B: object = 0
    C: object = 0
    x0: float = 0.0

    def __post_init__(self):
        if self.A == 0:
            raise InvalidSeed("A must be nonzero (A = 0 degenerates to a linear seed)")

    @property
    def discriminant(self):
        return 4 * self.A * self.C - self.B * self.B

    @property
    def branch(self) -> str:
        D = self.discriminant
        if D > 0:
            return TRIGONOMETRIC
        if D == 0:
            return DEGENERATE
        return HYPERBOLIC

    @property
    def exact(self) -> bool:
        return all(isinstance(v, Rational) for v in (self.A, self.B, self.C))

    def exact_coeffs(self) -> tuple[Fraction, Fraction, Fraction]:
        if not self.exact:
            raise InvalidSeed("seed coefficients are not exact rationals")
        return Fraction(self.A), Fraction(self.B), Fraction(self.C)

    def rhs(self, w):
        """The seed polynomial A*w^2 + B*w + C."""
        A, B, C = (float(self.A), float(self.B), float(self.C))
        return (A * w + B) * w + C

    def f_split(self, w):
        """f(w) = (A-1)*w^2 + B*w + C, the potential part of the seed."""
        A, B, C = (float(self.A), float(self.B), float(self.C))
        return ((A - 1.0) * w + B) * w + C


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_open: bool = True
    hi_open: bool = True

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def grid(self, n: int, inset: float = 1e-6) -> np.ndarray:
        """Uniform interior grid, endpoints inset by `inset`*width (finite
        widths) so evaluators stay away from superpotential poles."""
        lo, hi = self.lo, self.hi
        pad = inset * (min(self.width, 1e6))
        return np.linspace(lo + pad, hi - pad, n)


@dataclass
class FamilySolution:
    """Closed-form descriptors of one solvable family."""

    seed: QuadraticSeed
    branch: str
    interval: Interval
    e0: float
    w0: Callable
    psi0: Callable
    potential: Callable
    base: Callable            # branch base function (cos/cosh/|sinh|/|x-x0|)
    w_inverse: Callable       # x(w), the monotone inverse of w0
    w_limits: tuple[float, float]   # W0 range over the open interval
    x_zero: Optional[float]   # solution of W0(x) = 0, when one exists

    def check_window(self, w_cap: float = W_CAP, x_span: float = X_SPAN) -> Interval:
        """Sub-interval where |W0| <= w_cap, clipped to a +-x_span window.

        Finite-difference verification runs here: derivatives of W0 grow like
        |W0|^3 near the walls, so residual checks need the pole-free core.
        Finite range limits are inset (they map to x = +-infinity).
        """
        w_lo, w_hi = self.w_limits
        lo = max(w_lo, -w_cap)
        hi = min(w_hi, w_cap)
        span = hi - lo
        if math.isfinite(w_lo) and lo <= w_lo:
            lo = w_lo + 0.05 * span
        if math.isfinite(w_hi) and hi >= w_hi:
            hi = w_hi - 0.05 * span
        x_lo = float(self.w_inverse(lo))
        x_hi = float(self.w_inverse(hi))
        center = 0.5 * (x_lo + x_hi) if self.x_zero is None else self.x_zero
        x_lo = max(x_lo, center - x_span, self.interval.lo + 1e-6 * min(self.interval.width, 1e6))
        x_hi = min(x_hi, center + x_span, self.interval.hi - 1e-6 * min(self.interval.width, 1e6))
        return Interval(x_lo, x_hi)


def _pow_or_zero(base, p):
    """base**p with nonpositive base clipped to 0 (endpoint limits)."""
    base = np.asarray(base)
    out = np.where(base > 0, np.power(np.where(base > 0, base, 1), p), 0.0)
    return out if out.shape else out[()]


def solve_seed(seed: QuadraticSeed) -> FamilySolution:
    """Integrate the autonomous seed into its closed-form family.

    Trigonometric branch: tangent form on the interval between adjacent
    poles.  Hyperbolic branch: real tanh form on the whole line for A < 0,
    coth form on a half line for A > 0 (side picked by the sign of B so the
    increasing branch can host a zero of W0).  Degenerate branch: rational
    form on (x0, inf).
    """
    A, B = float(seed.A), float(seed.B)
    x0 = float(seed.x0)
    D = float(seed.discriminant)
    branch = seed.branch

    if branch == TRIGONOMETRIC:
        if A < 0:
            raise NoMonotoneBranch(
                "trigonometric branch with A < 0 is strictly decreasing")
        sq = math.sqrt(D)
        th = 0.5 * sq
        half = math.pi / sq
        interval = Interval(x0 - half, x0 + half)

        def w0(x, A=A, B=B, th=th, sq=sq, x0=x0):
            x = np.asarray(x)
            return -B / (2 * A) + (sq / (2 * A)) * np.tan(th * (x - x0))

        def base(x, th=th, x0=x0):
            return np.cos(th * np.asarray(x) - th * x0)

        def w_inv(w, A=A, B=B, th=th, sq=sq, x0=x0):
            return x0 + np.arctan((2 * A * np.asarray(w) + B) / sq) / th

        w_limits = (-math.inf, math.inf)
        x_zero = float(w_inv(0.0))
        e0 = float(seed.C)

    elif branch == DEGENERATE:
        if A < 0:
            raise NoMonotoneBranch("degenerate branch with A < 0 is strictly decreasing")
        interval = Interval(x0, math.inf)

        def w0(x, A=A, B=B, x0=x0):
            return -B / (2 * A) - 1.0 / (A * (np.asarray(x) - x0))

        def base(x, x0=x0):
            return np.abs(np.asarray(x) - x0)

        def w_inv(w, A=A, B=B, x0=x0):
            return x0 - 2.0 / (2 * A * np.asarray(w) + B)

        w_limits = (-math.inf, -B / (2 * A))
        x_zero = x0 - 2.0 / B if B < 0 else None
        e0 = -B * B / (4 * A * A)

    else:  # HYPERBOLIC
        S = math.sqrt(-D)
        roots = sorted(((-B - S) / (2 * A), (-B + S) / (2 * A)))
        if A < 0:
            # tanh form, monotone increasing on the whole line
            interval = Interval(-math.inf, math.inf)

            def w0(x, A=A, B=B, S=S, x0=x0):
                return -B / (2 * A) - (S / (2 * A)) * np.tanh(0.5 * S * (np.asarray(x) - x0))

            def base(x, S=S, x0=x0):
                return np.cosh(0.5 * S * (np.asarray(x) - x0))

            def w_inv(w, A=A, B=B, S=S, x0=x0):
                return x0 + (2.0 / S) * np.arctanh(-(2 * A * np.asarray(w) + B) / S)

            w_limits = (roots[0], roots[1])
            t = -B / S
            x_zero = x0 + (2.0 / S) * math.atanh(t) if abs(t) < 1 else None
            e0 = float(seed.f_split(w_limits[1]))
        else:
            # coth form on a half line; pick the side that can host W0 = 0
            def w0(x, A=A, B=B, S=S, x0=x0):
                arg = 0.5 * S * (np.asarray(x) - x0)
                return -B / (2 * A) - (S / (2 * A)) / np.tanh(arg)

            def base(x, S=S, x0=x0):
                return np.abs(np.sinh(0.5 * S * (np.asarray(x) - x0)))

            def w_inv(w, A=A, B=B, S=S, x0=x0):
                return x0 + (2.0 / S) * np.arctanh(-S / (2 * A * np.asarray(w) + B))

            if B > 0:
                interval = Interval(-math.inf, x0)
                w_limits = (roots[1], math.inf)
                e0 = float(seed.f_split(roots[1]))
            else:
                interval = Interval(x0, math.inf)
                w_limits = (-math.inf, roots[0])
                e0 = float(seed.f_split(roots[0]))
            c = -B / S
            x_zero = x0 + (2.0 / S) * math.atanh(1.0 / c) if abs(c) > 1 else None

    Af, Bf = A, B

    def psi0(x, w0=None, base=base, Af=Af, Bf=Bf, x0=x0):
        x = np.asarray(x, dtype=float) if np.asarray(x).dtype.kind != "f" else np.asarray(x)
        return np.exp(Bf * (x - x0) / (2 * Af)) * _pow_or_zero(base(x), 1.0 / Af)

    e0_f = float(e0)

    def potential(x, seed=seed, w0=w0, e0=e0_f):
        return e0 - seed.f_split(w0(x))

    return FamilySolution(
        seed=seed, branch=branch, interval=interval, e0=e0_f,
        w0=w0, psi0=psi0, potential=potential, base=base,
        w_inverse=w_inv, w_limits=(float(w_limits[0]), float(w_limits[1])),
        x_zero=x_zero,
    )


def ground_state(sol: FamilySolution) -> Callable:
    """Unnormalized ground-state evaluator of the family."""
    return sol.psi0


def potential_of(sol: FamilySolution) -> tuple[Callable, float]:
    """Potential evaluator and the family's energy zero.

    V(x) = E0 - f(W0(x)) with f(w) = (A-1)w^2 + B*w + C; continuous on the
    open interval.
    """
    return sol.potential, sol.e0


def oscillator_family(A) -> QuadraticSeed:
    """Seed (A, 0, 1, 0): the trigonometric family whose A -> 0 limit is the
    quantum harmonic oscillator."""
    if not A > 0:
        raise InvalidSeed("oscillator family requires A > 0")
    return QuadraticSeed(A, 0, 1, 0.0)


def coulomb_family(A, B, x0=None) -> QuadraticSeed:
    """Seed (A, -B, B^2/4): zero-angular-momentum radial Coulomb family.

    Validated for A > 1 (the printed trigonometric form); the hydrogen shape
    emerges as A -> 1+.  x0 defaults to the value placing the left wall at
    x = 0, which turns the tangent into the radial sine form.
    """
    if not A > 1:
        raise InvalidSeed("coulomb family validated for A > 1 only")
    if not B > 0:
        raise InvalidSeed("coulomb family requires B > 0")
    if x0 is None:
        x0 = math.pi / (float(B) * math.sqrt(float(A) - 1.0))
    return QuadraticSeed(A, -B, B * B * Fraction(1, 4) if isinstance(B, Rational) else B * B / 4.0, x0)


def morse_family(A, C) -> QuadraticSeed:
    """Seed (-A, -1, C) with the real tanh representation; A -> 0 recovers
    the Morse superpotential C - exp(-x)."""
    if not (A > 0 and C > 0):
        raise InvalidSeed("morse family requires A > 0 and C > 0")
    S = math.sqrt(1.0 + 4.0 * float(A) * float(C))
    return QuadraticSeed(-A, -1, C, math.log(float(A)) / S)
