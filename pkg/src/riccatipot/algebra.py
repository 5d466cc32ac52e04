"""Exact polynomial / rational-function arithmetic in one formal variable,
plus the nonlinear coefficient-system solver used by the ladder construction.

Polynomial and RationalFunction store exact rational coefficients
(int / fractions.Fraction).  Floats are rejected at construction: every
identity the ladder relies on is a polynomial identity, and exactness
removes tolerance guessing.  Float arithmetic appears only inside
solve_system's newton path, which evaluates CoefficientSystem closures on
plain floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DegenerateComposition,
    DivisionByZeroFunction,
    NoConvergence,
    SingularJacobian,
)

__all__ = [
    "Polynomial",
    "RationalFunction",
    "CoefficientSystem",
    "SolveResult",
    "poly_eval",
    "ratfunc_arith",
    "ratfunc_compose",
    "seed_derivative",
    "solve_system",
]


def _to_exact(c):
    if isinstance(c, Rational):  # int, Fraction
        return Fraction(c)
    raise TypeError(f"exact rational coefficient required, got {type(c).__name__}")


class Polynomial:
    """Dense polynomial over the rationals, ascending coefficients.

    The zero polynomial is the empty tuple and has degree -1 by convention.

    >>> Polynomial([1, 0, 1]).degree
    2
    >>> Polynomial([1, 0, 1])(2)
    Fraction(5, 1)
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        cs = [_to_exact(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("Polynomial is immutable")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, Rational):
            return self == Polynomial([other])
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x):
        """Horner evaluation; exact in, exact out (floats/arrays also work)."""
        if not self.coeffs:
            return x * 0
        acc = x * 0 + self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        b = list(other.coeffs) + [Fraction(0)] * (n - len(other.coeffs))
        return Polynomial([x + y for x, y in zip(a, b)])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, Rational):
            return Polynomial([c * other for c in self.coeffs])
        if not isinstance(other, Polynomial):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __radd__ = __add__
    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power")
        out = Polynomial([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other: "Polynomial"):
        other = self._coerce(other)
        if other.is_zero():
            raise DivisionByZeroFunction("polynomial division by zero")
        q, r = Polynomial(), self
        dv = other.coeffs[-1]
        while not r.is_zero() and r.degree >= other.degree:
            k = r.degree - other.degree
            t = r.coeffs[-1] / dv
            mono = Polynomial([0] * k + [t])
            q, r = q + mono, r - mono * other
        return q, r

    def derivative(self) -> "Polynomial":
        return Polynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def compose(self, inner: "Polynomial") -> "Polynomial":
        acc = Polynomial()
        for c in reversed(self.coeffs):
            acc = acc * inner + Polynomial([c])
        return acc

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self * (1 / self.coeffs[-1])

    @staticmethod
    def gcd(a: "Polynomial", b: "Polynomial") -> "Polynomial":
        while not b.is_zero():
            a, b = b, divmod(a, b)[1]
        return a.monic() if not a.is_zero() else a

    @staticmethod
    def _coerce(other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, Rational):
            return Polynomial([other])
        raise TypeError(f"cannot coerce {type(other).__name__} to Polynomial")

    def __repr__(self):
        if not self.coeffs:
            return "Polynomial(0)"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            term = "" if i == 0 else ("w" if i == 1 else f"w^{i}")
            parts.append(f"{c}" + (f"*{term}" if term else ""))
        return "Polynomial(" + " + ".join(parts) + ")"


def poly_eval(p: Polynomial, x):
    """Evaluate p at x (Horner).  Exact for rational x, float for float x."""
    return p(x)


class RationalFunction:
    """Reduced ratio of Polynomials; denominator monic and nonzero.

    >>> RationalFunction(Polynomial([-1, 0, 1]), Polynomial([-1, 1]))
    RationalFunction(Polynomial(1 + 1*w), Polynomial(1))
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=Polynomial([1])):
        num = Polynomial._coerce(num)
        den = Polynomial._coerce(den)
        if den.is_zero():
            raise DivisionByZeroFunction("zero denominator")
        g = Polynomial.gcd(num, den)
        if not g.is_zero() and g.degree > 0:
            num = divmod(num, g)[0]
            den = divmod(den, g)[0]
        if not num.is_zero():
            lead = den.coeffs[-1]
            num = num * (1 / lead)
            den = den * (1 / lead)
        else:
            den = Polynomial([1])
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("RationalFunction is immutable")

    @staticmethod
    def variable() -> "RationalFunction":
        return RationalFunction(Polynomial([0, 1]))

    @staticmethod
    def constant(c) -> "RationalFunction":
        return RationalFunction(Polynomial([c]))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def __add__(self, other):
        other = self._coerce(other)
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __mul__(self, other):
        other = self._coerce(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __radd__ = __add__
    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise DivisionByZeroFunction("division by the zero function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return RationalFunction(Polynomial([1])) / self ** (-n)
        return RationalFunction(self.num ** n, self.den ** n)

    def derivative(self) -> "RationalFunction":
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    @staticmethod
    def _coerce(other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        if isinstance(other, Rational):
            return RationalFunction(Polynomial([other]))
        return NotImplemented

    def __repr__(self):
        return f"RationalFunction({self.num!r}, {self.den!r})"


def ratfunc_arith(a: RationalFunction, b: RationalFunction, op: str) -> RationalFunction:
    """Dispatch add/sub/mul/div on rational functions (exact, reduced)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def ratfunc_compose(outer: RationalFunction, inner: RationalFunction) -> RationalFunction:
    """outer(inner), exact and reduced.

    Raises DegenerateComposition when the composed denominator collapses to
    the zero polynomial (outer evaluated at a constant pole of itself).
    """
    m = max(outer.num.degree, outer.den.degree, 0)
    P, Q = inner.num, inner.den

    def lift(poly: Polynomial) -> Polynomial:
        # sum_i c_i P^i Q^(m-i)
        acc = Polynomial()
        for i, c in enumerate(poly.coeffs):
            acc = acc + Polynomial([c]) * P ** i * Q ** (m - i)
        return acc

    den = lift(outer.den)
    if den.is_zero():
        raise DegenerateComposition("denominator vanishes identically under composition")
    return RationalFunction(lift(outer.num), den)


def seed_derivative(w: RationalFunction, f: RationalFunction) -> RationalFunction:
    """d/dx of w(W0) along the flow W0' = f(W0): returns (dw/dW0) * f."""
    return w.derivative() * f


@dataclass(frozen=True)
class CoefficientSystem:
    """A system of residual expressions in a fixed tuple of unknowns.

    Each entry of `equations` is one coefficient of a residual polynomial:
    an evaluable closure mapping an assignment vector to a number.  Closures
    must be numeric-type generic (Fractions in -> Fraction out, floats in ->
    float out) so the same system serves both the newton path and the exact
    verification path.
    """

    unknowns: tuple[str, ...]
    equations: tuple[Callable[[Sequence], object], ...]
    tag: str = ""

    def residuals(self, values: Sequence) -> list:
        if len(values) != len(self.unknowns):
            raise ValueError(
                f"{len(self.unknowns)} unknowns but {len(values)} values")
        return [eq(values) for eq in self.equations]


@dataclass
class SolveResult:
    values: tuple
    residual_norm: float
    jacobian_condition: float
    iterations: int
    mode: str
    names: tuple[str, ...] = field(default_factory=tuple)

    def as_dict(self) -> dict:
        return dict(zip(self.names, self.values))


def _newton(system: CoefficientSystem, x0, tol, max_iter):
    x = np.asarray(x0, dtype=float)
    n = x.size
    cond = 0.0
    for it in range(max_iter + 1):
        r = np.asarray(system.residuals(list(x)), dtype=float)
        rnorm = float(np.max(np.abs(r))) if r.size else 0.0
        if rnorm < tol:
            if r.size and n:
                J = _fd_jacobian(system, x, r)
                cond = float(np.linalg.cond(J)) if np.all(np.isfinite(J)) else np.inf
            return x, rnorm, cond, it
        if it == max_iter:
            break
        J = _fd_jacobian(system, x, r)
        if not np.all(np.isfinite(J)):
            raise SingularJacobian(f"non-finite Jacobian at iteration {it}")
        s = np.linalg.svd(J, compute_uv=False)
        if s[0] == 0 or s[-1] / s[0] < 1e-300 or (J.shape[1] and np.sum(s > s[0] * 1e-14) < J.shape[1]):
            raise SingularJacobian(
                f"Jacobian numerically rank-deficient at iteration {it}")
        dx = np.linalg.lstsq(J, -r, rcond=None)[0]
        # plain damping: halve the step while it does not reduce the residual
        lam = 1.0
        for _ in range(40):
            r_try = np.asarray(system.residuals(list(x + lam * dx)), dtype=float)
            if np.all(np.isfinite(r_try)) and np.max(np.abs(r_try)) < rnorm:
                break
            lam *= 0.5
        x = x + lam * dx
    raise NoConvergence(
        f"newton did not reach residual {tol} in {max_iter} iterations "
        f"(last residual {rnorm:.3e}, system {system.tag!r})")


def _fd_jacobian(system: CoefficientSystem, x, r):
    J = np.empty((r.size, x.size))
    for j in range(x.size):
        h = 1e-7 * max(1.0, abs(x[j]))
        xp = x.copy()
        xp[j] += h
        J[:, j] = (np.asarray(system.residuals(list(xp)), dtype=float) - r) / h
    return J


def _exact_linear(system: CoefficientSystem):
    n = len(system.unknowns)
    zero = [Fraction(0)] * n
    b = [Fraction(v) for v in system.residuals(zero)]
    cols = []
    for j in range(n):
        e = list(zero)
        e[j] = Fraction(1)
        cols.append([Fraction(v) - b[i] for i, v in enumerate(system.residuals(e))])
    m = len(b)
    # Gaussian elimination on the m x n system  A x = -b  over Fractions
    A = [[cols[j][i] for j in range(n)] + [-b[i]] for i in range(m)]
    row = 0
    pivots = []
    for col in range(n):
        p = next((i for i in range(row, m) if A[i][col] != 0), None)
        if p is None:
            continue
        A[row], A[p] = A[p], A[row]
        pivots.append(col)
        pv = A[row][col]
        A[row] = [v / pv for v in A[row]]
        for i in range(m):
            if i != row and A[i][col] != 0:
                f = A[i][col]
                A[i] = [v - f * w for v, w in zip(A[i], A[row])]
        row += 1
        if row == m:
            break
    if len(pivots) < n:
        raise SingularJacobian("exact linear system is rank-deficient")
    for i in range(row, m):
        if A[i][n] != 0:
            raise NoConvergence("exact linear system is inconsistent")
    x = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        x[col] = A[i][n]
    check = system.residuals(x)
    if any(v != 0 for v in check):
        raise NoConvergence("exact linear solve failed verification; system "
                            "is not linear in its unknowns")
    return x


def solve_system(system: CoefficientSystem, initial_guess=None, mode: str = "newton",
                 tol: float = 1e-12, max_iter: int = 200) -> SolveResult:
    """Solve the coefficient system.

    newton: damped Gauss-Newton with finite-difference Jacobian; accepts
    overdetermined systems (least-squares step) but still demands the final
    residual fall below `tol`.  exact_linear: Fraction-exact Gaussian
    elimination; requires the system be linear in its unknowns and returns
    an exactly-zero residual.

    The caller supplies the initial guess and performs any physical root
    selection; this routine never chooses among multiple roots.
    """
    if not system.equations and not system.unknowns:
        return SolveResult((), 0.0, 0.0, 0, mode, ())
    if mode == "exact_linear":
        x = _exact_linear(system)
        return SolveResult(tuple(x), 0.0, 0.0, 1, mode, system.unknowns)
    if mode != "newton":
        raise ValueError(f"unknown mode {mode!r}")
    if initial_guess is None:
        raise ValueError("newton mode requires an initial guess")
    x0 = np.asarray(initial_guess, dtype=float)
    if not np.all(np.isfinite(x0)):
        raise ValueError("newton mode requires a finite initial guess")
    x, rnorm, cond, it = _newton(system, x0, tol, max_iter)
    return SolveResult(tuple(float(v) for v in x), rnorm, cond, it, mode,
                       system.unknowns)
