"""Excited states above a quadratic-seed ground state.

Level n is represented by a ladder rung W_n = P(W0)/Q(W0) with P monic of
degree n+1 and Q monic of degree n, determined by the invariance identity

    (P'Q - PQ') R - P^2 = (R - w^2 + dE) Q^2,        R(w) = A w^2 + B w + C,

which is the statement that W_n' - W_n^2 differs from W0' - W0^2 by the
constant dE = E_n - E_0.  The first rung has closed-form coefficients; higher
rungs are solved as coefficient systems by damped Newton with the physical
branch selected by node count, normalizability and energy ordering.  When the
seed coefficients are exact rationals, solved coefficients are reconstructed
as exact fractions and re-verified, making the invariance identity exact.

Wavefunctions assemble without integration: with g = n + 1/A and
delta = B/(2A) - n*B/2 + A*q_{n-1},

    psi_n(x) = exp(delta*(x-x0)) * base(x)**g * Q(W0(x)),

whose log-derivative is identically P(W0)/Q(W0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import least_squares

from .algebra import CoefficientSystem, Polynomial, RationalFunction, solve_system
from .errors import (
    NoConvergence,
    NoPhysicalBranch,
    PoleInCoefficients,
    SingularJacobian,
)
from .seed_quadratic import (
    TRIGONOMETRIC,
    FamilySolution,
    QuadraticSeed,
    solve_seed,
)

__all__ = [
    "LadderRung",
    "WavefunctionAssembly",
    "Spectrum",
    "ShapeInvarianceReport",
    "first_rung",
    "first_rung_system",
    "rung_system",
    "rung_n",
    "ground_rung",
    "ladder",
    "assemble_wavefunction",
    "spectrum",
    "shape_invariance_probe",
]

_EXACT_DENOMINATOR_LADDER = (10 ** 4, 10 ** 6, 10 ** 9, 10 ** 12)


# ---------------------------------------------------------------------------
# type-generic dense polynomial helpers (floats for newton, Fractions for
# exact verification; the closures in the coefficient systems use these)

def _pmul(a, b):
    if not a or not b:
        zero = (a[0] if a else b[0]) * 0 if (a or b) else 0
        return [zero]
    out = [a[0] * b[0] * 0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def _padd(a, b):
    n = max(len(a), len(b))
    zero = (a[0] if a else b[0]) * 0
    return [(a[i] if i < len(a) else zero) + (b[i] if i < len(b) else zero)
            for i in range(n)]


def _pneg(a):
    return [-x for x in a]


def _pder(a):
    return [i * a[i] for i in range(1, len(a))]


def _rung_residual(values: Sequence, n: int, A, B, C) -> list:
    """Coefficients (ascending, degrees 0..2n+1) of the identity residual.

    values = p_0..p_n, q_0..q_{n-1}, dE with P, Q monic.  The top degree
    2n+2 cancels identically for monic P, Q and is not emitted.
    """
    one = values[-1] * 0 + 1
    P = list(values[: n + 1]) + [one]
    Q = list(values[n + 1: 2 * n + 1]) + [one]
    dE = values[2 * n + 1]
    R = [C + values[-1] * 0, B + values[-1] * 0, A + values[-1] * 0]
    wr = _padd(_pmul(_pder(P), Q), _pneg(_pmul(P, _pder(Q))))
    T = _padd(_pmul(wr, R), _pneg(_pmul(P, P)))
    rhs = _pmul([C + dE, B + dE * 0, A - one], _pmul(Q, Q))
    T = _padd(T, _pneg(rhs))
    zero = values[-1] * 0
    T = list(T) + [zero] * (2 * n + 3 - len(T))
    return T[: 2 * n + 2]


def rung_system(seed: QuadraticSeed, n: int) -> CoefficientSystem:
    """Coefficient system for the level-n rung (monic P, Q plus dE)."""
    A, B, C = seed.A, seed.B, seed.C
    names = tuple(f"p{i}" for i in range(n + 1)) + tuple(f"q{i}" for i in range(n)) + ("dE",)
    eqs = tuple(
        (lambda v, k=k: _rung_residual(v, n, A, B, C)[k])
        for k in range(2 * n + 2)
    )
    return CoefficientSystem(unknowns=names, equations=eqs, tag=f"rung-{n}")


# ---------------------------------------------------------------------------
# rung containers

@dataclass(frozen=True)
class WavefunctionAssembly:
    """Factorized form of psi_n for this rung.

    exp_rate and base_exponent are delta and g of the module docstring; the
    trig_factors hold the (alpha_i, beta_i, gamma_i) coefficients of the
    cos/sin linear factors on the trigonometric branch (gamma_i = 1 for the
    simple nodes of a physical rung).
    """

    exp_rate: float
    base_exponent: float
    node_roots: tuple
    trig_factors: Optional[tuple] = None


@dataclass(frozen=True)
class LadderRung:
    n: int
    rung_fn: RationalFunction
    energy_offset: float
    assembly: WavefunctionAssembly
    exact: bool = False
    energy_offset_exact: Optional[Fraction] = None

    def p_coeffs(self) -> np.ndarray:
        """Monic numerator coefficients, ascending, as floats."""
        return np.array([float(c) for c in self.rung_fn.num.coeffs], dtype=float)

    def q_coeffs(self) -> np.ndarray:
        return np.array([float(c) for c in self.rung_fn.den.coeffs], dtype=float)


@dataclass(frozen=True)
class Spectrum:
    seed: QuadraticSeed
    levels: tuple  # ((n, E_n), ...), strictly increasing in energy

    def energies(self) -> list[float]:
        return [e for _, e in self.levels]


# ---------------------------------------------------------------------------
# first rung, closed form

def _first_rung_coeffs(A, B, C):
    if A == -1 or A == -2:
        raise PoleInCoefficients(f"first-rung coefficients have poles at A in {{-1,-2}} (A={A})")
    a1 = (A + 2) * C - (A + 2) ** 2 * B ** 2 / (4 * (A + 1) ** 2)
    b1 = A + 2
    c1 = -(A + 2) * B / (2 * (A + 1))
    return a1, b1, c1


def first_rung(seed: QuadraticSeed) -> LadderRung:
    """Closed-form rung for n = 1:
    a1 = (A+2)C - (A+2)^2 B^2 / (4 (A+1)^2),  b1 = A+2,
    c1 = -(A+2) B / (2 (A+1)),  W1 = W0 - a1/(b1 W0 - c1), offset a1."""
    if seed.exact:
        A, B, C = seed.exact_coeffs()
    else:
        A, B, C = float(seed.A), float(seed.B), float(seed.C)
    a1, b1, c1 = _first_rung_coeffs(A, B, C)
    exact = seed.exact
    if exact:
        num = Polynomial([-a1 / b1, -c1 / b1, 1])
        den = Polynomial([-c1 / b1, 1])
        fn = RationalFunction(num, den)
        offset_exact = Fraction(a1)
        offset = float(a1)
    else:
        fn = _float_ratfunc([-a1 / b1, -c1 / b1, 1.0], [-c1 / b1, 1.0])
        offset_exact = None
        offset = float(a1)
    assembly = _build_assembly(seed, 1, q_coeffs=[float(-c1 / b1)])
    return LadderRung(n=1, rung_fn=fn, energy_offset=offset, assembly=assembly,
                      exact=exact, energy_offset_exact=offset_exact)


def first_rung_system(seed: QuadraticSeed) -> CoefficientSystem:
    """The n=1 coefficient system in the paper's (a1, b1, c1) variables.

    Matching W1 = W0 - a/(b W0 - c) into the invariance identity gives three
    polynomial equations; the scale gauge b = A + 2 closes the square system
    so newton lands on the printed coefficients.
    """
    A, B, C = (float(seed.A), float(seed.B), float(seed.C))

    def eq0(v):  # w^2 coefficient
        a, b, c, dE = v
        return a * b * (A + 2) - dE * b * b

    def eq1(v):  # w^1 coefficient
        a, b, c, dE = v
        return a * (b * B - 2 * c) + 2 * b * c * dE

    def eq2(v):  # w^0 coefficient
        a, b, c, dE = v
        return a * (b * C - a) - dE * c * c

    def gauge(v):
        return v[1] - (A + 2)

    return CoefficientSystem(unknowns=("a1", "b1", "c1", "dE"),
                             equations=(eq0, eq1, eq2, gauge),
                             tag="first-rung")


# ---------------------------------------------------------------------------
# general rung solve

def _float_ratfunc(num_coeffs, den_coeffs) -> RationalFunction:
    """Rational function with float coefficients rationalized at full float
    precision (storage only; arithmetic stays exact downstream)."""
    num = Polynomial([Fraction(float(c)).limit_denominator(10 ** 15) for c in num_coeffs])
    den = Polynomial([Fraction(float(c)).limit_denominator(10 ** 15) for c in den_coeffs])
    return RationalFunction(num, den)


def _real_roots_in(coeffs_ascending, lo, hi):
    """Real roots of the monic polynomial within (lo, hi)."""
    c = np.asarray(coeffs_ascending, dtype=float)[::-1]
    if c.size <= 1:
        return []
    roots = np.roots(c)
    out = []
    for r in roots:
        if abs(r.imag) <= 1e-7 * (1 + abs(r)):
            rr = float(r.real)
            if lo < rr < hi:
                out.append(rr)
    return sorted(out)


def _candidate_ok(u, n, seed, sol, prev_offset):
    """Physical-branch test: irreducible, n real nodes inside the traversed
    range, normalizable tails, energy above the previous rung."""
    p = np.asarray(u[: n + 1], dtype=float)
    q = np.asarray(u[n + 1: 2 * n + 1], dtype=float)
    dE = float(u[2 * n + 1])
    if not dE > prev_offset + 1e-9:
        return False
    P = np.concatenate([p, [1.0]])
    Q = np.concatenate([q, [1.0]])
    w_lo, w_hi = sol.w_limits
    all_roots = np.roots(Q[::-1]) if n else []
    # reducible candidates share a root between P and Q
    for r in all_roots:
        if abs(np.polyval(P[::-1], r)) < 1e-6 * (1 + abs(r)) ** (n + 1):
            return False
    nodes = _real_roots_in(Q, w_lo, w_hi)
    if len(nodes) != n:
        return False
    # tails: at a finite W-range endpoint the x-interval reaches +-infinity
    # and psi_n ~ exp(-W_n(w_end) x); the wall endpoints decay automatically
    def wn(w):
        return np.polyval(P[::-1], w) / np.polyval(Q[::-1], w)

    if math.isfinite(w_hi) and not wn(w_hi) > 0:
        return False
    if math.isfinite(w_lo) and not wn(w_lo) < 0:
        return False
    return True


def _structural_P(q_coeffs, n, A, B, C):
    """P implied by Q for a simple-node rung: P = (g(Aw+B/2)-delta)Q - RQ'."""
    one = 1.0
    Q = list(q_coeffs) + [one]
    g = n + 1.0 / A
    qn1 = q_coeffs[-1] if n >= 1 else 0.0
    delta = B / (2 * A) - n * B / 2 + A * qn1
    lin = [g * B / 2 - delta, g * A]
    R = [C, B, A]
    P = _padd(_pmul(lin, Q), _pneg(_pmul(R, _pder(Q))))
    return [float(v) for v in P[: n + 1]]


def _initial_guesses(seed, sol, n, prev: LadderRung, prev_prev_offset):
    """Deterministic multistart ladder: node guesses equally spaced in x
    (over the whole interval when it is finite, else over the pole-free
    window), P from the simple-node structure, energy chained from the two
    previous offsets."""
    A, B, C = float(seed.A), float(seed.B), float(seed.C)
    if math.isfinite(sol.interval.lo) and math.isfinite(sol.interval.hi):
        lo, hi = sol.interval.lo, sol.interval.hi
    else:
        win = sol.check_window()
        lo, hi = win.lo, win.hi
    center0 = 0.5 * (lo + hi)
    span0 = 0.5 * (hi - lo)
    dE_chain = (prev.energy_offset + (prev.energy_offset - prev_prev_offset)
                if n > 1 else 2 * C)
    finite = math.isfinite(sol.interval.lo) and math.isfinite(sol.interval.hi)
    spreads = (1.0, 0.8, 0.93) if finite else (0.75, 0.55, 0.95)
    windows = [(lo, hi)]
    if finite:
        # states concentrate in the pole-free core when the well is much
        # narrower than the interval (small-A oscillator regime)
        win = sol.check_window()
        if win.hi - win.lo < 0.8 * (hi - lo):
            windows.append((win.lo, win.hi))
    node_sets = []
    for w_lo, w_hi in windows:
        c0 = 0.5 * (w_lo + w_hi)
        s0 = 0.5 * (w_hi - w_lo)
        for cshift in (0.0, -0.15, 0.15):
            for spread in spreads:
                center = c0 + cshift * s0
                half = spread * s0
                xs = np.linspace(center - half, center + half, n + 2)[1:-1]
                xs = np.clip(xs, w_lo + 1e-3 * (w_hi - w_lo), w_hi - 1e-3 * (w_hi - w_lo))
                node_sets.append(np.asarray(sol.w0(xs), dtype=float))
    # interlace guess: previous rung's nodes stretched plus one outer node
    prev_nodes = list(prev.assembly.node_roots)
    if len(prev_nodes) == n - 1 and n >= 2:
        stretched = [1.2 * r for r in prev_nodes]
        outer = (max(stretched) + (max(stretched) - min(stretched) + 1.0)
                 if stretched else 1.0)
        node_sets.append(np.asarray(sorted(stretched + [outer]), dtype=float))
    guesses = []
    for ws in node_sets:
        q = np.poly(ws)[::-1][:n]
        p = _structural_P(list(q), n, A, B, C)
        for efac in (1.0, 0.85, 1.25):
            guesses.append(list(p) + list(q) + [dE_chain * efac])
    return guesses


def _try_exact_reconstruction(u, n, seed):
    A, B, C = seed.exact_coeffs()
    for den in _EXACT_DENOMINATOR_LADDER:
        cand = [Fraction(float(v)).limit_denominator(den) for v in u]
        residual = _rung_residual(cand, n, A, B, C)
        if all(r == 0 for r in residual):
            return cand
    return None


def _build_assembly(seed, n, q_coeffs) -> WavefunctionAssembly:
    A, B = float(seed.A), float(seed.B)
    qn1 = float(q_coeffs[-1]) if n >= 1 else 0.0
    delta = B / (2 * A) - n * B / 2 + A * qn1
    g = n + 1.0 / A
    sol = solve_seed(seed)
    roots = tuple(_real_roots_in(list(q_coeffs) + [1.0], -np.inf, np.inf)) if n else ()
    trig = None
    if sol.branch == TRIGONOMETRIC and len(roots) == n:
        sq = math.sqrt(float(seed.discriminant))
        trig = tuple((-B / (2 * A) - r, sq / (2 * A), 1.0) for r in roots)
    return WavefunctionAssembly(exp_rate=delta, base_exponent=g,
                                node_roots=roots, trig_factors=trig)


def ground_rung(seed: QuadraticSeed) -> LadderRung:
    """The trivial n = 0 rung W_0 = w (empty product in the assembly)."""
    fn = RationalFunction(Polynomial([0, 1]))
    return LadderRung(n=0, rung_fn=fn, energy_offset=0.0,
                      assembly=_build_assembly(seed, 0, []),
                      exact=seed.exact,
                      energy_offset_exact=Fraction(0) if seed.exact else None)


def rung_n(seed: QuadraticSeed, n: int, _chain: Optional[list] = None) -> LadderRung:
    """Level-n rung by the general coefficient-system route.

    Lower rungs are computed first (their coefficients seed the newton
    initial guesses).  Among converged roots the accepted branch has exactly
    n nodes inside the traversed superpotential range, normalizable tails
    and the lowest energy above rung n-1; reducible roots (gcd(P,Q)
    nontrivial, i.e. a lower rung in disguise) are rejected.
    """
    if n < 0:
        raise ValueError("rung index must be >= 0")
    if n == 0:
        return ground_rung(seed)
    sol = solve_seed(seed)
    chain = _chain if _chain is not None else [ground_rung(seed)]
    while len(chain) < n:
        chain.append(rung_n(seed, len(chain), _chain=chain))
    prev = chain[n - 1] if n >= 1 else ground_rung(seed)
    prev_prev_offset = chain[n - 2].energy_offset if n >= 2 else 0.0

    system = rung_system(seed, n)
    candidates = []
    seen = set()
    for guess in _initial_guesses(seed, sol, n, prev, prev_prev_offset):
        try:
            res = solve_system(system, guess, mode="newton", tol=1e-12, max_iter=80)
        except (NoConvergence, SingularJacobian):
            continue
        key = tuple(round(v, 9) for v in res.values)
        if key in seen:
            continue
        seen.add(key)
        if _candidate_ok(res.values, n, seed, sol, prev.energy_offset):
            candidates.append(res.values)
    if not candidates:
        raise NoPhysicalBranch(
            f"no rung-{n} branch with {n} nodes and ordered energy found for seed {seed}")
    u = min(candidates, key=lambda v: v[-1])

    exact_vals = _try_exact_reconstruction(u, n, seed) if seed.exact else None
    if exact_vals is not None:
        p = exact_vals[: n + 1] + [Fraction(1)]
        q = exact_vals[n + 1: 2 * n + 1] + [Fraction(1)]
        fn = RationalFunction(Polynomial(p), Polynomial(q))
        offset_exact = exact_vals[-1]
        rung = LadderRung(n=n, rung_fn=fn, energy_offset=float(offset_exact),
                          assembly=_build_assembly(seed, n, [float(v) for v in q[:-1]]),
                          exact=True, energy_offset_exact=offset_exact)
    else:
        p = list(u[: n + 1]) + [1.0]
        q = list(u[n + 1: 2 * n + 1]) + [1.0]
        rung = LadderRung(n=n, rung_fn=_float_ratfunc(p, q),
                          energy_offset=float(u[-1]),
                          assembly=_build_assembly(seed, n, q[:-1]),
                          exact=False, energy_offset_exact=None)
    if _chain is not None:
        _chain.append(rung)
    return rung


def assemble_wavefunction(seed: QuadraticSeed, rung: LadderRung,
                          sol: Optional[FamilySolution] = None) -> Callable:
    """Unnormalized psi_n evaluator for the rung (n = 0 passes through to
    the family ground state formula)."""
    if sol is None:
        sol = solve_seed(seed)
    delta = rung.assembly.exp_rate
    g = rung.assembly.base_exponent
    qc = rung.q_coeffs()[::-1]  # descending for polyval
    x0 = float(seed.x0)
    w0, base = sol.w0, sol.base

    def psi(x):
        x = np.asarray(x, dtype=float) if np.asarray(x).dtype.kind != "f" else np.asarray(x)
        b = np.asarray(base(x))
        pos = b > 0
        bg = np.where(pos, np.power(np.where(pos, b, 1.0), g), 0.0)
        qv = np.polyval(qc, np.asarray(w0(x))) if qc.size > 1 else np.ones_like(b)
        out = np.exp(delta * (x - x0)) * bg * qv
        # walls: base -> 0 faster than Q(W0) diverges, the product limit is 0
        out = np.where(pos, out, 0.0)
        return out if out.shape else out[()]

    return psi


def ladder(seed: QuadraticSeed, n_max: int) -> list[LadderRung]:
    """Rungs 0..n_max, each seeding the next newton solve (rung 1 comes from
    the closed form)."""
    chain = [ground_rung(seed)]
    for n in range(1, n_max + 1):
        if n == 1:
            chain.append(first_rung(seed))
        else:
            rung_n(seed, n, _chain=chain)
    return chain


def spectrum(seed: QuadraticSeed, n_max: int) -> Spectrum:
    """Energies E_0..E_{n_max} under the family's energy-zero convention."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    sol = solve_seed(seed)
    rungs = ladder(seed, n_max)
    levels = [(n, sol.e0 + rung.energy_offset) for n, rung in enumerate(rungs)]
    energies = [e for _, e in levels]
    if any(b <= a for a, b in zip(energies, energies[1:])):
        raise NoPhysicalBranch("spectrum is not strictly increasing")
    return Spectrum(seed=seed, levels=tuple(levels))


# ---------------------------------------------------------------------------
# shape invariance probe

@dataclass
class ShapeInvarianceReport:
    shape_invariant: bool
    relative_residual: float
    fitted_parameters: dict
    tolerance: float
    notes: str = ""


def _partner_guess(A, B, C):
    lam = A + 1.0
    At = A / lam
    mu = B * (A + 2.0) / (2.0 * (A + 1.0))
    Bt = B - 2.0 * A * mu / lam
    Ct = lam * C - At * mu * mu - Bt * mu
    return At, Bt, Ct


def shape_invariance_probe(family, grid_points: int = 801,
                           tolerance: float = 1e-6) -> ShapeInvarianceReport:
    """Fit the partner potential V1 = V + 2 W0' to the family's own
    parametric form plus a constant; small residual means shape invariant.

    Accepts a QuadraticSeed / FamilySolution (fit over A', B', C', const with
    the same integration constant) or a rational-family solution (fit over
    the c1/sqrt(x+c2)+c3 shape of the worked rational example).
    """
    from .seed_rational import RationalFamilySolution  # local: avoid cycle

    if isinstance(family, QuadraticSeed):
        family = solve_seed(family)

    if isinstance(family, RationalFamilySolution):
        win = family.check_window()
        xs = np.linspace(win.lo, win.hi, grid_points)
        w = np.asarray(family.w0(xs), dtype=float)
        v1 = np.asarray(family.potential(xs), dtype=float) + 2.0 * family.rhs(w)

        def resid(p):
            c1, c2, c3 = p
            return c1 / np.sqrt(xs + c2) + c3 - v1

        fit = least_squares(resid, [-2.0, 0.25, 0.0],
                            bounds=([-np.inf, 1e-6, -np.inf], [np.inf, np.inf, np.inf]))
        rel = float(np.linalg.norm(fit.fun) / (np.linalg.norm(v1 - v1.mean()) + 1e-30))
        params = dict(zip(("c1", "c2", "c3"), (float(v) for v in fit.x)))
        return ShapeInvarianceReport(shape_invariant=rel < tolerance,
                                     relative_residual=rel,
                                     fitted_parameters=params,
                                     tolerance=tolerance,
                                     notes="rational-family form c1/sqrt(x+c2)+c3")

    sol: FamilySolution = family
    seed = sol.seed
    A, B, C = float(seed.A), float(seed.B), float(seed.C)
    win = sol.check_window()
    xs = np.linspace(win.lo, win.hi, grid_points)
    w = np.asarray(sol.w0(xs), dtype=float)
    v1 = np.asarray(sol.potential(xs), dtype=float) + 2.0 * seed.rhs(w)

    branch = sol.branch

    def resid(p):
        Ap, Bp, Cp, const = p
        try:
            cand = QuadraticSeed(Ap, Bp, Cp, seed.x0)
            if cand.branch != branch:
                raise ValueError
            partner = solve_seed(cand)
        except Exception:
            return 1e6 * np.ones_like(v1)
        vp = np.asarray(partner.potential(xs), dtype=float)
        if not np.all(np.isfinite(vp)):
            return 1e6 * np.ones_like(v1)
        return vp + const - v1

    guess = _partner_guess(A, B, C)
    start = [guess[0], guess[1], guess[2], float(np.mean(v1))]
    fit = least_squares(resid, start, method="lm", max_nfev=400)
    rel = float(np.linalg.norm(fit.fun) / (np.linalg.norm(v1 - v1.mean()) + 1e-30))
    params = dict(zip(("A", "B", "C", "const"), (float(v) for v in fit.x)))
    return ShapeInvarianceReport(shape_invariant=rel < tolerance,
                                 relative_residual=rel,
                                 fitted_parameters=params,
                                 tolerance=tolerance,
                                 notes=f"quadratic-family fit, branch {branch}")
