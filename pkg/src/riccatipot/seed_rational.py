"""Generalized rational seeds W0' = R(W0) with deg(num) - deg(den) = 2.

The quadrature path inverts x(W0) = x0 + int_0^W0 dv/R(v) (adaptive
Gauss-Kronrod for anchors, fixed high-order Gauss-Legendre panels plus a
Newton polish per query) and builds psi0 = exp(-int W0 dx) the same way; the
monotone table uses Chebyshev-like node placement with PCHIP interpolation
for the initial inverse guess.  The integration-constant convention is
W0(x0) = 0.

The worked example R = (W0-1)^3/(W0-3) has closed forms: W0, psi0 and the
potential -2/sqrt(x+1/4) on x >= 0 with ground energy -1.  Its first excited
state is *not* exactly of the printed product form (see excited_rational);
the rung coefficient system is overdetermined by one equation and is solved
in the quasi-solution sense, with the structural defect reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator

from .algebra import CoefficientSystem, Polynomial, RationalFunction, solve_system
from .cascade import (
    LadderRung,
    WavefunctionAssembly,
    _float_ratfunc,
    _padd,
    _pder,
    _pmul,
    _pneg,
    _real_roots_in,
)
from .errors import (
    InvalidSeed,
    NoConvergence,
    NoPhysicalBranch,
    QuadratureFailure,
    SingularJacobian,
    StalledFlow,
)
from .seed_quadratic import Interval

__all__ = [
    "RationalSeed",
    "RationalFamilySolution",
    "RationalExcitedState",
    "TanAnsatzResult",
    "solve_rational_seed",
    "new_potential_family",
    "new_potential_seed",
    "excited_rational",
    "rational_rung_system",
    "tan_ansatz_match",
]

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True)
class RationalSeed:
    """Seed W0' = f(W0) with rational f, numerator two degrees above the
    denominator so W0^2 dominates asymptotically."""

    f: RationalFunction
    x0: float = 0.0
    interval_hint: Optional[tuple] = None

    def __post_init__(self):
        if self.f.num.degree - self.f.den.degree != 2:
            raise InvalidSeed("rational seed requires deg(num) - deg(den) = 2")

    @property
    def l(self) -> int:
        return self.f.den.degree

    @property
    def A(self) -> Fraction:
        # denominator is monic, so the asymptotic quadratic coefficient is
        # the numerator's leading coefficient
        return self.f.num.coeffs[-1]

    def rhs(self, w):
        w = np.asarray(w, dtype=float) if np.asarray(w).dtype.kind != "f" else np.asarray(w)
        num = np.array([float(c) for c in self.f.num.coeffs], dtype=float)[::-1]
        den = np.array([float(c) for c in self.f.den.coeffs], dtype=float)[::-1]
        return np.polyval(num, w) / np.polyval(den, w)


@dataclass
class RationalFamilySolution:
    seed: RationalSeed
    provenance: str            # "closed_form" or "quadrature"
    interval: Interval
    e0: float
    w0: Callable
    psi0: Callable
    potential: Callable
    w_inverse: Callable
    w_limits: tuple
    x_zero: float

    def rhs(self, w):
        return self.seed.rhs(w)

    def check_window(self, w_cap: float = 3.0, x_span: float = 25.0) -> Interval:
        w_lo, w_hi = self.w_limits
        span = w_hi - w_lo
        pad = 0.02 * span if math.isfinite(span) else 0.0
        lo = max(w_lo + pad, -w_cap)
        hi = min(w_hi - pad, w_cap)
        if math.isfinite(w_hi) and hi >= w_hi:
            hi = w_hi - max(1e-3, pad)
        x_lo = float(self.w_inverse(lo))
        x_hi = float(self.w_inverse(hi))
        x_lo = max(x_lo, self.x_zero - x_span, self.interval.lo + 1e-6)
        x_hi = min(x_hi, self.x_zero + x_span, self.interval.hi)
        return Interval(x_lo, x_hi)


def _squarefree_real_roots(poly: Polynomial):
    """Real roots of an exact polynomial via its square-free part (np.roots
    is ill-conditioned at multiple roots, e.g. the worked example's (w-1)^3)."""
    if poly.degree < 1:
        return []
    g = Polynomial.gcd(poly, poly.derivative())
    sf = divmod(poly, g)[0] if g.degree > 0 else poly
    return _real_roots_in([float(c) for c in sf.coeffs], -np.inf, np.inf)


def _boundaries(seed: RationalSeed):
    """Nearest flow boundaries around the anchor W0 = 0.

    Numerator roots stall the flow (infinite x, never crossed); denominator
    roots are poles reached at finite x and cannot be integrated through.
    """
    num_roots = _squarefree_real_roots(seed.f.num)
    den_roots = _squarefree_real_roots(seed.f.den)
    lo, lo_kind = -math.inf, "infinite"
    hi, hi_kind = math.inf, "infinite"
    for r, kind in [(r, "root") for r in num_roots] + [(r, "pole") for r in den_roots]:
        if 0 < r < hi:
            hi, hi_kind = r, kind
        if lo < r < 0:
            lo, lo_kind = r, kind
    return (lo, lo_kind), (hi, hi_kind)


def _gl_panel(fun, a, b):
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return half * float(np.sum(_GL_WEIGHTS * fun(mid + half * _GL_NODES)))


def _march_table(seed: RationalSeed, x_target_lo: float, x_target_hi: float):
    """Node ladder outward from W0 = 0 with cumulative x and psi exponents.

    Steps grow geometrically toward infinite boundaries and shrink
    geometrically toward finite ones; marching stops once the requested x
    window is covered.  Raises StalledFlow if a pole blocks coverage.
    """
    R = seed.rhs
    if not R(0.0) > 0:
        raise StalledFlow("seed right-hand side is not positive at the anchor W0 = 0")
    inv = lambda w: 1.0 / R(w)
    wdx = lambda w: w / R(w)
    (lo, lo_kind), (hi, hi_kind) = _boundaries(seed)

    def march(direction, bound, kind, x_stop):
        ws = [0.0]
        xs = [float(seed.x0)]
        ps = [0.0]
        w = 0.0
        step = 0.05 * (abs(bound) if math.isfinite(bound) else 1.0) or 0.05
        for _ in range(4000):
            if direction * (xs[-1] - x_stop) > 0:
                break
            if math.isfinite(bound):
                gap = abs(bound - w)
                dw = direction * min(step, 0.35 * gap)
                if kind == "pole" and gap < 1e-9:
                    raise StalledFlow(
                        f"pole of the seed at W0 = {bound:g} blocks the requested interval")
                if kind == "root" and gap < 1e-13:
                    break
            else:
                dw = direction * step
                step *= 1.25
            w_next = w + dw
            if not (R(0.5 * (w + w_next)) > 0 and R(w_next) > 0):
                raise StalledFlow("seed right-hand side loses positivity inside the range")
            dx = _gl_panel(inv, w, w_next)
            xs.append(xs[-1] + dx)
            ps.append(ps[-1] + _gl_panel(wdx, w, w_next))
            ws.append(w_next)
            w = w_next
            # infinite-w endpoints have a finite x limit: stop once the
            # quadrature tail stalls below resolution
            if not math.isfinite(bound) and abs(dx) < 1e-13 * max(1.0, abs(xs[-1])):
                break
        return ws, xs, ps

    up = march(+1, hi, hi_kind, x_target_hi)
    down = march(-1, lo, lo_kind, x_target_lo)
    ws = list(reversed(down[0][1:])) + up[0]
    xs = list(reversed(down[1][1:])) + up[1]
    ps = list(reversed(down[2][1:])) + up[2]
    return (np.asarray(ws), np.asarray(xs), np.asarray(ps),
            ((lo, lo_kind), (hi, hi_kind)))


def solve_rational_seed(seed: RationalSeed, x_span: float = 45.0) -> RationalFamilySolution:
    """Numerical family from the seed by quadrature inversion.

    The table covers the interval hint when given, otherwise x0 +- x_span
    (clipped by finite flow boundaries).  Evaluators refine every query with
    Newton on x(w) - x = 0, so accuracy is limited by the quadrature panels,
    not the interpolant.
    """
    if seed.interval_hint is not None:
        x_lo_req, x_hi_req = map(float, seed.interval_hint)
    else:
        x_lo_req, x_hi_req = seed.x0 - x_span, seed.x0 + x_span
    ws, xs, ps, bounds = _march_table(seed, x_lo_req, x_hi_req)
    (w_lo_b, lo_kind), (w_hi_b, hi_kind) = bounds
    if not np.all(np.diff(xs) > 0):
        raise QuadratureFailure("flow table is not strictly monotone")
    inv_guess = PchipInterpolator(xs, ws)
    x_of_w = PchipInterpolator(ws, xs)
    R = seed.rhs

    # a root boundary is approached as x -> +-infinity; pole and infinite-w
    # boundaries sit at the finite table ends
    x_lo_fam = -math.inf if lo_kind == "root" else float(xs[0])
    x_hi_fam = math.inf if hi_kind == "root" else float(xs[-1])
    interval = Interval(x_lo_fam, x_hi_fam)

    w_min, w_max = float(ws[0]), float(ws[-1])

    def w0(x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        w = np.clip(inv_guess(np.clip(x, xs[0], xs[-1])), w_min, w_max)
        for _ in range(40):
            # Newton on F(w) = x(w) - x with x(w) anchored to the table
            idx = np.searchsorted(ws, w) - 1
            idx = np.clip(idx, 0, len(ws) - 2)
            a = ws[idx]
            mid = 0.5 * (a + w)
            half = 0.5 * (w - a)
            xw = xs[idx] + half * np.sum(
                _GL_WEIGHTS[:, None] / R(mid[None, :] + half[None, :] * _GL_NODES[:, None]),
                axis=0)
            err = xw - x
            if np.max(np.abs(err)) < 1e-13 * np.maximum(1.0, np.abs(x)).max():
                break
            w = np.clip(w - err * R(w), w_min, w_max)
        return w if w.shape != (1,) else w[0]

    psi_exp = PchipInterpolator(ws, ps)

    def psi0(x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        w = np.atleast_1d(w0(x))
        idx = np.clip(np.searchsorted(ws, w) - 1, 0, len(ws) - 2)
        a = ws[idx]
        mid = 0.5 * (a + w)
        half = 0.5 * (w - a)
        wm = mid[None, :] + half[None, :] * _GL_NODES[:, None]
        tail = half * np.sum(_GL_WEIGHTS[:, None] * wm / R(wm), axis=0)
        out = np.exp(-(ps[idx] + tail))
        return out if out.shape != (1,) else out[0]

    e0 = _energy_zero(seed, (w_lo_b, lo_kind), (w_hi_b, hi_kind))

    def potential(x):
        w = w0(x)
        return e0 - (R(w) - np.asarray(w) ** 2)

    def w_inverse(w):
        w = np.asarray(w, dtype=float)
        return x_of_w(np.clip(w, w_min, w_max))

    x_zero = float(seed.x0)
    wl = w_lo_b if lo_kind != "infinite" else -math.inf
    wh = w_hi_b if hi_kind != "infinite" else math.inf
    return RationalFamilySolution(
        seed=seed, provenance="quadrature", interval=interval, e0=float(e0),
        w0=w0, psi0=psi0, potential=potential, w_inverse=w_inverse,
        w_limits=(float(wl), float(wh)), x_zero=x_zero)


def _energy_zero(seed: RationalSeed, lo_bound, hi_bound) -> float:
    """Interval-endpoint energy convention (prefer the upper endpoint)."""
    def f_split(w):
        return float(seed.rhs(w) - w * w)

    for bound, kind in (hi_bound, lo_bound):
        if kind == "root":
            return f_split(bound)
    # infinite endpoint: finite limit of R(w) - w^2 iff the quotient is
    # w^2 + 0*w + c
    quot, _ = divmod(seed.f.num, seed.f.den)
    cs = list(quot.coeffs) + [Fraction(0)] * (3 - len(quot.coeffs))
    if cs[2] == 1 and cs[1] == 0:
        return float(cs[0])
    return f_split(0.0)


# ---------------------------------------------------------------------------
# the validated worked example: R = (w-1)^3 / (w-3)

def new_potential_seed(x0: float = 2.0, interval_hint=None) -> RationalSeed:
    num = Polynomial([-1, 3, -3, 1])
    den = Polynomial([-3, 1])
    return RationalSeed(RationalFunction(num, den), x0=x0, interval_hint=interval_hint)


def _is_new_potential(seed: RationalSeed) -> bool:
    return seed.f == RationalFunction(Polynomial([-1, 3, -3, 1]), Polynomial([-3, 1]))


def new_potential_family() -> RationalFamilySolution:
    """Closed forms of the worked rational family on x >= 0:

    W0 = (2 sqrt(x+1/4) - 3)/(2 sqrt(x+1/4) - 1),  V = -2/sqrt(x+1/4),
    psi0 = exp(-x + 2 sqrt(x+1/4)) (2 sqrt(x+1/4) - 1),  E0 = -1.
    """
    seed = new_potential_seed()

    def s_of(x):
        return np.sqrt(np.asarray(x) + 0.25)

    def w0(x):
        s = s_of(x)
        return (2 * s - 3) / (2 * s - 1)

    def psi0(x):
        x = np.asarray(x)
        s = s_of(x)
        return np.exp(-x + 2 * s) * (2 * s - 1)

    def potential(x):
        return -2.0 / s_of(x)

    def w_inverse(w):
        w = np.asarray(w, dtype=float)
        s = (w - 3.0) / (2.0 * (w - 1.0))
        return s * s - 0.25

    return RationalFamilySolution(
        seed=seed, provenance="closed_form",
        interval=Interval(0.0, math.inf, lo_open=False),
        e0=-1.0, w0=w0, psi0=psi0, potential=potential,
        w_inverse=w_inverse, w_limits=(-math.inf, 1.0), x_zero=2.0)


# ---------------------------------------------------------------------------
# excited state of the worked example

def rational_rung_system(seed: RationalSeed, n: int) -> CoefficientSystem:
    """Invariance-identity coefficient system for a rational seed.

    W_n = P/Q with deg P = l+n+1 and deg Q = l+n, both monic:

        (P'Q - PQ') N - P^2 D = (N - (w^2 - dE) D) Q^2,

    N/D the reduced seed.  The system carries deg(D) more equations than
    unknowns; the identity's top coefficient cancels for monic P, Q.  For
    the worked example the remaining overdetermination is structural: no
    exact rational rung exists and the system is solved in the
    quasi-solution sense (see excited_rational).
    """
    m = seed.l + n
    N = [Fraction(c) for c in seed.f.num.coeffs]
    D = [Fraction(c) for c in seed.f.den.coeffs]
    n_eq = 2 * m + seed.l + 2

    def residual(values):
        one = values[-1] * 0 + 1
        P = list(values[: m + 1]) + [one]
        Q = list(values[m + 1: 2 * m + 1]) + [one]
        dE = values[2 * m + 1]
        Nn = [c + dE * 0 for c in N]
        Dn = [c + dE * 0 for c in D]
        wr = _padd(_pmul(_pder(P), Q), _pneg(_pmul(P, _pder(Q))))
        lhs = _padd(_pmul(wr, Nn), _pneg(_pmul(_pmul(P, P), Dn)))
        inner = _padd(Nn, _pneg(_pmul([-dE, dE * 0, one], Dn)))
        T = _padd(lhs, _pneg(_pmul(inner, _pmul(Q, Q))))
        zero = values[-1] * 0
        T = list(T) + [zero] * (n_eq + 1 - len(T))
        return T[:n_eq]

    names = tuple(f"p{i}" for i in range(m + 1)) + tuple(f"q{i}" for i in range(m)) + ("dE",)
    eqs = tuple((lambda v, k=k: residual(v)[k]) for k in range(n_eq))
    return CoefficientSystem(unknowns=names, equations=eqs, tag=f"rational-rung-{n}")


@dataclass
class RationalExcitedState:
    rung: LadderRung
    energy: float
    psi: Callable
    kappa: float
    lam: float
    mu: float
    node_x: float
    structural_residual: float
    system_residual: float


def _template_rung_guess(kappa: float, lam: float, mu: float):
    """P, Q (ascending, monic) of the product-form log-derivative
    kappa - lam (w-1)/(w-3) + (w-1)^2/(w-3) - 2 (w-1)^2 / ((w-3) L),
    with L = (1-mu) w + (mu-3); used as newton initial guesses."""
    wm1 = [-1.0, 1.0]
    wm3 = [-3.0, 1.0]
    L = [mu - 3.0, 1.0 - mu]
    big = _padd(
        _padd([kappa * c for c in _pmul(wm3, L)], [-lam * c for c in _pmul(wm1, L)]),
        _padd(_pmul(_pmul(wm1, wm1), L), [-2.0 * c for c in _pmul(wm1, wm1)]),
    )
    lead = L[-1]
    P = [c / lead for c in big]
    Q = [c / lead for c in _pmul(wm3, L)]
    return P[:3], Q[:2]


def excited_rational(family: RationalFamilySolution, n: int = 1) -> RationalExcitedState:
    """First excited state of the validated rational family.

    Solves the R_{3,2} rung system as a square quasi-solution (the top
    nontrivial coefficient equation is withheld and reported as the
    structural residual: the identity is overdetermined and has no exact
    rational root, so the printed product form is necessarily approximate).
    Template constants follow from the solved energy and node:
    kappa = sqrt(-E1), lam = 2/kappa (the system's own asymptotic
    relations) and mu = 2 sqrt(x_node + 1/4).
    """
    if n != 1:
        raise InvalidSeed("only the first excited state is implemented for rational seeds")
    if not _is_new_potential(family.seed):
        raise InvalidSeed("excited_rational is validated for the worked "
                          "R = (w-1)^3/(w-3) family only")
    full = rational_rung_system(family.seed, 1)
    n_eq = len(full.equations)
    square = CoefficientSystem(unknowns=full.unknowns,
                               equations=full.equations[: n_eq - 1],
                               tag=full.tag + "-quasi")

    e0 = family.e0
    candidates = []
    for mu0 in (3.5, 3.2, 3.8):
        for efac in (0.6, 0.5, 0.75):
            kappa0 = math.sqrt(-e0 * efac)
            lam0 = 2.0 + 2.0 / mu0
            P, Q = _template_rung_guess(kappa0, lam0, mu0)
            guess = list(P) + list(Q) + [e0 * (efac - 1.0)]
            try:
                res = solve_system(square, guess, mode="newton", tol=1e-12, max_iter=120)
            except (NoConvergence, SingularJacobian):
                continue
            vals = res.values
            dE = vals[-1]
            if not 1e-6 < dE < -e0:      # bound state: e0 < E1 < 0
                continue
            qs = list(vals[3:5]) + [1.0]
            nodes = _real_roots_in(qs, family.w_limits[0], family.w_limits[1])
            if len(nodes) != 1:
                continue
            p_desc = [1.0] + list(vals[:3])[::-1]
            if abs(np.polyval(p_desc, nodes[0])) < 1e-8:  # reducible: node shared with P
                continue
            candidates.append((vals, nodes[0]))
    if not candidates:
        raise NoPhysicalBranch("no single-node quasi-solution found for the rational rung")
    vals, w_node = min(candidates, key=lambda c: c[0][-1])

    structural = abs(float(full.equations[n_eq - 1](list(vals))))
    system_res = max(abs(float(eq(list(vals)))) for eq in square.equations)

    E1 = e0 + vals[-1]
    kappa = math.sqrt(-E1)
    lam = 2.0 / kappa
    s_node = (w_node - 3.0) / (2.0 * (w_node - 1.0))
    mu = 2.0 * s_node
    node_x = s_node * s_node - 0.25

    rung_fn = _float_ratfunc(list(vals[:3]) + [1.0], list(vals[3:5]) + [1.0])
    assembly = WavefunctionAssembly(exp_rate=-kappa, base_exponent=float("nan"),
                                    node_roots=(w_node,), trig_factors=None)
    rung = LadderRung(n=1, rung_fn=rung_fn, energy_offset=float(vals[-1]),
                      assembly=assembly, exact=False, energy_offset_exact=None)

    def psi(x):
        x = np.asarray(x)
        s = np.sqrt(x + 0.25)
        return np.exp(-kappa * x + lam * s) * (2 * s - 1.0) * (2 * s - mu)

    return RationalExcitedState(rung=rung, energy=float(E1), psi=psi,
                                kappa=float(kappa), lam=float(lam), mu=float(mu),
                                node_x=float(node_x),
                                structural_residual=structural,
                                system_residual=system_res)


# ---------------------------------------------------------------------------
# tangent-substitution ansatz

@dataclass
class TanAnsatzResult:
    matched: bool
    rational: Optional[RationalFunction]
    phi: Optional[float]
    residual_norm: float
    note: str = ""


def tan_ansatz_match(seed: RationalSeed, phi: float, ansatz_degree: int) -> TanAnsatzResult:
    """Try W0 = T(tan(phi (x - x0))) with T rational of degree
    ansatz_degree over ansatz_degree - 1.

    Substituting into the seed with tan' = phi (1 + tan^2) and equating
    coefficients in the tangent variable yields a nonlinear system in T's
    coefficients and phi; newton runs from a deterministic multistart
    (including the supplied phi as a frequency guess).  Inconsistency is a
    report, not an error: matched=False.
    """
    d = ansatz_degree
    if d < 1:
        raise InvalidSeed("ansatz degree must be >= 1")
    Nf = [Fraction(c) for c in seed.f.num.coeffs]
    Df = [Fraction(c) for c in seed.f.den.coeffs]
    m = len(Nf) - 1

    def residual(values):
        one = values[-1] * 0 + 1
        P = list(values[:d + 1])                       # numerator, free
        Q = list(values[d + 1: 2 * d]) + [one]         # denominator, monic deg d-1
        ph = values[2 * d]
        # f(T) = FN/FD lifted over the common power Q^m
        FN = [one * 0]
        FD = [one * 0]
        for i, c in enumerate(Nf):
            term = [c + one * 0]
            for _ in range(i):
                term = _pmul(term, P)
            for _ in range(m - i):
                term = _pmul(term, Q)
            FN = _padd(FN, term)
        for j, c in enumerate(Df):
            term = [c + one * 0]
            for _ in range(j):
                term = _pmul(term, P)
            for _ in range(m - j):
                term = _pmul(term, Q)
            FD = _padd(FD, term)
        wr = _padd(_pmul(_pder(P), Q), _pneg(_pmul(P, _pder(Q))))
        lhs = _pmul([ph], _pmul(_pmul(wr, [one, one * 0, one]), FD))
        rhs = _pmul(_pmul(Q, Q), FN)
        T = _padd(lhs, _pneg(rhs))
        return T

    probe = residual([0.1] * (2 * d) + [1.0])
    n_eq = len(probe)
    eqs = tuple((lambda v, k=k: residual(v)[k]) for k in range(n_eq))
    system = CoefficientSystem(
        unknowns=tuple(f"c{i}" for i in range(d + 1))
        + tuple(f"d{i}" for i in range(d - 1)) + ("phi",),
        equations=eqs, tag=f"tan-ansatz-{d}")

    def genuine(c) -> Optional[RationalFunction]:
        """Reject spurious newton roots: frozen frequency, a constant T
        (which annihilates f(T) at a root of the numerator), or a candidate
        whose assembled flow fails the seed equation on sample points."""
        ph = float(c[2 * d])
        if abs(ph) < 1e-6:
            return None
        rational = _float_ratfunc(list(c[:d + 1]), list(c[d + 1: 2 * d]) + [1.0])
        if rational.num.degree <= 0 and rational.den.degree == 0:
            return None
        num = np.array([float(v) for v in rational.num.coeffs])[::-1]
        den = np.array([float(v) for v in rational.den.coeffs])[::-1]
        xs = np.linspace(-0.35, 0.35, 41) / abs(ph)
        t = np.tan(ph * xs)
        w_vals = np.polyval(num, t) / np.polyval(den, t)
        h = 1e-6 / abs(ph)
        tp = np.tan(ph * (xs + h))
        tm = np.tan(ph * (xs - h))
        dw = (np.polyval(num, tp) / np.polyval(den, tp)
              - np.polyval(num, tm) / np.polyval(den, tm)) / (2 * h)
        resid = dw - seed.rhs(w_vals)
        if not np.all(np.isfinite(resid)):
            return None
        if np.max(np.abs(resid)) > 1e-4 * (1 + np.max(np.abs(dw))):
            return None
        return rational

    A = float(seed.A)
    phi_starts = [phi] if phi and phi > 0 else []
    phi_starts += [0.5, 1.0, 2.0, math.sqrt(abs(A)) or 1.0]
    best = None
    best_fn = None
    for ph0 in phi_starts:
        for slope in (1.0, 2.0, 0.5):
            guess = [0.0] * (d + 1)
            guess[1] = slope
            guess += [0.1] * (d - 1)
            guess += [ph0]
            try:
                res = solve_system(system, guess, mode="newton", tol=1e-10, max_iter=120)
            except (NoConvergence, SingularJacobian):
                continue
            fn = genuine(res.values)
            if fn is None:
                continue
            if best is None or res.residual_norm < best.residual_norm:
                best, best_fn = res, fn
    if best is None:
        return TanAnsatzResult(matched=False, rational=None, phi=None,
                               residual_norm=math.inf,
                               note="no consistent coefficient set found")
    return TanAnsatzResult(matched=True, rational=best_fn,
                           phi=float(best.values[2 * d]),
                           residual_norm=best.residual_norm)
