"""Quadratic-seed families: closed forms, branches, named constructors."""

import math
from fractions import Fraction as Fr

import numpy as np
import pytest

from riccatipot.errors import InvalidSeed, NoMonotoneBranch
from riccatipot.seed_quadratic import (
    QuadraticSeed,
    coulomb_family,
    ground_state,
    morse_family,
    oscillator_family,
    potential_of,
    solve_seed,
)
from riccatipot.verify import d1, family_invariants, riccati_seed_residual


def _proportional(f_vals, g_vals, rtol=1e-10):
    f_vals = np.asarray(f_vals, dtype=float)
    g_vals = np.asarray(g_vals, dtype=float)
    k = np.argmax(np.abs(g_vals))
    scale = f_vals[k] / g_vals[k]
    return np.allclose(f_vals, scale * g_vals, rtol=rtol, atol=rtol * np.max(np.abs(f_vals)))


class TestSolveSeed:
    def test_box_is_tangent(self):
        sol = solve_seed(QuadraticSeed(1, 0, 1))
        xs = np.linspace(-1.4, 1.4, 101)
        assert np.allclose(sol.w0(xs), np.tan(xs), atol=1e-12)
        assert sol.interval.lo == pytest.approx(-math.pi / 2)
        assert sol.interval.hi == pytest.approx(math.pi / 2)
        assert sol.branch == "trigonometric"

    def test_morse_recast_tanh_form(self):
        # seed (-1,-1,2) carries the hyperbolic branch with S = 3, x0 = 0
        sol = solve_seed(QuadraticSeed(-1, -1, 2, 0.0))
        xs = np.linspace(-3, 3, 101)
        assert np.allclose(sol.w0(xs), -0.5 + 1.5 * np.tanh(1.5 * xs), atol=1e-12)
        assert sol.branch == "hyperbolic"
        assert sol.interval.lo == -math.inf and sol.interval.hi == math.inf

    def test_degenerate_perfect_square(self):
        sol = solve_seed(QuadraticSeed(1, 2, 1, 0.5))
        xs = np.linspace(0.6, 8.0, 50)
        assert np.allclose(sol.w0(xs), -1.0 - 1.0 / (xs - 0.5), atol=1e-12)
        assert sol.branch == "degenerate"
        assert sol.interval.lo == 0.5 and sol.interval.hi == math.inf

    def test_negative_A_trigonometric_has_no_monotone_branch(self):
        with pytest.raises(NoMonotoneBranch):
            solve_seed(QuadraticSeed(-1, 0, -1))  # D = 4 > 0, A < 0

    def test_zero_A_rejected(self):
        with pytest.raises(InvalidSeed):
            QuadraticSeed(0, 1, 1)

    def test_branch_classification_by_discriminant(self):
        assert QuadraticSeed(1, 0, 1).branch == "trigonometric"
        assert QuadraticSeed(1, 2, 1).branch == "degenerate"
        assert QuadraticSeed(1, 3, 1).branch == "hyperbolic"

    def test_coth_branch_half_line(self):
        # A > 0, D < 0: coth form on a half line hosting a zero of W0
        sol = solve_seed(QuadraticSeed(1, -3, 1, 0.0))
        assert sol.interval.lo == 0.0 and sol.interval.hi == math.inf
        assert sol.x_zero is not None and sol.w0(sol.x_zero) == pytest.approx(0, abs=1e-12)


class TestGroundState:
    def test_box_cosine(self):
        sol = solve_seed(QuadraticSeed(1, 0, 1))
        xs = np.linspace(-1.5, 1.5, 61)
        assert np.allclose(ground_state(sol)(xs), np.cos(xs), atol=1e-14)

    def test_figure_family_A09(self):
        sol = solve_seed(QuadraticSeed(0.9, 0, 1))
        xs = np.linspace(-1.6, 1.6, 61)
        target = np.cos(np.sqrt(0.9) * xs) ** (1 / 0.9)
        assert np.allclose(sol.psi0(xs), target, atol=1e-13)

    def test_morse_constructor_ground_state(self):
        sol = solve_seed(morse_family(1, 2))
        xs = np.linspace(-4, 6, 81)
        target = np.exp(xs / 2) / np.cosh(1.5 * xs)
        assert np.allclose(sol.psi0(xs), target, rtol=1e-12)

    def test_psi0_vanishes_at_pole_endpoints(self):
        sol = solve_seed(QuadraticSeed(0.9, 0, 1))
        assert abs(sol.psi0(sol.interval.lo)) < 1e-12
        assert abs(sol.psi0(sol.interval.hi)) < 1e-12
        assert sol.psi0(sol.interval.hi + 0.2) == 0.0  # clipped past the wall


class TestPotential:
    def test_box_flat_potential(self):
        sol = solve_seed(QuadraticSeed(1, 0, 1))
        V, e0 = potential_of(sol)
        assert e0 == 1.0
        xs = np.linspace(-1.5, 1.5, 101)
        assert np.allclose(V(xs), 0.0, atol=1e-12)

    def test_trigonometric_well(self):
        sol = solve_seed(QuadraticSeed(0.5, 0, 1))
        V, e0 = potential_of(sol)
        xs = np.linspace(-1.9, 1.9, 101)
        assert np.allclose(V(xs), e0 - 1 + np.tan(np.sqrt(0.5) * xs) ** 2, atol=1e-10)
        # independent route: V = E0 - W0' + W0^2 with finite-difference W0'
        dW = d1(sol.w0, np.asarray(xs, dtype=np.longdouble))
        w = np.asarray(sol.w0(xs), dtype=np.longdouble)
        assert np.max(np.abs(np.asarray(V(xs), dtype=np.longdouble)
                             - (e0 - dW + w * w))) < 1e-9

    def test_morse_limit_superpotential(self):
        xs = np.linspace(-1, 3, 101)
        sol = solve_seed(morse_family(1e-3, 1.0))
        assert np.max(np.abs(np.asarray(sol.w0(xs)) - (1.0 - np.exp(-xs)))) < 5e-3


class TestOscillatorFamily:
    def test_box_special_case(self):
        seed = oscillator_family(1)
        assert (seed.A, seed.B, seed.C) == (1, 0, 1)

    def test_invalid(self):
        with pytest.raises(InvalidSeed):
            oscillator_family(0)
        with pytest.raises(InvalidSeed):
            oscillator_family(-0.5)

    def test_small_A_close_to_gaussian(self):
        sol = solve_seed(oscillator_family(1e-3))
        xs = np.linspace(-2, 2, 101)
        psi = np.asarray(sol.psi0(xs)) / sol.psi0(0.0)
        assert np.max(np.abs(psi - np.exp(-xs ** 2 / 2))) < 1e-2

    def test_limit_distance_monotone(self):
        xs = np.linspace(-2, 2, 201)
        target = np.exp(-xs ** 2 / 2)
        dists = []
        for A in (0.5, 0.1, 0.01, 0.001):
            sol = solve_seed(oscillator_family(A))
            dists.append(np.max(np.abs(sol.psi0(xs) / sol.psi0(0.0) - target)))
        assert all(b < a for a, b in zip(dists, dists[1:]))


class TestCoulombFamily:
    def test_hydrogen_limit_shape(self):
        B = 2.0
        sol = solve_seed(coulomb_family(1.0001, B))
        xs = np.linspace(0.2, 5.0, 101)
        target = 0.5 * B * xs * np.exp(-0.5 * B * xs)
        assert _proportional(sol.psi0(xs), target, rtol=2e-3)

    def test_A2_B2_closed_form(self):
        sol = solve_seed(coulomb_family(2, 2))
        xs = np.linspace(0.1, 3.0, 101)
        target = np.sin(xs) ** 0.5 * np.exp(-xs / 2)
        assert _proportional(sol.psi0(xs), target, rtol=1e-9)
        assert sol.interval.lo == pytest.approx(0.0, abs=1e-12)
        assert sol.interval.hi == pytest.approx(math.pi, abs=1e-12)

    def test_B_scaling(self):
        # replacing B by 2B rescales x by 1/2, up to an overall constant
        xs = np.linspace(0.05, 1.4, 60)
        psi_b = solve_seed(coulomb_family(1.5, 1.0)).psi0
        psi_2b = solve_seed(coulomb_family(1.5, 2.0)).psi0
        assert _proportional(psi_2b(xs), psi_b(2 * xs), rtol=1e-9)

    def test_validated_region(self):
        with pytest.raises(InvalidSeed):
            coulomb_family(0.9, 2.0)
        with pytest.raises(InvalidSeed):
            coulomb_family(2.0, -1.0)


class TestMorseFamily:
    def test_seed_and_superpotential(self):
        seed = morse_family(1, 2)
        assert (float(seed.A), float(seed.B), float(seed.C)) == (-1.0, -1.0, 2.0)
        sol = solve_seed(seed)
        xs = np.linspace(-2, 4, 61)
        assert np.allclose(sol.w0(xs), -0.5 + 1.5 * np.tanh(1.5 * xs - 0.5 * math.log(1)),
                           atol=1e-12)

    def test_normalizable_tails(self):
        sol = solve_seed(morse_family(0.5, 1))
        assert abs(sol.psi0(50.0)) < 1e-10
        assert abs(sol.psi0(-50.0)) < 1e-10

    def test_invalid(self):
        with pytest.raises(InvalidSeed):
            morse_family(-1, 1)
        with pytest.raises(InvalidSeed):
            morse_family(1, 0)


FAMILIES = [
    QuadraticSeed(1, 0, 1),
    QuadraticSeed(Fr(9, 10), 0, 1),
    QuadraticSeed(1, 2, 2),
    coulomb_family(2, 2),
    morse_family(1, 2),
    QuadraticSeed(1, -2, 1),   # degenerate, normalizable side
]


@pytest.mark.parametrize("seed", FAMILIES, ids=lambda s: f"A={float(s.A):g},B={float(s.B):g},C={float(s.C):g}")
class TestFamilyInvariants:
    def test_riccati_residual(self, seed):
        rep = riccati_seed_residual(solve_seed(seed))
        assert rep.passed, f"residual {rep.max_residual:.3e}"

    def test_monotone_logderivative_positive(self, seed):
        reports = family_invariants(solve_seed(seed))
        for rep in reports:
            assert rep.passed, f"{rep.check}: {rep.max_residual:.3e}"
