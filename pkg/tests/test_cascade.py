"""Ladder construction: closed-form first rung, newton rungs, assembly,
spectra, shape invariance."""

import math
from fractions import Fraction as Fr

import numpy as np
import pytest

from riccatipot import QuadraticSeed, cascade, oracle
from riccatipot.algebra import Polynomial, RationalFunction
from riccatipot.errors import PoleInCoefficients
from riccatipot.seed_quadratic import coulomb_family, morse_family, solve_seed
from riccatipot.seed_rational import new_potential_family

W = RationalFunction.variable()


def _proportional(f_vals, g_vals, rtol=1e-9):
    f_vals = np.asarray(f_vals, dtype=float)
    g_vals = np.asarray(g_vals, dtype=float)
    k = np.argmax(np.abs(g_vals))
    scale = f_vals[k] / g_vals[k]
    return np.allclose(f_vals, scale * g_vals, rtol=rtol,
                       atol=rtol * np.max(np.abs(f_vals)))


class TestFirstRung:
    def test_box(self, box_seed):
        rung = cascade.first_rung(box_seed)
        assert rung.rung_fn == W - 1 / W
        assert rung.energy_offset == 3.0
        assert rung.energy_offset_exact == 3

    def test_paper_coefficients_A1_B2_C2(self):
        rung = cascade.first_rung(QuadraticSeed(1, 2, 2))
        # a1 = 15/4, b1 = 3, c1 = -3/2
        expected = W - Fr(15, 4) / (3 * W + Fr(3, 2))
        assert rung.rung_fn == expected
        assert rung.energy_offset_exact == Fr(15, 4)

    @pytest.mark.parametrize("A,C", [(1, 1), (Fr(1, 2), 3), (2, Fr(5, 7))])
    def test_even_seed_has_centered_pole(self, A, C):
        rung = cascade.first_rung(QuadraticSeed(A, 0, C))
        # c1 is odd in B, so B = 0 puts the rung pole at W0 = 0
        assert rung.rung_fn.den == Polynomial([0, 1])

    @pytest.mark.parametrize("A", [-1, -2, Fr(-1), Fr(-2)])
    def test_pole_in_coefficients(self, A):
        with pytest.raises(PoleInCoefficients):
            cascade.first_rung(QuadraticSeed(A, 1, 1))


class TestRungN:
    def test_box_rung2_is_cos3x(self, box_seed, box_ladder):
        rung = box_ladder[2]
        assert rung.energy_offset == 8.0
        sol = solve_seed(box_seed)
        psi2 = cascade.assemble_wavefunction(box_seed, rung, sol)
        xs = np.linspace(-1.5, 1.5, 201)
        assert _proportional(psi2(xs), np.cos(3 * xs))

    def test_box_rung3(self, box_ladder):
        assert box_ladder[3].energy_offset == 15.0
        assert box_ladder[3].rung_fn == (W ** 4 - 6 * W ** 2 + 1) / (W ** 3 - W)

    def test_osc9_rung1_matches_printed_state(self, osc9_seed, osc9_ladder):
        # cos(sqrt(A) x)^(1/A) sin(sqrt(A) x)/sqrt(A), one node at x = 0
        sol = solve_seed(osc9_seed)
        psi1 = cascade.assemble_wavefunction(osc9_seed, osc9_ladder[1], sol)
        xs = np.linspace(-1.55, 1.55, 301)
        A = 0.9
        target = np.cos(np.sqrt(A) * xs) ** (1 / A) * np.sin(np.sqrt(A) * xs) / np.sqrt(A)
        assert _proportional(psi1(xs), target)
        assert osc9_ladder[1].assembly.node_roots == (0.0,)

    def test_osc9_rung2_matches_printed_state(self, osc9_seed, osc9_ladder):
        sol = solve_seed(osc9_seed)
        psi2 = cascade.assemble_wavefunction(osc9_seed, osc9_ladder[2], sol)
        xs = np.linspace(-1.55, 1.55, 301)
        A = 0.9
        target = np.cos(np.sqrt(A) * xs) ** (1 / A) * (-1 + (1 + A) * np.cos(2 * np.sqrt(A) * xs)) / A
        assert _proportional(psi2(xs), target, rtol=1e-8)

    @pytest.mark.parametrize("seed", [
        QuadraticSeed(1, 0, 1), QuadraticSeed(Fr(9, 10), 0, 1),
        QuadraticSeed(1, 2, 2), QuadraticSeed(Fr(1, 2), Fr(1, 3), 1)])
    def test_general_path_agrees_with_closed_form_at_n1(self, seed):
        general = cascade.rung_n(seed, 1)
        closed = cascade.first_rung(seed)
        assert general.rung_fn == closed.rung_fn
        assert general.energy_offset_exact == closed.energy_offset_exact

    def test_exactness_of_acceptance_families(self, box_ladder, osc9_ladder):
        for rung in box_ladder[1:] + osc9_ladder[1:]:
            assert rung.exact

    def test_morse_rung(self):
        seed = morse_family(Fr(1, 10), 2)
        rung = cascade.rung_n(seed, 1)
        sol = solve_seed(seed)
        # E1 - E0 must match the closed form a1
        assert rung.energy_offset == pytest.approx(
            float(cascade.first_rung(seed).energy_offset))
        psi1 = cascade.assemble_wavefunction(seed, rung, sol)
        xs = np.linspace(-10, 40, 4001)
        vals = np.asarray(psi1(xs))
        assert oracle.count_nodes(vals) == 1

    def test_morse_exhausted_spectrum_raises(self):
        """Morse(1/2, 2) holds a single bound state: the algebraic rung
        exists (offset 3/4) but assembles to a non-normalizable function,
        so the physical-branch selection must refuse it.  (Shooting-oracle
        cross-check: the Sturm count stays at 1 all the way to E = 0-.)"""
        from riccatipot.errors import NoPhysicalBranch
        seed = morse_family(Fr(1, 2), 2)
        assert cascade.first_rung(seed).energy_offset == 0.75  # algebra fine
        with pytest.raises(NoPhysicalBranch):
            cascade.rung_n(seed, 1)


class TestAssembly:
    def test_box_psi1_is_sin2x(self, box_seed, box_ladder):
        psi1 = cascade.assemble_wavefunction(box_seed, box_ladder[1])
        xs = np.linspace(-1.5, 1.5, 200)
        assert _proportional(psi1(xs), np.sin(2 * xs))

    def test_n0_passthrough(self, box_seed, box_ladder):
        sol = solve_seed(box_seed)
        psi0 = cascade.assemble_wavefunction(box_seed, box_ladder[0], sol)
        xs = np.linspace(-1.5, 1.5, 50)
        assert np.allclose(psi0(xs), sol.psi0(xs), rtol=1e-14)

    def test_small_A_rung2_approaches_hermite(self):
        seed = QuadraticSeed(Fr(1, 100), 0, 1)
        rung = cascade.rung_n(seed, 2)
        assert rung.energy_offset == pytest.approx(4.04, abs=1e-9)
        psi2 = cascade.assemble_wavefunction(seed, rung)
        xs = np.linspace(-2.5, 2.5, 101)
        target = (4 * xs ** 2 - 2) * np.exp(-xs ** 2 / 2)
        got = np.asarray(psi2(xs), dtype=float)
        got = got / np.max(np.abs(got))
        target = target / np.max(np.abs(target))
        assert np.max(np.abs(got - target)) < 0.05

    def test_trig_factor_descriptors(self, box_ladder):
        fac = box_ladder[1].assembly.trig_factors
        assert fac is not None and len(fac) == 1
        alpha, beta, gamma = fac[0]
        assert (alpha, beta, gamma) == (0.0, 1.0, 1.0)  # sin(x)/cos(x) factor


class TestSpectrum:
    def test_box_offsets(self, box_seed):
        spec = cascade.spectrum(box_seed, 3)
        assert [e for _, e in spec.levels] == [1.0, 4.0, 9.0, 16.0]

    def test_n0_only(self, box_seed):
        spec = cascade.spectrum(box_seed, 0)
        assert spec.levels == ((0, 1.0),)

    def test_osc9_offsets_against_oracle(self, osc9_seed, osc9_ladder):
        """The conjectured offset pattern A n^2 + 2n is asserted only after
        the shooting oracle confirms each level."""
        sol = solve_seed(osc9_seed)
        pad = 1e-6 * sol.interval.width
        grid = oracle.Grid(sol.interval.lo + pad, sol.interval.hi - pad, 8001)
        for n, rung in enumerate(osc9_ladder):
            E = sol.e0 + rung.energy_offset
            res = oracle.find_eigenvalue(sol.potential, n, (E - 1.2, E + 1.2), grid)
            assert abs(res.energy - E) < 1e-4, f"level {n}"
            assert rung.energy_offset == pytest.approx(0.9 * n * n + 2 * n, abs=1e-12)

    def test_strictly_increasing(self, osc9_seed):
        spec = cascade.spectrum(osc9_seed, 3)
        es = spec.energies()
        assert all(b > a for a, b in zip(es, es[1:]))


class TestNodeCounts:
    @pytest.mark.parametrize("n", [0, 1, 2, 3])
    def test_box_nodes(self, box_seed, box_ladder, n):
        sol = solve_seed(box_seed)
        psi = cascade.assemble_wavefunction(box_seed, box_ladder[n], sol)
        xs = sol.interval.grid(4001)
        assert oracle.count_nodes(np.asarray(psi(xs))) == n

    @pytest.mark.parametrize("n", [0, 1, 2, 3])
    def test_osc9_nodes(self, osc9_seed, osc9_ladder, n):
        sol = solve_seed(osc9_seed)
        psi = cascade.assemble_wavefunction(osc9_seed, osc9_ladder[n], sol)
        xs = sol.interval.grid(4001)
        assert oracle.count_nodes(np.asarray(psi(xs))) == n


class TestOrthogonality:
    @pytest.mark.parametrize("seed_name", ["box", "osc9"])
    def test_pairwise(self, seed_name, box_seed, osc9_seed, box_ladder, osc9_ladder):
        seed = box_seed if seed_name == "box" else osc9_seed
        rungs = box_ladder if seed_name == "box" else osc9_ladder
        sol = solve_seed(seed)
        pad = 1e-6 * sol.interval.width
        grid = oracle.Grid(sol.interval.lo + pad, sol.interval.hi - pad, 8001)
        xs = grid.values
        vals = [np.asarray(cascade.assemble_wavefunction(seed, r, sol)(xs), dtype=float)
                for r in rungs]
        for i in range(4):
            for j in range(i + 1, 4):
                ip = oracle.inner_product(vals[i], vals[j], grid)
                ni = math.sqrt(oracle.inner_product(vals[i], vals[i], grid))
                nj = math.sqrt(oracle.inner_product(vals[j], vals[j], grid))
                assert abs(ip) / (ni * nj) < 1e-7, (i, j)


class TestShapeInvariance:
    def test_box_partner(self, box_seed):
        rep = cascade.shape_invariance_probe(box_seed)
        assert rep.shape_invariant
        assert rep.fitted_parameters["A"] == pytest.approx(0.5, abs=1e-6)
        assert rep.fitted_parameters["C"] == pytest.approx(2.0, abs=1e-6)

    def test_oscillator_half(self):
        rep = cascade.shape_invariance_probe(QuadraticSeed(0.5, 0, 1))
        assert rep.shape_invariant
        assert rep.relative_residual < 1e-6

    def test_coulomb_and_morse(self):
        assert cascade.shape_invariance_probe(coulomb_family(2, 2)).shape_invariant
        assert cascade.shape_invariance_probe(morse_family(0.5, 1)).shape_invariant

    def test_new_potential_is_not_shape_invariant(self):
        rep = cascade.shape_invariance_probe(new_potential_family())
        assert not rep.shape_invariant
        assert rep.relative_residual > 1e-2
