"""riccatipot: exactly solvable 1D quantum potentials from autonomous
Riccati seeds W0' = f(W0), with ladder-built excited states and an
independent shooting-method oracle for end-to-end verification."""

from . import algebra, cascade, cli, errors, oracle, seed_quadratic, seed_rational, verify
from .algebra import (
    CoefficientSystem,
    Polynomial,
    RationalFunction,
    poly_eval,
    ratfunc_arith,
    ratfunc_compose,
    seed_derivative,
    solve_system,
)
from .cascade import (
    LadderRung,
    Spectrum,
    assemble_wavefunction,
    first_rung,
    ladder,
    rung_n,
    shape_invariance_probe,
    spectrum,
)
from .oracle import EigenResult, Grid, count_nodes, find_eigenvalue, inner_product, integrate_numerov
from .seed_quadratic import (
    FamilySolution,
    QuadraticSeed,
    coulomb_family,
    ground_state,
    morse_family,
    oscillator_family,
    potential_of,
    solve_seed,
)
from .seed_rational import (
    RationalFamilySolution,
    RationalSeed,
    excited_rational,
    new_potential_family,
    new_potential_seed,
    solve_rational_seed,
    tan_ansatz_match,
)
from .verify import (
    VerificationReport,
    invariance_check,
    limit_suite,
    nonlinear_residual,
    riccati_residual,
    schrodinger_residual,
)

__version__ = "0.1.0"
