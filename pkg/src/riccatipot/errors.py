"""Exception hierarchy shared across the package.

Input-validation errors derive from SeedError; numerical-failure errors
derive from SolverError.  The CLI maps SeedError to exit code 2 and
SolverError to exit code 3.
"""


class RiccatipotError(Exception):
    pass


class SeedError(RiccatipotError, ValueError):
    """Invalid construction input."""


class SolverError(RiccatipotError, RuntimeError):
    """Numerical procedure failed."""


class InvalidSeed(SeedError):
    pass


class NoMonotoneBranch(SeedError):
    """No real interval on which the superpotential is strictly increasing."""


class PoleInCoefficients(SeedError):
    """First-rung closed forms have poles at A in {-1, -2}."""


class DivisionByZeroFunction(RiccatipotError, ZeroDivisionError):
    """Division by the zero rational function."""


class DegenerateComposition(RiccatipotError, ZeroDivisionError):
    """Composition whose denominator collapses to the zero polynomial."""


class NoConvergence(SolverError):
    pass


class SingularJacobian(SolverError):
    pass


class NoPhysicalBranch(SolverError):
    """No solution branch passes the node-count/normalizability selection."""


class StalledFlow(SeedError):
    """The seed right-hand side has a zero or a sign-changing pole inside
    the requested superpotential range."""


class QuadratureFailure(SolverError):
    pass


class BracketFailure(SolverError):
    pass


class NodeMismatch(SolverError):
    pass


class GridMismatch(RiccatipotError, ValueError):
    pass
