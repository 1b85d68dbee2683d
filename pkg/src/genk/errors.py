"""Exception hierarchy.

Everything raised for bad input derives from :class:`GenkError`, so the CLI can
map it to the invalid-input exit code in one place.
"""


class GenkError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(GenkError, ValueError):
    pass


class DegreeError(GenkError, ValueError):
    """A form does not have the degree an operation requires."""


class LieAlgebraError(GenkError, ValueError):
    """Structure constants or the invariant form fail validation."""


class AlgebraMismatch(GenkError, ValueError):
    pass


class InvalidMetric(GenkError, ValueError):
    """Matrix is not a generalized metric."""


class InvalidStructure(GenkError, ValueError):
    """Matrix is not a generalized complex structure (or a complex structure)."""


class GKValidationError(GenkError, ValueError):
    pass


class CommutationError(GKValidationError):
    pass


class PositivityError(GKValidationError):
    pass


class LatticeError(GenkError, ValueError):
    """Requested (p, q) or k lies outside the decomposition lattice."""


class NonIsotropicError(GenkError, ValueError):
    pass


class DegenerateReduction(GenkError, ValueError):
    pass


class ConnectionAxiomError(GenkError, ValueError):
    pass


class InstantonGateError(GenkError, ValueError):
    """Self-dual curvature is nonzero, so the instanton-tier complex is undefined."""

    def __init__(self, norm):
        super().__init__(f"moment map nonzero: |F_+| = {norm:.3e}")
        self.norm = norm


class ScenarioError(GenkError, ValueError):
    pass
