"""Exception hierarchy.

Certificate failures (unitarity, positive semidefiniteness, POVM validity)
share a base class so the CLI can map them to a single exit code.
"""


class CollphaseError(Exception):
    """Base class for all library errors."""


class SizeLimitError(CollphaseError, ValueError):
    """Requested enumeration exceeds the documented size limit."""


class DimensionError(CollphaseError, ValueError):
    """Operands have incompatible shapes or dimensions."""


class CertificateError(CollphaseError, ValueError):
    """An input failed a physical-validity certificate."""


class NotUnitaryError(CertificateError):
    pass


class RealizabilityError(CertificateError):
    """Gram matrix is not positive semidefinite, so no states realize it."""

    def __init__(self, message: str, min_eigenvalue: float):
        super().__init__(f"{message} (min eigenvalue {min_eigenvalue:.3e})")
        self.min_eigenvalue = min_eigenvalue


class PovmError(CertificateError):
    """POVM elements are not PSD, incomplete, or infeasible."""


class InvalidStateError(CertificateError):
    """State vector or density matrix violates normalization/PSD/Hermiticity."""


class DisconnectedError(CollphaseError, ValueError):
    """A cycle traverses an edge of zero overlap (infinite distance)."""


class ConsistencyError(CollphaseError, ArithmeticError):
    """Computed probability failed an internal sanity check."""


class PauliExclusionError(CollphaseError, ValueError):
    """Antisymmetrized input state vanishes identically."""


class UnsupportedCaseError(CollphaseError, NotImplementedError):
    pass


class ConfigError(CollphaseError, ValueError):
    """Scenario configuration could not be parsed or resolved."""
