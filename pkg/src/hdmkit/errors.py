"""Exception types shared across the package."""


class HdmkitError(Exception):
    """Base class for all hdmkit errors."""


class ShapeError(HdmkitError, ValueError):
    """Operands have incompatible or unexpected dimensions."""


class NotHermitianError(HdmkitError, ValueError):
    """A matrix required to be Hermitian is asymmetric beyond tolerance."""


class NotPSDError(HdmkitError, ValueError):
    """A matrix required to be positive semidefinite has a negative eigenvalue."""


class InvalidStateError(HdmkitError, ValueError):
    """An input does not describe a quantum state."""


class RankExceedsWidthError(HdmkitError, ValueError):
    """A half density matrix cannot be narrower than the rank of its state."""


class NotRelatedError(HdmkitError, ValueError):
    """Two half density matrices do not share a Gram matrix."""


class NonHermitianImageError(HdmkitError, ValueError):
    """A probed map produced a non-Hermitian image."""


class NotCPError(HdmkitError, ValueError):
    """Operator-sum extraction requested for a map that is not completely positive."""


class SignatureError(HdmkitError, ValueError):
    """Pseudo-unitary signature does not fit the family sizes."""


class NotPseudoUnitaryError(HdmkitError, ValueError):
    """A matrix fails the pseudo-unitarity condition."""


class NoNegativeEigenvalueError(HdmkitError, ValueError):
    """A CP-violation witness was requested for a PSD Choi matrix."""


class NotPPTError(HdmkitError, ValueError):
    """The indecomposability check requires a PPT input state."""


class InvalidUPBError(HdmkitError, ValueError):
    """A product basis fails orthonormality or size constraints."""


class EpsTooLargeError(HdmkitError, ValueError):
    """Requested offset exceeds the minimal product overlap of the projector."""


class BoundViolatedError(HdmkitError, RuntimeError):
    """A computed quantity landed outside its guaranteed interval."""


class NumericalFailure(HdmkitError, RuntimeError):
    """An iterative numerical routine did not converge."""


class FormatError(HdmkitError, ValueError):
    """A document does not conform to the expected file format."""
