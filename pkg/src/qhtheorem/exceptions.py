"""Exception types raised across the package."""


class DimensionError(ValueError):
    """Operand shapes are incompatible with the requested operation."""


class NotHermitianError(ValueError):
    def __init__(self, defect: float, tol: float):
        self.defect = defect
        self.tol = tol
        super().__init__(f"matrix is not Hermitian: max|M - M^dagger| = {defect:.3e} > tol = {tol:.1e}")


class InvalidStateError(ValueError):
    """A matrix failed density-matrix validation.

    ``invariant`` is one of ``"hermiticity"``, ``"trace"`` or ``"positivity"``
    and ``defect`` is the measured violation.
    """

    def __init__(self, invariant: str, defect: float, tol: float):
        self.invariant = invariant
        self.defect = defect
        self.tol = tol
        super().__init__(f"invalid density matrix: {invariant} violated (defect {defect:.6g}, tol {tol:.1e})")


class NotUnitaryError(ValueError):
    def __init__(self, defect: float, tol: float):
        self.defect = defect
        self.tol = tol
        super().__init__(f"operator is not unitary: max|U^dagger U - 1| = {defect:.3e} > tol = {tol:.1e}")


class ChannelError(ValueError):
    """Kraus family or projector family is malformed."""


class ParameterError(ValueError):
    """A scenario parameter lies outside its domain."""

    def __init__(self, field: str, value, reason: str):
        self.field = field
        self.value = value
        super().__init__(f"{field}={value!r}: {reason}")
