"""Exception types raised by the geometry kernel."""


class CreaseError(Exception):
    """Base class for all kernel errors."""


class GridTooCoarse(CreaseError):
    pass


class OdeBlowUp(CreaseError):
    """Non-finite right-hand side during integration; carries the offending t."""

    def __init__(self, t, message=None):
        self.t = t
        super().__init__(message or f"ODE right-hand side became non-finite at t={t!r}")


class BadFrame(CreaseError):
    pass


class DegenerateCurve(CreaseError):
    pass


class NotDevelopable(CreaseError):
    pass


class InclinationSingular(CreaseError):
    pass


class InconsistentBend(CreaseError):
    pass


class BadDocument(CreaseError):
    pass


class DegenerateRuling(CreaseError):
    pass


class RulingTangentToCrease(CreaseError):
    pass


class FoldAngleOutOfRange(CreaseError):
    """Requested fold constant exceeds the attainable bound (carried in .bound)."""

    def __init__(self, bound, message=None):
        self.bound = bound
        super().__init__(message or f"fold constant out of range; attainable bound is {bound!r}")


class AssemblyMismatch(CreaseError):
    pass


class TransformDegenerate(CreaseError):
    pass


class RulingParallelToTarget(CreaseError):
    pass


class InflectionInPath(CreaseError):
    pass


class StraightCreaseDegeneracy(CreaseError):
    pass


class ApexCollision(CreaseError):
    pass


class ReductionDegenerate(CreaseError):
    pass


class IncompatiblePattern(CreaseError):
    pass


class OutOfExtentWarning(UserWarning):
    """A constructed curve leaves the host patch extent (warning, not an error)."""
