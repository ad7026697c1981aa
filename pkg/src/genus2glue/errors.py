"""Exception hierarchy shared by every module."""


class Genus2GlueError(Exception):
    """Base class; the CLI maps these to exit code 2 (input) or 1 (check)."""


class InvalidField(Genus2GlueError, ValueError):
    pass


class InternalError(Genus2GlueError, RuntimeError):
    pass


class FieldMismatch(Genus2GlueError, ValueError):
    pass


class SingularCurve(Genus2GlueError, ValueError):
    pass


class InvalidPoint(Genus2GlueError, ValueError):
    pass


class SupersingularUnsupported(Genus2GlueError):
    pass


class BudgetExceeded(Genus2GlueError):
    pass


class InvalidKernel(Genus2GlueError, ValueError):
    pass


class AssumptionViolated(Genus2GlueError, ValueError):
    pass


class ChartError(Genus2GlueError):
    pass


class SplitCheckFailed(Genus2GlueError):
    def __init__(self, message, lpoly_c=None, lpoly_product=None):
        super().__init__(message)
        self.lpoly_c = lpoly_c
        self.lpoly_product = lpoly_product


class ReportError(Genus2GlueError):
    pass


class InvalidSpecialization(Genus2GlueError, ValueError):
    pass


class ShapeError(Genus2GlueError, ValueError):
    pass


class KernelCheckFailed(Genus2GlueError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class AntiIsometryViolated(Genus2GlueError, ValueError):
    pass


class SizeBound(Genus2GlueError):
    pass


class PreconditionFailed(Genus2GlueError):
    pass


class RBoundViolated(Genus2GlueError, ValueError):
    pass


class NotFound(Genus2GlueError, KeyError):
    pass


class CoverUnsupported(Genus2GlueError):
    """Raised when a cover needs a symbolic dual that is only built for Frobenius."""
