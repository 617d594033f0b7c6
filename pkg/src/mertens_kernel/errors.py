"""Exception hierarchy shared by every module.

Each class carries a short ``kind`` tag that the command-line front end
reports in its JSON envelope.
"""


class KernelToolkitError(Exception):
    kind = "error"


class InvalidArgument(KernelToolkitError, ValueError):
    kind = "invalid-argument"


class TableTooSmall(KernelToolkitError, ValueError):
    kind = "table-too-small"


class NoSquareRoot(KernelToolkitError, ValueError):
    kind = "no-square-root"


class CannotLift(KernelToolkitError, ValueError):
    kind = "cannot-lift"


class NonCoprimeModuli(KernelToolkitError, ValueError):
    kind = "non-coprime-moduli"


class ResourceLimit(KernelToolkitError, RuntimeError):
    kind = "resource-limit"


class NoConvergence(KernelToolkitError, RuntimeError):
    kind = "no-convergence"


class ConstructionBug(KernelToolkitError, AssertionError):
    kind = "construction-bug"


class PreconditionViolation(KernelToolkitError, ValueError):
    kind = "precondition-violation"


class InvalidInstance(KernelToolkitError, ValueError):
    kind = "invalid-instance"
