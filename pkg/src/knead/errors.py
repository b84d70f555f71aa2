"""Exception hierarchy shared by every module.

Input problems derive from :class:`InputError` (CLI exit code 2), lap budget
overruns from :class:`LapBudgetExceeded` (exit code 3) and failed identities
from :class:`IdentityViolated` (exit code 1).
"""


class KneadError(Exception):
    """Base class for all library errors."""


class InputError(KneadError):
    """Map data is malformed or inconsistent."""


class OverlappingIntervals(InputError):
    pass


class BoundaryNotCritical(InputError):
    pass


class ImageEscapesOmega(InputError):
    pass


class NonMonotoneBranch(InputError):
    pass


class NotCritical(InputError):
    pass


class PointOutsideOmega(InputError):
    pass


class UnknownBoundaryPoint(InputError):
    pass


class InconsistentGluing(InputError):
    pass


class VertexNotCovered(InputError):
    pass


class InteriorResidue(InputError):
    pass


class NotInCycleSpace(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message, line=None, column=None, path=None):
        self.line = line
        self.column = column
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:{column}:"
        super().__init__(f"{where} {message}" if where else message)


class SemanticError(InputError):
    def __init__(self, message, field=None, cause=None):
        self.field = field
        self.cause = cause
        super().__init__(f"{field}: {message}" if field else message)


class LapBudgetExceeded(KneadError):
    def __init__(self, level, count, budget):
        self.level = level
        self.count = count
        self.budget = budget
        super().__init__(
            f"iterate {level} needs more than {budget} laps (reached {count})")


class IdentityViolated(KneadError):
    def __init__(self, name, degree=None, lhs=None, rhs=None):
        self.name = name
        self.degree = degree
        self.lhs = lhs
        self.rhs = rhs
        msg = f"{name} fails"
        if degree is not None:
            msg += f" at n={degree}: {lhs} != {rhs}"
        super().__init__(msg)


class UnstableRoot(KneadError):
    def __init__(self, modulus, half_modulus):
        self.modulus = modulus
        self.half_modulus = half_modulus
        super().__init__(
            f"smallest root modulus {modulus} moves to {half_modulus} "
            "when the truncation is halved")


class DegreeTooSmall(KneadError):
    pass


class NonUnitConstantTerm(KneadError):
    pass


class WrongConstantTerm(KneadError):
    pass


class InfiniteFixedSet(KneadError):
    def __init__(self, n, lap):
        self.n = n
        self.lap = lap
        super().__init__(f"iterate {n} is the identity on the lap [{lap[0]}, {lap[1]}]")
