"""Exception hierarchy shared by every module of the package."""


class LorenzLabError(Exception):
    """Base class for all errors raised by lorenz_lab."""


# number fields
class NoRootInInterval(LorenzLabError):
    pass


class MultipleRootsInInterval(LorenzLabError):
    pass


class NonSquarefree(LorenzLabError):
    def __init__(self, factor):
        super().__init__(f"defining polynomial has repeated factor {factor}")
        self.factor = factor


class DivisionByZero(LorenzLabError, ZeroDivisionError):
    pass


class FieldMismatch(LorenzLabError):
    pass


class ZeroDivisor(LorenzLabError):
    """Inversion met a nontrivial factor of the modulus and splitting is disabled."""


# maps
class OrderViolation(LorenzLabError):
    pass


class NotExpanding(LorenzLabError):
    pass


class CriticalOutOfRange(LorenzLabError):
    pass


class AmbiguousCritical(LorenzLabError):
    """Plain evaluation at the critical point was requested."""


class RequiresSide(LorenzLabError):
    """A plain interior point maps onto a doubled point; pass x_- or x_+ instead."""


class MonotoneDepthExceeded(LorenzLabError):
    pass


class EmptyInterval(LorenzLabError):
    pass


# cycles / renormalization / markov
class SlopeOneLap(LorenzLabError):
    pass


class OutOfBound(LorenzLabError):
    pass


class NotLorenz(LorenzLabError):
    def __init__(self, reason: str, detail: str = ""):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason
        self.detail = detail


class NoPointLeftOfC(LorenzLabError):
    pass


class NoPointRightOfC(LorenzLabError):
    pass


class PeriodicityFailed(LorenzLabError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NotEventuallyPeriodic(LorenzLabError):
    pass


class AlignmentFailure(LorenzLabError):
    pass


# cli
class ConfigParse(LorenzLabError):
    pass


class UnknownFixture(LorenzLabError):
    pass
