"""Exception and warning classes raised by chamberfold."""


class ChamberfoldError(Exception):
    """Base class for all chamberfold errors."""


class SpecError(ChamberfoldError, ValueError):
    """A group spec is malformed (bad matrix shape, entries, keys)."""


class SignatureMismatch(SpecError):
    """The Gram matrix signature does not match the declared geometry."""


class NonSimplicialChamber(ChamberfoldError):
    pass


class LightlikeVector(ChamberfoldError, ValueError):
    """Reflection requested in a vector u with B(u, u) = 0."""


class ModelViolation(ChamberfoldError, ValueError):
    pass


class NotEnumerated(ChamberfoldError):
    """Element lies beyond the enumeration horizon."""


class NotInGroup(ChamberfoldError):
    pass


class NotRegular(ChamberfoldError, ValueError):
    pass


class InconsistentComponent(ChamberfoldError, ValueError):
    pass


class PreconditionViolated(ChamberfoldError, ValueError):
    pass


class NotInDualCone(PreconditionViolated):
    pass


class UniquenessViolation(ChamberfoldError):
    """More than one (or no) tile claimed a point that should lie in exactly one."""


class NotFound(ChamberfoldError):
    pass


class BudgetExhausted(ChamberfoldError):
    """Search horizon reached without an answer. Inconclusive, not a disproof."""

    def __init__(self, max_word_length, message=None):
        self.max_word_length = max_word_length
        super().__init__(message or f"no tile found up to word length {max_word_length}")


class NoInteriorFixedPoint(ChamberfoldError):
    def __init__(self, message, boundary_solutions=()):
        super().__init__(message)
        self.boundary_solutions = tuple(boundary_solutions)


class NonCocompactWarning(UserWarning):
    """A hyperbolic Gram matrix describes a group that is not cocompact."""
