"""Exception hierarchy shared by all modules."""


class ToricError(Exception):
    """Base class for every error raised by :mod:`toricb`."""


class ZeroVector(ToricError, ValueError):
    pass


class NotInSpan(ToricError, ValueError):
    pass


class DependentGenerators(ToricError, ValueError):
    pass


class NotInSupport(ToricError, ValueError):
    pass


class RayAlreadyPresent(ToricError, ValueError):
    pass


class NotPrimitive(ToricError, ValueError):
    pass


class NotExceptional(ToricError, ValueError):
    pass


class InvalidFan(ToricError, ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(f"{v.kind}: {v.detail}" for v in self.violations))


class InvalidCoefficient(ToricError, ValueError):
    pass


class InvalidBrauerClass(ToricError, ValueError):
    pass


class InvalidCTriple(ToricError, ValueError):
    pass


class CompositeModulus(ToricError, ValueError):
    pass


class NotQGorenstein(ToricError):
    """K_X + D_X fails to be Q-Cartier on ``cone`` (a tuple of rays)."""

    def __init__(self, cone, message=None):
        self.cone = tuple(tuple(r) for r in cone)
        super().__init__(message or f"boundary is not Q-Cartier on cone {list(map(list, self.cone))}")


class VerificationFailed(ToricError, AssertionError):
    """Internal consistency trap; never expected on correct code."""


class InvalidCone(ToricError, ValueError):
    pass
