"""Exception hierarchy shared by all spheretc modules."""


class SphereTCError(Exception):
    """Base class for all domain errors raised by this package."""


# --- action construction -------------------------------------------------

class NonPrime(SphereTCError):
    """Group order must be a prime number."""


class WeightOutOfRange(SphereTCError):
    """Rotation weights must satisfy 1 <= q <= p-1."""


class SignBlockWithOddP(SphereTCError):
    """Sign (-1) summands only exist for p = 2."""


class AmbientTooSmall(SphereTCError):
    """The ambient dimension must be at least 2 (a sphere S^n with n >= 1)."""


class NotOnSphere(SphereTCError):
    """Coordinates are too far from the unit sphere to normalize."""


class DimensionMismatch(SphereTCError):
    """Point dimension does not match the action's ambient dimension."""


# --- planners -------------------------------------------------------------

class AntipodalPair(SphereTCError):
    """No unique shortest geodesic between antipodal points."""


class ParityMismatch(SphereTCError):
    """Construction requires odd sphere and odd fixed-sphere dimensions."""


class NoFixedPoint(SphereTCError):
    """Construction requires a non-empty fixed-point set (k >= 1)."""


class NoFixedCircle(SphereTCError):
    """Construction requires two orthonormal fixed directions (k >= 1)."""


class OutsideCollar(SphereTCError):
    """Point lies outside the collared hemisphere of the homotopy."""


# --- vector fields --------------------------------------------------------

class NotAFixedPoint(SphereTCError):
    """The base point of a projection field must be fixed by the action."""


# --- Euler characteristics ------------------------------------------------

class NonIntegralQuotient(SphereTCError):
    """Orbit-space Euler characteristic is not an integer: impossible action data."""


# --- topological complexity oracle ----------------------------------------

class EmptyFixedSet(SphereTCError):
    """Query requires a non-empty fixed-point set (k >= 0)."""


class InvalidQuery(SphereTCError):
    """Sphere query violates dimension or parity realizability constraints."""


class InconsistentFacts(SphereTCError):
    """Bound propagation produced an empty interval: the seed facts contradict."""
