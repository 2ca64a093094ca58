"""Exception types raised across the package."""


class FlatlandError(ValueError):
    """Base class for every error raised by this package."""


# Projective substrate
class ZeroVector(FlatlandError):
    pass


class DimMismatch(FlatlandError):
    pass


class ProportionalInputs(FlatlandError):
    pass


class DegenerateConfig(FlatlandError):
    pass


class SingularHomography(FlatlandError):
    pass


# Polynomial machinery
class NonUniqueConic(FlatlandError):
    pass


class SharedComponent(FlatlandError):
    pass


class PreconditionFailed(FlatlandError):
    pass


class InconsistentEvaluator(FlatlandError):
    pass


class LineOnCurve(FlatlandError):
    pass


# Invariants
class DegenerateQuadruple(DegenerateConfig):
    pass


class UnsupportedN(FlatlandError):
    pass


class CenterOnPoint(FlatlandError):
    pass


class PointsNotOnConic(FlatlandError):
    pass


# Epipolar geometry
class RankDeficientCamera(FlatlandError):
    pass


class WrongRank(FlatlandError):
    pass


class InconsistentCenters(FlatlandError):
    pass


class NoCommonImage(FlatlandError):
    pass


class InconsistentPair(FlatlandError):
    """A pairwise epipolar constraint fails for views i, j at point k (0-based)."""

    def __init__(self, i, j, k, message=None):
        self.i, self.j, self.k = i, j, k
        super().__init__(message or f"views ({i}, {j}) disagree at point {k}")


# Loci
class NonGeneric(FlatlandError):
    """Input violates a genericity condition; `offending` lists what vanished."""

    def __init__(self, message, offending=()):
        self.offending = list(offending)
        super().__init__(message)


class BasePoint(FlatlandError):
    """Query point is a base point of a Cremona map; `ident` names which one."""

    def __init__(self, ident, message=None):
        self.ident = ident
        super().__init__(message or f"point is the base point {ident}")


class NotOnCurve(FlatlandError):
    pass


class RankAnomaly(FlatlandError):
    pass


class RouteMismatch(FlatlandError):
    pass


class GenericityFailure(FlatlandError):
    pass


class DimensionMismatch(FlatlandError):
    pass


class InsufficientSamples(FlatlandError):
    pass


class DegenerateConstruction(DegenerateConfig):
    pass


# CLI
class ParseError(FlatlandError):
    pass


class EmptyWindow(FlatlandError):
    pass
