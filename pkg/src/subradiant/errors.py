"""Exception hierarchy.

Every error raised on purpose by the library derives from `SubradiantError`
so the CLI can map compute failures to a single exit code.
"""


class SubradiantError(Exception):
    """Base class for library errors."""


class ConfigInvalid(SubradiantError):
    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


# geometry
class PeriodTooSmall(SubradiantError):
    pass


class InvalidSize(SubradiantError):
    pass


class NotAGrid(SubradiantError):
    pass


# green / spectrum
class ZeroDisplacement(SubradiantError):
    pass


class EigenSolverFailure(SubradiantError):
    pass


class IndexOutOfRange(SubradiantError):
    pass


class InvalidPair(SubradiantError):
    pass


class UnresolvedIrrep(SubradiantError):
    pass


# lattice sums
class AnomalyProximity(SubradiantError):
    def __init__(self, distance, margin):
        self.distance = distance
        self.margin = margin
        super().__init__(f"Bloch vector within {distance:.3e} of a diffraction threshold (margin {margin:.3e})")


class TruncationNotConverged(SubradiantError):
    pass


class ExtrapolationUnstable(SubradiantError):
    pass


# scattering
class QuadratureNotConverged(SubradiantError):
    pass


class SolveFailure(SubradiantError):
    pass


class DefectiveBasis(SubradiantError):
    pass


# analysis
class TrackingLost(SubradiantError):
    def __init__(self, parameter, overlap):
        self.parameter = parameter
        self.overlap = overlap
        super().__init__(f"tracking overlap {overlap:.3f} at parameter {parameter:.6g}")


class NoInteriorMinimum(SubradiantError):
    def __init__(self, period, decay):
        self.period = period
        self.decay = decay
        super().__init__(f"minimum on the range boundary at period {period:.4f} (decay {decay:.3e})")
