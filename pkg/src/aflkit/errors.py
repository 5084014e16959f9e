"""Exception types shared across the package."""


class AflkitError(Exception):
    """Base class for every error raised by this package."""


class PrecisionExhausted(AflkitError):
    """An answer could not be certified at the working p-adic precision."""


class SingularInput(AflkitError, ValueError):
    pass


class NotRegularSemisimple(AflkitError, ValueError):
    pass


class BoxUnstable(AflkitError):
    """Lattice enumeration changed when the box was enlarged by one."""


class DomainError(AflkitError, ValueError):
    pass


class OnDivisor(DomainError):
    """The Green function was evaluated on its singular divisor."""


class QuadratureNonconvergent(AflkitError):
    pass


class SeriesNonconvergent(AflkitError):
    pass


class WindowOverflow(AflkitError):
    """A Schwartz function would need a window larger than the configured cap."""


class MissingPlaceData(AflkitError, KeyError):
    pass


class IncoherenceViolated(AflkitError, ValueError):
    pass


class ParityError(AflkitError, ValueError):
    pass
