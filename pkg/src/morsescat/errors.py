"""Exception hierarchy shared by all modules."""


class MorseError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(MorseError, ValueError):
    """Invalid user-supplied parameters."""


class NumericalError(MorseError, ArithmeticError):
    """A computation could not certify its result."""


class PoleError(NumericalError):
    """Argument sits on (or within tolerance of) a pole."""


class UnitarityPoleError(PoleError):
    """Depth parameter at a zero-energy resonance, d = n + 1/2."""


class ZeroScatteringLengthError(NumericalError):
    """Scattering length vanishes, so the effective range diverges."""


class KummerConvergenceError(NumericalError):
    """Kummer series could not be certified at the highest working precision."""


class RootRefinementError(NumericalError):
    """A bracketed sign change could not be localised."""


class FitInstabilityError(NumericalError):
    """The low-k ladder fit is inconsistent under ladder halving."""


class ScaleOverflowError(NumericalError):
    """A scaled quantity left its representable exponent range."""


class WindowExhaustedError(NumericalError):
    """A predicted bound state was not bracketed inside the search window."""


class MatchRegionError(NumericalError):
    """Asymptotic matching point lies outside the integration grid."""
