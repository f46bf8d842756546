"""Exception hierarchy shared by every module of the package."""


class HarmonyError(Exception):
    """Base class for all errors raised by this package."""


# linear algebra
class NonConvergence(HarmonyError, ArithmeticError):
    pass


class NotHermitian(HarmonyError, ValueError):
    pass


class NotPSD(HarmonyError, ValueError):
    pass


class DimensionOverflow(HarmonyError, ValueError):
    pass


# states
class InvalidState(HarmonyError, ValueError):
    """A matrix or vector failed density-matrix / pure-state validation."""


class InvalidDistribution(HarmonyError, ValueError):
    pass


class InvalidRank(HarmonyError, ValueError):
    pass


class InvalidSubset(HarmonyError, ValueError):
    pass


class OutOfRange(HarmonyError, ValueError):
    pass


# measures
class ImaginaryResidue(HarmonyError, ArithmeticError):
    pass


class SpectrumViolation(HarmonyError, ArithmeticError):
    """Eigenvalues of rho * rho_tilde left the nonnegative real axis beyond tolerance."""


class InvalidSpectrum(HarmonyError, ValueError):
    pass


class RouteMismatch(HarmonyError, ArithmeticError):
    """Two algebraically equal evaluations disagreed beyond tolerance."""


# monogamy / verify
class NotPure(HarmonyError, ValueError):
    pass


class ConfigError(HarmonyError, ValueError):
    pass
