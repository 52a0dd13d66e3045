"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class SJCMError(Exception):
    exit_code = 1


class ConfigError(SJCMError):
    exit_code = 2


class BadDescriptor(ConfigError):
    pass


class DimMismatch(SJCMError):
    exit_code = 2


class PhysicsDomainError(SJCMError):
    exit_code = 3


class InvalidParams(PhysicsDomainError, ValueError):
    pass


class SuperradiantPhase(PhysicsDomainError):
    pass


class UnboundedSpectrum(PhysicsDomainError):
    pass


class NonHermitian(PhysicsDomainError):
    pass


class DegenerateDenominator(PhysicsDomainError):
    pass


class NoRootInRange(PhysicsDomainError):
    pass


class InsufficientPoints(PhysicsDomainError):
    pass


class ConvergenceError(SJCMError):
    exit_code = 4


class CutoffTooSmall(ConvergenceError):
    pass


class StepUnderflow(ConvergenceError):
    pass


class SeriesNotConverged(ConvergenceError):
    pass


class InvariantFailure(SJCMError):
    exit_code = 5
