"""Exception hierarchy shared across the package.

Every error carries a stable ``kind`` string, used by the CLI to emit
machine-readable error JSON.
"""


class EpireconError(Exception):
    """Base class for all domain errors raised by this package."""

    @property
    def kind(self) -> str:
        return type(self).__name__


# integration
class DimensionMismatch(EpireconError):
    pass


class StepCountOverflow(EpireconError):
    pass


class InvariantViolation(EpireconError):
    pass


# model catalog
class ThetaOutOfBox(EpireconError):
    pass


class SigmaDegenerate(EpireconError):
    pass


class OutputNearZero(EpireconError):
    pass


# derivative chains
class OrderUnsupported(EpireconError):
    pass


class TooFewSamples(EpireconError):
    pass


# linear reconstruction
class SingularEverywhere(EpireconError):
    pass


class NumericallySingular(EpireconError):
    pass


class WronskianVanishes(EpireconError):
    pass


# discrimination
class DegenerateWindow(EpireconError):
    pass


class BoundViolated(EpireconError):
    pass


# calibration
class IntegrationFailure(EpireconError):
    pass


class InfeasibleInitialInfected(EpireconError):
    pass


class AllStartsFailed(EpireconError):
    pass


# CLI
class MethodNeedsDerivatives(EpireconError):
    pass


class BadArgs(EpireconError):
    pass
