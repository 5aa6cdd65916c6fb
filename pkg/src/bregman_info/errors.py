from bregman_info.constants import EXIT_INPUT_ERROR, EXIT_NUMERICAL_ERROR


class BregmanError(ValueError):
    exit_code = EXIT_INPUT_ERROR

    @property
    def kind(self) -> str:
        return type(self).__name__


class InputError(BregmanError):
    exit_code = EXIT_INPUT_ERROR


class NumericalError(BregmanError):
    exit_code = EXIT_NUMERICAL_ERROR


class NonSymmetric(InputError):
    pass


class NotPositiveDefinite(InputError):
    pass


class DomainViolation(InputError):
    pass


class InvalidJoint(InputError):
    pass


class SamplerDomainMismatch(InputError):
    pass


class StepLeavesDomain(InputError):
    pass


class HessianUnavailable(InputError):
    pass


class UnknownName(InputError):
    pass


class ConfigurationError(InputError):
    pass


class InvalidClusterCount(InputError):
    pass


class GradientAtBoundary(NumericalError):
    pass


class SecondArgumentNotInterior(NumericalError):
    pass


class SecondArgumentHasZero(NumericalError):
    pass


class CentroidNotInterior(NumericalError):
    pass


class RankDeficientProbes(NumericalError):
    pass


class EmptyCluster(NumericalError):
    pass


class CentroidOnBoundary(NumericalError):
    pass
