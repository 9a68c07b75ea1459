"""Exception hierarchy shared by the numerical modules and the harness."""


class ZakharovError(Exception):
    """Base class for all errors raised by zakharov_lab."""


class InvalidArgument(ZakharovError, ValueError):
    pass


class SingularZeroMode(ZakharovError, ValueError):
    """Negative-order multiplier applied to a field with nonzero mean."""


class ConstraintViolation(ZakharovError, ValueError):
    pass


class InconsistentState(ZakharovError, ValueError):
    """n_minus is not the complex conjugate of n_plus."""


class BlowUpDetected(ZakharovError, FloatingPointError):
    """Non-finite values appeared; ``partial`` holds the states recorded before."""

    def __init__(self, message, last_valid_time, partial=None):
        super().__init__(message)
        self.last_valid_time = last_valid_time
        self.partial = partial


class ConfigError(ZakharovError, ValueError):
    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key
