"""Exception types shared across the simulation library and CLI."""


class QBatteryError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(QBatteryError):
    pass


class NonHermitianInput(QBatteryError):
    pass


class SiteOutOfRange(QBatteryError):
    pass


class NonPositiveTemperature(QBatteryError):
    pass


class NonUnitaryOperator(QBatteryError):
    pass


class UnknownParameter(QBatteryError):
    pass


class NumericalBlowup(QBatteryError):
    pass


class NonPositivePeak(QBatteryError):
    pass


class SingularJacobian(QBatteryError):
    pass


class NoConvergence(QBatteryError):
    pass


class ConfigError(QBatteryError):
    """Base for configuration problems; maps to exit code 2."""


class ConfigSyntax(ConfigError):
    def __init__(self, line_no, message):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class ConfigValidation(ConfigError):
    def __init__(self, key, reason):
        super().__init__(f"{key}: {reason}")
        self.key = key
        self.reason = reason


class UnknownFigure(ConfigError):
    pass
