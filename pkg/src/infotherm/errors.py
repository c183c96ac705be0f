"""Exception hierarchy shared by all modules."""


class InfoThermError(Exception):
    """Base class for every error raised by this package."""


class InvalidState(InfoThermError, ValueError):
    pass


class DimensionError(InfoThermError, ValueError):
    pass


class InvalidMixture(InfoThermError, ValueError):
    pass


class InvalidDistribution(InfoThermError, ValueError):
    pass


class CapacityError(InfoThermError, ValueError):
    pass


class InvalidOperator(InfoThermError, ValueError):
    pass


class Unsupported(InfoThermError, ValueError):
    pass


class InvalidConfig(InfoThermError, ValueError):
    pass


class InvalidInput(InfoThermError, ValueError):
    pass


class InvalidReport(InfoThermError, ValueError):
    pass


class ConfigError(InfoThermError, ValueError):
    """Scenario configuration problem; ``path`` names the offending key."""

    def __init__(self, message: str, path: str | None = None):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
