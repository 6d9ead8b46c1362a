"""
Exceptions - Error hierarchy for configuration, math domain and oracle limits
"""


class GroupschedError(Exception):
    """Base error for the scheduler package"""


class ConfigError(GroupschedError):
    """Invalid configuration value or flag combination"""

    def __init__(self, message: str, field: str = None):
        super().__init__(message)
        self.field = field


class DomainError(GroupschedError, ValueError):
    """Mathematical precondition violated"""


class OracleSizeError(GroupschedError):
    """Instance too large for exhaustive enumeration"""
