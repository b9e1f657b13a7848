"""Exception types shared across the package."""


class NumericalFailureError(RuntimeError):
    """A field or intermediate quantity became NaN/Inf."""


class DomainError(ValueError):
    """A closed-form formula was evaluated outside its validity region.

    The message names the offending bracket or precondition so that sweeps
    can report why a value is unavailable instead of propagating NaN.
    """


class FitError(RuntimeError):
    """A least-squares fit could not be performed or is meaningless."""


class ConfigError(ValueError):
    """An experiment configuration is invalid."""


class SupportWarning(UserWarning):
    """Input field is not negligible near the domain boundary."""
