"""Exception hierarchy shared across the package.

Every error raised by the library derives from :class:`RelayCapError`, so
callers (notably the CLI) can map failures onto exit codes without matching
on stdlib exception types.
"""


class RelayCapError(Exception):
    """Base class for all errors raised by this package."""


class ParameterDomainError(RelayCapError, ValueError):
    """A numeric input lies outside its physical domain (negative gain,
    non-positive noise, distance of zero, correlation outside [-1, 1], ...)."""


class UsageError(RelayCapError, ValueError):
    """API misuse: unknown labels, overlapping label sets, bad arguments."""


class DegenerateConditioningError(RelayCapError, ArithmeticError):
    """Conditioning on a (numerically) singular block whose null directions
    still carry cross-covariance: the conditional covariance is not
    determined by the data."""


class InfeasibleRelayError(RelayCapError, ValueError):
    """A two-hop allocation was requested through a hop with zero gain."""


class DegenerateSourceError(RelayCapError, ValueError):
    """The source transmit power is zero where a positive power is required."""


class PowerLimitError(RelayCapError, ValueError):
    """An amplification factor exceeds the relay's power constraint."""


class ConfigParseError(RelayCapError, ValueError):
    """A configuration document could not be parsed; carries key/line info."""

    def __init__(self, message: str, *, key: str | None = None,
                 line: int | None = None):
        self.key = key
        self.line = line
        prefix = ""
        if line is not None:
            prefix += f"line {line}: "
        if key is not None:
            prefix += f"{key}: "
        super().__init__(prefix + message)
