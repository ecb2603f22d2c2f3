"""Exception hierarchy shared across the toolkit."""


class AutomataError(Exception):
    """Base class for every error raised by this package."""


class InputError(AutomataError, ValueError):
    """Invalid argument: unknown symbol, alphabet mismatch, bad bound."""


class FormatError(InputError):
    """A machine or word file could not be parsed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PreconditionError(AutomataError):
    """An operation was called on a structure that still has a defect."""

    def __init__(self, message, defect=None):
        self.defect = defect
        super().__init__(message)


class LearningError(AutomataError):
    """A learner could not finish (bad given words, round cap, ...)."""


class InvariantViolation(LearningError):
    """A property guaranteed by the theory failed at runtime."""


class BoundViolated(InputError):
    """A hypothesis or machine exceeds the promised state/dimension bound."""


class OracleError(AutomataError):
    """Base class for membership oracle failures."""


class SetupError(OracleError):
    """Handshake with a black-box oracle failed."""


class TransportError(OracleError):
    """Malformed reply, timeout or disconnect during a query."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"{message}: {line!r}"
        super().__init__(message)
