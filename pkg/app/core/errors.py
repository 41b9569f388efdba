"""
Exception hierarchy for the engine.

Everything raised on purpose derives from EngineError. The CLI maps
InputError to exit code 2 and PreconditionError to exit code 3.
"""


class EngineError(ValueError):
    """Base class for all engine errors."""


class InputError(EngineError):
    """Malformed input: bad JSON, unparsable polynomial, unknown ring label."""


class PreconditionError(EngineError):
    """An operation was called outside its domain."""


class RingMismatchError(PreconditionError):
    pass


class InvalidComplexError(PreconditionError):
    pass


class InvalidChainMapError(PreconditionError):
    pass


class NonConnectiveError(PreconditionError):
    pass


class NonStrictStubError(PreconditionError):
    pass


class UnsupportedPresentationError(PreconditionError):
    pass


class CutoffError(PreconditionError):
    pass
