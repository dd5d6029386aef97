# backend/exceptions.py


class CanonixError(Exception):
    """Base class for every error raised by the classifier."""


class FieldError(CanonixError, ValueError):
    pass


class FieldMismatchError(FieldError):
    """Operands live over different fields, or an embedding is impossible."""


class ExtensionCapError(CanonixError):
    """A required root would push the total extension degree past the cap."""


class CharacteristicMismatchError(CanonixError, ValueError):
    pass


class MalformedInputError(CanonixError, ValueError):
    pass


class PreconditionError(CanonixError, ValueError):
    pass


class PolicyBoundError(CanonixError):
    """The field is too large for brute-force enumeration."""


class CanonicalizationError(CanonixError, RuntimeError):
    """An internal consistency check failed."""
