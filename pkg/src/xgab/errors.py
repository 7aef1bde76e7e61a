"""Exception types shared across the package."""


class XgabError(Exception):
    """Base class for all package errors."""


class ParameterError(XgabError, ValueError):
    """A parameter set violates its validity constraints."""


class NotSystematic(XgabError):
    """The leading K x K block of a generator matrix is singular."""


class DecodeFailure(XgabError):
    """No error of the requested rank weight explains the syndrome."""


class DecryptFailure(XgabError):
    """Ciphertext could not be decrypted to a consistent plaintext."""


class FormatError(XgabError):
    """A serialized blob has a bad magic, version, tag, length or header."""
