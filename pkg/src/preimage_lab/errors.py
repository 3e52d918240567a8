"""Exception hierarchy shared by every module."""


class PreimageLabError(Exception):
    pass


class DomainError(PreimageLabError, ValueError):
    """An argument lies outside the operation's domain."""


class UndefinedInputError(DomainError):
    """The requested quantity is undefined for this input (e.g. v_p(0))."""


class UnsupportedInputError(PreimageLabError):
    """Input is valid but beyond what the desk-scale algorithms handle.

    Raised instead of returning a possibly wrong answer, e.g. when a norm
    has a prime factor above the trial-division bound.
    """


class ClassificationError(PreimageLabError):
    """A descent invariant that should hold for points of C_D was violated."""
