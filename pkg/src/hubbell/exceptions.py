"""Exception and warning types shared across the package."""


class HubbellError(Exception):
    """Base class for errors raised by this package."""


class DomainError(HubbellError, ValueError):
    """An argument lies outside the region where a method is defined."""


class InvalidParams(HubbellError, ValueError):
    """A parameter tuple violates a stated constraint.

    The message always names the failing constraint, e.g. ``"p > 0"``.
    """


class UnsupportedFormat(HubbellError, ValueError):
    """A report format other than csv, json or text was requested."""


class NotConvergedWarning(RuntimeWarning):
    """A series or quadrature hit its budget before meeting its tolerance.

    The offending result is still returned, with ``converged=False``.
    """
