"""
Exception hierarchy for the symbolic kernel.
"""


class KernelError(Exception):
    """Base class for every error raised by the kernel."""


class InvalidKernel(KernelError, ValueError):
    """A scalar or kernel object was constructed from invalid data (e.g. a zero denominator)."""


class InvalidAlgebra(KernelError, ValueError):
    """Unknown algebra code or a rank below the supported minimum."""


class IndexOutOfRange(KernelError, ValueError):
    """An index is not in the index set of the algebra."""


class WindowOverflow(KernelError, ValueError):
    """A generator mode lies outside the active trust box."""


class Inconclusive(KernelError):
    """The computation cannot certify an answer inside the trust box."""


class InternalInconsistency(KernelError):
    """Two independent routes to the same quantity disagree."""
