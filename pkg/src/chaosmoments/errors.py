"""Exception hierarchy shared by every module of the package."""


class ChaosError(Exception):
    """Base class for all package errors."""


class InvalidInputError(ChaosError, ValueError):
    """Malformed arguments: wrong order, bad tag, non-centered data..."""


class CapacityError(InvalidInputError):
    """A combinatorial enumeration was requested above its configured cap."""

    def __init__(self, n, cap, what="partitions"):
        self.n = n
        self.cap = cap
        super().__init__(
            f"enumeration of {what} of size n={n} exceeds the cap {cap}; "
            f"raise the cap explicitly to proceed"
        )


class PreconditionError(InvalidInputError):
    """A mathematical hypothesis required by a criterion does not hold."""


class UnsupportedKindError(InvalidInputError):
    """The operation is not defined for the requested chaos kind."""
