"""Exception types shared across the package."""


class SeriesNotFound(KeyError):
    """Requested id is not a row of the catalog."""

    def __str__(self) -> str:
        return f"series not in catalog: {self.args[0]!r}"


class SingularRecursion(ZeroDivisionError):
    """The coefficient recursion divides by ``1 - t``, which vanishes for t = 1."""


class PrecisionError(ArithmeticError):
    """Working precision cannot resolve the requested quantity."""


class ResourceError(RuntimeError):
    """A summation would exceed its configured term cap."""
