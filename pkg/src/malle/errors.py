"""Exception types shared across the package.

The CLI maps these onto exit codes: ValidationError -> 3,
ResourceCapError -> 4, ResolutionError -> 2.
"""


class ValidationError(ValueError):
    """Input violates a documented precondition or invariant."""


class ResourceCapError(RuntimeError):
    """A configured cap (closure size, subgroup scan, modulus bound) was exceeded."""


class ResolutionError(KeyError):
    """A catalog name or file reference could not be resolved."""


class NoAbelianWitness(ValueError):
    """No nonidentity element commutes with all of its conjugates."""


class InternalDefect(AssertionError):
    """An internal consistency identity failed; indicates a bug, not bad input."""
