"""Exception types shared across the package."""


class DomainError(ValueError):
    """Mathematically invalid input: bad rank, malformed modulus, invalid
    core specification, or a tuple that violates a required precondition."""


class CapacityError(RuntimeError):
    """A configured resource cap was exceeded (rank cap, table size cap,
    coset limit, or the large-scan gate)."""
