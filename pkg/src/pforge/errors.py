"""Shared exception types."""


class CapacityError(Exception):
    """A configured resource cap was exceeded (continued-fraction period,
    point-sampling retries, ...).  Retrying with a larger cap may succeed."""


class ContractError(Exception):
    """A documented precondition was violated by the caller."""
