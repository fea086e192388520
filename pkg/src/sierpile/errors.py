"""Error types and the level capacity knob shared by all modules."""

import os


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class CapacityError(DomainError):
    """Requested level exceeds the configured maximum."""


class ContractViolation(DomainError):
    """A precondition on the input objects does not hold (e.g. non-recurrent config)."""


DEFAULT_MAX_LEVEL = 12


def max_level(default=DEFAULT_MAX_LEVEL):
    """Capacity limit; the SIERPILE_MAX_LEVEL environment variable overrides `default`."""
    env = os.environ.get("SIERPILE_MAX_LEVEL")
    if env:
        try:
            return int(env)
        except ValueError:
            raise DomainError(f"SIERPILE_MAX_LEVEL must be an integer, got {env!r}")
    return default


def check_level(n, default=DEFAULT_MAX_LEVEL, what="level"):
    if not isinstance(n, int) or n < 0:
        raise DomainError(f"{what} must be a nonnegative integer, got {n!r}")
    cap = max_level(default)
    if n > cap:
        raise CapacityError(f"{what} {n} exceeds the configured maximum {cap} "
                            "(set SIERPILE_MAX_LEVEL to raise it)")
    return n
