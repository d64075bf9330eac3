"""Size guards protecting the exhaustive routines."""
import os

from .errors import SizeGuardExceeded

MORPHISM_LIMIT = 64
CARRIER_LIMIT = 10_000
ENUMERATION_LIMIT = 2_000_000

GUARD_ENV = "XI_LAB_GUARD"


def carrier_limit() -> int:
    raw = os.environ.get(GUARD_ENV)
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise SizeGuardExceeded(f"{GUARD_ENV} must be a positive integer, got {raw!r}")
        if value <= 0:
            raise SizeGuardExceeded(f"{GUARD_ENV} must be a positive integer, got {raw!r}")
        return value
    return CARRIER_LIMIT


def check(count: int, limit: int, what: str) -> None:
    if count > limit:
        raise SizeGuardExceeded(f"{what}: {count} exceeds the limit {limit}")
