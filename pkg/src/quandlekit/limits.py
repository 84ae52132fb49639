"""Order caps for expensive operations, overridable via the environment."""

from __future__ import annotations

import os

from .errors import ParamOutOfRange

ENV_MAX_ORDER = "QUANDLEKIT_MAX_ORDER"

DEFAULT_SEARCH_CAP = 32
DEFAULT_ENUM_CAP = 128
DEFAULT_TABLE_CAP = 2048


def resolve_cap(explicit: int | None, default: int, *, env: bool = True) -> int:
    """Pick the cap: explicit argument, else QUANDLEKIT_MAX_ORDER, else default."""
    if explicit is not None:
        if explicit < 1:
            raise ParamOutOfRange(f"cap must be positive, got {explicit}")
        return explicit
    if env:
        raw = os.environ.get(ENV_MAX_ORDER)
        if raw is not None and raw.strip():
            try:
                value = int(raw)
            except ValueError:
                raise ParamOutOfRange(
                    f"{ENV_MAX_ORDER} must be an integer, got {raw!r}"
                ) from None
            if value < 1:
                raise ParamOutOfRange(f"{ENV_MAX_ORDER} must be positive, got {value}")
            return value
    return default
