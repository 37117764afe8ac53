"""Resource caps. Defaults can be overridden through environment variables."""
from __future__ import annotations

import os

DEFAULT_MAX_STATES = 10**7
DEFAULT_MAX_CONFIGS = 10**7


def max_states() -> int:
    return int(os.environ.get("ICEGT_MAX_STATES", DEFAULT_MAX_STATES))


def max_configs() -> int:
    return int(os.environ.get("ICEGT_MAX_CONFIGS", DEFAULT_MAX_CONFIGS))
