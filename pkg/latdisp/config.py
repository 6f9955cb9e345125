"""
latdisp configuration.

Settings are plain module constants. The few that can be tuned from the
environment are read once at import time.
"""

import logging
import os
from pathlib import Path

logger = logging.getLogger(__name__)

PACKAGE_DIR = Path(__file__).resolve().parent

# Certified comparison
INTERVAL_START_BITS = 64
INTERVAL_MAX_BITS = 4096

# Box walk
NORMAL_FORM_STEP_CAP = 10**6

# Oracle caps
ORACLE_POINT_CAP = 500
PERIODIC_ORACLE_MAX_N = 200

# Parser limits on text input
PARSE_MAX_EXPONENT = 64
PARSE_MAX_POWER_BITS = 1 << 16
PARSE_MAX_RADICAND_BITS = 64

DEFAULT_DIGITS = 5


def _env_int(name: str, default: int, minimum: int = 1) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning("ignoring %s=%r: not an integer, using %d", name, raw, default)
        return default
    if value < minimum:
        logger.warning("ignoring %s=%d: below %d, using %d", name, value, minimum, default)
        return default
    return value


THREADS = _env_int("LATDISP_THREADS", os.cpu_count() or 1)
LOG_LEVEL = os.environ.get("LATDISP_LOG_LEVEL", "WARNING").upper()
DATA_DIR = Path(os.environ.get("LATDISP_DATA_DIR", PACKAGE_DIR / "data"))


def configure_logging(level: str | None = None) -> None:
    """Attach one stream handler to the package logger (idempotent)."""
    root = logging.getLogger("latdisp")
    name = (level or LOG_LEVEL).upper()
    resolved = logging.getLevelName(name)
    if not isinstance(resolved, int):
        logger.warning("unknown log level %r, using WARNING", name)
        resolved = logging.WARNING
    root.setLevel(resolved)
    if not any(getattr(h, "_latdisp", False) for h in root.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
        handler._latdisp = True
        root.addHandler(handler)
