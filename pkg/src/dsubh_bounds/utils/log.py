from __future__ import annotations

import logging
import sys

_FORMAT = "[%(asctime)s] %(levelname)s %(name)s: %(message)s"
_DATEFMT = "%H:%M:%S"


def configure_logging(level: str = "INFO") -> None:
    """
    Installs one stderr handler on the package logger.

    Behavior:
    - Idempotent: calling twice replaces the handler instead of stacking them.
    - Unknown level names fall back to INFO.
    """
    root = logging.getLogger("dsubh_bounds")
    for handler in list(root.handlers):
        root.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(_FORMAT, datefmt=_DATEFMT))
    root.addHandler(handler)
    root.setLevel(getattr(logging, str(level).upper(), logging.INFO))
    root.propagate = False
