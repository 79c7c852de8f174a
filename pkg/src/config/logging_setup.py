"""
src/config/logging_setup.py - Logging Configuration
One place that wires the log file and console handlers for the CLI
"""

import logging
import os
from typing import Optional

from src.config.settings import LOG_FILE, LOG_FORMAT, LOG_LEVEL, LOGS_DIR

_configured = False


def setup_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    """
    Configure root logging once per process.

    Args:
        level: Level name, defaults to EITBEC_LOG_LEVEL
        log_file: Log file path, defaults to logs/eitbec.log
    """
    global _configured
    if _configured:
        return

    log_path = log_file or str(LOG_FILE)
    os.makedirs(os.path.dirname(log_path) or str(LOGS_DIR), exist_ok=True)

    # messages may carry Greek symbols
    logging.basicConfig(
        level=getattr(logging, (level or LOG_LEVEL).upper(), logging.INFO),
        format=LOG_FORMAT,
        handlers=[
            logging.FileHandler(log_path, encoding="utf-8"),
            logging.StreamHandler(),
        ],
    )
    _configured = True
    logging.getLogger(__name__).debug(f"[SETTINGS] Logging configured at {log_path}")
