"""
src/utils/uuid_generator.py - Run Identification
Run ids and SHA-256 checksums of output files
"""

import hashlib
import logging
import uuid
from datetime import datetime, timezone

logger = logging.getLogger(__name__)


def generate_run_id() -> str:
    """Timestamp plus a short UUID v4 suffix, sortable by creation time"""
    stamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%S")
    run_id = f"{stamp}-{str(uuid.uuid4())[:8]}"
    logger.debug(f"[UUID] Generated run ID: {run_id}")
    return run_id


def generate_checksum(file_path: str) -> str:
    """SHA-256 of a file, read in 4 KiB blocks"""
    sha256_hash = hashlib.sha256()
    with open(file_path, "rb") as f:
        for byte_block in iter(lambda: f.read(4096), b""):
            sha256_hash.update(byte_block)
    checksum = sha256_hash.hexdigest()
    logger.debug(f"[UUID] Checksum for {file_path}: {checksum}")
    return checksum


def text_checksum(text: str) -> str:
    """SHA-256 of a UTF-8 string (config echo fingerprint)"""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
