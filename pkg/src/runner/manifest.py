"""
src/runner/manifest.py - Run Manifest
manifest.json next to the snapshots: resolved config echo, artifact
version, timing, step count and a checksum for every output file.
"""

import json
import logging
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Union

from src.config.settings import ARTIFACT_NAME, ARTIFACT_VERSION
from src.utils.uuid_generator import generate_checksum, text_checksum

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


@dataclass
class RunManifest:
    run_id: str
    command: str
    tier: str
    config_text: str
    steps: int = 0
    wall_clock_seconds: float = 0.0
    mu_consistent: bool = True
    grid: Dict[str, float] = field(default_factory=dict)
    files: List[Dict[str, str]] = field(default_factory=list)
    extra: Dict[str, object] = field(default_factory=dict)
    artifact: str = ARTIFACT_NAME
    artifact_version: str = ARTIFACT_VERSION
    created_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    @property
    def config_sha256(self) -> str:
        return text_checksum(self.config_text)

    def add_file(self, out_dir: Path, path: Path) -> None:
        self.files.append({
            "name": str(path.relative_to(out_dir)).replace("\\", "/"),
            "sha256": generate_checksum(str(path)),
        })

    def to_dict(self) -> Dict[str, object]:
        data = asdict(self)
        data["config_sha256"] = self.config_sha256
        return data

    def write(self, out_dir: Union[str, Path]) -> Path:
        path = Path(out_dir) / MANIFEST_NAME
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)
            f.write("\n")
        logger.info(f"[CLI] Manifest written: {path} ({len(self.files)} files)")
        return path


def read_manifest(out_dir: Union[str, Path]) -> Dict[str, object]:
    with open(Path(out_dir) / MANIFEST_NAME, encoding="utf-8") as f:
        return json.load(f)
