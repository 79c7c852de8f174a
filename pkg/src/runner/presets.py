"""
src/runner/presets.py - Shipped Run Configurations
"""

import logging
import shutil
from pathlib import Path
from typing import Dict, List, Union

from src.config.settings import PRESETS_DIR
from src.model.config_loader import parse_config_text
from src.model.errors import ConfigValidationError
from src.model.simulation_config import SimulationConfig

logger = logging.getLogger(__name__)


def list_presets() -> List[str]:
    return sorted(path.stem for path in PRESETS_DIR.glob("*.ini"))


def preset_path(name: str) -> Path:
    path = PRESETS_DIR / f"{name}.ini"
    if not path.is_file():
        raise ConfigValidationError(f"unknown preset {name!r}; available: {list_presets()}", key="preset")
    return path


def preset_text(name: str) -> str:
    return preset_path(name).read_text(encoding="utf-8")


def load_preset(name: str) -> SimulationConfig:
    path = preset_path(name)
    return parse_config_text(path.read_text(encoding="utf-8"), source=str(path))


def export_presets(out_dir: Union[str, Path]) -> Dict[str, Path]:
    """Copy every preset into out_dir; returns name -> written path"""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = {}
    for name in list_presets():
        target = out_dir / f"{name}.ini"
        shutil.copyfile(preset_path(name), target)
        written[name] = target
    logger.info(f"[CLI] Exported {len(written)} presets to {out_dir}")
    return written
