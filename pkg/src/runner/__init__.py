"""Runner Package - Command Line, Presets, Snapshot Files and Manifests"""
from .manifest import RunManifest, read_manifest
from .presets import export_presets, list_presets, load_preset
from .snapshot_io import SnapshotFormatError, read_snapshot, write_snapshot
from .tasks import TierDispatcher

__all__ = [
    "RunManifest",
    "read_manifest",
    "list_presets",
    "load_preset",
    "export_presets",
    "SnapshotFormatError",
    "read_snapshot",
    "write_snapshot",
    "TierDispatcher",
]
