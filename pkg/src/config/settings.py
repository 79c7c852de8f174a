"""
src/config/settings.py - Environment Configuration
Process-level settings of the simulator, read from environment variables
"""

import os
from pathlib import Path

# ===== PATHS =====
BASE_DIR = Path(__file__).resolve().parent.parent.parent
SRC_DIR = BASE_DIR / "src"
LOGS_DIR = Path(os.getenv("EITBEC_LOGS_DIR", BASE_DIR / "logs"))
OUTPUT_DIR = Path(os.getenv("EITBEC_OUTPUT_DIR", BASE_DIR / "runs"))
PRESETS_DIR = SRC_DIR / "runner" / "presets"

# ===== ARTIFACT SETTINGS =====
ARTIFACT_NAME = "eitbec"
ARTIFACT_VERSION = "1.0.0"
SNAPSHOT_MAGIC = b"EITBEC1\n"
SNAPSHOT_HEADER_SIZE = 64
SNAPSHOT_DTYPE = "<c8"  # little-endian complex64, (re, im) float32 pairs

# ===== NUMERICS SETTINGS =====
FFT_WORKERS = int(os.getenv("EITBEC_FFT_WORKERS", 1))
QUAD_RTOL = float(os.getenv("EITBEC_QUAD_RTOL", 1e-10))
QUAD_LIMIT = int(os.getenv("EITBEC_QUAD_LIMIT", 400))
STOP_THRESHOLD = float(os.getenv("EITBEC_STOP_THRESHOLD", 1e-6))  # G / (g|alpha|)
EDGE_TOLERANCE = float(os.getenv("EITBEC_EDGE_TOLERANCE", 1e-6))
EDGE_BAND_FRACTION = 0.05  # outer band on each side of the grid

# ===== STABILITY BOUNDS =====
FULL_TIER_RATE_BOUND = 0.1  # dt * fastest coupling rate
GPE_NONLINEAR_BOUND = 0.1  # |2 u2 |alpha|^2 dt|
REDUCED_TIER_RK4_BOUND = 2.8  # RK4 stability radius on the imaginary axis
PHASE_PER_SNAPSHOT_BOUND = 3.141592653589793
MIN_POINTS_PER_WIDTH = 4
MIN_WIDTHS_TO_BOUNDARY = 5

# ===== DIAGNOSTICS SETTINGS =====
KURTOSIS_TOLERANCE = 0.03
EXPANSION_FIT_RESIDUAL = 0.01
MIN_FIT_SNAPSHOTS = 5

# ===== SCAN SETTINGS =====
SCAN_WORKERS = int(os.getenv("EITBEC_SCAN_WORKERS", 4))

# ===== LOGGING SETTINGS =====
LOG_LEVEL = os.getenv("EITBEC_LOG_LEVEL", "INFO")
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_FILE = LOGS_DIR / "eitbec.log"
