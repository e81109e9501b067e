"""
Module: otfs_bench.constants

Global constants for the OTFS channel-estimation bench.
Centralizes UI text, file names, numerical defaults and message templates.
"""

# Application info
APP_NAME = "OTFS Bench"
APP_VERSION = "0.1.0"

# File names
RESULTS_FILE_NAME = "results.csv"
META_FILE_NAME = "meta.json"
CHANNEL_DUMP_DIR = "channels"
SENSING_DUMP_FILE = "sensing.bin"
DEFAULT_OUTPUT_DIR = "out"

# Environment variables
ENV_SENTRY_DSN = "OTFS_BENCH_SENTRY_DSN"
ENV_SENTRY_ENV = "OTFS_BENCH_ENV"

# Estimator ids
ESTIMATOR_IMPULSE = "impulse"
ESTIMATOR_OMP = "omp"
ESTIMATOR_SOMP3D = "somp3d"

# Sweep axes
AXIS_ETA = "eta"
AXIS_NT = "nt"
AXIS_SNR = "snr"
AXIS_EPSILON = "epsilon"
AXIS_SPEED = "speed"
SWEEP_AXES = (AXIS_ETA, AXIS_NT, AXIS_SNR, AXIS_EPSILON, AXIS_SPEED)

# Pilot guard fill
GUARD_ZERO = "zero"
GUARD_CYCLIC = "cyclic"
GUARD_MODES = (GUARD_ZERO, GUARD_CYCLIC)

# Result flags
FLAG_REGULARIZED = "regularized"
FLAG_SUPPORT_OVERFLOW = "support_overflow"
FLAG_INSUFFICIENT_GUARD = "insufficient_guard"

# Numerical defaults
SPEED_OF_LIGHT = 299_792_458.0
DEFAULT_ROLLOFF = 0.3
DEFAULT_EPSILON = 0.9
DEFAULT_PDP_DECAY = 1.0
SOMP_ITERATION_FACTOR = 3
SUPPORT_MARGIN = 2
COND_LIMIT = 1e12
TIKHONOV_SCALE = 1e-10
UPSILON_SINGULAR_TOL = 1e-9

# Output formatting
FLOAT_FORMAT = "{:.8e}"
RESULTS_HEADER = (
    "sweep_axis",
    "sweep_value",
    "estimator",
    "seed",
    "nmse",
    "runtime_ms",
    "flags",
    "eta",
    "snr_db",
    "n_t",
)

# UI colors
UI_COLORS = {
    "primary": "medium_purple1",
    "secondary": "medium_purple3",
    "success": "green",
    "warning": "orange1",
    "error": "red",
    "muted": "grey62",
}

# Panel titles
PANEL_ERROR = "Error"
PANEL_RESULTS = "NMSE Summary"
PANEL_CHECKS = "Validation"
PANEL_OVERHEAD = "Pilot Overhead"

# Messages
MSG_VERSION_DISPLAY = "OTFS Bench {version}"
MSG_SWEEP_VALUE = "{axis} = {value}: {trials} trial(s)"
MSG_RESULTS_WRITTEN = "Results written to {path}"
MSG_PROFILE_LOADED = "Using profile '{profile}'"
ERROR_CONFIG_DECODE = "Invalid JSON in config file '{path}': {error}"
ERROR_CONFIG_NOT_FOUND = "Config file not found: '{path}'"
ERROR_UNKNOWN_KEY = "Unknown config key '{key}'"
ERROR_UNKNOWN_ESTIMATOR = "Unknown estimator '{estimator_id}'"
ERROR_UNKNOWN_PROFILE = "Unknown profile '{profile}'"
ERROR_ETA_INFEASIBLE = "Pilot overhead ratio {eta} is infeasible; minimum feasible ratio is {minimum}"
