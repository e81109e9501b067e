"""UI-specific constants for OTFS Bench."""

# UI Layout Constants
DEFAULT_PANEL_PADDING = {"top": 1, "right": 0, "bottom": 1, "left": 1}

# Table formatting
NMSE_FORMAT = "{:.3e}"
DB_FORMAT = "{:+.2f} dB"
PASS_MARK = "pass"
FAIL_MARK = "FAIL"
