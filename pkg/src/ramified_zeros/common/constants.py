"""
A collection of constants used throughout the project.
"""

import os

TOOL_NAME = "ramified_zeros"
TOOL_VERSION = "0.3.0"

# Fixed default seed so two identical invocations write identical reports
DEFAULT_SEED = 20240116

# Guard digits (powers of 2) kept above ceil(n_pi / e) in coefficient residues
PRECISION_GUARD = 2

# Default working precision in pi-digits is PRECISION_SLOPE * e + PRECISION_OFFSET
PRECISION_SLOPE = 8
PRECISION_OFFSET = 16

# Default target precision of emitted certificates is 2e + TARGET_OFFSET
TARGET_OFFSET = 10

DEFAULT_BUDGET = 10**5
HENSEL_ITERATION_LIMIT = 8
HENSEL_HARD_LIMIT = 64

# Brute force refuses search spaces larger than this many states
BRUTE_FORCE_STATE_CAP = 2**28

# Rows per numpy block when sweeping bin assignments
BINS_CHUNK_SIZE = 2**18


def worker_count() -> int:
    """
    Number of workers for oracle sweeps, read from RAMIFIED_ZERO_THREADS.
    Anything unparsable or below one falls back to a single worker.
    """
    raw = os.environ.get("RAMIFIED_ZERO_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1
