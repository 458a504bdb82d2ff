"""Runtime configuration, numerical defaults and logging for the toolkit."""
from __future__ import annotations

import importlib.util
import logging
import os

if importlib.util.find_spec("dotenv") is not None:
    from dotenv import load_dotenv

    load_dotenv()
else:  # pragma: no cover - optional dependency fallback
    def load_dotenv() -> None:
        return None

LOG_LEVEL = os.getenv("TSALLIS_LOG_LEVEL", "INFO").upper()

# q-index handling
EPS_CLASSICAL = 1e-8

# distributions
NORMALIZATION_TOL = 1e-10
RENORMALIZE_TOL = 1e-6

# multiplier search
CONSTRAINT_TOL = 1e-10
MAX_NEWTON_ITERATIONS = 100
MAX_BACKTRACKS = 40
POLISH_STEPS = 2
STAGNATION_WINDOW = 12

# fixed points (normalized q-expectations and expectation matching)
FIXED_POINT_DAMPING = 0.5
FIXED_POINT_TOL = 1e-10
MAX_NORMALIZED_ITERATIONS = 500
MATCHING_TOL = 1e-10
MAX_MATCHING_ITERATIONS = 200
# secant polish of the matching denominator
MATCHING_POLISH_TOL = 1e-15
MATCHING_POLISH_STEPS = 8
DAMPING_FLOOR = 1e-3

# identity checks
IDENTITY_TOL = 1e-10
FD_STEP = 1e-5
FD_TOL = 1e-6
TRIANGLE_TOL = 1e-8
MATCHING_SCAN_POINTS = 11

logging.basicConfig(
    level=LOG_LEVEL,
    format="[%(asctime)s] %(levelname)s %(name)s: %(message)s",
)

log = logging.getLogger("tsallis")

__all__ = [
    "CONSTRAINT_TOL",
    "DAMPING_FLOOR",
    "EPS_CLASSICAL",
    "FD_STEP",
    "FD_TOL",
    "FIXED_POINT_DAMPING",
    "FIXED_POINT_TOL",
    "IDENTITY_TOL",
    "LOG_LEVEL",
    "MATCHING_POLISH_STEPS",
    "MATCHING_POLISH_TOL",
    "MATCHING_SCAN_POINTS",
    "MATCHING_TOL",
    "MAX_BACKTRACKS",
    "MAX_MATCHING_ITERATIONS",
    "MAX_NEWTON_ITERATIONS",
    "MAX_NORMALIZED_ITERATIONS",
    "NORMALIZATION_TOL",
    "POLISH_STEPS",
    "RENORMALIZE_TOL",
    "STAGNATION_WINDOW",
    "TRIANGLE_TOL",
    "log",
]
