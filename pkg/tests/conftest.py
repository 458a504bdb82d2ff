from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Any, Callable

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from distributions import discrete_grid  # noqa: E402
from models import ConstraintSet, Distribution, MomentFunction, SupportGrid  # noqa: E402


@pytest.fixture
def two_point_grid() -> SupportGrid:
    return discrete_grid(2)


@pytest.fixture
def half_prior(two_point_grid: SupportGrid) -> Distribution:
    return Distribution(two_point_grid, [0.5, 0.5])


@pytest.fixture
def step_function() -> MomentFunction:
    return MomentFunction([0.0, 1.0], "u")


@pytest.fixture
def two_point_constraints(step_function: MomentFunction) -> Callable[..., ConstraintSet]:
    def build(target: float, kind: str = "q") -> ConstraintSet:
        return ConstraintSet((step_function,), [target], kind)

    return build


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20241017)


@pytest.fixture
def problem_file(tmp_path: Path) -> Callable[[dict[str, Any]], str]:
    """Writes a problem document to a temporary JSON file and returns its path."""

    def write(document: dict[str, Any], name: str = "problem.json") -> str:
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return str(path)

    return write


@pytest.fixture
def two_point_problem() -> dict[str, Any]:
    return {
        "grid": {"points": [0, 1]},
        "prior": [0.5, 0.5],
        "constraints": [{"label": "u", "values": [0, 1], "target": 0.09}],
        "q": 2.0,
    }
