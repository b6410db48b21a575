"""Steel frame sizing with variable functioning (Fx)."""

import json
import os
from pathlib import Path

_packaged = Path(__file__).resolve().parent / "data"
if "FRAMEFX_DATA" not in os.environ and _packaged.is_dir():
    os.environ["FRAMEFX_DATA"] = str(_packaged)

from ._core import (  # noqa: E402
    ConfigError,
    Evaluation,
    FunctioningError,
    FunctioningRule,
    PlanError,
    Problem,
    ProblemBundle,
    SingularStiffnessError,
    alpha_max,
    analyze_frame,
    cli,
    column_curve_ratio,
    data_dir,
    expand_continuous,
    frame,
    interaction_matrix,
    interactions,
    lrfd_interaction,
    reduce,
    reduced_dimension,
    run_trial_json,
    sphere,
    stepped_column,
)


def shipped_frame(name):
    """Bundle for a shipped frame: 'frame8', 'frame15' or 'frame24'."""
    return frame(Path(data_dir()) / "frames" / f"{name}.json")


def run_trial(bundle, algorithm="de", strategy="none", seed=0, population=25, max_fe=5000):
    """One seeded trial; returns the run record as a dict."""
    return json.loads(run_trial_json(bundle, algorithm, strategy, seed, population, max_fe))


__all__ = [name for name in dir() if not name.startswith("_")]
