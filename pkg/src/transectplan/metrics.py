"""Map-quality metrics for executed observation paths.

Two numbers summarize how good a path's final map is:

* the posterior entropy of everything the path did not sample (smaller
  means less residual uncertainty), which depends only on where the path
  went, not on what it measured;
* the mean squared error of the posterior-mean map against the ground
  truth, relative to the field mean, evaluated over every cell of the grid.

Both are reported per path and compared across planners by differencing
against the Markov planner's path on the same instance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyUnobservedSet, MismatchedInstances, ZeroMeanField
from .gp import Hyperparams, conditional_entropy, posterior_mean
from .transect import ObservationPath, RobotConfig


@dataclass(frozen=True)
class EvalRecord:
    """One planner's showing on one instance.

    ``err`` is None when the grid carries no ground-truth measurements.
    """

    policy_kind: str
    start: RobotConfig
    ent: float
    err: float | None
    plan_seconds: float


def unobserved_entropy(path: ObservationPath, h: Hyperparams) -> float:
    """Posterior entropy of the cells the path never visited.

    Smaller is better. Depends only on the visited locations, so it can be
    computed before any measurement is taken. Raises EmptyUnobservedSet
    when the path covered the whole grid, since the entropy of nothing is
    not a number.
    """
    sampled = set(path.locations())
    rest = [u for u in path.grid.locations() if u not in sampled]
    if not rest:
        raise EmptyUnobservedSet("path covers every cell")
    return conditional_entropy(rest, path.locations(), h, path.grid.widths)


def relative_error(
    path: ObservationPath, h: Hyperparams, mean: float | None = None
) -> float:
    """Mean squared relative error of the posterior-mean map.

    Conditions on the ground-truth values at the sampled cells, predicts
    every cell of the grid (sampled ones included; they contribute nearzero
    residuals), and averages the squared residuals normalized by the field
    mean. The prior mean defaults to the field's arithmetic mean.
    """
    grid = path.grid
    if grid.measurements is None:
        raise ValueError("relative error needs ground-truth measurements")
    zbar = float(np.mean(grid.measurements))
    if zbar == 0.0:
        raise ZeroMeanField("field mean is zero, relative error undefined")
    if mean is None:
        mean = zbar
    sampled = path.locations()
    z_obs = np.array([grid.value_at(u) for u in sampled])
    universe = grid.locations()
    mu = posterior_mean(universe, sampled, z_obs, h, grid.widths, mean=mean)
    z_all = np.array([grid.value_at(u) for u in universe])
    resid = (z_all - mu) / zbar
    return float(np.mean(resid * resid))


def evaluate(
    result_path: ObservationPath,
    h: Hyperparams,
    policy_kind: str,
    plan_seconds: float = 0.0,
    mean: float | None = None,
) -> EvalRecord:
    """Bundle both metrics for one planned path."""
    err = None
    if result_path.grid.measurements is not None:
        err = relative_error(result_path, h, mean=mean)
    return EvalRecord(
        policy_kind=policy_kind,
        start=result_path.start,
        ent=unobserved_entropy(result_path, h),
        err=err,
        plan_seconds=plan_seconds,
    )


def metric_diff(
    a: EvalRecord, b: EvalRecord
) -> tuple[float, float | None]:
    """Metric gaps (a minus b) between two records of the same instance.

    By convention ``a`` is the Markov planner's record, so positive numbers
    mean the other planner produced the better map. Antisymmetric. Raises
    MismatchedInstances when the records disagree on the start.
    """
    if a.start != b.start:
        raise MismatchedInstances(f"records start at {a.start} vs {b.start}")
    ent_gap = a.ent - b.ent
    err_gap = None
    if a.err is not None and b.err is not None:
        err_gap = a.err - b.err
    return ent_gap, err_gap
