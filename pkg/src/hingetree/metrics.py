"""Evaluation metrics, structural complexity, and analytic inference FLOPs."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .boost import BoostModel
from .errors import EmptyInput, LengthMismatch
from .tree import HrtModel, Leaf

# FLOPs conventions: a length-p dot product costs p multiplies plus p-1
# adds; "two" charges both branch predictors per split, "diff" charges a
# single dot product with the difference hyperplane.
FLOPS_MODES = ("two", "diff")


@dataclass
class EvalReport:
    rmse: float
    mae: float
    r2: float
    n: int
    r2_defined: bool = True


@dataclass
class FlopsReport:
    inference_flops_per_sample: float
    total_parameters: int


def evaluate(predictions, targets) -> EvalReport:
    """RMSE, MAE and R^2 of paired prediction/target vectors.

    R^2 is undefined for constant targets; it is reported as NaN with
    ``r2_defined=False``.
    """
    p = np.asarray(predictions, dtype=float).ravel()
    t = np.asarray(targets, dtype=float).ravel()
    if p.shape[0] != t.shape[0]:
        raise LengthMismatch(f"{p.shape[0]} predictions vs {t.shape[0]} targets")
    if p.shape[0] == 0:
        raise EmptyInput("cannot evaluate zero samples")
    err = p - t
    rmse = float(np.sqrt(np.mean(err ** 2)))
    mae = float(np.mean(np.abs(err)))
    ss_res = float(err @ err)
    centered = t - t.mean()
    ss_tot = float(centered @ centered)
    if ss_tot == 0.0:
        return EvalReport(rmse=rmse, mae=mae, r2=math.nan, n=p.shape[0],
                          r2_defined=False)
    return EvalReport(rmse=rmse, mae=mae, r2=1.0 - ss_res / ss_tot, n=p.shape[0])


def _dot_cost(p: int) -> int:
    return 2 * p - 1


def _split_cost(p: int, mode: str) -> int:
    if mode == "two":
        return 2 * _dot_cost(p) + 1
    return _dot_cost(p) + 1


def _leaf_path_costs(node, p: int, mode: str, prefix: int, out: list[int]):
    if isinstance(node, Leaf):
        out.append(prefix + _dot_cost(p))
        return
    cost = prefix + _split_cost(p, mode)
    _leaf_path_costs(node.left, p, mode, cost, out)
    _leaf_path_costs(node.right, p, mode, cost, out)


def hrt_inference_flops(model: HrtModel, mode: str = "two") -> FlopsReport:
    """Single-sample inference FLOPs, averaged over all root-to-leaf paths.

    Each internal node costs two hinge dot products plus one comparison
    (``mode="two"``, matching the stored two-model representation) or one
    difference-hyperplane dot product plus a comparison (``mode="diff"``);
    the reached leaf costs one dot product.  Paths are unweighted.
    """
    if mode not in FLOPS_MODES:
        raise ValueError(f"mode must be one of {FLOPS_MODES}")
    p = model.d + 1
    costs: list[int] = []
    _leaf_path_costs(model.root, p, mode, 0, costs)
    n_leaves = len(costs)
    n_internal = n_leaves - 1
    return FlopsReport(
        inference_flops_per_sample=float(np.mean(costs)),
        total_parameters=p * (2 * n_internal + n_leaves),
    )


def boost_inference_flops(model: BoostModel, mode: str = "two") -> FlopsReport:
    """Ensemble inference FLOPs: per-learner path averages plus the
    scale-and-accumulate scalar ops (2 per learner, 1 for the constant
    initializer)."""
    per_learner = [hrt_inference_flops(t, mode) for t in model.learners]
    flops = sum(r.inference_flops_per_sample for r in per_learner)
    flops += 2 * len(model.learners) + 1
    params = sum(r.total_parameters for r in per_learner)
    return FlopsReport(inference_flops_per_sample=float(flops),
                       total_parameters=params)


def complexity_report(model) -> dict:
    """Structural summary: depth and leaves for a tree; totals for an ensemble."""
    if isinstance(model, HrtModel):
        return {
            "kind": "hrt",
            "depth": model.stats.depth,
            "leaves": model.stats.n_leaves,
        }
    if isinstance(model, BoostModel):
        leaves = [t.stats.n_leaves for t in model.learners]
        depths = [t.stats.depth for t in model.learners]
        return {
            "kind": "boost",
            "stages": len(model.learners),
            "total_leaves": int(sum(leaves)),
            "max_depth": int(max(depths)) if depths else 0,
        }
    raise TypeError(f"unsupported model type {type(model).__name__}")
