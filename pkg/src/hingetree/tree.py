"""Recursive tree construction over hinge splits, plus prediction routing.

A node becomes a leaf (its own ridge fit) when the depth cap, the minimum
sample count, or the RMSE threshold fires.  Otherwise both hinge variants
are optimized and the better one routes the samples; if optimization
stalls, a random-feature median split keeps growth going.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import AllFeaturesConstant, DimensionMismatch, EmptyDataset
from .linear import augment, fit_or_mean, predict_linear
from .split import (
    HingeKind,
    SplitConfig,
    SplitOutcome,
    _partition_aug,
    median_fallback,
    select_split,
)

_MASK64 = (1 << 64) - 1


def derive_seed(seed: int, level: int, slot: int) -> int:
    """Deterministic seed mixer (one splitmix64-style round).

    Children use slot 0 (left) and 1 (right) with their parent's seed and
    depth, the node's fallback draw uses slot 2, and boosting stages use
    slot 3 with the stage index as ``level``.  Tree shape is therefore
    reproducible independent of traversal order.
    """
    z = (
        (seed & _MASK64) * 0x9E3779B97F4A7C15
        + (level & _MASK64) * 0xBF58476D1CE4E5B9
        + slot
        + 1
    ) & _MASK64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK64
    z ^= z >> 31
    return z


@dataclass(frozen=True)
class TreeConfig:
    """Tree-level hyperparameters.

    ``d_max`` counts edges, with the root at depth 0 (0 means a single
    leaf).  ``n_min`` is the minimum sample count for a node to be split
    and for each resulting child.  ``tau_rmse`` compares against the
    unpenalized RMSE of the node's ridge-fit leaf model.
    """

    d_max: int = 6
    n_min: int = 5
    tau_rmse: float = 0.03
    split: SplitConfig = field(default_factory=SplitConfig)
    fallback_on_nonconvergence: bool = True
    collect_traces: bool = False

    def __post_init__(self):
        if self.d_max < 0:
            raise ValueError("d_max must be non-negative")
        if self.n_min < 2 * self.split.min_subset:
            raise ValueError("n_min must be at least 2 * min_subset")
        if self.tau_rmse < 0:
            raise ValueError("tau_rmse must be non-negative")


@dataclass
class Leaf:
    theta: np.ndarray
    n_train: int


@dataclass
class Internal:
    split: SplitOutcome
    left: "TreeNode"
    right: "TreeNode"


TreeNode = Leaf | Internal


@dataclass
class TrainStats:
    n_leaves: int
    depth: int
    n_splits: int
    n_fallbacks: int
    total_split_iterations: int
    total_variant_iterations: int
    per_node_traces: list[list[float]] | None = None

    @property
    def fallback_rate(self) -> float:
        return self.n_fallbacks / self.n_splits if self.n_splits else 0.0


@dataclass
class HrtModel:
    root: TreeNode
    d: int
    config: TreeConfig
    stats: TrainStats
    preprocess: dict | None = None


class _Counters:
    __slots__ = ("winner_iters", "variant_iters", "traces")

    def __init__(self, collect_traces: bool):
        self.winner_iters = 0
        self.variant_iters = 0
        self.traces: list[list[float]] | None = [] if collect_traces else None


def _grow(X, y, depth, seed, config: TreeConfig, acc: _Counters) -> TreeNode:
    n = X.shape[0]
    Xa = augment(X)
    theta_leaf = fit_or_mean(Xa, y, config.split.ridge_alpha)
    rmse = float(np.sqrt(np.mean((y - Xa @ theta_leaf) ** 2)))
    if depth >= config.d_max or n < config.n_min or rmse < config.tau_rmse:
        return Leaf(theta=theta_leaf, n_train=n)

    node_cfg = replace(config.split, seed=seed)
    outcome = select_split(X, y, node_cfg)
    acc.winner_iters += outcome.iterations
    if outcome.variant_iterations is not None:
        acc.variant_iters += sum(outcome.variant_iterations)
    if acc.traces is not None:
        acc.traces.append(list(outcome.objective_trace))

    s1, s2 = _partition_aug(Xa, outcome.theta1, outcome.theta2, outcome.kind)
    # A split that cannot produce two viable children stalls growth just
    # like non-convergence does, so both symptoms route to the fallback.
    stalled = (not outcome.converged) or min(s1.size, s2.size) < config.n_min
    if stalled and config.fallback_on_nonconvergence:
        try:
            outcome = median_fallback(X, seed=derive_seed(seed, depth, 2))
        except AllFeaturesConstant:
            return Leaf(theta=theta_leaf, n_train=n)
        s1, s2 = _partition_aug(Xa, outcome.theta1, outcome.theta2, outcome.kind)

    if s1.size < config.n_min or s2.size < config.n_min:
        # Ineffective split: keep the node's own fit.
        return Leaf(theta=theta_leaf, n_train=n)

    left = _grow(X[s1], y[s1], depth + 1, derive_seed(seed, depth, 0), config, acc)
    right = _grow(X[s2], y[s2], depth + 1, derive_seed(seed, depth, 1), config, acc)
    return Internal(split=outcome, left=left, right=right)


def _structure(node: TreeNode, depth: int = 0):
    if isinstance(node, Leaf):
        return 1, depth, 0, 0
    l_leaves, l_depth, l_splits, l_fb = _structure(node.left, depth + 1)
    r_leaves, r_depth, r_splits, r_fb = _structure(node.right, depth + 1)
    fb = 1 if node.split.used_fallback else 0
    return (
        l_leaves + r_leaves,
        max(l_depth, r_depth),
        l_splits + r_splits + 1,
        l_fb + r_fb + fb,
    )


def build_tree(X, y, config: TreeConfig | None = None) -> HrtModel:
    """Fit a hinge regression tree.

    Deterministic for identical (X, y, config): node seeds are derived
    from ``config.split.seed`` through :func:`derive_seed`.
    """
    if config is None:
        config = TreeConfig()
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    if X.ndim != 2 or X.shape[0] == 0 or X.shape[1] == 0:
        raise EmptyDataset("training data must have at least one sample and one feature")
    if X.shape[0] != y.shape[0]:
        raise DimensionMismatch("X and y row counts differ")

    acc = _Counters(config.collect_traces)
    root = _grow(X, y, 0, config.split.seed & _MASK64, config, acc)
    n_leaves, depth, n_splits, n_fallbacks = _structure(root)
    stats = TrainStats(
        n_leaves=n_leaves,
        depth=depth,
        n_splits=n_splits,
        n_fallbacks=n_fallbacks,
        total_split_iterations=acc.winner_iters,
        total_variant_iterations=acc.variant_iters,
        per_node_traces=acc.traces,
    )
    return HrtModel(root=root, d=X.shape[1], config=config, stats=stats)


def _route(node: TreeNode, x: np.ndarray) -> Leaf:
    while isinstance(node, Internal):
        o = node.split
        a = float(x @ o.theta1[:-1] + o.theta1[-1])
        b = float(x @ o.theta2[:-1] + o.theta2[-1])
        go_left = a >= b if o.kind is HingeKind.MAX else a <= b
        node = node.left if go_left else node.right
    return node


def predict(model: HrtModel, x) -> float:
    """Route one sample to its leaf and evaluate the leaf model.

    Ties on a split hyperplane go to the first branch, matching training.
    """
    x = np.asarray(x, dtype=float).ravel()
    if x.shape[0] != model.d:
        raise DimensionMismatch(f"expected {model.d} features, got {x.shape[0]}")
    leaf = _route(model.root, x)
    return predict_linear(leaf.theta, x)


def predict_batch(model: HrtModel, X) -> np.ndarray:
    """Row-wise :func:`predict`; bit-identical to the scalar path."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise DimensionMismatch("expected a 2-D feature matrix")
    if X.shape[0] == 0:
        return np.empty(0)
    if X.shape[1] != model.d:
        raise DimensionMismatch(f"expected {model.d} features, got {X.shape[1]}")
    return np.array([predict(model, row) for row in X])


def tree_stats(model: HrtModel) -> TrainStats:
    """Structural statistics recomputed from the stored tree."""
    n_leaves, depth, n_splits, n_fallbacks = _structure(model.root)
    return TrainStats(
        n_leaves=n_leaves,
        depth=depth,
        n_splits=n_splits,
        n_fallbacks=n_fallbacks,
        total_split_iterations=model.stats.total_split_iterations,
        total_variant_iterations=model.stats.total_variant_iterations,
        per_node_traces=model.stats.per_node_traces,
    )
