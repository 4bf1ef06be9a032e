"""Oblique node splits: two linear models joined by a max or min hinge.

A split is learned by alternating between partitioning the node's samples
with the current hinge and refitting each side by (ridge) least squares.
The damped update ``theta <- theta + mu * (theta_fit - theta)`` is exactly
a damped Newton step on the node objective, because the Gauss-Newton
Hessian is exact for a piecewise-linear model.  ``mu`` may be a fixed
damping factor in (0, 1] or ``"auto"``, a backtracking search that starts
at ``mu0`` and shrinks geometrically until the objective strictly drops.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import AllFeaturesConstant, DegenerateSystem, TooFewSamples
from .linear import augment, fit_or_mean, ridge_solve

# Two parameter vectors closer than this (max-norm) count as identical
# during initialization and trigger a symmetry-breaking perturbation.
DIVERSITY_TOL = 1e-9


class HingeKind(Enum):
    MAX = "max"
    MIN = "min"


@dataclass(frozen=True)
class SplitConfig:
    """Node-split hyperparameters.

    ``step`` is either a fixed damping factor in (0, 1] or the string
    ``"auto"`` for backtracking line search (candidates ``mu0 * beta**s``,
    at most ``max_backtracks`` of them).  ``epsilon`` is the convergence
    tolerance on the summed parameter change per iteration.  Sides of a
    partition with fewer than ``min_subset`` samples keep their current
    parameters for that step.
    """

    t_max: int = 100
    step: float | str = 0.01
    mu0: float = 1.0
    beta: float = 0.5
    max_backtracks: int = 30
    epsilon: float = 0.03
    ridge_alpha: float = 1e-3
    min_subset: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.t_max < 1:
            raise ValueError("t_max must be a positive integer")
        if isinstance(self.step, str):
            if self.step != "auto":
                raise ValueError("step must be a damping factor in (0, 1] or 'auto'")
        elif not 0.0 < float(self.step) <= 1.0:
            raise ValueError("fixed step must lie in (0, 1]")
        if self.mu0 <= 0.0:
            raise ValueError("mu0 must be positive")
        if not 0.0 < self.beta < 1.0:
            raise ValueError("beta must lie in (0, 1)")
        if self.max_backtracks < 1:
            raise ValueError("max_backtracks must be a positive integer")
        if self.epsilon <= 0.0:
            raise ValueError("epsilon must be positive")
        if self.ridge_alpha < 0.0:
            raise ValueError("ridge_alpha must be non-negative")
        if self.min_subset < 1:
            raise ValueError("min_subset must be a positive integer")

    @property
    def auto_step(self) -> bool:
        return self.step == "auto"


@dataclass
class SplitOutcome:
    """Result of optimizing (or falling back on) one node split.

    ``objective_trace`` holds the objective value at initialization and
    after every accepted iteration (length ``iterations + 1`` for
    optimized splits; empty for fallback splits).  ``mu_trace``,
    ``partition_sizes`` and ``direction_norms`` are per-iteration
    diagnostics; ``variant_iterations`` is filled by :func:`select_split`
    with the raw (max-variant, min-variant) iteration counts.
    """

    theta1: np.ndarray
    theta2: np.ndarray
    kind: HingeKind
    converged: bool
    iterations: int
    objective_trace: list[float]
    used_fallback: bool = False
    fallback_feature: int | None = None
    fallback_threshold: float | None = None
    mu_trace: list[float] = field(default_factory=list)
    partition_sizes: list[tuple[int, int]] = field(default_factory=list)
    direction_norms: list[float] = field(default_factory=list)
    variant_iterations: tuple[int, int] | None = None


def _as_xy(X, y):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise ValueError("X must be 2-D with one target per row")
    return X, y


def hinge_values(Xa: np.ndarray, theta1: np.ndarray, theta2: np.ndarray,
                 kind: HingeKind) -> np.ndarray:
    """Hinge prediction max/min(Xa @ theta1, Xa @ theta2) per row of an augmented design."""
    a = Xa @ theta1
    b = Xa @ theta2
    return np.maximum(a, b) if kind is HingeKind.MAX else np.minimum(a, b)


def _objective_aug(Xa, y, theta1, theta2, kind) -> float:
    r = y - hinge_values(Xa, theta1, theta2, kind)
    return 0.5 * float(r @ r)


def objective(X, y, theta1, theta2, kind: HingeKind) -> float:
    """Node objective: half the summed squared error of the hinge prediction."""
    X, y = _as_xy(X, y)
    return _objective_aug(augment(X), y, theta1, theta2, kind)


def _partition_aug(Xa, theta1, theta2, kind):
    a = Xa @ theta1
    b = Xa @ theta2
    # Ties go to the first branch for both variants.
    first = a >= b if kind is HingeKind.MAX else a <= b
    idx = np.arange(Xa.shape[0])
    return idx[first], idx[~first]


def partition(X, theta1, theta2, kind: HingeKind):
    """Split row indices into (S1, S2) by the hinge comparison.

    Max variant: j is in S1 iff x~.theta1 >= x~.theta2; min variant uses
    <=.  The two sets are disjoint and exhaustive.
    """
    X = np.asarray(X, dtype=float)
    return _partition_aug(augment(X), theta1, theta2, kind)


def _fit_subset(Xa, y, idx, alpha, min_subset, current):
    # Undersized or degenerate sides keep their parameters for this step.
    if idx.size < min_subset:
        return current
    try:
        return ridge_solve(Xa[idx], y[idx], alpha)
    except DegenerateSystem:
        return current


def _step_toward(theta, target, mu):
    # mu == 1 lands exactly on the refit solution (unit Newton step).
    if mu == 1.0:
        return target.copy()
    return theta + mu * (target - theta)


def damped_update(X, y, s1, s2, theta1, theta2, mu: float,
                  alpha: float = 0.0, min_subset: int = 2):
    """One damped Newton step with the partition (s1, s2) held fixed."""
    X, y = _as_xy(X, y)
    Xa = augment(X)
    s1 = np.asarray(s1, dtype=int)
    s2 = np.asarray(s2, dtype=int)
    f1 = _fit_subset(Xa, y, s1, alpha, min_subset, theta1)
    f2 = _fit_subset(Xa, y, s2, alpha, min_subset, theta2)
    return _step_toward(theta1, f1, mu), _step_toward(theta2, f2, mu)


def newton_step(X, y, theta1, theta2, kind: HingeKind, mu: float,
                alpha: float = 0.0, min_subset: int = 2):
    """Partition by the current parameters, then take one damped Newton step."""
    if not 0.0 < mu <= 1.0:
        raise ValueError("mu must lie in (0, 1]")
    X, y = _as_xy(X, y)
    Xa = augment(X)
    s1, s2 = _partition_aug(Xa, theta1, theta2, kind)
    f1 = _fit_subset(Xa, y, s1, alpha, min_subset, theta1)
    f2 = _fit_subset(Xa, y, s2, alpha, min_subset, theta2)
    return _step_toward(theta1, f1, mu), _step_toward(theta2, f2, mu)


def backtracking_step(X, y, theta1, theta2, kind: HingeKind,
                      config: SplitConfig):
    """Line-searched Newton step.

    Tries mu in {mu0, mu0*beta, mu0*beta**2, ...} (at most
    ``max_backtracks`` candidates) and returns the first one that strictly
    decreases the hinge objective, together with the updated parameters.
    Returns ``(0.0, theta1, theta2)`` if no candidate decreases it, which
    callers treat as a local stop.
    """
    X, y = _as_xy(X, y)
    Xa = augment(X)
    s1, s2 = _partition_aug(Xa, theta1, theta2, kind)
    f1 = _fit_subset(Xa, y, s1, config.ridge_alpha, config.min_subset, theta1)
    f2 = _fit_subset(Xa, y, s2, config.ridge_alpha, config.min_subset, theta2)
    v0 = _objective_aug(Xa, y, theta1, theta2, kind)
    mu = config.mu0
    for _ in range(config.max_backtracks):
        c1 = _step_toward(theta1, f1, mu)
        c2 = _step_toward(theta2, f2, mu)
        if _objective_aug(Xa, y, c1, c2, kind) < v0:
            return mu, c1, c2
        mu *= config.beta
    return 0.0, theta1, theta2


def initialize_params(X, y, alpha: float = 0.0, seed: int = 0):
    """Data-driven starting point for the alternating optimization.

    Splits at the median of the largest-range feature and ridge-fits each
    side.  If either side is smaller than two samples (or a side fit is
    degenerate), both vectors start from the global fit plus small
    independent perturbations.  A final diversity check keeps theta1 and
    theta2 from being numerically identical.  Deterministic given seed.
    """
    X, y = _as_xy(X, y)
    n, d = X.shape
    if n < 2:
        raise TooFewSamples("initialization needs at least 2 samples")
    Xa = augment(X)
    rng = np.random.default_rng(seed & 0xFFFFFFFFFFFFFFFF)

    ranges = X.max(axis=0) - X.min(axis=0)
    k = int(np.argmax(ranges))
    pivot = float(np.median(X[:, k]))
    low = X[:, k] <= pivot

    theta1 = theta2 = None
    if int(low.sum()) >= 2 and int((~low).sum()) >= 2:
        try:
            theta1 = ridge_solve(Xa[low], y[low], alpha)
            theta2 = ridge_solve(Xa[~low], y[~low], alpha)
        except DegenerateSystem:
            theta1 = theta2 = None
    if theta1 is None:
        theta_global = fit_or_mean(Xa, y, alpha)
        scale = 1e-3 * (1.0 + float(np.max(np.abs(theta_global))))
        theta1 = theta_global + rng.normal(0.0, scale, size=d + 1)
        theta2 = theta_global + rng.normal(0.0, scale, size=d + 1)

    if float(np.max(np.abs(theta1 - theta2))) < DIVERSITY_TOL:
        scale = 1e-3 * (1.0 + float(np.max(np.abs(theta1))))
        theta2 = theta2 + rng.normal(0.0, scale, size=d + 1)
        if float(np.max(np.abs(theta1 - theta2))) < DIVERSITY_TOL:
            theta2 = theta2.copy()
            theta2[0] += 1e-6

    # The two side fits can be near-collinear, leaving the hinge boundary
    # entirely outside the data (every sample on one side).  A one-sided
    # start stalls small damping factors for ~1/mu iterations, so shift
    # the second bias by the median margin to pull the boundary into the
    # sample cloud.
    margins = Xa @ (theta1 - theta2)
    if margins.min() >= 0.0 or margins.max() <= 0.0:
        theta2 = theta2.copy()
        theta2[-1] += float(np.median(margins))
    return theta1, theta2


def find_optimal_split(X, y, kind: HingeKind, config: SplitConfig) -> SplitOutcome:
    """Optimize one hinge split of the given kind.

    Alternates refitting and repartitioning for at most ``t_max``
    iterations.  Convergence means the summed parameter change fell below
    ``epsilon``, or (auto step only) no backtracking candidate decreased
    the objective.  Under the auto step the recorded objective trace is
    strictly decreasing by construction.  The fallback split is not taken
    here; the tree layer decides that.
    """
    X, y = _as_xy(X, y)
    n = y.shape[0]
    if n < 2 * config.min_subset:
        raise TooFewSamples(
            f"need at least {2 * config.min_subset} samples, got {n}"
        )
    Xa = augment(X)
    alpha = config.ridge_alpha
    ms = config.min_subset
    theta1, theta2 = initialize_params(X, y, alpha, config.seed)

    trace = [_objective_aug(Xa, y, theta1, theta2, kind)]
    s1, s2 = _partition_aug(Xa, theta1, theta2, kind)
    sizes = [(int(s1.size), int(s2.size))]
    mu_trace: list[float] = []
    dir_norms: list[float] = []
    iterations = 0
    converged = False

    for _ in range(config.t_max):
        f1 = _fit_subset(Xa, y, s1, alpha, ms, theta1)
        f2 = _fit_subset(Xa, y, s2, alpha, ms, theta2)
        p_norm = float(np.linalg.norm(f1 - theta1) + np.linalg.norm(f2 - theta2))

        if config.auto_step:
            mu = 0.0
            cand = config.mu0
            new1 = new2 = None
            v_new = None
            for _ in range(config.max_backtracks):
                c1 = _step_toward(theta1, f1, cand)
                c2 = _step_toward(theta2, f2, cand)
                v = _objective_aug(Xa, y, c1, c2, kind)
                if v < trace[-1]:
                    mu, new1, new2, v_new = cand, c1, c2, v
                    break
                cand *= config.beta
            if mu == 0.0:
                # No decreasing step exists along this direction; stop.
                converged = True
                break
        else:
            mu = float(config.step)
            new1 = _step_toward(theta1, f1, mu)
            new2 = _step_toward(theta2, f2, mu)
            v_new = None

        change = float(np.linalg.norm(new1 - theta1) + np.linalg.norm(new2 - theta2))
        theta1, theta2 = new1, new2
        iterations += 1
        s1, s2 = _partition_aug(Xa, theta1, theta2, kind)
        if v_new is None:
            v_new = _objective_aug(Xa, y, theta1, theta2, kind)
        trace.append(v_new)
        mu_trace.append(mu)
        dir_norms.append(p_norm)
        sizes.append((int(s1.size), int(s2.size)))
        if change < config.epsilon:
            converged = True
            break

    return SplitOutcome(
        theta1=theta1,
        theta2=theta2,
        kind=kind,
        converged=converged,
        iterations=iterations,
        objective_trace=trace,
        mu_trace=mu_trace,
        partition_sizes=sizes,
        direction_norms=dir_norms,
    )


def select_split(X, y, config: SplitConfig) -> SplitOutcome:
    """Run both hinge variants and keep the one with lower training RMSE.

    The max variant runs first and wins ties.  The returned outcome's
    ``variant_iterations`` holds the raw (max, min) iteration counts.
    """
    X, y = _as_xy(X, y)
    n = y.shape[0]
    out_max = find_optimal_split(X, y, HingeKind.MAX, config)
    out_min = find_optimal_split(X, y, HingeKind.MIN, config)
    rmse_max = float(np.sqrt(2.0 * out_max.objective_trace[-1] / n))
    rmse_min = float(np.sqrt(2.0 * out_min.objective_trace[-1] / n))
    winner = out_min if rmse_min < rmse_max else out_max
    winner.variant_iterations = (out_max.iterations, out_min.iterations)
    return winner


def median_fallback(X, seed: int = 0) -> SplitOutcome:
    """Axis split at the median of a random non-constant feature.

    Used when node optimization stalls.  The axis test is encoded as a
    max hinge (theta1 = +e_k with bias -m_k, theta2 = its negation) so
    that S1 = {x_k >= m_k} and every downstream consumer sees one uniform
    node representation.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2:
        raise TooFewSamples("fallback split needs at least 2 samples")
    n, d = X.shape
    ranges = X.max(axis=0) - X.min(axis=0)
    candidates = np.flatnonzero(ranges > 0)
    if candidates.size == 0:
        raise AllFeaturesConstant("every feature is constant at this node")
    rng = np.random.default_rng(seed & 0xFFFFFFFFFFFFFFFF)
    k = int(candidates[rng.integers(candidates.size)])
    m = float(np.median(X[:, k]))
    theta1 = np.zeros(d + 1)
    theta1[k] = 1.0
    theta1[-1] = -m
    theta2 = -theta1
    return SplitOutcome(
        theta1=theta1,
        theta2=theta2,
        kind=HingeKind.MAX,
        converged=True,
        iterations=0,
        objective_trace=[],
        used_fallback=True,
        fallback_feature=k,
        fallback_threshold=m,
    )
