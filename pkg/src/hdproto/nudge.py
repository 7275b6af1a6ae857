"""Gradient-based prototype nudging.

Adjusts a set of prototypes to reduce their pairwise cross-correlation
(separation loss) while staying close to where they started (anchor loss).
The combined objective is descended with a fixed step for a fixed number of
iterations; the anchor targets stay frozen at the initial prototypes for the
whole run. This is what makes quasi-orthogonal layouts reachable even when
the class count exceeds the vector dimension.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NonFiniteLoss, NonFiniteValue, ZeroVector
from .hdvec import ZERO_NORM_THRESHOLD, SharpenConfig

VARIANTS = ("symmetric", "anticorr")


@dataclass(frozen=True)
class NudgeConfig:
    """Nudging schedule: iteration count, step rate, penalty steepness, variant.

    variant "symmetric" penalizes any nonzero pairwise correlation (pushes
    toward orthogonality); "anticorr" penalizes only positive correlation
    (pushes toward anti-correlation), matching the softmax-attention pipeline.
    """

    iterations: int = 100
    rate: float = 0.01
    sharpen: SharpenConfig = field(default_factory=SharpenConfig)
    variant: str = "symmetric"

    def __post_init__(self):
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        # rate 0 is allowed as an explicit no-op (useful for equivalence checks)
        if self.rate < 0:
            raise ValueError("rate must be >= 0")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")


@dataclass
class NudgeState:
    """Current prototypes, the frozen initial ones, and the step counter."""

    current: np.ndarray
    initial: np.ndarray
    step: int = 0

    def __post_init__(self):
        cur = np.asarray(self.current, dtype=np.float64)
        init = np.asarray(self.initial, dtype=np.float64)
        if cur.shape != init.shape or cur.ndim != 2:
            raise DimensionMismatch(
                f"current {cur.shape} and initial {init.shape} must be equal-shape matrices"
            )
        if not (np.all(np.isfinite(cur)) and np.all(np.isfinite(init))):
            raise NonFiniteValue("prototype matrices contain NaN or Inf")
        self.current = cur
        self.initial = init


def _tanh_unit(matrix: np.ndarray, what: str):
    y = np.tanh(matrix)
    norms = np.linalg.norm(y, axis=0)
    if np.any(norms < ZERO_NORM_THRESHOLD):
        raise ZeroVector(f"{what} has a zero column after tanh")
    return y, norms


def _penalty(c: np.ndarray, cfg: NudgeConfig) -> np.ndarray:
    a = cfg.sharpen.alpha
    if cfg.variant == "symmetric":
        return np.exp(a * c) + np.exp(-a * c) - 2.0
    return np.exp(a * c) - 1.0


def _penalty_deriv(c: np.ndarray, cfg: NudgeConfig) -> np.ndarray:
    a = cfg.sharpen.alpha
    if cfg.variant == "symmetric":
        return a * (np.exp(a * c) - np.exp(-a * c))
    return a * np.exp(a * c)


def separation_loss(prototypes, cfg: NudgeConfig = NudgeConfig()) -> float:
    """Penalized pairwise cross-correlation, summed over ordered pairs i != j.

    Each unordered pair contributes twice, which also doubles its gradient;
    the update rate is calibrated against this convention. Zero exactly when
    all tanh'd columns are mutually orthogonal.
    """
    k = np.asarray(prototypes, dtype=np.float64)
    if k.ndim != 2:
        raise DimensionMismatch(f"prototypes must be a matrix, got shape {k.shape}")
    if k.shape[1] < 2:
        return 0.0
    y, norms = _tanh_unit(k, "prototypes")
    cosines = np.clip((y / norms).T @ (y / norms), -1.0, 1.0)
    penalties = _penalty(cosines, cfg)
    np.fill_diagonal(penalties, 0.0)
    return float(np.sum(penalties))


def anchor_loss(prototypes, initial) -> float:
    """Negative summed cosine between each column and its frozen initial column."""
    k = np.asarray(prototypes, dtype=np.float64)
    k0 = np.asarray(initial, dtype=np.float64)
    if k.shape != k0.shape or k.ndim != 2:
        raise DimensionMismatch(f"shapes differ: {k.shape} vs {k0.shape}")
    y, ny = _tanh_unit(k, "prototypes")
    t, nt = _tanh_unit(k0, "initial prototypes")
    return float(-np.sum(np.sum(y * t, axis=0) / (ny * nt)))


def nudge_objective(state: NudgeState, cfg: NudgeConfig = NudgeConfig()) -> float:
    """Separation plus anchor loss at the state's current prototypes."""
    return separation_loss(state.current, cfg) + anchor_loss(state.current, state.initial)


def nudge_grad(state: NudgeState, cfg: NudgeConfig = NudgeConfig()) -> np.ndarray:
    """Analytic gradient of the combined objective with respect to the prototypes.

    With y_i = tanh(k_i), u_i = y_i / |y_i|, and C the unit-column cosine
    matrix, the separation term contributes per column

        (2 / |y_i|) * ( sum_j w_ij u_j  -  (sum_j w_ij C_ij) u_i ),
        w_ij = penalty'(C_ij), w_ii = 0,

    and the anchor term the usual cosine gradient toward the frozen initial
    direction; both are chained through tanh.
    """
    y, ny = _tanh_unit(state.current, "prototypes")
    u = y / ny

    grad_y = np.zeros_like(y)
    if y.shape[1] >= 2:
        cosines = np.clip(u.T @ u, -1.0, 1.0)
        w = _penalty_deriv(cosines, cfg)
        np.fill_diagonal(w, 0.0)
        weighted_sum = u @ w
        diag_pull = np.sum(w * cosines, axis=1)
        grad_y += 2.0 * (weighted_sum - u * diag_pull) / ny

    t, nt = _tanh_unit(state.initial, "initial prototypes")
    that = t / nt
    cos_anchor = np.sum(u * that, axis=0)
    grad_y += -(that - u * cos_anchor) / ny

    return (1.0 - y**2) * grad_y


def run_nudging(
    initial_prototypes, cfg: NudgeConfig = NudgeConfig()
) -> tuple[np.ndarray, list[float]]:
    """Descend the combined objective for cfg.iterations fixed-rate steps.

    Returns the final prototypes and the objective trace: the value before
    the first step followed by the value after each step (iterations + 1
    entries). Deterministic for a given (initial_prototypes, cfg).
    """
    k0 = np.asarray(initial_prototypes, dtype=np.float64)
    state = NudgeState(k0.copy(), k0)
    trace: list[float] = []
    for _ in range(cfg.iterations):
        loss = nudge_objective(state, cfg)
        if not np.isfinite(loss):
            raise NonFiniteLoss(f"nudging objective diverged at step {state.step}")
        trace.append(loss)
        with np.errstate(over="ignore"):
            updated = state.current - cfg.rate * nudge_grad(state, cfg)
        if not np.all(np.isfinite(updated)):
            raise NonFiniteLoss(f"prototypes diverged at step {state.step}; lower the rate")
        state.current = updated
        state.step += 1
    last = nudge_objective(state, cfg)
    if not np.isfinite(last):
        raise NonFiniteLoss("nudging objective diverged after the final step")
    trace.append(last)
    return state.current, trace
