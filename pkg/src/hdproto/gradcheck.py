"""Finite-difference verification of the analytic gradients.

Central differences with a fixed step act as the independent oracle for
both the layer-alignment gradient and the nudging gradient. Each suite
draws seeded random problem instances ("points"), compares the full
analytic gradient matrix against the finite-difference estimate, and
reports the worst relative error over all points.
"""

from __future__ import annotations

import numpy as np

from .embed import EmbedLayer, alignment_grad, alignment_loss
from .hdvec import SharpenConfig
from .nudge import NudgeConfig, NudgeState, nudge_grad, nudge_objective

DEFAULT_STEP = 1e-5
TOLERANCE = 1e-4


def fd_gradient(func, x0: np.ndarray, step: float = DEFAULT_STEP) -> np.ndarray:
    """Central-difference gradient of a scalar function of an ndarray."""
    x0 = np.asarray(x0, dtype=np.float64)
    grad = np.zeros_like(x0)
    flat = grad.reshape(-1)
    base = x0.copy()
    view = base.reshape(-1)
    for i in range(view.size):
        original = view[i]
        view[i] = original + step
        hi = func(base)
        view[i] = original - step
        lo = func(base)
        view[i] = original
        flat[i] = (hi - lo) / (2.0 * step)
    return grad


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    """Max absolute deviation scaled by the largest finite-difference entry."""
    scale = np.max(np.abs(numeric))
    if scale == 0.0:
        return float(np.max(np.abs(analytic)))
    return float(np.max(np.abs(analytic - numeric)) / scale)


def check_alignment_gradient(
    seed: int, points: int = 20, step: float = DEFAULT_STEP
) -> float:
    """Worst relative error of the alignment-loss gradient over random instances."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(points):
        d = int(rng.integers(2, 7))
        d_f = int(rng.integers(2, 7))
        n_classes = int(rng.integers(1, 5))
        weights = rng.normal(size=(d, d_f))
        targets = rng.normal(size=(d, n_classes))
        activations = rng.normal(size=(d_f, n_classes))
        analytic = alignment_grad(EmbedLayer(weights), targets, activations)
        numeric = fd_gradient(
            lambda w: alignment_loss(EmbedLayer(w), targets, activations), weights, step
        )
        worst = max(worst, relative_error(analytic, numeric))
    return worst


def check_nudge_gradient(
    seed: int, points: int = 20, step: float = DEFAULT_STEP
) -> float:
    """Worst relative error of the combined nudging gradient over random instances."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for index in range(points):
        d = int(rng.integers(3, 8))
        n_classes = int(rng.integers(2, 6))
        variant = "symmetric" if index % 2 == 0 else "anticorr"
        cfg = NudgeConfig(iterations=0, rate=1.0, sharpen=SharpenConfig(), variant=variant)
        current = rng.normal(size=(d, n_classes))
        initial = rng.normal(size=(d, n_classes))
        analytic = nudge_grad(NudgeState(current, initial), cfg)
        numeric = fd_gradient(
            lambda k: nudge_objective(NudgeState(k, initial), cfg), current, step
        )
        worst = max(worst, relative_error(analytic, numeric))
    return worst


def run_gradcheck(seed: int = 0) -> dict[str, float]:
    """Both suites at their default sizes; keys name the gradient under test."""
    return {
        "alignment": check_alignment_gradient(seed),
        "nudge": check_nudge_gradient(seed + 1),
    }
