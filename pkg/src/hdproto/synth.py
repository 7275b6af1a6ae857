"""Synthetic Gaussian-cluster feature sets.

Stands in for a frozen feature extractor at desk scale: each class is an
isotropic Gaussian cluster around a randomly placed center. The ratio of
center scale to cluster sigma controls how separable the classes are.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset


@dataclass(frozen=True)
class SynthSpec:
    """Cluster layout: class count, feature dim, scales, per-class shot counts."""

    class_count: int
    d_f: int
    cluster_center_scale: float
    cluster_sigma: float
    shots_train: int
    shots_eval: int
    seed: int = 0

    def __post_init__(self):
        if self.class_count < 1 or self.d_f < 1:
            raise ValueError("class_count and d_f must be >= 1")
        if self.cluster_sigma <= 0:
            raise ValueError("cluster_sigma must be positive")
        if self.shots_train < 1 or self.shots_eval < 0:
            raise ValueError("need shots_train >= 1 and shots_eval >= 0")


def generate_synthetic(spec: SynthSpec) -> Dataset:
    """Draw class centers and per-class train/eval samples, all from one seed.

    Centers are normal(0, center_scale^2 I); samples add normal(0, sigma^2 I)
    noise around their class center. Labels are 0..class_count-1. The same
    spec always yields the identical dataset.
    """
    rng = np.random.default_rng(spec.seed)
    centers = rng.normal(0.0, spec.cluster_center_scale, size=(spec.class_count, spec.d_f))
    train_x, train_y, eval_x, eval_y = [], [], [], []
    for c in range(spec.class_count):
        train_x.append(centers[c] + rng.normal(0.0, spec.cluster_sigma, size=(spec.shots_train, spec.d_f)))
        train_y.append(np.full(spec.shots_train, c))
        if spec.shots_eval:
            eval_x.append(centers[c] + rng.normal(0.0, spec.cluster_sigma, size=(spec.shots_eval, spec.d_f)))
            eval_y.append(np.full(spec.shots_eval, c))
    return Dataset(
        np.vstack(train_x),
        np.concatenate(train_y),
        np.vstack(eval_x) if eval_x else np.zeros((0, spec.d_f)),
        np.concatenate(eval_y) if eval_y else np.zeros(0, dtype=np.int64),
    )
