"""In-memory dataset container shared by the synthetic generator and file loaders."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch


@dataclass(frozen=True)
class Dataset:
    """Labeled feature vectors split into a train part and an evaluation part.

    Features are row-per-sample matrices; labels are integer class ids that
    are global across the whole dataset.
    """

    train_features: np.ndarray
    train_labels: np.ndarray
    eval_features: np.ndarray
    eval_labels: np.ndarray

    def __post_init__(self):
        for name in ("train", "eval"):
            x = np.asarray(getattr(self, f"{name}_features"), dtype=np.float64)
            y = np.asarray(getattr(self, f"{name}_labels"), dtype=np.int64)
            if x.ndim != 2:
                raise DimensionMismatch(f"{name} features must be 2-D, got {x.shape}")
            if y.ndim != 1 or y.shape[0] != x.shape[0]:
                raise DimensionMismatch(f"{name} labels do not match feature rows")
            object.__setattr__(self, f"{name}_features", x)
            object.__setattr__(self, f"{name}_labels", y)
        if self.train_features.shape[1] != self.eval_features.shape[1]:
            raise DimensionMismatch("train and eval feature dims differ")

    @property
    def feature_dim(self) -> int:
        return self.train_features.shape[1]

    def train_subset(self, class_ids) -> tuple[np.ndarray, np.ndarray]:
        mask = np.isin(self.train_labels, np.asarray(list(class_ids)))
        return self.train_features[mask], self.train_labels[mask]

    def eval_subset(self, class_ids) -> tuple[np.ndarray, np.ndarray]:
        mask = np.isin(self.eval_labels, np.asarray(list(class_ids)))
        return self.eval_features[mask], self.eval_labels[mask]
