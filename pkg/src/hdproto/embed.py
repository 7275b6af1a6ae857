"""The trainable linear embedding layer and its alignment retraining.

The layer maps feature vectors (dim d_f) into the prototype space (dim d)
with a bias-free weight matrix, so embedding a class-mean activation equals
the mean of the individually embedded activations. Retraining performs plain
gradient descent on the negative summed cosine between tanh-activated target
prototypes and tanh-activated embedded activations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    LabelOutOfRange,
    NonFiniteLoss,
    NonFiniteValue,
    ZeroVector,
)
from .hdvec import (
    ZERO_NORM_THRESHOLD,
    SharpenConfig,
    as_vector,
    softabs_attention,
    softmax_attention,
)

ATTENTIONS = ("softabs", "softmax")


@dataclass(frozen=True)
class EmbedLayer:
    """Bias-free linear map from feature space to prototype space.

    Treated as a value: retraining returns a new layer rather than
    mutating this one, so a layer is safe to share across threads.
    """

    weights: np.ndarray  # shape (d, d_f)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] < 1 or w.shape[1] < 1:
            raise DimensionMismatch(f"weights must be a 2-D matrix, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise NonFiniteValue("weights contain NaN or Inf")
        object.__setattr__(self, "weights", w)

    @property
    def out_dim(self) -> int:
        return self.weights.shape[0]

    @property
    def in_dim(self) -> int:
        return self.weights.shape[1]

    @classmethod
    def random_init(cls, out_dim: int, in_dim: int, seed: int) -> "EmbedLayer":
        """Seeded variance-preserving init: entries i.i.d. normal(0, 1/in_dim)."""
        rng = np.random.default_rng(seed)
        return cls(rng.normal(0.0, np.sqrt(1.0 / in_dim), size=(out_dim, in_dim)))

    def forward(self, activation) -> np.ndarray:
        """Embed one feature vector: weights @ activation."""
        a = as_vector(activation, "activation")
        if a.shape[0] != self.in_dim:
            raise DimensionMismatch(
                f"activation dim {a.shape[0]} != layer input dim {self.in_dim}"
            )
        return self.weights @ a

    def forward_batch(self, activations: np.ndarray) -> np.ndarray:
        """Embed activations given as columns of a (d_f, n) matrix."""
        a = np.asarray(activations, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != self.in_dim:
            raise DimensionMismatch(
                f"activation matrix must have {self.in_dim} rows, got shape {a.shape}"
            )
        return self.weights @ a


@dataclass(frozen=True)
class RetrainConfig:
    """Gradient-descent schedule for layer retraining: step count and rate."""

    iterations: int = 10
    rate: float = 0.01

    def __post_init__(self):
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        # rate 0 is allowed as an explicit no-op (useful for equivalence checks)
        if self.rate < 0:
            raise ValueError("rate must be >= 0")


def _check_alignment_args(layer: EmbedLayer, targets, activations):
    t = np.asarray(targets, dtype=np.float64)
    a = np.asarray(activations, dtype=np.float64)
    if t.ndim != 2 or a.ndim != 2:
        raise DimensionMismatch("targets and activations must be matrices")
    if t.shape[1] != a.shape[1]:
        raise DimensionMismatch(
            f"column counts differ: targets {t.shape[1]} vs activations {a.shape[1]}"
        )
    if t.shape[0] != layer.out_dim or a.shape[0] != layer.in_dim:
        raise DimensionMismatch(
            f"expected targets {layer.out_dim} x C and activations {layer.in_dim} x C, "
            f"got {t.shape} and {a.shape}"
        )
    return t, a


def _tanh_cols_checked(m: np.ndarray, what: str):
    y = np.tanh(m)
    norms = np.linalg.norm(y, axis=0)
    if np.any(norms < ZERO_NORM_THRESHOLD):
        raise ZeroVector(f"{what} has a zero column after tanh")
    return y, norms


def alignment_loss(layer: EmbedLayer, targets, activations) -> float:
    """Negative summed cosine between tanh'd targets and tanh'd embedded activations.

    targets: (d, C) prototype targets, one column per class.
    activations: (d_f, C) per-class averaged activations.
    Minimal value is -C, reached when every embedded column aligns with its target.
    """
    t, a = _check_alignment_args(layer, targets, activations)
    ty, tn = _tanh_cols_checked(t, "targets")
    y, yn = _tanh_cols_checked(layer.forward_batch(a), "embedded activations")
    return float(-np.sum(np.sum(ty * y, axis=0) / (tn * yn)))


def alignment_grad(layer: EmbedLayer, targets, activations) -> np.ndarray:
    """Analytic gradient of alignment_loss with respect to the layer weights.

    Chain rule through cosine and tanh: for each column, with y = tanh(W a)
    and t = tanh(target),

        dL/dy = -( t / (|t||y|) - (t.y) y / (|t||y|^3) )
        dL/dW = sum_cols (dL/dy * (1 - y^2)) outer a.
    """
    t, a = _check_alignment_args(layer, targets, activations)
    ty, tn = _tanh_cols_checked(t, "targets")
    y, yn = _tanh_cols_checked(layer.forward_batch(a), "embedded activations")
    dots = np.sum(ty * y, axis=0)
    grad_y = -(ty / (tn * yn) - (dots / (tn * yn**3)) * y)
    grad_z = grad_y * (1.0 - y**2)
    return grad_z @ a.T


def retrain(
    layer: EmbedLayer, targets, activations, cfg: RetrainConfig
) -> tuple[EmbedLayer, list[float]]:
    """Run cfg.iterations plain gradient-descent steps on the alignment loss.

    Returns the updated layer and the loss trace: the loss before the first
    step followed by the loss after each step (length iterations + 1).

    Raises NonFiniteLoss if any iterate diverges, which usually means the
    update rate is too large for the problem scale.
    """
    current = layer
    trace: list[float] = []
    for _ in range(cfg.iterations):
        loss = alignment_loss(current, targets, activations)
        if not np.isfinite(loss):
            raise NonFiniteLoss(f"alignment loss diverged at step {len(trace)}")
        trace.append(loss)
        with np.errstate(over="ignore"):
            weights = current.weights - cfg.rate * alignment_grad(current, targets, activations)
        if not np.all(np.isfinite(weights)):
            raise NonFiniteLoss(f"weights diverged at step {len(trace)}; lower the rate")
        current = EmbedLayer(weights)
    last = alignment_loss(current, targets, activations)
    if not np.isfinite(last):
        raise NonFiniteLoss("alignment loss diverged after the final step")
    trace.append(last)
    return current, trace


def regenerate_prototypes(layer: EmbedLayer, activations) -> np.ndarray:
    """Re-embed all stored activations through the (retrained) layer: W @ A."""
    a = np.asarray(activations, dtype=np.float64)
    if a.ndim != 2 or a.shape[1] < 1:
        raise DimensionMismatch("activations must be a nonempty matrix")
    return layer.forward_batch(a)


def attention_nll(
    layer: EmbedLayer,
    prototypes,
    query,
    label: int,
    cfg: SharpenConfig = SharpenConfig(),
    attention: str = "softabs",
) -> float:
    """Negative log of the attention mass the readout assigns to the true class.

    Scores are cosines between the tanh'd embedded query and the tanh'd
    prototype columns, sharpened by the chosen attention function.
    """
    if attention not in ATTENTIONS:
        raise ValueError(f"attention must be one of {ATTENTIONS}, got {attention!r}")
    p = np.asarray(prototypes, dtype=np.float64)
    if p.ndim != 2 or p.shape[0] != layer.out_dim:
        raise DimensionMismatch(f"prototypes must be {layer.out_dim} x C, got {p.shape}")
    n_classes = p.shape[1]
    if not 0 <= label < n_classes:
        raise LabelOutOfRange(f"label {label} outside [0, {n_classes})")
    ty, tn = _tanh_cols_checked(p, "prototypes")
    q = np.tanh(layer.forward(query))
    qn = np.linalg.norm(q)
    if qn < ZERO_NORM_THRESHOLD:
        raise ZeroVector("embedded query is (near-)zero after tanh")
    scores = (ty.T @ q) / (tn * qn)
    weights = softabs_attention(scores, cfg) if attention == "softabs" else softmax_attention(scores, cfg)
    return float(-np.log(weights[label]))
