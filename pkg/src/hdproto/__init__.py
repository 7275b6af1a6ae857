"""hdproto: class-incremental prototype memory over a fixed hyperdimensional embedding.

A frozen feature space feeds a trainable bias-free linear layer whose
outputs are stored as one prototype per class in a growing memory, queried
by cosine similarity over tanh-activated vectors. Three per-session update
modes trade compute for separation quality (plain averaging, bipolarized
retraining targets, gradient-nudged targets), and the memory can be halved
by binding prototype pairs to seeded random keys with circular convolution.
"""

from .dataset import Dataset
from .embed import (
    EmbedLayer,
    RetrainConfig,
    alignment_grad,
    alignment_loss,
    attention_nll,
    regenerate_prototypes,
    retrain,
)
from .hdvec import (
    SharpenConfig,
    bipolarize,
    circ_convolve,
    circ_correlate,
    cosine,
    key_from_seed,
    nudge_activation,
    nudge_activation_anticorr,
    softabs_attention,
    softabs_sharpen,
    softmax_attention,
    tanh_elem,
)
from .memory import (
    ActivationMemory,
    CompressedMemory,
    PrototypeMemory,
    add_classes,
    compress,
    decompress_class,
    predict,
    predict_batch,
    predict_compressed,
    readout,
    score,
)
from .nudge import NudgeConfig, NudgeState, anchor_loss, nudge_grad, run_nudging, separation_loss
from .session import (
    EngineState,
    ModeConfig,
    SessionResult,
    SessionSchedule,
    evaluate,
    iter_experiment,
    run_base_session,
    run_experiment,
    run_incremental_session,
)
from .synth import SynthSpec, generate_synthetic

__version__ = "0.1.0"

__all__ = [
    "ActivationMemory",
    "CompressedMemory",
    "Dataset",
    "EmbedLayer",
    "EngineState",
    "ModeConfig",
    "NudgeConfig",
    "NudgeState",
    "PrototypeMemory",
    "RetrainConfig",
    "SessionResult",
    "SessionSchedule",
    "SharpenConfig",
    "SynthSpec",
    "add_classes",
    "alignment_grad",
    "alignment_loss",
    "anchor_loss",
    "attention_nll",
    "bipolarize",
    "circ_convolve",
    "circ_correlate",
    "compress",
    "cosine",
    "decompress_class",
    "evaluate",
    "generate_synthetic",
    "iter_experiment",
    "key_from_seed",
    "nudge_activation",
    "nudge_activation_anticorr",
    "nudge_grad",
    "predict",
    "predict_batch",
    "predict_compressed",
    "readout",
    "regenerate_prototypes",
    "retrain",
    "run_base_session",
    "run_experiment",
    "run_incremental_session",
    "run_nudging",
    "score",
    "separation_loss",
    "softabs_attention",
    "softabs_sharpen",
    "softmax_attention",
    "tanh_elem",
    "__version__",
]
