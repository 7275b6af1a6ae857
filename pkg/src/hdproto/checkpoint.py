"""Engine-state checkpoints: one .npz holding the layer and both memories.

Float arrays round-trip bit-exactly. Loss traces are per-session diagnostics,
not state, and are not checkpointed.
"""

from __future__ import annotations

import numpy as np

from .embed import EmbedLayer
from .errors import TruncatedFile
from .memory import ActivationMemory, PrototypeMemory
from .session import EngineState

_FORMAT = 1


def save_checkpoint(path, state: EngineState) -> None:
    arrays = {
        "format": np.array(_FORMAT, dtype=np.uint32),
        "session_index": np.array(state.session_index, dtype=np.int64),
        "weights": state.layer.weights,
        "base_weights": state.base_layer.weights,
        "prototypes": state.em.prototypes,
        "class_ids": np.asarray(state.em.class_ids, dtype=np.int64),
        "has_activations": np.array(state.gaam is not None),
    }
    if state.gaam is not None:
        arrays["activations"] = state.gaam.activations
        arrays["shot_counts"] = np.asarray(state.gaam.shot_counts, dtype=np.int64)
    np.savez(path, **arrays)


def load_checkpoint(path) -> EngineState:
    with np.load(path) as data:
        try:
            if int(data["format"]) != _FORMAT:
                raise TruncatedFile(f"{path}: unknown checkpoint format {int(data['format'])}")
            class_ids = tuple(int(c) for c in data["class_ids"])
            gaam = None
            if bool(data["has_activations"]):
                gaam = ActivationMemory(
                    data["activations"],
                    class_ids,
                    tuple(int(k) for k in data["shot_counts"]),
                )
            return EngineState(
                em=PrototypeMemory(data["prototypes"], class_ids),
                gaam=gaam,
                layer=EmbedLayer(data["weights"]),
                base_layer=EmbedLayer(data["base_weights"]),
                session_index=int(data["session_index"]),
            )
        except KeyError as exc:
            raise TruncatedFile(f"{path}: checkpoint is missing {exc}") from None
