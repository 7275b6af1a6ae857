import numpy as np
import pytest

from hdproto.checkpoint import load_checkpoint, save_checkpoint
from hdproto.embed import RetrainConfig
from hdproto.errors import TruncatedFile
from hdproto.memory import predict_batch
from hdproto.nudge import NudgeConfig
from hdproto.session import ModeConfig, SessionSchedule, iter_experiment
from hdproto.synth import SynthSpec, generate_synthetic


def final_state(mode=3):
    data = generate_synthetic(SynthSpec(8, 6, 8.0, 1.0, 5, 3, seed=2))
    cfg = ModeConfig(
        mode=mode,
        retrain=RetrainConfig(iterations=5, rate=0.01),
        nudge=NudgeConfig(iterations=5, rate=0.01),
    )
    schedule = SessionSchedule(4, ((2, 5), (2, 5)))
    state = None
    for state, _ in iter_experiment(data, schedule, cfg, seed=1, dim=12):
        pass
    return data, state


def test_checkpoint_roundtrip_bit_exact(tmp_path):
    data, state = final_state()
    path = tmp_path / "state.npz"
    save_checkpoint(path, state)
    loaded = load_checkpoint(path)
    np.testing.assert_array_equal(loaded.layer.weights, state.layer.weights)
    np.testing.assert_array_equal(loaded.base_layer.weights, state.base_layer.weights)
    np.testing.assert_array_equal(loaded.em.prototypes, state.em.prototypes)
    assert loaded.em.class_ids == state.em.class_ids
    np.testing.assert_array_equal(loaded.gaam.activations, state.gaam.activations)
    assert loaded.gaam.shot_counts == state.gaam.shot_counts
    assert loaded.session_index == state.session_index


def test_checkpoint_preserves_predictions(tmp_path):
    data, state = final_state(mode=1)
    path = tmp_path / "state.npz"
    save_checkpoint(path, state)
    loaded = load_checkpoint(path)
    assert loaded.gaam is None  # mode 1 has no activation memory
    queries = data.eval_features
    np.testing.assert_array_equal(
        predict_batch(loaded.em, loaded.layer, queries),
        predict_batch(state.em, state.layer, queries),
    )


def test_checkpoint_rejects_foreign_npz(tmp_path):
    path = tmp_path / "junk.npz"
    np.savez(path, stuff=np.arange(3))
    with pytest.raises(TruncatedFile):
        load_checkpoint(path)
