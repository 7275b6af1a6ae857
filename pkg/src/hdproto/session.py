"""Class-incremental session orchestration.

A run starts with one base session holding many classes, then consumes a
sequence of strict c-way k-shot novel sessions. After every session the
model is evaluated on the union of all classes seen so far. Only the
prototype memory, the activation memory, and the embedding layer cross a
session boundary; raw samples of earlier sessions are never reachable from
the incremental-session interface.

Per-session update modes:
  1: append averaged prototypes, no gradient work.
  2: append, bipolarize the stored prototypes into retraining targets,
     retrain the layer, regenerate all prototypes.
  3: append, nudge the stored prototypes toward mutual quasi-orthogonality,
     retrain the layer against the nudged targets, regenerate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset
from .embed import EmbedLayer, RetrainConfig, regenerate_prototypes, retrain
from .errors import (
    ConfigError,
    EmptyClass,
    EmptyEvaluation,
    ShotCountMismatch,
    UnknownLabel,
)
from .hdvec import SharpenConfig, bipolarize
from .memory import (
    ActivationMemory,
    PrototypeMemory,
    add_classes,
    compress,
    predict_batch,
    predict_compressed_batch,
)
from .nudge import NudgeConfig, run_nudging

DEFAULT_COMPRESS_SEED_BASE = 0x5EED


@dataclass(frozen=True)
class SessionSchedule:
    """Base class count plus (ways, shots) for every novel session.

    Class ids are assigned in ascending label order: the lowest
    base_class_count labels form the base session, and each novel session
    takes the next `ways` labels.
    """

    base_class_count: int
    novel_sessions: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.base_class_count < 1:
            raise ValueError("base_class_count must be >= 1")
        sessions = tuple((int(c), int(k)) for c, k in self.novel_sessions)
        if any(c < 1 or k < 1 for c, k in sessions):
            raise ValueError("every novel session needs ways >= 1 and shots >= 1")
        object.__setattr__(self, "novel_sessions", sessions)

    @property
    def session_count(self) -> int:
        return 1 + len(self.novel_sessions)

    def cumulative_class_counts(self) -> list[int]:
        counts = [self.base_class_count]
        for ways, _ in self.novel_sessions:
            counts.append(counts[-1] + ways)
        return counts

    def total_classes(self) -> int:
        return self.base_class_count + sum(c for c, _ in self.novel_sessions)


@dataclass(frozen=True)
class ModeConfig:
    """Everything a session pipeline needs besides the data itself."""

    mode: int = 1
    retrain: RetrainConfig = field(default_factory=RetrainConfig)
    nudge: NudgeConfig = field(default_factory=NudgeConfig)
    sharpen: SharpenConfig = field(default_factory=SharpenConfig)
    attention: str = "softabs"
    reset_fcl: bool = False
    compress_em: bool = False
    keep_activations: bool = False
    compress_seed_base: int = DEFAULT_COMPRESS_SEED_BASE

    def __post_init__(self):
        if self.mode not in (1, 2, 3):
            raise ConfigError(f"mode must be 1, 2, or 3, got {self.mode}")
        if self.attention not in ("softabs", "softmax"):
            raise ConfigError(f"attention must be 'softabs' or 'softmax', got {self.attention!r}")

    @property
    def needs_activation_memory(self) -> bool:
        # Mode 1 skips the activation memory to honor its footprint claim
        # unless explicitly overridden for mode-switching experiments.
        return self.mode in (2, 3) or self.keep_activations


@dataclass(frozen=True)
class SessionResult:
    """Evaluation outcome of one session over the class union seen so far."""

    session_index: int
    class_count: int
    accuracy: float
    mean_abs_offdiag_cos: float
    max_abs_offdiag_cos: float
    retrain_trace: tuple[float, ...] | None = None
    nudge_trace: tuple[float, ...] | None = None


@dataclass
class EngineState:
    """Everything that crosses a session boundary."""

    em: PrototypeMemory
    gaam: ActivationMemory | None
    layer: EmbedLayer
    base_layer: EmbedLayer
    session_index: int = 1
    last_retrain_trace: tuple[float, ...] | None = None
    last_nudge_trace: tuple[float, ...] | None = None


def _run_mode_pipeline(em, gaam, layer, cfg: ModeConfig):
    """Apply the per-session update mode; returns (em, layer, retrain_trace, nudge_trace)."""
    if cfg.mode == 1:
        return em, layer, None, None
    if gaam is None or len(gaam) == 0:
        raise ConfigError("modes 2 and 3 require the activation memory")
    nudge_trace = None
    if cfg.mode == 2:
        targets = bipolarize(em.prototypes)
    else:
        targets, nudge_trace = run_nudging(em.prototypes, cfg.nudge)
        nudge_trace = tuple(nudge_trace)
    layer, retrain_trace = retrain(layer, targets, gaam.activations, cfg.retrain)
    em = PrototypeMemory(regenerate_prototypes(layer, gaam.activations), em.class_ids)
    return em, layer, tuple(retrain_trace), nudge_trace


def run_base_session(
    features, labels, base_class_ids, layer: EmbedLayer, cfg: ModeConfig
) -> EngineState:
    """Build the memories from the base classes, then apply the mode pipeline.

    Base-session averaging uses every available sample of each base class;
    a scheduled class with no samples raises EmptyClass.
    """
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels)
    support = []
    for cid in base_class_ids:
        rows = features[labels == cid]
        if rows.shape[0] == 0:
            raise EmptyClass(f"base class {cid} has no samples")
        support.extend((row, int(cid)) for row in rows)

    em = PrototypeMemory.empty(layer.out_dim)
    gaam = ActivationMemory.empty(layer.in_dim) if cfg.needs_activation_memory else None
    em, gaam = add_classes(em, gaam, layer, support, shots=None)
    em, new_layer, retrain_trace, nudge_trace = _run_mode_pipeline(em, gaam, layer, cfg)
    return EngineState(
        em=em,
        gaam=gaam,
        layer=new_layer,
        base_layer=new_layer,
        session_index=1,
        last_retrain_trace=retrain_trace,
        last_nudge_trace=nudge_trace,
    )


def run_incremental_session(
    state: EngineState, support, ways: int, shots: int, cfg: ModeConfig
) -> EngineState:
    """Consume one strict c-way k-shot novel session.

    support: (feature_vector, class_id) pairs covering exactly `ways` new
    classes with exactly `shots` vectors each. The state's memories and
    layer are the only carried-over knowledge; with reset_fcl the layer is
    first restored to its post-base-session weights.
    """
    new_ids = {int(cid) for _, cid in support}
    if len(new_ids) != ways:
        raise ShotCountMismatch(f"expected {ways} new classes, got {len(new_ids)}")
    layer = state.base_layer if cfg.reset_fcl else state.layer
    em, gaam = add_classes(state.em, state.gaam, layer, support, shots=shots)
    em, layer, retrain_trace, nudge_trace = _run_mode_pipeline(em, gaam, layer, cfg)
    return EngineState(
        em=em,
        gaam=gaam,
        layer=layer,
        base_layer=state.base_layer,
        session_index=state.session_index + 1,
        last_retrain_trace=retrain_trace,
        last_nudge_trace=nudge_trace,
    )


def _offdiag_cosine_stats(prototypes: np.ndarray) -> tuple[float, float]:
    """Mean and max absolute off-diagonal cosine between tanh'd prototypes."""
    if prototypes.shape[1] < 2:
        return 0.0, 0.0
    y = np.tanh(prototypes)
    y = y / np.linalg.norm(y, axis=0)
    cosines = y.T @ y
    iu = np.triu_indices(cosines.shape[0], k=1)
    off = np.abs(cosines[iu])
    return float(np.mean(off)), float(np.max(off))


def evaluate(state: EngineState, features, labels, cfg: ModeConfig) -> SessionResult:
    """Top-1 accuracy over an evaluation set restricted to the classes seen so far."""
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels)
    if features.shape[0] == 0:
        raise EmptyEvaluation("evaluation set is empty")
    stored = set(state.em.class_ids)
    missing = {int(l) for l in labels} - stored
    if missing:
        raise UnknownLabel(f"evaluation labels outside the seen classes: {sorted(missing)[:5]}")
    if cfg.compress_em:
        cm = compress(state.em, cfg.compress_seed_base)
        predictions = predict_compressed_batch(cm, state.layer, features)
    else:
        predictions = predict_batch(state.em, state.layer, features)
    accuracy = float(np.mean(predictions == labels))
    mean_off, max_off = _offdiag_cosine_stats(state.em.prototypes)
    return SessionResult(
        session_index=state.session_index,
        class_count=len(state.em),
        accuracy=accuracy,
        mean_abs_offdiag_cos=mean_off,
        max_abs_offdiag_cos=max_off,
        retrain_trace=state.last_retrain_trace,
        nudge_trace=state.last_nudge_trace,
    )


def _session_class_ids(dataset: Dataset, schedule: SessionSchedule) -> list[np.ndarray]:
    """Assign dataset labels to sessions in ascending label order."""
    unique = np.unique(dataset.train_labels)
    if unique.shape[0] < schedule.total_classes():
        raise ConfigError(
            f"schedule needs {schedule.total_classes()} classes, dataset has {unique.shape[0]}"
        )
    out = [unique[: schedule.base_class_count]]
    offset = schedule.base_class_count
    for ways, _ in schedule.novel_sessions:
        out.append(unique[offset : offset + ways])
        offset += ways
    return out


def _support_pairs(features, labels, class_ids, shots: int):
    """First `shots` samples per class, in dataset order."""
    pairs = []
    for cid in class_ids:
        rows = features[labels == cid]
        if rows.shape[0] < shots:
            raise ShotCountMismatch(
                f"class {int(cid)} has {rows.shape[0]} train samples, needs {shots}"
            )
        pairs.extend((row, int(cid)) for row in rows[:shots])
    return pairs


def iter_experiment(
    dataset: Dataset,
    schedule: SessionSchedule,
    cfg: ModeConfig,
    seed: int,
    dim: int,
):
    """Yield (state, result) after the base session and after every novel session."""
    layer = EmbedLayer.random_init(dim, dataset.feature_dim, seed)
    per_session_ids = _session_class_ids(dataset, schedule)

    state = run_base_session(
        *dataset.train_subset(per_session_ids[0]), per_session_ids[0], layer, cfg
    )
    seen = list(per_session_ids[0])
    yield state, evaluate(state, *dataset.eval_subset(seen), cfg)

    for (ways, shots), ids in zip(schedule.novel_sessions, per_session_ids[1:]):
        support = _support_pairs(*dataset.train_subset(ids), ids, shots)
        state = run_incremental_session(state, support, ways, shots, cfg)
        seen.extend(ids)
        yield state, evaluate(state, *dataset.eval_subset(seen), cfg)


def run_experiment(
    dataset: Dataset,
    schedule: SessionSchedule,
    cfg: ModeConfig,
    seed: int,
    dim: int,
) -> list[SessionResult]:
    """Base session plus all novel sessions, evaluating after each.

    The embedding layer is freshly seeded from `seed`; everything downstream
    is deterministic, so identical (dataset, schedule, cfg, seed, dim) yield
    identical results.
    """
    return [result for _, result in iter_experiment(dataset, schedule, cfg, seed, dim)]
