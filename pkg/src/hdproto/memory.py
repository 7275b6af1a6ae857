"""Growing prototype memory, cosine scoring, and holographic 2x compression.

The prototype memory stores one column per class seen so far and grows by
appending; existing columns are never touched by an append. A parallel
activation memory keeps per-class averaged feature vectors so prototypes can
be regenerated after the embedding layer is retrained. Compression binds
consecutive prototype pairs to seeded random keys via circular convolution
and superimposes each pair into a single slot; unbinding by circular
correlation yields a noisy estimate of the original prototype.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicateClass,
    EmptyInput,
    EmptyMemory,
    NonFiniteValue,
    ShotCountMismatch,
    UnknownClass,
    ZeroVector,
)
from .embed import EmbedLayer
from .hdvec import (
    ZERO_NORM_THRESHOLD,
    SharpenConfig,
    as_vector,
    circ_convolve,
    circ_correlate,
    key_from_seed,
    softabs_attention,
    softmax_attention,
)


def _check_matrix(m, rows_name: str) -> np.ndarray:
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise DimensionMismatch(f"{rows_name} must be a matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFiniteValue(f"{rows_name} contains NaN or Inf")
    return m


@dataclass(frozen=True)
class PrototypeMemory:
    """Ordered class prototypes: columns of a (d, C) matrix plus their class ids."""

    prototypes: np.ndarray
    class_ids: tuple[int, ...]

    def __post_init__(self):
        p = _check_matrix(self.prototypes, "prototypes")
        ids = tuple(int(c) for c in self.class_ids)
        if p.shape[1] != len(ids):
            raise DimensionMismatch(
                f"{p.shape[1]} prototype columns vs {len(ids)} class ids"
            )
        if len(set(ids)) != len(ids):
            raise DuplicateClass("class ids must be distinct")
        object.__setattr__(self, "prototypes", p)
        object.__setattr__(self, "class_ids", ids)

    @classmethod
    def empty(cls, dim: int) -> "PrototypeMemory":
        return cls(np.zeros((dim, 0)), ())

    @property
    def dim(self) -> int:
        return self.prototypes.shape[0]

    def __len__(self) -> int:
        return len(self.class_ids)

    def index_of(self, class_id: int) -> int:
        try:
            return self.class_ids.index(int(class_id))
        except ValueError:
            raise UnknownClass(f"class {class_id} not stored") from None


@dataclass(frozen=True)
class ActivationMemory:
    """Per-class averaged feature vectors, aligned column-for-column with the prototypes."""

    activations: np.ndarray
    class_ids: tuple[int, ...]
    shot_counts: tuple[int, ...]

    def __post_init__(self):
        a = _check_matrix(self.activations, "activations")
        ids = tuple(int(c) for c in self.class_ids)
        counts = tuple(int(k) for k in self.shot_counts)
        if a.shape[1] != len(ids) or len(ids) != len(counts):
            raise DimensionMismatch("activations, class ids, and shot counts disagree")
        if any(k < 1 for k in counts):
            raise ShotCountMismatch("every stored class needs at least one shot")
        object.__setattr__(self, "activations", a)
        object.__setattr__(self, "class_ids", ids)
        object.__setattr__(self, "shot_counts", counts)

    @classmethod
    def empty(cls, dim: int) -> "ActivationMemory":
        return cls(np.zeros((dim, 0)), (), ())

    @property
    def dim(self) -> int:
        return self.activations.shape[0]

    def __len__(self) -> int:
        return len(self.class_ids)


def add_classes(
    em: PrototypeMemory,
    gaam: ActivationMemory | None,
    layer: EmbedLayer,
    support: Iterable[tuple[np.ndarray, int]],
    shots: int | None = None,
) -> tuple[PrototypeMemory, ActivationMemory | None]:
    """Append one averaged prototype per new class in the support set.

    support: (feature_vector, class_id) pairs; all class ids must be new.
    shots: when given, every new class must contribute exactly this many
    vectors (novel sessions are strict c-way k-shot); when None any
    positive count is accepted (base sessions average everything).

    For each class the averaged activation is stored and its embedding is
    appended as the prototype; new classes are appended in ascending id
    order. Existing columns are returned untouched.
    """
    grouped: dict[int, list[np.ndarray]] = {}
    for vec, class_id in support:
        grouped.setdefault(int(class_id), []).append(as_vector(vec, "support vector"))
    if not grouped:
        raise EmptyInput("support set is empty")
    if gaam is not None and gaam.class_ids != em.class_ids:
        raise DimensionMismatch("activation memory out of step with prototype memory")

    known = set(em.class_ids)
    for class_id, vecs in grouped.items():
        if class_id in known:
            raise DuplicateClass(f"class {class_id} already stored")
        if shots is not None and len(vecs) != shots:
            raise ShotCountMismatch(
                f"class {class_id} has {len(vecs)} support vectors, expected {shots}"
            )
        for v in vecs:
            if v.shape[0] != layer.in_dim:
                raise DimensionMismatch(
                    f"support vector dim {v.shape[0]} != layer input dim {layer.in_dim}"
                )

    new_ids = sorted(grouped)
    averaged = np.stack([np.mean(grouped[c], axis=0) for c in new_ids], axis=1)
    embedded = layer.forward_batch(averaged)

    em_out = PrototypeMemory(
        np.hstack([em.prototypes, embedded]) if len(em) else embedded,
        em.class_ids + tuple(new_ids),
    )
    if gaam is None:
        return em_out, None
    gaam_out = ActivationMemory(
        np.hstack([gaam.activations, averaged]) if len(gaam) else averaged,
        gaam.class_ids + tuple(new_ids),
        gaam.shot_counts + tuple(len(grouped[c]) for c in new_ids),
    )
    return em_out, gaam_out


def _tanh_unit_cols(matrix: np.ndarray, what: str) -> np.ndarray:
    y = np.tanh(matrix)
    norms = np.linalg.norm(y, axis=0)
    if np.any(norms < ZERO_NORM_THRESHOLD):
        raise ZeroVector(f"{what} has a zero column after tanh")
    return y / norms


def _scores_against(prototypes: np.ndarray, layer: EmbedLayer, query) -> np.ndarray:
    if prototypes.shape[1] == 0:
        raise EmptyMemory("no classes stored")
    pt = _tanh_unit_cols(prototypes, "prototypes")
    q = np.tanh(layer.forward(query))
    qn = np.linalg.norm(q)
    if qn < ZERO_NORM_THRESHOLD:
        raise ZeroVector("embedded query is (near-)zero after tanh")
    return np.clip(pt.T @ (q / qn), -1.0, 1.0)


def _scores_batch(prototypes: np.ndarray, layer: EmbedLayer, queries: np.ndarray) -> np.ndarray:
    """Row i holds the scores of query i against every class column."""
    if prototypes.shape[1] == 0:
        raise EmptyMemory("no classes stored")
    pt = _tanh_unit_cols(prototypes, "prototypes")
    q = np.tanh(layer.forward_batch(np.asarray(queries, dtype=np.float64).T))
    qn = np.linalg.norm(q, axis=0)
    if np.any(qn < ZERO_NORM_THRESHOLD):
        raise ZeroVector("an embedded query is (near-)zero after tanh")
    return np.clip((q / qn).T @ pt, -1.0, 1.0)


def score(em: PrototypeMemory, layer: EmbedLayer, query) -> np.ndarray:
    """Cosine between the tanh'd embedded query and each tanh'd prototype."""
    return _scores_against(em.prototypes, layer, query)


def predict(em: PrototypeMemory, layer: EmbedLayer, query) -> int:
    """Class id with the highest score; ties go to the lowest memory index."""
    return em.class_ids[int(np.argmax(score(em, layer, query)))]


def predict_batch(em: PrototypeMemory, layer: EmbedLayer, queries) -> np.ndarray:
    """Vectorized predict over queries given as rows of an (n, d_f) matrix."""
    scores = _scores_batch(em.prototypes, layer, queries)
    ids = np.asarray(em.class_ids)
    return ids[np.argmax(scores, axis=1)]


def readout(
    em: PrototypeMemory,
    layer: EmbedLayer,
    query,
    attention: str = "softabs",
    cfg: SharpenConfig = SharpenConfig(),
) -> np.ndarray:
    """Sharpened attention over the stored classes: a probability vector."""
    scores = score(em, layer, query)
    if attention == "softabs":
        return softabs_attention(scores, cfg)
    if attention == "softmax":
        return softmax_attention(scores, cfg)
    raise ValueError(f"attention must be 'softabs' or 'softmax', got {attention!r}")


@dataclass
class CompressedMemory:
    """Pairs of prototypes superimposed into half as many bound slots.

    pair_map holds, per slot, the (class_id, key_seed) of each member (one
    or two). Only the 32-bit seeds are stored; keys are regenerated on
    demand. Decompressed prototypes are cached after the first request
    because every retrieval is deterministic.
    """

    slots: np.ndarray  # shape (d, ceil(C/2))
    pair_map: tuple[tuple[tuple[int, int], ...], ...]
    _cache: dict | None = field(default=None, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.slots.shape[0]

    @property
    def class_ids(self) -> tuple[int, ...]:
        return tuple(cid for slot in self.pair_map for cid, _ in slot)

    def _slot_and_seed(self, class_id: int) -> tuple[int, int]:
        for slot_index, members in enumerate(self.pair_map):
            for cid, seed in members:
                if cid == int(class_id):
                    return slot_index, seed
        raise UnknownClass(f"class {class_id} not in compressed memory")

    def decompress(self, class_id: int) -> np.ndarray:
        """Unbind one class: correlate its slot with the regenerated key."""
        if self._cache is None:
            self._cache = {}
        cid = int(class_id)
        if cid not in self._cache:
            slot_index, seed = self._slot_and_seed(cid)
            key = key_from_seed(seed, self.dim)
            self._cache[cid] = circ_correlate(self.slots[:, slot_index], key)
        return self._cache[cid]

    def prototype_matrix(self) -> np.ndarray:
        """All decompressed prototypes as columns, in memory order."""
        return np.stack([self.decompress(cid) for cid in self.class_ids], axis=1)


def compress(em: PrototypeMemory, seed_base: int) -> CompressedMemory:
    """Bind consecutive prototype pairs to seeded keys and superimpose them.

    Member i (memory order) gets key seed seed_base + i. An odd class count
    leaves the last slot with a single bound member. Deterministic: the same
    memory and seed_base always produce bit-identical slots.
    """
    if len(em) == 0:
        raise EmptyMemory("nothing to compress")
    slots = []
    pair_map = []
    for start in range(0, len(em), 2):
        members = []
        slot = np.zeros(em.dim)
        for i in range(start, min(start + 2, len(em))):
            seed = int(seed_base) + i
            slot = slot + circ_convolve(em.prototypes[:, i], key_from_seed(seed, em.dim))
            members.append((em.class_ids[i], seed))
        slots.append(slot)
        pair_map.append(tuple(members))
    return CompressedMemory(np.stack(slots, axis=1), tuple(pair_map))


def decompress_class(cm: CompressedMemory, class_id: int) -> np.ndarray:
    """Noisy estimate of one stored prototype (original plus binding noise)."""
    return cm.decompress(class_id)


def predict_compressed(cm: CompressedMemory, layer: EmbedLayer, query) -> int:
    """Like predict, but scoring against the decompressed prototype estimates."""
    scores = _scores_against(cm.prototype_matrix(), layer, query)
    return cm.class_ids[int(np.argmax(scores))]


def predict_compressed_batch(cm: CompressedMemory, layer: EmbedLayer, queries) -> np.ndarray:
    scores = _scores_batch(cm.prototype_matrix(), layer, queries)
    ids = np.asarray(cm.class_ids)
    return ids[np.argmax(scores, axis=1)]
