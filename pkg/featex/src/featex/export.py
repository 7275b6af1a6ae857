"""The export pipeline: images -> frozen backbone -> embedding files.

Records land sorted by (label, sample index), so two exports with the same
manifest, backbone, and preprocessing are byte-identical.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

from .backbone import ConvBackbone, extract_features
from .errors import ManifestMismatch, MissingData
from .manifest import SplitManifest, list_samples
from .writer import write_embedding_file


def load_image(path, manifest: SplitManifest) -> np.ndarray:
    """Decode, resize, and normalize one image per the manifest's constants."""
    with Image.open(path) as img:
        img = img.convert("L" if manifest.grayscale else "RGB")
        img = img.resize(manifest.image_size, Image.BILINEAR)
        data = np.asarray(img, dtype=np.float32) / 255.0
    if manifest.grayscale:
        data = data[None, :, :]
    else:
        data = data.transpose(2, 0, 1)
    return (data - manifest.normalize_mean) / manifest.normalize_std


def _embed_paths(paths, manifest, backbone, batch_size) -> np.ndarray:
    chunks = []
    for start in range(0, len(paths), batch_size):
        batch = np.stack([load_image(p, manifest) for p in paths[start : start + batch_size]])
        chunks.append(extract_features(backbone, batch, batch_size))
    if not chunks:
        return np.zeros((0, backbone.feature_dim), np.float32)
    return np.concatenate(chunks, axis=0)


def export(
    dataset_dir,
    manifest: SplitManifest,
    backbone: ConvBackbone,
    out_train,
    out_eval,
    batch_size: int = 256,
) -> dict:
    """Embed every assigned sample and write the train and eval files.

    Returns a summary dict (label count, record counts, feature dim).
    """
    expected_channels = 1 if manifest.grayscale else 3
    first_conv = next(m for m in backbone.features if hasattr(m, "in_channels"))
    if first_conv.in_channels != expected_channels:
        raise ManifestMismatch(
            f"backbone expects {first_conv.in_channels} channel(s), "
            f"manifest provides {expected_channels}"
        )
    root = Path(dataset_dir)
    if not root.is_dir():
        raise MissingData(f"dataset directory {root} does not exist")

    labels = manifest.labels()
    train_paths, train_labels = [], []
    eval_paths, eval_labels = [], []
    for name in manifest.class_order():  # ascending label order
        class_dir = root / name
        if not class_dir.is_dir():
            raise MissingData(f"class directory missing: {class_dir}")
        samples = list_samples(class_dir)
        assignment = manifest.assignments[name]
        highest = max(assignment.support + assignment.query)
        if highest >= len(samples):
            raise MissingData(
                f"class {name}: assignment needs sample index {highest}, "
                f"directory has {len(samples)} images"
            )
        label = labels[name]
        train_paths.extend(samples[i] for i in assignment.support)
        train_labels.extend([label] * len(assignment.support))
        eval_paths.extend(samples[i] for i in assignment.query)
        eval_labels.extend([label] * len(assignment.query))

    train_x = _embed_paths(train_paths, manifest, backbone, batch_size)
    eval_x = _embed_paths(eval_paths, manifest, backbone, batch_size)
    write_embedding_file(out_train, train_x, np.asarray(train_labels))
    write_embedding_file(out_eval, eval_x, np.asarray(eval_labels))
    return {
        "labels": len(labels),
        "train_records": train_x.shape[0],
        "eval_records": eval_x.shape[0],
        "feature_dim": backbone.feature_dim,
    }
