import hashlib

import numpy as np
import pytest

from featex.backbone import ConvBackbone, pretrained_backbone, random_frozen_backbone
from featex.errors import ManifestMismatch, MissingData
from featex.export import export, load_image
from featex.manifest import build_manifest, list_samples
from featex.writer import read_embedding_file, write_embedding_file

from util import make_image_dataset


@pytest.fixture()
def small_setup(tmp_path):
    root = make_image_dataset(tmp_path / "data", 8, 10, seed=1)
    manifest = build_manifest(
        root,
        base_count=4, session_count=2, ways=2,
        base_support=5, base_query=3, novel_support=3, novel_query=2,
    )
    return root, manifest


def test_export_shapes_and_labels(small_setup, tmp_path):
    root, manifest = small_setup
    net = random_frozen_backbone(0)
    summary = export(root, manifest, net, tmp_path / "t.cfse", tmp_path / "e.cfse")
    assert summary == {
        "labels": 8,
        "train_records": 4 * 5 + 4 * 3,
        "eval_records": 4 * 3 + 4 * 2,
        "feature_dim": 32,
    }
    x, y = read_embedding_file(tmp_path / "t.cfse")
    assert x.shape == (32, 32)
    assert x.dtype == np.float32
    np.testing.assert_array_equal(np.unique(y), np.arange(8))


def test_export_records_sorted_by_label(small_setup, tmp_path):
    root, manifest = small_setup
    net = random_frozen_backbone(0)
    export(root, manifest, net, tmp_path / "t.cfse", tmp_path / "e.cfse")
    for path in (tmp_path / "t.cfse", tmp_path / "e.cfse"):
        _, y = read_embedding_file(path)
        assert np.all(np.diff(y) >= 0)


def test_export_deterministic_across_runs(small_setup, tmp_path):
    root, manifest = small_setup
    digests = []
    for run in range(2):
        net = random_frozen_backbone(123)
        export(root, manifest, net, tmp_path / f"t{run}.cfse", tmp_path / f"e{run}.cfse")
        digests.append(
            (
                hashlib.sha256((tmp_path / f"t{run}.cfse").read_bytes()).hexdigest(),
                hashlib.sha256((tmp_path / f"e{run}.cfse").read_bytes()).hexdigest(),
            )
        )
    assert digests[0] == digests[1]


def test_export_seed_changes_output(small_setup, tmp_path):
    root, manifest = small_setup
    export(root, manifest, random_frozen_backbone(1), tmp_path / "a.cfse", tmp_path / "ae.cfse")
    export(root, manifest, random_frozen_backbone(2), tmp_path / "b.cfse", tmp_path / "be.cfse")
    assert (tmp_path / "a.cfse").read_bytes() != (tmp_path / "b.cfse").read_bytes()


def test_export_missing_class_directory(small_setup, tmp_path):
    root, manifest = small_setup
    victim = root / manifest.base_classes[0]
    for f in victim.iterdir():
        f.unlink()
    victim.rmdir()
    with pytest.raises(MissingData):
        export(root, manifest, random_frozen_backbone(0), tmp_path / "t.cfse", tmp_path / "e.cfse")


def test_export_missing_samples(small_setup, tmp_path):
    root, manifest = small_setup
    victim = root / manifest.base_classes[0]
    for f in sorted(victim.iterdir())[5:]:
        f.unlink()
    with pytest.raises(MissingData):
        export(root, manifest, random_frozen_backbone(0), tmp_path / "t.cfse", tmp_path / "e.cfse")


def test_export_channel_mismatch(small_setup, tmp_path):
    root, manifest = small_setup
    rgb_net = random_frozen_backbone(0, in_channels=3)
    with pytest.raises(ManifestMismatch):
        export(root, manifest, rgb_net, tmp_path / "t.cfse", tmp_path / "e.cfse")


def test_load_image_pins_preprocessing(small_setup):
    root, manifest = small_setup
    sample = list_samples(root / manifest.base_classes[0])[0]
    img = load_image(sample, manifest)
    assert img.shape == (1, 32, 32)
    assert img.dtype == np.float32
    # normalization maps [0, 1] pixels to [-1, 1]
    assert img.min() >= -1.0 and img.max() <= 1.0


def test_pretrained_backbone_roundtrip(small_setup, tmp_path):
    import torch

    root, manifest = small_setup
    net = random_frozen_backbone(55)
    weights = tmp_path / "weights.pt"
    torch.save(net.state_dict(), weights)
    reloaded = pretrained_backbone(weights)
    export(root, manifest, net, tmp_path / "a.cfse", tmp_path / "ae.cfse")
    export(root, manifest, reloaded, tmp_path / "b.cfse", tmp_path / "be.cfse")
    assert (tmp_path / "a.cfse").read_bytes() == (tmp_path / "b.cfse").read_bytes()


def test_pretrained_backbone_missing_weights(tmp_path):
    with pytest.raises(MissingData):
        pretrained_backbone(tmp_path / "nope.pt")


def test_writer_reader_roundtrip(tmp_path):
    rng = np.random.default_rng(0)
    x = rng.normal(size=(9, 7)).astype(np.float32)
    y = rng.integers(0, 5, size=9)
    path = tmp_path / "w.cfse"
    write_embedding_file(path, x, y)
    rx, ry = read_embedding_file(path)
    np.testing.assert_array_equal(rx, x)
    np.testing.assert_array_equal(ry, y.astype(np.uint32))
    assert path.stat().st_size == 20 + 9 * (4 + 7 * 4)


def test_backbone_feature_dim_tracks_channels():
    assert ConvBackbone((8, 24)).feature_dim == 24
    assert random_frozen_backbone(0, channels=(4,)).feature_dim == 4
