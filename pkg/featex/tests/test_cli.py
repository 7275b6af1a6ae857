import numpy as np

from featex.cli import main
from featex.manifest import load_manifest
from featex.writer import read_embedding_file

from util import make_image_dataset


def test_manifest_and_export_pipeline(tmp_path, capsys):
    root = make_image_dataset(tmp_path / "data", 10, 12, seed=2)
    manifest_path = tmp_path / "manifest.yaml"
    rc = main(
        [
            "manifest",
            "--dataset", str(root),
            "--out", str(manifest_path),
            "--base-count", "6",
            "--session-count", "2",
            "--ways", "2",
            "--base-support", "6",
            "--base-query", "4",
            "--novel-support", "3",
            "--novel-query", "2",
        ]
    )
    assert rc == 0
    out = capsys.readouterr().out
    assert "labels: 10" in out
    assert "session class counts: 6,8,10" in out
    manifest = load_manifest(manifest_path)
    assert manifest.session_class_counts() == [6, 8, 10]

    rc = main(
        [
            "export",
            "--dataset", str(root),
            "--manifest", str(manifest_path),
            "--backbone", "random-frozen",
            "--seed", "5",
            "--channels", "8", "16",
            "--out-train", str(tmp_path / "t.cfse"),
            "--out-eval", str(tmp_path / "e.cfse"),
        ]
    )
    assert rc == 0
    out = capsys.readouterr().out
    assert "d_f: 16" in out
    x, y = read_embedding_file(tmp_path / "t.cfse")
    assert x.shape == (6 * 6 + 4 * 3, 16)
    np.testing.assert_array_equal(np.unique(y), np.arange(10))


def test_omniglot_style_flag(tmp_path, capsys):
    # full ratios need 20 samples per class; tiny class count keeps it fast
    root = make_image_dataset(tmp_path / "data", 8, 20, seed=3)
    rc = main(
        [
            "manifest",
            "--dataset", str(root),
            "--out", str(tmp_path / "m.yaml"),
            "--style", "omniglot",
        ]
    )
    assert rc == 4  # 1623 classes are not there
    assert "MissingData" in capsys.readouterr().err


def test_missing_dataset_exits_4(tmp_path, capsys):
    rc = main(
        ["manifest", "--dataset", str(tmp_path / "nope"), "--out", str(tmp_path / "m.yaml")]
    )
    assert rc == 4
    assert capsys.readouterr().err.startswith("MissingData:")


def test_pretrained_without_weights_exits_3(tmp_path, capsys):
    root = make_image_dataset(tmp_path / "data", 4, 8, seed=4)
    manifest_path = tmp_path / "m.yaml"
    main(
        [
            "manifest", "--dataset", str(root), "--out", str(manifest_path),
            "--base-count", "2", "--session-count", "1", "--ways", "2",
            "--base-support", "4", "--base-query", "2",
            "--novel-support", "3", "--novel-query", "2",
        ]
    )
    capsys.readouterr()
    rc = main(
        [
            "export",
            "--dataset", str(root),
            "--manifest", str(manifest_path),
            "--backbone", "pretrained",
            "--out-train", str(tmp_path / "t.cfse"),
            "--out-eval", str(tmp_path / "e.cfse"),
        ]
    )
    assert rc == 3
    assert capsys.readouterr().err.startswith("ManifestMismatch:")
