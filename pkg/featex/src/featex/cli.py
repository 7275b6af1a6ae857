"""Command line interface for the export pipeline.

  featex manifest  derive a split manifest from a class-per-directory dataset
  featex export    embed the assigned samples into train/eval embedding files

Failures print one `ErrorCategory: message` line to stderr; exit codes:
2 usage, 3 manifest problems, 4 missing data, 70 unexpected.
"""

from __future__ import annotations

import argparse
import sys

from .backbone import pretrained_backbone, random_frozen_backbone
from .errors import ManifestMismatch, MissingData
from .export import export
from .manifest import build_manifest, load_manifest, omniglot_style_manifest, save_manifest


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="featex",
        description="Export image datasets to embedding files through a frozen backbone.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_man = sub.add_parser("manifest", help="derive and save a split manifest")
    p_man.add_argument("--dataset", required=True, help="class-per-subdirectory image root")
    p_man.add_argument("--out", required=True, help="manifest YAML path")
    p_man.add_argument(
        "--style",
        choices=("omniglot", "custom"),
        default="custom",
        help="omniglot: 1200 base + 9 x 47-way with the 14/6 and 5/6 sample split",
    )
    p_man.add_argument("--base-count", type=int, default=60)
    p_man.add_argument("--session-count", type=int, default=8)
    p_man.add_argument("--ways", type=int, default=5)
    p_man.add_argument("--base-support", type=int, default=5)
    p_man.add_argument("--base-query", type=int, default=5)
    p_man.add_argument("--novel-support", type=int, default=5)
    p_man.add_argument("--novel-query", type=int, default=5)
    p_man.add_argument("--image-size", type=int, default=32)

    p_exp = sub.add_parser("export", help="embed assigned samples into embedding files")
    p_exp.add_argument("--dataset", required=True)
    p_exp.add_argument("--manifest", required=True)
    p_exp.add_argument("--backbone", choices=("random-frozen", "pretrained"), default="random-frozen")
    p_exp.add_argument("--seed", type=int, default=0, help="weight seed for random-frozen")
    p_exp.add_argument("--weights", help="state-dict file for the pretrained backbone")
    p_exp.add_argument("--channels", type=int, nargs="+", default=(16, 32))
    p_exp.add_argument("--out-train", required=True)
    p_exp.add_argument("--out-eval", required=True)

    return parser


def _cmd_manifest(args) -> int:
    size = (args.image_size, args.image_size)
    if args.style == "omniglot":
        manifest = omniglot_style_manifest(args.dataset, image_size=size)
    else:
        manifest = build_manifest(
            args.dataset,
            base_count=args.base_count,
            session_count=args.session_count,
            ways=args.ways,
            base_support=args.base_support,
            base_query=args.base_query,
            novel_support=args.novel_support,
            novel_query=args.novel_query,
            image_size=size,
        )
    save_manifest(manifest, args.out)
    counts = manifest.session_class_counts()
    print(f"manifest: {args.out}")
    print(f"labels: {len(manifest.class_order())}")
    print(f"session class counts: {','.join(str(c) for c in counts)}")
    return 0


def _cmd_export(args) -> int:
    manifest = load_manifest(args.manifest)
    channels = tuple(args.channels)
    in_channels = 1 if manifest.grayscale else 3
    if args.backbone == "random-frozen":
        net = random_frozen_backbone(args.seed, channels, in_channels)
    else:
        if not args.weights:
            raise ManifestMismatch("--backbone pretrained requires --weights")
        net = pretrained_backbone(args.weights, channels, in_channels)
    summary = export(args.dataset, manifest, net, args.out_train, args.out_eval)
    print(f"train: {args.out_train} ({summary['train_records']} records)")
    print(f"eval:  {args.out_eval} ({summary['eval_records']} records)")
    print(f"labels: {summary['labels']}")
    print(f"d_f: {summary['feature_dim']}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return {"manifest": _cmd_manifest, "export": _cmd_export}[args.command](args)
    except ManifestMismatch as exc:
        print(f"ManifestMismatch: {exc}", file=sys.stderr)
        return 3
    except MissingData as exc:
        print(f"MissingData: {exc}", file=sys.stderr)
        return 4
    except Exception as exc:  # pragma: no cover - defensive
        print(f"InternalError: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 70


if __name__ == "__main__":
    raise SystemExit(main())
