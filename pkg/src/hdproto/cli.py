"""Command line interface.

Subcommands:
  run            full experiment from a config file, per-session CSV output
  gradcheck      finite-difference verification of both analytic gradients
  synth          generate synthetic clusters into embedding files
  compressbench  uncompressed vs compressed accuracy on the same config
  inspect        embedding-file header summary

Failures print one line `<ErrorCategory>: <message>` to stderr and exit
with a category-specific code:
  1 gradient check above tolerance, 2 usage, 3 configuration,
  4 embedding-file format, 5 data contract, 6 numerical divergence,
  70 unexpected internal error.
Set HDPROTO_LOG=info or =debug for progress logging.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import errors
from .checkpoint import save_checkpoint
from .config import load_config, load_synth_spec
from .emio import read_header, write_embeddings
from .gradcheck import TOLERANCE, run_gradcheck
from .report import (
    CSV_COLUMNS,
    render_run_figures,
    results_rows,
    save_accuracy_comparison_figure,
    write_results_csv,
)
from .session import iter_experiment
from .synth import generate_synthetic

log = logging.getLogger("hdproto")

_EXIT_BY_ERROR = {
    errors.ConfigError: 3,
    errors.BadMagic: 4,
    errors.VersionUnsupported: 4,
    errors.TruncatedFile: 4,
    errors.NonFiniteLoss: 6,
}
_EXIT_DATA_CONTRACT = 5


def _exit_code_for(exc: errors.HdprotoError) -> int:
    for klass, code in _EXIT_BY_ERROR.items():
        if isinstance(exc, klass):
            return code
    return _EXIT_DATA_CONTRACT


def _setup_logging() -> None:
    level = {"debug": logging.DEBUG, "info": logging.INFO}.get(
        os.environ.get("HDPROTO_LOG", "").lower(), logging.WARNING
    )
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hdproto",
        description="Class-incremental prototype memory over a fixed hyperdimensional embedding.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a full experiment and emit per-session CSV")
    p_run.add_argument("--config", required=True, help="YAML experiment config")
    p_run.add_argument("--mode", type=int, choices=(1, 2, 3), help="override the config's mode")
    p_run.add_argument("--out", help="CSV output path (default: stdout)")
    p_run.add_argument("--figures", metavar="DIR", help="also render figures into DIR")
    p_run.add_argument("--checkpoint", metavar="NPZ", help="save the final engine state")

    p_grad = sub.add_parser("gradcheck", help="finite-difference gradient verification")
    p_grad.add_argument("--seed", type=int, default=0)

    p_synth = sub.add_parser("synth", help="generate synthetic clusters into embedding files")
    p_synth.add_argument("--spec", required=True, help="YAML synthetic-cluster spec")
    p_synth.add_argument("--out", required=True, help="train embedding file")
    p_synth.add_argument(
        "--eval-out",
        help="evaluation embedding file (default: <out> with an .eval suffix before the extension)",
    )

    p_bench = sub.add_parser("compressbench", help="accuracy with and without 2x memory compression")
    p_bench.add_argument("--config", required=True)
    p_bench.add_argument("--mode", type=int, choices=(1, 2, 3))
    p_bench.add_argument("--out", help="CSV output path (default: stdout)")
    p_bench.add_argument("--figures", metavar="DIR", help="also render a comparison figure into DIR")

    p_inspect = sub.add_parser("inspect", help="print an embedding file's header summary")
    p_inspect.add_argument("file")

    return parser


def _cmd_run(args) -> int:
    cfg = load_config(args.config, mode_override=args.mode)
    dataset = cfg.load_dataset()
    log.info("run: mode %d, d=%d, %d sessions", cfg.mode, cfg.d, cfg.schedule.session_count)
    results = []
    final_state = None
    for state, result in iter_experiment(dataset, cfg.schedule, cfg.mode_config(), cfg.seed, cfg.d):
        log.info(
            "session %d: %d classes, accuracy %.4f",
            result.session_index, result.class_count, result.accuracy,
        )
        results.append(result)
        final_state = state
    if args.out:
        write_results_csv(results, args.out)
    else:
        print(",".join(CSV_COLUMNS))
        for row in results_rows(results):
            print(",".join(row))
    if args.figures:
        paths = render_run_figures(results, final_state.em.prototypes, args.figures)
        log.info("figures: %s", ", ".join(str(p) for p in paths))
    if args.checkpoint:
        save_checkpoint(args.checkpoint, final_state)
        log.info("checkpoint: %s", args.checkpoint)
    return 0


def _cmd_gradcheck(args) -> int:
    report = run_gradcheck(args.seed)
    worst = max(report.values())
    for name, err in report.items():
        print(f"{name}: max relative error {err:.3e}")
    print(f"overall: {worst:.3e} (tolerance {TOLERANCE:.0e})")
    return 0 if worst < TOLERANCE else 1


def _cmd_synth(args) -> int:
    spec = load_synth_spec(args.spec)
    dataset = generate_synthetic(spec)
    out = Path(args.out)
    eval_out = Path(args.eval_out) if args.eval_out else out.with_suffix(".eval" + out.suffix)
    write_embeddings(out, dataset.train_features, dataset.train_labels)
    write_embeddings(eval_out, dataset.eval_features, dataset.eval_labels)
    print(f"train: {out} ({dataset.train_labels.shape[0]} records)")
    print(f"eval:  {eval_out} ({dataset.eval_labels.shape[0]} records)")
    return 0


def _cmd_compressbench(args) -> int:
    cfg = load_config(args.config, mode_override=args.mode)
    dataset = cfg.load_dataset()
    runs = {}
    for label, compressed in (("uncompressed", False), ("compressed", True)):
        mode_cfg = replace(cfg.mode_config(), compress_em=compressed)
        runs[label] = [r for _, r in iter_experiment(dataset, cfg.schedule, mode_cfg, cfg.seed, cfg.d)]
        log.info("%s final accuracy %.4f", label, runs[label][-1].accuracy)
    header = "session,classes,accuracy_uncompressed,accuracy_compressed,drop_points"
    lines = [header]
    for plain, packed in zip(runs["uncompressed"], runs["compressed"]):
        drop = 100.0 * (plain.accuracy - packed.accuracy)
        lines.append(
            f"{plain.session_index},{plain.class_count},"
            f"{plain.accuracy:.6f},{packed.accuracy:.6f},{drop:.3f}"
        )
    text = "\n".join(lines)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    if args.figures:
        out_dir = Path(args.figures)
        out_dir.mkdir(parents=True, exist_ok=True)
        save_accuracy_comparison_figure(
            runs, out_dir / "compressbench.png", title="Memory compression"
        )
    return 0


def _cmd_inspect(args) -> int:
    header = read_header(args.file)
    print(f"file: {args.file}")
    print(f"version: {header['version']}")
    print(f"d_f: {header['d_f']}")
    print(f"samples: {header['sample_count']}")
    print(f"bytes: {header['file_size']}")
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "gradcheck": _cmd_gradcheck,
    "synth": _cmd_synth,
    "compressbench": _cmd_compressbench,
    "inspect": _cmd_inspect,
}


def main(argv=None) -> int:
    _setup_logging()
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except errors.HdprotoError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return _exit_code_for(exc)
    except FileNotFoundError as exc:
        print(f"FileNotFound: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # pragma: no cover - defensive
        print(f"InternalError: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 70


if __name__ == "__main__":
    raise SystemExit(main())
