"""Result emission: the per-session CSV and optional rendered figures.

CSV columns are fixed: session,classes,accuracy,mean_abs_offdiag_cos,
max_abs_offdiag_cos. Figures are rendered headlessly next to the delimited
output when asked for; matplotlib is imported lazily so plain runs never
pay for it.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .session import SessionResult

CSV_COLUMNS = ("session", "classes", "accuracy", "mean_abs_offdiag_cos", "max_abs_offdiag_cos")


def results_rows(results: list[SessionResult]) -> list[list[str]]:
    rows = []
    for r in results:
        rows.append(
            [
                str(r.session_index),
                str(r.class_count),
                f"{r.accuracy:.6f}",
                f"{r.mean_abs_offdiag_cos:.6f}",
                f"{r.max_abs_offdiag_cos:.6f}",
            ]
        )
    return rows


def write_results_csv(results: list[SessionResult], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        writer.writerows(results_rows(results))


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def save_accuracy_figure(results: list[SessionResult], path, title: str = "Accuracy per session") -> None:
    """Accuracy against the growing class count, one marker per session."""
    plt = _pyplot()
    counts = [r.class_count for r in results]
    accs = [100.0 * r.accuracy for r in results]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(counts, accs, marker="o")
    ax.set_xlabel("classes seen")
    ax.set_ylabel("top-1 accuracy [%]")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_crosscorr_figure(prototypes: np.ndarray, path, title: str = "Prototype cross-correlation") -> None:
    """Heatmap of pairwise cosines between tanh'd prototype columns."""
    plt = _pyplot()
    y = np.tanh(np.asarray(prototypes, dtype=np.float64))
    y = y / np.linalg.norm(y, axis=0)
    cosines = y.T @ y
    fig, ax = plt.subplots(figsize=(5, 4.2))
    im = ax.imshow(cosines, vmin=-1.0, vmax=1.0, cmap="RdBu_r", interpolation="nearest")
    ax.set_xlabel("class index")
    ax.set_ylabel("class index")
    ax.set_title(title)
    fig.colorbar(im, ax=ax, label="cosine")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_accuracy_comparison_figure(
    results_by_label: dict[str, list[SessionResult]], path, title: str = "Accuracy per session"
) -> None:
    """Several runs on one axis, e.g. uncompressed vs compressed memory."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, results in results_by_label.items():
        ax.plot(
            [r.class_count for r in results],
            [100.0 * r.accuracy for r in results],
            marker="o",
            label=label,
        )
    ax.set_xlabel("classes seen")
    ax.set_ylabel("top-1 accuracy [%]")
    ax.set_title(title)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_run_figures(results: list[SessionResult], prototypes: np.ndarray, out_dir) -> list[Path]:
    """Standard report: accuracy curve plus final cross-correlation heatmap."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    acc_path = out_dir / "accuracy.png"
    cc_path = out_dir / "crosscorr_final.png"
    save_accuracy_figure(results, acc_path)
    save_crosscorr_figure(prototypes, cc_path)
    return [acc_path, cc_path]
