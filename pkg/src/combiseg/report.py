"""CSV and figure output for evaluation, benchmark and sweep reports."""
from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

import numpy as np  # noqa: E402

from .evaluation import EvalReport, SweepResult  # noqa: E402


def write_eval_csv(report: EvalReport, path) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["image", "gt_lines", "pred_lines", "matched", "loss", "millis"])
        for s in report.samples:
            out.writerow([s.image, s.gt_lines, s.pred_lines, s.matched_lines,
                          s.loss, f"{s.millis:.3f}"])


def save_eval_figure(report: EvalReport, path) -> None:
    """Histogram of per-sample losses with the aggregate numbers on top."""
    losses = [s.loss for s in report.samples]
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.hist(losses, bins=range(max(losses) + 2), align="left", color="#4878d0",
            edgecolor="black")
    ax.set_xlabel("loss per sample")
    ax.set_ylabel("samples")
    ax.set_title(f"accuracy {report.accuracy:.3f}, {report.pt_ms:.3f} ms/image, "
                 f"{report.sample_count} samples / {report.line_count} lines")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_bench_csv(times_ms, path) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["run", "millis"])
        for i, ms in enumerate(times_ms):
            out.writerow([i, f"{ms:.3f}"])


def save_bench_figure(times_ms, path) -> None:
    times = np.asarray(list(times_ms), float)
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.hist(times, bins=min(30, max(5, times.size // 3)), color="#6acc64",
            edgecolor="black")
    ax.axvline(times.mean(), color="black", linestyle="--",
               label=f"mean {times.mean():.2f} ms")
    ax.set_xlabel("per-image time (ms)")
    ax.set_ylabel("runs")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _param_row(p):
    return [p.p1, p.p2, p.p3, p.p4, p.p5, p.p6, p.p7, p.p8]


def write_sweep_csv(result: SweepResult, path) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["stage", "p1", "p2", "p3", "p4", "p5", "p6", "p7", "p8",
                      "accuracy", "pt_ms"])
        for stage, entries in (("1", result.stage1), ("2", result.stage2)):
            for e in entries:
                out.writerow([stage, *_param_row(e.params),
                              f"{e.accuracy:.5f}", f"{e.pt_ms:.3f}"])


def save_sweep_figure(result: SweepResult, path) -> None:
    """Accuracy over the ranked morphology grid, plus the p7 scan if run."""
    ncols = 2 if result.stage2 else 1
    fig, axes = plt.subplots(1, ncols, figsize=(5 * ncols, 3.5), squeeze=False)
    ax = axes[0][0]
    ax.plot([e.accuracy for e in result.stage1], marker=".", color="#4878d0")
    ax.set_xlabel("grid combination (ranked)")
    ax.set_ylabel("accuracy")
    ax.set_title("morphology grid")
    if result.stage2:
        ax = axes[0][1]
        by_p7 = sorted(result.stage2, key=lambda e: e.params.p7)
        ax.plot([e.params.p7 for e in by_p7], [e.accuracy for e in by_p7],
                marker="o", color="#6acc64")
        ax.set_xlabel("peak threshold")
        ax.set_ylabel("accuracy")
        ax.set_title("peak threshold scan")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
