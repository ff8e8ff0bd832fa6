"""Run reports: fixed-key JSON dicts, per-level CSV, and figures."""

from __future__ import annotations

import csv
from pathlib import Path

from .parse_core import Parse, RunStats

REPORT_KEYS = (
    "n",
    "epsilon",
    "phrases",
    "z",
    "ratio",
    "schedule_length",
    "passes",
    "bytes_read",
    "blocks_read",
    "candidates_max",
    "retries",
    "seed",
    "elapsed_ms",
)


def build_run_report(parse: Parse, stats: RunStats, *, z: int | None = None) -> dict:
    """Flat dict with exactly REPORT_KEYS, in that order.

    z and ratio stay null unless an exact phrase count was computed.
    """
    io = stats.io
    report = {
        "n": stats.n,
        "epsilon": stats.epsilon,
        "phrases": len(parse.phrases),
        "z": z,
        "ratio": (len(parse.phrases) / z) if z else None,
        "schedule_length": stats.schedule_length,
        "passes": io.passes if io else 0,
        "bytes_read": io.bytes_read if io else 0,
        "blocks_read": io.blocks_read if io else 0,
        "candidates_max": stats.candidates_max,
        "retries": stats.retries,
        "seed": stats.seed,
        "elapsed_ms": stats.elapsed_ms,
    }
    assert tuple(report) == REPORT_KEYS
    return report


def write_levels_csv(path: str | Path, stats: RunStats) -> None:
    """One row per schedule length: interval/block/candidate counts."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(
            ["length", "intervals", "blocks", "candidates", "pass_run",
             "scan_bytes", "emitted"]
        )
        for row in stats.levels:
            w.writerow(
                [row.length, row.intervals, row.blocks, row.candidates,
                 int(row.pass_run), row.scan_bytes, row.emitted]
            )


def render_figures(outdir: str | Path, stats: RunStats,
                   parse: Parse | None = None) -> list[Path]:
    """Render run figures as PNG files under outdir; returns their paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    lengths = [row.length for row in stats.levels]

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogy(range(1, len(lengths) + 1), lengths, marker=".")
    ax.set_xlabel("level")
    ax.set_ylabel("block length")
    ax.set_title(f"length schedule (n={stats.n}, eps={stats.epsilon:g})")
    fig.tight_layout()
    p = outdir / "schedule.png"
    fig.savefig(p)
    plt.close(fig)
    written.append(p)

    fig, ax = plt.subplots(figsize=(6, 4))
    xs = range(1, len(stats.levels) + 1)
    ax.plot(xs, [row.candidates for row in stats.levels], marker=".",
            label="candidate blocks")
    ax.plot(xs, [row.emitted for row in stats.levels], marker=".",
            label="phrases emitted")
    passes = [x for x, row in zip(xs, stats.levels) if row.pass_run]
    for x in passes:
        ax.axvline(x, color="0.85", zorder=0)
    ax.set_xlabel("level")
    ax.set_ylabel("count")
    ax.set_title("per-level work (shaded levels ran a fingerprint pass)")
    ax.legend()
    fig.tight_layout()
    p = outdir / "levels.png"
    fig.savefig(p)
    plt.close(fig)
    written.append(p)

    if parse is not None and parse.phrases:
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.hist([ph.length for ph in parse.phrases],
                bins=min(50, max(len(parse.phrases) // 2, 1)))
        ax.set_xlabel("phrase length")
        ax.set_ylabel("phrases")
        ax.set_title(f"phrase lengths ({len(parse.phrases)} phrases)")
        fig.tight_layout()
        p = outdir / "phrases.png"
        fig.savefig(p)
        plt.close(fig)
        written.append(p)
    return written
