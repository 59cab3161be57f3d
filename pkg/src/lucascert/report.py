"""Delimited exports and companion figures for scan results.

Every writer takes an optional figure path; when given, a matplotlib
rendering of the same data is saved next to the delimited file so a scan
can be eyeballed as well as machine-read.
"""

from __future__ import annotations

import csv
from pathlib import Path

from .apparition import BoundCheck, RankRecord
from .lehmer import LehmerVerdict, verdicts_to_jsonl


def _figure_axes():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    fig, ax = plt.subplots(figsize=(8, 5))
    return plt, fig, ax


def write_rank_csv(records: list[RankRecord], path: str | Path | None,
                   figure_path: str | Path | None = None) -> None:
    """prime,rank,wall_exponent rows plus an optional rank scatter.

    Either output may be skipped by passing None for its path.
    """
    if path is not None:
        with Path(path).open("w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["prime", "rank", "wall_exponent"])
            for r in records:
                writer.writerow([r.prime, r.rank, r.wall_exponent])
    if figure_path is None:
        return
    plt, fig, ax = _figure_axes()
    xs = [r.prime for r in records]
    ax.scatter(xs, [r.rank for r in records], s=8, label="rank z(p)")
    ax.plot(xs, [p + 1 for p in xs], lw=1, color="gray", label="p + 1")
    ax.set_xlabel("prime p")
    ax.set_ylabel("rank of apparition")
    ax.set_title("Rank of apparition against the p + 1 ceiling")
    ax.legend()
    fig.tight_layout()
    fig.savefig(figure_path, dpi=120)
    plt.close(fig)


def write_wall_csv(limit: int, exceptions: list[int],
                   path: str | Path | None,
                   records: list[RankRecord] | None = None,
                   figure_path: str | Path | None = None) -> None:
    """Exception list as CSV; optional figure of Wall exponents."""
    if path is not None:
        with Path(path).open("w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["prime", "wall_exponent"])
            for p in exceptions:
                writer.writerow([p, ">=2"])
    if figure_path is None or records is None:
        return
    plt, fig, ax = _figure_axes()
    ax.scatter([r.prime for r in records],
               [r.wall_exponent for r in records], s=6)
    ax.set_ylim(0, 3)
    ax.set_xlabel("prime p")
    ax.set_ylabel("Wall exponent")
    ax.set_title(f"Wall exponents for odd primes up to {limit}")
    fig.tight_layout()
    fig.savefig(figure_path, dpi=120)
    plt.close(fig)


def write_inequality_csv(rows: list[dict], path: str | Path,
                         which: str,
                         figure_path: str | Path | None = None) -> None:
    """Per-point inequality results.

    Rows carry point, lhs, rhs_lo, rhs_hi, holds; the figure overlays the
    two sides on a log-x axis so the crossover (if any) is visible.
    """
    path = Path(path)
    fields = ["point", "lhs", "rhs_lo", "rhs_hi", "holds"]
    with path.open("w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=fields)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row[k] for k in fields})
    if figure_path is None or not rows:
        return
    plt, fig, ax = _figure_axes()
    xs = [row["point"] for row in rows]
    ax.plot(xs, [float(row["lhs"]) for row in rows], lw=1, label="left side")
    ax.plot(xs, [float(row["rhs_lo"]) for row in rows], lw=1,
            label="right side (lower)")
    hits = [row["point"] for row in rows if row["holds"]]
    if hits:
        ax.scatter(hits, [float(r["lhs"]) for r in rows if r["holds"]],
                   color="red", s=20, zorder=3, label="satisfied")
    if len(xs) > 1 and xs[-1] / max(xs[0], 1) > 50:
        ax.set_xscale("log")
    ax.set_xlabel("point")
    ax.set_ylabel("value")
    ax.set_title(f"Inequality check: {which}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(figure_path, dpi=120)
    plt.close(fig)


def write_bound_checks_csv(checks: list[BoundCheck], path: str | Path,
                           figure_path: str | Path | None = None) -> None:
    rows = [{
        "point": c.index,
        "lhs": f"{float(c.lhs):.6g}",
        "rhs_lo": str(c.rhs.lo),
        "rhs_hi": str(c.rhs.hi),
        "holds": c.holds,
    } for c in checks]
    write_inequality_csv(rows, path, which="primitive reciprocal-sum bound",
                         figure_path=figure_path)


def write_verdicts_jsonl(verdicts: list[LehmerVerdict], path: str | Path,
                         figure_path: str | Path | None = None) -> None:
    """Verdict stream (one JSON object per line) plus an obstruction chart."""
    Path(path).write_text(verdicts_to_jsonl(verdicts))
    if figure_path is None or not verdicts:
        return
    plt, fig, ax = _figure_axes()
    counts: dict[str, int] = {}
    for v in verdicts:
        key = v.obstruction.value if v.obstruction else (
            "lehmer" if v.is_lehmer else "phi_checked")
        counts[key] = counts.get(key, 0) + 1
    labels = sorted(counts)
    ax.bar(range(len(labels)), [counts[k] for k in labels])
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=30, ha="right")
    ax.set_ylabel("indices")
    ax.set_title(f"Verdict breakdown for indices 2..{verdicts[-1].index}")
    fig.tight_layout()
    fig.savefig(figure_path, dpi=120)
    plt.close(fig)
