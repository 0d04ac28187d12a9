"""Report rendering: delimited files plus matplotlib figures.

Every CLI command that produces a result can write it under a report
directory: a CSV with the raw rows and a PNG giving the picture (digraph
with the witness highlighted, per-round event timeline, benchmark bars).
"""

from __future__ import annotations

import csv
import math
import os
from typing import Iterable, Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import FancyArrowPatch

from .atomicity import AtomicityVerdict
from .model import Arc, Subgraph, SwapDigraph, SwapSystem
from .protocol import SimReport


def _ensure(report_dir: str) -> str:
    os.makedirs(report_dir, exist_ok=True)
    return report_dir


def _layout(vertices: Sequence[str]) -> dict[str, tuple[float, float]]:
    n = len(vertices)
    return {v: (math.cos(2 * math.pi * i / n - math.pi / 2),
                math.sin(2 * math.pi * i / n - math.pi / 2))
            for i, v in enumerate(vertices)}


def draw_digraph(ax, d: SwapDigraph, highlight: Iterable[Arc] = (),
                 title: str = "") -> None:
    pos = _layout(sorted(d.vertices))
    hl = set(highlight)
    for a in d.arcs:
        x0, y0 = pos[a.src]
        x1, y1 = pos[a.dst]
        picked = a in hl
        ax.add_patch(FancyArrowPatch(
            (x0, y0), (x1, y1),
            connectionstyle="arc3,rad=0.12",
            arrowstyle="-|>", mutation_scale=14,
            shrinkA=14, shrinkB=14,
            color="#d62728" if picked else "#b0b0b0",
            linewidth=2.0 if picked else 1.0,
            zorder=2 if picked else 1))
    for v, (x, y) in pos.items():
        ax.scatter([x], [y], s=600, color="#f0f0f0", edgecolor="#404040", zorder=3)
        ax.text(x, y, v, ha="center", va="center", fontsize=9, zorder=4)
    ax.set_xlim(-1.35, 1.35)
    ax.set_ylim(-1.35, 1.35)
    ax.set_aspect("equal")
    ax.axis("off")
    if title:
        ax.set_title(title)


def write_verdict_report(report_dir: str, name: str, system: SwapSystem,
                         verdict: AtomicityVerdict) -> list[str]:
    _ensure(report_dir)
    base = os.path.join(report_dir, name)
    csv_path = base + "_verdict.csv"
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["field", "value"])
        w.writerow(["decision", verdict.decision])
        w.writerow(["arcs", len(system.digraph.arcs)])
        w.writerow(["preferences", system.generator_count()])
        for key in sorted(verdict.stats):
            w.writerow([key, verdict.stats[key]])
        if verdict.witness is not None:
            w.writerow(["witness_arcs",
                        " ".join(f"{a.src}>{a.dst}" for a in verdict.witness.sorted_arcs())])
        if verdict.scc is not None:
            for i, comp in enumerate(verdict.scc.components):
                w.writerow([f"scc_{i}", " ".join(sorted(comp))])
    fig, ax = plt.subplots(figsize=(5, 5))
    witness_arcs = verdict.witness.arc_set if verdict.witness is not None else ()
    label = {"yes": "atomic protocol exists", "no": "no atomic protocol",
             "inconclusive": "inconclusive (budget)"}[verdict.decision]
    draw_digraph(ax, system.digraph, witness_arcs, f"{name}: {label}")
    png_path = base + "_verdict.png"
    fig.savefig(png_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return [csv_path, png_path]


def write_sim_report(report_dir: str, name: str, system: SwapSystem,
                     report: SimReport) -> list[str]:
    _ensure(report_dir)
    base = os.path.join(report_dir, name)
    d = system.digraph
    outcomes_path = base + "_outcomes.csv"
    with open(outcomes_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["party", "strategy", "in_triggered", "out_triggered",
                    "classes", "acceptable"])
        for v in d.vertices:
            o = report.outcomes[v]
            w.writerow([v, report.strategies.get(v, "-"),
                        " ".join(d.in_names(v, o.in_mask)) or "-",
                        " ".join(d.out_names(v, o.out_mask)) or "-",
                        " ".join(sorted(report.classes[v])),
                        report.acceptable[v]])
    trace_path = base + "_trace.csv"
    with open(trace_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["round", "actor", "kind", "detail"])
        for ev in report.events:
            w.writerow(list(ev))

    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(11, 5))
    draw_digraph(ax0, d, report.triggered_arcs(), f"{name}: triggered arcs")
    parties = sorted(d.vertices)
    ypos = {v: i for i, v in enumerate(parties)}
    kinds = sorted({ev.kind for ev in report.events})
    palette = plt.cm.tab10.colors
    color = {k: palette[i % len(palette)] for i, k in enumerate(kinds)}
    for ev in report.events:
        ax1.scatter(ev.round, ypos[ev.actor], color=color[ev.kind], s=28)
    ax1.set_yticks(range(len(parties)), parties)
    ax1.set_xlabel("round")
    ax1.set_title("event timeline")
    for k in kinds:
        ax1.scatter([], [], color=color[k], label=k)
    ax1.legend(loc="upper right", fontsize=7)
    png_path = base + "_sim.png"
    fig.savefig(png_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return [outcomes_path, trace_path, png_path]


def write_bench_report(report_dir: str, rows: Sequence[dict],
                       name: str = "bench") -> list[str]:
    """Rows carry: system, runtime (mean seconds), arcs, preferences, decision."""
    _ensure(report_dir)
    base = os.path.join(report_dir, name)
    csv_path = base + ".csv"
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["system", "runtime_s", "arcs", "preferences", "protocol"])
        for r in rows:
            w.writerow([r["system"], f"{r['runtime_s']:.4f}", r["arcs"],
                        r["preferences"], r["protocol"]])
    fig, ax = plt.subplots(figsize=(6, 4))
    names = [r["system"] for r in rows]
    times = [r["runtime_s"] for r in rows]
    bars = ax.bar(names, times, color=["#2ca02c" if r["protocol"] == "Yes"
                                       else "#d62728" for r in rows])
    for bar, r in zip(bars, rows):
        ax.text(bar.get_x() + bar.get_width() / 2, bar.get_height(),
                r["protocol"], ha="center", va="bottom", fontsize=8)
    ax.set_ylabel("mean runtime (s)")
    ax.set_title("decision benchmark")
    if times and max(times) > 0:
        ax.set_yscale("log")
    png_path = base + ".png"
    fig.savefig(png_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return [csv_path, png_path]
