"""Figures written next to the CSV outputs.

Uses the object-oriented matplotlib API with the Agg canvas so no display
or global pyplot state is involved.
"""

from __future__ import annotations

from pathlib import Path

from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .sim import SimResult

# PNG metadata without a Software tag keeps files byte-stable across versions
_PNG_META = {"Software": None}


def _figure(width: float = 6.4, height: float = 4.0) -> Figure:
    fig = Figure(figsize=(width, height), dpi=100)
    FigureCanvasAgg(fig)
    return fig


def _save(fig: Figure, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, metadata=_PNG_META)
    return path


def schedule_chart(result: SimResult, path: Path) -> Path:
    """Gantt chart of work segments and battery swaps per machine."""
    robots = len(result.per_robot_busy_hours)
    fig = _figure(7.0, max(2.5, 0.35 * robots + 1.5))
    ax = fig.add_subplot()
    for seg in result.segments:
        ax.broken_barh([(seg.start, seg.end - seg.start)], (seg.robot - 0.4, 0.8),
                       facecolors="tab:green" if seg.strip % 2 == 0 else "tab:olive", edgecolor="k", linewidth=0.3)
    for ev in result.swap_events:
        ax.broken_barh([(ev.time, max(ev.duration, 1e-3 * max(result.makespan, 1.0)))], (ev.robot - 0.4, 0.8),
                       facecolors="tab:red")
    ax.set_xlabel("time (h)")
    ax.set_ylabel("machine")
    ax.set_yticks(range(robots))
    ax.set_title(f"makespan {result.makespan:.3f} h, {len(result.swap_events)} swaps")
    return _save(fig, path)


def cost_chart(rows: list[tuple[str, float]], path: Path) -> Path:
    fig = _figure()
    ax = fig.add_subplot()
    labels = [r[0] for r in rows]
    ax.barh(labels, [r[1] for r in rows], color="tab:blue")
    ax.set_xlabel("USD/h")
    ax.invert_yaxis()
    return _save(fig, path)


def convergence_chart(history: list[float], path: Path) -> Path:
    fig = _figure()
    ax = fig.add_subplot()
    ax.plot(range(1, len(history) + 1), history, marker=".", lw=1)
    ax.set_xlabel("iteration")
    ax.set_ylabel("best objective")
    if history and min(history) > 0 and max(history) / min(history) > 100:
        ax.set_yscale("log")
    return _save(fig, path)


def makespan_histogram(values: list[float], path: Path, bins: int = 30) -> Path:
    fig = _figure()
    ax = fig.add_subplot()
    ax.hist(values, bins=bins, color="tab:gray", edgecolor="k", linewidth=0.3)
    ax.set_xlabel("makespan (h)")
    ax.set_ylabel("runs")
    return _save(fig, path)
