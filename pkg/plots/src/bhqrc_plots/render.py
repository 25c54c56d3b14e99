"""Deterministic figure rendering from benchmark CSV tables.

Every renderer is a pure function of its input file: fixed style, no
timestamps or software metadata in the output, so rerunning on unchanged
inputs reproduces the image byte for byte.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

#: regime line colors follow the benchmark's legend convention
REGIME_COLORS = {1e-3: "tab:green", 0.1: "tab:red", 1e3: "tab:blue"}
FALLBACK_CYCLE = ("tab:purple", "tab:orange", "tab:brown", "tab:gray",
                  "tab:olive", "tab:cyan", "tab:pink")

PLOT_KINDS = ("line", "heatmap", "bar", "histogram")

#: strip nondeterministic PNG metadata
SAVE_KWARGS = {"metadata": {"Software": None}}


@dataclass(frozen=True)
class PlotSpec:
    """One figure: input table, axis mappings, and the output path."""

    kind: str
    input: str
    output: str
    x: str | None = None
    y: str | None = None
    value: str | None = None        # heatmap cell column
    group: str | None = None        # one line/bar series per group value
    error: str | None = None        # error-bar column
    logx: bool = False
    title: str = ""
    thresholds: tuple[float, ...] = (0.7, 0.8, 0.9)  # heatmap shading levels

    def __post_init__(self):
        if self.kind not in PLOT_KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}")


def load_spec(path) -> PlotSpec:
    with open(path, "r", encoding="utf-8") as fh:
        document = json.load(fh)
    allowed = {"kind", "input", "output", "x", "y", "value", "group", "error",
               "logx", "title", "thresholds"}
    unknown = set(document) - allowed
    if unknown:
        raise ValueError(f"unknown keys {sorted(unknown)} in plot spec")
    if "thresholds" in document:
        document["thresholds"] = tuple(document["thresholds"])
    return PlotSpec(**document)


def read_table(path) -> dict[str, list[str]]:
    """CSV file as a column dict; raises on empty tables."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError(f"no data rows in {path}")
    return {name: [row[name] for row in rows] for name in rows[0]}


def _require_columns(table: dict, names, path) -> None:
    missing = [n for n in names if n and n not in table]
    if missing:
        raise ValueError(f"columns {missing} not present in {path}")


def _floats(values) -> np.ndarray:
    return np.array([float(v) if v not in ("", None) else np.nan for v in values])


def _group_color(value: str, index: int) -> str:
    try:
        return REGIME_COLORS[float(value)]
    except (KeyError, ValueError):
        return FALLBACK_CYCLE[index % len(FALLBACK_CYCLE)]


def _new_axes():
    fig, ax = plt.subplots(figsize=(5.4, 3.6), dpi=140)
    return fig, ax


def render(spec: PlotSpec) -> Path:
    """Render one figure and return the output path."""
    table = read_table(spec.input)
    if spec.kind == "line":
        fig = _render_line(spec, table)
    elif spec.kind == "heatmap":
        fig = _render_heatmap(spec, table)
    elif spec.kind == "bar":
        fig = _render_bar(spec, table)
    else:
        fig = _render_histogram(spec, table)
    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, **SAVE_KWARGS)
    plt.close(fig)
    return out


def _series(table, spec):
    """Yield (label, row-index array) per group, or one anonymous series."""
    if spec.group is None:
        yield None, np.arange(len(table[spec.x]))
        return
    values = table[spec.group]
    seen = []
    for value in values:
        if value not in seen:
            seen.append(value)
    for value in seen:
        yield value, np.array([i for i, v in enumerate(values) if v == value])


def _render_line(spec: PlotSpec, table) -> plt.Figure:
    _require_columns(table, [spec.x, spec.y, spec.group, spec.error], spec.input)
    fig, ax = _new_axes()
    xs = _floats(table[spec.x])
    ys = _floats(table[spec.y])
    errs = _floats(table[spec.error]) if spec.error else None
    for index, (label, rows) in enumerate(_series(table, spec)):
        order = rows[np.argsort(xs[rows], kind="stable")]
        color = _group_color(label, index) if label is not None else "tab:red"
        text = f"{spec.group}={label}" if label is not None else None
        if errs is not None and not np.isnan(errs[order]).all():
            ax.errorbar(xs[order], ys[order], yerr=np.nan_to_num(errs[order]),
                        marker="o", ms=3.5, capsize=2, color=color, label=text)
        else:
            ax.plot(xs[order], ys[order], marker="o", ms=3.5, color=color,
                    label=text)
    if spec.logx:
        ax.set_xscale("log")
    ax.set_xlabel(spec.x)
    ax.set_ylabel(spec.y)
    if spec.title:
        ax.set_title(spec.title)
    if spec.group is not None:
        ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def _render_heatmap(spec: PlotSpec, table) -> plt.Figure:
    _require_columns(table, [spec.x, spec.y, spec.value], spec.input)
    xs = _floats(table[spec.x])
    ys = _floats(table[spec.y])
    vals = _floats(table[spec.value])
    x_levels = np.unique(xs)
    y_levels = np.unique(ys)
    grid = np.full((y_levels.size, x_levels.size), np.nan)
    for x, y, v in zip(xs, ys, vals):
        i = np.searchsorted(y_levels, y)
        j = np.searchsorted(x_levels, x)
        # several rows (e.g. dt grid points) may land on one cell: keep the best
        if np.isnan(grid[i, j]) or v > grid[i, j]:
            grid[i, j] = v
    # threshold shading: count of thresholds cleared, greyscale like the
    # benchmark's NARMA figure
    levels = np.zeros_like(grid)
    for threshold in spec.thresholds:
        levels += (grid >= threshold).astype(float)
    fig, ax = _new_axes()
    mesh = ax.pcolormesh(np.arange(x_levels.size + 1), np.arange(y_levels.size + 1),
                         levels, cmap="Greys", vmin=0, vmax=len(spec.thresholds),
                         edgecolors="none")
    ax.set_xticks(np.arange(x_levels.size) + 0.5,
                  [f"{v:g}" for v in x_levels], rotation=45, fontsize=7)
    ax.set_yticks(np.arange(y_levels.size) + 0.5, [f"{v:g}" for v in y_levels],
                  fontsize=7)
    ax.set_xlabel(spec.x)
    ax.set_ylabel(spec.y)
    fig.colorbar(mesh, ax=ax, label="thresholds cleared "
                 f"{list(spec.thresholds)}")
    if spec.title:
        ax.set_title(spec.title)
    fig.tight_layout()
    return fig


def _render_bar(spec: PlotSpec, table) -> plt.Figure:
    _require_columns(table, [spec.x, spec.y, spec.group], spec.input)
    fig, ax = _new_axes()
    categories = []
    for value in table[spec.x]:
        if value not in categories:
            categories.append(value)
    positions = np.arange(len(categories), dtype=float)
    groups = list(_series(table, spec))
    width = 0.8 / len(groups)
    for index, (label, rows) in enumerate(groups):
        heights = []
        for cat in categories:
            match = [r for r in rows if table[spec.x][r] == cat]
            heights.append(_floats([table[spec.y][r] for r in match]).max()
                           if match else np.nan)
        offset = (index - (len(groups) - 1) / 2) * width
        color = _group_color(label, index) if label is not None else "black"
        ax.bar(positions + offset, heights, width=width, color=color,
               label=(f"{spec.group}={label}" if label is not None else None))
    ax.set_xticks(positions, categories, fontsize=8)
    ax.set_xlabel(spec.x)
    ax.set_ylabel(spec.y)
    if spec.group is not None:
        ax.legend(fontsize=8)
    if spec.title:
        ax.set_title(spec.title)
    fig.tight_layout()
    return fig


def _render_histogram(spec: PlotSpec, table) -> plt.Figure:
    _require_columns(table, [spec.x, spec.group], spec.input)
    fig, ax = _new_axes()
    values = _floats(table[spec.x])
    positive = values[values > 0]
    if positive.size == 0:
        raise ValueError("histogram input has no positive values")
    lo = max(positive.min(), positive.max() * 1e-18)
    bins = np.logspace(np.log10(lo), np.log10(positive.max()), 40)
    for index, (label, rows) in enumerate(_series(table, spec)):
        data = np.clip(values[rows], lo, None)
        color = _group_color(label, index) if label is not None else "black"
        ax.hist(data, bins=bins, histtype="step", color=color,
                label=(f"{spec.group}={label}" if label is not None else None))
    ax.set_xscale("log")
    ax.set_xlabel(spec.x)
    ax.set_ylabel("count")
    if spec.group is not None:
        ax.legend(fontsize=8)
    if spec.title:
        ax.set_title(spec.title)
    fig.tight_layout()
    return fig
