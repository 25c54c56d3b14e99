"""Directory-level rendering: map recognized benchmark outputs to figures.

Recognition is driven by the harness naming scheme: every sweep leaves a
<label>_metadata.json sidecar next to its records/summary CSVs, and the
specialty analyses (spectral, svd, cutoff) are identified by their fixed
headers. Unrecognized files are reported, never fatal.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np

from .render import (PlotSpec, SAVE_KWARGS, _floats, _group_color,
                     _new_axes, read_table, render)


def _write_csv(path: Path, fields, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def _rows(path: Path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def _best_dt_rows(records: list[dict], summary: list[dict]) -> list[dict]:
    """Rows of the records table at each J/U point's optimized dt."""
    best = {row["j_over_u"]: float(row["best_dt"]) for row in summary
            if row["n_measurements"] in ("inf", "")}
    chosen = []
    for row in records:
        target = best.get(row["j_over_u"])
        if target is not None and float(row["dt"]) == target \
                and row["n_measurements"] == "inf":
            chosen.append(row)
    return chosen


def _delay_curve_image(label, records, summary, out_dir) -> Path:
    rows = _best_dt_rows(records, summary)
    axis = "order" if rows and rows[0]["task"] == "narma" else "delay"
    table_path = out_dir / f"{label}_best_dt.csv"
    _write_csv(table_path, [axis, "c_test", "c_test_stderr", "j_over_u"],
               [{k: row[k] for k in (axis, "c_test", "c_test_stderr", "j_over_u")}
                for row in rows])
    return render(PlotSpec(kind="line", input=str(table_path),
                           output=str(out_dir / f"{label}_capacity_vs_{axis}.png"),
                           x=axis, y="c_test", group="j_over_u",
                           error="c_test_stderr",
                           title=f"{label}: capacity vs {axis}"))


def _noise_curve_image(label, records, out_dir) -> Path | None:
    levels = sorted({row["n_measurements"] for row in records})
    if len(levels) < 2:
        return None
    table_path = out_dir / f"{label}_noise.csv"
    _write_csv(table_path, ["delay", "c_test", "c_test_stderr", "n_measurements"],
               [{k: row[k] for k in ("delay", "c_test", "c_test_stderr",
                                     "n_measurements")} for row in records])
    return render(PlotSpec(kind="line", input=str(table_path),
                           output=str(out_dir / f"{label}_noise_convergence.png"),
                           x="delay", y="c_test", group="n_measurements",
                           error="c_test_stderr",
                           title=f"{label}: capacity vs delay by N_m"))


def _spectral_images(stem, path, out_dir) -> list[Path]:
    table = read_table(path)
    images = []
    for column, reference, name in [("r_mean", "r_goe_reference", "gap_ratio"),
                                    ("d1_mean", "d1_goe_reference", "info_dim")]:
        fig, ax = _new_axes()
        sites = table["sites"]
        xs = _floats(table["j_over_un"])
        ys = _floats(table[column])
        refs = _floats(table[reference])
        seen = []
        for value in sites:
            if value not in seen:
                seen.append(value)
        for index, value in enumerate(seen):
            rows = np.array([i for i, v in enumerate(sites) if v == value])
            order = rows[np.argsort(xs[rows], kind="stable")]
            color = _group_color(value, index)
            ax.plot(xs[order], ys[order], marker="o", ms=3.5, color=color,
                    label=f"N={value}")
            ax.axhline(refs[order[-1]], color=color, ls="--", lw=0.8)
        if column == "r_mean":
            ax.axhline(0.3863, color="black", ls=":", lw=0.8, label="Poisson")
        ax.set_xscale("log")
        ax.set_xlabel("J/UN")
        ax.set_ylabel(column)
        ax.legend(fontsize=8)
        fig.tight_layout()
        out = out_dir / f"{stem}_{name}.png"
        fig.savefig(out, **SAVE_KWARGS)
        plt.close(fig)
        images.append(out)
    return images


def _cutoff_image(stem, path, out_dir) -> Path:
    rows = _rows(path)
    cutoff_cols = [c for c in rows[0] if c.startswith("c_nc")]
    long_path = out_dir / f"{stem}_long.csv"
    melted = [{"delay": row["delay"], "capacity": row[col],
               "cutoff": col.removeprefix("c_")}
              for row in rows for col in cutoff_cols]
    _write_csv(long_path, ["delay", "capacity", "cutoff"], melted)
    return render(PlotSpec(kind="line", input=str(long_path),
                           output=str(out_dir / f"{stem}_comparison.png"),
                           x="delay", y="capacity", group="cutoff",
                           title="capacity at two Fock cutoffs"))


def _overview_image(out_dir, summary_tables) -> Path | None:
    rows = []
    for label, summary in summary_tables:
        for row in summary:
            if row["n_measurements"] not in ("inf", ""):
                continue
            rows.append({"task": row["task"], "max_delay": row["max_delay"],
                         "j_over_u": row["j_over_u"]})
    if not rows:
        return None
    table_path = out_dir / "overview_tasks.csv"
    _write_csv(table_path, ["task", "max_delay", "j_over_u"], rows)
    return render(PlotSpec(kind="bar", input=str(table_path),
                           output=str(out_dir / "overview_tasks.png"),
                           x="task", y="max_delay", group="j_over_u",
                           title="max delay/order with capacity above threshold"))


def render_all(directory, out_dir=None) -> tuple[list[Path], list[str]]:
    """Render every recognized output in ``directory``.

    Returns (written image paths, warnings for skipped files).
    """
    directory = Path(directory)
    out_dir = Path(out_dir) if out_dir is not None else directory / "figures"
    out_dir.mkdir(parents=True, exist_ok=True)
    images: list[Path] = []
    warnings: list[str] = []
    consumed: set[Path] = set()
    summary_tables = []

    for meta_path in sorted(directory.glob("*_metadata.json")):
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        label = meta_path.name.removesuffix("_metadata.json")
        consumed.add(meta_path)
        if "config" not in meta:
            continue  # informational sidecar (e.g. spectral); tables are
                      # recognized by their headers below
        records_path = directory / f"{label}_records.csv"
        summary_path = directory / f"{label}_summary.csv"
        if not records_path.exists() or not summary_path.exists():
            warnings.append(f"{label}: metadata without records/summary tables")
            continue
        consumed.update((records_path, summary_path))
        records, summary = _rows(records_path), _rows(summary_path)
        if not records:
            warnings.append(f"{label}: empty records table")
            continue
        summary_tables.append((label, summary))
        task = meta.get("config", {}).get("task", {}).get("kind", "")
        if task == "narma":
            images.append(render(PlotSpec(
                kind="heatmap", input=str(records_path),
                output=str(out_dir / f"{label}_capacity_heatmap.png"),
                x="j_over_u", y="order", value="c_test",
                title=f"{label}: NARMA capacity thresholds")))
        else:
            images.append(_delay_curve_image(label, records, summary, out_dir))
            noise = _noise_curve_image(label, records, out_dir)
            if noise is not None:
                images.append(noise)
        if len({row["j_over_u"] for row in summary}) > 1:
            images.append(render(PlotSpec(
                kind="line", input=str(summary_path),
                output=str(out_dir / f"{label}_max_delay.png"),
                x="j_over_u", y="max_delay", logx=True,
                title=f"{label}: max delay above threshold")))

    for path in sorted(directory.glob("*.csv")):
        if path in consumed:
            continue
        with open(path, newline="", encoding="utf-8") as fh:
            header = fh.readline().strip().split(",")
        stem = path.stem
        if {"r_mean", "d1_mean", "j_over_un"} <= set(header):
            images.extend(_spectral_images(stem, path, out_dir))
            consumed.add(path)
        elif {"topology", "rank", "value"} <= set(header):
            images.append(render(PlotSpec(
                kind="histogram", input=str(path),
                output=str(out_dir / f"{stem}_hist.png"),
                x="value", group="topology",
                title="singular values of the training features")))
            consumed.add(path)
        elif "abs_diff" in header and "delay" in header:
            images.append(_cutoff_image(stem, path, out_dir))
            consumed.add(path)
        elif any(path.name.endswith(s) for s in ("_svd_summary.csv",)):
            consumed.add(path)  # tabular companion, nothing to draw
        elif path.parent == out_dir:
            consumed.add(path)
        else:
            warnings.append(f"unrecognized file skipped: {path.name}")

    overview = _overview_image(out_dir, summary_tables)
    if overview is not None:
        images.append(overview)
    return images, warnings
