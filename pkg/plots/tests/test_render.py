import csv
import json

import pytest

from bhqrc_plots.discover import render_all
from bhqrc_plots.render import PlotSpec, load_spec, render


def write_csv(path, fields, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def stm_like_rows(j_values=("0.001", "0.1"), dts=("1.0", "10.0"), delays=4):
    rows = []
    for j in j_values:
        for dt in dts:
            for tau in range(delays):
                c = max(0.0, 1.0 - 0.2 * tau * (1.0 + float(j)))
                rows.append({"task": "stm", "topology": "open-chain",
                             "sites": "5", "cutoff": "3", "j_over_u": j,
                             "j_over_un": str(float(j) / 5), "dt": dt,
                             "disorder": "0.0", "n_measurements": "inf",
                             "delay": str(tau), "degree": "1", "order": "",
                             "realizations": "1", "c_train": f"{c}",
                             "c_test": f"{c}", "c_test_stderr": "",
                             "degenerate": "0", "config_hash": "abc"})
    return rows


RECORD_FIELDS = list(stm_like_rows()[0])


def test_line_plot_renders_and_is_deterministic(tmp_path):
    data = tmp_path / "curve.csv"
    write_csv(data, RECORD_FIELDS, stm_like_rows())
    spec = PlotSpec(kind="line", input=str(data),
                    output=str(tmp_path / "curve.png"),
                    x="delay", y="c_test", group="j_over_u")
    first = render(spec).read_bytes()
    second = render(spec).read_bytes()
    assert first == second
    assert len(first) > 1000


def test_missing_column_is_an_error(tmp_path):
    data = tmp_path / "curve.csv"
    write_csv(data, RECORD_FIELDS, stm_like_rows())
    spec = PlotSpec(kind="line", input=str(data),
                    output=str(tmp_path / "x.png"), x="delay", y="capacity")
    with pytest.raises(ValueError, match="columns .* not present"):
        render(spec)


def test_empty_csv_is_an_error(tmp_path):
    data = tmp_path / "empty.csv"
    write_csv(data, RECORD_FIELDS, [])
    spec = PlotSpec(kind="line", input=str(data),
                    output=str(tmp_path / "x.png"), x="delay", y="c_test")
    with pytest.raises(ValueError, match="no data rows"):
        render(spec)
    assert not (tmp_path / "x.png").exists()


def test_unknown_kind_rejected(tmp_path):
    with pytest.raises(ValueError, match="unknown figure kind"):
        PlotSpec(kind="scatter", input="a.csv", output="b.png")


def test_spec_loading_rejects_unknown_keys(tmp_path):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps({"kind": "line", "input": "a.csv",
                                "output": "b.png", "colour": "red"}))
    with pytest.raises(ValueError, match="unknown keys"):
        load_spec(path)


def test_heatmap_bar_histogram(tmp_path):
    narma = tmp_path / "narma.csv"
    rows = []
    for j in ("0.001", "0.1", "1000.0"):
        for order in range(2, 7):
            c = 0.95 - 0.1 * order * (0.5 if j == "0.1" else 1.5)
            rows.append({"j_over_u": j, "order": str(order), "c_test": f"{max(c, 0)}"})
    write_csv(narma, ["j_over_u", "order", "c_test"], rows)
    out = render(PlotSpec(kind="heatmap", input=str(narma),
                          output=str(tmp_path / "narma.png"),
                          x="j_over_u", y="order", value="c_test"))
    assert out.exists()

    bars = tmp_path / "bars.csv"
    write_csv(bars, ["task", "max_delay", "j_over_u"],
              [{"task": t, "max_delay": str(d), "j_over_u": j}
               for t, d, j in [("stm", 9, "0.1"), ("stm", 6, "1000.0"),
                               ("pc", 2, "0.1"), ("pc", 4, "1000.0")]])
    out = render(PlotSpec(kind="bar", input=str(bars),
                          output=str(tmp_path / "bars.png"),
                          x="task", y="max_delay", group="j_over_u"))
    assert out.exists()

    svd = tmp_path / "svd.csv"
    write_csv(svd, ["topology", "rank", "value"],
              [{"topology": top, "rank": str(r), "value": f"{10.0 ** (-r)}"}
               for top in ("open-chain", "all-to-all") for r in range(20)])
    out = render(PlotSpec(kind="histogram", input=str(svd),
                          output=str(tmp_path / "svd.png"),
                          x="value", group="topology"))
    assert out.exists()


def _fake_results_dir(root):
    root.mkdir(parents=True, exist_ok=True)
    write_csv(root / "stm_records.csv", RECORD_FIELDS, stm_like_rows())
    write_csv(root / "stm_summary.csv",
              ["task", "topology", "j_over_u", "j_over_un", "n_measurements",
               "threshold", "best_dt", "max_delay", "best_capacity"],
              [{"task": "stm", "topology": "open-chain", "j_over_u": j,
                "j_over_un": str(float(j) / 5), "n_measurements": "inf",
                "threshold": "0.8", "best_dt": "10.0", "max_delay": "2",
                "best_capacity": "0.8"} for j in ("0.001", "0.1")])
    (root / "stm_metadata.json").write_text(json.dumps(
        {"config": {"task": {"kind": "stm"}}}))
    write_csv(root / "plateau_records.csv",
              ["sites", "j_over_un", "j_over_u", "sector_dim", "odd_dim",
               "even_dim", "r_mean", "degenerate_pairs", "d1_mean",
               "d1_goe_reference", "r_goe_reference", "r_poisson_reference"],
              [{"sites": "5", "j_over_un": x, "j_over_u": str(float(x) * 5),
                "sector_dim": "126", "odd_dim": "60", "even_dim": "66",
                "r_mean": "0.51", "degenerate_pairs": "0", "d1_mean": "0.82",
                "d1_goe_reference": "0.8258", "r_goe_reference": "0.5359",
                "r_poisson_reference": "0.3863"} for x in ("0.1", "0.3")])
    write_csv(root / "run_svd_values.csv", ["topology", "rank", "value"],
              [{"topology": t, "rank": str(r), "value": f"{2.0 ** (-r)}"}
               for t in ("open-chain", "periodic-chain") for r in range(10)])
    write_csv(root / "run_cutoff.csv",
              ["delay", "c_nc3", "c_nc4", "abs_diff"],
              [{"delay": str(t), "c_nc3": "0.9", "c_nc4": "0.91",
                "abs_diff": "0.01"} for t in range(4)])
    write_csv(root / "stray_table.csv", ["a", "b"], [{"a": "1", "b": "2"}])


def test_render_all_recognizes_everything(tmp_path):
    results = tmp_path / "results"
    _fake_results_dir(results)
    images, warnings = render_all(results, tmp_path / "figs")
    names = {p.name for p in images}
    assert "stm_capacity_vs_delay.png" in names
    assert "stm_max_delay.png" in names
    assert "plateau_records_gap_ratio.png" in names
    assert "plateau_records_info_dim.png" in names
    assert "run_svd_values_hist.png" in names
    assert "run_cutoff_comparison.png" in names
    assert "overview_tasks.png" in names
    assert any("stray_table.csv" in w for w in warnings)
    assert all(p.exists() for p in images)


def test_render_all_reruns_byte_identical(tmp_path):
    results = tmp_path / "results"
    _fake_results_dir(results)
    images, _ = render_all(results, tmp_path / "figs")
    snapshot = {p: p.read_bytes() for p in images}
    images2, _ = render_all(results, tmp_path / "figs")
    assert set(images2) == set(snapshot)
    for path, blob in snapshot.items():
        assert path.read_bytes() == blob
