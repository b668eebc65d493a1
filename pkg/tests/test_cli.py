import json
import math

import pytest

from nmsplit.cli import main
from nmsplit.params import REFERENCE_CONFIG
from nmsplit.sweep import read_csv, sha256_file


def write_config(tmp_path, **over):
    cfg = dict(REFERENCE_CONFIG)
    cfg.update(over)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return str(path)


def test_point_writes_outputs(tmp_path, capsys):
    out = tmp_path / "pt"
    cfg = write_config(tmp_path, parametric_gain_over_kappa=1.3)
    assert main(["point", "--config", cfg, "--out", str(out), "--grid-points", "801"]) == 0
    report = json.loads((out / "point.json").read_text())
    (branch,) = report["branches"]
    assert branch["steady_state"]["photon_number"] == pytest.approx(4.30e9, rel=0.01)
    assert len(branch["spectra"]["SQ"]["peaks"]) == 2
    manifest = json.loads((out / "manifest.json").read_text())
    names = {f["path"] for f in manifest["files"]}
    assert names == {"spectra_b0.csv", "point.csv", "point.json"}
    for f in manifest["files"]:
        assert f["sha256"] == sha256_file(out / f["path"])
    assert manifest["params"]["parametric_gain_over_kappa"] == pytest.approx(1.3)
    assert "branch 0" in capsys.readouterr().out


def test_negative_power_names_key(tmp_path, capsys):
    cfg = write_config(tmp_path, laser_power_mw=-1.0)
    assert main(["point", "--config", cfg, "--out", str(tmp_path / "o")]) == 1
    assert "laser_power_mw" in capsys.readouterr().err


def test_unknown_config_key(tmp_path, capsys):
    cfg = write_config(tmp_path, laser_powr_mw=3.0)
    assert main(["point", "--config", cfg, "--out", str(tmp_path / "o")]) == 1
    assert "laser_powr_mw" in capsys.readouterr().err


def test_missing_config_file(tmp_path):
    assert main(["point", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path / "o")]) == 1


def test_bad_usage_exits_one():
    with pytest.raises(SystemExit) as exc:
        main(["point", "--noise", "lukewarm"])
    assert exc.value.code == 1


def test_unstable_point_with_spectra_refused(tmp_path, capsys):
    cfg = write_config(tmp_path, parametric_gain_over_kappa=1.7)
    assert main(["point", "--config", cfg, "--out", str(tmp_path / "a"), "--grid-points", "101"]) == 2
    assert "unstable" in capsys.readouterr().err
    # without spectra the same point is a valid query
    assert main(["point", "--config", cfg, "--out", str(tmp_path / "b"), "--spectra", "none"]) == 0
    report = json.loads((tmp_path / "b" / "point.json").read_text())
    assert report["branches"][0]["stability"]["stable"] is False


def test_sweep_rows_in_axis_order(tmp_path):
    values = "1.4,1.0,0.6,0.2"
    assert main(["sweep", "--axis", "G", "--values", values, "--out", str(tmp_path / "s"), "--workers", "3"]) == 0
    header, body = read_csv(tmp_path / "s" / "sweep.csv")
    col = header.index("axis_value")
    assert [float(r[col]) for r in body] == [1.4, 1.0, 0.6, 0.2]


def test_sweep_non_monotone_values_rejected(tmp_path, capsys):
    assert main(["sweep", "--axis", "G", "--values", "0.2,0.1,0.3", "--out", str(tmp_path / "s")]) == 1
    assert "values" in capsys.readouterr().err


def test_sweep_range_and_spectra(tmp_path):
    out = tmp_path / "s"
    assert main(["sweep", "--axis", "power", "--range", "2:6:2", "--outputs", "SQ,stability",
                 "--grid-points", "801", "--out", str(out)]) == 0
    header, body = read_csv(out / "sweep.csv")
    assert [float(r[header.index("axis_value")]) for r in body] == [2.0, 4.0, 6.0]
    assert "SQ_npeaks" in header


def test_sweep_parallel_matches_serial(tmp_path):
    args = ["sweep", "--axis", "G", "--range", "0:1.5:0.25"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b"), "--workers", "4"]) == 0
    assert (tmp_path / "a" / "sweep.csv").read_bytes() == (tmp_path / "b" / "sweep.csv").read_bytes()


def test_unknown_axis(tmp_path, capsys):
    assert main(["sweep", "--axis", "mass", "--values", "1", "--out", str(tmp_path / "s")]) == 1
    assert "axis" in capsys.readouterr().err


def test_boundary_in_gain(tmp_path):
    out = tmp_path / "b"
    assert main(["boundary", "--axis", "G", "--lo", "1.0", "--hi", "2.0", "--out", str(out)]) == 0
    res = json.loads((out / "boundary.json").read_text())
    assert res["critical_value"] == pytest.approx(1.62, abs=0.02)
    assert res["failing_conditions"] == [3]


def test_boundary_without_bracket(tmp_path, capsys):
    assert main(["boundary", "--axis", "G", "--lo", "0.1", "--hi", "0.5", "--out", str(tmp_path / "b")]) == 1
    assert "bracket" in capsys.readouterr().err


def test_plot_from_sweep(tmp_path):
    assert main(["sweep", "--axis", "G", "--range", "0:1.5:0.5", "--out", str(tmp_path)]) == 0
    csv_path = str(tmp_path / "sweep.csv")
    svg = tmp_path / "roots.svg"
    args = ["plot", csv_path, "--x", "G_over_kappa", "--y", "root1_im_norm,root2_im_norm", "--output", str(svg)]
    assert main(args) == 0
    first = svg.read_bytes()
    assert first.startswith(b"<svg") or b"<svg" in first[:200]
    assert main(args) == 0
    assert svg.read_bytes() == first


def test_plot_unknown_column(tmp_path, capsys):
    assert main(["sweep", "--axis", "G", "--values", "0.5", "--out", str(tmp_path)]) == 0
    assert main(["plot", str(tmp_path / "sweep.csv"), "--x", "G_over_kappa", "--y", "nonsense"]) == 1
    assert "nonsense" in capsys.readouterr().err


def test_plot_empty_csv(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("a,b\n")
    assert main(["plot", str(path), "--x", "a", "--y", "b"]) == 1


def test_preset_fig4_peak_counts(tmp_path):
    out = tmp_path / "f4"
    assert main(["preset", "fig4", "--out", str(out)]) == 0
    header, body = read_csv(out / "fig4_peaks.csv")
    counts = {r[0]: int(r[header.index("npeaks")]) for r in body}
    assert counts == {"G=0kappa": 1, "G=1.3kappa": 2, "G=1.45kappa": 2}
    sep = {r[0]: float(r[header.index("separation_norm")]) for r in body}
    assert sep["G=1.45kappa"] > sep["G=1.3kappa"]
    assert (out / "fig4.svg").exists()


def test_preset_is_deterministic(tmp_path):
    for name in ("a", "b"):
        assert main(["preset", "fig9", "--out", str(tmp_path / name), "--grid-points", "1001"]) == 0
    for f in ("fig9.csv", "fig9_peaks.csv", "fig9.svg"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_preset_roots_csv(tmp_path):
    out = tmp_path / "f2"
    assert main(["preset", "fig2", "--out", str(out), "--workers", "2"]) == 0
    header, body = read_csv(out / "fig2_fig3.csv")
    assert len(body) == 2 * 82
    g = [float(r[header.index("G_over_kappa")]) for r in body[:82]]
    assert g == sorted(g) and math.isclose(g[-1], 1.6) and 1.45 in g


def test_exact_noise_option(tmp_path):
    out = tmp_path / "p"
    assert main(["point", "--out", str(out), "--noise", "exact", "--grid-points", "401"]) == 0
    assert (out / "spectra_b0.csv").exists()
