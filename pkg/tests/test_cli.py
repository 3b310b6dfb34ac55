"""End-to-end CLI runs against temp directories with a small sample count."""

import json
import math

import numpy as np
import pytest

from graphene_spp.cli import main
from graphene_spp.io import read_csv


def _cfg(tmp_path, extra=""):
    path = tmp_path / "run.cfg"
    path.write_text("n_samples = 256\n" + extra)
    return str(path)


def test_dispersion_columns_and_grid(tmp_path):
    out = tmp_path / "out"
    code = main(["--config", _cfg(tmp_path), "--out", str(out), "dispersion"])
    assert code == 0
    header, rows = read_csv(out / "dispersion.csv")
    assert header == ["lambda0_um", "E_F_eV", "gamma_per_s", "Re_q_per_um",
                      "Im_q_per_um", "Re_k_per_um", "L_x_um",
                      "confinement_nm"]
    lams = [row[0] for row in rows]
    assert lams == sorted(lams)
    assert any(abs(lam - 10.0) < 1e-9 for lam in lams)
    for row in rows:
        assert row[3] > 0 and row[5] > 0


def test_flags_work_before_and_after_subcommand(tmp_path):
    cfg = _cfg(tmp_path)
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    assert main(["--config", cfg, "--out", str(out_a), "dispersion"]) == 0
    assert main(["dispersion", "--config", cfg, "--out", str(out_b)]) == 0
    assert (out_a / "dispersion.csv").read_bytes() \
        == (out_b / "dispersion.csv").read_bytes()


def test_coupling_sweep_long_table(tmp_path):
    out = tmp_path / "out"
    assert main(["--config", _cfg(tmp_path), "--out", str(out),
                 "coupling-sweep"]) == 0
    header, rows = read_csv(out / "coupling_sweep.csv")
    assert header == ["d_nm", "E_F_eV", "abs_C_per_um", "Re_C_per_um",
                      "Im_C_per_um"]
    fermis = sorted({row[1] for row in rows})
    assert fermis == [0.05, 0.10, 0.15, 0.20]
    assert (out / "coupling_sweep.svg").exists()


def test_schedule_emits_profile_and_margin(tmp_path):
    out = tmp_path / "out"
    assert main(["--config", _cfg(tmp_path), "--out", str(out),
                 "schedule"]) == 0
    header, rows = read_csv(out / "schedule.csv")
    assert header[:3] == ["x_nm", "d1_nm", "d2_nm"]
    data = np.asarray(rows)
    # minimum separations hit the configured 20 nm gap at the waists,
    # up to the sampling grid landing a knot next to the true minimum
    assert data[:, 1].min() == pytest.approx(20.0, rel=1e-3)
    assert data[:, 2].min() == pytest.approx(20.0, rel=1e-3)
    omega1, omega2 = data[:, 3], data[:, 4]
    assert np.argmax(omega2) < np.argmax(omega1)


def test_device_run_both_loss_settings(tmp_path):
    out = tmp_path / "out"
    assert main(["--config", _cfg(tmp_path), "--out", str(out),
                 "device-run"]) == 0
    for label in ("lossless", "lossy"):
        header, rows = read_csv(out / f"device_run_{label}.csv")
        assert header == ["x_nm", "I_input", "I_middle", "I_output"]
        x = [row[0] for row in rows]
        assert x == sorted(x)
        assert rows[0][1] == pytest.approx(1.0, abs=1e-12)
        assert rows[0][2] == 0.0 and rows[0][3] == 0.0
    lossless = np.asarray(read_csv(out / "device_run_lossless.csv")[1])
    lossy = np.asarray(read_csv(out / "device_run_lossy.csv")[1])
    assert lossy[-1, 1:].sum() < lossless[-1, 1:].sum()
    assert (out / "device_run.svg").exists()


def test_device_run_field_map(tmp_path):
    out = tmp_path / "out"
    assert main(["--config", _cfg(tmp_path), "--out", str(out),
                 "device-run", "--field-map"]) == 0
    header, rows = read_csv(out / "field_map.csv")
    assert header[0] == "z_nm_over_x_nm"
    assert len(rows) == 181
    assert all(len(row) == len(header) for row in rows)
    assert (out / "field_map.svg").exists()


def test_robustness_sweep_matrix_and_sidecar(tmp_path):
    out = tmp_path / "out"
    assert main(["--config", _cfg(tmp_path), "--out", str(out),
                 "robustness-sweep", "--figure", "4b",
                 "--grid", "6x5"]) == 0
    header, rows = read_csv(out / "fig_4b.csv")
    assert header[0] == "length_um_over_wavevector_per_um"
    assert len(header) == 7 and len(rows) == 5
    meta = json.loads((out / "fig_4b.json").read_text())
    assert meta["figure"] == "4b"
    assert meta["layers"] == 3
    assert meta["lossy"] is False
    assert meta["config_hash"]
    assert len(meta["wavevector_inversion"]) == 6
    assert (out / "fig_4b.svg").exists()


def test_robustness_sweep_fig4c_comparator_reference(tmp_path):
    out = tmp_path / "out"
    assert main(["--config", _cfg(tmp_path), "--out", str(out),
                 "robustness-sweep", "--figure", "4c",
                 "--grid", "4x4"]) == 0
    meta = json.loads((out / "fig_4c.json").read_text())
    assert meta["lossy"] is True
    assert 0.0 <= meta["comparator_reference"] <= 1.0
    header, rows = read_csv(out / "fig_4c.csv")
    cells = np.asarray(rows)[:, 1:]
    # tight arcs cannot span the device: those cells are the NaN sentinel
    assert np.isnan(cells).any()
    assert np.isfinite(cells).any()


def test_robustness_sweep_loss_flag(tmp_path):
    out = tmp_path / "out"
    assert main(["--config", _cfg(tmp_path), "--out", str(out), "--loss",
                 "on", "robustness-sweep", "--figure", "4b",
                 "--grid", "3x3"]) == 0
    meta = json.loads((out / "fig_4b.json").read_text())
    assert meta["lossy"] is True


def test_robustness_sweep_figure_3_bundle(tmp_path):
    out = tmp_path / "out"
    assert main(["--config", _cfg(tmp_path), "--out", str(out),
                 "robustness-sweep", "--figure", "3"]) == 0
    for name in ("schedule.csv", "device_run_lossless.csv",
                 "device_run_lossy.csv", "field_map.csv"):
        assert (out / name).exists()


def test_verify_writes_validation_reports(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["--config", _cfg(tmp_path), "--out", str(out), "verify",
                 "--seed", "3"]) == 0
    report = json.loads((out / "validation.json").read_text())
    assert "comparisons" in report
    assert report["oracle_suite"]["seed"] == 3
    text = (out / "validation.txt").read_text()
    assert "oracle suite" in text
    captured = capsys.readouterr()
    assert "validation.json" in captured.out


def test_seed_free_flag_accepted(tmp_path):
    out = tmp_path / "out"
    assert main(["--config", _cfg(tmp_path), "--out", str(out), "--seed-free",
                 "dispersion"]) == 0


def test_bad_config_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("R_nm = -5\n")
    code = main(["--config", str(bad), "--out", str(tmp_path / "out"),
                 "dispersion"])
    assert code == 2
    captured = capsys.readouterr()
    assert "error:" in captured.err
    assert "radius > 0" in captured.err


def test_missing_config_file_exits_2(tmp_path, capsys):
    code = main(["--config", str(tmp_path / "absent.cfg"),
                 "--out", str(tmp_path / "out"), "dispersion"])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_formats_gate_emission(tmp_path):
    out = tmp_path / "out"
    cfg = _cfg(tmp_path, "formats = csv\n")
    assert main(["--config", cfg, "--out", str(out), "schedule"]) == 0
    assert (out / "schedule.csv").exists()
    assert not (out / "schedule.svg").exists()


def test_consecutive_sweeps_are_byte_identical(tmp_path):
    cfg = _cfg(tmp_path)
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    for out in (out_a, out_b):
        assert main(["--config", cfg, "--out", str(out), "robustness-sweep",
                     "--figure", "4a", "--grid", "5x4"]) == 0
    assert (out_a / "fig_4a.csv").read_bytes() \
        == (out_b / "fig_4a.csv").read_bytes()
