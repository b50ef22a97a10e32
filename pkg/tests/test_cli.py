"""
Tests for the swdft command line
"""
import json

import numpy as np
import pytest

from swdft.cli import main
from swdft.formats import read_grid_frame, read_report, read_signal
from swdft.montecarlo import parse_tables_csv


@pytest.fixture
def local_signal(tmp_path):
    """2cos(πt/4) on 31..94, N = 128"""
    path = tmp_path / "signal.csv"
    code = main([
        "synth", "--signal-length", "128", "--start", "31", "--length", "64",
        "--amplitude", "2", "--frequency", "16", "--output", str(path),
    ])
    assert code == 0
    return path


# ============================================================================
# SYNTH
# ============================================================================

def test_synth_local_signal(local_signal):
    x = read_signal(local_signal)
    assert x.size == 128
    assert np.all(x[:31] == 0) and np.all(x[95:] == 0)
    assert x[31] == pytest.approx(2 * np.cos(np.pi * 31 / 4))


def test_synth_zero_amplitude(tmp_path):
    path = tmp_path / "zero.csv"
    assert main(["synth", "--signal-length", "128", "--amplitude", "0", "--frequency", "16", "--output", str(path)]) == 0
    assert np.all(read_signal(path) == 0)


def test_synth_is_deterministic(tmp_path):
    flags = ["synth", "--signal-length", "64", "--frequency", "8", "--noise-sigma", "1", "--seed", "3"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(flags + ["--output", str(a)])
    main(flags + ["--output", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_synth_step(tmp_path):
    path = tmp_path / "step.csv"
    assert main(["synth", "--signal-length", "8", "--step-at", "3", "--output", str(path)]) == 0
    np.testing.assert_array_equal(read_signal(path), [0, 0, 0, 1, 1, 1, 1, 1])


def test_synth_from_spec_file(tmp_path):
    spec = tmp_path / "spec.txt"
    spec.write_text("N=64\nsigma=0\nseed=1\nS,L,A,F,phi\n17,31,1,8,1\n")
    path = tmp_path / "signal.csv"
    assert main(["synth", "--spec", str(spec), "--output", str(path)]) == 0
    x = read_signal(path)
    assert x.size == 64 and x[16] == 0 and x[17] != 0


def test_synth_to_stdout(capsys):
    assert main(["synth", "--signal-length", "4", "--frequency", "1"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("# format=1\nx\n")
    assert len(out.strip().splitlines()) == 6


# ============================================================================
# TRANSFORMS AND CLOSED FORMS
# ============================================================================

def test_compute_mod2(local_signal, tmp_path):
    out = tmp_path / "grid.csv"
    assert main(["compute", "--input", str(local_signal), "--n", "16", "--view", "mod2", "--output", str(out)]) == 0
    frame = read_grid_frame(out)
    assert list(frame.columns) == ["k", "p", "mod2"]
    assert len(frame) == 16 * 113
    row = frame[(frame["k"] == 2) & (frame["p"] == 60)]
    assert row["mod2"].iloc[0] == pytest.approx(16.0, rel=1e-9)


def test_compute_engines_agree(local_signal, tmp_path):
    direct, sliding = tmp_path / "direct.csv", tmp_path / "sliding.csv"
    main(["compute", "--input", str(local_signal), "--n", "8", "--engine", "direct", "--output", str(direct)])
    main(["compute", "--input", str(local_signal), "--n", "8", "--engine", "sliding", "--output", str(sliding)])
    a, b = read_grid_frame(direct), read_grid_frame(sliding)
    np.testing.assert_allclose(a["re"], b["re"], atol=1e-9)
    np.testing.assert_allclose(a["im"], b["im"], atol=1e-9)


def test_compute_constant_signal(tmp_path):
    signal, out = tmp_path / "constant.csv", tmp_path / "grid.csv"
    signal.write_text("x\n" + "2\n" * 20)
    assert main(["compute", "--input", str(signal), "--n", "4", "--view", "mod2", "--output", str(out)]) == 0
    frame = read_grid_frame(out)
    assert np.all(frame.loc[frame["k"] == 0, "mod2"] > 0)
    assert np.all(frame.loc[frame["k"] != 0, "mod2"] < 1e-20)


def test_views_single_row(local_signal, tmp_path):
    out = tmp_path / "row.csv"
    assert main(["views", "--input", str(local_signal), "--n", "16", "--k", "2", "--output", str(out)]) == 0
    frame = read_grid_frame(out)
    assert list(frame.columns) == ["p", "value"]
    assert frame["p"].iloc[0] == 15


def test_dirichlet_command(tmp_path):
    out = tmp_path / "dirichlet.csv"
    assert main(["dirichlet", "--n", "8", "--grid", "5", "--output", str(out)]) == 0
    frame = read_grid_frame(out)
    assert list(frame.columns) == ["x", "kernel", "weight_re", "weight_im", "weight_mod"]
    assert frame["kernel"].iloc[2] == 8.0  # x = 0
    assert frame["kernel"].iloc[0] == -8.0  # x = -2π


def test_dirichlet_default_grid(tmp_path):
    out = tmp_path / "dirichlet.csv"
    assert main(["dirichlet", "--n", "8", "--output", str(out)]) == 0
    frame = read_grid_frame(out)
    assert len(frame) == 257
    assert frame["kernel"].iloc[128] == pytest.approx(8.0)


@pytest.mark.parametrize("kind", ["local", "global", "step"])
def test_closedform_command(kind, tmp_path):
    out = tmp_path / f"{kind}.csv"
    code = main([
        "closedform", "--kind", kind, "--signal-length", "64", "--n", "8",
        "--start", "10", "--length", "40", "--frequency", "8", "--output", str(out),
    ])
    assert code == 0
    frame = read_grid_frame(out)
    assert frame["absdiff"].max() <= 1e-8


# ============================================================================
# ESTIMATE AND SIMULATE
# ============================================================================

def test_estimate_command(tmp_path):
    signal = tmp_path / "signal.csv"
    main([
        "synth", "--signal-length", "64", "--start", "17", "--length", "31",
        "--frequency", "8", "--phase", "1", "--output", str(signal),
    ])
    out = tmp_path / "estimate.csv"
    code = main([
        "estimate", "--input", str(signal), "--n", "16", "--s-min", "12", "--s-max", "22",
        "--l-min", "25", "--l-max", "36", "--phase-units", "cycles", "--output", str(out),
    ])
    assert code == 0
    frame = read_grid_frame(out)
    assert frame["kstar"].iloc[0] == 2
    assert frame["S"].iloc[0] == 17 and frame["L"].iloc[0] == 31
    assert frame["phi"].iloc[0] == pytest.approx(1 / (2 * np.pi), abs=1e-3)


def test_simulate_command(tmp_path):
    code = main([
        "simulate", "--n-list", "[16,32]", "--sigma-list", "[0.0]", "--f-list", "[8.0]",
        "--reps", "1", "--jobs", "1", "--out-dir", str(tmp_path),
    ])
    assert code == 0
    report = read_report(tmp_path / "report.json")
    assert report.config.n_list == [16, 32]
    for cell in report.cells:
        assert cell.fraction_correct_k == 1.0
        assert cell.mse_S == 0.0 and cell.mse_L == 0.0
        assert cell.mse_A < 1e-8
    assert json.loads((tmp_path / "report.json").read_text())["format"] == 1
    tables = parse_tables_csv(tmp_path / "tables_n16.csv")
    assert set(tables["table"]) == {"A", "S", "L", "f", "phi", "k"}
    assert (tmp_path / "tables_n16.txt").exists()
    assert (tmp_path / "tables_n32.txt").read_text().startswith("# format=1\n")


# ============================================================================
# ERRORS
# ============================================================================

def test_window_larger_than_signal_is_usage_error(local_signal):
    assert main(["compute", "--input", str(local_signal), "--n", "500"]) == 2


def test_unknown_flag_is_usage_error():
    assert main(["compute", "--bogus", "1"]) == 2


def test_invalid_spec_is_usage_error(tmp_path):
    assert main(["synth", "--signal-length", "64", "--start", "63", "--length", "1"]) == 2


def test_frequency_index_out_of_range(local_signal):
    assert main(["views", "--input", str(local_signal), "--n", "16", "--k", "16"]) == 2


def test_missing_input_file(tmp_path):
    assert main(["compute", "--input", str(tmp_path / "missing.csv"), "--n", "4"]) == 2
