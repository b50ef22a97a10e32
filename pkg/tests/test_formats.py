"""
Tests for CSV / JSON file formats
"""
import numpy as np
import pytest

from swdft.errors import InvalidInputError, InvalidSpecError
from swdft.formats import (
    estimate_frame,
    grid_frame,
    parse_composite_spec,
    parse_signal,
    read_composite_spec,
    read_grid_frame,
    read_signal,
    write_composite_spec,
    write_estimate,
    write_grid,
    write_signal,
)
from swdft.models import CompositeSpec, EstimateResult, LocalSignalSpec
from swdft.transform import swdft_direct

SPEC_TEXT = """\
# format=1
N=64
sigma=0.5
seed=7
S,L,A,F,phi
17,31,1,8,1
40,20,0.5,11,0
"""


# ============================================================================
# SIGNALS
# ============================================================================

def test_parse_signal_with_header_and_comments():
    x = parse_signal("# format=1\nx\n1.5\n-2\n\n3e-1\n")
    np.testing.assert_array_equal(x, [1.5, -2.0, 0.3])


def test_parse_signal_without_header():
    np.testing.assert_array_equal(parse_signal("1\n2\n3\n"), [1.0, 2.0, 3.0])


@pytest.mark.parametrize("text", ["", "# only a comment\n", "x\n1\nabc\n", "1,2\n3,4\n", "x\n1\nnan\n"])
def test_parse_signal_rejects_bad_files(text):
    with pytest.raises(InvalidInputError):
        parse_signal(text)


def test_signal_file_round_trip(tmp_path):
    x = np.random.default_rng(0).normal(size=40)
    path = tmp_path / "signal.csv"
    write_signal(x, path)
    assert path.read_text().startswith("# format=1\nx\n")
    np.testing.assert_array_equal(read_signal(path), x)


def test_missing_signal_file(tmp_path):
    with pytest.raises(InvalidInputError):
        read_signal(tmp_path / "nope.csv")


# ============================================================================
# GRIDS
# ============================================================================

def test_grid_frame_is_ordered_by_k_then_p():
    g = swdft_direct(np.arange(10.0), 4)
    frame = grid_frame(g)
    assert list(frame.columns) == ["k", "p", "re", "im", "mod2", "phase"]
    assert len(frame) == 4 * 7
    assert frame["k"].tolist()[:7] == [0] * 7
    assert frame["p"].tolist()[:7] == list(range(3, 10))
    np.testing.assert_allclose(frame["re"].to_numpy(), g.coefs.real.ravel())


def test_grid_views_select_columns():
    g = swdft_direct(np.arange(10.0), 4)
    assert list(grid_frame(g, "mod2").columns) == ["k", "p", "mod2"]
    assert list(grid_frame(g, "complex").columns) == ["k", "p", "re", "im"]
    with pytest.raises(InvalidInputError):
        grid_frame(g, "bogus")


def test_grid_file_round_trip(tmp_path):
    g = swdft_direct(np.random.default_rng(1).normal(size=30), 8)
    path = tmp_path / "grid.csv"
    write_grid(g, path, "complex")
    frame = read_grid_frame(path)
    coefs = (frame["re"].to_numpy() + 1j * frame["im"].to_numpy()).reshape(8, -1)
    np.testing.assert_array_equal(coefs, g.coefs)


# ============================================================================
# COMPOSITE SPECS
# ============================================================================

def test_parse_composite_spec():
    spec = parse_composite_spec(SPEC_TEXT)
    assert spec.N == 64 and spec.sigma == 0.5 and spec.seed == 7
    assert len(spec.components) == 2
    assert spec.components[0] == LocalSignalSpec(S=17, L=31, A=1.0, F=8.0, phi=1.0)


def test_composite_spec_round_trip(tmp_path):
    spec = parse_composite_spec(SPEC_TEXT)
    path = tmp_path / "spec.txt"
    write_composite_spec(spec, path)
    assert read_composite_spec(path) == spec


@pytest.mark.parametrize("text", [
    "N=64\n",  # no component block
    "sigma=1\nS,L,A,F,phi\n1,10,1,2,0\n",  # no N
    "N=64\nS,L,A,F\n1,10,1,2\n",  # wrong header
    "N=64\nS,L,A,F,phi\n60,10,1,2,0\n",  # runs past N
    "N=64\nS,L,A,F,phi\n1,10,-1,2,0\n",  # negative amplitude
])
def test_parse_composite_spec_rejects_bad_files(text):
    with pytest.raises(InvalidSpecError):
        parse_composite_spec(text)


# ============================================================================
# ESTIMATES
# ============================================================================

def test_estimate_frame_phase_units(tmp_path):
    result = EstimateResult(
        k_star=2, S=17, L=31, A=1.0, F=8.0, f=2.0, phi=np.pi, mse_a=-3.0, mse_b=0.5, mse_c=3.5,
        window_size=16, signal_length=64,
    )
    assert estimate_frame(result)["phi"].iloc[0] == pytest.approx(np.pi)
    assert estimate_frame(result, "cycles")["phi"].iloc[0] == pytest.approx(0.5)

    path = tmp_path / "estimate.csv"
    write_estimate(result, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "# format=1"
    assert lines[1] == "kstar,S,L,A,F,f,phi,mseA,mseB,mseC"
    assert lines[2].startswith("2,17,31,1,8,2,")


def test_composite_spec_model_check():
    with pytest.raises(InvalidSpecError):
        CompositeSpec(components=[LocalSignalSpec(S=10, L=60, A=1, F=2)], N=64).check()
