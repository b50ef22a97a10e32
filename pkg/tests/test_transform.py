"""
Tests for the DFT / SWDFT kernels and coefficient views
"""
import numpy as np
import pytest
from pydantic import ValidationError

from swdft.config import SwdftSettings
from swdft.errors import FrequencyIndexError, InvalidInputError, InvalidWindowError
from swdft.models import LocalSignalSpec, StepSpec, SwdftGrid
from swdft.signals import synth_local, synth_step
from swdft.transform import (
    dft,
    frequency_row,
    frequency_series,
    swdft,
    swdft_direct,
    swdft_sliding,
    view,
)


def assert_oracle_match(sliding, direct, rel=1e-9):
    """Sliding grid agrees with the direct grid coefficient by coefficient"""
    assert sliding.coefs.shape == direct.coefs.shape
    assert np.all(np.abs(sliding.coefs - direct.coefs) <= rel * (1.0 + np.abs(direct.coefs)))


# ============================================================================
# DFT
# ============================================================================

def test_dft_constant_signal():
    """Constant signal puts everything at DC"""
    np.testing.assert_allclose(dft([1, 1, 1, 1]), [2, 0, 0, 0], atol=1e-15)


def test_dft_quarter_cosine():
    """[1, 0, -1, 0] has unit coefficients at k = 1 and its alias 3"""
    np.testing.assert_allclose(dft([1, 0, -1, 0]), [0, 1, 0, 1], atol=1e-15)


def test_dft_linearity():
    rng = np.random.default_rng(1)
    x, y = rng.normal(size=50), rng.normal(size=50)
    np.testing.assert_allclose(dft(2.5 * x - 0.75 * y), 2.5 * dft(x) - 0.75 * dft(y), atol=1e-12)


def test_dft_rejects_empty_and_non_finite():
    with pytest.raises(InvalidInputError):
        dft([])
    with pytest.raises(InvalidInputError):
        dft([1.0, np.nan])


# ============================================================================
# SWDFT
# ============================================================================

def test_swdft_shape_and_positions():
    g = swdft_direct(np.arange(20.0), 8)
    assert g.coefs.shape == (8, 13)
    assert g.num_positions == 13
    assert g.positions[0] == 7 and g.positions[-1] == 19


def test_swdft_constant_signal():
    """Constant c gives c√n at k = 0 and nothing elsewhere"""
    for engine in ("direct", "sliding"):
        g = swdft(np.full(40, 3.0), 8, engine)
        np.testing.assert_allclose(g.coefs[0], 3.0 * np.sqrt(8), rtol=1e-12)
        assert np.max(np.abs(g.coefs[1:])) < 1e-12


def test_swdft_global_cosine_energy():
    """cos(2π·32t/128) with n = 8: energy A²n/4 = 2 at k = 2 and its alias k = 6"""
    t = np.arange(128)
    g = swdft_direct(np.cos(2 * np.pi * 32 * t / 128), 8)
    mod2 = view(g, "mod2")
    np.testing.assert_allclose(mod2[2], 2.0, rtol=1e-9)
    np.testing.assert_allclose(mod2[6], 2.0, rtol=1e-9)
    others = np.delete(mod2, [2, 6], axis=0)
    assert others.max() < 1e-18


def test_swdft_local_cosine_trapezoid():
    """2cos(πt/4) on 31..94 with n = 16: zero before/after, plateau A²n/4 = 16 fully inside"""
    spec = LocalSignalSpec(S=31, L=64, A=2.0, F=16.0, phi=0.0)
    g = swdft_direct(synth_local(spec, 128), 16)
    series = view(g, "mod2")[2]
    p = g.positions

    assert np.all(series[p < 31] == 0.0)
    assert np.all(series[p >= 94 + 16] < 1e-24)
    inside = (p >= 31 + 15) & (p <= 94)
    np.testing.assert_allclose(series[inside], 16.0, rtol=1e-9)
    # partially covered windows ramp between the two
    assert np.all(series[(p >= 31) & (p < 46)] < 16.0 * (1 + 1e-9))


def test_window_equal_to_signal_length():
    """n = N is a single column equal to the DFT"""
    x = np.random.default_rng(2).normal(size=16)
    g = swdft_sliding(x, 16)
    assert g.coefs.shape == (16, 1)
    np.testing.assert_allclose(g.coefs[:, 0], dft(x), atol=1e-12)


def test_invalid_window_sizes():
    x = np.ones(10)
    for n in (0, 11, -1):
        with pytest.raises(InvalidWindowError):
            swdft_direct(x, n)
        with pytest.raises(InvalidWindowError):
            swdft_sliding(x, n)


def test_grid_is_read_only():
    g = swdft_direct(np.ones(10), 4)
    with pytest.raises(ValueError):
        g.coefs[0, 0] = 1.0


def test_grid_leaves_caller_array_writable():
    coefs = np.zeros((4, 7), dtype=np.complex128)
    g = SwdftGrid(window_size=4, signal_length=10, coefs=coefs)
    coefs[0, 0] = 5.0
    assert coefs.flags.writeable
    assert g.coefs[0, 0] == 0.0
    assert not g.coefs.flags.writeable


# ============================================================================
# SLIDING KERNEL VS DIRECT ORACLE
# ============================================================================

def test_sliding_matches_direct_random():
    x = np.random.default_rng(3).normal(size=512)
    assert_oracle_match(swdft_sliding(x, 32), swdft_direct(x, 32))


def test_sliding_matches_direct_many_signals():
    rng = np.random.default_rng(4)
    for _ in range(100):
        n = int(rng.choice([8, 16, 32, 64]))
        N = int(rng.integers(n, 513))
        x = rng.normal(scale=rng.uniform(0.1, 10.0), size=N)
        assert_oracle_match(swdft_sliding(x, n), swdft_direct(x, n))


def test_sliding_matches_direct_on_step():
    x = synth_step(StepSpec(N=256, d=128))
    assert_oracle_match(swdft_sliding(x, 16), swdft_direct(x, 16))


def test_sliding_matches_direct_on_local_signal():
    x = synth_local(LocalSignalSpec(S=31, L=64, A=2.0, F=16.0, phi=0.0), 128)
    assert_oracle_match(swdft_sliding(x, 16), swdft_direct(x, 16))


def test_sliding_resync_path():
    """Forcing frequent re-initialization gives the same grid"""
    x = np.random.default_rng(5).normal(size=300)
    assert_oracle_match(swdft_sliding(x, 8, resync_interval=7), swdft_direct(x, 8))


def test_sliding_resync_every_column():
    x = np.random.default_rng(6).normal(size=40)
    assert_oracle_match(swdft_sliding(x, 8, resync_interval=1), swdft_direct(x, 8))


@pytest.mark.parametrize("interval", [0, -3])
def test_sliding_rejects_bad_resync_interval(interval):
    with pytest.raises(InvalidInputError):
        swdft_sliding(np.ones(20), 4, resync_interval=interval)


def test_resync_interval_setting_is_validated(monkeypatch):
    monkeypatch.setenv("SWDFT_RESYNC_INTERVAL", "0")
    with pytest.raises(ValidationError):
        SwdftSettings()


# ============================================================================
# GRID PROPERTIES
# ============================================================================

def test_parseval_per_column():
    rng = np.random.default_rng(6)
    for _ in range(300):
        n = int(rng.integers(1, 33))
        x = rng.normal(size=int(rng.integers(n, 100)))
        g = swdft_sliding(x, n)
        energy = np.sum(np.abs(g.coefs) ** 2, axis=0)
        window_energy = np.array([np.sum(x[p - n + 1:p + 1] ** 2) for p in g.positions])
        np.testing.assert_allclose(energy, window_energy, rtol=1e-9, atol=1e-12)


def test_conjugate_symmetry():
    rng = np.random.default_rng(7)
    for _ in range(300):
        n = int(rng.integers(2, 33))
        g = swdft_direct(rng.normal(size=n + int(rng.integers(0, 40))), n)
        for k in range(1, n):
            np.testing.assert_allclose(g.coefs[n - k], np.conj(g.coefs[k]), atol=1e-12)


def test_column_equals_dft_of_window():
    x = np.random.default_rng(8).normal(size=64)
    g = swdft_sliding(x, 16)
    for p in (15, 30, 63):
        np.testing.assert_allclose(g.column(p), dft(x[p - 15:p + 1]), atol=1e-12)


# ============================================================================
# FREQUENCY SERIES AND VIEWS
# ============================================================================

def test_frequency_series_is_grid_row():
    x = np.random.default_rng(9).normal(size=80)
    g = swdft_direct(x, 8)
    for k in range(8):
        np.testing.assert_array_equal(frequency_series(g, k), g.coefs[k])


def test_frequency_series_constant_signal():
    g = swdft_sliding(np.full(30, 2.0), 4)
    np.testing.assert_allclose(frequency_series(g, 0), 2.0 * np.sqrt(4), rtol=1e-12)


def test_frequency_series_out_of_range():
    g = swdft_direct(np.ones(10), 4)
    with pytest.raises(FrequencyIndexError):
        frequency_series(g, 4)
    with pytest.raises(IndexError):
        frequency_series(g, -1)


def test_frequency_row_matches_grid():
    x = np.random.default_rng(10).normal(size=100)
    g = swdft_direct(x, 16)
    for k in (0, 3, 8, 15):
        np.testing.assert_allclose(frequency_row(x, 16, k), g.coefs[k], atol=1e-12)


def test_views():
    x = np.random.default_rng(11).normal(size=60)
    g = swdft_sliding(x, 8)
    mod2 = view(g, "mod2")
    assert np.all(mod2 >= 0)
    np.testing.assert_allclose(view(g, "real") ** 2 + view(g, "imag") ** 2, mod2, atol=1e-12)
    np.testing.assert_allclose(mod2, np.abs(g.coefs) ** 2, atol=1e-12)
    phase = view(g, "phase")
    assert np.all(phase > -np.pi) and np.all(phase <= np.pi)
    np.testing.assert_array_equal(view(g, "complex"), g.coefs)


def test_phase_of_positive_constant_is_zero():
    g = swdft_direct(np.full(12, 5.0), 4)
    np.testing.assert_array_equal(view(g, "phase")[0], 0.0)


def test_phase_negative_real_is_pi():
    g = swdft_direct(np.full(12, -1.0), 4)
    np.testing.assert_allclose(view(g, "phase")[0], np.pi)
