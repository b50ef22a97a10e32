"""
Sliding Window Discrete Fourier Transform
Direct and O(Nn) sliding kernels, coefficient views and per-frequency time-series
"""

import logging
from typing import Optional

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .config import settings
from .errors import FrequencyIndexError, InvalidInputError, InvalidWindowError
from .models import CoefView, Engine, SwdftGrid

logger = logging.getLogger(__name__)


# ============================================================================
# INPUT CHECKS
# ============================================================================

def as_signal(x) -> np.ndarray:
    """Coerce `x` to a finite 1-D float64 array"""
    try:
        signal = np.asarray(x, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise InvalidInputError(f"signal is not numeric: {e}")
    if signal.ndim != 1:
        raise InvalidInputError(f"signal must be one-dimensional, got shape {signal.shape}")
    if signal.size == 0:
        raise InvalidInputError("signal is empty")
    if not np.all(np.isfinite(signal)):
        raise InvalidInputError("signal contains NaN or Inf")
    return signal


def check_window(n: int, N: int) -> int:
    if int(n) != n or not 1 <= n <= N:
        raise InvalidWindowError(f"window size n={n} outside 1..{N}")
    return int(n)


def check_frequency(k: int, n: int) -> int:
    if int(k) != k or not 0 <= k <= n - 1:
        raise FrequencyIndexError(f"frequency index k={k} outside 0..{n - 1}")
    return int(k)


def _kernel(n: int, k: int) -> np.ndarray:
    """ω_n^{-jk} for j = 0..n-1; jk is reduced mod n before scaling"""
    j = np.arange(n)
    return np.exp(-2j * np.pi * ((j * k) % n) / n)


# ============================================================================
# DFT / SWDFT KERNELS
# ============================================================================

def dft(x) -> np.ndarray:
    """Unitary DFT, a_k = N^{-1/2} Σ_j x_j ω_N^{-jk}"""
    signal = as_signal(x)
    return np.fft.fft(signal, norm="ortho")


def swdft_direct(x, n: int) -> SwdftGrid:
    """Transform every length-n window independently; column p covers x[p-n+1..p]"""
    signal = as_signal(x)
    n = check_window(n, signal.size)
    windows = sliding_window_view(signal, n)  # (P, n)
    coefs = np.fft.fft(windows, axis=1, norm="ortho").T
    return SwdftGrid(window_size=n, signal_length=signal.size, coefs=np.ascontiguousarray(coefs))


def swdft_sliding(x, n: int, resync_interval: Optional[int] = None) -> SwdftGrid:
    """
    SWDFT by the per-frequency recurrence
    a_{k,p+1} = ω_n^k (a_{k,p} + (x_{p+1} - x_{p-n+1}) / √n)

    The first column comes from a direct DFT; every `resync_interval` columns
    the whole column is recomputed directly so rounding drift cannot accumulate.
    """
    signal = as_signal(x)
    N = signal.size
    n = check_window(n, N)
    interval = settings.resync_interval if resync_interval is None else resync_interval
    if interval < 1:
        raise InvalidInputError(f"resync interval must be at least 1, got {interval}")
    P = N - n + 1

    twiddle = np.exp(2j * np.pi * np.arange(n) / n)
    scale = 1.0 / np.sqrt(n)
    coefs = np.empty((n, P), dtype=np.complex128)
    coefs[:, 0] = np.fft.fft(signal[:n], norm="ortho")

    for col in range(1, P):
        if col % interval == 0:
            coefs[:, col] = np.fft.fft(signal[col:col + n], norm="ortho")
            continue
        p = n - 1 + col
        coefs[:, col] = twiddle * (coefs[:, col - 1] + (signal[p] - signal[p - n]) * scale)

    logger.debug(f"sliding SWDFT N={N} n={n} P={P} resync every {interval}")
    return SwdftGrid(window_size=n, signal_length=N, coefs=coefs)


def swdft(x, n: int, engine: Engine = "sliding") -> SwdftGrid:
    if engine == "direct":
        return swdft_direct(x, n)
    if engine == "sliding":
        return swdft_sliding(x, n)
    raise InvalidInputError(f"unknown engine '{engine}'")


def frequency_row(x, n: int, k: int) -> np.ndarray:
    """Row k of the SWDFT of x without building the full grid"""
    signal = as_signal(x)
    n = check_window(n, signal.size)
    k = check_frequency(k, n)
    # np.correlate conjugates its second argument
    return np.correlate(signal, np.conj(_kernel(n, k)), mode="valid") / np.sqrt(n)


# ============================================================================
# VIEWS
# ============================================================================

def frequency_series(g: SwdftGrid, k: int) -> np.ndarray:
    """[a_{k,n-1}, ..., a_{k,N-1}]"""
    k = check_frequency(k, g.window_size)
    return g.coefs[k].copy()


def view(g: SwdftGrid, v: CoefView) -> np.ndarray:
    return view_array(g.coefs, v)


def view_array(coefs: np.ndarray, v: CoefView) -> np.ndarray:
    """Elementwise view of a complex array; phase lies in (-π, π]"""
    if v == "complex":
        return coefs.copy()
    if v == "real":
        return coefs.real.copy()
    if v == "imag":
        return coefs.imag.copy()
    if v == "mod2":
        return coefs.real ** 2 + coefs.imag ** 2
    if v == "phase":
        phase = np.angle(coefs)
        # atan2 returns -π for (-0.0 imaginary, negative real)
        return np.where(phase <= -np.pi, np.pi, phase)
    raise InvalidInputError(f"unknown view '{v}'")
