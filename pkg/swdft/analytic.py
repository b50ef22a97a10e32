"""
Closed-form SWDFT predictions
Dirichlet kernel and weight, exact coefficients of global and local periodic signals and of the step function
"""

import logging
import math
from typing import Literal, Optional, Tuple

import numpy as np
import pandas as pd

from .errors import InvalidInputError, InvalidSpecError, UnsupportedConfigurationError
from .models import LocalSignalSpec, StepSpec, WindowState
from .signals import synth_local, synth_step
from .transform import check_frequency, check_window, swdft_direct

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
SINGULARITY_TOL = 1e-12

ClosedFormKind = Literal["local", "global", "step"]


# ============================================================================
# DIRICHLET KERNEL
# ============================================================================

def _dirichlet_core(order, x) -> np.ndarray:
    """D_order(x) with broadcasting over both arguments; order 0 gives 0"""
    order = np.asarray(order, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)

    m = np.rint(x / TWO_PI)
    at_peak = np.abs(x - m * TWO_PI) <= SINGULARITY_TOL
    peak = order * np.where(np.mod(m * (order - 1), 2) == 0, 1.0, -1.0)

    with np.errstate(divide="ignore", invalid="ignore"):
        step = TWO_PI / order
        m_zero = np.rint(x / step)
        at_zero = ~at_peak & (np.abs(x - m_zero * step) <= SINGULARITY_TOL)
        ratio = np.sin(order * x / 2.0) / np.sin(x / 2.0)

    value = np.where(at_peak, peak, np.where(at_zero, 0.0, ratio))
    return np.where(order == 0, 0.0, value)


def _check_order(n: int) -> int:
    if int(n) != n or n < 1:
        raise InvalidInputError(f"kernel order must be a positive integer, got {n}")
    return int(n)


def dirichlet(n: int, x):
    """
    D_n(x) = sin(nx/2) / sin(x/2)

    Removable singularities are resolved exactly: n(-1)^{m(n-1)} at x = 2πm
    and 0 at x = 2πm/n for m not a multiple of n. Accepts scalars or arrays.
    """
    value = _dirichlet_core(_check_order(n), x)
    return float(value) if value.ndim == 0 else value


def dirichlet_weight(n: int, x):
    """e^{-ix(n-1)/2} D_n(x), which equals Σ_{j=0}^{n-1} e^{-ijx}"""
    n = _check_order(n)
    x_arr = np.asarray(x, dtype=np.float64)
    value = np.exp(-0.5j * x_arr * (n - 1)) * _dirichlet_core(n, x_arr)
    return complex(value) if value.ndim == 0 else value


# ============================================================================
# WINDOW STATES
# ============================================================================

def window_state(spec: LocalSignalSpec, n: int, p: int) -> WindowState:
    """Classify window [p-n+1, p] against the support [S, E] of a local signal"""
    if spec.L < n:
        raise UnsupportedConfigurationError(
            f"closed form needs L >= n (got L={spec.L}, n={n}); use the direct transform"
        )
    S, E = spec.S, spec.end
    if p < S:
        return WindowState(state=1, q=0)
    if p < S + n - 1:
        return WindowState(state=2, q=p - S + 1)
    if p <= E:
        return WindowState(state=3, q=n)
    if p < E + n:
        return WindowState(state=4, q=E - p + n)
    return WindowState(state=5, q=0)


# ============================================================================
# PERIODIC SIGNALS
# ============================================================================

def _periodic_coefs(A: float, F: float, phi: float, S: int, E: int, N: int, n: int, k, p) -> np.ndarray:
    """
    Euler-split closed form over the window/support overlap J = [j0, j1]:

    a_{k,p} = A/(2√n) [ e^{iφ} e^{iθ} e^{-i x1 (j0+j1)/2} D_q(x1)
                      + e^{-iφ} e^{-iθ} e^{-i x2 (j0+j1)/2} D_q(x2) ]

    with x1 = 2π(k-f)/n, x2 = 2π(k+f)/n, θ = 2πf(p-n+1)/n, f = nF/N, q = j1-j0+1.
    """
    k = np.asarray(k, dtype=np.float64)
    p_hat = np.asarray(p, dtype=np.int64) - n + 1
    j0 = np.maximum(0, S - p_hat)
    j1 = np.minimum(n - 1, E - p_hat)
    q = np.maximum(j1 - j0 + 1, 0)
    centre = (j0 + j1) / 2.0

    f = n * F / N
    x1 = TWO_PI * (k - f) / n
    x2 = TWO_PI * (k + f) / n
    theta = TWO_PI * np.mod(f * p_hat, n) / n

    first = np.exp(1j * (phi + theta - x1 * centre)) * _dirichlet_core(q, x1)
    second = np.exp(-1j * (phi + theta + x2 * centre)) * _dirichlet_core(q, x2)
    coefs = A / (2.0 * math.sqrt(n)) * (first + second)
    return np.where(q > 0, coefs, 0.0 + 0.0j)


def _check_position(p: int, n: int, N: int) -> int:
    if int(p) != p or not n - 1 <= p <= N - 1:
        raise InvalidInputError(f"window position p={p} outside {n - 1}..{N - 1}")
    return int(p)


def swdft_local_closed(spec: LocalSignalSpec, N: int, n: int, k: int, p: int) -> complex:
    """Exact a_{k,p} of the local signal `spec` in any of the five window states"""
    spec.check(N)
    n = check_window(n, N)
    k = check_frequency(k, n)
    p = _check_position(p, n, N)
    window_state(spec, n, p)
    return complex(_periodic_coefs(spec.A, spec.F, spec.phi, spec.S, spec.end, N, n, k, p))


def swdft_global_closed(A: float, F: float, phi: float, N: int, n: int, k: int, p: int) -> complex:
    """
    Exact a_{k,p} of A cos(2πFt/N + φ) over the whole signal

    Both Dirichlet-weight terms are kept, so k = f = n/2 (where they coincide) needs no special case.
    """
    n = check_window(n, N)
    k = check_frequency(k, n)
    p = _check_position(p, n, N)
    return complex(_periodic_coefs(A, F, phi, 0, N - 1, N, n, k, p))


# ============================================================================
# STEP FUNCTION
# ============================================================================

def _step_coefs(d: int, n: int, k, p) -> np.ndarray:
    k = np.asarray(k, dtype=np.int64)
    p = np.asarray(p, dtype=np.int64)
    root_n = math.sqrt(n)

    ones = np.clip(p - d + 1, 0, n)  # window points at or after the step
    j0 = n - ones
    numerator = np.exp(-2j * np.pi * np.mod(k * j0, n) / n) - 1.0  # ω^{-kn} = 1
    with np.errstate(divide="ignore", invalid="ignore"):
        geometric = numerator / (1.0 - np.exp(-2j * np.pi * np.mod(k, n) / n))
    coefs = np.where(k == 0, ones + 0.0j, geometric) / root_n
    return np.where(ones > 0, coefs, 0.0 + 0.0j)


def swdft_step_closed(N: int, n: int, d: int, k: int, p: int) -> complex:
    """
    Exact a_{k,p} of s_t = 1{t >= d}

    0 before the step, (p-d+1)/√n at k=0 while the window straddles it,
    ω^{-k(d-p+n-1)}(1 - ω^{-k(p-d+1)}) / ((1 - ω^{-k})√n) otherwise, and √n·δ_k after.
    """
    _check_step(N, d)
    n = check_window(n, N)
    k = check_frequency(k, n)
    p = _check_position(p, n, N)
    return complex(_step_coefs(d, n, k, p))


def _check_step(N: int, d: int) -> None:
    if int(d) != d or not 0 <= d <= N - 1:
        raise InvalidSpecError(f"step location d={d} outside 0..{N - 1}")


def step_state(d: int, n: int, p: int) -> int:
    """1 before the step, 2 while the window contains it, 3 after"""
    if p < d:
        return 1
    if p <= d + n - 1:
        return 2
    return 3


# ============================================================================
# GRIDS AND ORACLE COMPARISON
# ============================================================================

def closed_form_grid(
    kind: ClosedFormKind,
    N: int,
    n: int,
    spec: Optional[LocalSignalSpec] = None,
    d: Optional[int] = None,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Closed-form n x P coefficient grid plus per-position state and overlap count

    `spec` drives the local and global kinds (global ignores S and L), `d` the step kind.
    """
    n = check_window(n, N)
    k = np.arange(n)[:, None]
    p = np.arange(n - 1, N)[None, :]

    if kind == "step":
        if d is None:
            raise InvalidInputError("step closed form needs a step location d")
        _check_step(N, d)
        states = np.array([step_state(d, n, int(pos)) for pos in p[0]])
        q = np.clip(p[0] - d + 1, 0, n)
        return _step_coefs(d, n, k, p), states, q

    if spec is None:
        raise InvalidInputError(f"{kind} closed form needs a signal spec")

    if kind == "global":
        coefs = _periodic_coefs(spec.A, spec.F, spec.phi, 0, N - 1, N, n, k, p)
        P = N - n + 1
        return coefs, np.full(P, 3), np.full(P, n)

    if kind == "local":
        spec.check(N)
        window_states = [window_state(spec, n, int(pos)) for pos in p[0]]
        coefs = _periodic_coefs(spec.A, spec.F, spec.phi, spec.S, spec.end, N, n, k, p)
        states = np.array([ws.state for ws in window_states])
        q = np.array([ws.q for ws in window_states])
        return coefs, states, q

    raise InvalidInputError(f"unknown closed form kind '{kind}'")


def direct_reference(
    kind: ClosedFormKind,
    N: int,
    spec: Optional[LocalSignalSpec] = None,
    d: Optional[int] = None,
) -> np.ndarray:
    """The synthesized signal whose direct SWDFT certifies a closed form"""
    if kind == "step":
        return synth_step(StepSpec(N=N, d=d))
    if kind == "global":
        return synth_local(LocalSignalSpec(S=0, L=N, A=spec.A, F=spec.F, phi=spec.phi), N)
    return synth_local(spec, N)


def compare_with_direct(
    kind: ClosedFormKind,
    N: int,
    n: int,
    spec: Optional[LocalSignalSpec] = None,
    d: Optional[int] = None,
) -> pd.DataFrame:
    """Long table k,p,state,q,re_closed,im_closed,re_direct,im_direct,absdiff ordered by k then p"""
    closed, states, q = closed_form_grid(kind, N, n, spec=spec, d=d)
    direct = swdft_direct(direct_reference(kind, N, spec=spec, d=d), n).coefs

    P = closed.shape[1]
    frame = pd.DataFrame({
        "k": np.repeat(np.arange(n), P),
        "p": np.tile(np.arange(n - 1, N), n),
        "state": np.tile(states, n),
        "q": np.tile(q, n),
        "re_closed": closed.real.ravel(),
        "im_closed": closed.imag.ravel(),
        "re_direct": direct.real.ravel(),
        "im_direct": direct.imag.ravel(),
        "absdiff": np.abs(closed - direct).ravel(),
    })
    logger.info(f"{kind} closed form vs direct: max |diff| = {frame['absdiff'].max():.3e}")
    return frame
