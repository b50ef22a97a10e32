"""
Signal synthesis
Local periodic signals, R-signal composites, step functions, seeded Gaussian noise and frequency helpers
"""

import logging
import math

import numpy as np

from .errors import InvalidInputError, InvalidSpecError
from .models import CompositeSpec, LocalSignalSpec, StepSpec

logger = logging.getLogger(__name__)

# Noise is drawn from a counter-based Philox stream through numpy's ziggurat normal sampler.
# Changing either breaks bit-reproducibility of stored simulation tables.
NOISE_GENERATOR = "Philox+ziggurat"


def make_rng(seed: int) -> np.random.Generator:
    if seed < 0:
        raise InvalidInputError(f"seed must be non-negative, got {seed}")
    return np.random.Generator(np.random.Philox(seed))


# ============================================================================
# SYNTHESIS
# ============================================================================

def synth_local(spec: LocalSignalSpec, N: int) -> np.ndarray:
    """A cos(2πFt/N + φ) on S..S+L-1, zero elsewhere"""
    spec.check(N)
    x = np.zeros(N)
    t = np.arange(spec.S, spec.end + 1)
    x[t] = spec.A * np.cos(2.0 * np.pi * spec.F * t / N + spec.phi)
    return x


def synth_global(A: float, F: float, phi: float, N: int) -> np.ndarray:
    return synth_local(LocalSignalSpec(S=0, L=N, A=A, F=F, phi=phi), N)


def gaussian_noise(N: int, sigma: float, seed: int) -> np.ndarray:
    if sigma < 0 or not math.isfinite(sigma):
        raise InvalidInputError(f"noise sigma must be finite and >= 0, got {sigma}")
    if sigma == 0:
        return np.zeros(N)
    return sigma * make_rng(seed).standard_normal(N)


def synth_composite(c: CompositeSpec) -> np.ndarray:
    """Sum of the components plus iid N(0, sigma²) noise"""
    c.check()
    y = np.zeros(c.N)
    for spec in c.components:
        y += synth_local(spec, c.N)
    if c.sigma > 0:
        y += gaussian_noise(c.N, c.sigma, c.seed)
    logger.debug(f"composite of {len(c.components)} components, N={c.N}, sigma={c.sigma}")
    return y


def synth_step(s: StepSpec) -> np.ndarray:
    return (np.arange(s.N) >= s.d).astype(np.float64)


# ============================================================================
# FREQUENCY HELPERS
# ============================================================================

def _nearest_integer(f: float) -> int:
    if not math.isfinite(f) or f < 0:
        raise InvalidInputError(f"frequency must be finite and >= 0, got {f}")
    return math.floor(f + 0.5)


def principal_alias(f: float) -> float:
    """Fold a frequency in cycles/sample into [0, 1/2]; 1/2 maps to itself"""
    return abs(f - _nearest_integer(f))


def alias_sign(f: float) -> int:
    """Sign s with sin(2πft) = s·sin(2πf't) on integer t, f' = principal_alias(f)"""
    return -1 if f - _nearest_integer(f) < 0 else 1


def cycles_per_window(F: float, N: int, n: int) -> float:
    """f = nF/N"""
    if not 1 <= n <= N:
        raise InvalidSpecError(f"need 1 <= n <= N, got n={n}, N={N}")
    return n * F / N


def cycles_per_signal(f: float, N: int, n: int) -> float:
    """F = fN/n"""
    if not 1 <= n <= N:
        raise InvalidSpecError(f"need 1 <= n <= N, got n={n}, N={N}")
    return f * N / n
