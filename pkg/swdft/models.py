"""
Domain models
Pydantic types for signals, transform grids, estimates and simulation reports
"""

import math
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .config import available_cpus, settings
from .errors import InvalidSpecError

TWO_PI = 2.0 * math.pi

CoefView = Literal["complex", "real", "imag", "mod2", "phase"]
Engine = Literal["sliding", "direct"]
KSelection = Literal["option1", "option2"]
SearchMode = Literal["exhaustive", "randomized"]
PhaseUnits = Literal["radians", "cycles"]


def wrap_phase(phi: float) -> float:
    """Wrap an angle in radians to [0, 2π)"""
    wrapped = math.fmod(phi, TWO_PI)
    if wrapped < 0.0:
        wrapped += TWO_PI
    # fmod of a tiny negative angle can round up to exactly 2π
    return 0.0 if wrapped >= TWO_PI else wrapped


# ============================================================================
# TRANSFORM MODELS
# ============================================================================

class SwdftGrid(BaseModel):
    """n x P array of SWDFT coefficients; row = frequency k, column = window position p"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    window_size: int = Field(ge=1)
    signal_length: int = Field(ge=1)
    coefs: np.ndarray  # complex, shape (n, N - n + 1)

    @model_validator(mode="after")
    def _check_shape(self) -> "SwdftGrid":
        n, N = self.window_size, self.signal_length
        if n > N:
            raise ValueError(f"window size {n} exceeds signal length {N}")
        if self.coefs.shape != (n, N - n + 1):
            raise ValueError(f"coefs shape {self.coefs.shape} != ({n}, {N - n + 1})")
        # frozen copy; the caller keeps a writable array
        coefs = np.array(self.coefs, copy=True)
        coefs.setflags(write=False)
        object.__setattr__(self, "coefs", coefs)
        return self

    @property
    def n(self) -> int:
        return self.window_size

    @property
    def N(self) -> int:
        return self.signal_length

    @property
    def num_positions(self) -> int:
        return self.signal_length - self.window_size + 1

    @property
    def positions(self) -> np.ndarray:
        """Window positions p = n-1..N-1, one per column"""
        return np.arange(self.window_size - 1, self.signal_length)

    def column(self, p: int) -> np.ndarray:
        """Coefficients of window position p (the window covering p-n+1..p)"""
        return self.coefs[:, p - self.window_size + 1]


# ============================================================================
# SIGNAL MODELS
# ============================================================================

class LocalSignalSpec(BaseModel):
    """Five-parameter local periodic signal A cos(2πFt/N + phi) on S..S+L-1"""

    model_config = ConfigDict(allow_inf_nan=False)

    S: int = Field(ge=0)  # start index
    L: int = Field(ge=1)  # length in samples
    A: float = Field(ge=0.0)  # amplitude
    F: float = Field(ge=0.0)  # cycles per length-N signal
    phi: float = 0.0  # phase, radians, stored in [0, 2π)

    @field_validator("phi")
    @classmethod
    def _wrap_phi(cls, value: float) -> float:
        return wrap_phase(value)

    @property
    def end(self) -> int:
        """Last index of the oscillating part"""
        return self.S + self.L - 1

    def check(self, N: int) -> None:
        """Raise InvalidSpecError unless the spec fits a length-N signal"""
        if N < 2:
            raise InvalidSpecError(f"signal length N={N} too short for a local signal")
        if self.S > N - 2:
            raise InvalidSpecError(f"start S={self.S} outside 0..{N - 2}")
        if self.L > N - self.S:
            raise InvalidSpecError(f"length L={self.L} outside 1..{N - self.S} for S={self.S}")


class CompositeSpec(BaseModel):
    """Sum of R local signals plus iid Gaussian noise"""

    components: List[LocalSignalSpec] = Field(min_length=1)
    N: int = Field(ge=2)
    sigma: float = Field(default=0.0, ge=0.0, allow_inf_nan=False)
    seed: int = Field(default=0, ge=0)

    def check(self) -> None:
        for spec in self.components:
            spec.check(self.N)


class StepSpec(BaseModel):
    """Step function s_t = 1 for t >= d"""

    N: int = Field(ge=1)
    d: int = Field(ge=0)

    @model_validator(mode="after")
    def _check_step(self) -> "StepSpec":
        if self.d > self.N - 1:
            raise ValueError(f"step location d={self.d} outside 0..{self.N - 1}")
        return self


# ============================================================================
# ANALYTIC MODELS
# ============================================================================

class WindowState(BaseModel):
    """Where window position p sits relative to a local signal's support"""

    model_config = ConfigDict(frozen=True)

    state: int = Field(ge=1, le=5)  # 1 before, 2 entering, 3 inside, 4 leaving, 5 after
    q: int = Field(ge=0)  # window points on the oscillating part


# ============================================================================
# ESTIMATION MODELS
# ============================================================================

class DesignColumns(BaseModel):
    """SWDFT rows of the cosine and sine templates for fixed (S, L, F, k)"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    c1: np.ndarray
    c2: np.ndarray


class BetaPair(BaseModel):
    """Linear coefficients of the cosine (beta1) and sine (beta2) templates"""

    beta1: float
    beta2: float
    degenerate: bool = False  # design carried no information


class EstimateOptions(BaseModel):
    """Knobs of the local-signal estimator"""

    k_selection: KSelection = "option1"
    k_run: int = Field(default=1, ge=1)  # Option 1 over runs of consecutive positions
    l_min: int = Field(default_factory=lambda: settings.l_min, ge=1)
    l_max: Optional[int] = None
    s_min: int = Field(default=0, ge=0)
    s_max: Optional[int] = None
    search: SearchMode = "exhaustive"
    budget: int = Field(default=500, ge=1)  # cells tried by randomized search
    seed: int = Field(default=0, ge=0)
    use_imag: bool = False  # stack imaginary parts into the regression
    jobs: int = Field(default_factory=lambda: settings.jobs, ge=1)
    f_xatol: float = Field(default_factory=lambda: settings.f_xatol, gt=0.0)
    f_maxiter: int = Field(default_factory=lambda: settings.f_maxiter, ge=1)


class EstimateResult(BaseModel):
    """Recovered local-signal parameters and fit diagnostics"""

    k_star: int
    S: int
    L: int
    A: float
    F: float  # cycles per length-N signal
    f: float  # cycles per window
    phi: float  # radians in [0, 2π)
    mse_a: float  # mean-only fit error
    mse_b: float  # model fit error
    mse_c: float  # mse_b - mse_a
    window_size: int
    signal_length: int
    k_selection: KSelection = "option1"
    degenerate: bool = False

    @property
    def phi_cycles(self) -> float:
        return self.phi / TWO_PI


# ============================================================================
# SIMULATION MODELS
# ============================================================================

class StudyConfig(BaseModel):
    """Parameter grid of the simulation study"""

    n_list: List[int] = Field(default_factory=lambda: [8, 16, 32], min_length=1)
    sigma_list: List[float] = Field(default_factory=lambda: [0.0, 0.5, 1.0, 1.5, 2.0], min_length=1)
    F_list: List[float] = Field(default_factory=lambda: [8.0, 11.0], min_length=1)
    A: float = 1.0
    N: int = 64
    S: int = 17
    L: int = 31
    phi: float = 1.0
    reps: int = Field(default=25, ge=1)
    master_seed: int = Field(default=12345, ge=0)
    jobs: int = Field(default_factory=available_cpus, ge=1)
    k_selection: KSelection = "option1"
    l_min: int = Field(default=8, ge=1)

    def cell_keys(self) -> List[tuple]:
        return [(n, sigma, F) for n in self.n_list for sigma in self.sigma_list for F in self.F_list]


class ReplicateRecord(BaseModel):
    """One seeded replicate of a study cell"""

    index: int
    seed: int
    result: Optional[EstimateResult] = None
    error: Optional[str] = None  # set when the estimator failed
    correct_k: bool = False


class CellResult(BaseModel):
    """Aggregated accuracy of one (n, sigma, F) cell"""

    model_config = ConfigDict(ser_json_inf_nan="constants")

    n: int
    sigma: float
    F: float
    reps: int
    replicates: List[ReplicateRecord]
    mse_A: float
    mse_S: float
    mse_L: float
    mse_f: float
    mse_phi: float  # wrapped circular error
    mse_phi_unwrapped: float
    fraction_correct_k: float = Field(ge=0.0, le=1.0)
    mean_A: float
    failed: int = 0


class ReportMetadata(BaseModel):
    master_seed: int
    runtime_seconds: float
    library_version: str
    generator: str
    failed_replicates: int = 0


class SimulationReport(BaseModel):
    """Every cell of a study plus run metadata"""

    format: int = 1
    config: StudyConfig
    cells: List[CellResult]
    metadata: ReportMetadata

    def cell(self, n: int, sigma: float, F: float) -> Optional[CellResult]:
        for cell in self.cells:
            if cell.n == n and cell.sigma == sigma and cell.F == F:
                return cell
        return None
