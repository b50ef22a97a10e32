"""
swdft command line
Subcommands for synthesis, transforms, closed-form checks, estimation, simulation and the HTTP service
"""

import logging
import math
import sys
from pathlib import Path
from typing import List, Literal, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, ValidationError
from pydantic_settings import BaseSettings, CliApp, CliSubCommand, SettingsConfigDict, SettingsError

from .analytic import ClosedFormKind, compare_with_direct, dirichlet, dirichlet_weight
from .config import available_cpus, configure_logging, settings
from .errors import SwdftError
from .estimation import estimate_local_signal
from .formats import read_composite_spec, read_signal, write_estimate, write_frame, write_grid, write_report, write_signal
from .models import (
    CoefView,
    CompositeSpec,
    Engine,
    EstimateOptions,
    KSelection,
    LocalSignalSpec,
    PhaseUnits,
    SearchMode,
    StepSpec,
    StudyConfig,
)
from .montecarlo import render_tables, run_study
from .signals import synth_composite, synth_step
from .transform import frequency_series, swdft, view_array

logger = logging.getLogger(__name__)

GridView = Literal["all", "complex", "real", "imag", "mod2", "phase"]


class _Command(BaseModel):
    def log_config(self) -> None:
        name = type(self).__name__.replace("Command", "").lower()
        logger.info(f"⚙️  {name}: {self.model_dump()}")


# ============================================================================
# SIGNALS AND TRANSFORMS
# ============================================================================

class SynthCommand(_Command):
    """Write a local periodic signal, a composite from a spec file, or a step function as CSV"""

    spec: Optional[str] = Field(default=None, description="composite spec file (overrides signal flags)")
    signal_length: int = Field(default=128, ge=1, description="N")
    start: int = Field(default=0, description="S")
    length: Optional[int] = Field(default=None, description="L, defaults to N - S")
    amplitude: float = Field(default=1.0, description="A")
    frequency: float = Field(default=0.0, description="F, cycles per length-N signal")
    phase: float = Field(default=0.0, description="phi, radians")
    noise_sigma: float = Field(default=0.0, ge=0.0)
    seed: int = Field(default=0, ge=0)
    step_at: Optional[int] = Field(default=None, description="write a step function s_t = 1{t >= d} instead")
    output: str = "-"

    def build(self) -> np.ndarray:
        if self.spec is not None:
            return synth_composite(read_composite_spec(self.spec))
        if self.step_at is not None:
            return synth_step(StepSpec(N=self.signal_length, d=self.step_at))
        spec = LocalSignalSpec(
            S=self.start,
            L=self.length if self.length is not None else self.signal_length - self.start,
            A=self.amplitude,
            F=self.frequency,
            phi=self.phase,
        )
        composite = CompositeSpec(components=[spec], N=self.signal_length, sigma=self.noise_sigma, seed=self.seed)
        return synth_composite(composite)

    def cli_cmd(self) -> None:
        self.log_config()
        signal = self.build()
        write_signal(signal, self.output)
        logger.info(f"wrote {signal.size} samples to {self.output}")


class ComputeCommand(_Command):
    """SWDFT of a signal CSV as a long k,p,... table"""

    input: str = "-"
    n: int = Field(description="window size")
    engine: Engine = "sliding"
    view: GridView = "all"
    output: str = "-"

    def cli_cmd(self) -> None:
        self.log_config()
        grid = swdft(read_signal(self.input), self.n, self.engine)
        write_grid(grid, self.output, self.view)


class ViewsCommand(_Command):
    """One frequency time-series a_{k,p} in a chosen view"""

    input: str = "-"
    n: int = Field(description="window size")
    k: int = Field(description="frequency index")
    view: CoefView = "mod2"
    output: str = "-"

    def cli_cmd(self) -> None:
        self.log_config()
        grid = swdft(read_signal(self.input), self.n)
        series = frequency_series(grid, self.k)
        frame = pd.DataFrame({"p": grid.positions})
        if self.view == "complex":
            frame["re"] = series.real
            frame["im"] = series.imag
        else:
            frame["value"] = view_array(series, self.view)
        write_frame(frame, self.output)


# ============================================================================
# CLOSED FORMS
# ============================================================================

class DirichletCommand(_Command):
    """Dirichlet kernel and weight on an even grid of x"""

    n: int = Field(description="kernel order")
    grid: int = Field(default=257, ge=2)
    x_min: float = -2.0 * math.pi
    x_max: float = 2.0 * math.pi
    output: str = "-"

    def cli_cmd(self) -> None:
        self.log_config()
        x = np.linspace(self.x_min, self.x_max, self.grid)
        weight = dirichlet_weight(self.n, x)
        frame = pd.DataFrame({
            "x": x,
            "kernel": dirichlet(self.n, x),
            "weight_re": weight.real,
            "weight_im": weight.imag,
            "weight_mod": np.abs(weight),
        })
        write_frame(frame, self.output)


class ClosedformCommand(_Command):
    """Closed-form coefficients next to the direct transform of the same signal"""

    kind: ClosedFormKind = "local"
    signal_length: int = Field(default=128, ge=1)
    n: int = 16
    start: int = 31
    length: int = 64
    amplitude: float = 2.0
    frequency: float = 16.0
    phase: float = 0.0
    step_at: Optional[int] = Field(default=None, description="step location, defaults to N/2")
    output: str = "-"

    def cli_cmd(self) -> None:
        self.log_config()
        N = self.signal_length
        if self.kind == "step":
            d = self.step_at if self.step_at is not None else N // 2
            frame = compare_with_direct("step", N, self.n, d=d)
        else:
            start, length = (0, N) if self.kind == "global" else (self.start, self.length)
            spec = LocalSignalSpec(S=start, L=length, A=self.amplitude, F=self.frequency, phi=self.phase)
            frame = compare_with_direct(self.kind, N, self.n, spec=spec)
        write_frame(frame, self.output)


# ============================================================================
# ESTIMATION AND SIMULATION
# ============================================================================

class EstimateCommand(_Command):
    """Estimate (S, L, A, F, phi) of one local periodic signal"""

    input: str = "-"
    n: int = Field(description="window size")
    k_selection: KSelection = "option1"
    k_run: int = Field(default=1, ge=1)
    l_min: int = Field(default_factory=lambda: settings.l_min, ge=1)
    l_max: Optional[int] = None
    s_min: int = Field(default=0, ge=0)
    s_max: Optional[int] = None
    search: SearchMode = "exhaustive"
    budget: int = Field(default=500, ge=1)
    seed: int = Field(default=0, ge=0)
    use_imag: bool = False
    jobs: int = Field(default_factory=lambda: settings.jobs, ge=1)
    phase_units: PhaseUnits = "radians"
    output: str = "-"

    def options(self) -> EstimateOptions:
        return EstimateOptions(**self.model_dump(exclude={"input", "n", "phase_units", "output"}))

    def cli_cmd(self) -> None:
        self.log_config()
        grid = swdft(read_signal(self.input), self.n)
        result = estimate_local_signal(grid, self.options())
        write_estimate(result, self.output, self.phase_units)
        logger.info(f"✅ S={result.S} L={result.L} A={result.A:.6g} F={result.F:.6g} phi={result.phi:.6g}")


class SimulateCommand(_Command):
    """Run the simulation study and write report.json plus per-window-size tables"""

    n_list: List[int] = Field(default_factory=lambda: [8, 16, 32])
    sigma_list: List[float] = Field(default_factory=lambda: [0.0, 0.5, 1.0, 1.5, 2.0])
    f_list: List[float] = Field(default_factory=lambda: [8.0, 11.0])
    reps: int = Field(default=25, ge=1)
    seed: int = Field(default=12345, ge=0)
    out_dir: str = "."
    jobs: int = Field(default_factory=available_cpus, ge=1)
    k_selection: KSelection = "option1"
    l_min: int = Field(default_factory=lambda: settings.l_min, ge=1)

    def cli_cmd(self) -> None:
        self.log_config()
        cfg = StudyConfig(
            n_list=self.n_list,
            sigma_list=self.sigma_list,
            F_list=self.f_list,
            reps=self.reps,
            master_seed=self.seed,
            jobs=self.jobs,
            k_selection=self.k_selection,
            l_min=self.l_min,
        )
        report = run_study(cfg)
        out = Path(self.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_report(report, out / "report.json")
        render_tables(report, out)
        logger.info(f"📝 wrote report.json to {out}")


class ServeCommand(_Command):
    """Serve the HTTP API with uvicorn"""

    host: str = Field(default_factory=lambda: settings.api_host)
    port: int = Field(default_factory=lambda: settings.api_port)

    def cli_cmd(self) -> None:
        self.log_config()
        import uvicorn

        uvicorn.run("swdft.api.main:app", host=self.host, port=self.port)


# ============================================================================
# ENTRY POINT
# ============================================================================

class SwdftCLI(BaseSettings):
    """Sliding window DFT toolkit: CSV in, CSV out"""

    model_config = SettingsConfigDict(
        env_prefix="SWDFT_",
        cli_prog_name="swdft",
        cli_kebab_case=True,
        cli_implicit_flags=True,
        cli_exit_on_error=False,
    )

    log_level: str = Field(default_factory=lambda: settings.log_level)

    synth: CliSubCommand[SynthCommand]
    compute: CliSubCommand[ComputeCommand]
    views: CliSubCommand[ViewsCommand]
    dirichlet: CliSubCommand[DirichletCommand]
    closedform: CliSubCommand[ClosedformCommand]
    estimate: CliSubCommand[EstimateCommand]
    simulate: CliSubCommand[SimulateCommand]
    serve: CliSubCommand[ServeCommand]

    def cli_cmd(self) -> None:
        configure_logging(self.log_level)
        CliApp.run_subcommand(self)


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand; returns the process exit code (0 ok, 2 usage, 3 numerical)"""
    configure_logging()
    args = sys.argv[1:] if argv is None else argv
    try:
        CliApp.run(SwdftCLI, cli_args=args)
    except SwdftError as e:
        logger.error(f"❌ {e.detail}")
        return e.exit_code
    except (ValidationError, SettingsError) as e:
        logger.error(f"❌ invalid arguments: {e}")
        return 2
    except SystemExit as e:
        # argparse --help
        return e.code if isinstance(e.code, int) else 0
    return 0


if __name__ == "__main__":
    sys.exit(main())
