"""
File formats
Signal, grid, composite-spec, estimate and report I/O shared by the CLI and the HTTP service
"""

import io
import logging
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, List, TextIO, Union

import numpy as np
import pandas as pd
from pydantic import ValidationError

from .errors import InvalidInputError, InvalidSpecError
from .models import CompositeSpec, EstimateResult, LocalSignalSpec, PhaseUnits, SimulationReport, SwdftGrid
from .transform import as_signal, view_array

logger = logging.getLogger(__name__)

FORMAT_HEADER = "# format=1"
FLOAT_FORMAT = "%.17g"
STDIO = "-"

PathLike = Union[str, Path]

# --view choice -> emitted value columns
VIEW_COLUMNS = {
    "all": ["re", "im", "mod2", "phase"],
    "complex": ["re", "im"],
    "real": ["re"],
    "imag": ["im"],
    "mod2": ["mod2"],
    "phase": ["phase"],
}

ESTIMATE_COLUMNS = ["kstar", "S", "L", "A", "F", "f", "phi", "mseA", "mseB", "mseC"]
SPEC_COLUMNS = ["S", "L", "A", "F", "phi"]


# ============================================================================
# STREAM HELPERS
# ============================================================================

def _read_text(path: PathLike) -> str:
    if str(path) == STDIO:
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as e:
        raise InvalidInputError(f"cannot read {path}: {e}")


@contextmanager
def open_output(path: PathLike) -> Iterator[TextIO]:
    """Standard output for "-", otherwise a file opened for writing"""
    if str(path) == STDIO:
        yield sys.stdout
        return
    with open(path, "w", newline="") as fh:
        yield fh


def write_frame(frame: pd.DataFrame, path: PathLike) -> None:
    """Versioned CSV: format line, header, 17 significant digits"""
    with open_output(path) as fh:
        fh.write(FORMAT_HEADER + "\n")
        frame.to_csv(fh, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


# ============================================================================
# SIGNALS
# ============================================================================

def parse_signal(text: str) -> np.ndarray:
    """One value per line; '#' comments and a single 'x' header line are skipped"""
    try:
        frame = pd.read_csv(io.StringIO(text), header=None, comment="#", dtype=str, skip_blank_lines=True)
    except pd.errors.EmptyDataError:
        raise InvalidInputError("signal file is empty")
    if frame.shape[1] != 1:
        raise InvalidInputError(f"signal file must have one column, found {frame.shape[1]}")

    values = frame.iloc[:, 0].str.strip()
    if len(values) and values.iloc[0] == "x":
        values = values.iloc[1:]
    try:
        numbers = pd.to_numeric(values, errors="raise").to_numpy(dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise InvalidInputError(f"signal file has a non-numeric value: {e}")
    return as_signal(numbers)


def read_signal(path: PathLike) -> np.ndarray:
    signal = parse_signal(_read_text(path))
    logger.debug(f"read {signal.size} samples from {path}")
    return signal


def write_signal(x, path: PathLike) -> None:
    write_frame(pd.DataFrame({"x": np.asarray(x, dtype=np.float64)}), path)


# ============================================================================
# GRIDS
# ============================================================================

def grid_frame(g: SwdftGrid, view: str = "all") -> pd.DataFrame:
    """Long table k,p,<view columns> ordered by k then p"""
    if view not in VIEW_COLUMNS:
        raise InvalidInputError(f"unknown view '{view}', expected one of {sorted(VIEW_COLUMNS)}")
    n, P = g.coefs.shape
    data = {
        "k": np.repeat(np.arange(n), P),
        "p": np.tile(g.positions, n),
    }
    columns = {
        "re": lambda: view_array(g.coefs, "real"),
        "im": lambda: view_array(g.coefs, "imag"),
        "mod2": lambda: view_array(g.coefs, "mod2"),
        "phase": lambda: view_array(g.coefs, "phase"),
    }
    for name in VIEW_COLUMNS[view]:
        data[name] = columns[name]().ravel()
    return pd.DataFrame(data)


def write_grid(g: SwdftGrid, path: PathLike, view: str = "all") -> None:
    write_frame(grid_frame(g, view), path)


def read_grid_frame(path: PathLike) -> pd.DataFrame:
    return pd.read_csv(io.StringIO(_read_text(path)), comment="#")


# ============================================================================
# COMPOSITE SIGNAL SPECS
# ============================================================================

def parse_composite_spec(text: str) -> CompositeSpec:
    """
    Header lines `N=...`, `sigma=...`, `seed=...` followed by a CSV block

        N=64
        sigma=0.5
        seed=7
        S,L,A,F,phi
        17,31,1,8,1
    """
    header = {}
    lines = [line.strip() for line in text.splitlines()]
    lines = [line for line in lines if line and not line.startswith("#")]

    start = None
    for i, line in enumerate(lines):
        if "=" in line:
            key, _, value = line.partition("=")
            header[key.strip()] = value.strip()
        else:
            start = i
            break
    if start is None:
        raise InvalidSpecError("spec file has no 'S,L,A,F,phi' component block")

    block = pd.read_csv(io.StringIO("\n".join(lines[start:])))
    if list(block.columns) != SPEC_COLUMNS:
        raise InvalidSpecError(f"component header must be {','.join(SPEC_COLUMNS)}, got {','.join(block.columns)}")
    if "N" not in header:
        raise InvalidSpecError("spec file is missing N=")

    try:
        spec = CompositeSpec(
            components=[LocalSignalSpec(**row) for row in block.to_dict(orient="records")],
            N=int(header["N"]),
            sigma=float(header.get("sigma", 0.0)),
            seed=int(header.get("seed", 0)),
        )
    except (ValidationError, ValueError) as e:
        raise InvalidSpecError(f"invalid spec file: {e}")
    spec.check()
    return spec


def read_composite_spec(path: PathLike) -> CompositeSpec:
    return parse_composite_spec(_read_text(path))


def write_composite_spec(c: CompositeSpec, path: PathLike) -> None:
    block = pd.DataFrame([comp.model_dump() for comp in c.components], columns=SPEC_COLUMNS)
    with open_output(path) as fh:
        fh.write(f"{FORMAT_HEADER}\nN={c.N}\nsigma={c.sigma!r}\nseed={c.seed}\n")
        block.to_csv(fh, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


# ============================================================================
# ESTIMATES AND REPORTS
# ============================================================================

def estimate_frame(results: Union[EstimateResult, List[EstimateResult]], phase_units: PhaseUnits = "radians") -> pd.DataFrame:
    if isinstance(results, EstimateResult):
        results = [results]
    rows = [
        {
            "kstar": r.k_star, "S": r.S, "L": r.L, "A": r.A, "F": r.F, "f": r.f,
            "phi": r.phi_cycles if phase_units == "cycles" else r.phi,
            "mseA": r.mse_a, "mseB": r.mse_b, "mseC": r.mse_c,
        }
        for r in results
    ]
    return pd.DataFrame(rows, columns=ESTIMATE_COLUMNS)


def write_estimate(result: EstimateResult, path: PathLike, phase_units: PhaseUnits = "radians") -> None:
    write_frame(estimate_frame(result, phase_units), path)


def write_report(report: SimulationReport, path: PathLike) -> None:
    Path(path).write_text(report.model_dump_json(indent=2))


def read_report(path: PathLike) -> SimulationReport:
    return SimulationReport.model_validate_json(_read_text(path))
