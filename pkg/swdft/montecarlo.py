"""
Simulation study
Seeded replicates over (n, sigma, F), per-cell accuracy summaries and rendered MSE tables
"""

import hashlib
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np
import pandas as pd

from . import __version__
from .errors import IncompleteReportError, SwdftError
from .estimation import estimate_local_signal
from .formats import FLOAT_FORMAT, FORMAT_HEADER
from .models import (
    CellResult,
    CompositeSpec,
    EstimateOptions,
    LocalSignalSpec,
    ReplicateRecord,
    ReportMetadata,
    SimulationReport,
    StudyConfig,
)
from .signals import NOISE_GENERATOR, cycles_per_window, synth_composite
from .transform import swdft_sliding

logger = logging.getLogger(__name__)

# table key -> (CellResult field, title)
TABLES: Dict[str, Tuple[str, str]] = {
    "A": ("mse_A", "MSE of A"),
    "S": ("mse_S", "MSE of S"),
    "L": ("mse_L", "MSE of L"),
    "f": ("mse_f", "MSE of f"),
    "phi": ("mse_phi", "MSE of phi"),
    "k": ("fraction_correct_k", "Fraction of replicates selecting the correct frequency"),
}


# ============================================================================
# REPLICATES
# ============================================================================

def replicate_seed(master_seed: int, n: int, sigma: float, F: float, r: int) -> int:
    """Stable 64-bit seed for one replicate, so any cell can be re-run on its own"""
    key = f"{master_seed}:{n}:{float(sigma)!r}:{float(F)!r}:{r}"
    return int.from_bytes(hashlib.sha256(key.encode()).digest()[:8], "big")


def run_replicate(cfg: StudyConfig, n: int, sigma: float, F: float, r: int) -> ReplicateRecord:
    seed = replicate_seed(cfg.master_seed, n, sigma, F, r)
    spec = LocalSignalSpec(S=cfg.S, L=cfg.L, A=cfg.A, F=F, phi=cfg.phi)
    signal = synth_composite(CompositeSpec(components=[spec], N=cfg.N, sigma=sigma, seed=seed))
    options = EstimateOptions(k_selection=cfg.k_selection, l_min=cfg.l_min, jobs=1)

    try:
        result = estimate_local_signal(swdft_sliding(signal, n), options)
    except SwdftError as e:
        logger.warning(f"replicate {r} of cell n={n} sigma={sigma} F={F} failed: {e.detail}")
        return ReplicateRecord(index=r, seed=seed, error=e.detail)

    f_true = cycles_per_window(F, cfg.N, n)
    return ReplicateRecord(
        index=r, seed=seed, result=result, correct_k=abs(result.k_star - f_true) <= 0.5
    )


def _replicate_task(task: tuple) -> ReplicateRecord:
    cfg, n, sigma, F, r = task
    return run_replicate(cfg, n, sigma, F, r)


# ============================================================================
# CELLS
# ============================================================================

def wrapped_phase_error(estimate: float, truth: float) -> float:
    """Signed difference on the circle, in [-π, π)"""
    return (estimate - truth + math.pi) % (2.0 * math.pi) - math.pi


def summarize_cell(cfg: StudyConfig, n: int, sigma: float, F: float, records: List[ReplicateRecord]) -> CellResult:
    """MSE per parameter over the successful replicates; failures are only counted"""
    done = [rec.result for rec in records if rec.result is not None]
    failed = len(records) - len(done)
    if not done:
        logger.warning(f"every replicate of cell n={n} sigma={sigma} F={F} failed")
        nan = float("nan")
        return CellResult(
            n=n, sigma=sigma, F=F, reps=len(records), replicates=records,
            mse_A=nan, mse_S=nan, mse_L=nan, mse_f=nan, mse_phi=nan, mse_phi_unwrapped=nan,
            fraction_correct_k=0.0, mean_A=nan, failed=failed,
        )

    f_true = cycles_per_window(F, cfg.N, n)
    A = np.array([res.A for res in done])
    phi = np.array([res.phi for res in done])
    wrapped = np.array([wrapped_phase_error(p, cfg.phi) for p in phi])

    return CellResult(
        n=n,
        sigma=sigma,
        F=F,
        reps=len(records),
        replicates=records,
        mse_A=float(np.mean((A - cfg.A) ** 2)),
        mse_S=float(np.mean([(res.S - cfg.S) ** 2 for res in done])),
        mse_L=float(np.mean([(res.L - cfg.L) ** 2 for res in done])),
        mse_f=float(np.mean([(res.f - f_true) ** 2 for res in done])),
        mse_phi=float(np.mean(wrapped ** 2)),
        mse_phi_unwrapped=float(np.mean((phi - cfg.phi) ** 2)),
        fraction_correct_k=float(np.mean([rec.correct_k for rec in records if rec.result is not None])),
        mean_A=float(A.mean()),
        failed=failed,
    )


def run_cell(cfg: StudyConfig, n: int, sigma: float, F: float) -> CellResult:
    records = [run_replicate(cfg, n, sigma, F, r) for r in range(1, cfg.reps + 1)]
    return summarize_cell(cfg, n, sigma, F, records)


def run_study(cfg: StudyConfig) -> SimulationReport:
    """
    Run every (n, sigma, F) cell of the study

    Replicates are independent tasks with pre-assigned slots, so the report
    does not depend on `jobs` or on scheduling order.
    """
    started = time.perf_counter()
    keys = cfg.cell_keys()
    tasks = [(cfg, n, sigma, F, r) for n, sigma, F in keys for r in range(1, cfg.reps + 1)]
    logger.info(f"🚀 study: {len(keys)} cells x {cfg.reps} replicates, jobs={cfg.jobs}")

    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            records = list(pool.map(_replicate_task, tasks, chunksize=max(1, cfg.reps // 2)))
    else:
        records = [_replicate_task(task) for task in tasks]

    cells = []
    for i, (n, sigma, F) in enumerate(keys):
        cell = summarize_cell(cfg, n, sigma, F, records[i * cfg.reps:(i + 1) * cfg.reps])
        logger.info(
            f"cell n={n} sigma={sigma:g} F={F:g}: correct k {cell.fraction_correct_k:.2f}, "
            f"MSE(A) {cell.mse_A:.4g}, failed {cell.failed}"
        )
        cells.append(cell)

    runtime = time.perf_counter() - started
    logger.info(f"✅ study finished in {runtime:.1f}s")
    return SimulationReport(
        config=cfg,
        cells=cells,
        metadata=ReportMetadata(
            master_seed=cfg.master_seed,
            runtime_seconds=runtime,
            library_version=__version__,
            generator=NOISE_GENERATOR,
            failed_replicates=sum(cell.failed for cell in cells),
        ),
    )


# ============================================================================
# TABLES
# ============================================================================

def sigma_label(sigma: float) -> str:
    return f"{sigma:g}"


def row_label(F: float, N: int) -> str:
    return f"{F:g} Cycles/Length {N} Signal"


def check_complete(report: SimulationReport) -> None:
    missing = [key for key in report.config.cell_keys() if report.cell(*key) is None]
    if missing:
        raise IncompleteReportError(f"report is missing {len(missing)} cells, first {missing[0]}")


def tables_frame(report: SimulationReport, n: int) -> pd.DataFrame:
    """All six tables for window size n, one row per (table, F), one column per sigma"""
    check_complete(report)
    cfg = report.config
    rows = []
    for table, (field, _) in TABLES.items():
        for F in cfg.F_list:
            row = {"table": table, "label": row_label(F, cfg.N), "F": F}
            for sigma in cfg.sigma_list:
                row[sigma_label(sigma)] = getattr(report.cell(n, sigma, F), field)
            rows.append(row)
    return pd.DataFrame(rows)


def _format_text(frame: pd.DataFrame, n: int) -> str:
    sections = [f"{FORMAT_HEADER}\nWindow size n = {n}"]
    for table, (_, title) in TABLES.items():
        block = frame[frame["table"] == table].drop(columns=["table", "F"]).set_index("label")
        block.index.name = None
        block.columns.name = "sigma"
        sections.append(f"{title}\n{block.to_string(float_format='{:.2f}'.format)}")
    return "\n\n".join(sections) + "\n"


def render_tables(report: SimulationReport, out_dir: Union[str, Path]) -> List[Path]:
    """Write tables_n{n}.csv (full precision) and tables_n{n}.txt (two decimals) per window size"""
    check_complete(report)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for n in report.config.n_list:
        frame = tables_frame(report, n)
        csv_path = out / f"tables_n{n}.csv"
        with open(csv_path, "w", newline="") as fh:
            fh.write(FORMAT_HEADER + "\n")
            frame.to_csv(fh, index=False, float_format=FLOAT_FORMAT)
        txt_path = out / f"tables_n{n}.txt"
        txt_path.write_text(_format_text(frame, n))
        written.extend([csv_path, txt_path])
        logger.info(f"📝 wrote {csv_path.name} and {txt_path.name}")
    return written


def parse_tables_csv(path: Union[str, Path]) -> pd.DataFrame:
    """Read a tables_n{n}.csv file back; sigma columns keep their string labels"""
    return pd.read_csv(path, comment="#")
