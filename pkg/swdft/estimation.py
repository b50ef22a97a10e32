"""
Local periodic signal estimation
Frequency-row selection, (S, L) grid search, bounded 1-D search over f and a linear solve for (A, phi)
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import ValidationError
from scipy.optimize import minimize_scalar

from .errors import InvalidInputError, InvalidSpecError, NumericalFailureError, UnsupportedConfigurationError
from .models import BetaPair, DesignColumns, EstimateOptions, EstimateResult, LocalSignalSpec, SwdftGrid, wrap_phase
from .signals import make_rng, synth_local
from .transform import check_frequency, check_window, frequency_row

logger = logging.getLogger(__name__)

# Relative determinant below which the 2x2 normal equations are treated as singular
SINGULAR_GRAM = 1e-12

# A search block holds CELL_BLOCK // N cells
CELL_BLOCK = 1 << 16

GOLDEN_MEAN = 0.5 * (3.0 - math.sqrt(5.0))
SQRT_EPS = math.sqrt(2.2e-16)

Cell = Tuple[int, int]


# ============================================================================
# DESIGN COLUMNS AND LINEAR FIT
# ============================================================================

def design_columns(S: int, L: int, F: float, N: int, n: int, k: int) -> DesignColumns:
    """SWDFT row k of the cosine (c1) and sine (c2) templates supported on S..S+L-1"""
    n = check_window(n, N)
    k = check_frequency(k, n)
    try:
        cosine = LocalSignalSpec(S=S, L=L, A=1.0, F=F, phi=0.0)
        sine = LocalSignalSpec(S=S, L=L, A=1.0, F=F, phi=-math.pi / 2)
    except ValidationError as e:
        raise InvalidSpecError(f"invalid template parameters: {e}")
    return DesignColumns(
        c1=frequency_row(synth_local(cosine, N), n, k),
        c2=frequency_row(synth_local(sine, N), n, k),
    )


def _least_squares(y: np.ndarray, x1: np.ndarray, x2: np.ndarray) -> Tuple[float, float, bool, float]:
    """No-intercept OLS of y on (x1, x2): (beta1, beta2, degenerate, rss)"""
    g00 = float(x1 @ x1)
    g11 = float(x2 @ x2)
    if g00 + g11 <= np.finfo(np.float64).tiny:
        return 0.0, 0.0, True, float(y @ y)

    g01 = float(x1 @ x2)
    det = g00 * g11 - g01 * g01
    if det <= SINGULAR_GRAM * g00 * g11:
        beta1, beta2 = np.linalg.pinv(np.column_stack((x1, x2))) @ y
    else:
        r1 = float(x1 @ y)
        r2 = float(x2 @ y)
        beta1 = (g11 * r1 - g01 * r2) / det
        beta2 = (g00 * r2 - g01 * r1) / det

    residual = y - beta1 * x1 - beta2 * x2
    return float(beta1), float(beta2), False, float(residual @ residual)


def _response(b: np.ndarray, use_imag: bool) -> np.ndarray:
    b = np.asarray(b)
    if use_imag:
        return np.concatenate((b.real, b.imag))
    return np.ascontiguousarray(b.real, dtype=np.float64)


def solve_betas(b: np.ndarray, d: DesignColumns, use_imag: bool = False) -> BetaPair:
    """Regress Re(b) on [Re(c1), Re(c2)]; `use_imag` stacks the imaginary parts underneath"""
    if len(b) != len(d.c1) or len(d.c1) != len(d.c2):
        raise InvalidInputError(f"row length {len(b)} does not match design length {len(d.c1)}")
    beta1, beta2, degenerate, _ = _least_squares(
        _response(b, use_imag), _response(d.c1, use_imag), _response(d.c2, use_imag)
    )
    if degenerate:
        logger.warning("all-zero design columns, returning beta = (0, 0)")
    return BetaPair(beta1=beta1, beta2=beta2, degenerate=degenerate)


def betas_to_amp_phase(bp: BetaPair) -> Tuple[float, float]:
    """(A, phi) with beta1 = A cos(phi), beta2 = -A sin(phi), phi in [0, 2π)"""
    A = math.hypot(bp.beta1, bp.beta2)
    if A == 0.0:
        return 0.0, 0.0
    return A, wrap_phase(math.atan2(-bp.beta2, bp.beta1))


class _RowProjector:
    """
    Real (and optionally imaginary) part of SWDFT row k for templates on S..S+L-1

    Only the L template samples are convolved with the length-n row kernel, so a
    design evaluation costs O((L + n)) instead of a full transform.
    """

    def __init__(self, N: int, n: int, k: int, use_imag: bool = False):
        self.N = N
        self.n = n
        self.k = k
        self.use_imag = use_imag
        self.P = N - n + 1
        angle = 2.0 * np.pi * np.mod(np.arange(n) * k, n) / n
        scale = 1.0 / math.sqrt(n)
        # reversed so np.convolve acts as the window correlation
        self._re_kernel = (np.cos(angle) * scale)[::-1]
        self._im_kernel = (-np.sin(angle) * scale)[::-1]

    def _project(self, segment: np.ndarray, S: int, kernel: np.ndarray) -> np.ndarray:
        # full-convolution index m maps to window start p - n + 1 = S - n + 1 + m
        out = np.zeros(self.P)
        origin = S - self.n + 1
        lo = max(0, origin)
        hi = min(self.P - 1, S + segment.size - 1)
        if lo <= hi:
            out[lo:hi + 1] = np.convolve(segment, kernel)[lo - origin:hi - origin + 1]
        return out

    def columns(self, S: int, L: int, f: float) -> Tuple[np.ndarray, np.ndarray]:
        angle = 2.0 * np.pi * f * np.arange(S, S + L) / self.n
        cos_seg = np.cos(angle)
        sin_seg = np.sin(angle)
        x1 = self._project(cos_seg, S, self._re_kernel)
        x2 = self._project(sin_seg, S, self._re_kernel)
        if self.use_imag:
            x1 = np.concatenate((x1, self._project(cos_seg, S, self._im_kernel)))
            x2 = np.concatenate((x2, self._project(sin_seg, S, self._im_kernel)))
        return x1, x2


def _row_matrix(N: int, n: int, k: int, use_imag: bool = False) -> np.ndarray:
    """(N, P) matrix taking a length-N signal to Re(row k); Im(row k) is stacked on the right"""
    P = N - n + 1
    lag = np.arange(N)[:, None] - np.arange(P)[None, :]  # t minus window start
    inside = (lag >= 0) & (lag < n)
    angle = 2.0 * np.pi * np.mod(lag * k, n) / n
    scale = 1.0 / math.sqrt(n)
    re = np.where(inside, np.cos(angle) * scale, 0.0)
    if not use_imag:
        return re
    return np.hstack((re, np.where(inside, -np.sin(angle) * scale, 0.0)))


def _rss_rows(y: np.ndarray, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    """`_least_squares` residual for every row of stacked design columns x1, x2"""
    g00 = np.einsum("ij,ij->i", x1, x1)
    g11 = np.einsum("ij,ij->i", x2, x2)
    g01 = np.einsum("ij,ij->i", x1, x2)
    r1 = x1 @ y
    r2 = x2 @ y
    det = g00 * g11 - g01 * g01

    empty = g00 + g11 <= np.finfo(np.float64).tiny
    singular = ~empty & (det <= SINGULAR_GRAM * g00 * g11)
    solved = ~(empty | singular)
    safe = np.where(solved, det, 1.0)
    beta1 = np.where(solved, (g11 * r1 - g01 * r2) / safe, 0.0)
    beta2 = np.where(solved, (g00 * r2 - g01 * r1) / safe, 0.0)
    for i in np.flatnonzero(singular):
        beta1[i], beta2[i], _, _ = _least_squares(y, x1[i], x2[i])

    residual = y - beta1[:, None] * x1 - beta2[:, None] * x2
    return np.einsum("ij,ij->i", residual, residual)


class _CellBatch:
    """
    Row-k design columns for a block of (S, L) cells at once

    Templates for every cell are masked to their support and pushed through the
    row matrix in one product, so a search step over the block is two matmuls.
    """

    def __init__(self, N: int, n: int, k: int, cells: Sequence[Cell], use_imag: bool = False):
        self.n = n
        starts = np.array([S for S, _ in cells])
        ends = starts + np.array([L for _, L in cells])
        self._t = np.arange(N, dtype=np.float64)
        self._support = (self._t >= starts[:, None]) & (self._t < ends[:, None])
        self._matrix = _row_matrix(N, n, k, use_imag)

    def columns(self, f: np.ndarray, rows: Optional[np.ndarray] = None) -> Tuple[np.ndarray, np.ndarray]:
        support = self._support if rows is None else self._support[rows]
        angle = (2.0 * np.pi / self.n) * np.asarray(f, dtype=np.float64)[:, None] * self._t
        x1 = np.where(support, np.cos(angle), 0.0) @ self._matrix
        x2 = np.where(support, np.sin(angle), 0.0) @ self._matrix
        return x1, x2

    def rss(self, y: np.ndarray, f: np.ndarray, rows: Optional[np.ndarray] = None) -> np.ndarray:
        return _rss_rows(y, *self.columns(f, rows))


# ============================================================================
# FREQUENCY SEARCH
# ============================================================================

def _minimize_f(
    y: np.ndarray, projector: _RowProjector, S: int, L: int, k: int, xatol: float, maxiter: int
) -> Tuple[float, float]:
    def objective(f: float) -> float:
        rss = _least_squares(y, *projector.columns(S, L, f))[3]
        if not math.isfinite(rss):
            raise NumericalFailureError(f"non-finite residual at f={f}, S={S}, L={L}")
        return rss

    res = minimize_scalar(
        objective,
        bounds=(k - 0.5, k + 0.5),
        method="bounded",
        options={"xatol": xatol, "maxiter": maxiter},
    )
    if not (math.isfinite(res.x) and math.isfinite(res.fun)):
        raise NumericalFailureError(f"frequency search diverged for S={S}, L={L}")
    return float(res.x), float(res.fun)


def frequency_objective(b: np.ndarray, S: int, L: int, N: int, n: int, k: int, use_imag: bool = False):
    """Residual sum of squares of the linear fit as a function of f (cycles per window)"""
    projector = _RowProjector(N, n, k, use_imag)
    y = _response(b, use_imag)
    return lambda f: _least_squares(y, *projector.columns(S, L, f))[3]


def optimize_f(
    b: np.ndarray,
    S: int,
    L: int,
    N: int,
    n: int,
    k_star: int,
    use_imag: bool = False,
    xatol: Optional[float] = None,
    maxiter: Optional[int] = None,
) -> Tuple[float, float]:
    """
    Minimize the fit residual over f in [k* - 1/2, k* + 1/2]

    Bounded golden-section search with parabolic steps; returns (f_hat, rss).
    """
    defaults = EstimateOptions()
    projector = _RowProjector(N, n, k_star, use_imag)
    return _minimize_f(
        _response(b, use_imag), projector, S, L, k_star,
        xatol or defaults.f_xatol, maxiter or defaults.f_maxiter,
    )


def bounded_minimize(
    objective: Callable[[np.ndarray, np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    size: int,
    xatol: float,
    maxiter: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Minimize `size` independent 1-D functions over [lo, hi] in lockstep

    Each function follows the steps of scipy's bounded `minimize_scalar`
    (golden-section with parabolic interpolation); `objective(x, rows)` evaluates
    functions `rows` at the points `x`, and converged rows are no longer evaluated.
    Returns (x_min, f_min) arrays.
    """
    a = np.full(size, float(lo))
    b = np.full(size, float(hi))
    x = a + GOLDEN_MEAN * (b - a)
    fx = np.asarray(objective(x, np.arange(size)), dtype=np.float64)
    # w: second best point, v: previous w
    w, fw = x.copy(), fx.copy()
    v, fv = x.copy(), fx.copy()
    step = np.zeros(size)
    prev_step = np.zeros(size)
    evaluations = 1

    while True:
        mid = 0.5 * (a + b)
        tol1 = SQRT_EPS * np.abs(x) + xatol / 3.0
        tol2 = 2.0 * tol1
        rows = np.flatnonzero(np.abs(x - mid) > tol2 - 0.5 * (b - a))
        if rows.size == 0:
            break

        ai, bi, xi, fxi = a[rows], b[rows], x[rows], fx[rows]
        wi, fwi, vi, fvi = w[rows], fw[rows], v[rows], fv[rows]
        mi, t1, t2 = mid[rows], tol1[rows], tol2[rows]
        di, ei = step[rows], prev_step[rows]

        with np.errstate(divide="ignore", invalid="ignore"):
            r = (xi - wi) * (fxi - fvi)
            q = (xi - vi) * (fxi - fwi)
            p = (xi - vi) * q - (xi - wi) * r
            q = 2.0 * (q - r)
            p = np.where(q > 0.0, -p, p)
            q = np.abs(q)
            tried = np.abs(ei) > t1
            parabolic = (
                tried
                & (np.abs(p) < np.abs(0.5 * q * ei))
                & (p > q * (ai - xi))
                & (p < q * (bi - xi))
            )
            ei = np.where(tried, di, ei)
            candidate = p / q
            near_edge = (xi + candidate - ai < t2) | (bi - xi - candidate < t2)
            toward_mid = np.sign(mi - xi) + (mi == xi)
            di = np.where(parabolic, np.where(near_edge, t1 * toward_mid, candidate), di)

        # golden-section step into the larger segment
        span = np.where(xi >= mi, ai - xi, bi - xi)
        ei = np.where(parabolic, ei, span)
        di = np.where(parabolic, di, GOLDEN_MEAN * span)

        u = xi + (np.sign(di) + (di == 0)) * np.maximum(np.abs(di), t1)
        fu = np.asarray(objective(u, rows), dtype=np.float64)

        better = fu <= fxi
        right = u >= xi
        a[rows] = np.where(better & right, xi, np.where(~better & ~right, u, ai))
        b[rows] = np.where(better & ~right, xi, np.where(~better & right, u, bi))
        shift_w = ~better & ((fu <= fwi) | (wi == xi))
        shift_v = ~better & ~shift_w & ((fu <= fvi) | (vi == xi) | (vi == wi))
        v[rows] = np.where(better | shift_w, wi, np.where(shift_v, u, vi))
        fv[rows] = np.where(better | shift_w, fwi, np.where(shift_v, fu, fvi))
        w[rows] = np.where(better, xi, np.where(shift_w, u, wi))
        fw[rows] = np.where(better, fxi, np.where(shift_w, fu, fwi))
        x[rows] = np.where(better, u, xi)
        fx[rows] = np.where(better, fu, fxi)
        step[rows], prev_step[rows] = di, ei

        evaluations += 1
        if evaluations >= maxiter:
            break

    return x, fx


# ============================================================================
# FREQUENCY ROW SELECTION
# ============================================================================

def candidate_frequencies(n: int) -> List[int]:
    """k = 1..ceil(n/2)-1; DC and the Nyquist row are never candidates"""
    candidates = list(range(1, math.ceil(n / 2)))
    if not candidates:
        raise UnsupportedConfigurationError(f"window size n={n} leaves no candidate frequency")
    return candidates


def select_k_option1(g: SwdftGrid, k_run: int = 1) -> int:
    """Row with the largest squared modulus (summed over `k_run` consecutive positions); ties go low"""
    candidates = candidate_frequencies(g.window_size)
    energy = np.abs(g.coefs[candidates]) ** 2
    run = min(k_run, energy.shape[1])
    if run > 1:
        energy = np.lib.stride_tricks.sliding_window_view(energy, run, axis=1).sum(axis=-1)
    return candidates[int(np.argmax(energy.max(axis=1)))]


def select_k_option2(g: SwdftGrid, options: Optional[EstimateOptions] = None) -> Tuple[int, float]:
    """
    Row whose best (S, L) fit with f fixed at k reduces the error the most

    MSE_C = MSE_B - MSE_A where MSE_A is the mean-only error of Re(b) and MSE_B the
    model residual. Returns (k*, MSE_C); ties go to the smallest k.
    """
    options = options or EstimateOptions()
    N, n = g.signal_length, g.window_size
    blocks = _blocks(search_cells(N, options), N)
    best: Optional[Tuple[float, int]] = None

    for k in candidate_frequencies(n):
        y = _response(g.coefs[k], options.use_imag)
        mse_a = float(np.sum((y - y.mean()) ** 2))
        mse_b = min(
            float(_CellBatch(N, n, k, block, options.use_imag).rss(y, np.full(len(block), float(k))).min())
            for block in blocks
        )
        candidate = (mse_b - mse_a, k)
        if best is None or candidate < best:
            best = candidate

    mse_c, k_star = best
    logger.debug(f"option2 selected k={k_star} with MSE_C={mse_c:.6g}")
    return k_star, mse_c


# ============================================================================
# (S, L) SEARCH
# ============================================================================

def search_cells(N: int, options: EstimateOptions) -> List[Cell]:
    """Feasible (S, L) cells, optionally subsampled by the randomized search"""
    s_max = N - 2 if options.s_max is None else min(options.s_max, N - 2)
    l_cap = N if options.l_max is None else options.l_max
    cells = [
        (S, L)
        for S in range(options.s_min, s_max + 1)
        for L in range(options.l_min, min(l_cap, N - S) + 1)
    ]
    if not cells:
        raise UnsupportedConfigurationError(
            f"no (S, L) cell satisfies s in [{options.s_min}, {s_max}], L >= {options.l_min} for N={N}"
        )
    if options.search == "randomized" and options.budget < len(cells):
        picked = make_rng(options.seed).choice(len(cells), size=options.budget, replace=False)
        cells = [cells[i] for i in np.sort(picked)]
    return cells


def _blocks(cells: Sequence[Cell], N: int) -> List[List[Cell]]:
    """Fixed-size slices of the cell list; the split depends on N only, never on `jobs`"""
    size = max(1, CELL_BLOCK // N)
    return [list(cells[i:i + size]) for i in range(0, len(cells), size)]


def _search_block(payload: tuple) -> Tuple[float, int, int, float]:
    """Best (rss, S, L, f) over one block of cells; module level so worker processes can import it"""
    b, cells, N, n, k, use_imag, xatol, maxiter = payload
    batch = _CellBatch(N, n, k, cells, use_imag)
    y = _response(b, use_imag)

    def objective(f: np.ndarray, rows: np.ndarray) -> np.ndarray:
        rss = batch.rss(y, f, rows)
        if not np.all(np.isfinite(rss)):
            raise NumericalFailureError(f"non-finite residual in the frequency search of row k={k}")
        return rss

    f, rss = bounded_minimize(objective, k - 0.5, k + 0.5, len(cells), xatol, maxiter)
    starts = np.array([S for S, _ in cells])
    lengths = np.array([L for _, L in cells])
    best = int(np.lexsort((lengths, starts, rss))[0])
    return float(rss[best]), cells[best][0], cells[best][1], float(f[best])


def _search(b: np.ndarray, cells: List[Cell], N: int, n: int, k: int, options: EstimateOptions) -> Tuple[float, int, int, float]:
    common = (N, n, k, options.use_imag, options.f_xatol, options.f_maxiter)
    payloads = [(b, block) + common for block in _blocks(cells, N)]
    if options.jobs <= 1 or len(payloads) < 2:
        results = [_search_block(payload) for payload in payloads]
    else:
        with ProcessPoolExecutor(max_workers=min(options.jobs, len(payloads))) as pool:
            results = list(pool.map(_search_block, payloads))
    # (rss, S, L) order, independent of how the blocks were spread over workers
    return min(results, key=lambda r: r[:3])


# ============================================================================
# ESTIMATOR
# ============================================================================

def _degenerate_result(g: SwdftGrid, k_star: int, options: EstimateOptions) -> EstimateResult:
    logger.warning(f"row k={k_star} is identically zero, returning a degenerate estimate")
    N, n = g.signal_length, g.window_size
    return EstimateResult(
        k_star=k_star, S=0, L=N, A=0.0, F=k_star * N / n, f=float(k_star), phi=0.0,
        mse_a=0.0, mse_b=0.0, mse_c=0.0, window_size=n, signal_length=N,
        k_selection=options.k_selection, degenerate=True,
    )


def estimate_local_signal(g: SwdftGrid, options: Optional[EstimateOptions] = None) -> EstimateResult:
    """
    Estimate (S, L, A, F, phi) of one local periodic signal from its SWDFT grid

    Pick the frequency row, run the bounded search over f for every (S, L) cell
    (a block of cells at a time), then refit (A, phi) at the winning cell. Cells
    are ranked by (rss, S, L) so serial and parallel searches agree.
    """
    options = options or EstimateOptions()
    N, n = g.signal_length, g.window_size

    if options.k_selection == "option2":
        k_star, _ = select_k_option2(g, options)
    else:
        k_star = select_k_option1(g, options.k_run)

    b = g.coefs[k_star]
    if not np.any(b):
        return _degenerate_result(g, k_star, options)

    cells = search_cells(N, options)
    logger.info(f"estimating: k*={k_star}, {len(cells)} (S, L) cells, search={options.search}, jobs={options.jobs}")
    _, S, L, f = _search(b, cells, N, n, k_star, options)

    projector = _RowProjector(N, n, k_star, options.use_imag)
    y = _response(b, options.use_imag)
    beta1, beta2, degenerate, rss = _least_squares(y, *projector.columns(S, L, f))
    A, phi = betas_to_amp_phase(BetaPair(beta1=beta1, beta2=beta2))
    mse_a = float(np.sum((y - y.mean()) ** 2))

    return EstimateResult(
        k_star=k_star,
        S=S,
        L=L,
        A=A,
        F=f * N / n,
        f=f,
        phi=phi,
        mse_a=mse_a,
        mse_b=rss,
        mse_c=rss - mse_a,
        window_size=n,
        signal_length=N,
        k_selection=options.k_selection,
        degenerate=degenerate,
    )
