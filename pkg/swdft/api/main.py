"""
SWDFT HTTP API
Exposes transforms, Dirichlet evaluations and local-signal estimation over JSON
"""

import logging

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware

from .. import __version__
from ..analytic import dirichlet, dirichlet_weight
from ..config import configure_logging, settings
from ..errors import SwdftError
from ..estimation import estimate_local_signal
from ..models import EstimateOptions
from ..transform import swdft, view
from .schemas import (
    DirichletResponse,
    EstimateRequest,
    EstimateResponse,
    HealthResponse,
    SwdftRequest,
    SwdftResponse,
    ViewInfo,
)

logger = logging.getLogger(__name__)

# ============================================================================
# APP SETUP
# ============================================================================

configure_logging()

app = FastAPI(
    title="SWDFT API",
    description="Sliding window DFT, closed-form kernels and local periodic signal estimation",
    version=__version__,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

VIEWS = [
    ViewInfo(name="complex", description="Coefficients as real and imaginary parts"),
    ViewInfo(name="real", description="Real part"),
    ViewInfo(name="imag", description="Imaginary part"),
    ViewInfo(name="mod2", description="Squared modulus (energy)"),
    ViewInfo(name="phase", description="Phase in (-pi, pi]"),
]


def _http_error(e: SwdftError) -> HTTPException:
    return HTTPException(status_code=e.status_code, detail=e.detail)


# ============================================================================
# ENDPOINTS
# ============================================================================

@app.get("/")
async def root():
    """Root endpoint"""
    return {
        "name": "SWDFT API",
        "version": __version__,
        "status": "running",
    }


@app.get("/health", response_model=HealthResponse)
async def health_check():
    """Health check endpoint"""
    return HealthResponse(
        status="healthy",
        version=__version__,
        engines=["sliding", "direct"],
        resyncInterval=settings.resync_interval,
    )


@app.get("/views")
async def get_views():
    """List the coefficient views"""
    return {"views": VIEWS, "total": len(VIEWS)}


@app.post("/swdft", response_model=SwdftResponse)
def compute_swdft(request: SwdftRequest):
    """Sliding window DFT of the posted signal"""
    try:
        grid = swdft(request.signal, request.n, request.engine)
        values = view(grid, request.view)
        response = SwdftResponse(
            windowSize=grid.window_size,
            signalLength=grid.signal_length,
            view=request.view,
            positions=grid.positions.tolist(),
        )
        if request.view == "complex":
            response.re = values.real.tolist()
            response.im = values.imag.tolist()
        else:
            response.values = values.tolist()
        return response

    except SwdftError as e:
        raise _http_error(e)
    except Exception as e:
        logger.exception("transform failed")
        raise HTTPException(status_code=500, detail=f"Transform failed: {str(e)}")


@app.post("/estimate", response_model=EstimateResponse)
def estimate(request: EstimateRequest):
    """Estimate one local periodic signal in the posted series"""
    try:
        options = EstimateOptions(
            k_selection=request.kSelection,
            l_min=request.lMin or settings.l_min,
            search=request.search,
            budget=request.budget,
            seed=request.seed,
            use_imag=request.useImag,
            jobs=1,
        )
        result = estimate_local_signal(swdft(request.signal, request.n), options)
        logger.info(f"estimate: k*={result.k_star} S={result.S} L={result.L}")
        return EstimateResponse(
            kStar=result.k_star,
            S=result.S,
            L=result.L,
            A=result.A,
            F=result.F,
            f=result.f,
            phi=result.phi,
            mseA=result.mse_a,
            mseB=result.mse_b,
            mseC=result.mse_c,
            degenerate=result.degenerate,
        )

    except SwdftError as e:
        raise _http_error(e)
    except HTTPException:
        raise
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        logger.exception("estimation failed")
        raise HTTPException(status_code=500, detail=f"Estimation failed: {str(e)}")


@app.get("/dirichlet", response_model=DirichletResponse)
async def get_dirichlet(n: int, x: float):
    """Dirichlet kernel D_n(x) and weight e^{-ix(n-1)/2} D_n(x)"""
    try:
        weight = dirichlet_weight(n, x)
        return DirichletResponse(
            n=n,
            x=x,
            kernel=dirichlet(n, x),
            weightRe=weight.real,
            weightIm=weight.imag,
            weightMod=abs(weight),
        )
    except SwdftError as e:
        raise _http_error(e)


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(app, host=settings.api_host, port=settings.api_port)
