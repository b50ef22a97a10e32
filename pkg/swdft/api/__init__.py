# HTTP service package
from .schemas import (
    SwdftRequest,
    SwdftResponse,
    EstimateRequest,
    EstimateResponse,
    DirichletResponse,
    HealthResponse,
    ViewInfo
)

__all__ = [
    "SwdftRequest",
    "SwdftResponse",
    "EstimateRequest",
    "EstimateResponse",
    "DirichletResponse",
    "HealthResponse",
    "ViewInfo"
]
