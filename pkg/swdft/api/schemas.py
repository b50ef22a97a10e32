# API Request/Response Schemas
# Pydantic schemas for the SWDFT HTTP endpoints

from typing import List, Optional

from pydantic import BaseModel, Field

from ..models import CoefView, Engine, KSelection, SearchMode

# ============================================================================
# TRANSFORM SCHEMAS
# ============================================================================

class SwdftRequest(BaseModel):
    """Request to /swdft"""
    signal: List[float] = Field(min_length=1)
    n: int  # window size
    engine: Engine = "sliding"
    view: CoefView = "mod2"

class SwdftResponse(BaseModel):
    """Grid in the requested view; rows are frequencies, columns window positions"""
    windowSize: int
    signalLength: int
    view: str
    positions: List[int]
    values: Optional[List[List[float]]] = None  # real-valued views
    re: Optional[List[List[float]]] = None  # complex view
    im: Optional[List[List[float]]] = None

class ViewInfo(BaseModel):
    """One coefficient view"""
    name: str
    description: str

# ============================================================================
# ESTIMATION SCHEMAS
# ============================================================================

class EstimateRequest(BaseModel):
    """Request to /estimate"""
    signal: List[float] = Field(min_length=1)
    n: int
    kSelection: KSelection = "option1"
    lMin: Optional[int] = None  # defaults to SWDFT_L_MIN
    search: SearchMode = "exhaustive"
    budget: int = 500
    seed: int = 0
    useImag: bool = False

class EstimateResponse(BaseModel):
    """Recovered local-signal parameters"""
    kStar: int
    S: int
    L: int
    A: float
    F: float  # cycles per signal
    f: float  # cycles per window
    phi: float  # radians
    mseA: float
    mseB: float
    mseC: float
    degenerate: bool

# ============================================================================
# KERNEL / HEALTH SCHEMAS
# ============================================================================

class DirichletResponse(BaseModel):
    """Dirichlet kernel and weight at one point"""
    n: int
    x: float
    kernel: float
    weightRe: float
    weightIm: float
    weightMod: float

class HealthResponse(BaseModel):
    """Health check response"""
    status: str
    version: str
    engines: List[str]
    resyncInterval: int
