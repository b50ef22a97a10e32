# SWDFT package initialization
__version__ = "1.0.0"

from .errors import (
    SwdftError,
    InvalidInputError,
    InvalidWindowError,
    InvalidSpecError,
    FrequencyIndexError,
    UnsupportedConfigurationError,
    NumericalFailureError,
    IncompleteReportError
)
from .models import (
    SwdftGrid,
    LocalSignalSpec,
    CompositeSpec,
    StepSpec,
    WindowState,
    DesignColumns,
    BetaPair,
    EstimateOptions,
    EstimateResult,
    StudyConfig,
    CellResult,
    SimulationReport
)
from .transform import (
    dft,
    swdft,
    swdft_direct,
    swdft_sliding,
    frequency_row,
    frequency_series,
    view
)
from .signals import (
    synth_local,
    synth_composite,
    synth_step,
    principal_alias,
    alias_sign,
    cycles_per_window
)
from .analytic import (
    dirichlet,
    dirichlet_weight,
    window_state,
    swdft_local_closed,
    swdft_global_closed,
    swdft_step_closed
)
from .estimation import (
    design_columns,
    solve_betas,
    betas_to_amp_phase,
    select_k_option1,
    select_k_option2,
    optimize_f,
    estimate_local_signal
)
from .montecarlo import (
    run_cell,
    run_study,
    render_tables
)

__all__ = [
    "__version__",
    # Errors
    "SwdftError",
    "InvalidInputError",
    "InvalidWindowError",
    "InvalidSpecError",
    "FrequencyIndexError",
    "UnsupportedConfigurationError",
    "NumericalFailureError",
    "IncompleteReportError",
    # Models
    "SwdftGrid",
    "LocalSignalSpec",
    "CompositeSpec",
    "StepSpec",
    "WindowState",
    "DesignColumns",
    "BetaPair",
    "EstimateOptions",
    "EstimateResult",
    "StudyConfig",
    "CellResult",
    "SimulationReport",
    # Transform
    "dft",
    "swdft",
    "swdft_direct",
    "swdft_sliding",
    "frequency_row",
    "frequency_series",
    "view",
    # Signals
    "synth_local",
    "synth_composite",
    "synth_step",
    "principal_alias",
    "alias_sign",
    "cycles_per_window",
    # Closed forms
    "dirichlet",
    "dirichlet_weight",
    "window_state",
    "swdft_local_closed",
    "swdft_global_closed",
    "swdft_step_closed",
    # Estimation
    "design_columns",
    "solve_betas",
    "betas_to_amp_phase",
    "select_k_option1",
    "select_k_option2",
    "optimize_f",
    "estimate_local_signal",
    # Simulation
    "run_cell",
    "run_study",
    "render_tables"
]
