"""Steady-state entanglement simulator for a driven six-mode
cavity opto-magno-mechanical system."""

__version__ = "0.1.0"

from .model import (  # noqa: F401
    CouplingParams,
    DetuningConvention,
    DriveParams,
    EffectiveCouplings,
    LinearizedSystem,
    MicrowaveDrive,
    ModeParams,
    SteadyState,
    SystemConfig,
    bose_einstein,
    build_diffusion,
    build_drift,
    default_config,
    effective_couplings,
    linearize,
    magnon_frequency_from_field,
    solve_steady_state,
    supermode_frequencies,
    vacuum_optomech_coupling,
)
from .gaussian import (  # noqa: F401
    EntanglementResult,
    bipartite_cm,
    check_physicality,
    is_stable,
    log_negativity,
    min_symplectic_eig,
    solve_lyapunov,
    symplectic_eigenvalues,
)
from .sweep import (  # noqa: F401
    PointResult,
    SweepAxis,
    SweepResult,
    SweepSpec,
    run_point,
    run_sweep,
    unstable_strip_width,
)
from .backend import backend_name  # noqa: F401
