"""Cooperative SWIPT cognitive-radio Monte-Carlo simulator.

Core pipeline: per-slot Rayleigh fading realizations, five secondary
access/PT-powering schemes, energy-ledger PT power with cross-slot
carryover, OMP-based sparse MMSE relay selection with power
renormalization, and MRC-combined primary rates. A FastAPI service and a
CLI wrap the same engine.
"""

__version__ = "0.1.0"

from .channel import (
    ChannelRealization,
    FadingParams,
    NetworkTopology,
    draw_realization,
)
from .config import (
    DEFAULT_ALPHA_GRID,
    SCHEME_NAMES,
    SimConfig,
    build_config,
    parse_config_text,
)
from .engine import (
    ReportRow,
    SimulationResult,
    ThroughputReport,
    run_simulation,
    run_slot,
    sweep,
)
from .errors import (
    ConfigError,
    CoopSwiptError,
    DegenerateChannelError,
    FactorizationError,
    NumericalError,
)
from .linalg import SparseSolution, cholesky, omp, solve_hermitian
from .relay import (
    EnergyLedger,
    GainVector,
    MmseSystem,
    SlotResult,
    build_mmse_system,
    dense_mmse_gains,
    harvest_third_stage,
    mse,
    normalize_gains,
    primary_rate,
    pt_alone_rate,
    pt_power,
    sparse_relay_select,
)
from .report import emit_csv, render_csv
from .schemes import (
    BeamformWeights,
    SchemeId,
    SchemeOutcome,
    beamform_weights,
    evaluate_scheme,
)
from .validate import ValidationReport, run_validate

__all__ = [
    "__version__",
    "ChannelRealization",
    "FadingParams",
    "NetworkTopology",
    "draw_realization",
    "DEFAULT_ALPHA_GRID",
    "SCHEME_NAMES",
    "SimConfig",
    "build_config",
    "parse_config_text",
    "ReportRow",
    "SimulationResult",
    "ThroughputReport",
    "run_simulation",
    "run_slot",
    "sweep",
    "ConfigError",
    "CoopSwiptError",
    "DegenerateChannelError",
    "FactorizationError",
    "NumericalError",
    "SparseSolution",
    "cholesky",
    "omp",
    "solve_hermitian",
    "EnergyLedger",
    "GainVector",
    "MmseSystem",
    "SlotResult",
    "build_mmse_system",
    "dense_mmse_gains",
    "harvest_third_stage",
    "mse",
    "normalize_gains",
    "primary_rate",
    "pt_alone_rate",
    "pt_power",
    "sparse_relay_select",
    "emit_csv",
    "render_csv",
    "BeamformWeights",
    "SchemeId",
    "SchemeOutcome",
    "beamform_weights",
    "evaluate_scheme",
    "ValidationReport",
    "run_validate",
]
