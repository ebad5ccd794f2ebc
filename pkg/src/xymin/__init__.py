"""Measurement-induced nonlocality for two-qubit states and the two-spin XY chain."""

from .minkit import (
    BlochForm,
    Branch,
    FullSphere,
    GridSpec,
    MeasurementDirection,
    MinResult,
    SpectralAxisOnly,
    apply_local_measurement,
    bloch_compose,
    bloch_decompose,
    entropic_min,
    entropic_min_oracle,
    geometric_min,
    geometric_min_oracle,
    invariant_measurement_set,
)
from .qmat import (
    EigenDecomposition,
    InvalidStateError,
    NotHermitianError,
    eig_hermitian,
    mutual_information,
    partial_trace,
    von_neumann_entropy,
)
from .sweeper import SweepConfig, SweepRow, emit_csv, preset_figure, run_sweep
from .xychain import (
    ChainParams,
    Spectrum,
    ThermalPoint,
    analytic_spectrum,
    critical_field,
    hamiltonian,
    thermal_state,
)

__version__ = "0.1.0"
