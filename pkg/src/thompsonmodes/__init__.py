"""Oscillation-mode magnitudes of coupled resonator arrays from spectra alone.

The full spectrum of an array together with the n spectra obtained by
removing one resonator at a time determines ``|v_ij|`` for every mode ``i``
and element ``j`` through the eigenvector-eigenvalue identity.
"""

from thompsonmodes.errors import (
    DegenerateSpectrum,
    MissingCapacitanceRatios,
    NegativeSquaredComponent,
    ThompsonError,
)
from thompsonmodes.figure import render_figure
from thompsonmodes.identity import (
    correct_nonhermitian,
    hermitian_equivalent,
    normalize_rows,
    thompson_modes,
)
from thompsonmodes.linalg import SymEigenResult, diag_power, principal_submatrix, sym_eigen
from thompsonmodes.model import (
    ArrayConfig,
    SystemMatrices,
    build_matrices,
    capacitance_from_base_freq,
    delete_resonator,
    freq_to_lambda,
    lambda_to_freq,
    load_config,
    model_modes,
    system_spectrum,
)
from thompsonmodes.pipeline import (
    MeasurementSet,
    RecoveryOptions,
    RecoveryReport,
    interlacing_repair,
    run_recovery,
    simulate_measurement,
    sort_and_convert,
    symmetrize_subspectra,
)
from thompsonmodes.spectra_io import (
    PeakOptions,
    Trace,
    detect_peaks,
    read_measurement,
    read_report,
    read_trace,
    write_measurement,
    write_report,
)

__all__ = [
    "ArrayConfig",
    "DegenerateSpectrum",
    "MeasurementSet",
    "MissingCapacitanceRatios",
    "NegativeSquaredComponent",
    "PeakOptions",
    "RecoveryOptions",
    "RecoveryReport",
    "SymEigenResult",
    "SystemMatrices",
    "ThompsonError",
    "Trace",
    "build_matrices",
    "capacitance_from_base_freq",
    "correct_nonhermitian",
    "delete_resonator",
    "detect_peaks",
    "diag_power",
    "freq_to_lambda",
    "hermitian_equivalent",
    "interlacing_repair",
    "lambda_to_freq",
    "load_config",
    "model_modes",
    "normalize_rows",
    "principal_submatrix",
    "read_measurement",
    "read_report",
    "read_trace",
    "render_figure",
    "run_recovery",
    "simulate_measurement",
    "sort_and_convert",
    "sym_eigen",
    "symmetrize_subspectra",
    "system_spectrum",
    "thompson_modes",
    "write_measurement",
    "write_report",
]
