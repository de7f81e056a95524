"""Bures, Sjoqvist, Fisher-Rao and Fubini-Study metrics on manifolds of thermal qubit states."""

from .closed_form import (
    ClosedFormResult,
    closed_form,
    closed_form_flux,
    closed_form_spin_xz,
    closed_form_spin_z,
    discrepancy_nc,
)
from .errors import (
    ConfigError,
    ContractError,
    DegeneracyError,
    DomainError,
    QIGError,
    ShapeError,
    SolverError,
)
from .hermitian import SpectralDecomposition, eig, expm_h, spectral_fn, sqrtm_psd
from .metrics import (
    MetricTensor,
    TangentPerturbation,
    bures_distance_sq,
    bures_metric_hubner,
    bures_metric_thermal,
    finite_diff_drho,
    fubini_study_metric,
    sjoqvist_distance_sq,
    sjoqvist_metric,
)
from .models import ModelSpec, ThermalState, flux_eigvecs, make_model, thermal_state
from .scan import ScanConfig, ScanRow, run_scan

__all__ = [
    "ClosedFormResult",
    "ConfigError",
    "ContractError",
    "DegeneracyError",
    "DomainError",
    "MetricTensor",
    "ModelSpec",
    "QIGError",
    "ScanConfig",
    "ScanRow",
    "ShapeError",
    "SolverError",
    "SpectralDecomposition",
    "TangentPerturbation",
    "ThermalState",
    "bures_distance_sq",
    "bures_metric_hubner",
    "bures_metric_thermal",
    "closed_form",
    "closed_form_flux",
    "closed_form_spin_xz",
    "closed_form_spin_z",
    "discrepancy_nc",
    "eig",
    "expm_h",
    "finite_diff_drho",
    "flux_eigvecs",
    "fubini_study_metric",
    "make_model",
    "run_scan",
    "sjoqvist_distance_sq",
    "sjoqvist_metric",
    "spectral_fn",
    "sqrtm_psd",
    "thermal_state",
]
