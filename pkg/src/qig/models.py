"""Parametric Hamiltonian families and their thermal (Gibbs) states.

Built-in families, with ``h`` the tunable parameter:

* ``spin-z``      H(omega)   = (hbar omega / 2) sigma_z
* ``spin-xz``     H(omega_z) = (hbar / 2)(omega_x sigma_x + omega_z sigma_z)
* ``flux-qubit``  H(eps)     = -(hbar / 2)(Delta sigma_x + eps sigma_z)
* ``generic``     user-supplied H(h), from a callable or a tabulated JSON file

Units are natural (k_B = 1, hbar configurable, default 1), so beta is an
inverse energy.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping

import numpy as np

from .errors import ConfigError, ContractError, DegeneracyError
from .hermitian import (
    PAULI_X,
    PAULI_Z,
    SpectralDecomposition,
    as_hermitian,
    eig,
    hermitize,
)

MODEL_NAMES = ("spin-z", "spin-xz", "flux-qubit", "generic")
GAP_RTOL = 1e-12
GENERIC_FD_STEP = 1e-5

_PARAM_ALIASES = {
    "delta": "Delta",
    "Delta": "Delta",
    "omega_x": "omega_x",
    "omegax": "omega_x",
    "omega-x": "omega_x",
    "hbar": "hbar",
}


@dataclass(frozen=True)
class ModelSpec:
    """A one-parameter Hamiltonian family ``h -> H(h)`` with its derivative."""

    name: str
    dim: int
    hamiltonian: Callable[[float], np.ndarray]
    dH: Callable[[float], np.ndarray]
    h_name: str
    fixed_params: Mapping[str, float] = field(default_factory=dict)

    def H(self, h: float) -> np.ndarray:
        return as_hermitian(self.hamiltonian(h), f"H({self.h_name}={h})")

    def dH_dh(self, h: float) -> np.ndarray:
        return as_hermitian(self.dH(h), f"dH/d{self.h_name}({h})")

    @property
    def hbar(self) -> float:
        return float(self.fixed_params.get("hbar", 1.0))


def _normalize_params(params: Mapping[str, float] | None) -> dict[str, float]:
    out: dict[str, float] = {}
    for key, value in (params or {}).items():
        canonical = _PARAM_ALIASES.get(key, key)
        try:
            out[canonical] = float(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"parameter {key!r} must be a real number, got {value!r}") from exc
        if not math.isfinite(out[canonical]):
            raise ConfigError(f"parameter {key!r} must be finite")
    return out


def make_model(name: str, fixed_params: Mapping[str, float] | None = None, **kwargs) -> ModelSpec:
    """Build a built-in model.

    ``fixed_params`` and keyword arguments are merged (keywords win).
    Recognized parameters: ``hbar`` (all, default 1), ``omega_x``
    (``spin-xz``, required, nonzero), ``Delta`` (``flux-qubit``, default 1).

    Raises:
        ConfigError: unknown model name or missing/invalid parameters.
    """
    params = _normalize_params({**(fixed_params or {}), **kwargs})
    hbar = params.setdefault("hbar", 1.0)
    if hbar <= 0:
        raise ConfigError("hbar must be positive")

    if name == "spin-z":
        unknown = set(params) - {"hbar"}
        if unknown:
            raise ConfigError(f"spin-z: unexpected parameters {sorted(unknown)}")
        half = 0.5 * hbar
        return ModelSpec(
            name=name,
            dim=2,
            hamiltonian=lambda h: half * h * PAULI_Z,
            dH=lambda h: half * PAULI_Z,
            h_name="omega",
            fixed_params=params,
        )

    if name == "spin-xz":
        if "omega_x" not in params:
            raise ConfigError("spin-xz requires omega_x")
        wx = params["omega_x"]
        if wx == 0:
            raise ConfigError("spin-xz requires omega_x != 0 (use spin-z otherwise)")
        half = 0.5 * hbar
        return ModelSpec(
            name=name,
            dim=2,
            hamiltonian=lambda h: half * (wx * PAULI_X + h * PAULI_Z),
            dH=lambda h: half * PAULI_Z,
            h_name="omega_z",
            fixed_params=params,
        )

    if name == "flux-qubit":
        delta = params.setdefault("Delta", 1.0)
        half = 0.5 * hbar
        return ModelSpec(
            name=name,
            dim=2,
            hamiltonian=lambda h: -half * (delta * PAULI_X + h * PAULI_Z),
            dH=lambda h: -half * PAULI_Z,
            h_name="eps",
            fixed_params=params,
        )

    if name == "generic":
        raise ConfigError("generic models are built with generic_model() or load_generic_model()")
    raise ConfigError(f"unknown model {name!r}; expected one of {', '.join(MODEL_NAMES)}")


def richardson_central(f: Callable[[float], np.ndarray], x: float, step: float) -> np.ndarray:
    """Central difference with one Richardson level (steps ``step`` and ``step/2``)."""
    coarse = (f(x + step) - f(x - step)) / (2 * step)
    half = 0.5 * step
    fine = (f(x + half) - f(x - half)) / (2 * half)
    return (4 * fine - coarse) / 3


def generic_model(
    hamiltonian: Callable[[float], np.ndarray],
    dim: int | None = None,
    dH: Callable[[float], np.ndarray] | None = None,
    h_name: str = "h",
    name: str = "generic",
    fixed_params: Mapping[str, float] | None = None,
    fd_step: float = GENERIC_FD_STEP,
) -> ModelSpec:
    """Wrap a user Hamiltonian ``h -> H(h)``.

    Without an analytic ``dH`` the derivative is taken by Richardson
    extrapolated central differences of step ``fd_step``.
    """
    if dim is None:
        dim = int(np.shape(hamiltonian(0.0))[0])
    if dH is None:
        def dH(h, _f=hamiltonian, _s=fd_step):
            return hermitize(richardson_central(lambda x: np.asarray(_f(x), dtype=complex), h, _s))
    return ModelSpec(
        name=name,
        dim=dim,
        hamiltonian=hamiltonian,
        dH=dH,
        h_name=h_name,
        fixed_params=_normalize_params(fixed_params),
    )


def load_generic_model(source, fd_step: float = GENERIC_FD_STEP) -> ModelSpec:
    """Load a tabulated Hamiltonian family from JSON (a path or a parsed dict).

    Schema::

        {"dim": N,
         "h_grid": [h_0, h_1, ...],                 # strictly increasing
         "H_entries": [ [[ [re, im], ... N ], ... N ], ... one per h ],
         "h_name": "h",                              # optional
         "name": "my-model"}                         # optional

    Between grid points each matrix entry is interpolated with a cubic spline
    (linear when only two grid points are given); H(h) outside the grid is an
    error.
    """
    from scipy.interpolate import CubicSpline

    if isinstance(source, (str, Path)):
        text = Path(source).read_text()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"generic model file {source} is not valid JSON: {exc}") from exc
    else:
        data = source
    try:
        dim = int(data["dim"])
        grid = np.asarray(data["h_grid"], dtype=float)
        raw = np.asarray(data["H_entries"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"generic model: malformed input ({exc})") from exc
    if dim < 1 or grid.ndim != 1 or len(grid) < 2:
        raise ConfigError("generic model: need dim >= 1 and at least two h_grid points")
    if np.any(np.diff(grid) <= 0):
        raise ConfigError("generic model: h_grid must be strictly increasing")
    if raw.shape != (len(grid), dim, dim, 2):
        raise ConfigError(
            f"generic model: H_entries shape {raw.shape} != {(len(grid), dim, dim, 2)}"
        )
    mats = raw[..., 0] + 1j * raw[..., 1]
    for k, m in enumerate(mats):
        as_hermitian(m, f"H_entries[{k}]", atol=1e-9)

    if len(grid) >= 4:
        spline = CubicSpline(grid, mats, axis=0, extrapolate=True)
    else:
        def spline(x, _g=grid, _m=mats):
            j = int(np.clip(np.searchsorted(_g, x) - 1, 0, len(_g) - 2))
            t = (x - _g[j]) / (_g[j + 1] - _g[j])
            return (1 - t) * _m[j] + t * _m[j + 1]
    lo, hi = grid[0], grid[-1]
    tol = 1e-9 * max(1.0, hi - lo)

    def interp(h: float) -> np.ndarray:
        return hermitize(np.asarray(spline(h), dtype=complex))

    def hamiltonian(h: float) -> np.ndarray:
        if h < lo - tol or h > hi + tol:
            raise ContractError(f"h={h} outside tabulated range [{lo}, {hi}]")
        return interp(h)

    def dH(h: float) -> np.ndarray:
        if h < lo - tol or h > hi + tol:
            raise ContractError(f"h={h} outside tabulated range [{lo}, {hi}]")
        return hermitize(richardson_central(interp, h, fd_step))

    return ModelSpec(
        name=str(data.get("name", "generic")),
        dim=dim,
        hamiltonian=hamiltonian,
        dH=dH,
        h_name=str(data.get("h_name", "h")),
        fixed_params=_normalize_params(data.get("fixed_params")),
    )


@dataclass(frozen=True)
class ThermalState:
    """Gibbs state ``exp(-beta H(h)) / Z`` stored through the energy eigenbasis."""

    beta: float
    h: float
    probabilities: np.ndarray
    basis: SpectralDecomposition
    rho: np.ndarray

    @property
    def energies(self) -> np.ndarray:
        return self.basis.eigenvalues

    @property
    def dim(self) -> int:
        return len(self.probabilities)

    @classmethod
    def from_spectrum(cls, probabilities, energies, eigenvectors, beta=float("nan"), h=float("nan")):
        """Assemble a state from given weights and eigenbasis (no Gibbs check)."""
        p = np.asarray(probabilities, dtype=float)
        v = np.asarray(eigenvectors, dtype=complex)
        basis = SpectralDecomposition(np.asarray(energies, dtype=float), v)
        rho = hermitize((v * p) @ v.conj().T)
        return cls(beta, h, p, basis, rho)


def gibbs_weights(energies: np.ndarray, beta: float) -> np.ndarray:
    """``exp(-beta E_n) / Z`` evaluated with the minimum energy shifted out."""
    shifted = np.exp(-beta * (energies - energies.min()))
    return shifted / shifted.sum()


def min_gap(energies: np.ndarray) -> float:
    return float(np.min(np.diff(energies))) if len(energies) > 1 else math.inf


def thermal_state(model: ModelSpec, beta: float, h: float, check_degeneracy: bool = True) -> ThermalState:
    """Gibbs state of ``model`` at inverse temperature ``beta`` and parameter ``h``.

    Raises:
        ContractError: ``beta`` is not finite and positive.
        DegeneracyError: two energies closer than ``1e-12 * max(1, |E|)``
            (skipped with ``check_degeneracy=False``).
    """
    if not (math.isfinite(beta) and beta > 0):
        raise ContractError(f"beta must be finite and > 0, got {beta}")
    basis = eig(model.H(h), f"H({model.h_name}={h})")
    e = basis.eigenvalues
    if check_degeneracy and len(e) > 1:
        gap = min_gap(e)
        if gap < GAP_RTOL * max(1.0, float(np.max(np.abs(e)))):
            raise DegeneracyError(
                f"{model.name}: degenerate spectrum at {model.h_name}={h} (gap {gap:.3e})"
            )
    p = gibbs_weights(e, beta)
    v = basis.eigenvectors
    rho = hermitize((v * p) @ v.conj().T)
    p.setflags(write=False)
    rho.setflags(write=False)
    return ThermalState(float(beta), float(h), p, basis, rho)


def flux_eigvecs(Delta: float, eps: float) -> tuple[np.ndarray, np.ndarray]:
    """Real-gauge eigenvectors of the flux-qubit Hamiltonian.

    Returns ``(n0, n1)`` where ``n0`` is the excited state (energy
    ``+nu/2``) and ``n1`` the ground state (``-nu/2``), ``nu = sqrt(Delta^2 + eps^2)``.
    Components are written through ``1 -+ eps/nu`` to stay accurate for
    ``|eps| >> Delta``.

    Raises:
        DegeneracyError: ``Delta == eps == 0``.
    """
    nu = math.hypot(Delta, eps)
    if nu == 0:
        raise DegeneracyError("flux qubit: nu = 0 at Delta = eps = 0")
    c = eps / nu
    sgn = 1.0 if Delta >= 0 else -1.0
    a = math.sqrt(0.5 * (1 - c))
    b = math.sqrt(0.5 * (1 + c))
    n0 = np.array([-a, sgn * b])
    n1 = np.array([b, sgn * a])
    return n0, n1


def flux_ground_projector(Delta: float, eps: float) -> np.ndarray:
    """Zero-temperature limit of the flux-qubit thermal state."""
    nu = math.hypot(Delta, eps)
    if nu == 0:
        raise DegeneracyError("flux qubit: nu = 0 at Delta = eps = 0")
    return 0.5 * (np.eye(2) + (Delta * PAULI_X + eps * PAULI_Z) / nu)


def flux_ground_projector_deps(Delta: float, eps: float) -> np.ndarray:
    """Analytic ``d/d eps`` of :func:`flux_ground_projector`."""
    nu = math.hypot(Delta, eps)
    if nu == 0:
        raise DegeneracyError("flux qubit: nu = 0 at Delta = eps = 0")
    return 0.5 * Delta / nu**3 * (-eps * PAULI_X + Delta * PAULI_Z)
