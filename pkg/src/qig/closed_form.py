"""Analytic metric tensors for the three two-level models.

All three Hamiltonians have the shape ``+-(hbar/2)(a sigma_x + b sigma_z)`` with
``h`` entering through ``b``, so every tensor is built from one template:

    classical = (hbar^2/16) sech^2(x) [[nu^2, beta b], [beta b, beta^2 b^2/nu^2]]
    Bures nc_hh     = a^2 tanh^2(x) / (4 nu^4)
    Sjoqvist nc_hh  = a^2 / (4 nu^4)

with ``nu = sqrt(a^2 + b^2)`` and ``x = beta hbar nu / 2``.  ``beta = 0`` is
accepted even though no thermal state exists there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ContractError, DegeneracyError
from .metrics import MetricTensor

SECH_OVERFLOW = 350.0


def sech2(x: float) -> float:
    """``1 - tanh(x)^2`` without cancellation; exactly 0 for ``|x| > 350``."""
    ax = abs(x)
    if ax > SECH_OVERFLOW:
        return 0.0
    c = math.cosh(ax)
    return 1.0 / (c * c)


@dataclass(frozen=True)
class ClosedFormResult:
    """Both tensors at one point, plus the nonclassical gap and its zero-temperature value."""

    model: str
    tensor_bures: MetricTensor
    tensor_sjoqvist: MetricTensor
    discrepancy_nc: float
    beta_inf_limit_hh: float


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not (math.isfinite(beta) and beta >= 0):
        raise ContractError(f"beta must be finite and >= 0, got {beta}")
    return beta


def _check_finite(**values: float) -> None:
    for k, v in values.items():
        if not math.isfinite(v):
            raise ContractError(f"{k} must be finite, got {v}")


def _two_level(model: str, beta: float, a: float, b: float, hbar: float) -> ClosedFormResult:
    beta = _check_beta(beta)
    _check_finite(hbar=hbar, a=a, b=b)
    nu = math.hypot(a, b)
    if nu == 0:
        raise DegeneracyError(f"{model}: degenerate Hamiltonian (nu = 0)")
    x = 0.5 * beta * hbar * nu
    s = sech2(x)
    t2 = 1.0 - s if x < 1.0 else math.tanh(x) ** 2
    pref = hbar**2 / 16.0 * s
    cl = [
        [pref * nu**2, pref * beta * b],
        [pref * beta * b, pref * beta**2 * b**2 / nu**2],
    ]
    limit = a**2 / (4.0 * nu**4)
    nc_b = [[0.0, 0.0], [0.0, limit * t2]]
    nc_s = [[0.0, 0.0], [0.0, limit]]
    return ClosedFormResult(
        model=model,
        tensor_bures=MetricTensor.from_parts(cl, nc_b),
        tensor_sjoqvist=MetricTensor.from_parts(cl, nc_s),
        discrepancy_nc=limit * s,
        beta_inf_limit_hh=limit,
    )


def closed_form_spin_z(beta: float, omega: float, hbar: float = 1.0) -> ClosedFormResult:
    """Spin qubit in a z field, ``H = (hbar omega/2) sigma_z``.

    The eigenbasis never moves, so Bures and Sjoqvist coincide with the
    Fisher-Rao metric ``(hbar^2/16) sech^2(beta hbar omega/2) [[omega^2, beta omega], [beta omega, beta^2]]``.
    """
    beta = _check_beta(beta)
    _check_finite(omega=omega, hbar=hbar)
    s = sech2(0.5 * beta * hbar * omega)
    pref = hbar**2 / 16.0 * s
    cl = [[pref * omega**2, pref * beta * omega], [pref * beta * omega, pref * beta**2]]
    zero = [[0.0, 0.0], [0.0, 0.0]]
    tensor = MetricTensor.from_parts(cl, zero)
    return ClosedFormResult("spin-z", tensor, tensor, 0.0, 0.0)


def closed_form_spin_xz(beta: float, omega_z: float, omega_x: float, hbar: float = 1.0) -> ClosedFormResult:
    """Spin qubit in a tilted field, ``H = (hbar/2)(omega_x sigma_x + omega_z sigma_z)``, tuned by ``omega_z``.

    Raises:
        DegeneracyError: ``omega_x == omega_z == 0``.
    """
    return _two_level("spin-xz", beta, omega_x, omega_z, hbar)


def closed_form_flux(beta: float, eps: float, Delta: float = 1.0, hbar: float = 1.0) -> ClosedFormResult:
    """Flux qubit ``H = -(hbar/2)(Delta sigma_x + eps sigma_z)``, tuned by the bias ``eps``.

    Raises:
        DegeneracyError: ``Delta == eps == 0``.
    """
    return _two_level("flux-qubit", beta, Delta, eps, hbar)


def discrepancy_nc(beta: float, eps: float, Delta: float = 1.0, hbar: float = 1.0) -> float:
    """Sjoqvist minus Bures nonclassical ``g_eps_eps``: ``Delta^2 sech^2(beta hbar nu/2) / (4 nu^4)``."""
    return closed_form_flux(beta, eps, Delta, hbar).discrepancy_nc


def beta_inf_limit_hh(eps: float, Delta: float = 1.0) -> float:
    """Common zero-temperature value of both ``g_eps_eps``: ``Delta^2 / (4 nu^4)``."""
    _check_finite(eps=eps, Delta=Delta)
    nu2 = Delta**2 + eps**2
    if nu2 == 0:
        raise DegeneracyError("flux qubit: nu = 0 at Delta = eps = 0")
    return Delta**2 / (4.0 * nu2**2)


def closed_form(model_name: str, beta: float, h: float, params: dict | None = None) -> ClosedFormResult:
    """Dispatch on a built-in model name with its fixed parameters."""
    params = dict(params or {})
    hbar = float(params.get("hbar", 1.0))
    if model_name == "spin-z":
        return closed_form_spin_z(beta, h, hbar)
    if model_name == "spin-xz":
        return closed_form_spin_xz(beta, h, float(params["omega_x"]), hbar)
    if model_name == "flux-qubit":
        return closed_form_flux(beta, h, float(params.get("Delta", 1.0)), hbar)
    raise ContractError(f"no closed form for model {model_name!r}")
