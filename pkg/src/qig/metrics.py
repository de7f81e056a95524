"""Model-agnostic metric engines and brute-force distance oracles.

Coordinates are always ``(beta, h)``.  Every tensor carries its split into a
classical (Fisher-Rao, probability-change) part and a nonclassical
(eigenvector-change) part.

Engines:

* :func:`bures_metric_hubner`  - Hubner sum over the spectrum of rho for a
  given pair of tangent operators ``d rho``.
* :func:`bures_metric_thermal` - closed expression for Gibbs states in terms
  of energies and matrix elements of ``dH/dh``.
* :func:`sjoqvist_metric`      - interferometric metric from first-order
  perturbation theory of the eigenvectors.
* :func:`fubini_study_metric`  - ``tr[(d rho)^2]`` on pure states.

Oracles: :func:`bures_distance_sq` and :func:`sjoqvist_distance_sq`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DegeneracyError
from .hermitian import as_hermitian, eig, hermitize, max_norm
from .models import ModelSpec, ThermalState, min_gap, thermal_state

log = logging.getLogger(__name__)

DEGENERACY_RTOL = 1e-10
KERNEL_THRESHOLD = 1e-14
DEFAULT_FD_STEP = 1e-4
DISTANCE_CLAMP = 1e-12


@dataclass(frozen=True)
class MetricTensor:
    """Symmetric 2x2 metric over ``(beta, h)``, stored as classical + nonclassical parts."""

    classical: np.ndarray
    nonclassical: np.ndarray
    coords: tuple[str, str] = ("beta", "h")

    @classmethod
    def from_parts(cls, cl, nc, coords=("beta", "h")) -> "MetricTensor":
        cl = _symmetric(cl)
        nc = _symmetric(nc)
        cl.setflags(write=False)
        nc.setflags(write=False)
        return cls(cl, nc, tuple(coords))

    @property
    def matrix(self) -> np.ndarray:
        return self.classical + self.nonclassical

    @property
    def g_bb(self) -> float:
        return float(self.matrix[0, 0])

    @property
    def g_bh(self) -> float:
        return float(self.matrix[0, 1])

    @property
    def g_hh(self) -> float:
        return float(self.matrix[1, 1])

    def quadratic_form(self, d) -> float:
        d = np.asarray(d, dtype=float)
        return float(d @ self.matrix @ d)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


def _symmetric(m) -> np.ndarray:
    m = np.array(m, dtype=float).reshape(2, 2)
    off = 0.5 * (m[0, 1] + m[1, 0])
    m[0, 1] = m[1, 0] = off
    return m


@dataclass(frozen=True)
class TangentPerturbation:
    """First-order change of a Gibbs state along one coordinate.

    ``dp[n]`` is the derivative of the n-th Gibbs weight and
    ``dvec_overlaps[m, k] = <n_m | d n_k>`` in the parallel-transport gauge
    (zero diagonal).
    """

    dp: np.ndarray
    dvec_overlaps: np.ndarray


def _check_gaps(energies: np.ndarray, where: str) -> None:
    if len(energies) < 2:
        return
    gap = min_gap(energies)
    if gap < DEGENERACY_RTOL * max(1.0, float(np.max(np.abs(energies)))):
        raise DegeneracyError(f"degenerate spectrum {where} (gap {gap:.3e})")


def _degenerate_pairs(energies: np.ndarray) -> np.ndarray:
    thresh = DEGENERACY_RTOL * max(1.0, float(np.max(np.abs(energies))))
    diff = np.abs(energies[:, None] - energies[None, :])
    mask = diff < thresh
    np.fill_diagonal(mask, False)
    return mask


def tangent_perturbations(model: ModelSpec, state: ThermalState) -> tuple[TangentPerturbation, TangentPerturbation]:
    """Probability and eigenvector derivatives along ``beta`` and ``h``.

    The beta direction never rotates the eigenbasis of a Gibbs state, so its
    overlap matrix is identically zero.
    """
    e = state.energies
    p = state.probabilities
    _check_gaps(e, f"at {model.h_name}={state.h}")
    dh = state.basis.to_eigenbasis(model.dH_dh(state.h))
    de = dh.diagonal().real
    dp_beta = p * (p @ e - e)
    dp_h = state.beta * p * (p @ de - de)
    gaps = e[None, :] - e[:, None]  # E_k - E_m at [m, k]
    np.fill_diagonal(gaps, 1.0)
    overlaps = dh / gaps
    np.fill_diagonal(overlaps, 0.0)
    zero = np.zeros_like(overlaps)
    return TangentPerturbation(dp_beta, zero), TangentPerturbation(dp_h, overlaps)


def _fisher_rao(p: np.ndarray, dps) -> np.ndarray:
    g = np.empty((2, 2))
    safe = np.where(p > 0, p, 1.0)
    for a in range(2):
        for b in range(2):
            g[a, b] = 0.25 * np.sum(np.where(p > 0, dps[a] * dps[b] / safe, 0.0))
    return g


def bures_distance_sq(rho, sigma) -> float:
    """Squared Bures distance ``2 - 2 tr sqrt(sqrt(rho) sigma sqrt(rho))``.

    The fidelity term equals the nuclear norm of ``sqrt(rho) sqrt(sigma)``,
    and ``2 - 2F`` equals ``||sqrt(rho) U - sqrt(sigma)||_F^2`` for the polar
    unitary ``U`` of that product.  The Frobenius form is what is evaluated:
    it is the same number without the cancellation in ``2 - 2F`` when the
    states are close.

    Raises:
        ContractError: either input is not a density matrix.
    """
    rho = _check_density(rho, "rho")
    sigma = _check_density(sigma, "sigma")
    if rho.shape != sigma.shape:
        raise ContractError(f"dimension mismatch {rho.shape} vs {sigma.shape}")
    sr = _psd_sqrt(rho)
    ss = _psd_sqrt(sigma)
    w, _, vh = np.linalg.svd(sr @ ss)
    u = w @ vh
    diff = sr @ u - ss
    # Normalization error enters this form only at second order, so no
    # 2 - tr(rho) - tr(sigma) correction is added (it would be pure noise).
    d2 = float(np.sum(np.abs(diff) ** 2))
    if -DISTANCE_CLAMP <= d2 < 0:
        d2 = 0.0
    return d2


def bures_distance_sq_direct(rho, sigma) -> float:
    """Literal ``2 - 2 tr[(rho^1/2 sigma rho^1/2)^1/2]``; reference for tests."""
    rho = _check_density(rho, "rho")
    sigma = _check_density(sigma, "sigma")
    sr = _psd_sqrt(rho)
    inner = hermitize(sr @ sigma @ sr)
    mu = np.clip(np.linalg.eigvalsh(inner), 0.0, None)
    d2 = 2.0 - 2.0 * float(np.sum(np.sqrt(mu)))
    if -DISTANCE_CLAMP <= d2 < 0:
        d2 = 0.0
    return d2


def _psd_sqrt(a: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(a)
    return hermitize((v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T)


def _check_density(a, name: str) -> np.ndarray:
    a = as_hermitian(a, name, atol=1e-10)
    tr = np.trace(a).real
    if abs(tr - 1.0) > 1e-10:
        raise ContractError(f"{name}: trace {tr!r} != 1")
    wmin = float(np.linalg.eigvalsh(a).min())
    if wmin < -1e-12:
        raise ContractError(f"{name}: not positive semidefinite (eigenvalue {wmin!r})")
    return a


def sjoqvist_distance_sq(a: ThermalState, b: ThermalState) -> float:
    """``2 - 2 sum_k sqrt(p_k q_k) |<n_k|m_k>|`` with branches paired by energy rank.

    Evaluated as ``sum_k (sqrt p_k - sqrt q_k)^2 + 2 sum_k sqrt(p_k q_k)(1 - |<n_k|m_k>|)``
    with ``1 - |c| = (1 - |c|^2)/(1 + |c|)`` and ``1 - |c_k|^2`` summed from
    the off-diagonal overlaps, which avoids cancellation for close states.

    Raises:
        ContractError: dimension mismatch.
        DegeneracyError: either spectrum has a gap below threshold.
    """
    if a.dim != b.dim:
        raise ContractError(f"dimension mismatch {a.dim} vs {b.dim}")
    _check_gaps(a.energies, "in first state")
    _check_gaps(b.energies, "in second state")
    p = np.clip(a.probabilities, 0.0, None)
    q = np.clip(b.probabilities, 0.0, None)
    ov = a.basis.eigenvectors.conj().T @ b.basis.eigenvectors
    absov2 = np.abs(ov) ** 2
    diag = np.sqrt(np.diagonal(absov2))
    # 1 - |<n_k|m_k>|^2, summed from the off-diagonal overlaps directly.
    leak = np.where(np.eye(a.dim, dtype=bool), 0.0, absov2).sum(axis=0)
    one_minus = leak / (1.0 + diag)
    classical = float(np.sum((np.sqrt(p) - np.sqrt(q)) ** 2))
    d2 = classical + 2.0 * float(np.sum(np.sqrt(p * q) * one_minus))
    if -DISTANCE_CLAMP <= d2 < 0:
        d2 = 0.0
    return d2


def sjoqvist_distance_sq_direct(a: ThermalState, b: ThermalState) -> float:
    """Literal ``2 - 2 sum_k sqrt(p_k q_k)|<n_k|m_k>|``; reference for tests."""
    ov = np.abs(np.sum(a.basis.eigenvectors.conj() * b.basis.eigenvectors, axis=0))
    return 2.0 - 2.0 * float(np.sum(np.sqrt(a.probabilities * b.probabilities) * ov))


def bures_metric_hubner(spec, drho) -> MetricTensor:
    """Bures metric from the spectrum of rho and its two coordinate derivatives.

    ``g_ab = 1/2 sum_ij Re[<i|d_a rho|j><j|d_b rho|i>] / (lambda_i + lambda_j)``;
    pairs with ``lambda_i + lambda_j < 1e-14`` are dropped.  The ``i == j``
    terms form the classical part.

    Args:
        spec: spectral decomposition of rho (or rho itself).
        drho: ``(d rho / d beta, d rho / d h)``.

    Raises:
        ContractError: a ``drho`` is not Hermitian or not traceless.
    """
    if not hasattr(spec, "eigenvalues"):
        spec = eig(spec, "rho")
    if len(drho) != 2:
        raise ContractError("drho must hold exactly two tangent operators")
    lam = spec.eigenvalues
    mats = []
    for k, d in enumerate(drho):
        d = as_hermitian(d, f"drho[{k}]", atol=1e-10)
        tr = abs(np.trace(d))
        if tr > 1e-10:
            raise ContractError(f"drho[{k}] is not traceless (|tr| = {tr:.3e})")
        mats.append(spec.to_eigenbasis(d))
    denom = lam[:, None] + lam[None, :]
    keep = denom >= KERNEL_THRESHOLD
    inv = np.where(keep, 1.0 / np.where(keep, denom, 1.0), 0.0)
    offdiag = ~np.eye(len(lam), dtype=bool)
    cl = np.zeros((2, 2))
    nc = np.zeros((2, 2))
    for a in range(2):
        for b in range(a, 2):
            # <i|A|j><j|B|i> = A_ij * B_ji = A_ij * conj(B_ij)
            terms = 0.5 * (mats[a] * mats[b].conj()).real * inv
            cl[a, b] = cl[b, a] = float(np.trace(terms))
            nc[a, b] = nc[b, a] = float(np.sum(terms[offdiag]))
    return MetricTensor.from_parts(cl, nc)


def bures_metric_thermal(model: ModelSpec, beta: float, h: float) -> MetricTensor:
    """Bures metric of Gibbs states in closed expectation-value form.

    ``g_bb = Var(E)/4``, ``g_bh = beta Cov(E, dE)/4``,
    ``g_hh = beta^2 Var(dE)/4 + 1/2 sum_{n != m} |<n|dH|m>/(E_n - E_m)|^2 (p_n - p_m)^2/(p_n + p_m)``
    where ``dE_n = <n|dH/dh|n>`` and averages are Gibbs averages.  The sum
    is the nonclassical part.

    Raises:
        DegeneracyError: two levels are degenerate and ``dH/dh`` couples them.
    """
    st = thermal_state(model, beta, h, check_degeneracy=False)
    e = st.energies
    p = st.probabilities
    dh = st.basis.to_eigenbasis(model.dH_dh(h))
    de = dh.diagonal().real
    mean_e = p @ e
    mean_de = p @ de
    g_bb = 0.25 * (p @ (e - mean_e) ** 2)
    g_bh = 0.25 * beta * (p @ ((e - mean_e) * (de - mean_de)))
    g_hh_c = 0.25 * beta**2 * (p @ (de - mean_de) ** 2)

    degenerate = _degenerate_pairs(e)
    coupling = np.abs(dh) ** 2
    if np.any(degenerate):
        scale_ = max(1.0, max_norm(dh))
        bad = degenerate & (coupling > (1e-12 * scale_) ** 2)
        if np.any(bad):
            m, n = np.argwhere(bad)[0]
            raise DegeneracyError(
                f"{model.name}: levels {m},{n} degenerate at {model.h_name}={h} "
                f"with nonzero coupling |<m|dH|n>| = {math.sqrt(coupling[m, n]):.3e}"
            )
        log.debug("%s: skipping degenerate uncoupled pairs at %s=%s", model.name, model.h_name, h)
    gaps = e[:, None] - e[None, :]
    psum = p[:, None] + p[None, :]
    pdiff = p[:, None] - p[None, :]
    valid = ~degenerate & ~np.eye(len(e), dtype=bool) & (psum > 0)
    safe_gaps = np.where(valid, gaps, 1.0)
    safe_psum = np.where(valid, psum, 1.0)
    terms = np.where(valid, coupling / safe_gaps**2 * pdiff**2 / safe_psum, 0.0)
    g_hh_nc = 0.5 * float(np.sum(terms))
    return MetricTensor.from_parts([[g_bb, g_bh], [g_bh, g_hh_c]], [[0.0, 0.0], [0.0, g_hh_nc]])


def sjoqvist_metric(model: ModelSpec, beta: float, h: float) -> MetricTensor:
    """Sjoqvist interferometric metric of Gibbs states.

    Classical part is the Fisher-Rao metric of the Gibbs weights; the
    nonclassical part is ``sum_k p_k Re <d_a n_k|(1 - |n_k><n_k|)|d_b n_k>``
    with ``|d_h n_k> = sum_{m != k} |n_m><n_m|dH|n_k>/(E_k - E_m)``.

    Raises:
        DegeneracyError: any gap below ``1e-10 * max(1, spectral radius)``.
    """
    st = thermal_state(model, beta, h, check_degeneracy=False)
    tb, th = tangent_perturbations(model, st)
    p = st.probabilities
    cl = _fisher_rao(p, (tb.dp, th.dp))
    nc = np.zeros((2, 2))
    ds = (tb.dvec_overlaps, th.dvec_overlaps)
    for a in range(2):
        for b in range(a, 2):
            # Overlap columns have zero diagonal, so the projector is already applied.
            inner = np.sum(ds[a].conj() * ds[b], axis=0).real
            nc[a, b] = nc[b, a] = float(p @ inner)
    return MetricTensor.from_parts(cl, nc)


def fubini_study_metric(rho_pure, drho) -> float:
    """``tr[(d rho)^2]`` for a pure state ``rho``.

    Raises:
        ContractError: ``rho`` is not idempotent within 1e-8 or has trace != 1.
    """
    rho = as_hermitian(rho_pure, "rho", atol=1e-10)
    d = as_hermitian(drho, "drho", atol=1e-10)
    if abs(np.trace(rho).real - 1.0) > 1e-8:
        raise ContractError("rho: trace != 1")
    if max_norm(rho @ rho - rho) > 1e-8:
        raise ContractError("rho is not a pure state (rho^2 != rho)")
    return float(np.trace(d @ d).real)


def finite_diff_drho(
    model: ModelSpec,
    beta: float,
    h: float,
    which: str,
    step: float = DEFAULT_FD_STEP,
) -> np.ndarray:
    """Numerical ``d rho / d beta`` or ``d rho / d h``.

    Central differences at ``step`` and ``step/2`` combined by one Richardson
    level, then Hermitized.  ``which`` is ``"beta"`` or ``"h"``.

    Raises:
        ContractError: ``step <= 0``, unknown direction, or the beta stencil
            would reach ``beta <= 0``.
        DegeneracyError: degenerate spectrum at a stencil point.
    """
    if not step > 0:
        raise ContractError(f"step must be positive, got {step}")
    along_beta = which in ("beta", "b")
    if along_beta:
        if beta - step <= 0:
            raise ContractError(f"beta stencil leaves the domain (beta={beta}, step={step})")
        x0 = beta
    elif which in ("h", model.h_name):
        x0 = h
    else:
        raise ContractError(f"unknown direction {which!r}; expected 'beta' or 'h'")

    # Same stencil as the models' Richardson derivative; kept inline so the
    # degeneracy check runs at each node.
    nodes = {}
    for s in (step, 0.5 * step):
        for sign in (1, -1):
            x = x0 + sign * s
            st = thermal_state(model, x if along_beta else beta, h if along_beta else x, check_degeneracy=False)
            _check_gaps(st.energies, f"at stencil point {x}")
            nodes[(s, sign)] = st.rho
    coarse = (nodes[(step, 1)] - nodes[(step, -1)]) / (2 * step)
    half = 0.5 * step
    fine = (nodes[(half, 1)] - nodes[(half, -1)]) / (2 * half)
    d = hermitize((4 * fine - coarse) / 3)
    # Remove the O(eps) trace drift so the operator is exactly tangent.
    n = d.shape[0]
    d = d - np.eye(n) * (np.trace(d) / n)
    return d


def hubner_from_fd(model: ModelSpec, beta: float, h: float, step: float = DEFAULT_FD_STEP) -> MetricTensor:
    """Hubner engine fed with finite-difference tangent operators."""
    st = thermal_state(model, beta, h, check_degeneracy=False)
    drho = (
        finite_diff_drho(model, beta, h, "beta", step),
        finite_diff_drho(model, beta, h, "h", step),
    )
    return bures_metric_hubner(eig(st.rho, "rho"), drho)
