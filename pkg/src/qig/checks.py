"""Verification suites behind ``qig check``.

Each suite samples seeded points, computes a worst-case residual and compares
it with a tolerance.  A single ``tol`` override replaces every suite's
tolerance, which is how the negative control (``--tol 1e-16``) is run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .closed_form import beta_inf_limit_hh, closed_form
from .hermitian import eig
from .metrics import (
    bures_distance_sq,
    bures_metric_thermal,
    fubini_study_metric,
    hubner_from_fd,
    sjoqvist_distance_sq,
    sjoqvist_metric,
)
from .models import (
    flux_ground_projector,
    flux_ground_projector_deps,
    make_model,
    thermal_state,
)

DEFAULT_DELTA = 1e-3
CONVERGENCE_COEFF = 5e3  # ratio tolerance = 5e3 * delta^2 (5e-3 at 1e-3)
CONVERGENCE_CAP = 0.5

MODELS = {
    "spin-z": ({}, (0.1, 5.0)),
    "spin-xz": ({"omega_x": 1.0}, (-2.0, 2.0)),
    "flux-qubit": ({"Delta": 1.0}, (-2.0, 2.0)),
}
NONCOMMUTING = ("spin-xz", "flux-qubit")


@dataclass
class SuiteResult:
    name: str
    tol: float
    worst: float = 0.0
    where: str = ""
    passed: bool = True

    def record(self, residual: float, where: str) -> None:
        if not math.isfinite(residual):
            residual = math.inf
        if residual > self.worst or not self.where:
            self.worst = residual
            self.where = where
        if residual > self.tol:
            self.passed = False

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        msg = f"{status}  {self.name:<22} worst={self.worst:.3e}  tol={self.tol:.1e}"
        if not self.passed:
            msg += f"  at {self.where}"
        return msg


def _points(rng: np.random.Generator, model: str, n: int, beta=(0.1, 5.0)):
    lo, hi = MODELS[model][1]
    return zip(rng.uniform(*beta, n), rng.uniform(lo, hi, n))


def _model(name: str):
    return make_model(name, MODELS[name][0])


def _max_abs(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def _where(model: str, beta: float, h: float, extra: str = "") -> str:
    s = f"(model={model}, beta={beta:.6g}, h={h:.6g})"
    return s + (f" {extra}" if extra else "")


def suite_hermitian(rng, tol=None, n=1000) -> SuiteResult:
    """Reconstruction, orthonormality and ordering of random Hermitian matrices."""
    r = SuiteResult("hermitian-core", tol if tol is not None else 1e-10)
    for k in range(n):
        d = int(rng.integers(1, 7))
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        a = 0.5 * (a + a.conj().T)
        s = eig(a)
        v = s.eigenvectors
        recon = _max_abs(s.reconstruct(), a) / max(1.0, float(np.max(np.abs(a))))
        ortho = _max_abs(v.conj().T @ v, np.eye(d))
        order = float(np.max(np.maximum(-np.diff(s.eigenvalues), 0.0))) if d > 1 else 0.0
        r.record(max(recon, ortho, order), f"(matrix #{k}, dim={d})")
    return r


def suite_thermal(rng, tol=None, n=100) -> SuiteResult:
    """Normalization, Gibbs ratios, spectral form and [H, rho] = 0."""
    r = SuiteResult("thermal-state", tol if tol is not None else 1e-10)
    for name in MODELS:
        m = _model(name)
        for beta, h in _points(rng, name, n):
            st = thermal_state(m, beta, h)
            p, e = st.probabilities, st.energies
            norm = abs(p.sum() - 1.0)
            gibbs = np.log(p)[:, None] - np.log(p)[None, :] + beta * (e[:, None] - e[None, :])
            recon = _max_abs(st.rho, (st.basis.eigenvectors * p) @ st.basis.eigenvectors.conj().T)
            H = m.H(h)
            comm = float(np.max(np.abs(H @ st.rho - st.rho @ H)))
            psd = max(0.0, -float(np.linalg.eigvalsh(st.rho).min()))
            res = max(norm, float(np.max(np.abs(gibbs))), recon, comm, psd)
            r.record(res, _where(name, beta, h))
    return r


def suite_engine_equivalence(rng, tol=None, n=50) -> SuiteResult:
    """Hubner sum with finite-difference tangents against the thermal engine."""
    r = SuiteResult("engine-equivalence", tol if tol is not None else 1e-7)
    for name in MODELS:
        m = _model(name)
        for beta, h in _points(rng, name, n):
            res = _max_abs(hubner_from_fd(m, beta, h).matrix, bures_metric_thermal(m, beta, h).matrix)
            r.record(res, _where(name, beta, h))
    return r


def suite_closed_form(rng, tol=None, n=200) -> SuiteResult:
    """Closed-form tensors against the general engines, split included."""
    r = SuiteResult("closed-form", tol if tol is not None else 1e-8)
    for name in MODELS:
        m = _model(name)
        for beta, h in _points(rng, name, n):
            cf = closed_form(name, beta, h, m.fixed_params)
            pairs = (
                (cf.tensor_bures, bures_metric_thermal(m, beta, h)),
                (cf.tensor_sjoqvist, sjoqvist_metric(m, beta, h)),
            )
            res = max(
                max(_max_abs(a.classical, b.classical), _max_abs(a.nonclassical, b.nonclassical))
                for a, b in pairs
            )
            r.record(res, _where(name, beta, h))
    return r


def suite_convergence(rng, delta=None, tol=None, n=10) -> SuiteResult:
    """Distance oracles against metric quadratic forms.

    The metric is evaluated at the midpoint of the step, so the ratio error
    is second order in ``delta``; the tolerance scales as ``5e3 * delta^2``
    at the requested step and at a tenth of it.
    """
    delta = DEFAULT_DELTA if delta is None else delta
    steps = (delta, delta / 10)
    tols = [min(CONVERGENCE_COEFF * d * d, CONVERGENCE_CAP) if tol is None else tol for d in steps]
    r = SuiteResult("oracle-convergence", max(tols))
    for name in MODELS:
        m = _model(name)
        for beta, h in _points(rng, name, n, beta=(0.5, 5.0)):
            angle = rng.uniform(0, 2 * math.pi)
            u = np.array([math.cos(angle), math.sin(angle)])
            for d, t in zip(steps, tols):
                res = convergence_residuals(m, beta, h, d * u)
                for metric, v in res.items():
                    where = _where(name, beta, h, f"metric={metric} delta={d:g}")
                    r.record(v, where)
                    if v > t:
                        r.passed = False
    return r


def convergence_residuals(model, beta: float, h: float, step) -> dict[str, float]:
    """``|d^2 / (delta.g.delta) - 1|`` for Bures and Sjoqvist at one point."""
    db, dh = float(step[0]), float(step[1])
    a = thermal_state(model, beta, h)
    b = thermal_state(model, beta + db, h + dh)
    mb, mh = beta + 0.5 * db, h + 0.5 * dh
    qb = bures_metric_thermal(model, mb, mh).quadratic_form(step)
    qs = sjoqvist_metric(model, mb, mh).quadratic_form(step)
    return {
        "bures": abs(bures_distance_sq(a.rho, b.rho) / qb - 1.0),
        "sjoqvist": abs(sjoqvist_distance_sq(a, b) / qs - 1.0),
    }


def suite_collapse(rng, tol=None, n=50) -> SuiteResult:
    """Commuting family: Bures equals Sjoqvist; otherwise only nc_hh differs."""
    r = SuiteResult("classical-collapse", tol if tol is not None else 1e-10)
    for name in MODELS:
        m = _model(name)
        for beta, h in _points(rng, name, n):
            b = bures_metric_thermal(m, beta, h)
            s = sjoqvist_metric(m, beta, h)
            if name == "spin-z":
                res = _max_abs(b.matrix, s.matrix)
            else:
                res = max(_max_abs(b.classical, s.classical), _max_abs(b.nonclassical[0], s.nonclassical[0]))
            r.record(res, _where(name, beta, h))
    return r


def suite_ordering(rng, tol=None, n=50) -> SuiteResult:
    """Bures nc_hh never exceeds Sjoqvist nc_hh; their ratio is tanh^2 for spin-xz."""
    r = SuiteResult("ordering", tol if tol is not None else 1e-10)
    for name in NONCOMMUTING:
        m = _model(name)
        for beta, h in _points(rng, name, n):
            b = float(bures_metric_thermal(m, beta, h).nonclassical[1, 1])
            s = float(sjoqvist_metric(m, beta, h).nonclassical[1, 1])
            res = max(0.0, b - s)
            if name == "spin-xz":
                nu = math.hypot(m.fixed_params["omega_x"], h)
                res = max(res, abs(b / s - math.tanh(0.5 * beta * m.hbar * nu) ** 2))
            r.record(res, _where(name, beta, h))
    return r


def suite_psd(rng, tol=None, n=50) -> SuiteResult:
    """Both tensors symmetric PSD across beta in [1e-3, 50]."""
    r = SuiteResult("psd", tol if tol is not None else 1e-12)
    for name in MODELS:
        m = _model(name)
        for beta, h in _points(rng, name, n, beta=(1e-3, 50.0)):
            worst = 0.0
            for g in (bures_metric_thermal(m, beta, h), sjoqvist_metric(m, beta, h)):
                mat = g.matrix
                worst = max(worst, abs(mat[0, 1] - mat[1, 0]), -float(g.eigenvalues().min()))
            r.record(max(worst, 0.0), _where(name, beta, h))
    return r


def suite_limits(rng, tol=None, n=21) -> SuiteResult:
    """beta = 50 metrics match the zero-temperature value, half the Fubini-Study one."""
    r = SuiteResult("zero-temperature", tol if tol is not None else 1e-6)
    m = _model("flux-qubit")
    for eps in np.linspace(-3.0, 3.0, n):
        lim = beta_inf_limit_hh(eps, 1.0)
        gb = bures_metric_thermal(m, 50.0, eps).g_hh
        gs = sjoqvist_metric(m, 50.0, eps).g_hh
        fs = fubini_study_metric(flux_ground_projector(1.0, eps), flux_ground_projector_deps(1.0, eps))
        res = max(abs(gb - lim), abs(gs - lim), abs(fs - 2 * lim))
        r.record(res, _where("flux-qubit", 50.0, eps))
    return r


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "hermitian-core": suite_hermitian,
    "thermal-state": suite_thermal,
    "engine-equivalence": suite_engine_equivalence,
    "closed-form": suite_closed_form,
    "oracle-convergence": suite_convergence,
    "classical-collapse": suite_collapse,
    "ordering": suite_ordering,
    "psd": suite_psd,
    "zero-temperature": suite_limits,
}


def run_checks(seed: int = 0, tol: float | None = None, delta: float | None = None) -> list[SuiteResult]:
    """Run every suite; each gets its own generator so suites are independent of order."""
    out = []
    for k, (name, fn) in enumerate(SUITES.items()):
        rng = np.random.default_rng([seed, k])
        if name == "oracle-convergence":
            out.append(fn(rng, delta=delta, tol=tol))
        else:
            out.append(fn(rng, tol=tol))
    return out
