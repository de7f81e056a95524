"""Exit criteria of the build, one test per criterion.

Each test records a one-line verdict; the lines are printed in the pytest
terminal summary.  Running this file directly prints them as well.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from qig.checks import convergence_residuals, suite_hermitian, suite_psd, suite_thermal
from qig.cli import main
from qig.closed_form import beta_inf_limit_hh, closed_form_flux, closed_form_spin_z
from qig.metrics import (
    bures_metric_thermal,
    fubini_study_metric,
    hubner_from_fd,
    sjoqvist_metric,
)
from qig.models import flux_ground_projector, flux_ground_projector_deps, make_model

pytestmark = pytest.mark.acceptance

RESULTS: dict[int, str] = {}


def record(n: int, title: str, ok: bool, detail: str) -> None:
    RESULTS[n] = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {title} ({detail})"
    print(RESULTS[n])
    assert ok, RESULTS[n]


def maxdiff(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def test_1_spin_z_coincidence():
    m = make_model("spin-z")
    t0 = time.perf_counter()
    worst = 0.0
    for beta in np.linspace(0.1, 5, 20):
        for w in np.linspace(0.1, 5, 20):
            cf = closed_form_spin_z(beta, w)
            tensors = (bures_metric_thermal(m, beta, w), sjoqvist_metric(m, beta, w), cf.tensor_bures, cf.tensor_sjoqvist)
            for t in tensors[1:]:
                worst = max(worst, maxdiff(t.classical, tensors[0].classical), maxdiff(t.nonclassical, tensors[0].nonclassical))
    dt = time.perf_counter() - t0
    record(1, "spin-z Bures == Sjoqvist == closed form", worst <= 1e-10 and dt < 1.0, f"max diff {worst:.2e}, {dt:.3f} s")


def test_2_flux_discrepancy():
    m = make_model("flux-qubit", Delta=1.0)
    t0 = time.perf_counter()
    worst, lowest = 0.0, math.inf
    for beta in np.linspace(0.1, 5, 20):
        for eps in np.linspace(-2, 2, 20):
            b, s = bures_metric_thermal(m, beta, eps), sjoqvist_metric(m, beta, eps)
            gap = s.g_hh - b.g_hh
            lowest = min(lowest, gap)
            worst = max(
                worst,
                abs(gap - closed_form_flux(beta, eps).discrepancy_nc),
                abs(s.g_bb - b.g_bb),
                abs(s.g_bh - b.g_bh),
            )
    dt = time.perf_counter() - t0
    ok = worst <= 1e-10 and lowest >= 0 and dt < 1.0
    record(2, "flux discrepancy matches closed form and is >= 0", ok, f"max diff {worst:.2e}, min gap {lowest:.2e}, {dt:.3f} s")


def test_3_engine_equivalence():
    params = {"spin-z": ({}, (0.1, 5)), "spin-xz": ({"omega_x": 1.0}, (-2, 2)), "flux-qubit": ({"Delta": 1.0}, (-2, 2))}
    rng = np.random.default_rng(3)
    t0 = time.perf_counter()
    worst = 0.0
    for name, (p, hr) in params.items():
        m = make_model(name, p)
        for beta, h in zip(rng.uniform(0.1, 5, 50), rng.uniform(*hr, 50)):
            worst = max(worst, maxdiff(hubner_from_fd(m, beta, h).matrix, bures_metric_thermal(m, beta, h).matrix))
    dt = time.perf_counter() - t0
    record(3, "Hubner + finite differences == thermal engine", worst <= 1e-7 and dt < 5.0, f"max diff {worst:.2e}, {dt:.3f} s")


def test_4_distance_oracle_convergence():
    rng = np.random.default_rng(4)
    t0 = time.perf_counter()
    worst = {1e-3: 0.0, 1e-4: 0.0}
    for name, p in (("spin-xz", {"omega_x": 1.0}), ("flux-qubit", {"Delta": 1.0})):
        m = make_model(name, p)
        for beta, h, a in zip(rng.uniform(0.1, 5, 10), rng.uniform(-2, 2, 10), rng.uniform(0, 2 * math.pi, 10)):
            u = np.array([math.cos(a), math.sin(a)])
            for d in worst:
                worst[d] = max(worst[d], *convergence_residuals(m, beta, h, d * u).values())
    dt = time.perf_counter() - t0
    ok = worst[1e-3] <= 5e-3 and worst[1e-4] <= 5e-5 and dt < 5.0
    record(4, "distance^2 / quadratic form -> 1", ok, f"|ratio-1| {worst[1e-3]:.2e} at 1e-3, {worst[1e-4]:.2e} at 1e-4, {dt:.3f} s")


def test_5_zero_temperature_limit():
    m = make_model("flux-qubit", Delta=1.0)
    worst_g, worst_fs = 0.0, 0.0
    for eps in np.linspace(-3, 3, 21):
        lim = beta_inf_limit_hh(eps, 1.0)
        worst_g = max(worst_g, abs(bures_metric_thermal(m, 50.0, eps).g_hh - lim), abs(sjoqvist_metric(m, 50.0, eps).g_hh - lim))
        fs = fubini_study_metric(flux_ground_projector(1.0, eps), flux_ground_projector_deps(1.0, eps))
        worst_fs = max(worst_fs, abs(fs - 2 * lim))
    ok = worst_g <= 1e-6 and worst_fs <= 1e-10
    record(5, "beta=50 metrics hit the limit, Fubini-Study is twice it", ok, f"metric dev {worst_g:.2e}, FS dev {worst_fs:.2e}")


def test_6_fig2(tmp_path):
    out = tmp_path / "fig2.csv"
    code = main(["fig2", "--out", str(out)])
    data = np.loadtxt(out, delimiter=",", skiprows=1)
    intercepts = data[0, 1:]
    expected = np.array([0.0625, 0.0380725, 0.0236686])
    dev = float(np.max(np.abs(intercepts - expected)))
    decreasing = bool(np.all(np.diff(data[:, 1:], axis=0) < 0))
    tail = float(data[-1, 1])
    ok = code == 0 and data[0, 0] == 0 and data[-1, 0] == 10 and dev <= 1e-6 and decreasing and tail <= 1e-6
    record(6, "fig2 discrepancy curves", ok, f"intercept dev {dev:.2e}, strictly decreasing={decreasing}, eps=1 at beta=10: {tail:.2e}")


def test_7_tilted_spin_ratio():
    m = make_model("spin-xz", omega_x=1.0)
    rng = np.random.default_rng(7)
    worst, inside = 0.0, True
    for beta, wz in zip(rng.uniform(0.1, 5, 50), rng.uniform(-2, 2, 50)):
        r = bures_metric_thermal(m, beta, wz).nonclassical[1, 1] / sjoqvist_metric(m, beta, wz).nonclassical[1, 1]
        inside &= 0.0 <= r <= 1.0
        worst = max(worst, abs(r - math.tanh(0.5 * beta * math.hypot(1.0, wz)) ** 2))
    record(7, "spin-xz nonclassical ratio is tanh^2", worst <= 1e-10 and inside, f"max dev {worst:.2e}, in [0,1]={inside}")


def test_8_property_suites():
    rng = np.random.default_rng(8)
    suites = [suite_hermitian(rng, n=1000), suite_thermal(rng, n=100), suite_psd(rng, n=50)]
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "qig", "check"], capture_output=True, text=True)
    dt = time.perf_counter() - t0
    ok = all(s.passed for s in suites) and proc.returncode == 0 and dt < 60.0
    worst = ", ".join(f"{s.name} {s.worst:.1e}" for s in suites)
    record(8, "property suites and full `qig check`", ok, f"{worst}; check exit {proc.returncode} in {dt:.2f} s")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
