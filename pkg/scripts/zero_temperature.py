"""Approach to the zero-temperature limit: both metrics against Delta^2 / (4 nu^4).

Usage: python3 scripts/zero_temperature.py
"""

from qig.closed_form import beta_inf_limit_hh
from qig.metrics import bures_metric_thermal, sjoqvist_metric
from qig.models import make_model

model = make_model("flux-qubit", Delta=1.0)
eps = 0.5
limit = beta_inf_limit_hh(eps)
print(f"eps={eps}, limit={limit:.10f}")
print(f"{'beta':>6} {'bures g_hh':>14} {'sjoqvist g_hh':>14} {'gap':>10}")
for beta in (0.5, 1, 2, 5, 10, 20, 50):
    b = bures_metric_thermal(model, beta, eps).g_hh
    s = sjoqvist_metric(model, beta, eps).g_hh
    print(f"{beta:6.1f} {b:14.10f} {s:14.10f} {s - b:10.2e}")
print("Fubini-Study / limit = 2 exactly: see `qig limits`")
