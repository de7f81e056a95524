"""Scan the flux qubit over (beta, eps) with both metrics and report where they differ most.

Usage: python3 scripts/flux_scan.py [out.csv]
"""

import sys

from qig.scan import ScanConfig, columns, render_csv, run_scan, write_atomic

config = ScanConfig(
    model="flux-qubit",
    fixed_params={"Delta": 1.0, "hbar": 1.0},
    beta_range="0.1:5:50",
    h_range="-2:2:81",
    metrics="both,fisher-rao",
    engine="both",
)
rows = run_scan(config)
cols = columns(config)
out = sys.argv[1] if len(sys.argv) > 1 else "flux_scan.csv"
write_atomic(out, render_csv([r.as_dict(cols) for r in rows], cols))

top = max(rows, key=lambda r: r.values["delta_nc"])
worst = max(r.values["engine_disagreement"] for r in rows)
print(f"wrote {len(rows)} rows to {out}")
print(f"largest discrepancy {top.values['delta_nc']:.6f} at beta={top.beta:.3f}, eps={top.h:.3f}")
print(f"closed form vs general engines: max |diff| = {worst:.2e}")
