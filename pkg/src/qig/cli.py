"""``qig`` command line: scan, check, fig2 and limits.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 I/O error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
import time

from .closed_form import beta_inf_limit_hh, discrepancy_nc
from .errors import ConfigError, ContractError, DegeneracyError, DomainError, SolverError
from .metrics import fubini_study_metric
from .models import flux_ground_projector, flux_ground_projector_deps
from .scan import GridRange, ScanConfig, columns, render, render_csv, run_scan, write_atomic

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_IO, EXIT_NUMERIC = 0, 1, 2, 3, 4

FIG2_EPS = (1.0, 1.25, 1.5)
FIG2_BETA = GridRange(0.0, 10.0, 201)


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        write_atomic(path, text)


def cmd_scan(args) -> int:
    params = {}
    for key, flag in (("Delta", args.delta), ("hbar", args.hbar), ("omega_x", args.omega_x)):
        if flag is not None:
            params[key] = flag
    overrides = dict(
        model=args.model,
        fixed_params=params,
        beta_range=args.beta,
        h_range=args.h,
        metrics=args.metrics,
        engine=args.engine,
        output_path=args.out,
        format=args.format,
        fd_step=args.fd_step,
        threads=args.threads,
        model_file=args.model_file,
    )
    if args.config:
        config = ScanConfig.load(args.config, **overrides)
    else:
        config = ScanConfig.from_mapping({}, **overrides)
    cols = columns(config)
    rows = [r.as_dict(cols) for r in run_scan(config)]
    _emit(render(rows, cols, config.format), config.output_path)
    n_bad = sum(r["status"] != "ok" for r in rows)
    if n_bad:
        print(f"qig: {n_bad} degenerate grid point(s) flagged", file=sys.stderr)
    return EXIT_OK


def cmd_check(args) -> int:
    from .checks import run_checks

    t0 = time.perf_counter()
    results = run_checks(seed=args.seed, tol=args.tol, delta=args.fd_step)
    for r in results:
        print(r.line())
    ok = all(r.passed for r in results)
    print(f"{'all suites passed' if ok else 'verification FAILED'} in {time.perf_counter() - t0:.2f} s")
    return EXIT_OK if ok else EXIT_VERIFY


def fig2_rows(beta: GridRange = FIG2_BETA) -> list[dict]:
    rows = []
    for b in beta.values():
        row = {"beta": float(b)}
        for eps, col in zip(FIG2_EPS, ("dg_eps1", "dg_eps1_25", "dg_eps1_5")):
            row[col] = discrepancy_nc(float(b), eps, 1.0, 1.0)
        rows.append(row)
    return rows


def cmd_fig2(args) -> int:
    cols = ["beta", "dg_eps1", "dg_eps1_25", "dg_eps1_5"]
    _emit(render_csv(fig2_rows(), cols), args.out)
    return EXIT_OK


def limits_rows(eps_range: GridRange, Delta: float = 1.0) -> list[dict]:
    rows = []
    for eps in eps_range.values():
        eps = float(eps)
        lim = beta_inf_limit_hh(eps, Delta)
        fs = fubini_study_metric(flux_ground_projector(Delta, eps), flux_ground_projector_deps(Delta, eps))
        rows.append({"eps": eps, "limit_hh": lim, "fs_value": fs, "ratio": fs / lim})
    return rows


def cmd_limits(args) -> int:
    if args.model != "flux-qubit":
        raise ConfigError(f"limits is defined for flux-qubit only, got {args.model!r}")
    rows = limits_rows(GridRange.parse(args.h), args.delta)
    _emit(render_csv(rows, ["eps", "limit_hh", "fs_value", "ratio"]), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qig", description="Information-geometric metrics of thermal qubit states.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("scan", help="evaluate metric tensors on a (beta, h) grid")
    s.add_argument("--model", choices=["spin-z", "spin-xz", "flux-qubit", "generic"])
    s.add_argument("--config", help="JSON file with ScanConfig fields; flags override it")
    s.add_argument("--model-file", help="JSON Hamiltonian table for --model generic")
    s.add_argument("--delta", type=float, help="flux-qubit tunnelling amplitude Delta")
    s.add_argument("--hbar", type=float)
    s.add_argument("--omega-x", type=float, help="spin-xz transverse field")
    s.add_argument("--beta", help="start:stop:count")
    s.add_argument("--h", help="start:stop:count for the tunable parameter")
    s.add_argument("--metrics", help="comma list of bures, sjoqvist, fisher-rao, both")
    s.add_argument("--engine", choices=["closed-form", "general", "both"])
    s.add_argument("--fd-step", type=float, help="derivative step for generic models")
    s.add_argument("--out", help="output path (default stdout)")
    s.add_argument("--format", choices=["csv", "json"])
    s.add_argument("--threads", help="worker count or 'auto'")
    s.set_defaults(func=cmd_scan)

    c = sub.add_parser("check", help="run the verification suites")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--tol", type=float, help="replace every suite tolerance")
    c.add_argument("--fd-step", type=float, help="distance-oracle step (default 1e-3)")
    c.set_defaults(func=cmd_check)

    f = sub.add_parser("fig2", help="discrepancy curves for eps = 1, 1.25, 1.5")
    f.add_argument("--out")
    f.set_defaults(func=cmd_fig2)

    lim = sub.add_parser("limits", help="zero-temperature metric against Fubini-Study")
    lim.add_argument("--model", default="flux-qubit")
    lim.add_argument("--h", default="-3:3:21", help="eps range start:stop:count")
    lim.add_argument("--delta", type=float, default=1.0)
    lim.add_argument("--hbar", type=float, default=1.0, help="accepted for symmetry; the limit does not depend on it")
    lim.add_argument("--out")
    lim.set_defaults(func=cmd_limits)
    return p


RANGE_FLAGS = ("--beta", "--h")


def _glue_ranges(argv: list[str]) -> list[str]:
    """Turn ``--h -2:2:5`` into ``--h=-2:2:5`` so negative ranges are not read as flags."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] in RANGE_FLAGS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_ranges(argv))
    try:
        return args.func(args)
    except (ConfigError, ContractError) as exc:
        print(f"qig: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"qig: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (DegeneracyError, SolverError, DomainError, FloatingPointError) as exc:
        print(f"qig: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
