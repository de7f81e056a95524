"""Parameter-grid scans over ``(beta, h)`` with CSV or JSON output."""

from __future__ import annotations

import json
import math
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .closed_form import closed_form
from .errors import ConfigError, DegeneracyError
from .metrics import DEFAULT_FD_STEP, MetricTensor, bures_metric_thermal, sjoqvist_metric
from .models import ModelSpec, load_generic_model, make_model

METRICS = ("bures", "sjoqvist", "fisher-rao")
ENGINES = ("closed-form", "general", "both")
FORMATS = ("csv", "json")
BUILTIN = ("spin-z", "spin-xz", "flux-qubit")
TENSOR_FIELDS = ("g_bb", "g_bh", "g_hh", "g_hh_classical", "g_hh_nonclassical")


@dataclass(frozen=True)
class GridRange:
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ConfigError(f"range bounds must be finite, got {self.start}:{self.stop}")
        if self.count < 1:
            raise ConfigError(f"range count must be >= 1, got {self.count}")
        if self.start > self.stop:
            raise ConfigError(f"range start {self.start} exceeds stop {self.stop}")

    @classmethod
    def parse(cls, text) -> "GridRange":
        """Accept ``"start:stop:count"``, a single number, or a 3-sequence."""
        if isinstance(text, GridRange):
            return text
        if isinstance(text, (int, float)):
            return cls(float(text), float(text), 1)
        parts = text.split(":") if isinstance(text, str) else list(text)
        try:
            if len(parts) == 1:
                v = float(parts[0])
                return cls(v, v, 1)
            if len(parts) == 3:
                return cls(float(parts[0]), float(parts[1]), int(parts[2]))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad range {text!r}: {exc}") from exc
        raise ConfigError(f"bad range {text!r}; expected start:stop:count")

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, self.count)


def parse_metrics(spec) -> tuple[str, ...]:
    """Normalize a metric selection; ``both`` means Bures and Sjoqvist."""
    items = spec.split(",") if isinstance(spec, str) else list(spec)
    chosen = set()
    for item in items:
        item = item.strip().lower().replace("_", "-")
        if item == "both":
            chosen.update(("bures", "sjoqvist"))
        elif item in ("fisher", "fr"):
            chosen.add("fisher-rao")
        elif item in METRICS:
            chosen.add(item)
        elif item:
            raise ConfigError(f"unknown metric {item!r}; expected a subset of bures, sjoqvist, fisher-rao, both")
    if not chosen:
        raise ConfigError("no metrics selected")
    return tuple(m for m in METRICS if m in chosen)


@dataclass(frozen=True)
class ScanConfig:
    model: str = "flux-qubit"
    fixed_params: Mapping[str, float] = field(default_factory=dict)
    beta_range: GridRange = GridRange(0.1, 5.0, 10)
    h_range: GridRange = GridRange(-2.0, 2.0, 5)
    metrics: tuple[str, ...] = ("bures", "sjoqvist")
    engine: str = "closed-form"
    output_path: str | None = None
    format: str = "csv"
    fd_step: float = DEFAULT_FD_STEP
    threads: int | str = "auto"
    model_file: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "beta_range", GridRange.parse(self.beta_range))
        object.__setattr__(self, "h_range", GridRange.parse(self.h_range))
        object.__setattr__(self, "metrics", parse_metrics(self.metrics))
        object.__setattr__(self, "fixed_params", dict(self.fixed_params))
        if self.engine not in ENGINES:
            raise ConfigError(f"unknown engine {self.engine!r}; expected one of {', '.join(ENGINES)}")
        if self.format not in FORMATS:
            raise ConfigError(f"unknown format {self.format!r}; expected csv or json")
        if not (0 < self.fd_step <= 0.1):
            raise ConfigError(f"fd_step must lie in (0, 0.1], got {self.fd_step}")
        if self.model == "generic":
            if self.model_file is None:
                raise ConfigError("model 'generic' needs a model file")
            if self.engine != "general":
                raise ConfigError("model 'generic' only supports engine=general")
        elif self.model not in BUILTIN:
            raise ConfigError(f"unknown model {self.model!r}")
        if self.beta_range.start < 0:
            raise ConfigError("beta must be >= 0")
        if self.engine != "closed-form" and self.beta_range.start <= 0:
            raise ConfigError("the general engine needs beta > 0 (beta = 0 is closed-form only)")
        n = self.threads
        if n != "auto":
            try:
                n = int(n)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"threads must be a positive integer or 'auto', got {n!r}") from exc
            if n < 1:
                raise ConfigError(f"threads must be >= 1, got {n}")
            object.__setattr__(self, "threads", n)

    @classmethod
    def from_mapping(cls, data: Mapping, **overrides) -> "ScanConfig":
        """Build from a parsed config file; non-``None`` overrides win."""
        known = {f.name for f in fields(cls)}
        merged = {k.replace("-", "_"): v for k, v in data.items()}
        for alias, key in (("beta", "beta_range"), ("h", "h_range"), ("out", "output_path")):
            if alias in merged:
                merged[key] = merged.pop(alias)
        unknown = set(merged) - known
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        params = dict(merged.get("fixed_params", {}))
        params.update(overrides.pop("fixed_params", None) or {})
        merged["fixed_params"] = params
        merged.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**merged)

    @classmethod
    def load(cls, path, **overrides) -> "ScanConfig":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: config must be a JSON object")
        return cls.from_mapping(data, **overrides)

    def build_model(self) -> ModelSpec:
        if self.model == "generic":
            return load_generic_model(self.model_file, fd_step=self.fd_step)
        return make_model(self.model, self.fixed_params)

    def n_threads(self) -> int:
        if self.threads == "auto":
            return os.cpu_count() or 1
        return int(self.threads)


def columns(config: ScanConfig) -> list[str]:
    """Output columns; depend only on the metric, engine and model selection."""
    cols = ["beta", "h", "status"]
    for m in config.metrics:
        prefix = m.replace("-", "_")
        cols += [f"{prefix}_{f}" for f in TENSOR_FIELDS]
    if "bures" in config.metrics and "sjoqvist" in config.metrics:
        cols.append("delta_nc")
    if config.engine == "both":
        cols.append("engine_disagreement")
    return cols


@dataclass(frozen=True)
class ScanRow:
    beta: float
    h: float
    status: str
    values: Mapping[str, float | None]

    def as_dict(self, cols: Sequence[str]) -> dict:
        out = {"beta": self.beta, "h": self.h, "status": self.status}
        for c in cols[3:]:
            out[c] = self.values.get(c)
        return out


def _tensor_fields(t: MetricTensor) -> list[float]:
    return [t.g_bb, t.g_bh, t.g_hh, float(t.classical[1, 1]), float(t.nonclassical[1, 1])]


def _fisher_rao(t: MetricTensor) -> MetricTensor:
    return MetricTensor.from_parts(t.classical, np.zeros((2, 2)))


def _general(model: ModelSpec, beta: float, h: float, metrics) -> dict[str, MetricTensor]:
    out = {}
    if "bures" in metrics or "fisher-rao" in metrics:
        b = bures_metric_thermal(model, beta, h)
        out["bures"] = b
        out["fisher-rao"] = _fisher_rao(b)
    if "sjoqvist" in metrics:
        out["sjoqvist"] = sjoqvist_metric(model, beta, h)
    return out


def _closed(config: ScanConfig, model: ModelSpec, beta: float, h: float):
    r = closed_form(config.model, beta, h, model.fixed_params)
    return {
        "bures": r.tensor_bures,
        "sjoqvist": r.tensor_sjoqvist,
        "fisher-rao": _fisher_rao(r.tensor_bures),
    }, r.discrepancy_nc


def evaluate_point(config: ScanConfig, model: ModelSpec, beta: float, h: float) -> ScanRow:
    """One grid point; a degenerate spectrum yields a flagged row with empty fields."""
    try:
        delta = None
        if config.engine == "general":
            tensors = _general(model, beta, h, config.metrics)
        else:
            tensors, delta = _closed(config, model, beta, h)
        values: dict[str, float | None] = {}
        for m in config.metrics:
            prefix = m.replace("-", "_")
            for name, v in zip(TENSOR_FIELDS, _tensor_fields(tensors[m])):
                values[f"{prefix}_{name}"] = v
        if "bures" in config.metrics and "sjoqvist" in config.metrics:
            if delta is None:
                # Classical parts agree by construction; differencing them only adds round-off.
                delta = float(tensors["sjoqvist"].nonclassical[1, 1] - tensors["bures"].nonclassical[1, 1])
            values["delta_nc"] = delta
        if config.engine == "both":
            ref = _general(model, beta, h, config.metrics)
            values["engine_disagreement"] = max(
                max(abs(a - b) for a, b in zip(_tensor_fields(tensors[m]), _tensor_fields(ref[m])))
                for m in config.metrics
            )
        return ScanRow(beta, h, "ok", values)
    except DegeneracyError:
        return ScanRow(beta, h, "degenerate", {})


def run_scan(config: ScanConfig, model: ModelSpec | None = None) -> list[ScanRow]:
    """Evaluate the grid in row-major order (beta outer, h inner).

    Rows for different beta values run concurrently; the result order never
    depends on the thread count.
    """
    model = model or config.build_model()
    hs = config.h_range.values()

    def row(beta: float) -> list[ScanRow]:
        return [evaluate_point(config, model, float(beta), float(h)) for h in hs]

    betas = config.beta_range.values()
    n = min(config.n_threads(), len(betas))
    if n <= 1:
        blocks = [row(b) for b in betas]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            blocks = list(pool.map(row, betas))
    return [r for block in blocks for r in block]


def fmt(x) -> str:
    """17 significant digits; round-trips every double exactly."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def render_csv(rows: Sequence[Mapping], cols: Sequence[str]) -> str:
    lines = [",".join(cols)]
    for r in rows:
        lines.append(",".join(fmt(r.get(c)) for c in cols))
    return "\n".join(lines) + "\n"


def render_json(rows: Sequence[Mapping], cols: Sequence[str]) -> str:
    def value(v):
        if v is None:
            return "null"
        if isinstance(v, str):
            return json.dumps(v)
        x = float(v)
        if not math.isfinite(x):
            return "null"
        return fmt(x)

    objs = []
    for r in rows:
        body = ", ".join(f"{json.dumps(c)}: {value(r.get(c))}" for c in cols)
        objs.append("  {" + body + "}")
    return "[\n" + ",\n".join(objs) + "\n]\n" if objs else "[]\n"


def render(rows: Sequence[Mapping], cols: Sequence[str], format: str) -> str:
    return render_json(rows, cols) if format == "json" else render_csv(rows, cols)


def write_atomic(path, text: str) -> None:
    """Write via a temporary sibling file so a failure never leaves a partial file."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent if str(path.parent) else ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def scan_to_text(config: ScanConfig) -> str:
    cols = columns(config)
    rows = [r.as_dict(cols) for r in run_scan(config)]
    return render(rows, cols, config.format)
