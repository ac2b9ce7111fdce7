"""Persisted experiment records: JSON report plus CSV of per-sample data.

Reports serialize deterministically (sorted keys, repr floats); the
timestamp and runtime_ms fields are volatile and excluded from the
byte-stability comparison set.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

VOLATILE_KEYS = ("timestamp", "runtime_ms")


def stats_from_samples(values) -> dict:
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return {"min": None, "max": None, "mean": None, "quantiles": {}}
    qs = (0.05, 0.25, 0.5, 0.75, 0.95)
    return {
        "min": float(np.min(values)),
        "max": float(np.max(values)),
        "mean": float(np.mean(values)),
        "quantiles": {f"q{int(100 * q):02d}": float(np.quantile(values, q)) for q in qs},
    }


@dataclass
class ExperimentReport:
    experiment: str
    params: dict
    exponents: dict
    seed: int | None
    samples: int | None
    stats: dict
    passed: bool | None
    runtime_ms: float
    extra: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    timestamp: str = ""

    def __post_init__(self):
        if not self.timestamp:
            self.timestamp = datetime.now(timezone.utc).isoformat()

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "params": self.params,
            "exponents": self.exponents,
            "seed": self.seed,
            "samples": self.samples,
            "stats": self.stats,
            "pass": self.passed,
            "runtime_ms": self.runtime_ms,
            "extra": self.extra,
            "config": self.config,
            "timestamp": self.timestamp,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, default=_coerce) + "\n"

    def save(self, outdir, name: str | None = None) -> Path:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        path = outdir / f"{name or self.experiment}.json"
        path.write_text(self.to_json())
        return path


def _coerce(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    raise TypeError(f"not JSON-serializable: {type(obj)}")


def write_csv(outdir, name: str, columns: dict) -> Path:
    """Write named columns (equal-length sequences) as a CSV file."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / f"{name}.csv"
    keys = list(columns)
    rows = zip(*(np.asarray(columns[k]).tolist() for k in keys))
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(keys)
        writer.writerows(rows)
    return path


def comparable_dict(report_dict: dict) -> dict:
    """Report dict with volatile fields removed (the determinism contract)."""
    return {k: v for k, v in report_dict.items() if k not in VOLATILE_KEYS}


def reports_equal(path_a, path_b) -> bool:
    a = comparable_dict(json.loads(Path(path_a).read_text()))
    b = comparable_dict(json.loads(Path(path_b).read_text()))
    return json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
