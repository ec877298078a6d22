"""Report records shared by all experiment checks."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

CSV_COLUMNS = (
    "lemma_id",
    "corpus_item",
    "grid_level",
    "lam",
    "N",
    "n",
    "gamma",
    "beta",
    "delta",
    "lhs",
    "rhs",
    "ratio",
    "params",
)


class HardAssertionError(AssertionError):
    """An exact identity failed; this fails a run."""


def _clean(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


@dataclass
class BoundRatioReport:
    """``lhs / rhs`` for one inequality with its unknown constant removed."""

    lemma_id: str
    lhs: float
    rhs_without_constant: float
    corpus_item: str = ""
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.lhs = float(self.lhs)
        self.rhs_without_constant = float(self.rhs_without_constant)
        if self.lhs < 0 or self.rhs_without_constant < 0:
            raise ValueError("lhs and rhs must be nonnegative")

    @property
    def ratio(self) -> float:
        if self.rhs_without_constant > 0:
            return self.lhs / self.rhs_without_constant
        return 0.0 if self.lhs == 0 else math.inf

    def row(self) -> dict:
        p = {k: _clean(v) for k, v in self.params.items()}
        return {
            "lemma_id": self.lemma_id,
            "corpus_item": self.corpus_item,
            "grid_level": p.get("grid_level", ""),
            "lam": p.get("lam", ""),
            "N": p.get("N", ""),
            "n": p.get("n", ""),
            "gamma": p.get("gamma", ""),
            "beta": p.get("beta", ""),
            "delta": p.get("delta", ""),
            "lhs": self.lhs,
            "rhs": self.rhs_without_constant,
            "ratio": self.ratio,
            "params": json.dumps(p, sort_keys=True),
        }

    def to_dict(self) -> dict:
        return {
            "lemma_id": self.lemma_id,
            "corpus_item": self.corpus_item,
            "lhs": self.lhs,
            "rhs_without_constant": self.rhs_without_constant,
            "ratio": _clean(self.ratio),
            "params": {k: _clean(v) for k, v in self.params.items()},
        }


@dataclass
class WeakTypeCurve:
    """Measures of super-level sets against the bound, over increasing ``lambdas``."""

    lambdas: np.ndarray
    measures: np.ndarray
    bound_values: np.ndarray
    corpus_item: str = ""
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.lambdas = np.asarray(self.lambdas, dtype=float)
        self.measures = np.asarray(self.measures, dtype=float)
        self.bound_values = np.asarray(self.bound_values, dtype=float)
        if not (self.lambdas.shape == self.measures.shape == self.bound_values.shape):
            raise ValueError("curve arrays must have equal length")

    def is_monotone(self, tol: float = 1e-12) -> bool:
        order = np.argsort(self.lambdas, kind="stable")
        return bool(np.all(np.diff(self.measures[order]) <= tol))

    def fitted_constant(self) -> float:
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(self.bound_values > 0, self.measures / self.bound_values, 0.0)
        return float(r.max(initial=0.0))

    def to_dict(self) -> dict:
        return {
            "corpus_item": self.corpus_item,
            "lambdas": self.lambdas.tolist(),
            "measures": self.measures.tolist(),
            "bound_values": self.bound_values.tolist(),
            "monotone": self.is_monotone(),
            "fitted_constant": self.fitted_constant(),
            "params": {k: _clean(v) for k, v in self.params.items()},
        }


def max_ratio(reports, **match) -> float:
    vals = [r.ratio for r in reports if all(r.params.get(k) == v for k, v in match.items())]
    return max(vals, default=0.0)


def monotone_blowup(values, factor: float = 2.0) -> bool:
    """Strictly increasing across the sweep with last/first above ``factor``."""
    v = [float(x) for x in values]
    if len(v) < 2 or v[0] <= 0:
        return False
    return all(b > a for a, b in zip(v, v[1:])) and v[-1] / v[0] > factor


def stable_pair(a: float, b: float, factor: float = 2.0) -> bool:
    """``a`` and ``b`` within ``factor`` of each other (both zero counts as stable)."""
    if a == 0 and b == 0:
        return True
    if a <= 0 or b <= 0:
        return False
    return max(a, b) / min(a, b) <= factor


def strictly_decreasing(values, allowed_inversions: int = 1) -> bool:
    v = list(values)
    bad = sum(1 for a, b in zip(v, v[1:]) if not b < a)
    return bad <= allowed_inversions


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in reports:
        w.writerow(r.row())
    return buf.getvalue()
