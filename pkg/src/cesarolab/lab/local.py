"""Pointwise relations among the local operators and the weak-type proxy for ``H_n``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..circle import TWO_PI, PCFunction, lp_norm
from ..kernels import check_fejer_bounds, cot_identity_defect, dirichlet_kernel, fejer_kernel
from ..operators import e_operator, hilbert_modified, modified_partial_sum, partial_sum
from ..spectral import DyadicPoints, midpoints
from .reports import HardAssertionError, WeakTypeCurve

DOMINATION_TOL = 1e-9


def evenly_spaced_midpoints(g: int, count: int) -> DyadicPoints:
    pts = midpoints(g)
    idx = np.linspace(0, len(pts) - 1, count).round().astype(int)
    return pts.subset(idx)


def domination_gap(f: PCFunction, l: int, pts: DyadicPoints) -> float:
    """``max (|S_l f - S~_l f| - E_l|f|)``; nonpositive when the domination holds."""
    lhs = np.abs(partial_sum(f, l, pts) - modified_partial_sum(f, l, l, pts))
    rhs = np.abs(e_operator(f.abs(), l, l, pts))
    return float(np.max(lhs - rhs))


def check_domination(f: PCFunction, l: int, pts: DyadicPoints, tol: float = DOMINATION_TOL) -> float:
    gap = domination_gap(f, l, pts)
    if gap > tol:
        raise HardAssertionError(f"|S_l f - S~_l f| exceeds E_l|f| by {gap:.3e} (l={l})")
    return gap


def modified_sum_gap(f: PCFunction, l: int, pts: DyadicPoints) -> float:
    """``max (|S~_l f|^2 - ||f||_1^2 - |H_l(f e^{-i(l+1)x})|^2 - |H_l(f e^{ilx})|^2)``."""
    s = np.abs(modified_partial_sum(f, l, l, pts)) ** 2
    h1 = np.abs(hilbert_modified(f, l, pts, modulation=-(l + 1))) ** 2
    h2 = np.abs(hilbert_modified(f, l, pts, modulation=l)) ** 2
    return float(np.max(s - lp_norm(f, 1) ** 2 - h1 - h2))


@dataclass(frozen=True)
class KernelSuiteResult:
    max_cesaro_defect: float
    min_fejer: float
    max_bound_ratio: float
    max_cot_defect: float
    mean_value_defect: float
    passed: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def kernel_identities(n_max: int = 64, samples: int = 1024, seed: int = 0) -> KernelSuiteResult:
    """Fejer as the Cesaro mean of Dirichlet kernels, Fejer bounds, the cotangent identity and mean value."""
    u = -np.pi + TWO_PI * (np.arange(samples) + 0.5) / samples
    worst = 0.0
    dsum = np.zeros(samples, dtype=complex)
    lo, hi = np.inf, 0.0
    for n in range(0, n_max + 1):
        dsum += dirichlet_kernel(n, u)
        worst = max(worst, float(np.max(np.abs(fejer_kernel(n, u) - dsum / (n + 1)))))
        rep = check_fejer_bounds(n, samples)
        lo, hi = min(lo, rep.min_value), max(hi, rep.max_ratio)
    rng = np.random.default_rng(seed)
    z = rng.uniform(1e-3, np.pi, 1000) * rng.choice([-1.0, 1.0], 1000)
    cot = float(np.max(cot_identity_defect(z)))
    fine = -np.pi + TWO_PI * (np.arange(1 << 16) + 0.5) / (1 << 16)
    mv = max(float(abs(fejer_kernel(n, fine).mean() * 2.0 - 1.0)) for n in (0, 1, 7, 64))
    passed = bool(worst <= 1e-10 and lo >= -1e-12 and hi <= 1 + 1e-9 and cot <= 1e-12 and mv <= 1e-8)
    return KernelSuiteResult(worst, lo, hi, cot, mv, passed)


def hilbert_weak_type(f: PCFunction, n: int, thresholds, grid_level: int = 10, corpus_item: str = "") -> WeakTypeCurve:
    """``measure{|H_n f| > t}`` against ``||f||_1 / t``."""
    pts = midpoints(grid_level)
    h = np.abs(hilbert_modified(f, n, pts))
    w = TWO_PI / 2**grid_level
    ts = np.sort(np.asarray(thresholds, dtype=float))
    l1 = lp_norm(f, 1)
    meas = [np.count_nonzero(h > t) * w for t in ts]
    return WeakTypeCurve(ts, meas, l1 / ts, corpus_item, {"n": n, "grid_level": grid_level})
