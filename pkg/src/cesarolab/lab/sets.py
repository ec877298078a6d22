"""Checks of the CZ decomposition invariants and of dyadic family combinatorics."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..circle import PCFunction, lp_norm
from ..dyadic import (
    CZDecomposition,
    DyadicInterval,
    IntervalFamily,
    cz_decompose,
    maximal_selection,
    neighbor,
    overlap_sum,
)
from .reports import BoundRatioReport, HardAssertionError

RECON_TOL = 1e-10
MEAN_TOL = 1e-10
REL_SLACK = 1e-12


@dataclass(frozen=True)
class CZInvariants:
    """Worst-case slack of every decomposition invariant (all must be ``passed``)."""

    reconstruction: float
    good_sup_over_lambda: float
    good_l1_over_f_l1: float
    bad_mean: float
    min_avg_over_lambda: float
    max_avg_over_lambda: float
    max_parent_avg_over_lambda: float
    max_bad_avg_over_lambda: float
    measure_F_times_lambda_over_l1: float
    n_intervals: int
    passed: bool
    failures: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["failures"] = list(self.failures)
        return d


def cz_invariants(d: CZDecomposition) -> CZInvariants:
    f, lam = d.f, d.lam
    m = f.level
    a = np.abs(f.values)
    l1 = lp_norm(f, 1)
    total = d.good.values.copy()
    bad_mean = 0.0
    avgs, parents, bad_avgs = [], [], []
    for I, part in d.bad:
        total = total + part.values
        c = I.cells(m)
        bad_mean = max(bad_mean, abs(part.values[c].sum() * f.width))
        avgs.append(a[c].mean())
        bad_avgs.append(np.abs(part.values[c]).mean())
        parents.append(a[I.parent().cells(m)].mean())
    recon = float(np.max(np.abs(total - f.values)))
    inf_norm = float(np.max(a))
    good_sup = float(np.max(np.abs(d.good.values)))
    out = dict(
        reconstruction=recon,
        good_sup_over_lambda=good_sup / lam,
        good_l1_over_f_l1=lp_norm(d.good, 1) / l1 if l1 else 0.0,
        bad_mean=bad_mean,
        min_avg_over_lambda=min(avgs, default=np.inf) / lam,
        max_avg_over_lambda=max(avgs, default=0.0) / lam,
        max_parent_avg_over_lambda=max(parents, default=0.0) / lam,
        max_bad_avg_over_lambda=max(bad_avgs, default=0.0) / lam,
        measure_F_times_lambda_over_l1=d.measure_F() * lam / l1 if l1 else 0.0,
        n_intervals=len(d.family),
    )
    fails = []
    if recon > RECON_TOL * (1 + inf_norm):
        fails.append("reconstruction")
    if out["good_sup_over_lambda"] > 2 * (1 + REL_SLACK):
        fails.append("good part exceeds 2 lambda")
    if out["good_l1_over_f_l1"] > 2 * (1 + REL_SLACK):
        fails.append("good part L1 exceeds 2 ||f||_1")
    if bad_mean > MEAN_TOL * max(l1, 1e-300):
        fails.append("bad part not mean zero")
    if avgs and out["min_avg_over_lambda"] <= 1 - REL_SLACK:
        fails.append("selected average not above lambda")
    if out["max_avg_over_lambda"] > 2 * (1 + REL_SLACK):
        fails.append("selected average above 2 lambda")
    if out["max_parent_avg_over_lambda"] > 1 + REL_SLACK:
        fails.append("parent average above lambda")
    if out["max_bad_avg_over_lambda"] > 4 * (1 + REL_SLACK):
        fails.append("bad part average above 4 lambda")
    if out["measure_F_times_lambda_over_l1"] > 1 + REL_SLACK:
        fails.append("measure of F above ||f||_1 / lambda")
    return CZInvariants(**out, passed=not fails, failures=tuple(fails))


def family_invariance(f: PCFunction, lam: float, ks=(1, -3, 17)) -> bool:
    """The selected family depends only on ``|f|``: same for ``|f|`` and phase modulations."""
    base = cz_decompose(f, lam).family
    if cz_decompose(f.abs(), lam).family != base:
        return False
    return all(cz_decompose(f.modulate(k), lam).family == base for k in ks)


def check_cz(f: PCFunction, lam: float) -> CZInvariants:
    """Decompose and hard-assert every invariant plus the ``|f|``-only dependence."""
    d = cz_decompose(f, lam)
    inv = cz_invariants(d)
    if not inv.passed:
        raise HardAssertionError(f"CZ invariants failed: {', '.join(inv.failures)}")
    if not family_invariance(f, lam):
        raise HardAssertionError("CZ family changed under f -> |f| or a phase modulation")
    return inv


def lambda_nesting(f: PCFunction, lam1: float, lam2: float) -> bool:
    """Every interval selected at the larger height lies in one selected at the smaller."""
    lo, hi = sorted((lam1, lam2))
    small = cz_decompose(f, lo).family
    return all(any(J.contains(I) for J in small) for I in cz_decompose(f, hi).family)


# -- random families and overlap combinatorics -----------------------------------------

def random_family(rng: np.random.Generator, max_level: int = 10, p_select: float = 0.3, p_split: float = 0.6) -> IntervalFamily:
    """Random pairwise disjoint dyadic family grown by a random tree walk from T."""
    out = []
    stack = [DyadicInterval(0, 0)]
    while stack:
        I = stack.pop()
        if I.level > 0 and rng.random() < p_select:
            out.append(I)
        elif I.level < max_level and (I.level == 0 or rng.random() < p_split):
            stack.extend([DyadicInterval(I.level + 1, 2 * I.index), DyadicInterval(I.level + 1, 2 * I.index + 1)])
    return IntervalFamily(tuple(out))


def overlap_bound(gamma: int) -> float:
    """Constructive constant ``gamma (2 gamma - 1)``."""
    return gamma * (2 * gamma - 1)


def overlap_report(fam: IntervalFamily, gamma: int, name: str = "") -> BoundRatioReport:
    """``overlap_sum / |F|``, computed at two resolutions that must agree exactly."""
    L = max(fam.finest_level, 1)
    s1 = overlap_sum(fam, gamma, L)
    s2 = overlap_sum(fam, gamma, L + 2)
    if not np.isclose(s1, s2, rtol=1e-12, atol=0.0):
        raise HardAssertionError(f"overlap sum changed under refinement: {s1} vs {s2}")
    return BoundRatioReport(
        "dilation_overlap", s1, fam.measure(), name,
        {"gamma": gamma, "n_intervals": len(fam), "bound": overlap_bound(gamma), "finest_level": L},
    )


def check_maximal_selection(fam: IntervalFamily, shift: int) -> IntervalFamily:
    """Selected shifted copies are pairwise disjoint and cover every shifted copy."""
    sel = maximal_selection(fam, shift)
    copies = [neighbor(J, shift) for J in sel]
    for i, a in enumerate(copies):
        for b in copies[i + 1:]:
            if a.intersects(b):
                raise HardAssertionError(f"selected shifted copies {a} and {b} intersect")
    for J in fam:
        c = neighbor(J, shift)
        if not any(s.contains(c) for s in copies):
            raise HardAssertionError(f"shifted copy {c} not covered by the selection")
    return sel
