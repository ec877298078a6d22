"""Bounded-ratio checks for integrals of operator images over CZ-derived regions.

Every left-hand side is a midpoint sum on the level-``g`` evaluation grid of
closed-form operator values.  Regions are unions of dyadic cells at level
at most ``g``, so membership of each grid cell is exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..circle import TWO_PI, GridSet, PCFunction, lp_norm
from ..dyadic import CZDecomposition, cz_decompose, dilated_union, filter_beta
from ..operators import e_operator, hilbert_modified, partial_sum, sigma_indicator, sv_difference
from ..sequences import IndexSequence, beta_param, log_fn
from ..spectral import DyadicPoints, midpoints
from .reports import BoundRatioReport, HardAssertionError

# ids of the checked inequalities
HILBERT_ON_DILATED = "hilbert_weighted_on_dilated_F"
PARTIAL_ON_DILATED = "partial_sum_weighted_on_dilated_F"
SV_ON_DILATED = "sv_weighted_on_dilated_F"
HILBERT_ON_GAP = "hilbert_on_F_minus_F_beta"
PARTIAL_ON_GAP = "partial_sum_on_F_minus_F_beta"
SV_ON_GAP = "sv_on_F_minus_F_beta"
SV_WEIGHTED_ON_F = "sv_weighted_sum_on_dilated_F"
SV_WEIGHTED_ON_T = "sv_weighted_sum_on_T"
HILBERT_OFF_F = "hilbert_off_dilated_F"
PARTIAL_OFF_F = "partial_sum_off_dilated_F"
SV_OFF_F = "sv_off_dilated_F"
E_VANISHING = "local_mean_of_bad_part_vanishes"

E_TOL = 1e-10


@dataclass(frozen=True)
class Grid:
    """Midpoint evaluation grid at level ``g``."""

    level: int

    @cached_property
    def points(self) -> DyadicPoints:
        return midpoints(self.level)

    @property
    def weight(self) -> float:
        return TWO_PI / 2**self.level

    def mask(self, s: GridSet) -> np.ndarray:
        if s.level > self.level:
            raise ValueError(f"region resolved at level {s.level} is finer than the grid level {self.level}")
        return s.refine(self.level).mask


def _odd_gt(x: int, lo: int, name: str) -> None:
    if x % 2 == 0 or x <= lo:
        raise ValueError(f"{name} must be an odd integer > {lo}, got {x}")


def _require_lacunary2(seq: IndexSequence, N: int) -> None:
    t = seq.terms[:N]
    if any(b < 2 * a for a, b in zip(t, t[1:])):
        raise ValueError("sequence must be lacunary with n_{j+1} >= 2 n_j")


def sum_rhs(N: int, f_l1: float, lam: float, base: str = "natural") -> float:
    """``N log^5(N+1) ||f||_1 lambda``."""
    return N * log_fn(base)(N + 1) ** 5 * f_l1 * lam


def _single_op(which: str, f: PCFunction, n: int):
    if which == "H":
        return lambda pts: hilbert_modified(f, n, pts)
    if which == "S":
        return lambda pts: partial_sum(f, n, pts)
    if which == "SV":
        return lambda pts: sv_difference(f, n, pts)
    raise ValueError(f"which must be 'H', 'S' or 'SV', got {which!r}")


# -- single-order integrals over gamma F_eps weighted by sigma_m 1_{T minus beta F_eps} --

_DILATED_IDS = {"H": HILBERT_ON_DILATED, "S": PARTIAL_ON_DILATED, "SV": SV_ON_DILATED}
_ORDER_CAP = {"H": 100, "S": 100, "SV": 50}


def dilated_weighted_integral(
    f: PCFunction,
    lam: float,
    gamma: int,
    beta: int,
    n: int,
    m: int,
    which: str = "H",
    grid_level: int = 10,
    cz: CZDecomposition | None = None,
) -> tuple[float, float | None]:
    """``max_eps int_{gamma F_eps} |X f|^2 |sigma_m 1_{T minus beta F_eps}|^2`` and the maximizing ``eps``.

    ``eps`` runs over ``2 pi / 2**s``, ``s = 1..g``; ``F_eps`` keeps the
    intervals longer than ``eps``.
    """
    _odd_gt(gamma, 5, "gamma")
    _odd_gt(beta, gamma, "beta")
    if n > _ORDER_CAP[which] * m:
        raise ValueError(f"need n <= {_ORDER_CAP[which]} m, got n={n}, m={m}")
    cz = cz_decompose(f, lam) if cz is None else cz
    grid = Grid(grid_level)
    top = grid.mask(dilated_union(cz.family, gamma, grid_level))
    if not top.any():
        return 0.0, None
    pts = grid.points.subset(top)
    vals = np.abs(_single_op(which, f, n)(pts)) ** 2
    best, arg = 0.0, None
    seen = set()
    for s in range(1, grid_level + 1):
        eps = TWO_PI / 2**s
        fam = filter_beta(cz, eps)
        if not len(fam) or fam.intervals in seen:
            continue
        seen.add(fam.intervals)
        region = grid.mask(dilated_union(fam, gamma, grid_level))[top]
        comp = ~dilated_union(fam, beta, grid_level)
        w = sigma_indicator(comp, m, pts.subset(region))
        lhs = float(np.sum(vals[region] * w * w) * grid.weight)
        if lhs > best or arg is None:
            best, arg = lhs, eps
    return best, arg


def check_dilated_weighted(
    f, lam, gamma, beta, n, m, which="H", grid_level=10, cz=None, corpus_item="", extra=None
) -> BoundRatioReport:
    lhs, eps = dilated_weighted_integral(f, lam, gamma, beta, n, m, which, grid_level, cz)
    params = {"lam": lam, "n": n, "m": m, "gamma": gamma, "beta": beta, "grid_level": grid_level, "eps": eps}
    params.update(extra or {})
    return BoundRatioReport(_DILATED_IDS[which], lhs, lp_norm(f, 1) * lam, corpus_item, params)


def check_lemma_gammaFjH2(f, lam, gamma, beta, n, m, grid_level=10, cz=None, corpus_item="", extra=None):
    """Hilbert transform on ``gamma F_eps`` weighted by the Fejer mean of the complement indicator."""
    return check_dilated_weighted(f, lam, gamma, beta, n, m, "H", grid_level, cz, corpus_item, extra)


def check_lemma_gammaFjS(f, lam, gamma, beta, l, m, grid_level=10, cz=None, corpus_item="", extra=None):
    """Partial sum ``S_l`` on ``gamma F_eps`` with the same weight."""
    return check_dilated_weighted(f, lam, gamma, beta, l, m, "S", grid_level, cz, corpus_item, extra)


def check_cor_gammaFjSV(f, lam, gamma, beta, n, m, grid_level=10, cz=None, corpus_item="", extra=None):
    """``S_n - V_n`` on ``gamma F_eps`` with the same weight (needs ``n <= 50 m``)."""
    return check_dilated_weighted(f, lam, gamma, beta, n, m, "SV", grid_level, cz, corpus_item, extra)


# -- sums over j of integrals on gamma F minus gamma F_{beta_j} ---------------------------

_GAP_IDS = {"H": HILBERT_ON_GAP, "S": PARTIAL_ON_GAP, "SV": SV_ON_GAP}


def gap_terms(
    f: PCFunction,
    lam: float,
    gamma: int,
    seq: IndexSequence,
    N: int,
    which: str = "H",
    grid_level: int = 10,
    cz: CZDecomposition | None = None,
    base: str = "natural",
) -> np.ndarray:
    """Per-``j`` integrals ``int_{gamma F minus gamma F_{beta_j}} |X_j|^2``, ``j = 1..N``.

    ``X_j`` is ``H_{n_j} g_j`` with the companion ``g_j = f e^{-i(n_j+1)x}``
    (so ``|g_j| = |f|``), ``S_{n_j} f`` or ``S_{n_j} f - V_{n_j} f``.
    """
    _odd_gt(gamma, 5, "gamma")
    _require_lacunary2(seq, N)
    cz = cz_decompose(f, lam) if cz is None else cz
    grid = Grid(grid_level)
    gF = dilated_union(cz.family, gamma, grid_level)
    out = np.zeros(N)
    for j in range(1, N + 1):
        n = seq.term(j)
        region = gF - dilated_union(filter_beta(cz, beta_param(seq, j, base)), gamma, grid_level)
        mask = grid.mask(region)
        if not mask.any():
            continue
        pts = grid.points.subset(mask)
        if which == "H":
            x = hilbert_modified(f, n, pts, modulation=-(n + 1))
        else:
            x = _single_op(which, f, n)(pts)
        out[j - 1] = np.sum(np.abs(x) ** 2) * grid.weight
    return out


def check_lemma_gammaF_minus(
    f, lam, gamma, seq, N, which="H", grid_level=10, cz=None, corpus_item="", base="natural", extra=None
) -> BoundRatioReport:
    lhs = float(gap_terms(f, lam, gamma, seq, N, which, grid_level, cz, base).sum())
    params = {"lam": lam, "N": N, "n": seq.term(N), "gamma": gamma, "grid_level": grid_level}
    params.update(extra or {})
    return BoundRatioReport(_GAP_IDS[which], lhs, sum_rhs(N, lp_norm(f, 1), lam, base), corpus_item, params)


@dataclass(frozen=True)
class DeltaAudit:
    """Disjointness of ``Delta_j = gamma F_{16/n_j} minus gamma F_{beta_j}`` at index gaps ``>= k_min``."""

    N: int
    k_min: int
    pairs_checked: int
    violations: int
    nonempty: int

    def to_dict(self) -> dict:
        return self.__dict__.copy()


def delta_sets(cz: CZDecomposition, gamma: int, seq: IndexSequence, N: int, level: int, base="natural"):
    out = []
    for j in range(1, N + 1):
        n = seq.term(j)
        a = dilated_union(filter_beta(cz, 16.0 / n), gamma, level)
        b = dilated_union(filter_beta(cz, beta_param(seq, j, base)), gamma, level)
        out.append((a - b).refine(level).mask)
    return out


def delta_audit(cz, gamma, seq, N, level=None, base="natural", strict=None) -> DeltaAudit:
    """Counts intersecting pairs ``(Delta_j, Delta_{j+k})``, ``k >= ceil(ln^2 N)``.

    With ``strict`` (default: lacunary ratio >= 2 and ``N >= 32``) any
    intersection raises, since then ``beta_{j+k} < 16/n_j`` forces disjointness.
    """
    level = max(cz.f.level, 1) if level is None else level
    sets = delta_sets(cz, gamma, seq, N, level, base)
    k_min = max(1, math.ceil(math.log(N) ** 2)) if N > 1 else 1
    checked = bad = 0
    for j in range(N):
        for jk in range(j + k_min, N):
            checked += 1
            if np.any(sets[j] & sets[jk]):
                bad += 1
    t = seq.terms[:N]
    if strict is None:
        strict = N >= 32 and all(b >= 2 * a for a, b in zip(t, t[1:]))
    if strict and bad:
        raise HardAssertionError(f"{bad} intersecting Delta pairs at index gap >= {k_min}")
    return DeltaAudit(N, k_min, checked, bad, sum(int(s.any()) for s in sets))


# -- weighted sums of S_n - V_n --------------------------------------------------------------

def sv_weighted_terms(
    f: PCFunction,
    lam: float,
    beta: int,
    seq: IndexSequence,
    N: int,
    region: str = "T",
    gamma: int = 7,
    grid_level: int = 10,
    cz: CZDecomposition | None = None,
    base: str = "natural",
) -> np.ndarray:
    """Per-``j`` integrals of ``|S_{n_j} f - V_{n_j} f|^2 |sigma_{m_j} 1_{T minus beta F_{beta_j}}|^2``.

    Over all of T (``region="T"``) or over ``gamma F`` (``region="gammaF"``);
    ``m_j = floor(n_j / 10)``.
    """
    _odd_gt(beta, 7, "beta")
    if region == "gammaF":
        _odd_gt(gamma, 5, "gamma")
        _odd_gt(beta, gamma, "beta")
    elif region != "T":
        raise ValueError("region must be 'T' or 'gammaF'")
    _require_lacunary2(seq, N)
    cz = cz_decompose(f, lam) if cz is None else cz
    grid = Grid(grid_level)
    if region == "T":
        mask = np.ones(2**grid_level, dtype=bool)
    else:
        mask = grid.mask(dilated_union(cz.family, gamma, grid_level))
    out = np.zeros(N)
    if not mask.any():
        return out
    pts = grid.points.subset(mask)
    for j in range(1, N + 1):
        n = seq.term(j)
        m = n // 10
        if m < 1:
            raise ValueError(f"m_j = floor(n_j/10) must be >= 1 (n_{j} = {n})")
        comp = ~dilated_union(filter_beta(cz, beta_param(seq, j, base)), beta, grid_level)
        w = sigma_indicator(comp, m, pts)
        x = sv_difference(f, n, pts)
        out[j - 1] = np.sum(np.abs(x) ** 2 * w * w) * grid.weight
    return out


def check_cor_SV_gammaF(
    f, lam, gamma, beta, seq, N, region="T", grid_level=10, cz=None, corpus_item="", base="natural", extra=None
) -> BoundRatioReport:
    lhs = float(sv_weighted_terms(f, lam, beta, seq, N, region, gamma, grid_level, cz, base).sum())
    lemma_id = SV_WEIGHTED_ON_T if region == "T" else SV_WEIGHTED_ON_F
    params = {"lam": lam, "N": N, "n": seq.term(N), "gamma": gamma, "beta": beta, "grid_level": grid_level}
    params.update(extra or {})
    return BoundRatioReport(lemma_id, lhs, sum_rhs(N, lp_norm(f, 1), lam, base), corpus_item, params)


# -- integrals on T minus gamma F --------------------------------------------------------------

_OFF_IDS = {"H": HILBERT_OFF_F, "S": PARTIAL_OFF_F, "SV": SV_OFF_F}


def check_lemma_T_minus_gammaF(
    f, lam, gamma, which="H", n=8, grid_level=10, cz=None, corpus_item="", extra=None
) -> BoundRatioReport:
    """``int_{T minus gamma F} |X_n f|^2`` against ``||f||_1 lambda``.

    For ``which="S"`` the vanishing of ``E_n f^0`` off ``gamma F`` is asserted too.
    """
    _odd_gt(gamma, 5, "gamma")
    cz = cz_decompose(f, lam) if cz is None else cz
    grid = Grid(grid_level)
    mask = ~grid.mask(dilated_union(cz.family, gamma, grid_level))
    lhs = 0.0
    params = {"lam": lam, "n": n, "gamma": gamma, "grid_level": grid_level}
    if mask.any():
        pts = grid.points.subset(mask)
        lhs = float(np.sum(np.abs(_single_op(which, f, n)(pts)) ** 2) * grid.weight)
        if which == "S":
            params["e_max"] = check_e_vanishing(f, lam, gamma, [n], grid_level, cz)
    params.update(extra or {})
    return BoundRatioReport(_OFF_IDS[which], lhs, lp_norm(f, 1) * lam, corpus_item, params)


def bad_part_sum(cz: CZDecomposition) -> PCFunction:
    """``f^0 = sum_i f_i = f - f_0``."""
    return cz.f - cz.good


def e_vanishing_max(f, lam, gamma, ls, grid_level=10, cz=None) -> float:
    """``max |E_l f^0(y)|`` over grid points off ``gamma F`` and ``l`` in ``ls``."""
    cz = cz_decompose(f, lam) if cz is None else cz
    grid = Grid(grid_level)
    mask = ~grid.mask(dilated_union(cz.family, gamma, grid_level))
    if not mask.any() or not len(cz.family):
        return 0.0
    pts = grid.points.subset(mask)
    f0 = bad_part_sum(cz)
    return max(float(np.max(np.abs(e_operator(f0, int(l), int(l), pts)))) for l in ls)


def check_e_vanishing(f, lam, gamma, ls, grid_level=10, cz=None, tol: float = E_TOL) -> float:
    v = e_vanishing_max(f, lam, gamma, ls, grid_level, cz)
    if not v <= tol:
        raise HardAssertionError(f"E_l f^0 = {v:.3e} off gamma F exceeds {tol:.0e}")
    return v
