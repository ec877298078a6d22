"""Orthogonality of the weighted ``S - V`` addends and the replacement estimate."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..circle import TWO_PI, GridSet, PCFunction, lp_norm
from ..dyadic import CZDecomposition, cz_decompose, dilated_union, filter_beta
from ..operators import CompositeSpec, addend_trigpoly, sigma_indicator, sv_difference
from ..sequences import IndexSequence, beta_param, block_coords, log_fn
from .regions import Grid, sum_rhs
from .reports import BoundRatioReport, HardAssertionError, WeakTypeCurve

EQUALITY_TOL = 1e-8
# coefficients outside the exact window must be rounding noise
NOISE_TOL = 1e-9

ORTHOGONALITY_BOUND = "orthogonal_sum_of_weighted_sv"


@dataclass(frozen=True)
class AddendWindow:
    index: int
    n: int
    m: int
    lo: int
    hi: int

    @property
    def inside_loose_window(self) -> bool:
        """``[lo, hi]`` inside ``[ceil(0.9 n), floor(2.1 n)]`` in integer arithmetic."""
        return 10 * self.lo >= 9 * self.n and 10 * self.hi <= 21 * self.n


def exact_window(n: int, m: int) -> tuple[int, int]:
    """Positive frequencies of ``(S_n f - V_n f) sigma_m g``: ``[n+1-m, 2n-1+m]``."""
    return n + 1 - m, 2 * n - 1 + m


def _require_q(seq: IndexSequence, N: int) -> None:
    if seq.kind == "lacunary" and seq.params.get("q", 0) <= 2.5:
        raise ValueError(f"orthogonality needs lacunary ratio q > 2.5, got q = {seq.params.get('q')}")
    t = seq.terms[:N]
    if any(2 * b <= 5 * a for a, b in zip(t, t[1:])):
        raise ValueError("orthogonality needs n_{j+1} > 2.5 n_j")


def flat_complements(cz: CZDecomposition, seq: IndexSequence, N: int, beta: int, base: str) -> list[GridSet]:
    """``T minus beta F_{beta_j}`` with the per-index ``beta_j``."""
    L = max(cz.f.level, 1)
    return [~dilated_union(filter_beta(cz, beta_param(seq, j, base)), beta, L) for j in range(1, N + 1)]


def block_complements(cz: CZDecomposition, spec: CompositeSpec) -> list[GridSet]:
    """``T minus beta F_{beta'_i}`` with ``beta'_i`` from the block coordinates of ``i``."""
    L = max(cz.f.level, 1)
    bc = block_coords(spec.N, spec.delta)
    log = log_fn(spec.log_base)
    out = []
    for i in range(1, spec.N + 1):
        j, _ = bc.pairs[i]
        b = 20 * (j + 1) * log(j + 1) ** 2 / spec.seq.term(i)
        out.append(~dilated_union(filter_beta(cz, b), spec.beta, L))
    return out


@dataclass
class OrthogonalityResult:
    passed: bool
    defect: float
    norm_of_sum: float
    sum_of_norms: float
    disjoint: bool
    windows_ok: bool
    max_noise: float
    windows: list = field(default_factory=list)
    per_addend_norms: list = field(default_factory=list)

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["windows"] = [w.__dict__ for w in self.windows]
        return d


def addend_spectra(f, seq: IndexSequence, comps: list[GridSet]):
    """Coefficients and exact windows of each addend ``(S_{n_j} - V_{n_j}) f * sigma_{m_j} 1_{E_j}``."""
    out = []
    for j, comp in enumerate(comps, 1):
        n = seq.term(j)
        m = n // 10
        if m < 1:
            raise ValueError(f"m_j = floor(n_j/10) must be >= 1 (n_{j} = {n})")
        p = addend_trigpoly(f, n, m, comp)
        lo, hi = exact_window(n, m)
        out.append((AddendWindow(j, n, m, lo, hi), p))
    return out


def _window_noise(win: AddendWindow, p) -> float:
    ks = np.abs(p.ks)
    outside = (ks < win.lo) | (ks > win.hi)
    scale = float(np.max(np.abs(p.coeffs), initial=0.0))
    if scale == 0 or not outside.any():
        return 0.0
    return float(np.max(np.abs(p.coeffs[outside]))) / scale


def orthogonality_from_spectra(spectra) -> OrthogonalityResult:
    wins = [w for w, _ in spectra]
    disjoint = all(a.hi < b.lo or b.hi < a.lo for i, a in enumerate(wins) for b in wins[i + 1:])
    disjoint = disjoint and all(w.lo > 0 for w in wins)
    windows_ok = all(w.inside_loose_window for w in wins)
    noise = max((_window_noise(w, p) for w, p in spectra), default=0.0)
    D = max((p.degree for _, p in spectra), default=0)
    total = np.zeros(2 * D + 1, dtype=complex)
    norms = []
    for _, p in spectra:
        total[D - p.degree : D + p.degree + 1] += p.coeffs
        norms.append(TWO_PI * float(np.sum(np.abs(p.coeffs) ** 2)))
    lhs = TWO_PI * float(np.sum(np.abs(total) ** 2))
    rhs = float(sum(norms))
    defect = abs(lhs - rhs) / rhs if rhs > 0 else abs(lhs)
    passed = disjoint and windows_ok and defect <= EQUALITY_TOL and noise <= NOISE_TOL
    return OrthogonalityResult(passed, defect, lhs, rhs, disjoint, windows_ok, noise, wins, norms)


def check_orthogonality_equality(
    f: PCFunction, seq: IndexSequence, spec: CompositeSpec, lam: float, cz: CZDecomposition | None = None
) -> OrthogonalityResult:
    """Squared norm of the sum equals the sum of squared norms; supports pairwise disjoint.

    Raises :class:`HardAssertionError` when any part fails.
    """
    _require_q(seq, spec.N)
    cz = cz_decompose(f, lam) if cz is None else cz
    res = orthogonality_from_spectra(addend_spectra(f, seq, flat_complements(cz, seq, spec.N, spec.beta, spec.log_base)))
    if not res.passed:
        raise HardAssertionError(
            f"orthogonality failed: defect={res.defect:.2e}, disjoint={res.disjoint}, "
            f"windows_ok={res.windows_ok}, noise={res.max_noise:.2e}"
        )
    return res


def check_spectral_windows(
    f: PCFunction, spec: CompositeSpec, lam: float, cz: CZDecomposition | None = None
) -> OrthogonalityResult:
    """Every addend of ``T_{N,beta}`` lives in ``[ceil(0.9 n_i), floor(2.1 n_i)]`` and its mirror."""
    cz = cz_decompose(f, lam) if cz is None else cz
    res = orthogonality_from_spectra(addend_spectra(f, spec.seq, block_complements(cz, spec)))
    if not (res.windows_ok and res.max_noise <= NOISE_TOL):
        raise HardAssertionError(f"addend outside its spectral window (noise={res.max_noise:.2e})")
    return res


def check_orthogonality_bound(
    corpus, seq: IndexSequence, spec: CompositeSpec, lam_multiples, N_sweep=None
) -> list[BoundRatioReport]:
    """``sum_j ||addend_j||_2^2 / (N log^5(N+1) ||f||_1 lambda)`` for each item, lambda and N."""
    N_sweep = [spec.N] if N_sweep is None else [N for N in N_sweep if N <= spec.N]
    out = []
    for item in corpus:
        f = item.f
        l1 = lp_norm(f, 1)
        for mult in lam_multiples:
            lam = mult * l1 / TWO_PI
            if l1 == 0:
                continue
            cz = cz_decompose(f, lam)
            comps = flat_complements(cz, seq, spec.N, spec.beta, spec.log_base)
            norms = np.cumsum([TWO_PI * np.sum(np.abs(p.coeffs) ** 2) for _, p in addend_spectra(f, seq, comps)])
            for N in N_sweep:
                out.append(BoundRatioReport(
                    ORTHOGONALITY_BOUND, float(norms[N - 1]), sum_rhs(N, l1, lam, spec.log_base), item.name,
                    {"lam": lam, "lam_mult": mult, "N": N, "n": seq.term(N), "beta": spec.beta},
                ))
    return out


# -- replacement ---------------------------------------------------------------------

def replacement_sup(
    f: PCFunction,
    seq: IndexSequence,
    N_max: int,
    beta: int,
    delta: float,
    lam: float,
    grid_level: int = 10,
    cz: CZDecomposition | None = None,
    base: str = "natural",
) -> np.ndarray:
    """``max_{N <= N_max} |T_{N,beta} f - T_N f|`` at the grid midpoints.

    The block weights ``beta'_i`` depend on ``N`` only through ``K0``, so the
    partial sums are accumulated once per distinct ``K0``.
    """
    CompositeSpec(seq, N_max, beta, delta, base)
    cz = cz_decompose(f, lam) if cz is None else cz
    grid = Grid(grid_level)
    pts = grid.points
    log = log_fn(base)
    sv = [sv_difference(f, seq.term(i), pts) for i in range(1, N_max + 1)]
    groups: dict[int, list[int]] = {}
    for N in range(1, N_max + 1):
        groups.setdefault(block_coords(N, delta).K0, []).append(N)
    L = max(f.level, 1)
    D = np.zeros(len(pts))
    for K0, Ns in groups.items():
        acc = np.zeros(len(pts), dtype=complex)
        for i in range(1, max(Ns) + 1):
            n = seq.term(i)
            m = n // 10
            if m < 1:
                raise ValueError(f"m_i = floor(n_i/10) must be >= 1 (n_{i} = {n})")
            j = i // K0 + 1
            bp = 20 * (j + 1) * log(j + 1) ** 2 / n
            comp = ~dilated_union(filter_beta(cz, bp), beta, L)
            acc += sv[i - 1] * (sigma_indicator(comp, m, pts) - 1.0)
            if i in Ns:
                D = np.maximum(D, np.abs(acc) / i)
    return D


def replacement_bound(f_l1: float, lam: float, delta: float) -> float:
    """``sqrt(||f||_1 / lambda) / (1 - 2 delta)``."""
    return math.sqrt(f_l1 / lam) / (1 - 2 * delta)


def check_replacement(
    f: PCFunction,
    seq: IndexSequence,
    spec: CompositeSpec,
    lambda_sweep,
    N_max: int,
    grid_level: int = 10,
    corpus_item: str = "",
) -> WeakTypeCurve:
    """Measure of ``{sup_N |T_{N,beta} f - T_N f| > lambda/2}`` over a sweep of absolute ``lambda``."""
    if N_max > len(seq):
        raise ValueError(f"N_max = {N_max} exceeds the sequence length {len(seq)}")
    l1 = lp_norm(f, 1)
    grid = Grid(grid_level)
    lams = np.sort(np.asarray(lambda_sweep, dtype=float))
    meas, bounds = [], []
    for lam in lams:
        D = replacement_sup(f, seq, N_max, spec.beta, spec.delta, lam, grid_level, base=spec.log_base)
        meas.append(np.count_nonzero(D > lam / 2) * grid.weight)
        bounds.append(replacement_bound(l1, lam, spec.delta))
    return WeakTypeCurve(lams, meas, bounds, corpus_item,
                         {"N_max": N_max, "beta": spec.beta, "delta": spec.delta, "grid_level": grid_level})
