"""Function operators on T evaluated in closed form.

Band-limiting operators (``S_n``, ``sigma_n``, ``V_n`` and their composites)
go through the coefficient-side engine in :mod:`cesarolab.spectral`.  The
local operators exclude the tripled dyadic interval ``3 I_e(y)`` around the
evaluation point, ``e = floor(log2 n)``; they integrate closed-form
antiderivatives of the kernel over the pieces of each cell that lie in the
complementary arc.  All arc geometry is done in integer units of
``2 pi / 2**L`` so cell edges and arc edges coincide exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .circle import TWO_PI, GridSet, PCFunction, TrigPoly
from .dyadic import CZDecomposition, cz_decompose, dilated_union, filter_beta
from .sequences import IndexSequence, block_coords, log_fn
from .spectral import (
    Band,
    DyadicPoints,
    Segment,
    as_points,
    band_fejer,
    band_partial,
    band_sv,
    band_trigpoly,
    band_vp,
    eval_band,
    log_series_at,
    midpoints,
    mulmod_pow2,
)

# number of (point, piece) pairs processed at once by the local operators
CHUNK = 1 << 21


def dyadic_order(n: int) -> int:
    """``|n| = floor(log2 n)``."""
    if n < 1:
        raise ValueError("order must be >= 1")
    return int(n).bit_length() - 1


@dataclass(frozen=True)
class OperatorRequest:
    f: PCFunction
    order: int
    eval_points: DyadicPoints | None = None
    grid_level: int = 10

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be >= 1")

    @property
    def points(self) -> DyadicPoints:
        return self.eval_points if self.eval_points is not None else midpoints(self.grid_level)


@dataclass(frozen=True)
class CompositeSpec:
    seq: IndexSequence
    N: int
    beta: int = 9
    delta: float = 0.3
    log_base: str = "natural"

    def __post_init__(self):
        if self.beta % 2 == 0 or self.beta <= 7:
            raise ValueError(f"beta must be an odd integer > 7, got {self.beta}")
        if not 0 < self.delta < 0.5:
            raise ValueError(f"delta must lie in (0, 1/2), got {self.delta}")
        if not 1 <= self.N <= len(self.seq):
            raise ValueError(f"N must lie in [1, {len(self.seq)}], got {self.N}")


def _scalar_out(y, out: np.ndarray):
    return complex(out[0]) if np.ndim(y) == 0 and not isinstance(y, DyadicPoints) else out


def _band_op(band: Band, f, y):
    return _scalar_out(y, eval_band(f, band, y))


# -- coefficient-side operators -----------------------------------------------

def partial_sum(f: PCFunction | TrigPoly, n: int, y):
    """``S_n f(y) = sum_{|k| <= n} f^(k) e^{iky}``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return _band_op(band_partial(n), f, y)


def fejer_mean(f: PCFunction | TrigPoly, n: int, y):
    """``sigma_n f(y) = sum_{|k| <= n} (1 - |k|/(n+1)) f^(k) e^{iky}``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return _band_op(band_fejer(n), f, y)


def vp_mean(f: PCFunction | TrigPoly, n: int, y):
    """de la Vallee-Poussin mean ``V_n f = (1/n) sum_{j=n}^{2n-1} S_j f``."""
    return _band_op(band_vp(n), f, y)


def sv_difference(f: PCFunction | TrigPoly, n: int, y):
    """``S_n f - V_n f``; its spectrum lies in ``n < |k| <= 2n-1``."""
    return _band_op(band_sv(n), f, y)


def t_band(seq: IndexSequence, N: int) -> Band:
    """Weights of ``T_N = (1/N) sum_{i<=N} (S_{n_i} - V_{n_i})``."""
    segs = []
    for n in seq.terms[:N]:
        for s in band_sv(int(n)):
            segs.append(Segment(s.lo, s.hi, s.a / N, s.b / N))
    return tuple(segs)


def t_operator(f: PCFunction | TrigPoly, seq: IndexSequence, N: int, y):
    if not 1 <= N <= len(seq):
        raise ValueError(f"N must lie in [1, {len(seq)}]")
    return _band_op(t_band(seq, N), f, y)


# -- local geometry -------------------------------------------------------------

def _resolution(pts: DyadicPoints, m: int, e: int) -> int:
    return max(pts.level, m, e)


def _arc_pieces(m: int, R: np.ndarray, L: int, e: int):
    """Pieces of the level-``m`` cells inside the arc ``T minus 3 I_e(y)``.

    For points with level-``L`` numerators ``R`` returns, per (point, cell,
    copy), the offsets ``R - a`` and ``R - b`` of the piece ``[a, b)`` in
    units of ``2 pi / 2**L``.  Offsets stay in ``(-2**L, 0)``, following the
    arc continuously from just right of ``3 I_e(y)`` round to its left end.
    Returns ``None`` when ``3 I_e(y)`` covers T.
    """
    if e <= 1:
        return None
    full = 1 << L
    unit = 1 << (L - e)
    s = 1 << (L - m)
    arc_len = full - 3 * unit
    ky = R >> (L - e)
    d = (ky + 2) * unit  # arc start, unreduced
    cell_start = np.arange(1 << m, dtype=np.int64) * s
    u = np.mod(cell_start[None, :] - d[:, None], full)
    lo = np.stack([u, u - full])
    hi = lo + s
    lo = np.clip(lo, 0, arc_len)
    hi = np.clip(hi, 0, arc_len)
    valid = hi > lo
    off_a = R[None, :, None] - (d[None, :, None] + lo)
    off_b = R[None, :, None] - (d[None, :, None] + hi)
    return off_a, off_b, valid


def _chunks(pts: DyadicPoints, m: int):
    step = max(1, CHUNK // (2 << m))
    for i in range(0, len(pts), step):
        yield slice(i, i + step)


def _local_sum(f: PCFunction, n_excl: int, y, kernel) -> np.ndarray:
    """``sum_cells v_c * [K(off_a) - K(off_b)]`` over the arc pieces.

    ``kernel(off, L, R)`` returns the antiderivative term at integer offsets.
    """
    pts = as_points(y)
    if not isinstance(pts, DyadicPoints):
        raise ValueError("local operators need dyadic evaluation points (e.g. cell midpoints)")
    e = dyadic_order(n_excl)
    m = f.level
    L = _resolution(pts, m, e)
    out = np.zeros(len(pts), dtype=complex)
    if e <= 1:
        return out
    for sl in _chunks(pts, m):
        R = pts.num[sl] << (L - pts.level)
        off_a, off_b, valid = _arc_pieces(m, R, L, e)
        Ra = np.broadcast_to(R[None, :, None], valid.shape)[valid]
        term = np.zeros(valid.shape, dtype=complex)
        term[valid] = kernel(off_a[valid], L, Ra) - kernel(off_b[valid], L, Ra)
        out[sl] = term.sum(axis=0) @ f.values
    return out


def _log_sin(off: np.ndarray, L: int) -> np.ndarray:
    # 2 ln|sin(z/2)| with z = 2 pi off / 2**L
    return 2.0 * np.log(np.abs(np.sin(np.pi * (off / 2.0**L))))


def _coarse_level(pts, f: PCFunction) -> int:
    """Level of every offset between a point and a cell edge."""
    if not isinstance(pts, DyadicPoints):
        raise ValueError("local operators need dyadic evaluation points (e.g. cell midpoints)")
    return max(pts.level, f.level)


def _point_phase(pts: DyadicPoints, k: int) -> np.ndarray:
    """``e^{iky}`` at dyadic points, phase reduced in integers."""
    full = 1 << pts.level
    r = np.mod((k % full) * pts.num, full)
    return np.exp(2j * np.pi * (r / full)) * (-1.0) ** (k % 2)


def hilbert_modified(f: PCFunction, n: int, y, modulation: int = 0):
    """``H_n g(y) = int_{T minus 3 I_|n|(y)} g(x) cot((y-x)/2) dx`` with ``g = f e^{i kappa x}``.

    Cell ``[a, b)`` contributes ``v [Phi(y-a) - Phi(y-b)]`` where ``Phi`` is an
    antiderivative of ``e^{-i kappa z} cot(z/2)``, times ``e^{i kappa y}``.
    For ``kappa = 0`` it is ``2 ln|sin(z/2)|``; for ``kappa > 0`` it is
    ``2 ln|sin(z/2)| - i z + e^{-i kappa z}/kappa + 2 sum_{j<kappa} e^{-ijz}/j``.
    The sum is evaluated by :func:`log_series_at`.  Negative ``kappa`` uses
    ``H(f e^{-i k x}) = conj(H(conj(f) e^{i k x}))``.
    """
    kappa = int(modulation)
    if kappa == 0:
        return _scalar_out(y, _local_sum(f, n, y, lambda off, L, R: _log_sin(off, L)))
    if kappa < 0:
        return _scalar_out(y, np.conj(np.asarray(hilbert_modified(f.conj(), n, as_points(y), -kappa))))

    pts = as_points(y)
    coarse = _coarse_level(pts, f)

    def phi(off, L, R):
        full = 1 << L
        ez = np.exp(-2j * np.pi * (mulmod_pow2(kappa, off, L) / full))
        lam = log_series_at(kappa - 1, off, L, coarse)
        return _log_sin(off, L) - 1j * TWO_PI * (off / full) + ez / kappa + 2.0 * np.conj(lam)

    out = _local_sum(f, n, pts, phi) * _point_phase(pts, kappa)
    return _scalar_out(y, out)


def modified_partial_sum(f: PCFunction, l: int, n_exclusion: int, y):
    """``(1/pi) int_{T minus 3 I_|n_exclusion|(y)} f(x) D_l(y-x) dx``.

    Uses the antiderivative ``A_l(z) = z/2 + sum_{k<=l} sin(kz)/k`` of ``D_l``;
    pass ``n_exclusion = l`` for the exclusion at the operator's own order.
    """
    if l < 1:
        raise ValueError("l must be >= 1")

    pts = as_points(y)
    coarse = _coarse_level(pts, f)

    def prim(off, L, R):
        return np.pi * (off / 2.0**L) + log_series_at(int(l), off, L, coarse).imag

    return _scalar_out(y, _local_sum(f, n_exclusion, pts, prim) / np.pi)


def _integral_upto(f: PCFunction, x: np.ndarray, L: int) -> np.ndarray:
    """``int_{-pi}^{-pi + 2 pi x / 2**L} f`` for integer ``x >= 0`` (wrapping past T)."""
    full = 1 << L
    s = 1 << (L - f.level)
    prefix = np.concatenate([[0.0], np.cumsum(f.values)]) * f.width
    laps, r = np.divmod(x, full)
    c, rem = np.divmod(r, s)
    cv = f.values[np.minimum(c, f.n_cells - 1)]
    return laps * prefix[-1] + prefix[c] + np.where(c < f.n_cells, cv * (rem * (TWO_PI / full)), 0.0)


def local_integral(f: PCFunction, n_exclusion: int, y) -> np.ndarray:
    """``int_{3 I_|n_exclusion|(y)} f`` exactly (all of T when the tripled interval covers it)."""
    pts = as_points(y)
    if not isinstance(pts, DyadicPoints):
        raise ValueError("local operators need dyadic evaluation points (e.g. cell midpoints)")
    e = dyadic_order(n_exclusion)
    if e <= 1:
        return np.full(len(pts), f.integral(), dtype=complex)
    L = _resolution(pts, f.level, e)
    R = pts.num << (L - pts.level)
    unit = 1 << (L - e)
    start = np.mod(((R >> (L - e)) - 1) * unit, 1 << L)
    return (_integral_upto(f, start + 3 * unit, L) - _integral_upto(f, start, L)).astype(complex)


def e_operator(f: PCFunction, l: int, n_exclusion: int, y):
    """``E_l f(y) = l int_{3 I_|n_exclusion|(y)} f``."""
    if l < 1:
        raise ValueError("l must be >= 1")
    return _scalar_out(y, l * local_integral(f, n_exclusion, y))


# -- composite averages ---------------------------------------------------------

def complement_indicator(fam, beta_mult: int, level: int) -> PCFunction:
    """Indicator of ``T minus beta F`` on the level-``level`` grid."""
    s = dilated_union(fam, beta_mult, level)
    return (~s).indicator()


@dataclass(frozen=True)
class Addend:
    """One term ``(S_n f - V_n f) * sigma_m 1_E`` of a composite average."""

    i: int
    n: int
    m: int
    beta_filter: float
    complement: GridSet


def block_betas(spec: CompositeSpec) -> list[float]:
    """``beta'_i = 20 (j+1) log^2(j+1) / n_i`` with ``j`` the block coordinate of ``i``."""
    bc = block_coords(spec.N, spec.delta)
    log = log_fn(spec.log_base)
    out = []
    for i in range(1, spec.N + 1):
        j, _ = bc.pairs[i]
        out.append(20 * (j + 1) * log(j + 1) ** 2 / spec.seq.term(i))
    return out


def composite_addends(
    cz: CZDecomposition, seq: IndexSequence, N: int, beta_mult: int, betas: list[float], level: int
) -> list[Addend]:
    """Addends with ``m_i = floor(n_i / 10)`` and ``E = T minus beta F_{beta_i}``."""
    out = []
    for i in range(1, N + 1):
        n = seq.term(i)
        m = n // 10
        if m < 1:
            raise ValueError(f"m_i = floor(n_i/10) must be >= 1; n_{i} = {n}")
        fam = filter_beta(cz, betas[i - 1])
        comp = ~dilated_union(fam, beta_mult, max(level, cz.f.level))
        out.append(Addend(i, n, m, betas[i - 1], comp))
    return out


@lru_cache(maxsize=256)
def _sigma_indicator_cached(level: int, mask_bytes: bytes, m: int, pts_level: int, num_bytes: bytes):
    mask = np.frombuffer(mask_bytes, dtype=bool)
    ind = PCFunction(level, mask.astype(float))
    pts = DyadicPoints(pts_level, np.frombuffer(num_bytes, dtype=np.int64))
    out = eval_band(ind, band_fejer(m), pts).real
    out.setflags(write=False)
    return out


def sigma_indicator(s: GridSet, m: int, pts: DyadicPoints) -> np.ndarray:
    """``sigma_m 1_s`` at ``pts`` (real, memoized on the set and order)."""
    lv = max(s.level, 1)
    mask = s.refine(lv).mask
    return _sigma_indicator_cached(lv, mask.tobytes(), int(m), pts.level, pts.num.astype(np.int64).tobytes())


def t_beta_operator(
    f: PCFunction,
    spec: CompositeSpec,
    lam: float,
    y,
    cz: CZDecomposition | None = None,
):
    """``T_{N,beta} f = (1/N) sum_i (S_{n_i} f - V_{n_i} f) sigma_{m_i} 1_{T minus beta F_{beta'_i}}``."""
    pts = as_points(y)
    if not isinstance(pts, DyadicPoints):
        raise ValueError("composite operators need dyadic evaluation points")
    cz = cz_decompose(f, lam) if cz is None else cz
    adds = composite_addends(cz, spec.seq, spec.N, spec.beta, block_betas(spec), f.level)
    out = np.zeros(len(pts), dtype=complex)
    for a in adds:
        out += eval_band(f, band_sv(a.n), pts) * sigma_indicator(a.complement, a.m, pts)
    return _scalar_out(y, out / spec.N)


def addend_trigpoly(f: PCFunction | TrigPoly, n: int, m: int, complement: GridSet) -> TrigPoly:
    """Coefficients of ``(S_n f - V_n f) * sigma_m 1_E`` as an exact product of polynomials."""
    from scipy.signal import fftconvolve

    a = band_trigpoly(f, band_sv(n))
    b = band_trigpoly(complement.indicator(), band_fejer(m))
    c = fftconvolve(a.coeffs, b.coeffs)
    return TrigPoly(a.degree + b.degree, c)
