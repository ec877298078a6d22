"""Exact evaluation of weighted Fourier sums at dyadic points of T.

Every band-limiting operator in the package has the form

    y  ->  sum_k  w(|k|) * f^(k) * e^{iky}

with a piecewise-linear weight ``w``.  For a piecewise-constant ``f`` at
level ``m`` the coefficient is ``f^(k) = psi(k mod 2**m) / k`` (see
``circle.fourier_coefficients``), and at a dyadic point
``y = -pi + 2 pi r / 2**L`` the phase ``e^{iky}`` is ``2**L``-periodic in ``k``
up to a sign that cancels the sign in ``psi``.  So the whole sum folds onto
``P = 2**max(m, L)`` residue classes, and per class only two numbers are
needed: how many ``k`` in the window fall in the class and the sum of
``1/k`` over them.  The latter is a digamma difference.  The folded array is
then brought to the points by one inverse DFT of size ``2**L``.

The result is exact up to floating-point rounding for any ``n``; cost does
not depend on ``n``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import psi as digamma
from scipy.special import sici

from .circle import MAX_SNAP_LEVEL, TWO_PI, PCFunction, TrigPoly, fourier_coefficients, to_turns

# windows shorter than this are summed term by term
DIRECT_WINDOW = 1 << 22
# residue classes with at most this many terms are summed term by term
DIRECT_CLASS = 16
# largest folding resolution (2**MAX_FOLD_LEVEL residue classes)
MAX_FOLD_LEVEL = 24
# explicit-coefficient fallback limit for points off any small dyadic grid
EXPLICIT_LIMIT = 1 << 21


@dataclass(frozen=True, eq=False)
class DyadicPoints:
    """Points ``y = -pi + 2 pi * num / 2**level`` held as exact integers."""

    level: int
    num: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.num, dtype=np.int64).reshape(-1)
        if r.size and (r.min() < 0 or r.max() >= 2**self.level):
            raise ValueError("numerators must lie in [0, 2**level)")
        r = r.copy()
        r.setflags(write=False)
        object.__setattr__(self, "num", r)

    @property
    def y(self) -> np.ndarray:
        return -np.pi + TWO_PI * self.num / 2.0**self.level

    @property
    def turns(self) -> np.ndarray:
        return self.num / 2.0**self.level

    def __len__(self) -> int:
        return self.num.size

    def subset(self, mask_or_idx) -> DyadicPoints:
        return DyadicPoints(self.level, self.num[mask_or_idx])

    def at_level(self, level: int) -> np.ndarray:
        """Numerators rescaled to a finer resolution."""
        if level < self.level:
            raise ValueError("cannot coarsen dyadic points")
        return self.num << (level - self.level)


def midpoints(g: int) -> DyadicPoints:
    """Cell midpoints of the level-``g`` evaluation grid."""
    return DyadicPoints(g + 1, 2 * np.arange(2**g, dtype=np.int64) + 1)


def grid_points(L: int) -> DyadicPoints:
    """All ``2**L`` left endpoints of the level-``L`` grid."""
    return DyadicPoints(L, np.arange(2**L, dtype=np.int64))


def as_points(y) -> DyadicPoints | np.ndarray:
    """Snap real points to the coarsest dyadic resolution that represents them.

    Returns the raw float array when no resolution up to ``MAX_SNAP_LEVEL``
    fits (then only explicit summation is available).
    """
    if isinstance(y, DyadicPoints):
        return y
    t = np.atleast_1d(to_turns(y))
    for L in range(1, MAX_SNAP_LEVEL + 1):
        s = t * 2.0**L
        r = np.rint(s)
        if np.all(np.abs(s - r) <= 1e-9):
            return DyadicPoints(L, np.mod(r.astype(np.int64), 2**L))
    return np.atleast_1d(np.asarray(y, dtype=float))


# -- weight bands ---------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    """Weight ``a + b*|k|`` on ``lo <= |k| <= hi``."""

    lo: int
    hi: int
    a: float
    b: float = 0.0


Band = tuple[Segment, ...]


def band_partial(n: int) -> Band:
    return (Segment(0, n, 1.0),)


def band_fejer(m: int) -> Band:
    return (Segment(0, m, 1.0, -1.0 / (m + 1)),)


def band_vp(n: int) -> Band:
    if n < 1:
        raise ValueError("de la Vallee-Poussin mean needs n >= 1")
    return (Segment(0, n, 1.0), Segment(n + 1, 2 * n - 1, 2.0, -1.0 / n))


def band_sv(n: int) -> Band:
    """Weights of ``S_n - V_n``: ``(|k| - 2n)/n`` on ``n < |k| <= 2n-1``."""
    if n < 1:
        raise ValueError("S_n - V_n needs n >= 1")
    return (Segment(n + 1, 2 * n - 1, -2.0, 1.0 / n),)


def band_weights(band: Band, ks) -> np.ndarray:
    ak = np.abs(np.asarray(ks, dtype=np.int64))
    w = np.zeros(ak.shape)
    for s in band:
        sel = (ak >= s.lo) & (ak <= s.hi)
        w[sel] += s.a + s.b * ak[sel]
    return w


def band_degree(band: Band) -> int:
    return max((s.hi for s in band if s.hi >= s.lo), default=0)


# -- harmonic sums by residue ---------------------------------------------

def harmonic_by_residue(P: int, lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
    """Counts and ``sum 1/k`` of the integers ``k in [lo, hi]`` by ``k mod P``.

    ``lo >= 1``.  Long windows use ``sum_{q<c} 1/(k0 + qP) = (psi(k0/P + c) - psi(k0/P)) / P``.
    """
    count = np.zeros(P)
    harm = np.zeros(P)
    lo = max(int(lo), 1)
    hi = int(hi)
    if hi < lo:
        return count, harm
    if hi - lo + 1 <= min(DIRECT_WINDOW, 4 * DIRECT_CLASS * P):
        k = np.arange(lo, hi + 1, dtype=np.int64)
        res = k % P
        count = np.bincount(res, minlength=P).astype(float)
        harm = np.bincount(res, weights=1.0 / k, minlength=P)
        return count, harm
    s = np.arange(P, dtype=np.int64)
    k0 = lo + np.mod(s - lo, P)
    c = np.where(k0 <= hi, (hi - k0) // P + 1, 0)
    count = c.astype(float)
    # the first DIRECT_CLASS terms of each class directly, the tail by digamma
    # (keeps digamma arguments >= DIRECT_CLASS, away from its pole)
    harm = np.zeros(P)
    for q in range(DIRECT_CLASS):
        harm += np.where(q < c, 1.0 / (k0 + q * P), 0.0)
    tail = c > DIRECT_CLASS
    x0 = k0[tail] / P
    harm[tail] += (digamma(x0 + c[tail]) - digamma(x0 + DIRECT_CLASS)) / P
    return count, harm


# -- band evaluation -------------------------------------------------------

def _fold_pc(f: PCFunction, band: Band, P: int) -> np.ndarray:
    m = f.n_cells
    s = np.arange(P, dtype=np.int64)
    sm = s % m
    V = np.fft.fft(f.values)
    Q = V[sm] * (1.0 - np.exp(-2j * np.pi * sm / m)) / (2j * np.pi)
    G = np.zeros(P)
    k0_weight = 0.0
    for seg in band:
        if seg.hi < seg.lo:
            continue
        if seg.lo == 0:
            k0_weight += seg.a
        cnt, hrm = harmonic_by_residue(P, max(seg.lo, 1), seg.hi)
        G += seg.a * hrm + seg.b * cnt
    B = Q * G - Q * G[np.mod(-s, P)]
    B[0] += k0_weight * f.values.mean()
    return B


def _fold_trig(p: TrigPoly, band: Band | None, L: int) -> np.ndarray:
    ks = p.ks
    c = p.coeffs if band is None else p.coeffs * band_weights(band, ks)
    c = c * np.where(ks % 2 == 0, 1.0, -1.0)
    n = 2**L
    res = np.mod(ks, n)
    B = np.bincount(res, weights=c.real, minlength=n) + 1j * np.bincount(res, weights=c.imag, minlength=n)
    return B


def _from_fold(B: np.ndarray, pts: DyadicPoints) -> np.ndarray:
    n = 2**pts.level
    if B.size > n:
        B = B.reshape(-1, n).sum(axis=0)
    return (n * np.fft.ifft(B))[pts.num]


def _explicit(src, band: Band | None, y: np.ndarray) -> np.ndarray:
    if isinstance(src, TrigPoly):
        ks = src.ks
        c = src.coeffs if band is None else src.coeffs * band_weights(band, ks)
    else:
        D = band_degree(band)
        if D > EXPLICIT_LIMIT:
            raise ValueError(
                f"degree {D} too large for explicit summation at non-dyadic points; "
                "evaluate on dyadic points instead"
            )
        ks = np.arange(-D, D + 1)
        c = fourier_coefficients(src, ks) * band_weights(band, ks)
    nz = c != 0
    ks, c = ks[nz], c[nz]
    out = np.zeros(y.shape, dtype=complex)
    step = 4096
    for i in range(0, ks.size, step):
        out += np.exp(1j * np.outer(y, ks[i : i + step])) @ c[i : i + step]
    return out


def eval_band(src: PCFunction | TrigPoly, band: Band | None, points) -> np.ndarray:
    """``sum_k w(|k|) src^(k) e^{iky}`` at ``points`` (``band=None`` means ``w = 1``)."""
    pts = as_points(points)
    if not isinstance(pts, DyadicPoints) or pts.level > MAX_FOLD_LEVEL:
        y = pts if not isinstance(pts, DyadicPoints) else pts.y
        return _explicit(src, band, np.asarray(y, dtype=float))
    if isinstance(src, TrigPoly):
        return _from_fold(_fold_trig(src, band, pts.level), pts)
    if band is None:
        raise ValueError("a band is required for piecewise-constant sources")
    P = 2 ** max(src.level, pts.level)
    return _from_fold(_fold_pc(src, band, P), pts)


def band_trigpoly(src: PCFunction | TrigPoly, band: Band) -> TrigPoly:
    """The image of ``src`` under ``band`` as an explicit coefficient vector."""
    D = band_degree(band)
    ks = np.arange(-D, D + 1)
    w = band_weights(band, ks)
    if isinstance(src, TrigPoly):
        c = np.array([src.coeff(int(k)) for k in ks]) if D <= src.degree else None
        if c is None:
            c = np.zeros(ks.size, dtype=complex)
            lo = max(-D, -src.degree)
            hi = min(D, src.degree)
            c[lo + D : hi + D + 1] = src.coeffs[lo + src.degree : hi + src.degree + 1]
    else:
        c = fourier_coefficients(src, ks)
    return TrigPoly(D, c * w)


# -- truncated logarithm series ---------------------------------------------

@lru_cache(maxsize=16)
def log_series_table(p: int, L: int) -> np.ndarray:
    """``Lambda_p(theta) = sum_{j=1}^p e^{ij theta} / j`` at ``theta = 2 pi r / 2**L``, all ``r``.

    Used for the primitive of the Dirichlet kernel and for cotangent
    integrals against ``e^{-i kappa x}``.
    """
    if L > MAX_FOLD_LEVEL:
        raise ValueError(f"resolution 2**{L} exceeds the table limit 2**{MAX_FOLD_LEVEL}")
    n = 2**L
    if p <= 0:
        t = np.zeros(n, dtype=complex)
    else:
        _, h = harmonic_by_residue(n, 1, p)
        t = n * np.fft.ifft(h)
    t.setflags(write=False)
    return t


# Euler-Maclaurin evaluation of Lambda_p at small angles
EM_START = 64
EM_TERMS = 5
SMALL_ANGLE = 0.1
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66)


def log_series_small_angle(p: int, theta: np.ndarray) -> np.ndarray:
    """``Lambda_p(theta)`` for ``0 < |theta| <= SMALL_ANGLE`` by Euler-Maclaurin.

    The first ``EM_START - 1`` terms are summed directly.  On the rest the
    summand ``e^{i theta t}/t`` varies slowly, so its integral (sine and cosine
    integrals) plus a few Bernoulli corrections is exact to rounding.
    """
    th = np.asarray(theta, dtype=float)
    if np.any(th == 0) or np.any(np.abs(th) > SMALL_ANGLE):
        raise ValueError("small-angle evaluation needs 0 < |theta| <= 0.1")
    a = min(int(p), EM_START - 1)
    j = np.arange(1, a + 1)
    out = (np.exp(1j * np.multiply.outer(th, j)) / j).sum(axis=-1)
    if p <= a:
        return out
    a, b = a + 1, int(p)
    sgn = np.sign(th)
    z = np.abs(th)
    si_b, ci_b = sici(b * z)
    si_a, ci_a = sici(a * z)
    integral = (ci_b - ci_a) + 1j * sgn * (si_b - si_a)

    def h_deriv(t, r):
        # d^r/dt^r e^{i th t} / t
        acc = np.zeros_like(th, dtype=complex)
        fact = 1.0
        for k in range(r + 1):
            if k:
                fact *= k
            acc += math.comb(r, k) * (1j * th) ** (r - k) * (-1) ** k * fact / t ** (k + 1)
        return np.exp(1j * th * t) * acc

    out = out + integral + 0.5 * (h_deriv(a, 0) + h_deriv(b, 0))
    fact = 1.0
    for k, B in enumerate(_BERNOULLI, 1):
        fact *= (2 * k - 1) * (2 * k)
        out = out + B / fact * (h_deriv(b, 2 * k - 1) - h_deriv(a, 2 * k - 1))
    return out


def mulmod_pow2(k: int, r: np.ndarray, L: int) -> np.ndarray:
    """``k * r mod 2**L`` without int64 overflow, for ``L <= 40``."""
    if L > 40:
        raise ValueError("modulus above 2**40")
    full = 1 << L
    kk = np.int64(int(k) % full)
    r = np.mod(np.asarray(r, dtype=np.int64), full)
    hi, lo = np.divmod(r, 1 << 20)
    return np.mod(np.mod(kk * hi, full) * (1 << 20) + kk * lo, full)


def log_series_at(p: int, offsets: np.ndarray, L: int, coarse_level: int) -> np.ndarray:
    """``Lambda_p(2 pi off / 2**L)`` at integer offsets, for any ``L``.

    Up to ``MAX_FOLD_LEVEL`` this reads :func:`log_series_table`.  Above it,
    offsets that are multiples of ``2**(L - coarse_level)`` read the table at
    ``coarse_level``, and the others must be small angles (they are the arc
    ends next to the excluded interval) and go through Euler-Maclaurin.
    """
    off = np.asarray(offsets, dtype=np.int64)
    full = 1 << L
    if L <= MAX_FOLD_LEVEL:
        return log_series_table(int(p), L)[np.mod(off, full)]
    if coarse_level > MAX_FOLD_LEVEL:
        raise ValueError(f"coarse level {coarse_level} exceeds the table limit")
    shift = L - coarse_level
    r = np.mod(off, full)
    coarse = np.mod(r, 1 << shift) == 0
    out = np.empty(off.shape, dtype=complex)
    out[coarse] = log_series_table(int(p), coarse_level)[r[coarse] >> shift]
    fine = ~coarse
    if fine.any():
        rs = np.where(r[fine] >= full // 2, r[fine] - full, r[fine])
        out[fine] = log_series_small_angle(int(p), TWO_PI * (rs / full)) if p > 0 else 0.0
    return out


def dirichlet_primitive(l: int, offsets: np.ndarray, L: int) -> np.ndarray:
    """``A_l(z) = z/2 + sum_{k=1}^l sin(kz)/k``, an antiderivative of ``D_l``.

    ``z = 2 pi * offsets / 2**L`` with integer offsets in ``(-2**L, 2**L)``.
    """
    off = np.asarray(offsets, dtype=np.int64)
    return np.pi * off / 2.0**L + log_series_at(int(l), off, L, min(L, MAX_FOLD_LEVEL)).imag
