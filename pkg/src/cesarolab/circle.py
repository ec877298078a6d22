"""Function representations on the circle T = [-pi, pi).

Positions on T are handled internally in *turns*: ``t = (y + pi) / (2 pi)``
in ``[0, 1)``.  Dyadic grid points are then exact binary fractions, which
keeps every interval test and every cell boundary free of rounding.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi

# largest dyadic resolution at which float turns are snapped to exact grid points
MAX_SNAP_LEVEL = 40


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _as_values(values) -> np.ndarray:
    a = np.array(values)
    if np.iscomplexobj(a):
        a = a.astype(np.complex128)
        if not np.any(a.imag):
            a = a.real.copy()
    else:
        a = a.astype(np.float64)
    return a


@dataclass(frozen=True, eq=False)
class PCFunction:
    """Piecewise-constant function on ``2**level`` equal cells of T.

    Cell ``c`` is ``[-pi + c*h, -pi + (c+1)*h)`` with ``h = 2 pi / 2**level``.
    Values are stored as float64 when real, complex128 otherwise.
    """

    level: int
    values: np.ndarray

    def __post_init__(self):
        if self.level < 1:
            raise ValueError(f"level must be >= 1, got {self.level}")
        vals = _as_values(self.values)
        if vals.ndim != 1 or vals.size != 2**self.level:
            raise ValueError(
                f"expected {2**self.level} values for level {self.level}, got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("PCFunction values must be finite")
        object.__setattr__(self, "values", _frozen(vals))

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, c, level: int = 1) -> PCFunction:
        return cls(level, np.full(2**level, c))

    @classmethod
    def indicator(cls, start: float, stop: float, level: int) -> PCFunction:
        """Indicator of ``[start, stop)`` given in radians; endpoints must lie on the grid."""
        n = 2**level
        lo = (start + np.pi) / TWO_PI * n
        hi = (stop + np.pi) / TWO_PI * n
        ilo, ihi = int(round(lo)), int(round(hi))
        if abs(lo - ilo) > 1e-9 or abs(hi - ihi) > 1e-9:
            raise ValueError("indicator endpoints must be cell boundaries at this level")
        vals = np.zeros(n)
        vals[ilo:ihi] = 1.0
        return cls(level, vals)

    @classmethod
    def from_cells(cls, level: int, cells, value=1.0) -> PCFunction:
        vals = np.zeros(2**level, dtype=np.result_type(value, float))
        vals[np.asarray(cells, dtype=int)] = value
        return cls(level, vals)

    # -- geometry -----------------------------------------------------
    @property
    def n_cells(self) -> int:
        return self.values.size

    @property
    def width(self) -> float:
        return TWO_PI / self.n_cells

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.values)

    def edges(self) -> np.ndarray:
        return -np.pi + self.width * np.arange(self.n_cells + 1)

    def midpoints(self) -> np.ndarray:
        return -np.pi + self.width * (np.arange(self.n_cells) + 0.5)

    def refine(self, level: int) -> PCFunction:
        if level < self.level:
            raise ValueError("cannot refine to a coarser level")
        return PCFunction(level, np.repeat(self.values, 2 ** (level - self.level)))

    # -- pointwise ops ------------------------------------------------
    def abs(self) -> PCFunction:
        return PCFunction(self.level, np.abs(self.values))

    def conj(self) -> PCFunction:
        return PCFunction(self.level, np.conj(self.values))

    def modulate(self, k: int) -> PCFunction:
        """Cellwise phase modulation ``v_c * exp(i k x_c)`` at cell midpoints.

        The result has the same modulus as ``self`` on every cell; it is the
        piecewise-constant stand-in for ``f(x) exp(ikx)``.
        """
        n = self.n_cells
        # midpoint turn (2c+1)/(2n); exp(ik(-pi + 2 pi t)) reduced exactly
        num = (int(k) % (2 * n)) * (2 * np.arange(n) + 1) % (2 * n)
        phase = np.exp(2j * np.pi * num / (2 * n)) * (-1.0) ** (int(k) % 2)
        return PCFunction(self.level, self.values * phase)

    def _binary(self, other, op) -> PCFunction:
        if isinstance(other, PCFunction):
            lv = max(self.level, other.level)
            a, b = self.refine(lv).values, other.refine(lv).values
            return PCFunction(lv, op(a, b))
        return PCFunction(self.level, op(self.values, other))

    def __add__(self, other):
        return self._binary(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __rsub__(self, other):
        return PCFunction(self.level, other - self.values)

    def __mul__(self, other):
        return self._binary(other, np.multiply)

    __rmul__ = __mul__

    def __neg__(self):
        return PCFunction(self.level, -self.values)

    def integral(self) -> complex | float:
        return self.values.sum() * self.width

    def mean(self) -> complex | float:
        return self.values.mean()

    def at(self, y) -> np.ndarray:
        """Value of the cell containing each point ``y``."""
        t = to_turns(y)
        idx = np.floor(t * self.n_cells).astype(np.int64) % self.n_cells
        return self.values[idx]

    # -- serialization ------------------------------------------------
    def to_dict(self) -> dict:
        v = np.asarray(self.values, dtype=complex)
        return {"level": self.level, "values": [[float(z.real), float(z.imag)] for z in v]}

    @classmethod
    def from_dict(cls, d: dict) -> PCFunction:
        pairs = np.asarray(d["values"], dtype=float).reshape(-1, 2)
        return cls(int(d["level"]), pairs[:, 0] + 1j * pairs[:, 1])

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, s: str) -> PCFunction:
        return cls.from_dict(json.loads(s))


@dataclass(frozen=True, eq=False)
class TrigPoly:
    """Trigonometric polynomial ``sum_{|k| <= degree} coeffs[k + degree] e^{iky}``."""

    degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128).copy()
        if self.degree < 0 or c.shape != (2 * self.degree + 1,):
            raise ValueError(
                f"coeffs length must be 2*degree+1 = {2 * self.degree + 1}, got {c.shape}"
            )
        object.__setattr__(self, "coeffs", _frozen(c))

    @classmethod
    def from_dict_coeffs(cls, terms: dict[int, complex]) -> TrigPoly:
        deg = max((abs(k) for k in terms), default=0)
        c = np.zeros(2 * deg + 1, dtype=complex)
        for k, v in terms.items():
            c[k + deg] = v
        return cls(deg, c)

    @property
    def ks(self) -> np.ndarray:
        return np.arange(-self.degree, self.degree + 1)

    def coeff(self, k: int) -> complex:
        if abs(k) > self.degree:
            return 0j
        return complex(self.coeffs[k + self.degree])

    def support(self) -> np.ndarray:
        return self.ks[self.coeffs != 0]

    def norm2(self) -> float:
        """L2(T) norm via Parseval: ``sqrt(2 pi sum |c_k|^2)``."""
        return float(np.sqrt(TWO_PI * np.sum(np.abs(self.coeffs) ** 2)))

    def __call__(self, y):
        return eval_trig(self, y)

    def __add__(self, other: TrigPoly) -> TrigPoly:
        d = max(self.degree, other.degree)
        c = np.zeros(2 * d + 1, dtype=complex)
        c[d - self.degree : d + self.degree + 1] += self.coeffs
        c[d - other.degree : d + other.degree + 1] += other.coeffs
        return TrigPoly(d, c)

    def __sub__(self, other: TrigPoly) -> TrigPoly:
        return self + other.scale(-1.0)

    def scale(self, a) -> TrigPoly:
        return TrigPoly(self.degree, self.coeffs * a)


@dataclass(frozen=True, eq=False)
class GridSet:
    """Union of level-``level`` grid cells, as a boolean mask."""

    level: int
    mask: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mask, dtype=bool).copy()
        if m.shape != (2**self.level,):
            raise ValueError(f"mask must have {2**self.level} cells")
        object.__setattr__(self, "mask", _frozen(m))

    @classmethod
    def empty(cls, level: int) -> GridSet:
        return cls(level, np.zeros(2**level, dtype=bool))

    @classmethod
    def full(cls, level: int) -> GridSet:
        return cls(level, np.ones(2**level, dtype=bool))

    def refine(self, level: int) -> GridSet:
        if level < self.level:
            raise ValueError("cannot refine to a coarser level")
        return GridSet(level, np.repeat(self.mask, 2 ** (level - self.level)))

    def _align(self, other: GridSet) -> tuple[int, np.ndarray, np.ndarray]:
        lv = max(self.level, other.level)
        return lv, self.refine(lv).mask, other.refine(lv).mask

    def __or__(self, other: GridSet) -> GridSet:
        lv, a, b = self._align(other)
        return GridSet(lv, a | b)

    def __and__(self, other: GridSet) -> GridSet:
        lv, a, b = self._align(other)
        return GridSet(lv, a & b)

    def __sub__(self, other: GridSet) -> GridSet:
        lv, a, b = self._align(other)
        return GridSet(lv, a & ~b)

    def __invert__(self) -> GridSet:
        return GridSet(self.level, ~self.mask)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GridSet):
            return NotImplemented
        _, a, b = self._align(other)
        return bool(np.array_equal(a, b))

    def is_empty(self) -> bool:
        return not self.mask.any()

    def measure(self) -> float:
        return measure(self)

    def indicator(self) -> PCFunction:
        return PCFunction(max(self.level, 1), self.refine(max(self.level, 1)).mask.astype(float))

    def contains_cells(self, level: int, cells: np.ndarray) -> np.ndarray:
        """Membership of level-``level`` cells (``level >= self.level``)."""
        return self.mask[np.asarray(cells, dtype=np.int64) >> (level - self.level)]


def to_turns(y) -> np.ndarray:
    return np.mod((np.asarray(y, dtype=float) + np.pi) / TWO_PI, 1.0)


def fourier_coefficient(f: PCFunction, k: int) -> complex:
    """Exact ``(1/2pi) int_T f(x) e^{-ikx} dx`` summed cell by cell.

    Cell ``[a, b)`` contributes ``v (e^{-ika} - e^{-ikb}) / (2 pi i k)``.
    Phases are reduced with integer arithmetic so large ``k`` loses no accuracy.
    """
    k = int(k)
    n = f.n_cells
    if k == 0:
        return complex(f.values.mean())
    c = np.arange(n + 1, dtype=np.int64)
    # a_c = -pi + 2 pi c / n  ->  e^{-ik a_c} = (-1)^k e^{-2 pi i (k c mod n) / n}
    ph = np.exp(-2j * np.pi * ((k % n) * c % n) / n) * (-1.0) ** (k % 2)
    return complex(np.sum(f.values * (ph[:-1] - ph[1:])) / (2j * np.pi * k))


def fourier_coefficients(f: PCFunction, ks) -> np.ndarray:
    """Vector of exact coefficients through one DFT of the cell values.

    With equal cells, ``sum_c v_c e^{-ik a_c} = (-1)^k DFT(v)[k mod n]``, so
    ``f^(k) = DFT(v)[k mod n] (-1)^k (1 - e^{-2 pi i k / n}) / (2 pi i k)``.
    This is an algebraic rewriting of the cellwise sum, not an approximation.
    """
    ks = np.asarray(ks, dtype=np.int64)
    n = f.n_cells
    V = np.fft.fft(f.values)
    r = np.mod(ks, n)
    out = np.empty(ks.shape, dtype=complex)
    nz = ks != 0
    kk = ks[nz]
    sign = np.where(kk % 2 == 0, 1.0, -1.0)
    out[nz] = V[r[nz]] * sign * (1.0 - np.exp(-2j * np.pi * r[nz] / n)) / (2j * np.pi * kk)
    out[~nz] = f.values.mean()
    return out


def bandlimit(f: PCFunction, M: int) -> TrigPoly:
    if M < 0:
        raise ValueError("M must be >= 0")
    return TrigPoly(M, fourier_coefficients(f, np.arange(-M, M + 1)))


def eval_trig(p: TrigPoly, y) -> np.ndarray | complex:
    """Evaluate by Horner's rule in ``z = e^{iy}``, stable on the unit circle."""
    y_arr = np.asarray(y, dtype=float)
    z = np.exp(1j * y_arr)
    acc = np.zeros(z.shape, dtype=complex)
    for c in p.coeffs[::-1]:
        acc = acc * z + c
    val = acc * np.exp(-1j * p.degree * y_arr)
    return complex(val) if val.ndim == 0 else val


def lp_norm(f: PCFunction, p) -> float:
    a = np.abs(f.values)
    if p == 1:
        return float(a.sum() * f.width)
    if p == 2:
        return float(np.sqrt(np.sum(a * a) * f.width))
    if p in (np.inf, "inf", float("inf")):
        return float(a.max())
    raise ValueError(f"unsupported p={p!r}; use 1, 2 or inf")


def measure(s: GridSet) -> float:
    return TWO_PI / 2**s.level * int(np.count_nonzero(s.mask))
