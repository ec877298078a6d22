"""Dyadic intervals of T, the Calderon-Zygmund decomposition and interval families."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .circle import TWO_PI, GridSet, PCFunction, lp_norm, to_turns

# averages within this relative margin of lambda count as ties (not selected),
# so rounding in |f| cannot flip a selection
TIE_MARGIN = 1e-12


@dataclass(frozen=True, order=True)
class DyadicInterval:
    """``[-pi + 2 pi k / 2**n, -pi + 2 pi (k+1) / 2**n)`` with ``n = level``, ``k = index``."""

    level: int
    index: int

    def __post_init__(self):
        if self.level < 0 or not 0 <= self.index < 2**self.level:
            raise ValueError(f"invalid dyadic interval (level={self.level}, index={self.index})")

    @property
    def measure(self) -> float:
        return TWO_PI / 2**self.level

    @property
    def start(self) -> float:
        return -np.pi + TWO_PI * self.index / 2**self.level

    @property
    def stop(self) -> float:
        return -np.pi + TWO_PI * (self.index + 1) / 2**self.level

    def cells(self, level: int) -> np.ndarray:
        """Indices of the level-``level`` cells making up this interval."""
        if level < self.level:
            raise ValueError("cell level must be at least the interval level")
        s = 2 ** (level - self.level)
        return np.arange(self.index * s, (self.index + 1) * s)

    def parent(self) -> DyadicInterval:
        if self.level == 0:
            raise ValueError("T has no parent")
        return DyadicInterval(self.level - 1, self.index >> 1)

    def ancestor(self, level: int) -> DyadicInterval:
        return DyadicInterval(level, self.index >> (self.level - level))

    def contains(self, other: DyadicInterval) -> bool:
        return other.level >= self.level and other.index >> (other.level - self.level) == self.index

    def intersects(self, other: DyadicInterval) -> bool:
        return self.contains(other) or other.contains(self)

    def to_dict(self) -> dict:
        return {"level": self.level, "index": self.index}


def containing_interval(y: float, n: int) -> DyadicInterval:
    """The level-``n`` dyadic interval containing ``y`` (``I_n(y)``)."""
    if n < 0:
        raise ValueError("level must be >= 0")
    k = int(np.floor(float(to_turns(y)) * 2**n)) % 2**n
    return DyadicInterval(n, k)


def neighbor(I: DyadicInterval, i: int) -> DyadicInterval:
    """``I + |I| i`` taken modulo T."""
    return DyadicInterval(I.level, (I.index + i) % 2**I.level)


def dilate(I: DyadicInterval, gamma: int, level: int | None = None) -> GridSet:
    """``gamma I``: the union of neighbours ``-(gamma-1)/2 .. (gamma-1)/2`` of ``I``."""
    _check_odd(gamma)
    L = max(I.level, 1 if level is None else level)
    return GridSet(L, _coverage([I], gamma, L) > 0)


def _check_odd(gamma: int) -> None:
    if gamma < 1 or gamma % 2 == 0:
        raise ValueError(f"gamma must be an odd integer >= 1, got {gamma}")


def _coverage(intervals: Iterable[DyadicInterval], gamma: int, L: int) -> np.ndarray:
    """Number of dilated intervals ``gamma I`` covering each level-``L`` cell."""
    n_cells = 2**L
    diff = np.zeros(n_cells + 1, dtype=np.int64)
    ivs = list(intervals)
    if not ivs:
        return diff[:-1]
    lv = np.array([I.level for I in ivs], dtype=np.int64)
    ix = np.array([I.index for I in ivs], dtype=np.int64)
    scale = np.left_shift(1, L - lv)
    half = (gamma - 1) // 2
    length = np.minimum(gamma * scale, n_cells)
    start = np.mod((ix - half) * scale, n_cells)
    stop = start + length
    wrap = stop > n_cells
    np.add.at(diff, start, 1)
    np.add.at(diff, np.minimum(stop, n_cells), -1)
    np.add.at(diff, np.zeros(int(wrap.sum()), dtype=np.int64), 1)
    np.add.at(diff, stop[wrap] - n_cells, -1)
    return np.cumsum(diff)[:-1]


@dataclass(frozen=True)
class IntervalFamily:
    """A family of pairwise disjoint dyadic intervals, kept sorted."""

    intervals: tuple[DyadicInterval, ...] = ()

    def __post_init__(self):
        ivs = tuple(sorted(set(self.intervals), key=lambda I: (I.start, I.level)))
        for a, b in zip(ivs, ivs[1:]):
            if a.intersects(b):
                raise ValueError(f"intervals {a} and {b} overlap")
        object.__setattr__(self, "intervals", ivs)

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __contains__(self, I) -> bool:
        return I in set(self.intervals)

    @property
    def finest_level(self) -> int:
        return max((I.level for I in self.intervals), default=0)

    def measure(self) -> float:
        return float(sum(I.measure for I in self.intervals))

    def union(self, level: int | None = None) -> GridSet:
        L = max(self.finest_level, 1 if level is None else level)
        return GridSet(L, _coverage(self.intervals, 1, L) > 0)

    def to_list(self) -> list[dict]:
        return [I.to_dict() for I in self.intervals]


@dataclass(frozen=True, eq=False)
class CZDecomposition:
    """``f = good + sum(part for _, part in bad)`` at height ``lam``."""

    lam: float
    f: PCFunction
    good: PCFunction
    bad: tuple[tuple[DyadicInterval, PCFunction], ...]
    family: IntervalFamily
    averages: dict = field(default_factory=dict)

    def measure_F(self) -> float:
        return self.family.measure()

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "intervals": self.family.to_list(),
            "measure_F": self.measure_F(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _level_sums(a: np.ndarray, n: int) -> np.ndarray:
    return a.reshape(2**n, -1).sum(axis=1)


def cz_decompose(f: PCFunction, lam: float) -> CZDecomposition:
    """Stopping-time decomposition of ``f`` at height ``lam``.

    Walks the dyadic tree level by level down to the grid of ``f`` and
    selects the maximal intervals on which the average of ``|f|`` exceeds
    ``lam``.  Requires ``lam > ||f||_1 / (2 pi)`` so that T itself is never
    selected.  Averages within ``TIE_MARGIN`` (relative) of ``lam`` are ties
    and are not selected.
    """
    lam = float(lam)
    if not np.isfinite(lam):
        raise ValueError("lambda must be finite")
    root_avg = lp_norm(f, 1) / TWO_PI
    if lam <= root_avg:
        raise ValueError(f"lambda must exceed ||f||_1/(2 pi) = {root_avg:.6g}, got {lam}")
    m = f.level
    a = np.abs(f.values)
    thresh = lam * (1 + TIE_MARGIN)
    alive = np.ones(1, dtype=bool)
    chosen: list[DyadicInterval] = []
    for n in range(1, m + 1):
        alive = np.repeat(alive, 2)
        avg = _level_sums(a, n) / 2 ** (m - n)
        sel = alive & (avg > thresh)
        chosen.extend(DyadicInterval(n, int(k)) for k in np.flatnonzero(sel))
        alive &= ~sel
    family = IntervalFamily(tuple(chosen))
    good = f.values.copy()
    bad = []
    averages = {}
    for I in family:
        c = I.cells(m)
        mean_f = f.values[c].mean()
        averages[I] = float(a[c].mean())
        part = np.zeros_like(f.values)
        part[c] = f.values[c] - mean_f
        bad.append((I, PCFunction(m, part)))
        good[c] = mean_f
    return CZDecomposition(lam, f, PCFunction(m, good), tuple(bad), family, averages)


def filter_beta(d: CZDecomposition | IntervalFamily, beta: float) -> IntervalFamily:
    """Subfamily of intervals longer than ``beta``."""
    if beta < 0:
        raise ValueError("beta must be >= 0")
    fam = d.family if isinstance(d, CZDecomposition) else d
    return IntervalFamily(tuple(I for I in fam if I.measure > beta))


def dilated_union(fam: IntervalFamily, gamma: int, level: int | None = None) -> GridSet:
    _check_odd(gamma)
    L = max(fam.finest_level, 1 if level is None else level)
    return GridSet(L, _coverage(fam.intervals, gamma, L) > 0)


def overlap_sum(fam: IntervalFamily, gamma: int, level: int | None = None) -> float:
    """``sum_{I, J} |gamma I  cap  gamma J|`` over ordered pairs, diagonal included.

    Equals the integral of the squared coverage count of the dilations.
    """
    _check_odd(gamma)
    L = max(fam.finest_level, 1 if level is None else level)
    cnt = _coverage(fam.intervals, gamma, L).astype(float)
    return float(np.sum(cnt * cnt) * TWO_PI / 2**L)


def maximal_selection(fam: IntervalFamily, shift: int) -> IntervalFamily:
    """Intervals ``J`` whose shifted copy ``J^(shift)`` lies in no larger shifted copy.

    Returned as the original (unshifted) intervals.
    """
    copies = {neighbor(J, shift): J for J in fam}
    keep = []
    for c, J in copies.items():
        if not any(DyadicInterval(l, c.index >> (c.level - l)) in copies for l in range(c.level)):
            keep.append(J)
    return IntervalFamily(tuple(keep))


def shifted(fam: IntervalFamily, shift: int) -> tuple[DyadicInterval, ...]:
    return tuple(neighbor(J, shift) for J in fam)
