"""Index sequences ``(n_j)`` and their derived parameters.

Indices are 1-based throughout, as in ``n_1 < n_2 < ...``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np


def log_fn(base: str) -> Callable[[float], float]:
    if base == "natural":
        return math.log
    if base == "two":
        return math.log2
    raise ValueError(f"log base must be 'natural' or 'two', got {base!r}")


@dataclass(frozen=True)
class IndexSequence:
    """Strictly increasing positive integers with the recipe that produced them."""

    terms: tuple[int, ...]
    kind: str = "explicit"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        t = tuple(int(x) for x in self.terms)
        if not t:
            raise ValueError("a sequence needs at least one term")
        if t[0] < 1 or any(b <= a for a, b in zip(t, t[1:])):
            raise ValueError("terms must be strictly increasing positive integers")
        if self.kind not in ("lacunary", "delta_growth", "explicit"):
            raise ValueError(f"unknown sequence kind {self.kind!r}")
        object.__setattr__(self, "terms", t)

    def __len__(self) -> int:
        return len(self.terms)

    def term(self, j: int) -> int:
        """``n_j`` (1-based)."""
        if not 1 <= j <= len(self.terms):
            raise IndexError(f"j = {j} outside 1..{len(self.terms)}")
        return self.terms[j - 1]

    def prefix(self, count: int) -> IndexSequence:
        return IndexSequence(self.terms[:count], self.kind, dict(self.params))

    def min_ratio(self) -> float:
        t = self.terms
        return min((b / a for a, b in zip(t, t[1:])), default=math.inf)

    def satisfies_growth(self) -> bool:
        """Audit of the defining inequality of ``kind`` (exact rational arithmetic)."""
        t = self.terms
        if self.kind == "lacunary":
            q = Fraction(str(self.params["q"]))
            return all(b >= q * a for a, b in zip(t, t[1:]))
        if self.kind == "delta_growth":
            d = self.params["delta"]
            return all(b >= (1 + j**-d) * a * (1 - 1e-15) for j, (a, b) in enumerate(zip(t, t[1:]), 1))
        return True

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": dict(self.params), "terms": list(self.terms)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> IndexSequence:
        return cls(tuple(d["terms"]), d.get("kind", "explicit"), dict(d.get("params", {})))


def make_lacunary(q: float, n1: int, count: int) -> IndexSequence:
    """``n_{j+1} = ceil(q n_j)``, the smallest integers with ratio at least ``q``."""
    if q <= 1:
        raise ValueError(f"lacunary ratio must exceed 1, got {q}")
    if count < 1 or n1 < 1:
        raise ValueError("count and n1 must be >= 1")
    qf = Fraction(str(q))
    t = [int(n1)]
    for _ in range(count - 1):
        t.append(max(math.ceil(qf * t[-1]), t[-1] + 1))
    return IndexSequence(tuple(t), "lacunary", {"q": q, "n1": n1})


def make_delta_growth(delta: float, n1: int, count: int) -> IndexSequence:
    """``n_{j+1} = ceil((1 + j**-delta) n_j)``."""
    if not 0 < delta < 0.5:
        raise ValueError(f"delta must lie in (0, 1/2), got {delta}")
    if count < 1 or n1 < 1:
        raise ValueError("count and n1 must be >= 1")
    t = [int(n1)]
    for j in range(1, count):
        t.append(max(math.ceil((1 + j**-delta) * t[-1]), t[-1] + 1))
    return IndexSequence(tuple(t), "delta_growth", {"delta": delta, "n1": n1})


def make_powers_of_two(count: int, start: int = 1) -> IndexSequence:
    """``n_j = 2**(j + start - 1)``."""
    return IndexSequence(tuple(2 ** (j + start - 1) for j in range(1, count + 1)), "lacunary", {"q": 2, "n1": 2**start})


def nbeta(j: int, base: str = "natural") -> float:
    """``n_j beta_j = 20 (j+1) log^2(j+1)``."""
    return 20 * (j + 1) * log_fn(base)(j + 1) ** 2


def beta_param(seq: IndexSequence, j: int, base: str = "natural") -> float:
    """``beta_j = 20 (j+1) log^2(j+1) / n_j``."""
    v = nbeta(j, base)
    if not v > 16:
        raise ArithmeticError(f"n_j beta_j = {v} must exceed 16")
    return v / seq.term(j)


def m_param(seq: IndexSequence, j: int, require_positive: bool = True) -> int:
    """``m_j = floor(n_j / 10)``."""
    m = seq.term(j) // 10
    if require_positive and m < 1:
        raise ValueError(f"m_{j} = floor({seq.term(j)}/10) = 0; need n_j >= 10")
    return m


@dataclass(frozen=True)
class BlockCoords:
    """``i = (j-1) K0 + b`` with ``0 <= b < K0`` for ``i = 1..N``."""

    N: int
    K: int
    K0: int
    pairs: dict

    def index(self, j: int, b: int) -> int:
        return (j - 1) * self.K0 + b

    def blocks(self) -> dict[int, list[int]]:
        """Flat indices grouped by ``b``, ordered by ``j``."""
        out: dict[int, list[int]] = {}
        for i in range(1, self.N + 1):
            out.setdefault(self.pairs[i][1], []).append(i)
        return out


def block_coords(N: int, delta: float) -> BlockCoords:
    """``K = floor(sqrt N)``, ``K0 = floor(K**(2 delta))`` and the ``(j, b)`` of each ``i``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if not 0 < delta < 0.5:
        raise ValueError(f"delta must lie in (0, 1/2), got {delta}")
    K = math.isqrt(N)
    K0 = max(1, math.floor(K ** (2 * delta)))
    pairs = {i: (i // K0 + 1, i % K0) for i in range(1, N + 1)}
    return BlockCoords(N, K, K0, pairs)


@dataclass(frozen=True)
class LacunarityAudit:
    N: int
    K: int
    K0: int
    min_ratio: float
    ratios_by_K: dict
    k_delta: int | None
    below_threshold: bool
    threshold: float = 2.6

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "K": self.K,
            "K0": self.K0,
            "min_ratio": self.min_ratio,
            "ratios_by_K": {str(k): v for k, v in self.ratios_by_K.items()},
            "k_delta": self.k_delta,
            "below_threshold": self.below_threshold,
            "threshold": self.threshold,
        }


def _block_min_ratio(terms: np.ndarray, N: int, K0: int) -> float:
    if N <= K0:
        return math.inf
    t = terms[:N].astype(float)
    return float(np.min(t[K0:] / t[:-K0]))


def subsequence_lacunarity_audit(
    seq: IndexSequence, delta: float, N: int, threshold: float = 2.6
) -> LacunarityAudit:
    """Within-block ratios ``n'_{j+1,b} / n'_{j,b} = n_{i+K0} / n_i``.

    For each ``K' <= floor(sqrt N)`` the ratio is taken over indices up to
    ``min(N, (K'+1)**2 - 1)``, the largest ``N`` sharing that ``K'``.  The
    reported ``k_delta`` is the smallest ``K'`` from which all ratios stay at or
    above ``threshold``; ``below_threshold`` is set when no such ``K'`` exists.
    """
    if N > len(seq):
        raise ValueError(f"N = {N} exceeds the sequence length {len(seq)}")
    terms = np.array(seq.terms, dtype=float)
    K = math.isqrt(N)
    ratios = {}
    for k in range(1, K + 1):
        k0 = max(1, math.floor(k ** (2 * delta)))
        ratios[k] = _block_min_ratio(terms, min(N, (k + 1) ** 2 - 1), k0)
    k_delta = None
    for k in range(K, 0, -1):
        if ratios[k] >= threshold:
            k_delta = k
        else:
            break
    bc = block_coords(N, delta)
    return LacunarityAudit(
        N, K, bc.K0, _block_min_ratio(terms, N, bc.K0), ratios, k_delta, k_delta is None
    )


def sequence_from_spec(spec: dict, count: int) -> IndexSequence:
    """Build a sequence from ``{"kind": ..., ...}`` as used in run configs."""
    kind = spec.get("kind")
    if kind == "lacunary":
        return make_lacunary(spec["q"], spec.get("n1", 10), count)
    if kind == "delta_growth":
        return make_delta_growth(spec["delta"], spec.get("n1", 10), count)
    if kind == "powers_of_two":
        return make_powers_of_two(count, spec.get("start", 1))
    if kind == "explicit":
        return IndexSequence(tuple(spec["terms"])[:count], "explicit")
    raise ValueError(f"unknown sequence kind {kind!r}")
