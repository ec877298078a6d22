"""Convergence experiments for averages of partial sums along a sequence."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..circle import PCFunction, TrigPoly
from ..operators import t_band
from ..sequences import IndexSequence
from ..spectral import Segment, band_vp, eval_band
from .regions import Grid
from .reports import strictly_decreasing


@dataclass
class ErrorCurve:
    """Grid-sup, grid-L1 and exceedance measures of an error over ``N_list``."""

    mode: str
    N_list: list
    sup: list
    l1: list
    measures: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def decreasing(self, eps: float, allowed_inversions: int = 1) -> bool:
        return strictly_decreasing(self.measures[eps], allowed_inversions)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "N_list": list(self.N_list),
            "sup": list(self.sup),
            "l1": list(self.l1),
            "measures": {str(k): list(v) for k, v in self.measures.items()},
            "params": dict(self.params),
        }


def _values(f: PCFunction | TrigPoly, grid: Grid) -> np.ndarray:
    if isinstance(f, TrigPoly):
        return eval_band(f, None, grid.points)
    return np.asarray(f.at(grid.points.y), dtype=complex)


def average_band(seq: IndexSequence, N: int):
    """Weights of ``(1/N) sum_{j<=N} S_{n_j}``."""
    return tuple(Segment(0, seq.term(j), 1.0 / N) for j in range(1, N + 1))


def _curve(mode, errors, N_list, grid, eps_list, params) -> ErrorCurve:
    sup = [float(np.max(np.abs(e))) for e in errors]
    l1 = [float(np.sum(np.abs(e)) * grid.weight) for e in errors]
    meas = {eps: [float(np.count_nonzero(np.abs(e) > eps) * grid.weight) for e in errors] for eps in eps_list}
    return ErrorCurve(mode, list(N_list), sup, l1, meas, params)


def convergence_experiment(
    f: PCFunction | TrigPoly,
    seq: IndexSequence,
    N_list,
    mode: str = "full_average",
    grid_level: int = 10,
    eps_list=(0.1,),
) -> ErrorCurve:
    """Error of ``T_N f`` (``sv_average``) or of ``(1/N) sum S_{n_j} f - f`` (``full_average``)."""
    N_list = list(N_list)
    if N_list != sorted(N_list):
        raise ValueError("N_list must be increasing")
    if N_list and N_list[-1] > len(seq):
        raise ValueError(f"sequence has {len(seq)} terms, need {N_list[-1]}")
    grid = Grid(grid_level)
    if mode == "sv_average":
        errors = [eval_band(f, t_band(seq, N), grid.points) for N in N_list]
    elif mode == "full_average":
        base = _values(f, grid)
        errors = [eval_band(f, average_band(seq, N), grid.points) - base for N in N_list]
    else:
        raise ValueError("mode must be 'sv_average' or 'full_average'")
    return _curve(mode, errors, N_list, grid, eps_list, {"grid_level": grid_level})


def check_vp_convergence(
    f: PCFunction | TrigPoly, seq: IndexSequence, N_list, grid_level: int = 10, eps_list=(0.1,)
) -> ErrorCurve:
    """Error of ``V_{n_j} f - f`` for ``j`` in ``N_list``."""
    grid = Grid(grid_level)
    base = _values(f, grid)
    errors = [eval_band(f, band_vp(seq.term(j)), grid.points) - base for j in N_list]
    return _curve("vp", errors, list(N_list), grid, eps_list, {"grid_level": grid_level})
