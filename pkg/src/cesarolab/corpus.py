"""The seeded test corpus of piecewise-constant functions."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .circle import TWO_PI, PCFunction, lp_norm

DEFAULT_LEVEL = 8


@dataclass(frozen=True)
class CorpusItem:
    name: str
    f: PCFunction
    description: str

    def summary(self) -> dict:
        return {
            "name": self.name,
            "level": self.f.level,
            "L1": lp_norm(self.f, 1),
            "Linf": lp_norm(self.f, np.inf),
            "real": self.f.is_real,
            "description": self.description,
        }


def _cells(level: int) -> tuple[np.ndarray, np.ndarray]:
    n = 2**level
    edges = -np.pi + TWO_PI * np.arange(n + 1) / n
    return edges[:-1], edges[1:]


def _cell_average(antideriv, level: int) -> np.ndarray:
    a, b = _cells(level)
    return (antideriv(b) - antideriv(a)) / (b - a)


def _haar_block(level: int, block_level: int, rng) -> np.ndarray:
    """Random +-h steps, each level-``block_level`` block split into two halves of opposite sign."""
    nb = 2**block_level
    heights = rng.uniform(0.5, 3.0, nb) * rng.choice([-1.0, 1.0], nb)
    half = np.repeat(np.stack([heights, -heights], axis=1).ravel(), 2 ** (level - block_level - 1))
    return half


def _inv_sqrt(center: float):
    # antiderivative of |x - c|^{-1/2}
    return lambda x: 2.0 * np.sign(x - center) * np.sqrt(np.abs(x - center))


def _neg_log(x):
    # antiderivative of -ln|x|
    ax = np.abs(x)
    return np.sign(x) * np.where(ax > 0, ax - ax * np.log(np.where(ax > 0, ax, 1.0)), 0.0)


def default_corpus(seed: int = 0, level: int = DEFAULT_LEVEL) -> list[CorpusItem]:
    """24 functions at ``level`` spanning indicators, steps, spikes and singular profiles."""
    if level < 6:
        raise ValueError("corpus level must be >= 6")
    rng = np.random.default_rng(seed)
    n = 2**level
    mid = -np.pi + TWO_PI * (np.arange(n) + 0.5) / n
    items: list[tuple[str, np.ndarray, str]] = []

    def ind(a, b):
        return PCFunction.indicator(a, b, level).values

    items.append(("indicator_half", ind(0.0, np.pi), "indicator of [0, pi)"))
    items.append(("indicator_quarter", ind(-np.pi / 2, 0.0), "indicator of [-pi/2, 0)"))
    items.append(("indicator_narrow", ind(np.pi / 4, np.pi / 4 + TWO_PI / 64), "indicator of one level-6 cell"))
    items.append(("indicator_two_arcs", ind(-np.pi, -np.pi / 2) + ind(np.pi / 8, np.pi / 4), "two disjoint arcs"))
    items.append(("spike_eighth", 8.0 * ind(0.0, np.pi / 4), "8 on [0, pi/4)"))
    v = np.zeros(n)
    v[n // 3] = 64.0
    items.append(("spike_cell", v, "height 64 on a single cell"))
    v = np.zeros(n)
    v[n // 5] = 40.0
    v[n // 5 + n // 2] = -40.0
    items.append(("spike_pair", v, "two opposite single-cell spikes"))
    items.append(("haar_level3", _haar_block(level, 3, rng), "mean-zero steps on level-3 blocks"))
    items.append(("haar_level5", _haar_block(level, 5, rng), "mean-zero steps on level-5 blocks"))
    items.append(("haar_level7", _haar_block(level, 7, rng), "mean-zero steps on level-7 blocks"))
    for lv in (4, 6, level):
        steps = rng.choice([-1.0, 1.0], 2**lv)
        items.append((f"sign_steps_level{lv}", np.repeat(steps, 2 ** (level - lv)), f"random +-1 on level-{lv} cells"))
    v = np.zeros(n)
    idx = rng.choice(n, 6, replace=False)
    v[idx] = rng.uniform(5.0, 30.0, 6)
    items.append(("sparse_spikes", v, "six random positive single-cell spikes"))
    items.append(("inv_sqrt_origin", _cell_average(_inv_sqrt(0.0), level), "cell averages of |x|^(-1/2)"))
    c = -np.pi / 2 + TWO_PI / 2**10
    items.append(("inv_sqrt_offgrid", _cell_average(_inv_sqrt(c), level), "cell averages of |x - c|^(-1/2), c off the cell grid"))
    items.append(("neg_log_origin", _cell_average(_neg_log, level), "cell averages of -ln|x|"))
    items.append(("sawtooth", mid / np.pi, "x/pi at cell midpoints"))
    items.append(("bump", np.exp(-8.0 * mid**2) * 3.0, "Gaussian bump sampled at midpoints"))
    items.append(("normal_noise", rng.normal(size=n), "i.i.d. standard normal cell values"))
    items.append(("phase_indicator", ind(-np.pi / 2, np.pi / 2) * np.exp(3j * mid), "indicator times e^{3ix} at midpoints"))
    items.append(("complex_noise", rng.normal(size=n) + 1j * rng.normal(size=n), "complex normal cell values"))
    items.append(("constant_one", np.ones(n), "f = 1"))
    steps = rng.uniform(-2.0, 2.0, 16)
    items.append(("staircase_level4", np.repeat(steps, 2 ** (level - 4)), "uniform random heights on level-4 cells"))
    return [CorpusItem(name, PCFunction(level, vals), desc) for name, vals, desc in items]


def load_corpus(spec: str | Path | None, seed: int = 0, level: int = DEFAULT_LEVEL) -> list[CorpusItem]:
    """Corpus by name (``"default"``) or from a JSON file.

    The file holds ``{"items": [{"name": ..., "level": m, "values": [[re, im], ...]}, ...]}``.
    """
    if spec is None or spec == "default":
        return default_corpus(seed, level)
    p = Path(spec)
    if not p.is_file():
        raise ValueError(f"unknown corpus {spec!r}: not 'default' and not a file")
    data = json.loads(p.read_text())
    return [CorpusItem(d["name"], PCFunction.from_dict(d), d.get("description", "")) for d in data["items"]]


def save_corpus(items: list[CorpusItem], path: str | Path) -> None:
    data = {"items": [{"name": it.name, "description": it.description, **it.f.to_dict()} for it in items]}
    Path(path).write_text(json.dumps(data))
