"""Run configuration for the experiment suites."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path


class ConfigError(ValueError):
    """A configuration that violates a hypothesis of the checks it drives."""


def _default_sequences() -> list[dict]:
    return [
        {"kind": "lacunary", "q": 2, "n1": 10},
        {"kind": "lacunary", "q": 3, "n1": 10},
        {"kind": "delta_growth", "delta": 0.3, "n1": 10},
    ]


@dataclass(frozen=True)
class RunConfig:
    """All knobs of a run.  ``lambda_values`` are multiples of the mean of ``|f|``."""

    grid_level: int = 10
    corpus: str = "default"
    corpus_level: int = 8
    lambda_values: tuple[float, ...] = (1.5, 2.0, 4.0, 8.0, 16.0, 32.0)
    sequences: tuple[dict, ...] = field(default_factory=lambda: tuple(_default_sequences()))
    orthogonality_q: tuple[float, ...] = (2.6, 3.0, 4.0)
    orthogonality_cap: int = 1 << 16
    beta: int = 9
    gamma: int = 7
    delta: float = 0.3
    N_sweep: tuple[int, ...] = (4, 8, 16, 32)
    N_max: int = 64
    # quarter-octave multiples 2**(k/4), k = 1..8
    replacement_lambdas: tuple[float, ...] = tuple(2.0 ** (k / 4) for k in range(1, 9))
    log_base: str = "natural"
    seed: int = 0
    output_dir: str = "cesarolab-out"
    workers: int = 1

    def __post_init__(self):
        for name in ("lambda_values", "sequences", "orthogonality_q", "N_sweep", "replacement_lambdas"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        self.validate()

    def validate(self) -> None:
        if self.gamma % 2 == 0 or self.gamma <= 5:
            raise ConfigError(f"gamma must be an odd integer > 5 (got {self.gamma})")
        if self.beta % 2 == 0 or self.beta <= self.gamma:
            raise ConfigError(f"beta must be an odd integer > gamma (got beta={self.beta}, gamma={self.gamma})")
        if self.beta <= 7:
            raise ConfigError(f"beta must be an odd integer > 7 for the replacement and orthogonality checks (got {self.beta})")
        if not 0 < self.delta < 0.5:
            raise ConfigError(f"delta must lie in (0, 1/2) (got {self.delta})")
        if self.grid_level < 1 or self.grid_level > 16:
            raise ConfigError(f"grid_level must lie in 1..16 (got {self.grid_level})")
        if self.log_base not in ("natural", "two"):
            raise ConfigError(f"log_base must be 'natural' or 'two' (got {self.log_base!r})")
        if any(q <= 2.5 for q in self.orthogonality_q):
            raise ConfigError(f"orthogonality needs lacunary ratio q > 2.5 (got {list(self.orthogonality_q)})")
        if any(lam <= 1 for lam in self.lambda_values + self.replacement_lambdas):
            raise ConfigError("lambda multiples must exceed 1 so that lambda > ||f||_1 / (2 pi)")
        if list(self.N_sweep) != sorted(set(self.N_sweep)) or min(self.N_sweep) < 1:
            raise ConfigError("N_sweep must be strictly increasing positive integers")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    def to_dict(self) -> dict:
        d = asdict(self)
        for k, v in d.items():
            if isinstance(v, tuple):
                d[k] = list(v)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> RunConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_file(cls, path: str | Path) -> RunConfig:
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(data)

    def with_overrides(self, **kw) -> RunConfig:
        return replace(self, **{k: v for k, v in kw.items() if v is not None})
