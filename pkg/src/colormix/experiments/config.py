"""Experiment configuration, loaded from JSON and overridable from the CLI."""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

log = logging.getLogger(__name__)

PROFILES = ("explore", "assumption")


@dataclass
class ExperimentConfig:
    seed: int = 1
    seeds: list[int] | None = None
    n: int = 500
    d: float = 2.0
    q: int = 28
    alpha: float = 2.1
    beta: float = 23.0
    profile: str = "explore"
    radii: list[int] = field(default_factory=lambda: [1, 2, 3, 4, 5, 6])
    t_values: list[int] = field(default_factory=lambda: [2, 3, 4])
    samples: int = 50
    instances: int = 200
    max_branches: int = 4000
    node_cap: int = 1_000_000
    steps: int = 1_000_000
    thin: int = 100
    gadget_q: int = 3
    out: str | None = None

    def __post_init__(self) -> None:
        if self.profile not in PROFILES:
            raise ValueError(f"profile must be one of {PROFILES}, got {self.profile!r}")
        if self.n < 1 or self.q < 1 or self.d < 0:
            raise ValueError("n and q must be positive and d non-negative")
        if self.samples < 0 or self.instances < 0:
            raise ValueError("sample and instance counts must be non-negative")
        problems = self.assumption_problems()
        if problems:
            msg = "; ".join(problems)
            if self.profile == "assumption":
                raise ValueError(f"assumption profile violated: {msg}")
            log.warning("parameters outside the assumption regime: %s", msg)

    def assumption_problems(self) -> list[str]:
        out = []
        if self.alpha <= 2:
            out.append(f"alpha={self.alpha} must exceed 2")
        if self.beta < 23:
            out.append(f"beta={self.beta} must be at least 23")
        if self.q < self.alpha * self.d + self.beta:
            out.append(f"q={self.q} is below alpha*d+beta={self.alpha * self.d + self.beta:g}")
        return out

    @property
    def seed_list(self) -> list[int]:
        return list(self.seeds) if self.seeds is not None else [self.seed]

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValueError(f"unknown config keys: {unknown}")
        return cls(**data)

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))
