"""Analysis configuration: every knob that influences a report, serialized into it."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from fractions import Fraction

from .fibers import EscapeSchedule, parse_region
from .maps import SamplingConfig


@dataclass(frozen=True)
class AnalysisConfig:
    seed: int = 42
    samples: int = 500  # fiber-scan targets
    region: str | None = None  # "-20:20" or per-axis "a:b,c:d"; None = [-20, 20]^n
    grid: int = 16  # image probe cells per axis
    lift_samples: int = 20
    escape_start: str = "1/10"
    escape_shrink: int = 100
    escape_growth: int = 4
    escape_stages: int = 4
    certificate_search: bool = True
    positivity_samples: int = 10000
    positivity_bound: int = 10
    out: str | None = None

    def schedule(self) -> EscapeSchedule:
        return EscapeSchedule(Fraction(self.escape_start), self.escape_shrink, self.escape_growth, self.escape_stages)

    def sampling(self) -> SamplingConfig:
        return SamplingConfig(bound=Fraction(self.positivity_bound), samples=self.positivity_samples,
                              search=self.certificate_search, seed=self.seed)

    def region_for(self, n: int):
        return parse_region(self.region, n)

    def to_json(self) -> dict:
        out = asdict(self)
        out.pop("out")  # where a report goes is not part of what it says
        return out

    @classmethod
    def from_json(cls, data: dict) -> "AnalysisConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown configuration keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path: str) -> "AnalysisConfig":
        with open(path) as fh:
            return cls.from_json(json.load(fh))
