"""Run configuration: a JSON document validated by pydantic models.

Unknown keys are rejected everywhere so that typos fail fast.
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..errors import ConfigError

Experiment = Literal[
    "simulate",
    "increment-sweep",
    "window-scaling",
    "bilinear",
    "strichartz",
    "cutoff-scaling",
    "growth",
]
EXPERIMENTS: tuple[str, ...] = Experiment.__args__


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class GridConfig(_Strict):
    L: float = Field(32 * math.pi, gt=0)
    M: int = Field(1024, ge=4)

    @field_validator("M")
    @classmethod
    def _even(cls, v):
        if v % 2:
            raise ValueError("M must be even")
        return v


class SolverParams(_Strict):
    dt: float = Field(1e-3, gt=0)
    T: float = Field(1.0, gt=0)
    record_stride: int = Field(1, ge=1)
    dealias: bool = True

    @model_validator(mode="after")
    def _span(self):
        if self.T < self.dt:
            raise ValueError("T must be at least dt")
        return self


class PhysicsConfig(_Strict):
    s: float = Field(0.9, gt=0.5, le=1.0)
    N: float = Field(16.0, gt=0)
    eps_b: float = Field(0.1, gt=0)
    eps_m: float = Field(0.01, gt=0)


class DataConfig(_Strict):
    kind: Literal["soliton", "rough", "zero"] = "rough"
    amp: float = Field(1.0, ge=0)
    eps: float = Field(0.01, gt=0)
    a: float = Field(1.0, gt=0)
    c: float = Field(0.5, gt=-1, lt=1)
    x0: Optional[float] = None


class IncrementSweepConfig(_Strict):
    Ns: list[float] = Field(default_factory=lambda: [8.0, 16.0, 32.0, 64.0], min_length=1)
    delta: float = Field(0.5, gt=0)
    include_control: bool = True
    sample_stride: int = Field(10, ge=1)


class WindowScalingConfig(_Strict):
    amplitudes: list[float] = Field(default_factory=lambda: [0.5, 1.0, 2.0], min_length=1)
    c2: Optional[float] = Field(None, gt=0)


class GrowthConfig(_Strict):
    sample_every: float = Field(0.5, gt=0)
    slack: float = Field(0.5, ge=0)
    max_ratio: float = Field(10.0, gt=1)


class EstimatesConfig(_Strict):
    trials: int = Field(50, ge=1)
    octaves: list[int] = Field(default_factory=lambda: [0, 1, 2, 3, 4, 5], min_length=1)
    # None selects the per-tester geometry in harness.experiments.TESTER_GEOMETRY
    window_delta: Optional[float] = Field(None, gt=0, le=1)
    profile: Literal["gaussian-bump", "random-band"] = "gaussian-bump"
    L: Optional[float] = Field(None, gt=0)
    width: float = Field(2.0, gt=0)
    variant: Literal["2.1", "2.2", "2.3", "2.5", "2.6"] = "2.1"
    wave: Literal["plus", "minus"] = "plus"
    separation: int = Field(2, ge=2)
    p: float = Field(6.0, ge=2, le=6)
    max_slope: float = 0.1
    max_spread: float = 4.0


class CutoffScalingConfig(_Strict):
    b: float = Field(0.4, ge=0, lt=0.5)
    b_prime: float = Field(0.2, ge=0, lt=0.5)
    deltas: list[float] = Field(default_factory=lambda: [2.0**-j for j in range(6)], min_length=3)
    profile: Literal["free", "critical"] = "critical"
    margin: float = Field(0.02, ge=0)
    dt: float = Field(1.0 / 2048, gt=0)
    tolerance: float = Field(0.15, gt=0)

    @model_validator(mode="after")
    def _order(self):
        if self.b_prime > self.b:
            raise ValueError("b_prime must not exceed b")
        return self


class RunConfig(_Strict):
    experiment: Experiment = "simulate"
    seed: int = Field(0, ge=0, lt=2**64)
    threads: int = Field(1, ge=1)
    snapshot_every: int = Field(0, ge=0)
    grid: GridConfig = GridConfig()
    solver: SolverParams = SolverParams()
    physics: PhysicsConfig = PhysicsConfig()
    data: DataConfig = DataConfig()
    increment_sweep: IncrementSweepConfig = IncrementSweepConfig()
    window_scaling: WindowScalingConfig = WindowScalingConfig()
    growth: GrowthConfig = GrowthConfig()
    estimates: EstimatesConfig = EstimatesConfig()
    cutoff_scaling: CutoffScalingConfig = CutoffScalingConfig()

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    def with_overrides(self, **changes) -> "RunConfig":
        data = self.model_dump()
        data.update({k: v for k, v in changes.items() if v is not None})
        return validate_config(data)


def _first_key(err: ValidationError) -> str:
    loc = err.errors()[0].get("loc", ())
    return ".".join(str(p) for p in loc) or "<root>"


def validate_config(data) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    try:
        return RunConfig.model_validate(data)
    except ValidationError as err:
        first = err.errors()[0]
        key = _first_key(err)
        raise ConfigError(f"invalid config key '{key}': {first['msg']}", key=key) from None


def parse_config(text: str) -> RunConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(f"config is not valid JSON: {err}") from None
    return validate_config(data)


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}") from None
    return parse_config(text)
