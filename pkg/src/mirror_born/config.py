"""JSON run configuration and run summary models."""

from __future__ import annotations

import json
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from mirror_born.rng import MASK64

COMMANDS = ("packet", "mirror-check", "born", "measure", "two-ball", "suite")
Complex = tuple[float, float]


class ConfigError(ValueError):
    pass


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class GridConfig(_Strict):
    n: int = 1024
    x_min: float = -20.0
    x_max: float = 20.0

    @field_validator("n")
    @classmethod
    def _even(cls, v):
        if v < 8 or v % 2:
            raise ValueError("must be an even integer >= 8")
        return v

    @model_validator(mode="after")
    def _bounds(self):
        if not self.x_max > self.x_min:
            raise ValueError("grid.x_max must exceed grid.x_min")
        return self


class PacketConfig(_Strict):
    x0: float
    p0: float
    sigma_x: float = Field(gt=0)
    m: float = Field(default=1.0, gt=0)
    t: float = 0.0


class TwoBallSection(_Strict):
    bins: int = Field(ge=2)
    p1: list[float]
    p2: list[float]
    n: int = Field(ge=1)

    @model_validator(mode="after")
    def _tables(self):
        for name in ("p1", "p2"):
            p = getattr(self, name)
            if len(p) != self.bins:
                raise ValueError(f"two_ball.{name} must have {self.bins} entries, got {len(p)}")
            if any(v < 0 for v in p):
                raise ValueError(f"two_ball.{name} entries must be non-negative")
            if abs(sum(p) - 1.0) > 1e-12:
                raise ValueError(f"two_ball.{name} must sum to 1, got {sum(p)!r}")
        return self


class RunConfig(_Strict):
    command: Literal["packet", "mirror-check", "born", "measure", "two-ball", "suite"]
    grid: GridConfig = GridConfig()
    packet: Optional[PacketConfig] = None
    operator: Optional[list[list[Complex]]] = None
    state: Optional[list[Complex]] = None
    two_ball: Optional[TwoBallSection] = None
    n_samples: int = Field(default=100_000, ge=1)
    seed: int = Field(default=1, ge=0, le=MASK64)
    tolerance: float = Field(default=1e-8, ge=0)

    @model_validator(mode="after")
    def _sections(self):
        needs = {
            "packet": ("packet",),
            "mirror-check": ("packet",),
            "born": ("operator", "state"),
            "measure": ("operator", "state"),
            "two-ball": ("two_ball",),
        }.get(self.command, ())
        for key in needs:
            if getattr(self, key) is None:
                raise ValueError(f"{key}: required for command {self.command!r}")
        if self.packet is not None and self.command in ("packet", "mirror-check"):
            lo = self.packet.x0 - 8 * self.packet.sigma_x
            hi = self.packet.x0 + 8 * self.packet.sigma_x
            if lo < self.grid.x_min or hi > self.grid.x_max:
                raise ValueError(
                    f"packet.sigma_x: support [{lo:g}, {hi:g}] exceeds grid [{self.grid.x_min:g}, {self.grid.x_max:g}]"
                )
        if self.operator is not None:
            k = len(self.operator)
            if k == 0 or any(len(row) != k for row in self.operator):
                raise ValueError("operator: must be a non-empty square k x k array of [re, im]")
            for i in range(k):
                for j in range(k):
                    a, b = self.operator[i][j], self.operator[j][i]
                    if abs(a[0] - b[0]) > 1e-12 or abs(a[1] + b[1]) > 1e-12:
                        raise ValueError(f"operator: not Hermitian at [{i}][{j}]")
        if self.state is not None:
            if self.operator is not None and len(self.state) != len(self.operator):
                raise ValueError(f"state: length {len(self.state)} does not match operator dimension {len(self.operator)}")
            nrm = sum(re * re + im * im for re, im in self.state) ** 0.5
            if abs(nrm - 1.0) > 1e-10:
                raise ValueError(f"state: not normalized (norm {nrm!r})")
        return self

    def operator_matrix(self):
        return [[complex(re, im) for re, im in row] for row in self.operator]

    def state_vector(self):
        return [complex(re, im) for re, im in self.state]


def _format_errors(err: ValidationError) -> str:
    lines = []
    for e in err.errors():
        path = ".".join(str(part) for part in e["loc"])
        msg = e["msg"].removeprefix("Value error, ")
        lines.append(f"{path}: {msg}" if path else msg)
    return "; ".join(lines)


def parse_config(text: str | bytes, **overrides) -> RunConfig:
    """Validate a JSON config document; ``overrides`` (e.g. from CLI flags) win over file values."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    data.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(_format_errors(exc)) from None


class RunSummary(BaseModel):
    model_config = ConfigDict(extra="forbid")

    command: str
    config: dict[str, Any]
    metrics: dict[str, Any]
    wall_time: float
    files: list[str]
    version: str
