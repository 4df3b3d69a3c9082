"""Run configuration: JSON parsing, validation, defaults."""

from __future__ import annotations

import json
from typing import Literal, Optional

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from .constants import PhysicalConstants
from .exceptions import ConfigurationError
from .hamiltonian import CQHO, GridPolicy, Potential, SlantWell, SymmetricHO

EmitKind = Literal["sweep", "wavefunctions", "lambda", "trk", "threelevel"]


class RunConfig(BaseModel):
    """All knobs of a sweep run.  Unknown keys are rejected.

    Alphas come either as an explicit ``alphas`` list or as an
    ``alpha_start``/``alpha_stop``/``alpha_step`` descent; with neither,
    the run is the single point alpha = 1.
    """

    model_config = ConfigDict(extra="forbid")

    potential: Literal["cqho", "slantwell", "symmetric-ho"] = "cqho"
    omega: float = Field(default=1.0, gt=0.0)
    slope: float = Field(default=1.0, gt=0.0)
    alphas: Optional[list[float]] = None
    alpha_start: Optional[float] = None
    alpha_stop: Optional[float] = None
    alpha_step: Optional[float] = None
    n_grid: int = Field(default=3000, ge=64)
    domain_width: float = Field(default=16.0, gt=0.0)
    k_states: int = Field(default=20, ge=3)
    k_sum: int = Field(default=40, ge=2)
    calib_tol: float = Field(default=1e-8, gt=0.0)
    field_step: float = Field(default=1e-3, gt=0.0)
    tail_tol: float = Field(default=1e-8, gt=0.0)
    max_widenings: int = Field(default=3, ge=0)
    n_max: int = Field(default=4096, ge=64)
    output: Optional[str] = None
    emit: list[EmitKind] = Field(default_factory=lambda: ["sweep"])
    jobs: int = Field(default=1, ge=1)

    @field_validator("alphas")
    @classmethod
    def _alphas_in_range(cls, value):
        if value is not None:
            if not value:
                raise ValueError("list must not be empty")
            bad = [a for a in value if not 0.5 < a <= 1.0]
            if bad:
                raise ValueError(f"alpha must lie in (0.5, 1], got {bad}")
        return value

    @field_validator("alpha_start", "alpha_stop")
    @classmethod
    def _alpha_bound_in_range(cls, value):
        if value is not None and not 0.5 < value <= 1.0:
            raise ValueError(f"alpha must lie in (0.5, 1], got {value}")
        return value

    @field_validator("alpha_step")
    @classmethod
    def _step_positive(cls, value):
        if value is not None and value <= 0.0:
            raise ValueError("step must be strictly positive")
        return value

    @model_validator(mode="after")
    def _check_alpha_style(self) -> "RunConfig":
        problems = []
        sweep_fields = (self.alpha_start, self.alpha_stop, self.alpha_step)
        if self.alphas is not None and any(f is not None for f in sweep_fields):
            problems.append(
                "alphas: give either an explicit list or start/stop/step, not both"
            )
        if any(f is not None for f in sweep_fields) and not all(
            f is not None for f in sweep_fields
        ):
            problems.append(
                "alpha_start/alpha_stop/alpha_step must be given together"
            )
        if problems:
            raise ValueError("; ".join(problems))
        return self

    def alpha_list(self) -> list[float]:
        """Resolved alpha values, in run order."""
        if self.alphas is not None:
            return list(self.alphas)
        if self.alpha_start is None:
            return [1.0]
        start, stop, step = self.alpha_start, self.alpha_stop, self.alpha_step
        values = []
        direction = 1.0 if stop >= start else -1.0
        count = int(round(abs(stop - start) / step)) + 1
        for i in range(count):
            value = start + direction * i * step
            # Tame accumulated float drift so sweeps hit round alphas.
            values.append(round(value, 12))
        return values

    def make_potential(self) -> Potential:
        if self.potential == "cqho":
            return CQHO(omega=self.omega)
        if self.potential == "slantwell":
            return SlantWell(slope=self.slope)
        return SymmetricHO(omega=self.omega)

    def grid_policy(self) -> GridPolicy:
        return GridPolicy(
            width=self.domain_width,
            n=self.n_grid,
            tail_tol=self.tail_tol,
            max_widenings=self.max_widenings,
            n_max=max(self.n_max, self.n_grid),
        )

    def constants(self) -> PhysicalConstants:
        return PhysicalConstants()


def _format_pydantic_errors(exc: ValidationError) -> list[str]:
    messages = []
    for err in exc.errors():
        loc = ".".join(str(part) for part in err["loc"]) or "config"
        msg = err["msg"]
        if err["type"] == "extra_forbidden":
            msg = "unknown key"
        messages.append(f"{loc}: {msg}")
    return messages


def validate_config(raw: str) -> RunConfig:
    """Parse a JSON document into a RunConfig, reporting every violation.

    An empty or whitespace-only document yields the documented defaults.
    """
    text = raw.strip()
    if not text:
        data = {}
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigurationError([f"config: invalid JSON ({exc})"]) from exc
    if not isinstance(data, dict):
        raise ConfigurationError(["config: top level must be a JSON object"])
    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigurationError(_format_pydantic_errors(exc)) from exc


def load_config(path: str) -> RunConfig:
    with open(path, "r", encoding="utf-8") as handle:
        return validate_config(handle.read())
