"""JSON experiment configuration.

Lengths are in meters. Unknown keys are rejected at every level, and the
document must carry ``"schema": 1``.
"""

import json
from pathlib import Path
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .em_core import Wavenumber
from .geometry import DEFAULT_MARGIN, SurfaceSpec, UserLayout

EXPERIMENTS = ("feasibility", "correlation_sweep", "eigen_spectrum", "capacity_sweep", "cluster_demo")
CHANNEL_EXPERIMENTS = ("feasibility", "eigen_spectrum", "capacity_sweep", "cluster_demo")


class ConfigError(ValueError):
    """Config file could not be parsed or validated."""


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class SurfaceModel(_Strict):
    n_x: int = Field(ge=1)
    n_y: int = Field(ge=1)
    dx: float = Field(gt=0)
    dy: float = Field(gt=0)
    patch_wx: Optional[float] = Field(default=None, gt=0)
    patch_wy: Optional[float] = Field(default=None, gt=0)
    center: Tuple[float, float, float] = (0.0, 0.0, 0.0)

    @model_validator(mode="after")
    def _widths_fit_pitch(self):
        if self.patch_wx is not None and self.patch_wx > self.dx:
            raise ValueError("patch_wx must not exceed dx")
        if self.patch_wy is not None and self.patch_wy > self.dy:
            raise ValueError("patch_wy must not exceed dy")
        return self

    def to_spec(self) -> SurfaceSpec:
        # element widths default to the full pitch
        return SurfaceSpec(self.n_x, self.n_y, self.dx, self.dy,
                           self.patch_wx if self.patch_wx is not None else self.dx,
                           self.patch_wy if self.patch_wy is not None else self.dy,
                           self.center)


class CorrelationModel(_Strict):
    spacings_over_lambda: List[float] = Field(default=[0.1, 0.2, 0.4], min_length=1)
    n_max: int = Field(default=50, ge=2)


class ExperimentConfig(_Strict):
    schema_version: Literal[1] = Field(alias="schema")
    experiment: Optional[Literal[EXPERIMENTS]] = None
    lambda_m: float = Field(gt=0)
    tx: Optional[SurfaceModel] = None
    users: List[SurfaceModel] = []
    snr_db_grid: List[float] = [0, 5, 10, 15, 20, 25, 30]
    polarization_modes: List[Literal["TP", "DP", "SP", "TP_clustered"]] = ["TP", "DP", "SP"]
    correlation: CorrelationModel = CorrelationModel()
    feasibility_margin: float = Field(default=DEFAULT_MARGIN, gt=0, le=1)
    output: Optional[str] = None

    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)

    @property
    def wavenumber(self) -> Wavenumber:
        return Wavenumber(self.lambda_m)

    def tx_spec(self) -> SurfaceSpec:
        return self.tx.to_spec()

    def layout(self) -> UserLayout:
        tx = self.tx_spec()
        return UserLayout(tuple(u.to_spec() for u in self.users), tx.center)

    def check_for(self, experiment: str):
        """Validate the fields ``experiment`` needs; the config's own
        ``experiment`` field is only a default and may be overridden."""
        if experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {experiment!r}")
        if experiment in CHANNEL_EXPERIMENTS:
            if self.tx is None:
                raise ConfigError(f"field 'tx': required for {experiment}")
            if not self.users:
                raise ConfigError(f"field 'users': {experiment} needs at least one user")
            try:
                self.layout()
            except ValueError as exc:
                raise ConfigError(f"field 'users': {exc}") from None

    def echo(self) -> dict:
        return self.model_dump(mode="json", by_alias=True)


def parse_config(data: dict) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        lines = []
        for err in exc.errors():
            loc = ".".join(str(p) for p in err["loc"]) or "<root>"
            lines.append(f"field '{loc}': {err['msg']}")
        raise ConfigError("invalid config:\n  " + "\n  ".join(lines)) from None


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: JSON syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return parse_config(data)
