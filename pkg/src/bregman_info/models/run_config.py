from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from bregman_info.constants import (
    DEFAULT_CLUSTER_REL_TOL,
    DEFAULT_MAX_ITERS,
    DEFAULT_METRIC_SCALES,
    DEFAULT_RESTARTS,
    DIVERGENCE_NAMES,
    GENERATOR_NAMES,
)


class CommandName(str, Enum):
    INFO = 'info'
    CERTIFY = 'certify'
    MI = 'mi'
    CLUSTER = 'cluster'
    METRIC_CHECK = 'metric-check'


class LogBase(str, Enum):
    NAT = 'nat'


def parse_params(values: Optional[List[str]]) -> Dict[str, str]:
    """Turn repeated ``key=value`` flags into a dict; later keys win."""
    params = {}
    for item in values or []:
        key, separator, value = item.partition('=')
        if not separator or not key.strip():
            raise ValueError(f"parameter {item!r} is not of the form key=value")
        params[key.strip()] = value.strip()
    return params


class GeneratorSpec(BaseModel):
    name: str = Field(description=f"One of {', '.join(GENERATOR_NAMES)}")
    params: Dict[str, str] = Field(default_factory=dict,
                                   description="dim, domain (full_space, positive_orthant, simplex) or W (CSV path)")

    @field_validator('name')
    @classmethod
    def validate_name(cls, value):
        if value not in GENERATOR_NAMES:
            raise ValueError(f"unknown generator {value!r}; known generators: {', '.join(GENERATOR_NAMES)}")
        return value


class DivergenceSpec(BaseModel):
    name: str = Field(description=f"One of {', '.join(DIVERGENCE_NAMES)}")
    params: Dict[str, str] = Field(default_factory=dict, description="scale, eps or W (CSV path)")

    @field_validator('name')
    @classmethod
    def validate_name(cls, value):
        if value not in DIVERGENCE_NAMES:
            raise ValueError(f"unknown divergence {value!r}; known divergences: {', '.join(DIVERGENCE_NAMES)}")
        return value


class RunConfig(BaseModel):
    command: CommandName
    generator: Optional[GeneratorSpec] = None
    divergence: DivergenceSpec = Field(default_factory=lambda: DivergenceSpec(name='bregman-of-generator'))
    input: Optional[Path] = Field(default=None, description="CSV dataset, joint distribution or (x, delta) pair")
    weights_column: Optional[str] = Field(default=None, description="Header name or 0-based index of the weight column")
    seed: int = Field(ge=0)
    trials: int = Field(ge=1)
    tol: float = Field(gt=0)
    workers: int = Field(default=1, ge=1)
    sampler_radius: float = Field(gt=0)
    k: Optional[int] = Field(default=None, ge=1)
    max_iters: int = Field(default=DEFAULT_MAX_ITERS, ge=0)
    cluster_rel_tol: float = Field(default=DEFAULT_CLUSTER_REL_TOL, ge=0)
    restarts: int = Field(default=DEFAULT_RESTARTS, ge=1)
    scales: List[float] = Field(default_factory=lambda: list(DEFAULT_METRIC_SCALES))
    output: Optional[Path] = Field(default=None, description="Report path; stdout when absent")
    log_base: LogBase = LogBase.NAT

    @field_validator('scales')
    @classmethod
    def validate_scales(cls, value):
        if not value or any(scale <= 0 for scale in value):
            raise ValueError("metric scales must be positive")
        return value

    @model_validator(mode='after')
    def validate_command_inputs(self):
        if self.command != CommandName.MI and self.generator is None:
            raise ValueError(f"command {self.command.value} needs --generator")
        if self.command in (CommandName.INFO, CommandName.MI, CommandName.CLUSTER, CommandName.METRIC_CHECK) \
                and self.input is None:
            raise ValueError(f"command {self.command.value} needs --input")
        if self.input is not None and not self.input.is_file():
            raise ValueError(f"input file {self.input} does not exist")
        if self.command == CommandName.CLUSTER and self.k is None:
            raise ValueError("command cluster needs --k")
        return self
