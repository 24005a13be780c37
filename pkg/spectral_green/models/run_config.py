import hashlib
import json
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from spectral_green.models.exceptions.known_exceptions import InvalidGridException, InvalidRunConfigException
from spectral_green.models.params import ModelParams


class GridScale(str, Enum):
    LINEAR = "linear"
    LOG = "log"


class GridSpec(BaseModel):
    """
    Sweep grid written as `min:max:count`, optionally `min:max:count:log`.

    Grids are strictly increasing; a single point needs min == max.
    """
    model_config = ConfigDict(extra='forbid', frozen=True)

    start: float
    stop: float
    count: int = Field(ge=1)
    scale: GridScale = GridScale.LINEAR

    @model_validator(mode='after')
    def _monotone(self):
        if self.count == 1 and self.start != self.stop:
            raise ValueError("a one-point grid needs min == max")
        if self.count > 1 and not self.stop > self.start:
            raise ValueError(f"grid must be strictly increasing, got {self.start}:{self.stop}")
        if self.scale == GridScale.LOG and self.start <= 0:
            raise ValueError("log grids need a positive start")
        return self

    @classmethod
    def parse(cls, text: str) -> 'GridSpec':
        parts = text.split(':')
        if len(parts) not in (3, 4):
            raise InvalidGridException(f"Grid '{text}' is not of the form min:max:count[:log]")
        try:
            count = float(parts[2])
            if not count.is_integer():
                raise InvalidGridException(f"Grid count must be an integer, got {parts[2]}")
            return cls(start=float(parts[0]), stop=float(parts[1]), count=int(count),
                       scale=GridScale(parts[3]) if len(parts) == 4 else GridScale.LINEAR)
        except (ValueError, ValidationError) as e:
            raise InvalidGridException(f"Invalid grid '{text}': {e}")

    def values(self) -> np.ndarray:
        if self.scale == GridScale.LOG:
            return np.logspace(np.log10(self.start), np.log10(self.stop), self.count)
        return np.linspace(self.start, self.stop, self.count)


class VerifyTolerances(BaseModel):
    """Pass thresholds of the verification suites"""
    model_config = ConfigDict(extra='forbid', frozen=True)

    steady_state: float = 1e-10
    dyson: float = 1e-10
    commutation: float = 1e-10
    rational: float = 1e-7
    projection: float = 1e-10
    polynomial: float = 1e-8
    reduced: float = 1e-8
    crosscheck: float = 1e-9
    analytic_state: float = 1e-6
    poles: float = 1e-6
    moments: float = 1e-3

    @field_validator('*')
    @classmethod
    def _positive(cls, value):
        if value <= 0:
            raise ValueError("tolerances must be positive")
        return value


class RunConfig(BaseModel):
    """Everything one CLI command needs; its canonical JSON is hashed into the CSV provenance."""
    model_config = ConfigDict(extra='forbid', frozen=True)

    command: str
    params: Optional[ModelParams] = None
    method: Optional[str] = None
    grid: Optional[GridSpec] = None
    figure_id: Optional[str] = None
    n_values: List[int] = []
    suite: Optional[str] = None
    output: Optional[Path] = None
    tolerances: VerifyTolerances = VerifyTolerances()

    def canonical_json(self) -> str:
        data = self.model_dump(mode='json', by_alias=True, exclude={'output'})
        return json.dumps(data, sort_keys=True, separators=(',', ':'))

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode('utf-8')).hexdigest()


def load_model_params(path: Path) -> ModelParams:
    """Read a model parameter JSON document; unknown keys and non-positive rates are rejected"""
    try:
        with open(path, 'r', encoding='utf-8') as handle:
            data = json.load(handle)
    except json.JSONDecodeError as e:
        raise InvalidRunConfigException(f"{path} is not valid JSON", original_exception=e)
    except OSError as e:
        raise InvalidRunConfigException(f"Cannot read {path}", original_exception=e)
    try:
        return ModelParams.model_validate(data)
    except ValidationError as e:
        raise InvalidRunConfigException(f"Invalid model parameters in {path}: {e}", original_exception=e)


def parse_overrides(items: List[str]) -> Dict[str, float]:
    """`name=value` pairs from the command line"""
    overrides = {}
    for item in items:
        name, separator, value = item.partition('=')
        if not separator:
            raise InvalidRunConfigException(f"Override '{item}' is not of the form name=value")
        try:
            overrides[name.strip()] = float(value)
        except ValueError as e:
            raise InvalidRunConfigException(f"Override '{item}' has a non-numeric value", original_exception=e)
    return overrides
