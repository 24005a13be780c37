from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class GreenKind(str, Enum):
    DRIVEN = "driven"
    NON_DRIVEN = "non_driven"


class SteadyVariant(str, Enum):
    DIRECT = "direct"
    DYSON = "dyson"
    SERIES = "series"
    POLYNOMIAL = "polynomial"


class SteadyMethod(BaseModel):
    """Route used by steady_state; `order` is the truncation order of the series route."""
    model_config = ConfigDict(frozen=True)

    variant: SteadyVariant
    order: Optional[int] = Field(default=None, gt=0)

    @model_validator(mode='after')
    def _series_order(self):
        if self.variant == SteadyVariant.SERIES and self.order is None:
            raise ValueError("series steady state needs a truncation order")
        return self

    @classmethod
    def direct(cls) -> 'SteadyMethod':
        return cls(variant=SteadyVariant.DIRECT)

    @classmethod
    def dyson(cls) -> 'SteadyMethod':
        return cls(variant=SteadyVariant.DYSON)

    @classmethod
    def series(cls, order: int) -> 'SteadyMethod':
        return cls(variant=SteadyVariant.SERIES, order=order)

    @classmethod
    def polynomial(cls) -> 'SteadyMethod':
        return cls(variant=SteadyVariant.POLYNOMIAL)


class Representation(str, Enum):
    FULL = "full"
    DICKE = "dicke"


class SweepMethod(str, Enum):
    ANALYTIC = "analytic"
    REDUCED = "reduced"
    FULL = "full"


class PoleMethod(str, Enum):
    ANALYTIC = "analytic"
    PENCIL = "pencil"
