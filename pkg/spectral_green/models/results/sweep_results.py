from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from spectral_green.models.exceptions.known_exceptions import ShapeMismatchException


class SweepResult(BaseModel):
    """Named columns sampled on one abscissa grid (ζ in rad/s, ξ or γ)."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    grid_name: str
    grid: np.ndarray
    columns: Dict[str, np.ndarray]
    metadata: Dict[str, float] = {}
    notes: List[str] = []

    @field_validator('grid', mode='before')
    @classmethod
    def _float_grid(cls, value):
        return np.asarray(value, dtype=float)

    @field_validator('columns', mode='before')
    @classmethod
    def _float_columns(cls, value):
        return {name: np.asarray(column, dtype=float) for name, column in value.items()}

    @model_validator(mode='after')
    def _same_length(self):
        for name, column in self.columns.items():
            if column.shape != self.grid.shape:
                raise ShapeMismatchException(f"Column {name} has shape {column.shape}, grid has {self.grid.shape}")
        return self

    def column(self, name: str) -> np.ndarray:
        return self.columns[name]

    def argmax(self, name: str) -> Optional[float]:
        column = self.columns[name]
        if column.size == 0:
            return None
        return float(self.grid[int(np.argmax(column))])
