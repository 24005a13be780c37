import math
from typing import List, Optional

from pydantic import BaseModel, computed_field


class OracleReport(BaseModel):
    """
    One fast-path value checked against its brute-force reference.

    Deviations are derived from the two values on access. Entries without an
    oracle value are recorded as reference data and always pass.
    """
    quantity: str
    fast_value: float
    oracle_value: Optional[float] = None
    tolerance: float
    relative: bool = False
    singular_value_gap: Optional[float] = None
    note: Optional[str] = None

    @computed_field
    @property
    def absolute_deviation(self) -> Optional[float]:
        if self.oracle_value is None:
            return None
        return abs(self.fast_value - self.oracle_value)

    @computed_field
    @property
    def relative_deviation(self) -> Optional[float]:
        if self.oracle_value is None:
            return None
        scale = abs(self.oracle_value)
        if scale == 0.0:
            return 0.0 if self.fast_value == 0.0 else math.inf
        return abs(self.fast_value - self.oracle_value) / scale

    @computed_field
    @property
    def passed(self) -> bool:
        if self.oracle_value is None:
            return True
        deviation = self.relative_deviation if self.relative else self.absolute_deviation
        return bool(deviation <= self.tolerance)


class VerificationReport(BaseModel):
    suite: str
    n_passive: int
    reports: List[OracleReport]

    @computed_field
    @property
    def passed(self) -> bool:
        return all(report.passed for report in self.reports)

    @computed_field
    @property
    def failures(self) -> List[str]:
        return [report.quantity for report in self.reports if not report.passed]
