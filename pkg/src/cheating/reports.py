"""Result models for cheating simulations."""

from typing import Dict, Optional

from pydantic import BaseModel, Field


class CheatReport(BaseModel):
    """Outcome of a cheating simulation."""

    strategy: str
    estimate: float = Field(ge=0.0, le=1.0)
    sigma: float = Field(ge=0.0)
    closed_form: Optional[float] = None
    detection: Optional[float] = None
    runs: int = Field(ge=1)
    details: Dict[str, float] = Field(default_factory=dict)

    def z_score(self) -> Optional[float]:
        """Distance of the estimate from the closed form in units of sigma."""
        if self.closed_form is None:
            return None
        if self.sigma == 0:
            return 0.0 if self.estimate == self.closed_form else float("inf")
        return (self.estimate - self.closed_form) / self.sigma
