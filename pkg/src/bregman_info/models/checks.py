from typing import List, Optional, Tuple

from pydantic import BaseModel, Field

from bregman_info.constants import DIVERGENCE_NONNEGATIVITY_SLACK


class ConvexityCheck(BaseModel):
    pairs: int = Field(description="Number of sampled point pairs")
    violations: int = Field(description="Pairs whose chord lies below the function beyond tolerance")
    strict_pairs: int = Field(description="Pairs separated by at least the strictness separation")
    non_strict_pairs: int = Field(description="Separated pairs whose Jensen gap is not strictly positive")
    min_gap: float = Field(description="Smallest sampled Jensen gap")

    @property
    def passed(self) -> bool:
        return self.violations == 0 and self.non_strict_pairs == 0


class HessianCheck(BaseModel):
    points: int = Field(description="Number of interior points probed")
    max_asymmetry: float = Field(description="Largest |H - H^T| entry over the probed points")
    min_eigenvalue: float = Field(description="Smallest Hessian eigenvalue over the probed points")
    symmetry_tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_asymmetry <= self.symmetry_tolerance and self.min_eigenvalue > 0


class DivergenceAxiomsCheck(BaseModel):
    pairs: int = Field(description="Number of sampled (x, y) pairs")
    min_value: float = Field(description="Smallest d(x, y) over pairs separated by the strictness separation")
    max_self_value: float = Field(description="Largest |d(y, y)| over the sampled points")
    negative_pairs: int = Field(description="Pairs with d(x, y) below the nonnegativity slack")
    degenerate_pairs: int = Field(description="Separated pairs with d(x, y) not strictly positive")

    @property
    def passed(self) -> bool:
        return self.negative_pairs == 0 and self.degenerate_pairs == 0 and self.max_self_value <= DIVERGENCE_NONNEGATIVITY_SLACK


class MetricRatio(BaseModel):
    scale: float
    ratio: float


class AffineFit(BaseModel):
    h1: List[float] = Field(description="Slope of the fitted residual x -> f(x, y)")
    h2: float = Field(description="Intercept of the fitted residual")
    max_fit_residual: float = Field(description="Largest absolute fit residual over the probes")
    condition_number: float = Field(description="Condition number of the probe design on its identifiable span")
    rank: int = Field(description="Numerical rank of the probe design matrix [x 1]")


class GradientRecovery(BaseModel):
    status: str = Field(description="ok, or not_affine when the residual fit is too poor to read a gradient")
    discrepancy: Optional[float] = None
    fit: AffineFit


class OddnessCheck(BaseModel):
    passed: bool
    residual: float = Field(description="|g_y(v) + g_y(-v)|")


class CheckSummary(BaseModel):
    max_residual: Optional[float] = Field(default=None, description="Largest residual over the sampled points")
    tolerance: float
    passed: bool
    status: str = Field(default="ok", description="ok, failed, not_affine or skipped")
    evaluations: int = Field(default=0)


class CentroidMinimizerCheck(BaseModel):
    passed: bool
    probes: int
    worst_excess: float = Field(description="Most negative value of sum mu_i d(x_i, z) - sum mu_i d(x_i, y)")
    violating_probe: Optional[Tuple[float, ...]] = Field(default=None)
