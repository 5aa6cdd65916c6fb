from typing import List, Optional

from pydantic import BaseModel, Field

from bregman_info.models.checks import HessianCheck, MetricRatio
from bregman_info.models.clustering import ClusteringState


class InformationReport(BaseModel):
    generator: str
    divergence: str
    domain: str
    rows: int = Field(description="Number of data rows n")
    dimension: int
    centroid: List[float] = Field(description="Weighted centroid y = sum_i mu_i x_i")
    I_phi: float = Field(description="Jensen gap information")
    I_d: float = Field(description="Divergence information")
    gap: float = Field(description="Signed gap I_phi - I_d")
    euclidean_lhs: float = Field(description="sum mu_i ||x_i||^2 - ||y||^2")
    euclidean_rhs: float = Field(description="sum mu_i ||x_i - y||^2")


class MutualInformationReport(BaseModel):
    rows: int = Field(description="Number of values of A")
    columns: int = Field(description="Number of values of B")
    log_base: str
    entropy_reduction: float = Field(description="H(B) - H(B|A)")
    divergence_form: float = Field(description="sum_i mu_i KL(x_i || y)")
    gap: float = Field(description="entropy_reduction - divergence_form")
    column_marginal: List[float] = Field(description="Law y of B")
    negentropy_jensen_gap: Optional[float] = Field(
        default=None, description="Jensen gap information of the negative entropy on the conditionals")


class MetricCheckReport(BaseModel):
    generator: str
    point: List[float] = Field(description="Base point x")
    direction: List[float] = Field(description="Direction delta")
    ratios: List[MetricRatio] = Field(description="|d(x + s delta, x) - 0.5 (s delta)^T H (s delta)| / ||s delta||^2")
    gradient_error: Optional[float] = Field(default=None, description="Central-difference gradient error at x")
    hessian: HessianCheck


class ClusteringReport(BaseModel):
    generator: str
    domain: str
    k: int
    seed: int
    restarts: int
    state: ClusteringState
