from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field, model_validator

from bregman_info.models.checks import CheckSummary


class Verdict(str, Enum):
    CONSISTENT_WITH_BREGMAN = 'ConsistentWithBregman'
    REFUTED_WITH_COUNTEREXAMPLE = 'RefutedWithCounterexample'


class Counterexample(BaseModel):
    trial_index: int = Field(description="Index of the trial that first exceeded the tolerance")
    mu: List[float] = Field(description="Weights of the witness dataset")
    X: List[List[float]] = Field(description="Rows of the witness dataset")
    I_phi: float = Field(description="Jensen gap information of the witness")
    I_d: float = Field(description="Divergence information of the witness")
    gap: float = Field(description="Signed gap I_phi - I_d")
    minimized: bool = Field(default=False, description="Whether the witness was shrunk to two points")
    replayed: bool = Field(default=False, description="Whether the witness re-validated on recomputation")


class StructuralDiagnostics(BaseModel):
    points: int = Field(description="Number of sampled interior centroids the checks were run at")
    oddness: CheckSummary = Field(description="|g_y(v) + g_y(-v)|")
    homogeneity: CheckSummary = Field(description="|g_y(c v) - c g_y(v)| over the homogeneity scalars")
    convex_combination: CheckSummary = Field(description="|g_y(sum w_i v_i) - sum w_i g_y(v_i)| for convex weights")
    linearity: CheckSummary = Field(description="|g_y(sum c_i v_i) - sum c_i g_y(v_i)| for real coefficients")
    affine_fit: CheckSummary = Field(description="Largest residual of the affine fit of x -> f(x, y)")
    h2_consistency: CheckSummary = Field(description="|h2(y) + h1(y)^T y|")
    grad_recovery: CheckSummary = Field(description="|grad phi(y) + h1(y)|, tangent-projected on the simplex")
    centroid_minimizer: CheckSummary = Field(description="Centroid minimizes sum mu_i d(x_i, z) over probes z")

    @property
    def passed(self) -> bool:
        return all(summary.passed for summary in (
            self.oddness, self.homogeneity, self.convex_combination, self.linearity, self.affine_fit,
            self.h2_consistency, self.grad_recovery, self.centroid_minimizer))


class CertificationReport(BaseModel):
    verdict: Verdict
    generator: str
    divergence: str
    domain: str
    seed: int
    trials: int = Field(description="Number of trials requested")
    trials_run: int = Field(description="Number of trials evaluated before the verdict")
    max_abs_gap: float = Field(description="Largest |I_phi - I_d| / (1 + |I_phi| + |I_d|) over the trials run")
    max_raw_gap: float = Field(description="Largest |I_phi - I_d| over the trials run")
    max_identity_residual: float = Field(
        description="Largest |sum mu_i f(x_i, y) - (I_d - I_phi)| over the trials run")
    tolerance_used: float
    counterexample: Optional[Counterexample] = None
    diagnostics: StructuralDiagnostics
    note: str = Field(description="Scope of the verdict")

    @model_validator(mode='after')
    def validate_verdict(self):
        refuted = self.verdict == Verdict.REFUTED_WITH_COUNTEREXAMPLE
        if refuted != (self.counterexample is not None) or refuted != (self.max_abs_gap > self.tolerance_used):
            raise ValueError("verdict, counterexample and max_abs_gap disagree")
        return self
