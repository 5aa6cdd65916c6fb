from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator
from scipy.special import rel_entr, xlogy

from bregman_info.constants import JOINT_ROW_TOLERANCE, JOINT_SUM_TOLERANCE, WEIGHT_SUM_TOLERANCE
from bregman_info.core import ConvexDomain, ConvexGenerator, WeightedDataset, centroid, frozen_array
from bregman_info.divergence import DivergenceFn
from bregman_info.errors import CentroidNotInterior, DomainViolation, InvalidJoint


class JointDistribution(BaseModel):
    """
    Joint law p(a_i, b_j) = mu_i x_ij of two discrete variables, stored as the
    row marginal mu (law of A) and the conditional rows x_i (law of B given A = a_i).
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    row_marginal: np.ndarray
    conditionals: np.ndarray

    @field_validator('row_marginal', mode='before')
    @classmethod
    def _freeze_marginal(cls, value):
        return frozen_array(value, ndim=1)

    @field_validator('conditionals', mode='before')
    @classmethod
    def _freeze_conditionals(cls, value):
        return frozen_array(value, ndim=2)

    @model_validator(mode='after')
    def validate_joint(self):
        mu, X = self.row_marginal, self.conditionals
        if X.shape[0] != mu.shape[0] or X.shape[1] < 1:
            raise ValueError(f"conditionals must have {mu.shape[0]} rows and at least one column, got {X.shape}")
        if np.any(mu < 0) or abs(float(np.sum(mu)) - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise ValueError("row marginal must be a probability vector")
        if np.any(X < 0) or np.any(np.abs(np.sum(X, axis=1) - 1.0) > JOINT_ROW_TOLERANCE):
            raise ValueError("every conditional row must be a probability vector")
        if abs(float(np.sum(self.joint_table())) - 1.0) > JOINT_SUM_TOLERANCE:
            raise ValueError("joint table does not sum to 1")
        return self

    @classmethod
    def from_arrays(cls, row_marginal, conditionals) -> "JointDistribution":
        try:
            return cls(row_marginal=row_marginal, conditionals=conditionals)
        except ValidationError as exc:
            raise InvalidJoint(str(exc))

    def column_marginal(self) -> np.ndarray:
        return self.row_marginal @ self.conditionals

    def joint_table(self) -> np.ndarray:
        return self.row_marginal[:, None] * self.conditionals

    def to_dataset(self) -> WeightedDataset:
        return WeightedDataset(weights=self.row_marginal, points=self.conditionals,
                               domain=ConvexDomain.simplex(self.conditionals.shape[1]))


def jensen_gap_information(gen: ConvexGenerator, ds: WeightedDataset) -> float:
    """
    I_phi(mu, X) = sum_i mu_i phi(x_i) - phi(y) with y the weighted centroid.
    Rows outside the support of mu do not contribute.
    """
    domain = gen.domain
    support = ds.support()
    for index, row in enumerate(ds.points):
        if not domain.contains(row):
            raise DomainViolation(f"row {index} is outside the generator domain {domain.describe()}")
    y = centroid(ds).point
    phi_y = gen.evaluate(y)
    if not np.isfinite(phi_y):
        raise DomainViolation("generator value at the centroid is not finite")
    values = np.array([gen.evaluate(x) for x in ds.points[support]])
    return float(ds.weights[support] @ values) - phi_y


def divergence_information(d: DivergenceFn, ds: WeightedDataset) -> float:
    """I_d(mu, X) = sum_i mu_i d(x_i, y); the centroid must be in the relative interior."""
    y = centroid(ds).point
    if not d.domain.contains_interior(y):
        raise CentroidNotInterior(f"centroid {np.array2string(y)} is not interior to {d.domain.describe()}")
    support = ds.support()
    values = np.array([d(x, y) for x in ds.points[support]])
    return float(ds.weights[support] @ values)


def equivalence_gap(gen: ConvexGenerator, d: DivergenceFn, ds: WeightedDataset) -> float:
    """Signed gap I_phi - I_d; vanishes for every dataset when d is the Bregman divergence of gen."""
    return jensen_gap_information(gen, ds) - divergence_information(d, ds)


def euclidean_agreement(ds: WeightedDataset) -> Tuple[float, float]:
    """
    Both sides of sum mu_i ||x_i||^2 - ||sum mu_i x_i||^2 = sum mu_i ||x_i - y||^2,
    each evaluated on its own.
    """
    mu, X = ds.weights, ds.points
    mean = mu @ X
    lhs = float(mu @ np.einsum('ij,ij->i', X, X)) - float(mean @ mean)
    residuals = X - np.sum(mu[:, None] * X, axis=0)
    rhs = float(mu @ np.sum(residuals ** 2, axis=1))
    return lhs, rhs


def mutual_information_entropy_reduction(j: JointDistribution) -> float:
    """I(A;B) = H(B) - H(B|A) in nats."""
    mu, X = j.row_marginal, j.conditionals
    support = mu > 0
    negative_conditional_entropy = float(mu[support] @ np.sum(xlogy(X[support], X[support]), axis=1))
    y = j.column_marginal()
    negative_marginal_entropy = float(np.sum(xlogy(y, y)))
    return negative_conditional_entropy - negative_marginal_entropy


def mutual_information_divergence_form(j: JointDistribution) -> float:
    """
    I(A;B) = sum_i mu_i KL(x_i || y). Columns with y_j = 0 carry no mass on the
    support of mu and are skipped.
    """
    mu, X = j.row_marginal, j.conditionals
    support = mu > 0
    y = j.column_marginal()
    columns = y > 0
    if np.any(X[np.ix_(support, ~columns)] > 0):
        raise InvalidJoint("a conditional row puts mass on a column with zero marginal")
    divergences = np.sum(rel_entr(X[np.ix_(support, columns)], y[columns]), axis=1)
    return float(mu[support] @ divergences)
