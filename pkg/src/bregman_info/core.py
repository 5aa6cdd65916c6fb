from enum import Enum
from typing import Callable, NamedTuple, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.special import xlog1py, xlogy

from bregman_info.constants import (
    ABS_TOL,
    INTERIOR_MARGIN,
    MEMBERSHIP_TOLERANCE,
    REL_TOL,
    STRICT_CONVEXITY_SEPARATION,
    SYMMETRY_TOLERANCE,
    WEIGHT_SUM_TOLERANCE,
)
from bregman_info.errors import (
    DomainViolation,
    GradientAtBoundary,
    HessianUnavailable,
    NonSymmetric,
    NotPositiveDefinite,
    StepLeavesDomain,
)
from bregman_info.models.checks import ConvexityCheck, HessianCheck


def frozen_array(values, ndim: Optional[int] = None) -> np.ndarray:
    """Float64 copy of ``values`` with the write flag cleared."""
    array = np.array(values, dtype=np.float64, copy=True)
    if ndim is not None and array.ndim != ndim:
        raise ValueError(f"expected a {ndim}-dimensional array, got shape {array.shape}")
    array.flags.writeable = False
    return array


def mixed_tolerance(scale: float, abs_tol: float = ABS_TOL, rel_tol: float = REL_TOL) -> float:
    return max(abs_tol, rel_tol * abs(scale))


class DomainKind(str, Enum):
    FULL_SPACE = 'full_space'
    POSITIVE_ORTHANT = 'positive_orthant'
    SIMPLEX = 'simplex'


class ConvexDomain(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: DomainKind
    dimension: int = Field(ge=1, description="Ambient dimension of the domain")
    membership_tolerance: float = Field(default=MEMBERSHIP_TOLERANCE, ge=0)
    interior_margin: float = Field(default=INTERIOR_MARGIN, gt=0,
                                   description="Smallest coordinate a relative-interior point may have")

    @classmethod
    def full_space(cls, dimension: int) -> "ConvexDomain":
        return cls(kind=DomainKind.FULL_SPACE, dimension=dimension)

    @classmethod
    def positive_orthant(cls, dimension: int) -> "ConvexDomain":
        return cls(kind=DomainKind.POSITIVE_ORTHANT, dimension=dimension)

    @classmethod
    def simplex(cls, dimension: int) -> "ConvexDomain":
        return cls(kind=DomainKind.SIMPLEX, dimension=dimension)

    def describe(self) -> str:
        return f"{self.kind.value}({self.dimension})"

    def _well_formed(self, x: np.ndarray) -> bool:
        return x.shape == (self.dimension,) and bool(np.all(np.isfinite(x)))

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=np.float64)
        if not self._well_formed(x):
            return False
        if self.kind == DomainKind.FULL_SPACE:
            return True
        if np.any(x < -self.membership_tolerance):
            return False
        if self.kind == DomainKind.SIMPLEX:
            return abs(float(np.sum(x)) - 1.0) <= self.membership_tolerance
        return True

    def contains_interior(self, x) -> bool:
        """Relative-interior test; coordinates at exactly ``interior_margin`` count as interior."""
        if not self.contains(x):
            return False
        if self.kind == DomainKind.FULL_SPACE:
            return True
        return bool(np.all(np.asarray(x, dtype=np.float64) >= self.interior_margin))

    def contains_ambient_interior(self, x) -> bool:
        """
        Coordinate positivity without the simplex sum constraint.
        Simplex generator formulas extend to the open orthant, which is where
        coordinate finite-difference steps land.
        """
        x = np.asarray(x, dtype=np.float64)
        if not self._well_formed(x):
            return False
        if self.kind == DomainKind.FULL_SPACE:
            return True
        return bool(np.all(x >= self.interior_margin))

    def project_interior(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if self.contains_interior(x):
            return x.copy()
        if self.kind == DomainKind.FULL_SPACE:
            return x.copy()
        if self.kind == DomainKind.POSITIVE_ORTHANT:
            return np.maximum(x, self.interior_margin)
        clipped = np.maximum(x, 0.0)
        total = float(np.sum(clipped))
        if total <= 0.0:
            clipped = np.full(self.dimension, 1.0 / self.dimension)
        else:
            clipped = clipped / total
        # mixing with the uniform point keeps every coordinate >= margin and the sum at 1
        margin = self.interior_margin
        return (1.0 - self.dimension * margin) * clipped + margin

    def scale(self) -> float:
        if self.kind == DomainKind.SIMPLEX:
            return 1.0 / self.dimension
        return 1.0


class ConvexGenerator(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    domain: ConvexDomain
    value: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]
    hessian: Optional[Callable[[np.ndarray], np.ndarray]] = None
    divergence: Optional[Callable[[np.ndarray, np.ndarray], float]] = Field(
        default=None, description="Cancellation-free closed form of the generator's own Bregman divergence")
    matrix: Optional[np.ndarray] = Field(default=None, description="Quadratic form matrix, for quadratic generators")

    def evaluate(self, x) -> float:
        return float(self.value(np.asarray(x, dtype=np.float64)))

    def grad(self, x) -> np.ndarray:
        return np.asarray(self.gradient(np.asarray(x, dtype=np.float64)), dtype=np.float64)


class WeightedDataset(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    weights: np.ndarray
    points: np.ndarray
    domain: ConvexDomain

    @field_validator('weights', mode='before')
    @classmethod
    def _freeze_weights(cls, value):
        return frozen_array(value, ndim=1)

    @field_validator('points', mode='before')
    @classmethod
    def _freeze_points(cls, value):
        points = np.array(value, dtype=np.float64)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        return frozen_array(points, ndim=2)

    @model_validator(mode='after')
    def validate_dataset(self):
        n = self.weights.shape[0]
        if n < 1:
            raise ValueError("a weighted dataset needs at least one point")
        if self.points.shape != (n, self.domain.dimension):
            raise ValueError(f"points must have shape ({n}, {self.domain.dimension}), got {self.points.shape}")
        if np.any(self.weights < 0) or not np.all(np.isfinite(self.weights)):
            raise ValueError("weights must be finite and nonnegative")
        if abs(float(np.sum(self.weights)) - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise ValueError(f"weights must sum to 1, got {float(np.sum(self.weights))!r}")
        for index, row in enumerate(self.points):
            if not self.domain.contains(row):
                raise ValueError(f"row {index} is outside {self.domain.describe()}")
        return self

    @classmethod
    def uniform(cls, points, domain: ConvexDomain) -> "WeightedDataset":
        points = np.array(points, dtype=np.float64)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        n = points.shape[0]
        return cls(weights=np.full(n, 1.0 / n), points=points, domain=domain)

    @property
    def size(self) -> int:
        return int(self.weights.shape[0])

    @property
    def dimension(self) -> int:
        return self.domain.dimension

    def support(self) -> np.ndarray:
        return self.weights > 0


class Centroid(NamedTuple):
    point: np.ndarray
    interior: bool


def centroid(ds: WeightedDataset) -> Centroid:
    point = ds.weights @ ds.points
    return Centroid(point=point, interior=ds.domain.contains_interior(point))


def validate_positive_definite(W) -> np.ndarray:
    """Symmetrized read-only copy of W; raises unless W is symmetric positive definite."""
    W = np.array(W, dtype=np.float64)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise NonSymmetric(f"W must be a square matrix, got shape {W.shape}")
    asymmetry = float(np.max(np.abs(W - W.T)))
    if asymmetry > SYMMETRY_TOLERANCE:
        raise NonSymmetric(f"W is not symmetric (max |W - W^T| = {asymmetry:.3e})")
    W = frozen_array(0.5 * (W + W.T))
    try:
        np.linalg.cholesky(W)
    except np.linalg.LinAlgError:
        raise NotPositiveDefinite("W is not positive definite")
    return W


def make_generator_squared_mahalanobis(W, domain: Optional[ConvexDomain] = None,
                                       name: str = 'mahalanobis') -> ConvexGenerator:
    W = validate_positive_definite(W)

    dimension = W.shape[0]
    if domain is None:
        domain = ConvexDomain.full_space(dimension)
    elif domain.dimension != dimension:
        raise DomainViolation(f"W has dimension {dimension} but the domain is {domain.describe()}")

    def value(x):
        return 0.5 * float(x @ W @ x)

    def gradient(x):
        return W @ x

    def hessian(x):
        return W.copy()

    def divergence(x, y):
        delta = np.asarray(x, dtype=np.float64) - np.asarray(y, dtype=np.float64)
        return 0.5 * float(delta @ W @ delta)

    return ConvexGenerator(name=name, domain=domain, value=value, gradient=gradient,
                           hessian=hessian, divergence=divergence, matrix=W)


def make_generator_squared_norm(dimension: int, domain: Optional[ConvexDomain] = None) -> ConvexGenerator:
    return make_generator_squared_mahalanobis(np.eye(dimension), domain=domain, name='sqnorm')


def entropy_divergence(x, y) -> float:
    """
    Generalized KL divergence sum x log(x/y) - x + y, written as
    y * ((x/y) log1p(u) - u) with u = (x - y)/y so that nearby arguments
    do not cancel. Equals the KL divergence when x and y share a total mass.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    ratio = x / y
    u = (x - y) / y
    return float(np.sum(y * (xlog1py(ratio, u) - u)))


def _require_positive(x: np.ndarray, margin: float, what: str):
    if np.any(x < margin):
        raise GradientAtBoundary(f"{what} requested at a point with a coordinate below {margin:.1e}")


def make_generator_negative_entropy(dimension: int) -> ConvexGenerator:
    if dimension < 2:
        raise DomainViolation(f"the negative entropy needs dimension >= 2, got {dimension}")
    domain = ConvexDomain.simplex(dimension)
    margin = domain.interior_margin

    def value(x):
        return float(np.sum(xlogy(x, x)))

    def gradient(x):
        _require_positive(x, margin, 'gradient')
        return np.log(x) + 1.0

    def hessian(x):
        _require_positive(x, margin, 'Hessian')
        return np.diag(1.0 / x)

    return ConvexGenerator(name='negentropy', domain=domain, value=value, gradient=gradient,
                           hessian=hessian, divergence=entropy_divergence)


def make_generator_negative_entropy_orthant(dimension: int) -> ConvexGenerator:
    domain = ConvexDomain.positive_orthant(dimension)
    margin = domain.interior_margin

    def value(x):
        return float(np.sum(xlogy(x, x) - x))

    def gradient(x):
        _require_positive(x, margin, 'gradient')
        return np.log(x)

    def hessian(x):
        _require_positive(x, margin, 'Hessian')
        return np.diag(1.0 / x)

    return ConvexGenerator(name='negentropy-orthant', domain=domain, value=value, gradient=gradient,
                           hessian=hessian, divergence=entropy_divergence)


def check_gradient(gen: ConvexGenerator, x, h: float = 1e-6) -> float:
    """
    Max over coordinates of |central difference - gradient component|.

    Parameters:
    --------
    gen : ConvexGenerator
    x : interior point of gen.domain
    h : step; every x +/- h e_i must keep all coordinates above the interior margin

    Returns:
    --------
    float - the largest absolute discrepancy
    """
    x = np.asarray(x, dtype=np.float64)
    domain = gen.domain
    if not domain.contains_interior(x):
        raise DomainViolation(f"gradient check point is not interior to {domain.describe()}")
    if h <= 0:
        raise StepLeavesDomain(f"step must be positive, got {h}")

    analytic = gen.grad(x)
    worst = 0.0
    for i in range(domain.dimension):
        step = np.zeros(domain.dimension)
        step[i] = h
        forward, backward = x + step, x - step
        if not (domain.contains_ambient_interior(forward) and domain.contains_ambient_interior(backward)):
            raise StepLeavesDomain(f"step {h} along coordinate {i} leaves {domain.describe()}")
        central = (gen.evaluate(forward) - gen.evaluate(backward)) / (2.0 * h)
        worst = max(worst, abs(central - analytic[i]))
    return worst


def check_strict_convexity(gen: ConvexGenerator, first, second, t: float = 0.5) -> ConvexityCheck:
    """Sampled Jensen gaps t f(a) + (1-t) f(b) - f(t a + (1-t) b) over paired rows."""
    first = np.atleast_2d(np.asarray(first, dtype=np.float64))
    second = np.atleast_2d(np.asarray(second, dtype=np.float64))
    violations = 0
    strict_pairs = 0
    non_strict = 0
    min_gap = np.inf
    for a, b in zip(first, second):
        fa, fb = gen.evaluate(a), gen.evaluate(b)
        gap = t * fa + (1.0 - t) * fb - gen.evaluate(t * a + (1.0 - t) * b)
        min_gap = min(min_gap, gap)
        if gap < -mixed_tolerance(max(abs(fa), abs(fb))):
            violations += 1
        if np.linalg.norm(a - b) >= STRICT_CONVEXITY_SEPARATION:
            strict_pairs += 1
            if gap <= 0.0:
                non_strict += 1
    return ConvexityCheck(pairs=len(first), violations=violations, strict_pairs=strict_pairs,
                          non_strict_pairs=non_strict, min_gap=float(min_gap))


def check_hessian(gen: ConvexGenerator, points) -> HessianCheck:
    if gen.hessian is None:
        raise HessianUnavailable(f"generator {gen.name} has no Hessian")
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    max_asymmetry = 0.0
    min_eigenvalue = np.inf
    for x in points:
        H = np.asarray(gen.hessian(x), dtype=np.float64)
        max_asymmetry = max(max_asymmetry, float(np.max(np.abs(H - H.T))))
        min_eigenvalue = min(min_eigenvalue, float(np.min(np.linalg.eigvalsh(0.5 * (H + H.T)))))
    return HessianCheck(points=len(points), max_asymmetry=max_asymmetry,
                        min_eigenvalue=float(min_eigenvalue), symmetry_tolerance=SYMMETRY_TOLERANCE)
