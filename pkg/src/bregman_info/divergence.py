from typing import Callable, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.special import kl_div, rel_entr

from bregman_info.constants import (
    DIVERGENCE_NONNEGATIVITY_SLACK,
    INTERIOR_MARGIN,
    STRICT_CONVEXITY_SEPARATION,
)
from bregman_info.core import (
    ConvexDomain,
    ConvexGenerator,
    make_generator_negative_entropy,
    make_generator_negative_entropy_orthant,
    make_generator_squared_mahalanobis,
    validate_positive_definite,
)
from bregman_info.errors import (
    DomainViolation,
    HessianUnavailable,
    SecondArgumentHasZero,
    SecondArgumentNotInterior,
    StepLeavesDomain,
)
from bregman_info.models.checks import DivergenceAxiomsCheck, MetricRatio


class DivergenceFn(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    domain: ConvexDomain
    evaluate: Callable[[np.ndarray, np.ndarray], float]
    claims_bregman_of: Optional[ConvexGenerator] = None

    def __call__(self, x, y) -> float:
        return float(self.evaluate(np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64)))


def bregman_from_generator(gen: ConvexGenerator) -> DivergenceFn:
    domain = gen.domain

    def evaluate(x, y):
        if not domain.contains_interior(y):
            raise SecondArgumentNotInterior(f"second argument is not interior to {domain.describe()}")
        return gen.evaluate(x) - gen.evaluate(y) - float(gen.grad(y) @ (x - y))

    return DivergenceFn(name=f"bregman[{gen.name}]", domain=domain, evaluate=evaluate, claims_bregman_of=gen)


def kl_divergence(x, y, generalized: bool = False, interior_margin: float = INTERIOR_MARGIN) -> float:
    """
    Kullback-Leibler divergence sum x_i ln(x_i / y_i) in nats, with 0 ln(0 / y) = 0.
    The generalized form adds sum (y_i - x_i) and accepts positive-orthant arguments.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise DomainViolation(f"arguments must be vectors of equal length, got {x.shape} and {y.shape}")
    if np.any(y < interior_margin):
        raise SecondArgumentHasZero(f"second argument has a coordinate below {interior_margin:.1e}")
    if generalized:
        domain = ConvexDomain.positive_orthant(x.shape[0])
        if not domain.contains(x):
            raise DomainViolation("first argument is outside the positive orthant")
        return float(np.sum(kl_div(x, y)))
    domain = ConvexDomain.simplex(x.shape[0])
    if not domain.contains(x) or not domain.contains(y):
        raise DomainViolation("KL arguments must lie on the probability simplex")
    return float(np.sum(rel_entr(x, y)))


def make_kl_divergence(dimension: int, generalized: bool = False) -> DivergenceFn:
    if generalized:
        generator = make_generator_negative_entropy_orthant(dimension)
    else:
        generator = make_generator_negative_entropy(dimension)
    margin = generator.domain.interior_margin

    def evaluate(x, y):
        return kl_divergence(x, y, generalized=generalized, interior_margin=margin)

    return DivergenceFn(name='generalized-kl' if generalized else 'kl', domain=generator.domain,
                        evaluate=evaluate, claims_bregman_of=generator)


def squared_mahalanobis(W, x, y) -> float:
    """Half the squared Mahalanobis distance, the Bregman divergence of 0.5 x^T W x."""
    W = validate_positive_definite(W)
    delta = np.asarray(x, dtype=np.float64) - np.asarray(y, dtype=np.float64)
    return 0.5 * float(delta @ W @ delta)


def make_squared_mahalanobis_divergence(W, domain: Optional[ConvexDomain] = None) -> DivergenceFn:
    generator = make_generator_squared_mahalanobis(W, domain=domain)
    W = generator.matrix

    def evaluate(x, y):
        delta = x - y
        return 0.5 * float(delta @ W @ delta)

    return DivergenceFn(name='squared-mahalanobis', domain=generator.domain, evaluate=evaluate,
                        claims_bregman_of=generator)


def make_euclidean_distance(dimension: int, domain: Optional[ConvexDomain] = None) -> DivergenceFn:
    domain = domain or ConvexDomain.full_space(dimension)

    def evaluate(x, y):
        return float(np.linalg.norm(x - y))

    return DivergenceFn(name='abs-distance', domain=domain, evaluate=evaluate)


def scale_divergence(d: DivergenceFn, c: float) -> DivergenceFn:
    def evaluate(x, y):
        return c * d(x, y)

    return DivergenceFn(name=f"{c:g}*{d.name}", domain=d.domain, evaluate=evaluate)


def add_quartic_term(d: DivergenceFn, eps: float) -> DivergenceFn:
    """d + eps ||x - y||^4, an even perturbation that breaks g_y(-v) = -g_y(v)."""
    def evaluate(x, y):
        squared = float((x - y) @ (x - y))
        return d(x, y) + eps * squared * squared

    return DivergenceFn(name=f"{d.name}+{eps:g}*quartic", domain=d.domain, evaluate=evaluate)


def add_cubic_term(d: DivergenceFn, eps: float) -> DivergenceFn:
    """d + eps sum (x_i - y_i)^3; keeps g_y odd but breaks g_y(c v) = c g_y(v)."""
    def evaluate(x, y):
        return d(x, y) + eps * float(np.sum((x - y) ** 3))

    return DivergenceFn(name=f"{d.name}+{eps:g}*cubic", domain=d.domain, evaluate=evaluate)


def local_metric_check(gen: ConvexGenerator, x, delta, scales: Sequence[float]) -> List[MetricRatio]:
    """
    Remainder of the second-order expansion d(x + s delta, x) ~ 0.5 (s delta)^T H (s delta),
    normalized by ||s delta||^2, for every requested scale s.

    Uses the generator's closed-form divergence when it has one, since the
    remainder is many orders of magnitude below the divergence itself.
    """
    if gen.hessian is None:
        raise HessianUnavailable(f"generator {gen.name} has no Hessian")
    x = np.asarray(x, dtype=np.float64)
    delta = np.asarray(delta, dtype=np.float64)
    domain = gen.domain
    if not domain.contains_interior(x):
        raise DomainViolation(f"base point is not interior to {domain.describe()}")
    if delta.shape != x.shape:
        raise DomainViolation(f"direction has shape {delta.shape}, expected {x.shape}")

    divergence = gen.divergence or bregman_from_generator(gen)
    H = np.asarray(gen.hessian(x), dtype=np.float64)
    ratios = []
    for scale in scales:
        if scale <= 0:
            raise StepLeavesDomain(f"scales must be positive, got {scale}")
        moved = x + scale * delta
        if not domain.contains(moved):
            raise StepLeavesDomain(f"x + {scale:g} * delta leaves {domain.describe()}")
        # the step actually taken after rounding
        step = moved - x
        norm_squared = float(step @ step)
        if norm_squared == 0.0:
            ratios.append(MetricRatio(scale=scale, ratio=0.0))
            continue
        remainder = divergence(moved, x) - 0.5 * float(step @ H @ step)
        ratios.append(MetricRatio(scale=scale, ratio=abs(remainder) / norm_squared))
    return ratios


def check_divergence_axioms(d: DivergenceFn, first, second) -> DivergenceAxiomsCheck:
    """Sampled nonnegativity and identity of indiscernibles over paired rows (x_i, y_i)."""
    first = np.atleast_2d(np.asarray(first, dtype=np.float64))
    second = np.atleast_2d(np.asarray(second, dtype=np.float64))
    negative = 0
    degenerate = 0
    min_value = np.inf
    max_self = 0.0
    for x, y in zip(first, second):
        value = d(x, y)
        if value < -DIVERGENCE_NONNEGATIVITY_SLACK:
            negative += 1
        if np.linalg.norm(x - y) >= STRICT_CONVEXITY_SEPARATION:
            min_value = min(min_value, value)
            if value <= 0.0:
                degenerate += 1
        max_self = max(max_self, abs(d(y, y)))
    return DivergenceAxiomsCheck(pairs=len(first), min_value=float(min_value), max_self_value=max_self,
                                 negative_pairs=negative, degenerate_pairs=degenerate)
