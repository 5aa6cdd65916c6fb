import numpy as np
import pytest

from bregman_info.core import (
    ConvexDomain,
    make_generator_negative_entropy,
    make_generator_negative_entropy_orthant,
    make_generator_squared_mahalanobis,
    make_generator_squared_norm,
)


def random_positive_definite(seed: int, dimension: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(dimension, dimension))
    return A @ A.T + dimension * np.eye(dimension)


BUILTIN_GENERATORS = {
    'sqnorm-1': lambda: make_generator_squared_norm(1),
    'sqnorm-3': lambda: make_generator_squared_norm(3),
    'sqnorm-5': lambda: make_generator_squared_norm(5),
    'mahalanobis-0': lambda: make_generator_squared_mahalanobis(random_positive_definite(0, 2)),
    'mahalanobis-1': lambda: make_generator_squared_mahalanobis(random_positive_definite(1, 3)),
    'mahalanobis-2': lambda: make_generator_squared_mahalanobis(random_positive_definite(2, 4)),
    'negentropy-2': lambda: make_generator_negative_entropy(2),
    'negentropy-4': lambda: make_generator_negative_entropy(4),
    'negentropy-orthant-3': lambda: make_generator_negative_entropy_orthant(3),
}


@pytest.fixture(params=sorted(BUILTIN_GENERATORS))
def builtin_generator(request):
    return BUILTIN_GENERATORS[request.param]()


@pytest.fixture
def line():
    return ConvexDomain.full_space(1)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def interior_points(domain: ConvexDomain, rng: np.random.Generator, m: int) -> np.ndarray:
    """Points comfortably inside the domain, away from every boundary face."""
    dimension = domain.dimension
    if domain.kind.value == 'simplex':
        return 0.5 * rng.dirichlet(np.ones(dimension), size=m) + 0.5 / dimension
    if domain.kind.value == 'positive_orthant':
        return rng.uniform(0.1, 3.0, size=(m, dimension))
    return rng.uniform(-3.0, 3.0, size=(m, dimension))
