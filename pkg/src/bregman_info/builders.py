from typing import Dict, Optional

from bregman_info.constants import DIVERGENCE_NAMES, DOMAIN_NAMES, GENERATOR_NAMES
from bregman_info.core import (
    ConvexDomain,
    ConvexGenerator,
    DomainKind,
    make_generator_negative_entropy,
    make_generator_negative_entropy_orthant,
    make_generator_squared_mahalanobis,
    make_generator_squared_norm,
)
from bregman_info.divergence import (
    DivergenceFn,
    add_quartic_term,
    bregman_from_generator,
    make_euclidean_distance,
    make_kl_divergence,
    make_squared_mahalanobis_divergence,
    scale_divergence,
)
from bregman_info.errors import DomainViolation, UnknownName
from bregman_info.models.run_config import DivergenceSpec, GeneratorSpec
from bregman_info.utils.csv_io import read_matrix

DEFAULT_DIVERGENCE_SCALE = 2.0
DEFAULT_QUARTIC_EPS = 1e-2

_GENERATOR_PARAMS = {
    'sqnorm': {'dim', 'domain'},
    'mahalanobis': {'W', 'domain'},
    'negentropy': {'dim'},
    'negentropy-orthant': {'dim'},
}
_DIVERGENCE_PARAMS = {
    'bregman-of-generator': set(),
    'abs-distance': set(),
    'kl': set(),
    'generalized-kl': set(),
    'squared-mahalanobis': {'W'},
    'scaled-bregman': {'scale'},
    'bregman-plus-quartic': {'eps'},
}
_MINIMUM_DIMENSION = {'negentropy': 2}


def _check_params(kind: str, name: str, params: Dict[str, str], allowed):
    unknown = sorted(set(params) - allowed)
    if unknown:
        known = ', '.join(sorted(allowed)) or 'none'
        raise UnknownName(f"unknown {kind} parameter(s) {', '.join(unknown)} for {name}; known: {known}")


def _number(params: Dict[str, str], key: str, cast, default):
    if key not in params:
        return default
    try:
        return cast(params[key])
    except ValueError:
        raise DomainViolation(f"parameter {key}={params[key]!r} is not a valid {cast.__name__}")


def build_domain(name: str, dimension: int) -> ConvexDomain:
    if name not in DOMAIN_NAMES:
        raise UnknownName(f"unknown domain {name!r}; known domains: {', '.join(DOMAIN_NAMES)}")
    return ConvexDomain(kind=DomainKind(name), dimension=dimension)


def _dimension(spec: GeneratorSpec, data_dimension: Optional[int]) -> int:
    default = data_dimension or _MINIMUM_DIMENSION.get(spec.name, 1)
    dimension = _number(spec.params, 'dim', int, default)
    if data_dimension is not None and dimension != data_dimension:
        raise DomainViolation(f"generator dimension {dimension} does not match the data dimension {data_dimension}")
    if dimension < 1:
        raise DomainViolation(f"dimension must be positive, got {dimension}")
    return dimension


def build_generator(spec: GeneratorSpec, data_dimension: Optional[int] = None) -> ConvexGenerator:
    """
    Generator named by ``spec``. The dimension comes from ``dim``, else from the
    data, else the smallest dimension the generator supports.
    """
    if spec.name not in GENERATOR_NAMES:
        raise UnknownName(f"unknown generator {spec.name!r}; known generators: {', '.join(GENERATOR_NAMES)}")
    _check_params('generator', spec.name, spec.params, _GENERATOR_PARAMS[spec.name])

    if spec.name == 'mahalanobis':
        if 'W' not in spec.params:
            raise DomainViolation("the mahalanobis generator needs W=<path to a CSV matrix>")
        W = read_matrix(spec.params['W'])
        if data_dimension is not None and W.shape[0] != data_dimension:
            raise DomainViolation(f"W is {W.shape[0]}-dimensional but the data has dimension {data_dimension}")
        domain = build_domain(spec.params['domain'], W.shape[0]) if 'domain' in spec.params else None
        return make_generator_squared_mahalanobis(W, domain=domain)

    dimension = _dimension(spec, data_dimension)
    if spec.name == 'sqnorm':
        domain = build_domain(spec.params['domain'], dimension) if 'domain' in spec.params else None
        return make_generator_squared_norm(dimension, domain=domain)
    if spec.name == 'negentropy':
        return make_generator_negative_entropy(dimension)
    return make_generator_negative_entropy_orthant(dimension)


def build_divergence(spec: DivergenceSpec, gen: ConvexGenerator) -> DivergenceFn:
    """Divergence named by ``spec``, built on the generator's dimension and, where it applies, its domain."""
    if spec.name not in DIVERGENCE_NAMES:
        raise UnknownName(f"unknown divergence {spec.name!r}; known divergences: {', '.join(DIVERGENCE_NAMES)}")
    _check_params('divergence', spec.name, spec.params, _DIVERGENCE_PARAMS[spec.name])
    dimension = gen.domain.dimension

    if spec.name == 'bregman-of-generator':
        return bregman_from_generator(gen)
    if spec.name == 'abs-distance':
        return make_euclidean_distance(dimension, domain=gen.domain)
    if spec.name == 'kl':
        return make_kl_divergence(dimension)
    if spec.name == 'generalized-kl':
        return make_kl_divergence(dimension, generalized=True)
    if spec.name == 'squared-mahalanobis':
        if 'W' in spec.params:
            W = read_matrix(spec.params['W'])
        elif gen.matrix is not None:
            W = gen.matrix
        else:
            raise DomainViolation("squared-mahalanobis needs W=<path> unless the generator is quadratic")
        return make_squared_mahalanobis_divergence(W, domain=gen.domain)
    if spec.name == 'scaled-bregman':
        return scale_divergence(bregman_from_generator(gen), _number(spec.params, 'scale', float,
                                                                     DEFAULT_DIVERGENCE_SCALE))
    return add_quartic_term(bregman_from_generator(gen), _number(spec.params, 'eps', float, DEFAULT_QUARTIC_EPS))
