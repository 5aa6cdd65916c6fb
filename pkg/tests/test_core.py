import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from pydantic import ValidationError

from bregman_info.constants import GRADIENT_CHECK_TOLERANCE
from bregman_info.core import (
    ConvexDomain,
    ConvexGenerator,
    WeightedDataset,
    centroid,
    check_gradient,
    check_hessian,
    check_strict_convexity,
    entropy_divergence,
    make_generator_negative_entropy,
    make_generator_negative_entropy_orthant,
    make_generator_squared_mahalanobis,
    make_generator_squared_norm,
    validate_positive_definite,
)
from bregman_info.errors import (
    DomainViolation,
    GradientAtBoundary,
    HessianUnavailable,
    NonSymmetric,
    NotPositiveDefinite,
    StepLeavesDomain,
)

from conftest import interior_points


def test_simplex_membership_and_interior():
    simplex = ConvexDomain.simplex(3)
    assert simplex.contains([0.2, 0.3, 0.5])
    assert simplex.contains([1.0, 0.0, 0.0])
    assert not simplex.contains_interior([1.0, 0.0, 0.0])
    assert simplex.contains_interior([0.2, 0.3, 0.5])
    assert not simplex.contains([0.2, 0.3, 0.6])
    assert not simplex.contains([0.2, 0.8])


def test_orthant_and_full_space_membership():
    orthant = ConvexDomain.positive_orthant(2)
    assert orthant.contains([0.0, 4.0])
    assert not orthant.contains_interior([0.0, 4.0])
    assert not orthant.contains([-1.0, 1.0])
    assert ConvexDomain.full_space(2).contains_interior([-5.0, 1e6])
    assert not ConvexDomain.full_space(2).contains([np.nan, 0.0])


def test_ambient_interior_ignores_the_simplex_sum():
    simplex = ConvexDomain.simplex(2)
    assert simplex.contains_ambient_interior([0.6, 0.6])
    assert not simplex.contains_ambient_interior([0.0, 1.0])


@pytest.mark.parametrize("point", [[1.0, 0.0, 0.0], [0.5, 0.5, 0.0], [2.0, -1.0, 0.0], [0.0, 0.0, 0.0]])
def test_project_interior_lands_in_the_simplex_interior(point):
    simplex = ConvexDomain.simplex(3)
    projected = simplex.project_interior(point)
    assert simplex.contains_interior(projected)
    assert abs(float(np.sum(projected)) - 1.0) <= 1e-12


def test_project_interior_keeps_interior_points():
    simplex = ConvexDomain.simplex(3)
    point = np.array([0.2, 0.3, 0.5])
    assert_allclose(simplex.project_interior(point), point)


def test_weighted_dataset_rejects_bad_weights(line):
    with pytest.raises(ValidationError):
        WeightedDataset(weights=[0.5, 0.6], points=[0.0, 1.0], domain=line)
    with pytest.raises(ValidationError):
        WeightedDataset(weights=[1.5, -0.5], points=[0.0, 1.0], domain=line)


def test_weighted_dataset_rejects_rows_outside_the_domain():
    with pytest.raises(ValidationError):
        WeightedDataset.uniform([[0.5, 0.6], [0.5, 0.5]], ConvexDomain.simplex(2))


def test_weighted_dataset_is_immutable(line):
    ds = WeightedDataset.uniform([0.0, 2.0], line)
    with pytest.raises(ValueError):
        ds.points[0, 0] = 1.0


def test_centroid_is_the_weighted_mean():
    ds = WeightedDataset(weights=[0.25, 0.75], points=[[0.0, 4.0], [4.0, 0.0]], domain=ConvexDomain.full_space(2))
    result = centroid(ds)
    assert_allclose(result.point, [3.0, 1.0])
    assert result.interior


def test_centroid_on_the_simplex_boundary_is_not_interior():
    ds = WeightedDataset.uniform([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]], ConvexDomain.simplex(3))
    assert not centroid(ds).interior


def test_validate_positive_definite_rejects_asymmetric_matrices():
    with pytest.raises(NonSymmetric):
        validate_positive_definite([[1.0, 0.3], [0.1, 1.0]])
    with pytest.raises(NonSymmetric):
        validate_positive_definite([[1.0, 0.0, 0.0]])


def test_validate_positive_definite_rejects_indefinite_matrices():
    with pytest.raises(NotPositiveDefinite):
        validate_positive_definite([[1.0, 2.0], [2.0, 1.0]])
    with pytest.raises(NotPositiveDefinite):
        validate_positive_definite(np.zeros((2, 2)))


def test_mahalanobis_generator_values():
    W = np.array([[2.0, 0.5], [0.5, 1.0]])
    gen = make_generator_squared_mahalanobis(W)
    x = np.array([1.0, -2.0])
    assert gen.evaluate(x) == pytest.approx(0.5 * x @ W @ x)
    assert_allclose(gen.grad(x), W @ x)
    assert_allclose(gen.hessian(x), W)


def test_mahalanobis_domain_must_match_the_matrix():
    with pytest.raises(DomainViolation):
        make_generator_squared_mahalanobis(np.eye(2), domain=ConvexDomain.simplex(3))


def test_squared_norm_on_the_simplex():
    gen = make_generator_squared_norm(3, domain=ConvexDomain.simplex(3))
    assert gen.domain.kind.value == 'simplex'
    assert gen.evaluate([1.0, 0.0, 0.0]) == pytest.approx(0.5)


def test_negative_entropy_values():
    gen = make_generator_negative_entropy(2)
    assert gen.evaluate([0.5, 0.5]) == pytest.approx(-np.log(2.0), abs=1e-15)
    assert gen.evaluate([1.0, 0.0]) == 0.0
    assert_allclose(gen.grad([0.5, 0.5]), [1.0 - np.log(2.0)] * 2)


def test_negative_entropy_needs_two_coordinates():
    with pytest.raises(DomainViolation):
        make_generator_negative_entropy(1)


def test_negative_entropy_gradient_at_the_boundary():
    gen = make_generator_negative_entropy(2)
    with pytest.raises(GradientAtBoundary):
        gen.grad([1.0, 0.0])
    with pytest.raises(GradientAtBoundary):
        make_generator_negative_entropy_orthant(2).hessian(np.array([0.0, 1.0]))


def test_entropy_divergence_matches_kl_on_the_simplex(rng):
    for _ in range(20):
        x, y = rng.dirichlet(np.ones(4), size=2)
        expected = float(np.sum(x * np.log(x / y)))
        assert entropy_divergence(x, y) == pytest.approx(expected, rel=1e-10, abs=1e-14)


def test_entropy_divergence_handles_zero_coordinates():
    assert entropy_divergence([1.0, 0.0], [0.5, 0.5]) == pytest.approx(np.log(2.0), abs=1e-15)


def test_gradients_match_central_differences(builtin_generator, rng):
    for x in interior_points(builtin_generator.domain, rng, 100):
        assert check_gradient(builtin_generator, x) <= GRADIENT_CHECK_TOLERANCE


def test_check_gradient_rejects_steps_leaving_the_domain():
    gen = make_generator_negative_entropy(2)
    with pytest.raises(StepLeavesDomain):
        check_gradient(gen, [1e-7, 1.0 - 1e-7], h=1e-6)
    with pytest.raises(DomainViolation):
        check_gradient(gen, [1.0, 0.0])


def test_builtin_generators_are_strictly_convex(builtin_generator, rng):
    first = interior_points(builtin_generator.domain, rng, 200)
    second = interior_points(builtin_generator.domain, rng, 200)
    check = check_strict_convexity(builtin_generator, first, second)
    assert check.passed
    assert check.pairs == 200
    assert check.min_gap >= 0.0


def test_strict_convexity_flags_a_linear_function(line):
    linear = ConvexGenerator(name='linear', domain=line, value=lambda x: float(x[0]), gradient=lambda x: np.ones(1))
    check = check_strict_convexity(linear, [[0.0], [1.0]], [[2.0], [-3.0]])
    assert check.violations == 0
    assert check.non_strict_pairs == 2
    assert not check.passed


def test_builtin_hessians_are_positive_definite(builtin_generator, rng):
    check = check_hessian(builtin_generator, interior_points(builtin_generator.domain, rng, 10))
    assert check.passed
    assert check.min_eigenvalue > 0


def test_check_hessian_needs_a_hessian(line):
    gen = ConvexGenerator(name='no-hessian', domain=line, value=lambda x: float(x @ x),
                          gradient=lambda x: 2 * x)
    with pytest.raises(HessianUnavailable):
        check_hessian(gen, [[0.0]])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(min_value=-10, max_value=10), min_size=1, max_size=6))
def test_uniform_dataset_centroid_is_the_mean(values):
    ds = WeightedDataset.uniform(values, ConvexDomain.full_space(1))
    assert centroid(ds).point[0] == pytest.approx(np.mean(values), abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=1, max_value=6), st.integers(min_value=1, max_value=4),
       st.integers(min_value=0, max_value=2 ** 32 - 1), st.floats(min_value=0.0, max_value=1.0))
def test_centroid_is_affine_in_the_weights(n, dimension, seed, t):
    rng = np.random.default_rng(seed)
    domain = ConvexDomain.full_space(dimension)
    points = rng.uniform(-3.0, 3.0, size=(n, dimension))
    first, second = rng.dirichlet(np.ones(n), size=2)
    mixed = WeightedDataset(weights=t * first + (1.0 - t) * second, points=points, domain=domain)
    expected = (t * centroid(WeightedDataset(weights=first, points=points, domain=domain)).point
                + (1.0 - t) * centroid(WeightedDataset(weights=second, points=points, domain=domain)).point)
    assert_allclose(centroid(mixed).point, expected, rtol=0, atol=1e-12)
