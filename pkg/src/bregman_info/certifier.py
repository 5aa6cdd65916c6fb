import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from bregman_info.constants import (
    AFFINE_FIT_TOLERANCE,
    CENTROID_MINIMIZER_PROBES,
    CENTROID_MINIMIZER_SLACK,
    COUNTEREXAMPLE_BISECTION_DEPTH,
    DEFAULT_CERTIFY_TOL,
    DEFAULT_N_RANGE,
    DEFAULT_SAMPLER_RADIUS,
    DIAGNOSTIC_POINTS,
    GRAD_RECOVERY_TOLERANCE,
    H2_CONSISTENCY_TOLERANCE,
    HOMOGENEITY_SCALARS,
    HOMOGENEITY_TOLERANCE,
    LINEARITY_TOLERANCE,
    ODDNESS_TOLERANCE,
    PROBE_RADIUS_FACTOR,
)
from bregman_info.core import ConvexDomain, ConvexGenerator, DomainKind, WeightedDataset, centroid
from bregman_info.divergence import DivergenceFn
from bregman_info.errors import (
    CentroidNotInterior,
    DomainViolation,
    RankDeficientProbes,
    SamplerDomainMismatch,
    StepLeavesDomain,
)
from bregman_info.information import divergence_information, jensen_gap_information
from bregman_info.models.certification import (
    CertificationReport,
    Counterexample,
    StructuralDiagnostics,
    Verdict,
)
from bregman_info.models.checks import (
    AffineFit,
    CentroidMinimizerCheck,
    CheckSummary,
    GradientRecovery,
    OddnessCheck,
)

logger = logging.getLogger(__name__)

SAMPLED_VERDICT_NOTE = (
    "Sampled verdict: information equivalence held on every trial run. "
    "Sampling can refute but never prove that d is the Bregman divergence of phi."
)
REFUTED_NOTE = "Information equivalence fails on the counterexample, so d is not the Bregman divergence of phi."

# singular values below this fraction of the largest are treated as zero
AFFINE_FIT_RCOND = 1e-10

# step multipliers every diagnostic direction must tolerate
_DIRECTION_MULTIPLIERS = (-2.5, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 2.5)


def sample_domain_points(domain: ConvexDomain, rng: np.random.Generator, m: int,
                         radius: float = DEFAULT_SAMPLER_RADIUS) -> np.ndarray:
    """
    Interior points drawn from the domain's point law: uniform on [-R, R] per
    coordinate, uniform on [margin, R] on the orthant, Dirichlet(1, ..., 1) on
    the simplex pulled into the interior.
    """
    dimension = domain.dimension
    if domain.kind == DomainKind.FULL_SPACE:
        return rng.uniform(-radius, radius, size=(m, dimension))
    if domain.kind == DomainKind.POSITIVE_ORTHANT:
        return rng.uniform(domain.interior_margin, radius, size=(m, dimension))
    draws = rng.dirichlet(np.ones(dimension), size=m)
    return np.array([domain.project_interior(row) for row in draws])


class TrialSampler(BaseModel):
    model_config = ConfigDict(frozen=True)

    seed: int = Field(ge=0)
    domain: ConvexDomain
    trials: int = Field(default=1000, ge=1)
    n_range: Tuple[int, int] = Field(default=DEFAULT_N_RANGE, description="Inclusive range of dataset sizes")
    radius: float = Field(default=DEFAULT_SAMPLER_RADIUS, gt=0)

    @model_validator(mode='after')
    def validate_n_range(self):
        low, high = self.n_range
        if low < 1 or high < low:
            raise ValueError(f"n_range must satisfy 1 <= low <= high, got {self.n_range}")
        return self

    def rng(self, index: int) -> np.random.Generator:
        """Generator for trial ``index``; independent of evaluation order."""
        return np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=(index,)))

    def sample_points(self, rng: np.random.Generator, m: int) -> np.ndarray:
        return sample_domain_points(self.domain, rng, m, self.radius)

    def sample_weights(self, rng: np.random.Generator, n: int) -> np.ndarray:
        weights = rng.dirichlet(np.ones(n))
        return weights / np.sum(weights)

    def trial(self, index: int) -> WeightedDataset:
        rng = self.rng(index)
        low, high = self.n_range
        n = int(rng.integers(low, high, endpoint=True))
        weights = self.sample_weights(rng, n)
        return WeightedDataset(weights=weights, points=self.sample_points(rng, n), domain=self.domain)


class TrialOutcome(NamedTuple):
    index: int
    dataset: WeightedDataset
    i_phi: float
    i_d: float
    identity_residual: float

    @property
    def gap(self) -> float:
        return self.i_phi - self.i_d

    @property
    def scaled_gap(self) -> float:
        return abs(self.gap) / (1.0 + abs(self.i_phi) + abs(self.i_d))


def residual(gen: ConvexGenerator, d: DivergenceFn, x, y) -> float:
    """f(x, y) = d(x, y) - phi(x) + phi(y)"""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return d(x, y) - gen.evaluate(x) + gen.evaluate(y)


def _g(gen: ConvexGenerator, d: DivergenceFn, y: np.ndarray, v: np.ndarray) -> float:
    point = y + v
    if not gen.domain.contains(point):
        raise StepLeavesDomain(f"y + v leaves {gen.domain.describe()}")
    return residual(gen, d, point, y)


def _require_interior(domain: ConvexDomain, y: np.ndarray):
    if not domain.contains_interior(y):
        raise DomainViolation(f"y must be interior to {domain.describe()}")


def check_mean_zero_residual(gen: ConvexGenerator, d: DivergenceFn, ds: WeightedDataset) -> float:
    """sum_i mu_i f(x_i, y); equals I_d - I_phi, so it vanishes exactly when the informations agree."""
    y = centroid(ds).point
    if not d.domain.contains_interior(y):
        raise CentroidNotInterior(f"centroid is not interior to {d.domain.describe()}")
    support = ds.support()
    values = np.array([residual(gen, d, x, y) for x in ds.points[support]])
    return float(ds.weights[support] @ values)


def check_g_oddness(gen: ConvexGenerator, d: DivergenceFn, y, v,
                    tolerance: float = ODDNESS_TOLERANCE) -> OddnessCheck:
    y = np.asarray(y, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    _require_interior(gen.domain, y)
    forward, backward = _g(gen, d, y, v), _g(gen, d, y, -v)
    value = abs(forward + backward)
    return OddnessCheck(passed=value <= tolerance * (1.0 + max(abs(forward), abs(backward))), residual=value)


def check_g_homogeneity(gen: ConvexGenerator, d: DivergenceFn, y, v, c: float) -> float:
    y = np.asarray(y, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    _require_interior(gen.domain, y)
    return abs(_g(gen, d, y, c * v) - c * _g(gen, d, y, v))


def check_g_convex_combination(gen: ConvexGenerator, d: DivergenceFn, y, vs, weights) -> float:
    y = np.asarray(y, dtype=np.float64)
    vs = np.atleast_2d(np.asarray(vs, dtype=np.float64))
    weights = np.asarray(weights, dtype=np.float64)
    if np.any(weights < 0) or abs(float(np.sum(weights)) - 1.0) > 1e-12:
        raise DomainViolation("convex combination weights must be nonnegative and sum to 1")
    _require_interior(gen.domain, y)
    combined = _g(gen, d, y, weights @ vs)
    return abs(combined - sum(w * _g(gen, d, y, v) for w, v in zip(weights, vs)))


def check_g_linearity(gen: ConvexGenerator, d: DivergenceFn, y, vs, coefficients) -> float:
    y = np.asarray(y, dtype=np.float64)
    vs = np.atleast_2d(np.asarray(vs, dtype=np.float64))
    coefficients = np.asarray(coefficients, dtype=np.float64)
    _require_interior(gen.domain, y)
    combined = _g(gen, d, y, coefficients @ vs)
    return abs(combined - sum(c * _g(gen, d, y, v) for c, v in zip(coefficients, vs)))


def default_probes(domain: ConvexDomain, y, rng: np.random.Generator) -> np.ndarray:
    """y +/- r e_i pulled back into the domain, plus two random interior points near y."""
    y = np.asarray(y, dtype=np.float64)
    r = PROBE_RADIUS_FACTOR * domain.scale()
    probes = []
    for i in range(domain.dimension):
        step = np.zeros(domain.dimension)
        step[i] = r
        probes.append(domain.project_interior(y + step))
        probes.append(domain.project_interior(y - step))
    for _ in range(2):
        jitter = rng.uniform(-r, r, size=domain.dimension)
        if domain.kind == DomainKind.SIMPLEX:
            jitter -= np.mean(jitter)
        probes.append(domain.project_interior(y + jitter))
    return np.array(probes)


def _expected_rank(domain: ConvexDomain) -> int:
    # on the simplex the coordinates sum to the constant column
    if domain.kind == DomainKind.SIMPLEX:
        return domain.dimension
    return domain.dimension + 1


def fit_affine_residual(gen: ConvexGenerator, d: DivergenceFn, y, probes) -> AffineFit:
    """
    Least-squares fit f(x, y) ~ h1^T x + h2 over the probes.

    On the simplex only the tangent part of h1 is identifiable; the minimum-norm
    solution is returned and h2 + h1^T y is unaffected by the ambiguity.
    """
    y = np.asarray(y, dtype=np.float64)
    probes = np.atleast_2d(np.asarray(probes, dtype=np.float64))
    dimension = gen.domain.dimension
    if probes.shape[1] != dimension or probes.shape[0] < dimension + 1:
        raise RankDeficientProbes(f"need at least {dimension + 1} probes of dimension {dimension}")
    values = np.array([residual(gen, d, x, y) for x in probes])
    design = np.hstack([probes, np.ones((probes.shape[0], 1))])
    coefficients, _, rank, singular_values = np.linalg.lstsq(design, values, rcond=AFFINE_FIT_RCOND)
    expected = _expected_rank(gen.domain)
    if rank < expected:
        raise RankDeficientProbes(f"probe design has rank {rank}, expected {expected}")
    fitted = design @ coefficients
    return AffineFit(
        h1=[float(c) for c in coefficients[:dimension]],
        h2=float(coefficients[dimension]),
        max_fit_residual=float(np.max(np.abs(fitted - values))),
        condition_number=float(singular_values[0] / singular_values[expected - 1]),
        rank=int(rank),
    )


def check_h2_consistency(fit: AffineFit, y) -> float:
    """|h2 + h1^T y|, zero whenever d(y, y) = 0 and f is affine."""
    return abs(fit.h2 + float(np.dot(fit.h1, np.asarray(y, dtype=np.float64))))


def _affine_scale(gen: ConvexGenerator, d: DivergenceFn, y, probes) -> float:
    return max(abs(residual(gen, d, x, y)) for x in probes)


def check_gradient_recovery(gen: ConvexGenerator, d: DivergenceFn, y, probes=None,
                            rng: Optional[np.random.Generator] = None) -> GradientRecovery:
    """
    Discrepancy between grad phi(y) and -h1(y). On the simplex both are centered
    first, since only directions x - y with zero coordinate sum constrain them.
    """
    y = np.asarray(y, dtype=np.float64)
    _require_interior(gen.domain, y)
    if probes is None:
        probes = default_probes(gen.domain, y, rng or np.random.default_rng(0))
    fit = fit_affine_residual(gen, d, y, probes)
    if fit.max_fit_residual > AFFINE_FIT_TOLERANCE * (1.0 + _affine_scale(gen, d, y, probes)):
        return GradientRecovery(status='not_affine', discrepancy=None, fit=fit)
    combined = gen.grad(y) + np.asarray(fit.h1)
    if gen.domain.kind == DomainKind.SIMPLEX:
        combined = combined - np.mean(combined)
    return GradientRecovery(status='ok', discrepancy=float(np.max(np.abs(combined))), fit=fit)


def check_centroid_minimizer(d: DivergenceFn, ds: WeightedDataset, probe_count: int = CENTROID_MINIMIZER_PROBES,
                             seed: int = 0) -> CentroidMinimizerCheck:
    """
    Probe z -> sum mu_i d(x_i, z) at random interior z and at points near the
    centroid; a value below the centroid's certifies that d is not Bregman.
    """
    domain = d.domain
    y = centroid(ds).point
    if not domain.contains_interior(y):
        raise CentroidNotInterior(f"centroid is not interior to {domain.describe()}")
    support = ds.support()
    points, weights = ds.points[support], ds.weights[support]

    def objective(z):
        return float(weights @ np.array([d(x, z) for x in points]))

    base = objective(y)
    slack = CENTROID_MINIMIZER_SLACK * (1.0 + abs(base))
    rng = np.random.default_rng(seed)
    far = sample_domain_points(domain, rng, (probe_count + 1) // 2)
    near = []
    for index in range(probe_count - len(far)):
        radius = domain.scale() * 10.0 ** (-(index % 3) - 1)
        jitter = rng.uniform(-radius, radius, size=domain.dimension)
        if domain.kind == DomainKind.SIMPLEX:
            jitter -= np.mean(jitter)
        near.append(domain.project_interior(y + jitter))
    worst = 0.0
    violating = None
    probes = 0
    for z in list(far) + near:
        if np.array_equal(z, y):
            continue
        probes += 1
        excess = objective(z) - base
        if excess < worst:
            worst = excess
            if excess < -slack and violating is None:
                violating = tuple(float(c) for c in z)
    return CentroidMinimizerCheck(passed=violating is None, probes=probes, worst_excess=worst,
                                  violating_probe=violating)


def feasible_direction(domain: ConvexDomain, y: np.ndarray, rng: np.random.Generator,
                       multipliers: Sequence[float] = _DIRECTION_MULTIPLIERS) -> np.ndarray:
    """Direction toward a random interior point, halved until y + c v stays in the domain for every c."""
    target = sample_domain_points(domain, rng, 1)[0]
    v = target - y
    if domain.kind == DomainKind.SIMPLEX:
        v = v - np.mean(v)
    for _ in range(60):
        if all(domain.contains_interior(y + c * v) for c in multipliers):
            return v
        v = 0.5 * v
    return np.zeros_like(v)


class _Accumulator:
    def __init__(self, tolerance: float):
        self.tolerance = tolerance
        self.max_residual = 0.0
        self.failed = False
        self.evaluations = 0

    def add(self, value: float, scale: float = 0.0):
        self.evaluations += 1
        self.max_residual = max(self.max_residual, value)
        if value > self.tolerance * (1.0 + scale):
            self.failed = True

    def summary(self, status: Optional[str] = None) -> CheckSummary:
        if status is None:
            status = 'failed' if self.failed else 'ok'
        return CheckSummary(max_residual=self.max_residual if self.evaluations else None,
                            tolerance=self.tolerance, passed=status == 'ok',
                            status=status, evaluations=self.evaluations)


def structural_diagnostics(gen: ConvexGenerator, d: DivergenceFn, datasets: Iterable[WeightedDataset],
                           rng: np.random.Generator) -> StructuralDiagnostics:
    """Run every structural check at the centroid of each dataset."""
    domain = gen.domain
    oddness = _Accumulator(ODDNESS_TOLERANCE)
    homogeneity = _Accumulator(HOMOGENEITY_TOLERANCE)
    convex = _Accumulator(LINEARITY_TOLERANCE)
    linearity = _Accumulator(LINEARITY_TOLERANCE)
    affine = _Accumulator(AFFINE_FIT_TOLERANCE)
    h2 = _Accumulator(H2_CONSISTENCY_TOLERANCE)
    grad = _Accumulator(GRAD_RECOVERY_TOLERANCE)
    minimizer = _Accumulator(0.0)
    not_affine = False
    points = 0

    for ds in datasets:
        y = centroid(ds).point
        if not domain.contains_interior(y):
            continue
        points += 1
        v = feasible_direction(domain, y, rng)
        w = feasible_direction(domain, y, rng)
        g_v = _g(gen, d, y, v)
        scale = max(abs(g_v), abs(_g(gen, d, y, -v)))

        oddness.add(check_g_oddness(gen, d, y, v).residual, scale)
        for c in HOMOGENEITY_SCALARS:
            homogeneity.add(check_g_homogeneity(gen, d, y, v, c), (1.0 + abs(c)) * scale)

        weights = rng.dirichlet(np.ones(2))
        convex.add(check_g_convex_combination(gen, d, y, [v, w], weights / np.sum(weights)), scale)
        coefficients = rng.uniform(-1.0, 1.0, size=2)
        linearity.add(check_g_linearity(gen, d, y, [v, w], coefficients), scale)

        probes = default_probes(domain, y, rng)
        recovery = check_gradient_recovery(gen, d, y, probes=probes)
        fit_scale = _affine_scale(gen, d, y, probes)
        affine.add(recovery.fit.max_fit_residual, fit_scale)
        h2.add(check_h2_consistency(recovery.fit, y), fit_scale)
        if recovery.status == 'ok':
            grad.add(recovery.discrepancy, float(np.max(np.abs(gen.grad(y)))))
        else:
            not_affine = True

        seed = int(rng.integers(0, 2 ** 32))
        check = check_centroid_minimizer(d, ds, probe_count=20, seed=seed)
        minimizer.add(0.0 if check.passed else -check.worst_excess)

    return StructuralDiagnostics(
        points=points,
        oddness=oddness.summary(),
        homogeneity=homogeneity.summary(),
        convex_combination=convex.summary(),
        linearity=linearity.summary(),
        affine_fit=affine.summary(),
        h2_consistency=h2.summary(),
        grad_recovery=grad.summary('not_affine' if not_affine else None),
        centroid_minimizer=minimizer.summary(),
    )


def _evaluate_trial(gen: ConvexGenerator, d: DivergenceFn, sampler: TrialSampler, index: int) -> TrialOutcome:
    ds = sampler.trial(index)
    i_phi = jensen_gap_information(gen, ds)
    i_d = divergence_information(d, ds)
    mean_residual = check_mean_zero_residual(gen, d, ds)
    return TrialOutcome(index=index, dataset=ds, i_phi=i_phi, i_d=i_d,
                        identity_residual=abs(mean_residual - (i_d - i_phi)))


def _same_domain(first: ConvexDomain, second: ConvexDomain) -> bool:
    return first.kind == second.kind and first.dimension == second.dimension


def _run_trials(gen: ConvexGenerator, d: DivergenceFn, sampler: TrialSampler, tol: float,
                workers: int, stop_on_refutation: bool) -> List[TrialOutcome]:
    outcomes: List[TrialOutcome] = []
    batch = max(32, 8 * workers)
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for start in range(0, sampler.trials, batch):
            indices = range(start, min(start + batch, sampler.trials))
            if pool is not None:
                results = list(pool.map(lambda i: _evaluate_trial(gen, d, sampler, i), indices))
            else:
                results = [_evaluate_trial(gen, d, sampler, i) for i in indices]
            for outcome in results:
                outcomes.append(outcome)
                if stop_on_refutation and outcome.scaled_gap > tol:
                    return outcomes
    finally:
        if pool is not None:
            pool.shutdown()
    return outcomes


def _scaled_gap(i_phi: float, i_d: float) -> float:
    return abs(i_phi - i_d) / (1.0 + abs(i_phi) + abs(i_d))


def _dyadic_weights(depth: int) -> Iterable[float]:
    for level in range(1, depth + 1):
        denominator = 2 ** level
        for numerator in range(1, denominator, 2):
            yield numerator / denominator


def minimize_counterexample(gen: ConvexGenerator, d: DivergenceFn, counterexample: Counterexample,
                            tol: float) -> Counterexample:
    """
    Shrink a witness to two points: for each pair of distinct supported rows,
    bisect the first weight over dyadic levels until the gap exceeds tol.
    """
    mu = np.asarray(counterexample.mu)
    X = np.asarray(counterexample.X)
    rows = [i for i in range(len(mu)) if mu[i] > 0]
    if len(rows) <= 2:
        return counterexample.model_copy(update={'minimized': True})
    for a_index, a in enumerate(rows):
        for b in rows[a_index + 1:]:
            if np.array_equal(X[a], X[b]):
                continue
            for w in _dyadic_weights(COUNTEREXAMPLE_BISECTION_DEPTH):
                ds = WeightedDataset(weights=[w, 1.0 - w], points=X[[a, b]], domain=gen.domain)
                if not d.domain.contains_interior(centroid(ds).point):
                    continue
                i_phi = jensen_gap_information(gen, ds)
                i_d = divergence_information(d, ds)
                if _scaled_gap(i_phi, i_d) > tol:
                    return Counterexample(trial_index=counterexample.trial_index, mu=[w, 1.0 - w],
                                          X=X[[a, b]].tolist(), I_phi=i_phi, I_d=i_d, gap=i_phi - i_d,
                                          minimized=True)
    logger.warning(f"Counterexample from trial {counterexample.trial_index} could not be shrunk to two points")
    return counterexample


def replay_counterexample(gen: ConvexGenerator, d: DivergenceFn, counterexample: Counterexample,
                          tol: float) -> bool:
    """Recompute both informations on the stored witness; true when it still refutes and matches."""
    ds = WeightedDataset(weights=counterexample.mu, points=counterexample.X, domain=gen.domain)
    i_phi = jensen_gap_information(gen, ds)
    i_d = divergence_information(d, ds)
    matches = i_phi == counterexample.I_phi and i_d == counterexample.I_d
    return matches and _scaled_gap(i_phi, i_d) > tol


def certify(gen: ConvexGenerator, d: DivergenceFn, sampler: TrialSampler, tol: float = DEFAULT_CERTIFY_TOL,
            workers: int = 1, stop_on_refutation: bool = True,
            diagnostic_points: int = DIAGNOSTIC_POINTS) -> CertificationReport:
    """
    Sampled decision procedure for "d is the Bregman divergence of gen".

    Parameters:
    --------
    gen : ConvexGenerator
    d : DivergenceFn under test
    sampler : TrialSampler over the shared domain
    tol : bound on |I_phi - I_d| / (1 + |I_phi| + |I_d|)
    workers : thread count; the report does not depend on it
    stop_on_refutation : stop at the first refuting trial
    diagnostic_points : number of trial centroids the structural checks run at

    Returns:
    --------
    CertificationReport - verdict, gaps, counterexample and structural diagnostics
    """
    if not (_same_domain(sampler.domain, gen.domain) and _same_domain(d.domain, gen.domain)):
        raise SamplerDomainMismatch(
            f"sampler {sampler.domain.describe()}, generator {gen.domain.describe()} "
            f"and divergence {d.domain.describe()} must share one domain")

    logger.info(f"Certifying {d.name} against {gen.name} with {sampler.trials} trials (seed {sampler.seed})")
    outcomes = _run_trials(gen, d, sampler, tol, workers, stop_on_refutation)
    refuting = next((outcome for outcome in outcomes if outcome.scaled_gap > tol), None)

    counterexample = None
    if refuting is not None:
        ds = refuting.dataset
        counterexample = Counterexample(trial_index=refuting.index, mu=ds.weights.tolist(), X=ds.points.tolist(),
                                        I_phi=refuting.i_phi, I_d=refuting.i_d, gap=refuting.gap)
        counterexample = minimize_counterexample(gen, d, counterexample, tol)
        counterexample = counterexample.model_copy(
            update={'replayed': replay_counterexample(gen, d, counterexample, tol)})
        logger.info(f"Refuted at trial {refuting.index} with gap {refuting.gap:.6e}")

    diagnostics_rng = np.random.default_rng(np.random.SeedSequence(sampler.seed, spawn_key=(sampler.trials,)))
    diagnostics = structural_diagnostics(gen, d, [outcome.dataset for outcome in outcomes[:diagnostic_points]],
                                         diagnostics_rng)

    return CertificationReport(
        verdict=Verdict.REFUTED_WITH_COUNTEREXAMPLE if refuting is not None else Verdict.CONSISTENT_WITH_BREGMAN,
        generator=gen.name,
        divergence=d.name,
        domain=gen.domain.describe(),
        seed=sampler.seed,
        trials=sampler.trials,
        trials_run=len(outcomes),
        max_abs_gap=max(outcome.scaled_gap for outcome in outcomes),
        max_raw_gap=max(abs(outcome.gap) for outcome in outcomes),
        max_identity_residual=max(outcome.identity_residual for outcome in outcomes),
        tolerance_used=tol,
        counterexample=counterexample,
        diagnostics=diagnostics,
        note=REFUTED_NOTE if refuting is not None else SAMPLED_VERDICT_NOTE,
    )
