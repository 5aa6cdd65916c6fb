import logging
from typing import Iterator, List, Optional, Set, Tuple

import numpy as np

from bregman_info.constants import (
    CENTROID_MINIMIZER_SLACK,
    DEFAULT_CLUSTER_REL_TOL,
    DEFAULT_MAX_ITERS,
    DEFAULT_RESTARTS,
    DUAL_LOSS_TOLERANCE,
)
from bregman_info.core import ConvexGenerator, WeightedDataset
from bregman_info.divergence import bregman_from_generator
from bregman_info.errors import (
    CentroidOnBoundary,
    DomainViolation,
    EmptyCluster,
    InvalidClusterCount,
)
from bregman_info.information import jensen_gap_information
from bregman_info.models.clustering import (
    ClusteringState,
    ClusteringStep,
    ClusterRepair,
    LossRecord,
    StopReason,
)

logger = logging.getLogger(__name__)

EXHAUSTIVE_MAX_ROWS = 12


def _divergence(gen: ConvexGenerator):
    return gen.divergence or bregman_from_generator(gen)


def _as_assignments(assignments, n: int, k: int) -> np.ndarray:
    assignments = np.asarray(assignments, dtype=np.int64)
    if assignments.shape != (n,):
        raise DomainViolation(f"expected {n} assignments, got shape {assignments.shape}")
    if np.any(assignments < 0) or np.any(assignments >= k):
        raise DomainViolation(f"assignments must lie in [0, {k})")
    return assignments


def _cluster_mean(ds: WeightedDataset, members: np.ndarray) -> np.ndarray:
    mass = float(np.sum(ds.weights[members]))
    if mass > 0:
        return ds.weights[members] @ ds.points[members] / mass
    # zero-mass clusters carry no loss; any member average keeps the centroid in the domain
    return np.mean(ds.points[members], axis=0)


def jensen_gap_loss(gen: ConvexGenerator, ds: WeightedDataset, assignments, centroids) -> float:
    """
    Jensen gap loss of a hard partition: sum over clusters of the cluster mass
    times the Jensen gap information of the cluster's renormalized weights.
    """
    centroids = np.atleast_2d(np.asarray(centroids, dtype=np.float64))
    k = centroids.shape[0]
    assignments = _as_assignments(assignments, ds.size, k)
    total = 0.0
    for cluster in range(k):
        members = np.flatnonzero(assignments == cluster)
        if members.size == 0:
            raise EmptyCluster(f"cluster {cluster} has no members")
        mean = _cluster_mean(ds, members)
        if not np.allclose(centroids[cluster], mean, rtol=1e-9, atol=1e-10):
            raise DomainViolation(f"centroid {cluster} is not the weighted mean of its cluster")
        mass = float(np.sum(ds.weights[members]))
        if mass == 0.0:
            continue
        cluster_ds = WeightedDataset(weights=ds.weights[members] / mass, points=ds.points[members],
                                     domain=ds.domain)
        total += mass * jensen_gap_information(gen, cluster_ds)
    return total


def divergence_form_loss(gen: ConvexGenerator, ds: WeightedDataset, assignments, centroids) -> float:
    """sum_i mu_i d_phi(x_i, c_a(i))"""
    centroids = np.atleast_2d(np.asarray(centroids, dtype=np.float64))
    assignments = _as_assignments(assignments, ds.size, centroids.shape[0])
    divergence = _divergence(gen)
    support = np.flatnonzero(ds.support())
    values = np.array([divergence(ds.points[i], centroids[assignments[i]]) for i in support])
    return float(ds.weights[support] @ values)


def merge_decreases_loss_check(gen: ConvexGenerator, x1, x2, mu1: float, mu2: float) -> float:
    """Loss decrease from replacing x1 and x2 by their weighted mean; positive iff x1 != x2."""
    if mu1 <= 0 or mu2 <= 0:
        raise DomainViolation("merge weights must be positive")
    x1 = np.asarray(x1, dtype=np.float64)
    x2 = np.asarray(x2, dtype=np.float64)
    mass = mu1 + mu2
    merged = (mu1 * x1 + mu2 * x2) / mass
    return mu1 * gen.evaluate(x1) + mu2 * gen.evaluate(x2) - mass * gen.evaluate(merged)


def _distinct_rows(ds: WeightedDataset) -> Tuple[np.ndarray, np.ndarray]:
    """First-occurrence index of every distinct row and the total weight it carries."""
    _, first, inverse = np.unique(ds.points, axis=0, return_index=True, return_inverse=True)
    mass = np.bincount(inverse.reshape(-1), weights=ds.weights, minlength=first.shape[0])
    order = np.argsort(first)
    return first[order], mass[order]


def _seed_centroid(domain, point: np.ndarray, cluster: int, clamp_boundary: bool) -> np.ndarray:
    if domain.contains_interior(point):
        return point.copy()
    if not clamp_boundary:
        raise CentroidOnBoundary(f"initial centroid {cluster} lies on the boundary of {domain.describe()}")
    return domain.project_interior(point)


def _initial_centroids(gen: ConvexGenerator, divergence, ds: WeightedDataset, k: int, rng: np.random.Generator,
                       clamp_boundary: bool) -> np.ndarray:
    """
    Divergence-weighted seeding over the distinct rows: the first centroid is drawn
    by mass, each further one with probability proportional to mass times the
    divergence to the nearest centroid chosen so far.
    """
    rows, mass = _distinct_rows(ds)
    points = ds.points[rows]
    if np.sum(mass) > 0:
        first = int(rng.choice(rows.shape[0], p=mass / np.sum(mass)))
    else:
        first = int(rng.integers(rows.shape[0]))
    chosen = [first]
    centroids = [_seed_centroid(gen.domain, points[first], 0, clamp_boundary)]
    nearest = np.array([divergence(x, centroids[0]) for x in points])
    while len(chosen) < k:
        score = mass * np.maximum(nearest, 0.0)
        score[chosen] = 0.0
        total = float(np.sum(score))
        if total > 0:
            pick = int(rng.choice(rows.shape[0], p=score / total))
        else:
            remaining = np.setdiff1d(np.arange(rows.shape[0]), chosen)
            pick = int(rng.choice(remaining))
        chosen.append(pick)
        centroids.append(_seed_centroid(gen.domain, points[pick], len(centroids), clamp_boundary))
        nearest = np.minimum(nearest, [divergence(x, centroids[-1]) for x in points])
    return np.array(centroids)


def _assign(divergence, ds: WeightedDataset, centroids: np.ndarray) -> np.ndarray:
    distances = np.array([[divergence(x, c) for c in centroids] for x in ds.points])
    # argmin returns the first minimum, so ties go to the lowest cluster index
    return np.argmin(distances, axis=1)


class _Update:
    def __init__(self, assignments: np.ndarray, centroids: np.ndarray, means: np.ndarray,
                 repairs: List[ClusterRepair], clamped: Set[int]):
        self.assignments = assignments
        self.centroids = centroids
        self.means = means
        self.repairs = repairs
        self.clamped = clamped


def _repair_empty(divergence, ds: WeightedDataset, assignments: np.ndarray, centroids: np.ndarray,
                  cluster: int, iteration: int) -> ClusterRepair:
    counts = np.bincount(assignments, minlength=centroids.shape[0])
    best, best_value = None, -np.inf
    for i in range(ds.size):
        if counts[assignments[i]] < 2:
            continue
        value = divergence(ds.points[i], centroids[assignments[i]])
        if value > best_value:
            best, best_value = i, value
    if best is None:
        raise EmptyCluster(f"cluster {cluster} is empty and no cluster can spare a point")
    source = int(assignments[best])
    assignments[best] = cluster
    logger.warning(f"Cluster {cluster} came up empty at iteration {iteration}; moved row {best} from cluster {source}")
    return ClusterRepair(iteration=iteration, cluster=cluster, point=int(best), source_cluster=source)


def _update(gen: ConvexGenerator, divergence, ds: WeightedDataset, assignments: np.ndarray,
            centroids: np.ndarray, iteration: int, clamp_boundary: bool) -> _Update:
    k = centroids.shape[0]
    assignments = assignments.copy()
    repairs = []
    for cluster in range(k):
        if not np.any(assignments == cluster):
            repairs.append(_repair_empty(divergence, ds, assignments, centroids, cluster, iteration))

    domain = gen.domain
    means = np.array([_cluster_mean(ds, np.flatnonzero(assignments == cluster)) for cluster in range(k)])
    updated = means.copy()
    clamped = set()
    for cluster in range(k):
        if domain.contains_interior(means[cluster]):
            continue
        if not clamp_boundary:
            raise CentroidOnBoundary(f"centroid {cluster} lies on the boundary of {domain.describe()}")
        updated[cluster] = domain.project_interior(means[cluster])
        clamped.add(cluster)
        logger.warning(f"Centroid {cluster} lies on the boundary at iteration {iteration}; pulled into the interior")
    return _Update(assignments, updated, means, repairs, clamped)


def _relative_change(previous: float, current: float) -> float:
    return abs(previous - current) / max(abs(previous), np.finfo(float).tiny)


def _lloyd_run(gen: ConvexGenerator, ds: WeightedDataset, k: int, rng: np.random.Generator, max_iters: int,
               rel_tol: float, restart: int, clamp_boundary: bool) -> ClusteringState:
    divergence = _divergence(gen)
    centroids = _initial_centroids(gen, divergence, ds, k, rng, clamp_boundary)

    assignments = _assign(divergence, ds, centroids)
    trace = [LossRecord(iteration=0, step=ClusteringStep.ASSIGNMENT,
                        loss=divergence_form_loss(gen, ds, assignments, centroids))]
    repairs: List[ClusterRepair] = []
    clamped: Set[int] = set()
    previous_loss: Optional[float] = None
    stop_reason = StopReason.MAX_ITERS
    iteration = 0
    update = None

    while iteration < max_iters:
        iteration += 1
        update = _update(gen, divergence, ds, assignments, centroids, iteration, clamp_boundary)
        assignments, centroids = update.assignments, update.centroids
        repairs.extend(update.repairs)
        clamped |= update.clamped
        loss = divergence_form_loss(gen, ds, assignments, centroids)
        trace.append(LossRecord(iteration=iteration, step=ClusteringStep.UPDATE, loss=loss))
        logger.debug(f"Restart {restart}, iteration {iteration}: loss {loss:.17g}")

        candidate = _assign(divergence, ds, centroids)
        trace.append(LossRecord(iteration=iteration, step=ClusteringStep.ASSIGNMENT,
                                loss=divergence_form_loss(gen, ds, candidate, centroids)))
        if np.array_equal(candidate, assignments):
            stop_reason = StopReason.FIXED_POINT
            break
        if previous_loss is not None and _relative_change(previous_loss, loss) < rel_tol:
            stop_reason = StopReason.TOLERANCE
            break
        if iteration == max_iters:
            break
        assignments = candidate
        previous_loss = loss

    if update is None:
        # max_iters == 0 never reaches an update; report the seeded partition
        update = _update(gen, divergence, ds, assignments, centroids, 0, clamp_boundary)
        assignments, centroids = update.assignments, update.centroids
        repairs.extend(update.repairs)
        clamped |= update.clamped

    loss = divergence_form_loss(gen, ds, assignments, centroids)
    jensen_form = jensen_gap_loss(gen, ds, assignments, update.means)
    if not update.clamped and abs(jensen_form - loss) > DUAL_LOSS_TOLERANCE * (1.0 + abs(loss)):
        logger.warning(f"Divergence-form loss {loss:.17g} and Jensen-form loss {jensen_form:.17g} disagree")
    return ClusteringState(
        assignments=[int(a) for a in assignments],
        centroids=centroids.tolist(),
        loss=loss,
        jensen_form_loss=jensen_form,
        iteration=iteration,
        stop_reason=stop_reason,
        restart=restart,
        loss_trace=trace,
        repairs=repairs,
        clamped_centroids=sorted(clamped),
    )


def bregman_lloyd(gen: ConvexGenerator, ds: WeightedDataset, k: int, seed: int = 0,
                  max_iters: int = DEFAULT_MAX_ITERS, rel_tol: float = DEFAULT_CLUSTER_REL_TOL,
                  restarts: int = DEFAULT_RESTARTS, clamp_boundary: bool = True) -> ClusteringState:
    """
    Hard Bregman clustering by alternating nearest-centroid assignment and
    weighted-mean updates.

    Parameters:
    --------
    gen : ConvexGenerator whose Bregman divergence compares points to centroids
    ds : WeightedDataset on the generator's domain
    k : number of clusters, at most the number of distinct rows
    seed : seed for the divergence-weighted seeding; restart r draws from (seed, r)
    max_iters : cap on update steps
    rel_tol : stop once the relative loss change between updates falls below this
    restarts : independent initializations; the lowest loss wins, ties to the earliest
    clamp_boundary : pull boundary centroids into the interior instead of raising CentroidOnBoundary

    Returns:
    --------
    ClusteringState - partition, centroids, both loss forms and the run history
    """
    if ds.domain.kind != gen.domain.kind or ds.domain.dimension != gen.domain.dimension:
        raise DomainViolation(f"dataset on {ds.domain.describe()} but generator on {gen.domain.describe()}")
    distinct = _distinct_rows(ds)[0].shape[0]
    if k < 1 or k > distinct:
        raise InvalidClusterCount(f"k must lie in [1, {distinct}] for this dataset, got {k}")
    if restarts < 1:
        raise InvalidClusterCount(f"restarts must be positive, got {restarts}")

    best = None
    for restart in range(restarts):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(restart,)))
        state = _lloyd_run(gen, ds, k, rng, max_iters, rel_tol, restart, clamp_boundary)
        if best is None or state.loss < best.loss - CENTROID_MINIMIZER_SLACK * (1.0 + abs(best.loss)):
            best = state
    logger.info(f"Clustering finished with loss {best.loss:.6e} after {best.iteration} iterations "
                f"({best.stop_reason.value}, restart {best.restart})")
    return best


def _partitions(n: int, k: int) -> Iterator[List[int]]:
    """Restricted growth strings: every partition of n rows into exactly k labeled-by-first-use blocks."""
    labels = [0] * n

    def extend(position: int, used: int):
        if n - position < k - used:
            return
        if position == n:
            if used == k:
                yield list(labels)
            return
        for label in range(min(used + 1, k)):
            labels[position] = label
            yield from extend(position + 1, max(used, label + 1))

    yield from extend(1, 1) if n > 0 else iter(())


def exhaustive_partition_loss(gen: ConvexGenerator, ds: WeightedDataset, k: int) -> Tuple[float, List[int]]:
    """Smallest Jensen gap loss over all partitions into k nonempty clusters, for small datasets."""
    n = ds.size
    if n > EXHAUSTIVE_MAX_ROWS:
        raise InvalidClusterCount(f"exhaustive search is limited to {EXHAUSTIVE_MAX_ROWS} rows, got {n}")
    if k < 1 or k > n:
        raise InvalidClusterCount(f"k must lie in [1, {n}], got {k}")
    values = np.array([gen.evaluate(x) for x in ds.points])
    weighted_values = float(ds.weights @ values)
    best_loss, best_labels = np.inf, None
    for labels in _partitions(n, k):
        assignments = np.asarray(labels)
        loss = weighted_values
        for cluster in range(k):
            members = assignments == cluster
            mass = float(np.sum(ds.weights[members]))
            if mass > 0:
                loss -= mass * gen.evaluate(ds.weights[members] @ ds.points[members] / mass)
        if loss < best_loss:
            best_loss, best_labels = loss, labels
    return float(best_loss), best_labels
