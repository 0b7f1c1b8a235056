"""Iterative topic discovery by progressively raising a merge threshold.

One iteration: dedup exact-duplicate points, build the cosine matrix,
threshold it into per-point neighbor sets, prune sets that are subsets of
others, average each surviving set into a centroid, glue isolated points
onto their nearest centroid, recompute centroids, then feed the centroids to
the next iteration at a higher threshold. Membership is tracked as sets of
original document indices and unioned through every merge, so topics may
overlap and every document stays covered.

The loop stops when no pair of current points reaches the next threshold
(nothing further can ever merge, since thresholds only rise), when a single
topic remains, or at the iteration cap.
"""

from dataclasses import dataclass

import numpy as np

from .corpus import DocMatrix
from .errors import EmptyGroupError, NoGroupsError
from .schedule import ThresholdSchedule
from .similarity import cosine_cross, cosine_matrix, dedup
from .validation import as_float_matrix

TERMINATION_CONVERGED = "converged"
TERMINATION_MAX_ITERS = "max_iterations"


@dataclass(frozen=True)
class TopicSnapshot:
    """State after one iteration: centroids plus original-document lineage."""

    iteration: int
    threshold: float
    centroids: np.ndarray
    membership: tuple

    @property
    def k(self):
        return self.centroids.shape[0]


@dataclass(frozen=True)
class DiscoveryTrace:
    snapshots: tuple
    converged: bool
    termination: str
    pair_dot_products: int

    @property
    def final(self) -> TopicSnapshot:
        return self.snapshots[-1]


def neighbor_sets(sim, threshold: float):
    """Per-row index sets {j : sim[i, j] >= threshold}; always contain i."""
    values = sim.values if hasattr(sim, "values") else np.asarray(sim)
    hits = values >= threshold
    np.fill_diagonal(hits, True)
    return [set(np.flatnonzero(row).tolist()) for row in hits]


def prune_subsets(groups):
    """Drop groups that are subsets of (or equal to) another group.

    Survivors are returned largest first, ties broken by lexicographic member
    order, which fixes topic numbering for everything downstream.
    """
    canon = {}
    for g in groups:
        if not g:
            raise EmptyGroupError("groups must be non-empty")
        canon.setdefault(tuple(sorted(g)), None)
    ordered = sorted(canon, key=lambda t: (-len(t), t))
    masks = []
    kept = []
    for members in ordered:
        mask = 0
        for m in members:
            mask |= 1 << m
        # Only an already-kept (therefore not smaller) group can contain us.
        if any(mask & km == mask for km in masks):
            continue
        masks.append(mask)
        kept.append(set(members))
    return kept


def group_centroids(groups, points: np.ndarray) -> np.ndarray:
    """Arithmetic mean of each group's member rows (ascending member index)."""
    points = as_float_matrix(points)
    out = np.empty((len(groups), points.shape[1]), dtype=np.float64)
    for g, members in enumerate(groups):
        if not members:
            raise EmptyGroupError(f"group {g} is empty")
        idx = sorted(members)
        out[g] = points[idx].sum(axis=0) / len(idx)
    return out


def assign_outliers(groups, centroids, points, outlier_idxs, threads: int = 1):
    """Attach each isolated point to the group with the most similar centroid.

    Ties go to the lowest group index. Returns new group sets; the inputs are
    not mutated. Raises NoGroupsError when there is no group to attach to.
    """
    if not groups:
        raise NoGroupsError("no groups to absorb outliers")
    out = [set(g) for g in groups]
    if not outlier_idxs:
        return out
    points = as_float_matrix(points)
    idx = sorted(outlier_idxs)
    sims = cosine_cross(points[idx], centroids, threads=threads)
    best = np.argmax(sims, axis=1)  # first maximum wins: lowest group index
    for pos, i in enumerate(idx):
        out[int(best[pos])].add(i)
    return out


def _dense_points(matrix):
    if isinstance(matrix, DocMatrix):
        return matrix.to_dense()
    return as_float_matrix(matrix)


def _max_offdiag(values: np.ndarray) -> float:
    n = values.shape[0]
    if n < 2:
        return -np.inf
    masked = values.copy()
    np.fill_diagonal(masked, -np.inf)
    return float(masked.max())


def discover(matrix, schedule: ThresholdSchedule, threads: int = 1) -> DiscoveryTrace:
    """Run the full progressive-threshold loop over document rows.

    Returns a trace with one snapshot per completed iteration. Topic counts
    never increase along the trace, and every original document index appears
    in at least one membership set of every snapshot.
    """
    unique, dup_map = dedup(matrix)
    n_unique = unique.n_rows if isinstance(unique, DocMatrix) else unique.shape[0]
    total_rows = n_unique + len(dup_map)
    kept_original = [i for i in range(total_rows) if i not in dup_map]
    lineage = [{orig} for orig in kept_original]
    for removed, kept_pos in dup_map.items():
        lineage[kept_pos].add(removed)

    points_matrix = unique  # DocMatrix or ndarray; sparse only on iteration 1
    points_dense = None
    sim = cosine_matrix(points_matrix, threads=threads)
    work = sim.pair_dot_products
    snapshots = []

    iteration = 0
    converged = False
    termination = TERMINATION_MAX_ITERS
    while iteration < schedule.max_iters:
        iteration += 1
        threshold = schedule.value(iteration)
        if _max_offdiag(sim.values) < threshold:
            # Thresholds only rise, so nothing will ever merge again.
            if not snapshots:
                # Nothing merged at all: every unique point is its own topic.
                if points_dense is None:
                    points_dense = _dense_points(points_matrix)
                snapshots.append(
                    TopicSnapshot(
                        iteration,
                        threshold,
                        points_dense,
                        tuple(frozenset(s) for s in lineage),
                    )
                )
            converged = True
            termination = TERMINATION_CONVERGED
            break

        if points_dense is None:
            points_dense = _dense_points(points_matrix)
        sets_all = neighbor_sets(sim, threshold)
        outliers = [i for i, s in enumerate(sets_all) if len(s) == 1]
        groups = prune_subsets([s for s in sets_all if len(s) > 1])
        centroids = group_centroids(groups, points_dense)
        groups = assign_outliers(groups, centroids, points_dense, outliers, threads)
        centroids = group_centroids(groups, points_dense)
        merged_lineage = [
            frozenset().union(*(lineage[m] for m in sorted(g))) for g in groups
        ]

        centroids, cent_dups = dedup(centroids)
        if cent_dups:
            survivors = [g for g in range(len(groups)) if g not in cent_dups]
            folded = [set(merged_lineage[g]) for g in survivors]
            for removed, kept_pos in cent_dups.items():
                folded[kept_pos] |= merged_lineage[removed]
            merged_lineage = [frozenset(s) for s in folded]

        snapshots.append(
            TopicSnapshot(
                iteration, threshold, centroids, tuple(merged_lineage)
            )
        )
        if centroids.shape[0] == 1:
            converged = True
            termination = TERMINATION_CONVERGED
            break

        points_matrix = centroids
        points_dense = centroids
        lineage = [set(s) for s in merged_lineage]
        sim = cosine_matrix(points_matrix, threads=threads)
        work += sim.pair_dot_products

    return DiscoveryTrace(tuple(snapshots), converged, termination, work)
