"""Exhaustive ground-truth solvers for small instances.

Every other solver in the package is tested against :func:`brute_force`; its
verdicts (cost, partition, uniqueness) are the reference the LP and DP results
must reproduce.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from .core import KCENTER, OUTLIER, Clustering, Instance, Objective

DEFAULT_WORK_CAP = 10_000_000


class InstanceTooLarge(RuntimeError):
    """The center/outlier enumeration would exceed the configured work cap."""


@dataclass(frozen=True)
class OracleResult:
    best: Clustering
    cost: object
    unique: bool
    tie_witness: Clustering | None

    def __post_init__(self):
        if not self.unique and self.tie_witness is None:
            raise ValueError("non-unique result must carry a tie witness")


def _enumeration_work(n: int, k: int, z: int) -> int:
    return comb(n, k) * comb(n - k, min(z, n - k))


def _evaluate(inst: Instance, obj: Objective, centers: tuple[int, ...]):
    """Best solution with this center set: Voronoi distances, then drop the z
    points with the largest assigned distance (assignments do not interact, and
    off-center distances are positive, so dropping the largest is exactly
    optimal for sum and max aggregation alike).

    Returns (cost, dmin, amin, picked_outliers, boundary_tie) where
    ``boundary_tie`` means a different outlier set achieves the same cost.
    """
    dist = inst.dist
    n = inst.n
    z = inst.z
    rows = [dist[c] for c in centers]
    dmin = []
    amin = []
    for u in range(n):
        best_i = 0
        best_d = rows[0][u]
        for i in range(1, len(rows)):
            d = rows[i][u]
            if d < best_d:
                best_i, best_d = i, d
        dmin.append(best_d)
        amin.append(best_i)
    if z:
        ranked = sorted(range(n), key=lambda u: (-dmin[u], u))
        picked = tuple(ranked[:z])
        boundary_tie = abs(dmin[ranked[z]] - dmin[ranked[z - 1]]) <= inst.tol
    else:
        ranked = None
        picked = ()
        boundary_tie = False
    if obj.aggregate == "max":
        if z:
            value = obj.term(dmin[ranked[z]])
        else:
            value = max(obj.term(d) for d in dmin)
    else:
        dropped = frozenset(picked)
        value = 0
        for u in range(n):
            if u not in dropped:
                value += obj.term(dmin[u])
    return value, dmin, amin, picked, boundary_tie


def _build(inst: Instance, centers, amin, picked) -> Clustering:
    dropped = frozenset(picked)
    assignment = tuple(
        OUTLIER if u in dropped else amin[u] for u in range(inst.n)
    )
    return Clustering(assignment, centers)


def _close(a, b, tol) -> bool:
    return abs(a - b) <= tol


def brute_force(inst: Instance, obj: Objective, work_cap: int = DEFAULT_WORK_CAP) -> OracleResult:
    """Exact optimum over all k-center sets and outlier sets of size <= z.

    Uniqueness is judged on induced partitions plus outlier sets, not on center
    identities; Voronoi ties and outlier-choice ties both count as alternative
    optimal solutions.
    """
    n, k, z = inst.n, inst.k, inst.z
    if _enumeration_work(n, k, z) > work_cap:
        raise InstanceTooLarge(f"C({n},{k})*C({n - k},{z}) exceeds cap {work_cap}")
    tol = inst.tol

    best_value = None
    for centers in combinations(range(n), k):
        value = _evaluate(inst, obj, centers)[0]
        if best_value is None or value < best_value - tol:
            best_value = value

    # Second pass: collect distinct optimal (partition, outliers) identities.
    best: Clustering | None = None
    witness: Clustering | None = None
    seen_keys = set()
    for centers in combinations(range(n), k):
        value, dmin, amin, picked, boundary_tie = _evaluate(inst, obj, centers)
        if not _close(value, best_value, tol):
            continue
        clus = _build(inst, centers, amin, picked)
        key = clus.partition_key()
        if key not in seen_keys:
            seen_keys.add(key)
            if best is None:
                best = clus
            elif witness is None:
                witness = clus
        if witness is None and boundary_tie:
            # swap the last dropped point with the first kept tied point
            ranked = sorted(range(n), key=lambda u: (-dmin[u], u))
            alt_picked = tuple(ranked[: z - 1]) + (ranked[z],)
            alt = _build(inst, centers, amin, alt_picked)
            if alt.partition_key() not in seen_keys:
                seen_keys.add(alt.partition_key())
                witness = alt
        if witness is None:
            # a kept point equidistant to two centers is an alternative partition
            dropped = frozenset(picked)
            for u in range(n):
                if u in dropped or u in centers:
                    continue
                ties = [
                    i
                    for i, c in enumerate(centers)
                    if _close(inst.dist[c][u], dmin[u], tol)
                ]
                if len(ties) >= 2:
                    alt_assignment = list(clus.assignment)
                    alt_assignment[u] = ties[1]
                    alt = Clustering(tuple(alt_assignment), centers)
                    if alt.partition_key() not in seen_keys:
                        seen_keys.add(alt.partition_key())
                        witness = alt
                    break
        if witness is not None:
            break
    return OracleResult(best=best, cost=best_value, unique=witness is None, tie_witness=witness)


def brute_force_kminus1_check(
    inst: Instance, result: OracleResult, work_cap: int = DEFAULT_WORK_CAP
) -> bool:
    """True iff some (k-1)-center solution already achieves cost <= result.cost,
    which certifies that the k-cluster optimum is not unique (hence not
    resilient). False by convention for k = 1."""
    n, k, z = inst.n, inst.k, inst.z
    if k == 1:
        return False
    if _enumeration_work(n, k - 1, z) > work_cap:
        raise InstanceTooLarge(f"C({n},{k - 1})*C({n - k + 1},{z}) exceeds cap {work_cap}")
    obj = KCENTER
    tol = inst.tol
    shrunk = inst.replace(k=k - 1)
    for centers in combinations(range(n), k - 1):
        value = _evaluate(shrunk, obj, centers)[0]
        if value <= result.cost + tol:
            return True
    return False
