"""Classical k-center 2-approximations and optimum recovery through them.

On 2-perturbation-resilient instances the Voronoi partition of any
2-approximate center set is the unique optimal clustering, so both algorithms
here double as exact solvers on resilient inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import AsymmetricUnsupported, Clustering, Instance, voronoi

GONZALEZ = "gonzalez"
HOCHBAUM_SHMOYS = "hochbaum-shmoys"


@dataclass(frozen=True)
class ApproxResult:
    centers: tuple
    radius: object
    algorithm: str


def _require_plain_symmetric(inst: Instance) -> None:
    if not inst.symmetric:
        raise AsymmetricUnsupported("2-approximations need a symmetric instance")
    if inst.z != 0:
        raise ValueError("2-approximations do not handle outliers (z must be 0)")


def gonzalez(inst: Instance) -> ApproxResult:
    """Farthest-point traversal from point 0 (ties broken by lowest index)."""
    _require_plain_symmetric(inst)
    dist = inst.dist
    centers = [0]
    mind = list(dist[0])
    for _ in range(inst.k - 1):
        far = 0
        for u in range(1, inst.n):
            if mind[u] > mind[far]:
                far = u
        centers.append(far)
        row = dist[far]
        for u in range(inst.n):
            if row[u] < mind[u]:
                mind[u] = row[u]
    return ApproxResult(tuple(centers), max(mind), GONZALEZ)


def _greedy_ball_cover(inst: Instance, R) -> list[int]:
    """Repeatedly open the lowest-index uncovered point and remove its 2R-ball."""
    tol = inst.tol
    dist = inst.dist
    uncovered = set(range(inst.n))
    centers = []
    while uncovered:
        p = min(uncovered)
        centers.append(p)
        row = dist[p]
        uncovered = {u for u in uncovered if row[u] > 2 * R + tol}
    return centers


def hochbaum_shmoys(inst: Instance) -> ApproxResult:
    """Threshold search: at each candidate radius greedily remove 2R-balls; the
    smallest candidate where at most k balls suffice is within the optimum, so
    the returned centers are a 2-approximation."""
    _require_plain_symmetric(inst)
    cands = inst.distinct_distances()
    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if len(_greedy_ball_cover(inst, cands[mid])) <= inst.k:
            hi = mid
        else:
            lo = mid + 1
    centers = _greedy_ball_cover(inst, cands[lo])
    for u in range(inst.n):
        if len(centers) == inst.k:
            break
        if u not in centers:
            centers.append(u)
    dist = inst.dist
    radius = max(min(dist[c][u] for c in centers) for u in range(inst.n))
    return ApproxResult(tuple(centers), radius, HOCHBAUM_SHMOYS)


def recover_via_2approx(inst: Instance, algorithm: str = GONZALEZ) -> Clustering:
    """Voronoi partition of a 2-approximate center set; equals the unique
    optimum whenever the instance is 2-perturbation resilient."""
    if algorithm == GONZALEZ:
        result = gonzalez(inst)
    elif algorithm == HOCHBAUM_SHMOYS:
        result = hochbaum_shmoys(inst)
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    return voronoi(inst, result.centers)
