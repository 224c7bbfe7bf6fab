"""Clustering instances, partitions, objectives, and the metric checks shared by every solver.

Points are abstract indices 0..n-1; geometry enters only through the distance
matrix. Instances are exact (int/Fraction entries) or floating; every solver in
the package keeps the instance's arithmetic so that integrality and optimality
verdicts are never a rounding artifact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

OUTLIER = -1

FLOAT_TOL = 1e-9
# Rational inputs larger than this are demoted to floats; exact pivoting on
# big instances is not worth the cost.
EXACTNESS_CAP = 256


class ClusteringInvalid(ValueError):
    """A clustering is inconsistent with the instance it is applied to."""


class EmptyCenters(ValueError):
    """Voronoi assignment needs at least one center."""


class AsymmetricUnsupported(ValueError):
    """The operation is defined for symmetric instances only."""


def is_exact_number(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


# ---------------------------------------------------------------------------
# objectives


@dataclass(frozen=True)
class Objective:
    """Center-based objective: aggregate d(center, point)**exponent over non-outliers.

    ``aggregate`` is "sum" or "max"; k-means is the summed exponent-2 case (no
    square root), k-median exponent 1, k-center the max with exponent 1.
    """

    exponent: int | Fraction
    aggregate: str
    name: str

    def __post_init__(self):
        if self.aggregate not in ("sum", "max"):
            raise ValueError(f"unknown aggregate {self.aggregate!r}")
        if self.exponent <= 0:
            raise ValueError("exponent must be positive")

    def term(self, d):
        exp = self.exponent
        if isinstance(exp, Fraction) and exp.denominator == 1:
            exp = exp.numerator
        if isinstance(exp, int):
            return d**exp
        return float(d) ** float(exp)


KCENTER = Objective(1, "max", "kcenter")
KMEDIAN = Objective(1, "sum", "kmedian")
KMEANS = Objective(2, "sum", "kmeans")


def lp_norm(p) -> Objective:
    """Summed ell_p objective; lp_norm(1) == k-median, lp_norm(2) == k-means."""
    p = Fraction(p)
    if p <= 0:
        raise ValueError("p must be positive")
    return Objective(p, "sum", f"lp:{p}")


def objective_by_name(name: str) -> Objective:
    if name == "kcenter":
        return KCENTER
    if name == "kmedian":
        return KMEDIAN
    if name == "kmeans":
        return KMEANS
    if name.startswith("lp:"):
        return lp_norm(Fraction(name[3:]))
    raise ValueError(f"unknown objective {name!r}")


# ---------------------------------------------------------------------------
# instances


@dataclass(frozen=True)
class Instance:
    """A clustering instance: distance matrix plus the parameters k and z.

    ``dist`` must satisfy the triangle inequality (and symmetry when the
    ``symmetric`` flag is set); use :func:`validate_metric` to check. ``z`` is
    the outlier budget, 0 for plain problems.
    """

    dist: tuple
    k: int
    z: int = 0
    symmetric: bool = True
    exact: bool = field(init=False, compare=False, default=True)

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.dist)
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise ValueError("dist must be a nonempty square matrix")
        if not 1 <= self.k <= n:
            raise ValueError(f"k={self.k} out of range for n={n}")
        if not 0 <= self.z < n:
            raise ValueError(f"z={self.z} out of range for n={n}")
        if self.k + self.z > n:
            raise ValueError("k + z must not exceed n")
        exact = n <= EXACTNESS_CAP and all(
            is_exact_number(x) for row in rows for x in row
        )
        if not exact:
            rows = tuple(tuple(float(x) for x in row) for row in rows)
        object.__setattr__(self, "dist", rows)
        object.__setattr__(self, "exact", exact)

    @property
    def n(self) -> int:
        return len(self.dist)

    @property
    def points(self) -> range:
        return range(len(self.dist))

    @property
    def tol(self):
        return 0 if self.exact else FLOAT_TOL

    def d(self, u: int, v: int):
        return self.dist[u][v]

    def distinct_distances(self) -> list:
        return sorted({x for row in self.dist for x in row})

    def replace(self, **kwargs) -> "Instance":
        base = dict(dist=self.dist, k=self.k, z=self.z, symmetric=self.symmetric)
        base.update(kwargs)
        return Instance(**base)


# ---------------------------------------------------------------------------
# clusterings


@dataclass(frozen=True)
class Clustering:
    """A partition into k clusters with designated centers plus an outlier set.

    ``assignment[u]`` is the cluster index of point u, or :data:`OUTLIER`;
    ``centers[i]`` belongs to cluster i, so every cluster is nonempty and no
    center is an outlier.
    """

    assignment: tuple
    centers: tuple

    def __post_init__(self):
        assignment = tuple(self.assignment)
        centers = tuple(self.centers)
        object.__setattr__(self, "assignment", assignment)
        object.__setattr__(self, "centers", centers)
        n, k = len(assignment), len(centers)
        if k == 0:
            raise ClusteringInvalid("no centers")
        if len(set(centers)) != k:
            raise ClusteringInvalid("duplicate centers")
        for g in assignment:
            if g != OUTLIER and not 0 <= g < k:
                raise ClusteringInvalid(f"assignment references missing cluster {g}")
        for i, c in enumerate(centers):
            if not 0 <= c < n:
                raise ClusteringInvalid(f"center {c} is not a point")
            if assignment[c] != i:
                raise ClusteringInvalid(f"center {c} is not in its own cluster {i}")

    @property
    def n(self) -> int:
        return len(self.assignment)

    @property
    def k(self) -> int:
        return len(self.centers)

    @property
    def outliers(self) -> frozenset:
        return frozenset(u for u, g in enumerate(self.assignment) if g == OUTLIER)

    @property
    def outlier_count(self) -> int:
        return sum(1 for g in self.assignment if g == OUTLIER)

    def clusters(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.centers]
        for u, g in enumerate(self.assignment):
            if g != OUTLIER:
                out[g].append(u)
        return out

    def center_of(self, u: int) -> int:
        g = self.assignment[u]
        if g == OUTLIER:
            raise ClusteringInvalid(f"point {u} is an outlier")
        return self.centers[g]

    def partition_key(self):
        """Canonical identity of the solution: the partition plus the outlier set.

        Center choices that induce the same partition compare equal.
        """
        return (
            frozenset(frozenset(members) for members in self.clusters()),
            self.outliers,
        )


# ---------------------------------------------------------------------------
# metric validation


@dataclass(frozen=True)
class Violation:
    pass


@dataclass(frozen=True)
class DiagonalViolation(Violation):
    point: int


@dataclass(frozen=True)
class PositivityViolation(Violation):
    u: int
    v: int


@dataclass(frozen=True)
class SymmetryViolation(Violation):
    u: int
    v: int


@dataclass(frozen=True)
class TriangleViolation(Violation):
    u: int
    mid: int
    v: int


def validate_metric(inst: Instance) -> list[Violation]:
    """Return every invariant violation of the distance matrix (empty list if valid).

    Violations are data, not errors: d(u,u) != 0, nonpositive off-diagonal
    entries, symmetry-flag contradictions, and triangle-inequality failures
    d(u,v) > d(u,mid) + d(mid,v).
    """
    n = len(inst.dist)
    tol = inst.tol
    dist = inst.dist
    out: list[Violation] = []
    for u in range(n):
        if not (-tol <= dist[u][u] <= tol):
            out.append(DiagonalViolation(u))
        for v in range(n):
            if u != v and dist[u][v] <= tol:
                out.append(PositivityViolation(u, v))
    if inst.symmetric:
        for u in range(n):
            for v in range(u + 1, n):
                a, b = dist[u][v], dist[v][u]
                if abs(a - b) > tol:
                    out.append(SymmetryViolation(u, v))
    # symmetric instances report each violated triple once, oriented u < v
    if not inst.exact and n >= 48:
        D = np.asarray(dist, dtype=float)
        for mid in range(n):
            bad = D > D[:, [mid]] + D[[mid], :] + tol
            for u, v in np.argwhere(bad):
                if inst.symmetric and u > v:
                    continue
                out.append(TriangleViolation(int(u), mid, int(v)))
        return out
    for mid in range(n):
        row_mid = dist[mid]
        for u in range(n):
            d_u_mid = dist[u][mid]
            row_u = dist[u]
            for v in range(n):
                if inst.symmetric and u > v:
                    continue
                if row_u[v] > d_u_mid + row_mid[v] + tol:
                    out.append(TriangleViolation(u, mid, v))
    return out


# ---------------------------------------------------------------------------
# cost and Voronoi assignment


def _check_compatible(inst: Instance, clus: Clustering) -> None:
    if clus.n != inst.n:
        raise ClusteringInvalid(f"clustering over {clus.n} points, instance has {inst.n}")
    for c in clus.centers:
        if not 0 <= c < inst.n:
            raise ClusteringInvalid(f"assignment references missing center {c}")
    if clus.outlier_count > inst.z:
        raise ClusteringInvalid(
            f"{clus.outlier_count} outliers exceed the budget z={inst.z}"
        )


def cost(inst: Instance, clus: Clustering, obj: Objective):
    """Objective value of a clustering; distances run center-to-point."""
    _check_compatible(inst, clus)
    dist = inst.dist
    centers = clus.centers
    if obj.aggregate == "max":
        worst = 0
        for u, g in enumerate(clus.assignment):
            if g == OUTLIER:
                continue
            t = obj.term(dist[centers[g]][u])
            if t > worst:
                worst = t
        return worst
    total = 0
    for u, g in enumerate(clus.assignment):
        if g == OUTLIER:
            continue
        total += obj.term(dist[centers[g]][u])
    return total


def voronoi(inst: Instance, centers: Sequence[int], outliers: Iterable[int] = ()) -> Clustering:
    """Assign every non-outlier to its nearest center (ties: lowest center index).

    Nearness is measured center-to-point, which is what makes the asymmetric
    case well defined.
    """
    centers = tuple(centers)
    if not centers:
        raise EmptyCenters("at least one center required")
    outset = frozenset(outliers)
    if len(set(centers)) != len(centers):
        raise ValueError("centers must be distinct")
    for c in centers:
        if not 0 <= c < inst.n:
            raise ValueError(f"center {c} is not a point")
        if c in outset:
            raise ValueError(f"center {c} marked as outlier")
    dist = inst.dist
    assignment = []
    for u in range(inst.n):
        if u in outset:
            assignment.append(OUTLIER)
            continue
        best_i = 0
        best_d = dist[centers[0]][u]
        for i in range(1, len(centers)):
            d = dist[centers[i]][u]
            if d < best_d:
                best_i, best_d = i, d
        assignment.append(best_i)
    return Clustering(tuple(assignment), centers)
