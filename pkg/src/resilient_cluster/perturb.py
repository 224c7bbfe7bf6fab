"""Structured metric 2-perturbations and a proof-shape resilience falsifier.

A perturbation is specified by a set of special edges whose lengths are capped,
everything else kept; the perturbed distance is the shortest-path closure, which
keeps the triangle inequality exactly and stays within [d/2, d] entrywise
whenever the cap respects the half-distance precondition.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice

from .core import KCENTER, Clustering, Instance, Objective, cost
from .oracle import OracleResult, brute_force

DIRECTED = "directed"
UNDIRECTED = "undirected"

NOT_RESILIENT = "not-resilient"
RESILIENT_UNREFUTED = "resilient-unrefuted"

DEFAULT_BUDGET = 512


class InvalidPerturbation(ValueError):
    """Capping an edge below half its distance would leave the 2-perturbation band."""


@dataclass(frozen=True)
class PerturbationSpec:
    """Special edges plus the cap applied to them; undirected pairs are stored sorted."""

    edges: tuple
    cap: object
    mode: str

    def __post_init__(self):
        if self.mode not in (DIRECTED, UNDIRECTED):
            raise ValueError(f"unknown mode {self.mode!r}")
        edges = self.edges
        if self.mode == UNDIRECTED:
            edges = tuple(sorted({(min(u, v), max(u, v)) for u, v in edges}))
        else:
            edges = tuple(sorted(set(map(tuple, edges))))
        object.__setattr__(self, "edges", edges)


@dataclass(frozen=True)
class FalsifierReport:
    verdict: str
    witness: tuple[PerturbationSpec, Clustering] | None

    def __post_init__(self):
        if self.verdict == NOT_RESILIENT and self.witness is None:
            raise ValueError("a non-resilience verdict must carry a witness")


def apply_perturbation(inst: Instance, spec: PerturbationSpec) -> Instance:
    """Shortest-path closure after capping the special edges at min(d, cap).

    Requires min(d(u,v), cap) >= d(u,v)/2 on every special edge; the output then
    satisfies d/2 <= d' <= d entrywise and the triangle inequality exactly
    (symmetry too in undirected mode).
    """
    if (spec.mode == UNDIRECTED) != inst.symmetric:
        raise ValueError("perturbation mode does not match the instance symmetry flag")
    n = inst.n
    dist = inst.dist
    tol = inst.tol
    ell = [list(row) for row in dist]
    for u, v in spec.edges:
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) references a missing point")
        capped = min(dist[u][v], spec.cap)
        # integer-safe half check: capped >= d/2  <=>  2*capped >= d
        if 2 * capped < dist[u][v] - tol:
            raise InvalidPerturbation(
                f"cap {spec.cap} shortens edge ({u}, {v}) below half its length"
            )
        ell[u][v] = capped
        if spec.mode == UNDIRECTED:
            ell[v][u] = capped
    for w in range(n):
        row_w = ell[w]
        for u in range(n):
            duw = ell[u][w]
            row_u = ell[u]
            for v in range(n):
                alt = duw + row_w[v]
                if alt < row_u[v]:
                    row_u[v] = alt
    for u in range(n):
        for v in range(n):
            assert ell[u][v] <= dist[u][v] + tol
            assert 2 * ell[u][v] >= dist[u][v] - tol
    return Instance(tuple(tuple(row) for row in ell), inst.k, inst.z, inst.symmetric)


def radius_preserving_check(inst: Instance, pert: Instance, clus: Clustering) -> bool:
    """True iff the k-center cost of ``clus`` is identical under both metrics and
    ``clus`` is still optimal for the perturbed instance per brute force."""
    tol = inst.tol
    r_orig = cost(inst, clus, KCENTER)
    r_pert = cost(pert, clus, KCENTER)
    if abs(r_orig - r_pert) > tol:
        return False
    opt = brute_force(pert, KCENTER)
    return abs(opt.cost - r_pert) <= tol


def _candidate_specs(inst: Instance, base: Clustering, r_hat):
    """Perturbation shapes drawn from the proofs: (a) one point into one optimal
    cluster, (b) a point into the ball of radius 2*r_hat around it, (c) a single
    center-to-point edge capped at an intra-cluster distance."""
    mode = UNDIRECTED if inst.symmetric else DIRECTED
    clusters = base.clusters()
    dist = inst.dist
    seen = set()

    def emit(edges, cap):
        spec = PerturbationSpec(tuple(edges), cap, mode)
        key = (spec.edges, spec.cap)
        if spec.edges and key not in seen:
            seen.add(key)
            return spec
        return None

    for q in range(inst.n):
        for members in clusters:
            if q in members:
                continue
            spec = emit([(q, v) for v in members], r_hat)
            if spec:
                yield spec
    for p in range(inst.n):
        ball = [v for v in range(inst.n) if v != p and dist[p][v] <= 2 * r_hat]
        if ball:
            spec = emit([(p, v) for v in ball], r_hat)
            if spec:
                yield spec
    for i, c in enumerate(base.centers):
        caps = sorted({dist[c][p] for p in clusters[i] if p != c})
        for q in range(inst.n):
            if base.assignment[q] == i:
                continue
            for cap in caps:
                spec = emit([(c, q)], cap)
                if spec:
                    yield spec


def falsify_resilience(
    inst: Instance, obj: Objective, budget: int = DEFAULT_BUDGET
) -> FalsifierReport:
    """Search the proof-shaped 2-perturbations for one that changes the optimum.

    A NOT_RESILIENT verdict is a certificate (the witness re-solves to a
    different optimum); RESILIENT_UNREFUTED is not a proof of resilience — only
    the proof shapes are searched, not the full perturbation continuum.
    """
    base = brute_force(inst, obj)
    identity = PerturbationSpec((), 0, UNDIRECTED if inst.symmetric else DIRECTED)
    if not base.unique:
        return FalsifierReport(NOT_RESILIENT, (identity, base.tie_witness))
    base_key = base.best.partition_key()
    r_hat = cost(inst, base.best, KCENTER)
    for spec in islice(_candidate_specs(inst, base.best, r_hat), budget):
        try:
            pert = apply_perturbation(inst, spec)
        except InvalidPerturbation:
            continue
        res = brute_force(pert, obj)
        if res.best.partition_key() != base_key:
            return FalsifierReport(NOT_RESILIENT, (spec, res.best))
        if not res.unique:
            return FalsifierReport(NOT_RESILIENT, (spec, res.tie_witness))
    return FalsifierReport(RESILIENT_UNREFUTED, None)
