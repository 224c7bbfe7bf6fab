"""Threshold-graph LP relaxations, minimum-radius search, and the certifier.

At a radius R the threshold graph connects pairs within distance R. The three
relaxations (plain, in-neighbor/asymmetric, and outlier coverage) are solved
through provably equivalent reduced forms:

* plain / asymmetric: the relaxation at R is feasible iff the fractional
  in-neighbor covering LP has value <= k; we solve its packing dual (no
  phase-1 needed), read the cover off the dual values, and keep the packing
  vector as the infeasibility certificate when the value exceeds k.
* outlier form: feasible iff the bounded-coverage maximum (open mass k, each
  point covered at most once by its in-neighbors) reaches n - z.

Full (x, y) witnesses for the written formulations are reconstructed from the
reduced solutions, so every constraint of the original LP can be checked
directly on the outcome.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import KCENTER, AsymmetricUnsupported, Clustering, Instance, cost, voronoi
from .simplex import OPTIMAL as SIMPLEX_OPTIMAL
from .simplex import SolverPrecisionExceeded, maximize

KC = "kc"
ASYM_KC = "asym-kc"
KCO = "kco"
FORMULATIONS = (KC, ASYM_KC, KCO)

OPTIMAL = "OPTIMAL"
NOT_2PR = "NOT_2PR"

# A variable counts as integral when within this distance of 0 or 1 (floating
# mode); exact equality is required in rational mode.
INTEGRALITY_TOL = 1e-7


@dataclass(frozen=True)
class ThresholdGraph:
    """Neighbor sets of G_R: edges (u, v) with d(u, v) <= R, self always included."""

    radius: object
    out_nbr: tuple
    in_nbr: tuple


@dataclass(frozen=True)
class LpOutcome:
    feasible: bool
    x: tuple | None
    y: tuple | None
    integral: bool
    radius: object
    formulation: str
    bound: object
    certificate: tuple | None
    exact: bool


@dataclass(frozen=True)
class CertifierVerdict:
    kind: str
    clustering: Clustering | None
    lp_radius: object
    fractional_witness: LpOutcome | None


def build_threshold_graph(inst: Instance, R) -> ThresholdGraph:
    if R < 0:
        raise ValueError("radius must be nonnegative")
    n = inst.n
    dist = inst.dist
    tol = inst.tol
    out_nbr = []
    for v in range(n):
        row = dist[v]
        out_nbr.append(frozenset(u for u in range(n) if u == v or row[u] <= R + tol))
    if inst.symmetric:
        out_t = tuple(out_nbr)
        return ThresholdGraph(R, out_t, out_t)
    in_nbr = tuple(
        frozenset(u for u in range(n) if u == v or dist[u][v] <= R + tol)
        for v in range(n)
    )
    return ThresholdGraph(R, tuple(out_nbr), in_nbr)


def _is_binary(value, tol) -> bool:
    return abs(value) <= tol or abs(value - 1) <= tol


def _check_formulation(inst: Instance, formulation: str) -> None:
    if formulation not in FORMULATIONS:
        raise ValueError(f"unknown formulation {formulation!r}")
    if formulation in (KC, KCO) and not inst.symmetric:
        raise AsymmetricUnsupported(
            f"{formulation} is defined for symmetric instances; use {ASYM_KC}"
        )


def solve_lp(inst: Instance, R, formulation: str, arithmetic: str | None = None) -> LpOutcome:
    """Feasibility of the chosen relaxation at radius R, with a full witness.

    ``arithmetic`` overrides the instance's number mode ("exact"/"float"); the
    threshold graph itself is always built from the instance values, so probes
    in either mode agree on which edges exist.
    """
    _check_formulation(inst, formulation)
    exact = inst.exact if arithmetic is None else arithmetic == "exact"
    graph = build_threshold_graph(inst, R)
    n = inst.n
    tol = 0 if exact else INTEGRALITY_TOL
    if formulation == KCO:
        return _solve_kco(inst, graph, exact, tol)
    return _solve_covering(inst, graph, formulation, exact, tol)


def _solve_covering(inst: Instance, graph: ThresholdGraph, formulation: str, exact, tol) -> LpOutcome:
    n = inst.n
    k = inst.k
    # dual of the fractional in-neighbor cover: pack weights on points, each
    # column u capped by 1 over the points it can serve (its out-neighbors)
    A = [[1 if v in graph.out_nbr[u] else 0 for v in range(n)] for u in range(n)]
    res = maximize([1] * n, A, [1] * n, exact=exact)
    if res.status != SIMPLEX_OPTIMAL:
        raise RuntimeError("covering dual cannot be unbounded")
    bound = res.value
    y = res.duals
    feasible = bound <= k if exact else bound <= k + 1e-9
    if not feasible:
        return LpOutcome(
            feasible=False,
            x=None,
            y=tuple(y),
            integral=False,
            radius=graph.radius,
            formulation=formulation,
            bound=bound,
            certificate=tuple(res.x),
            exact=exact,
        )
    x = tuple(
        tuple(y[u] if u in graph.in_nbr[v] else 0 for v in range(n)) for u in range(n)
    )
    integral = all(_is_binary(v, tol) for v in y)
    if exact:
        _assert_covering_witness(graph, y, k)
    return LpOutcome(
        feasible=True,
        x=x,
        y=tuple(y),
        integral=integral,
        radius=graph.radius,
        formulation=formulation,
        bound=bound,
        certificate=None,
        exact=exact,
    )


def _assert_covering_witness(graph: ThresholdGraph, y, k) -> None:
    assert sum(y) <= k
    assert all(v >= 0 for v in y)
    for v in range(len(y)):
        assert sum(y[u] for u in graph.in_nbr[v]) >= 1


def _solve_kco(inst: Instance, graph: ThresholdGraph, exact, tol) -> LpOutcome:
    n = inst.n
    k = inst.k
    z = inst.z
    # variables: y_0..y_{n-1}, t_0..t_{n-1}; maximize total coverage sum(t)
    nv = 2 * n
    A = []
    b = []
    for v in range(n):
        row = [0] * nv
        row[n + v] = 1
        for u in graph.in_nbr[v]:
            row[u] = -1
        A.append(row)
        b.append(0)
    for v in range(n):
        row = [0] * nv
        row[n + v] = 1
        A.append(row)
        b.append(1)
    A.append([1] * n + [0] * n)
    b.append(k)
    c = [0] * n + [1] * n
    res = maximize(c, A, b, exact=exact)
    if res.status != SIMPLEX_OPTIMAL:
        raise RuntimeError("coverage LP is bounded by construction")
    bound = res.value
    target = n - z
    feasible = bound >= target if exact else bound >= target - 1e-9
    y = tuple(res.x[:n])
    t = res.x[n:]
    if not feasible:
        return LpOutcome(
            feasible=False,
            x=None,
            y=y,
            integral=False,
            radius=graph.radius,
            formulation=KCO,
            bound=bound,
            certificate=tuple(res.duals),
            exact=exact,
        )
    x_rows = [[0] * n for _ in range(n)]
    for v in range(n):
        mass = sum(y[u] for u in graph.in_nbr[v])
        if t[v] > 0 and mass > 0:
            scale = t[v] / mass
            for u in graph.in_nbr[v]:
                x_rows[u][v] = y[u] * scale
    x = tuple(tuple(row) for row in x_rows)
    integral = all(_is_binary(v, tol) for v in y) and all(
        _is_binary(x_rows[u][v], tol) for u in range(n) for v in range(n)
    )
    if exact:
        _assert_kco_witness(graph, x_rows, y, k, target)
    return LpOutcome(
        feasible=True,
        x=x,
        y=y,
        integral=integral,
        radius=graph.radius,
        formulation=KCO,
        bound=bound,
        certificate=None,
        exact=exact,
    )


def _assert_kco_witness(graph: ThresholdGraph, x_rows, y, k, target) -> None:
    n = len(y)
    assert sum(y) <= k
    total = 0
    for v in range(n):
        col = sum(x_rows[u][v] for u in range(n))
        assert col <= 1
        total += col
        for u in range(n):
            assert 0 <= x_rows[u][v] <= y[u]
            if u not in graph.in_nbr[v]:
                assert x_rows[u][v] == 0
    assert total >= target


def _candidates(inst: Instance) -> list:
    return inst.distinct_distances()


def min_feasible_radius(inst: Instance, formulation: str) -> tuple[object, LpOutcome]:
    """Smallest candidate radius (distinct distance value) whose relaxation is
    feasible, by binary search over the monotone feasibility predicate.

    On exact instances the search probes in floating point for speed and then
    certifies the boundary exactly: feasibility at R* plus infeasibility at the
    previous candidate pins R* by monotonicity. A disagreement (never expected)
    falls back to a fully exact search.
    """
    _check_formulation(inst, formulation)
    cands = _candidates(inst)

    def probe(idx: int, arithmetic: str) -> LpOutcome:
        try:
            return solve_lp(inst, cands[idx], formulation, arithmetic=arithmetic)
        except SolverPrecisionExceeded:
            return solve_lp(inst, cands[idx], formulation, arithmetic="exact")

    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if probe(mid, "float").feasible:
            hi = mid
        else:
            lo = mid + 1
    if not inst.exact:
        outcome = probe(lo, "float")
        if outcome.feasible:
            return cands[lo], outcome
        # float probes disagreed with themselves; climb to the next breakpoint
        for idx in range(lo + 1, len(cands)):
            outcome = probe(idx, "float")
            if outcome.feasible:
                return cands[idx], outcome
        raise SolverPrecisionExceeded("no feasible radius found in float mode")
    outcome = solve_lp(inst, cands[lo], formulation, arithmetic="exact")
    boundary_ok = outcome.feasible and (
        lo == 0 or not solve_lp(inst, cands[lo - 1], formulation, arithmetic="exact").feasible
    )
    if boundary_ok:
        return cands[lo], outcome
    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if solve_lp(inst, cands[mid], formulation, arithmetic="exact").feasible:
            hi = mid
        else:
            lo = mid + 1
    return cands[lo], solve_lp(inst, cands[lo], formulation, arithmetic="exact")


def _undirected_components(inst: Instance, graph: ThresholdGraph) -> list[list[int]]:
    n = inst.n
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        stack = [s]
        seen[s] = True
        comp = []
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in graph.out_nbr[u] | graph.in_nbr[u]:
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
        comps.append(sorted(comp))
    return comps


def _cluster_within_radius(inst: Instance, centers: list[int], R, max_outliers: int) -> Clustering | None:
    """Voronoi clustering of k centers (padded deterministically) whose
    non-outlier radius is at most R and outlier count within budget."""
    tol = inst.tol
    chosen = list(dict.fromkeys(centers))
    for u in range(inst.n):
        if len(chosen) == inst.k:
            break
        if u not in chosen:
            chosen.append(u)
    if len(chosen) != inst.k:
        return None
    dist = inst.dist
    outliers = []
    for u in range(inst.n):
        if min(dist[c][u] for c in chosen) > R + tol:
            outliers.append(u)
    if len(outliers) > max_outliers:
        return None
    clus = voronoi(inst, tuple(chosen), outliers)
    if cost(inst, clus, KCENTER) > R + tol:
        return None
    return clus


def extract_integral(inst: Instance, outcome: LpOutcome) -> Clustering | None:
    """Recover an integral solution at the outcome's radius, if one is reachable.

    Tries direct rounding of an integral vertex first, then component
    recovery: each connected component of G_R must contain a point covering
    the whole component within R (in-neighbor covering in the asymmetric
    case); for the outlier formulation the k largest coverable components are
    kept and everything else must fit in the outlier budget.
    """
    if not outcome.feasible:
        return None
    R = outcome.radius
    budget = inst.z if outcome.formulation == KCO else 0
    tol = 0 if outcome.exact else INTEGRALITY_TOL
    if outcome.integral and outcome.y is not None:
        centers = [u for u, v in enumerate(outcome.y) if abs(v - 1) <= tol]
        if 0 < len(centers) <= inst.k:
            clus = _cluster_within_radius(inst, centers, R, budget)
            if clus is not None:
                return clus
    graph = build_threshold_graph(inst, R)
    comps = _undirected_components(inst, graph)
    dist = inst.dist
    ctol = inst.tol
    coverers: list[int | None] = []
    for comp in comps:
        found = None
        for c in comp:
            if all(dist[c][v] <= R + ctol for v in comp):
                found = c
                break
        coverers.append(found)
    if outcome.formulation in (KC, ASYM_KC):
        if len(comps) > inst.k or any(c is None for c in coverers):
            return None
        return _cluster_within_radius(inst, [c for c in coverers if c is not None], R, budget)
    coverable = [(comp, c) for comp, c in zip(comps, coverers) if c is not None]
    coverable.sort(key=lambda item: (-len(item[0]), item[0][0]))
    centers = [c for _, c in coverable[: inst.k]]
    if not centers:
        return None
    return _cluster_within_radius(inst, centers, R, budget)


def certify(inst: Instance, formulation: str) -> CertifierVerdict:
    """Minimum-radius relaxation plus integral recovery.

    OPTIMAL comes with a clustering whose k-center cost equals the LP radius;
    since that radius lower-bounds every solution, the clustering is provably
    optimal. Otherwise the fractional outcome at R* is returned as a
    certificate that the instance is not 2-perturbation resilient.
    """
    r_star, outcome = min_feasible_radius(inst, formulation)
    clus = extract_integral(inst, outcome)
    if clus is None:
        return CertifierVerdict(NOT_2PR, None, r_star, outcome)
    achieved = cost(inst, clus, KCENTER)
    if inst.exact:
        assert achieved == r_star
    else:
        assert abs(achieved - r_star) <= 1e-6
    return CertifierVerdict(OPTIMAL, clus, r_star, None)
