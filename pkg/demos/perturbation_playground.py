"""Structured 2-perturbations: cap special edges, close under shortest paths.

Every output stays a metric (triangle inequality holds exactly) and every
distance stays in the band [d/2, d]. Capping the edges from a center into its
own cluster at the optimal radius leaves the optimum untouched; aimed at the
wrong place, the same construction produces a certificate that an instance is
not resilient.
"""

import random

from resilient_cluster import (
    KCENTER,
    UNDIRECTED,
    GeneratorConfig,
    Instance,
    PerturbationSpec,
    apply_perturbation,
    brute_force,
    cost,
    falsify_resilience,
    generate,
    radius_preserving_check,
    validate_metric,
)

# -- a random metric, a random capped-edge perturbation ----------------------
rng = random.Random(2)
raw = [[0] * 6 for _ in range(6)]
for u in range(6):
    for v in range(u + 1, 6):
        raw[u][v] = raw[v][u] = rng.randint(2, 40)
for w in range(6):
    for u in range(6):
        for v in range(6):
            raw[u][v] = min(raw[u][v], raw[u][w] + raw[w][v])

inst = Instance(tuple(map(tuple, raw)), k=2)
edges = tuple((u, v) for u in range(6) for v in range(6) if u < v and rng.random() < 0.4)
cap = max((inst.dist[u][v] + 1) // 2 for u, v in edges)
spec = PerturbationSpec(edges, cap, UNDIRECTED)
pert = apply_perturbation(inst, spec)
print(f"capped {len(spec.edges)} edges at {cap}")
print(f"still a metric: {validate_metric(pert) == []}")
band = all(
    pert.dist[u][v] <= inst.dist[u][v] and 2 * pert.dist[u][v] >= inst.dist[u][v]
    for u in range(6)
    for v in range(6)
)
print(f"every distance within [d/2, d]: {band}")

# -- radius-preserving perturbation of a planted optimum ---------------------
inst, planted = generate(GeneratorConfig(n=10, k=2, seed=4))
r_star = cost(inst, planted, KCENTER)
c = planted.centers[0]
members = planted.clusters()[0]
spec = PerturbationSpec(tuple((c, v) for v in members if v != c), r_star, UNDIRECTED)
pert = apply_perturbation(inst, spec)
print(f"\nplanted instance, capped center spokes at the radius {r_star}:")
print(f"optimal radius preserved: {radius_preserving_check(inst, pert, planted)}")

# -- the falsifier in both directions ----------------------------------------
print(f"\nfalsifier on the planted instance: {falsify_resilience(inst, KCENTER).verdict}")
fragile = Instance(
    tuple(tuple(abs(a - b) for b in (0, 4, 9, 10)) for a in (0, 4, 9, 10)), k=2
)
report = falsify_resilience(fragile, KCENTER)
print(f"falsifier on a fragile line instance: {report.verdict}")
spec, alternate = report.witness
print(f"witness: cap {spec.cap} on edges {spec.edges}; alternate optimum {alternate.clusters()}")
check = brute_force(apply_perturbation(fragile, spec), KCENTER)
print(f"witness re-solves to a different/tied optimum: {not check.unique or check.best.partition_key() == alternate.partition_key()}")
