"""Tests for the threshold-graph relaxations, radius search, and certifier.

The reduced solves are validated here against the written formulations: every
returned witness must satisfy the original constraints verbatim, and every
infeasibility certificate must independently prove infeasibility.
"""

import random
from fractions import Fraction

import pytest

from resilient_cluster import (
    ASYM_KC,
    KC,
    KCENTER,
    KCO,
    NOT_2PR,
    OPTIMAL,
    AsymmetricUnsupported,
    GeneratorConfig,
    Instance,
    brute_force,
    build_threshold_graph,
    certify,
    cost,
    extract_integral,
    generate,
    min_feasible_radius,
    solve_lp,
)

from conftest import line_instance, random_metric_instance, ring_union_instance, uniform_instance


def two_points(k=1, z=0):
    return Instance(((0, 1), (1, 0)), k=k, z=z)


# ---------------------------------------------------------------------------
# threshold graphs


def test_threshold_graph_radius_zero(line4):
    g = build_threshold_graph(line4, 0)
    for v in range(4):
        assert g.in_nbr[v] == {v}
        assert g.out_nbr[v] == {v}


def test_threshold_graph_complete(line4):
    g = build_threshold_graph(line4, 11)
    for v in range(4):
        assert g.in_nbr[v] == set(range(4))


def test_threshold_graph_line_components(line4):
    g = build_threshold_graph(line4, 1)
    assert g.in_nbr[0] == {0, 1}
    assert g.in_nbr[2] == {2, 3}


def test_threshold_graph_monotone_in_radius(line4):
    g1 = build_threshold_graph(line4, 1)
    g2 = build_threshold_graph(line4, 9)
    for v in range(4):
        assert g1.in_nbr[v] <= g2.in_nbr[v]
        assert v in g1.in_nbr[v]


def test_threshold_graph_directed():
    inst = Instance(((0, 1), (5, 0)), k=1, symmetric=False)
    g = build_threshold_graph(inst, 1)
    assert g.out_nbr[0] == {0, 1}
    assert g.in_nbr[1] == {0, 1}
    assert g.in_nbr[0] == {0}


def test_threshold_graph_negative_radius(line4):
    with pytest.raises(ValueError):
        build_threshold_graph(line4, -1)


# ---------------------------------------------------------------------------
# witness checks against the written formulations


def assert_kc_witness(inst, outcome):
    g = build_threshold_graph(inst, outcome.radius)
    n = inst.n
    y, x = outcome.y, outcome.x
    assert sum(y) <= inst.k
    for v in range(n):
        assert sum(x[u][v] for u in g.in_nbr[v]) >= 1
    for u in range(n):
        for v in range(n):
            assert 0 <= x[u][v] <= y[u]


def assert_kco_witness(inst, outcome):
    g = build_threshold_graph(inst, outcome.radius)
    n = inst.n
    y, x = outcome.y, outcome.x
    assert sum(y) <= inst.k
    total = 0
    for v in range(n):
        col = sum(x[u][v] for u in range(n))
        assert col <= 1
        total += col
        for u in range(n):
            assert 0 <= x[u][v] <= y[u]
            if u not in g.in_nbr[v]:
                assert x[u][v] == 0
    assert total >= inst.n - inst.z


def assert_kc_infeasibility_certificate(inst, outcome):
    """The certificate is a packing: w >= 0, sum over each out-neighborhood at
    most 1, total weight > k. Any cover y would satisfy
    sum(w) <= sum_v w_v * y(N_in(v)) <= sum(y) <= k, a contradiction."""
    g = build_threshold_graph(inst, outcome.radius)
    w = outcome.certificate
    assert all(val >= 0 for val in w)
    for u in range(inst.n):
        assert sum(w[v] for v in g.out_nbr[u]) <= 1
    assert sum(w) > inst.k
    assert outcome.bound == sum(w)


# ---------------------------------------------------------------------------
# solve_lp


def test_two_points_k1_feasible_at_one():
    outcome = solve_lp(two_points(), 1, KC)
    assert outcome.feasible
    assert outcome.integral
    assert_kc_witness(two_points(), outcome)


def test_two_points_k1_infeasible_at_half():
    inst = two_points()
    outcome = solve_lp(inst, Fraction(1, 2), KC)
    assert not outcome.feasible
    assert outcome.bound == 2  # each point coverable only by itself
    assert outcome.x is None
    assert_kc_infeasibility_certificate(inst, outcome)


def test_kco_everything_outlier_feasible_at_zero():
    # z = n - 1: cover a single point at radius 0, outlier the rest
    inst = two_points(k=1, z=1)
    outcome = solve_lp(inst, 0, KCO)
    assert outcome.feasible
    assert outcome.bound >= 1
    assert_kco_witness(inst, outcome)


def test_kc_requires_symmetry():
    inst = Instance(((0, 1), (2, 0)), k=1, symmetric=False)
    with pytest.raises(AsymmetricUnsupported):
        solve_lp(inst, 1, KC)
    outcome = solve_lp(inst, 2, ASYM_KC)
    assert outcome.feasible


def test_asym_kc_in_neighbor_coverage():
    # d(0,1) = 1 but d(1,0) = 5: at R=1 only point 0 can cover both
    inst = Instance(((0, 1), (5, 0)), k=1, symmetric=False)
    outcome = solve_lp(inst, 1, ASYM_KC)
    assert outcome.feasible
    assert outcome.y[0] == 1
    infeasible = solve_lp(inst, 0, ASYM_KC)
    assert not infeasible.feasible


def test_feasibility_monotone_in_radius():
    rng = random.Random(7)
    for formulation, z in ((KC, 0), (KCO, 2)):
        inst = random_metric_instance(rng, 8, k=2, z=z)
        cands = inst.distinct_distances()
        feas = [solve_lp(inst, r, formulation).feasible for r in cands]
        assert feas[-1]
        first = feas.index(True)
        assert all(feas[first:])


# ---------------------------------------------------------------------------
# min_feasible_radius


def test_min_radius_all_centers_is_zero():
    inst = uniform_instance(4, 4)
    r, outcome = min_feasible_radius(inst, KC)
    assert r == 0
    assert outcome.integral


def test_min_radius_line(line4):
    r, outcome = min_feasible_radius(line4, KC)
    assert r == 1
    assert outcome.feasible
    assert outcome.integral
    assert_kc_witness(line4, outcome)


def test_min_radius_matches_oracle_on_planted():
    for seed in range(6):
        inst, _ = generate(GeneratorConfig(n=10, k=3, seed=seed))
        res = brute_force(inst, KCENTER)
        r, outcome = min_feasible_radius(inst, KC)
        assert r == res.cost
        assert outcome.feasible


def test_min_radius_float_instance():
    coords = [0.0, 1.5, 10.25, 11.75]
    dist = tuple(tuple(abs(a - b) for b in coords) for a in coords)
    inst = Instance(dist, k=2)
    assert not inst.exact
    r, outcome = min_feasible_radius(inst, KC)
    assert r == pytest.approx(1.5)
    assert outcome.feasible


# ---------------------------------------------------------------------------
# extract_integral and certify


def test_extract_direct_rounding(line4):
    _, outcome = min_feasible_radius(line4, KC)
    clus = extract_integral(line4, outcome)
    assert clus is not None
    assert clus.partition_key()[0] == frozenset({frozenset({0, 1}), frozenset({2, 3})})


def test_extract_fractional_gap_instance_absent():
    inst = ring_union_instance([4, 4], k=3)
    outcome = solve_lp(inst, 1, KC)
    assert outcome.feasible
    assert not outcome.integral
    assert outcome.bound == Fraction(8, 3)
    assert extract_integral(inst, outcome) is None


def test_certify_planted_optimal():
    inst, planted = generate(GeneratorConfig(n=12, k=3, seed=9))
    res = brute_force(inst, KCENTER)
    verdict = certify(inst, KC)
    assert verdict.kind == OPTIMAL
    assert verdict.lp_radius == res.cost
    assert verdict.clustering.partition_key() == res.best.partition_key()
    assert cost(inst, verdict.clustering, KCENTER) == verdict.lp_radius


def test_certify_single_cluster_min_eccentricity():
    rng = random.Random(11)
    inst = random_metric_instance(rng, 7, k=1)
    verdict = certify(inst, KC)
    assert verdict.kind == OPTIMAL
    expected = min(max(inst.dist[c][v] for v in range(7)) for c in range(7))
    assert verdict.lp_radius == expected


def test_certify_gap_instance_not_2pr():
    inst = ring_union_instance([4, 4], k=3)
    verdict = certify(inst, KC)
    assert verdict.kind == NOT_2PR
    assert verdict.clustering is None
    witness = verdict.fractional_witness
    assert witness.feasible and not witness.integral
    res = brute_force(inst, KCENTER)
    assert res.cost > verdict.lp_radius  # genuine integrality gap
    assert not res.unique


def test_certify_kco_planted():
    inst, planted = generate(GeneratorConfig(n=12, k=2, z=2, seed=4, mode="outlier"))
    res = brute_force(inst, KCENTER)
    verdict = certify(inst, KCO)
    assert verdict.kind == OPTIMAL
    assert verdict.lp_radius == res.cost
    assert verdict.clustering.partition_key() == res.best.partition_key()
    assert verdict.clustering.outliers == res.best.outliers


def test_kco_infeasible_below_optimum_with_accounting():
    """Coverage accounting from the infeasibility argument: on a resilient
    outlier instance below the optimal radius, outliers only cover outliers
    (sparsely) and deficient clusters cannot compensate, so total coverage
    stays below n - z for any admissible (x, y); the solver must agree."""
    inst, planted = generate(GeneratorConfig(n=12, k=2, z=2, seed=4, mode="outlier"))
    r_star, _ = min_feasible_radius(inst, KCO)
    cands = [r for r in inst.distinct_distances() if r < r_star]
    assert cands
    for R in (cands[0], cands[len(cands) // 2], cands[-1]):
        outcome = solve_lp(inst, R, KCO)
        assert not outcome.feasible
        assert outcome.bound < inst.n - inst.z
        # rebuild the best admissible coverage for the returned y and walk the
        # accounting: cov(Z) < y(Z) * n_min, cov(C_i) <= n_i * y(C_i) when
        # deficient, total < n - z
        g = build_threshold_graph(inst, R)
        y = outcome.y
        clusters = planted.clusters()
        sizes = [len(c) for c in clusters]
        n_min = min(sizes)
        outliers = planted.outliers
        cov = [min(1, sum(y[u] for u in g.in_nbr[v])) for v in range(inst.n)]
        b = sum(y[u] for u in outliers)
        cov_z = sum(cov[v] for v in outliers)
        if b > 0:
            assert cov_z < b * n_min
        else:
            assert cov_z == 0
        total = 0
        for members, size in zip(clusters, sizes):
            a_i = sum(y[u] for u in members)
            cov_i = sum(cov[v] for v in members)
            if a_i < 1:
                assert cov_i <= size * a_i
            total += cov_i
        assert total + cov_z < inst.n - inst.z


def test_asym_certify_planted():
    inst, _ = generate(GeneratorConfig(n=10, k=3, seed=6, mode="asymmetric"))
    res = brute_force(inst, KCENTER)
    verdict = certify(inst, ASYM_KC)
    assert verdict.kind == OPTIMAL
    assert verdict.lp_radius == res.cost
    assert verdict.clustering.partition_key() == res.best.partition_key()


def test_separation_properties_on_oracle_optimum():
    # on resilient symmetric instances the optimal clusters are separated by
    # more than the radius, and intra distances stay below inter distances
    for seed in (0, 1, 2):
        inst, _ = generate(GeneratorConfig(n=10, k=3, seed=seed))
        res = brute_force(inst, KCENTER)
        from resilient_cluster import verify_planted

        assert verify_planted(inst, res.best, KCENTER) == []


def test_precision_failure_falls_back_to_exact(monkeypatch, line4):
    from resilient_cluster import lp as lp_mod
    from resilient_cluster.simplex import SolverPrecisionExceeded

    real = lp_mod.solve_lp

    def flaky(inst, R, formulation, arithmetic=None):
        if arithmetic == "float":
            raise SolverPrecisionExceeded("injected")
        return real(inst, R, formulation, arithmetic=arithmetic)

    monkeypatch.setattr(lp_mod, "solve_lp", flaky)
    r, outcome = lp_mod.min_feasible_radius(line4, KC)
    assert r == 1 and outcome.feasible and outcome.exact


@pytest.mark.parametrize("formulation,z", [(KC, 0), (KCO, 2)])
def test_certifier_audit_on_arbitrary_instances(formulation, z):
    """Soundness on arbitrary inputs, not just planted ones.

    OPTIMAL must always come with radius equal to the brute-force optimum
    (the LP radius lower-bounds it and the extracted clustering attains it);
    NOT_2PR must come with a verifiable symptom: a genuine integrality gap,
    a non-unique optimum, or a violated separation property.
    """
    from resilient_cluster import verify_planted

    rng = random.Random(99)
    verdicts = {OPTIMAL: 0, NOT_2PR: 0}
    for _ in range(60):
        n = rng.randint(4, 9)
        k = rng.randint(2, 3)
        if k + z >= n:
            continue
        inst = random_metric_instance(rng, n, k, z=z)
        res = brute_force(inst, KCENTER)
        verdict = certify(inst, formulation)
        verdicts[verdict.kind] += 1
        if verdict.kind == OPTIMAL:
            assert verdict.lp_radius == res.cost
            assert cost(inst, verdict.clustering, KCENTER) == res.cost
            assert verdict.clustering.outlier_count <= inst.z
        else:
            gap = res.cost > verdict.lp_radius
            ambiguous = not res.unique
            separated = verify_planted(inst, res.best, KCENTER) == []
            assert gap or ambiguous or not separated
    # random closure metrics are benign for plain coverage, so OPTIMAL must
    # dominate; the NOT_2PR branch is exercised by the gap-instance tests
    assert verdicts[OPTIMAL] > 0


def test_certifier_audit_float_instances():
    rng = random.Random(5)
    for _ in range(25):
        n = rng.randint(4, 8)
        exact = random_metric_instance(rng, n, k=2)
        inst = Instance(
            tuple(tuple(x * 1.0 for x in row) for row in exact.dist), k=2
        )
        assert not inst.exact
        res = brute_force(inst, KCENTER)
        verdict = certify(inst, KC)
        if verdict.kind == OPTIMAL:
            assert verdict.lp_radius == pytest.approx(res.cost, abs=1e-9)
