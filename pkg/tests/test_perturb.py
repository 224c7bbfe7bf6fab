"""Tests for structured 2-perturbations and the resilience falsifier."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resilient_cluster import (
    DIRECTED,
    KCENTER,
    KMEDIAN,
    NOT_RESILIENT,
    RESILIENT_UNREFUTED,
    UNDIRECTED,
    GeneratorConfig,
    Instance,
    InvalidPerturbation,
    PerturbationSpec,
    apply_perturbation,
    brute_force,
    cost,
    falsify_resilience,
    generate,
    radius_preserving_check,
    validate_metric,
)

from conftest import (
    line_instance,
    random_directed_metric_instance,
    random_metric_instance,
    uniform_instance,
)


def test_empty_edge_set_is_identity(line4):
    spec = PerturbationSpec((), 0, UNDIRECTED)
    assert apply_perturbation(line4, spec).dist == line4.dist
    # and idempotent
    again = apply_perturbation(apply_perturbation(line4, spec), spec)
    assert again.dist == line4.dist


def test_three_collinear_points_cap():
    inst = line_instance([0, 1, 2], k=1)
    spec = PerturbationSpec(((0, 2),), Fraction(3, 2), UNDIRECTED)
    pert = apply_perturbation(inst, spec)
    assert pert.dist[0][2] == Fraction(3, 2)
    assert pert.dist[2][0] == Fraction(3, 2)
    assert pert.dist[0][1] == 1
    assert pert.dist[1][2] == 1


def test_precondition_cap_too_small():
    inst = line_instance([0, 1, 2], k=1)
    with pytest.raises(InvalidPerturbation):
        apply_perturbation(inst, PerturbationSpec(((0, 2),), Fraction(1, 2), UNDIRECTED))


def test_mode_must_match_symmetry(line4):
    with pytest.raises(ValueError):
        apply_perturbation(line4, PerturbationSpec(((0, 1),), 1, DIRECTED))
    asym = Instance(((0, 2), (3, 0)), k=1, symmetric=False)
    with pytest.raises(ValueError):
        apply_perturbation(asym, PerturbationSpec(((0, 1),), 2, UNDIRECTED))


def test_edges_must_reference_points(line4):
    with pytest.raises(ValueError):
        apply_perturbation(line4, PerturbationSpec(((0, 7),), 100, UNDIRECTED))


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 100_000))
def test_perturbation_band_and_metricity(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 7)
    directed = rng.random() < 0.5
    if directed:
        inst = random_directed_metric_instance(rng, n, k=1)
    else:
        inst = random_metric_instance(rng, n, k=1)
    edges = tuple(
        (u, v)
        for u in range(n)
        for v in range(n)
        if u != v and rng.random() < 0.3
    )
    cap_floor = max(
        ((inst.dist[u][v] + 1) // 2 for u, v in edges), default=0
    )
    cap = cap_floor + rng.randint(0, 5)
    spec = PerturbationSpec(edges, cap, DIRECTED if directed else UNDIRECTED)
    pert = apply_perturbation(inst, spec)
    for u in range(n):
        for v in range(n):
            assert pert.dist[u][v] <= inst.dist[u][v]
            assert 2 * pert.dist[u][v] >= inst.dist[u][v]
    assert validate_metric(pert) == []
    if not directed:
        for u in range(n):
            for v in range(n):
                assert pert.dist[u][v] == pert.dist[v][u]


def test_directed_mode_can_break_symmetry():
    asym = line_instance([0, 10, 20, 30], k=1).replace(symmetric=False)
    spec = PerturbationSpec(((0, 1),), 5, DIRECTED)
    pert = apply_perturbation(asym, spec)
    assert validate_metric(pert) == []
    assert pert.dist[0][1] == 5
    assert pert.dist[1][0] == 10


def test_radius_preserving_identity():
    inst, planted = generate(GeneratorConfig(n=8, k=2, seed=1))
    pert = apply_perturbation(inst, PerturbationSpec((), 0, UNDIRECTED))
    assert radius_preserving_check(inst, pert, planted)


def test_radius_preserving_center_star():
    inst, planted = generate(GeneratorConfig(n=9, k=3, seed=5))
    r_star = cost(inst, planted, KCENTER)
    members = planted.clusters()[0]
    c = planted.centers[0]
    spec = PerturbationSpec(
        tuple((c, v) for v in members if v != c), r_star, UNDIRECTED
    )
    pert = apply_perturbation(inst, spec)
    assert radius_preserving_check(inst, pert, planted)


def test_falsifier_uniform_metric_not_resilient():
    report = falsify_resilience(uniform_instance(4, 2), KCENTER)
    assert report.verdict == NOT_RESILIENT
    spec, alternate = report.witness
    assert alternate is not None


def test_falsifier_planted_unrefuted():
    inst, _ = generate(GeneratorConfig(n=10, k=3, seed=2))
    report = falsify_resilience(inst, KCENTER)
    assert report.verdict == RESILIENT_UNREFUTED
    assert report.witness is None


def test_falsifier_single_point():
    inst = Instance(((0,),), k=1)
    report = falsify_resilience(inst, KCENTER)
    assert report.verdict == RESILIENT_UNREFUTED


def test_falsifier_witness_self_verifies():
    # unique optimum, but the clusters sit within twice the radius of each
    # other, so a capped perturbation creates a tie
    inst = line_instance([0, 4, 9, 10], k=2)
    base = brute_force(inst, KCENTER)
    assert base.unique
    report = falsify_resilience(inst, KCENTER)
    assert report.verdict == NOT_RESILIENT
    spec, alternate = report.witness
    assert spec.edges  # a genuine perturbation, not the identity
    pert = apply_perturbation(inst, spec)
    res = brute_force(pert, KCENTER)
    keys = {res.best.partition_key()}
    if res.tie_witness is not None:
        keys.add(res.tie_witness.partition_key())
    assert alternate.partition_key() in keys
    assert (not res.unique) or res.best.partition_key() != base.best.partition_key()


def test_falsifier_outlier_instance():
    # either extreme block may play the outlier at equal k-median cost
    inst = line_instance([0, 4, 8, 100, 104], k=2, z=1)
    report = falsify_resilience(inst, KMEDIAN)
    assert report.verdict == NOT_RESILIENT
