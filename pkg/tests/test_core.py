"""Tests for instances, objectives, metric validation, cost, and Voronoi assignment."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resilient_cluster import (
    KCENTER,
    KMEANS,
    KMEDIAN,
    OUTLIER,
    Clustering,
    ClusteringInvalid,
    EmptyCenters,
    Instance,
    cost,
    lp_norm,
    objective_by_name,
    validate_metric,
    voronoi,
)
from resilient_cluster.core import SymmetryViolation, TriangleViolation

from conftest import line_instance, random_metric_instance, uniform_instance


def test_instance_parameter_validation():
    dist = ((0, 1), (1, 0))
    with pytest.raises(ValueError):
        Instance(dist, k=3)
    with pytest.raises(ValueError):
        Instance(dist, k=1, z=2)
    with pytest.raises(ValueError):
        Instance(dist, k=2, z=1)  # k + z > n
    with pytest.raises(ValueError):
        Instance(((0, 1),), k=1)  # not square


def test_exact_mode_detection():
    assert Instance(((0, 1), (1, 0)), k=1).exact
    assert Instance(((0, Fraction(1, 3)), (Fraction(1, 3), 0)), k=1).exact
    inst = Instance(((0, 0.5), (0.5, 0)), k=1)
    assert not inst.exact
    assert isinstance(inst.dist[0][1], float)


def test_exactness_cap_demotes_large_rational_instances():
    from resilient_cluster import core

    n = core.EXACTNESS_CAP + 1
    dist = tuple(tuple(0 if u == v else 1 for v in range(n)) for u in range(n))
    inst = Instance(dist, k=1)
    assert not inst.exact
    assert isinstance(inst.dist[0][1], float)


def test_validate_metric_uniform_ok():
    assert validate_metric(uniform_instance(3, 1)) == []


def test_validate_metric_triangle_violation():
    dist = ((0, 1, 5), (1, 0, 1), (5, 1, 0))
    inst = Instance(dist, k=1)
    assert validate_metric(inst) == [TriangleViolation(0, 1, 2)]


def test_validate_metric_symmetry_flag_contradiction():
    inst = Instance(((0, 1), (3, 0)), k=1, symmetric=True)
    assert validate_metric(inst) == [SymmetryViolation(0, 1)]
    # with the flag off the same matrix is a fine asymmetric metric
    assert validate_metric(Instance(((0, 1), (3, 0)), k=1, symmetric=False)) == []


def test_objective_names_and_terms():
    assert objective_by_name("kcenter") is KCENTER
    assert objective_by_name("kmedian").exponent == 1
    assert objective_by_name("kmeans").term(3) == 9
    assert objective_by_name("lp:3").term(2) == 8
    assert lp_norm(Fraction(1, 2)).term(4.0) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        objective_by_name("bogus")
    with pytest.raises(ValueError):
        lp_norm(0)


def test_cost_zero_when_every_point_is_a_center():
    inst = uniform_instance(4, 4)
    clus = voronoi(inst, (0, 1, 2, 3))
    for obj in (KCENTER, KMEDIAN, KMEANS):
        assert cost(inst, clus, obj) == 0


def test_cost_line_examples(line4):
    clus = Clustering((0, 0, 1, 1), (0, 2))
    assert cost(line4, clus, KMEDIAN) == 2
    assert cost(line4, clus, KCENTER) == 1
    assert cost(line4, clus, KMEANS) == 2


def test_cost_rejects_foreign_clustering(line4):
    with pytest.raises(ClusteringInvalid):
        cost(line4, Clustering((0, 0, 0), (0,)), KMEDIAN)
    # outliers beyond the instance budget are rejected too
    clus = Clustering((0, OUTLIER, 1, 1), (0, 2))
    with pytest.raises(ClusteringInvalid):
        cost(line4, clus, KMEDIAN)


def test_clustering_invariants():
    with pytest.raises(ClusteringInvalid):
        Clustering((0, 0), (0, 0))  # duplicate centers
    with pytest.raises(ClusteringInvalid):
        Clustering((0, 1), (0,))  # missing cluster
    with pytest.raises(ClusteringInvalid):
        Clustering((OUTLIER, 0), (0,))  # center marked outlier
    clus = Clustering((0, 0, 1, OUTLIER), (0, 2))
    assert clus.outliers == {3}
    assert clus.clusters() == [[0, 1], [2]]
    assert clus.center_of(1) == 0


def test_voronoi_line(line4):
    clus = voronoi(line4, (1, 2))
    assert clus.assignment == (0, 0, 1, 1)


def test_voronoi_every_point_its_own_cluster():
    inst = uniform_instance(5, 5)
    clus = voronoi(inst, tuple(range(5)))
    assert clus.assignment == (0, 1, 2, 3, 4)


def test_voronoi_asymmetric_single_center():
    inst = Instance(((0, 1), (100, 0)), k=1, symmetric=False)
    clus = voronoi(inst, (0,))
    assert clus.assignment == (0, 0)
    assert cost(inst, clus, KCENTER) == 1


def test_voronoi_tie_break_lowest_center_index():
    inst = uniform_instance(4, 2)
    clus = voronoi(inst, (2, 1))
    # points 0 and 3 tie between both centers; first listed center wins
    assert clus.assignment == (0, 1, 0, 0)


def test_voronoi_input_validation(line4):
    with pytest.raises(EmptyCenters):
        voronoi(line4, ())
    with pytest.raises(ValueError):
        voronoi(line4, (0, 0))
    with pytest.raises(ValueError):
        voronoi(line4, (0, 9))
    with pytest.raises(ValueError):
        voronoi(line4, (0, 2), outliers={0})


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_voronoi_is_cost_minimal_given_centers(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 8)
    k = rng.randint(1, n)
    inst = random_metric_instance(rng, n, k)
    centers = tuple(sorted(rng.sample(range(n), k)))
    base = voronoi(inst, centers)
    for obj in (KCENTER, KMEDIAN, KMEANS):
        best = cost(inst, base, obj)
        for _ in range(10):
            assignment = list(base.assignment)
            u = rng.randrange(n)
            if u in centers:
                continue
            assignment[u] = rng.randrange(k)
            alt = Clustering(tuple(assignment), centers)
            assert cost(inst, alt, obj) >= best


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_cost_monotone_under_added_center(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 8)
    inst = random_metric_instance(rng, n, rng.randint(1, n - 1))
    k = inst.k
    centers = tuple(sorted(rng.sample(range(n), k)))
    extra = next(u for u in range(n) if u not in centers)
    small = voronoi(inst, centers)
    big = voronoi(inst, centers + (extra,))
    for obj in (KCENTER, KMEDIAN, KMEANS):
        assert cost(inst, big, obj) <= cost(inst, small, obj)
