"""Shared instance builders for the test suite."""

from __future__ import annotations

import random

import pytest

from resilient_cluster import Instance


def line_instance(coords, k, z=0) -> Instance:
    dist = tuple(tuple(abs(a - b) for b in coords) for a in coords)
    return Instance(dist, k, z, symmetric=True)


def uniform_instance(n, k, value=1, z=0) -> Instance:
    dist = tuple(tuple(0 if u == v else value for v in range(n)) for u in range(n))
    return Instance(dist, k, z, symmetric=True)


def ring_union_instance(sizes, k, cross=10, scale=1) -> Instance:
    """Disjoint cycles with unit (scaled) edges; a constant large distance
    between cycles keeps the union metric."""
    offsets = []
    total = 0
    for s in sizes:
        offsets.append(total)
        total += s

    def d(u, v):
        for off, s in zip(offsets, sizes):
            if off <= u < off + s and off <= v < off + s:
                a = abs(u - v)
                return scale * min(a, s - a)
        return scale * cross

    dist = tuple(tuple(d(u, v) for v in range(total)) for u in range(total))
    return Instance(dist, k, 0, symmetric=True)


def _closure(mat):
    n = len(mat)
    d = [list(row) for row in mat]
    for w in range(n):
        for u in range(n):
            duw = d[u][w]
            for v in range(n):
                alt = duw + d[w][v]
                if alt < d[u][v]:
                    d[u][v] = alt
    return tuple(tuple(row) for row in d)


def random_metric_instance(rng: random.Random, n, k, z=0, high=60) -> Instance:
    raw = [[0] * n for _ in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            raw[u][v] = raw[v][u] = rng.randint(1, high)
    return Instance(_closure(raw), k, z, symmetric=True)


def random_directed_metric_instance(rng: random.Random, n, k, z=0, high=60) -> Instance:
    raw = [[0 if u == v else rng.randint(1, high) for v in range(n)] for u in range(n)]
    return Instance(_closure(raw), k, z, symmetric=False)


@pytest.fixture
def line4() -> Instance:
    return line_instance([0, 1, 10, 11], k=2)
