"""Exact outlier clustering for tree-structured optima.

Pipeline: minimum spanning tree, transform into a binary tree with
zero-distance dummy vertices, then a subtree-partition dynamic program over
states (node, clusters used, outliers spent, center of the node's cluster).
On 2-perturbation-resilient outlier instances the optimal clusters are MST
subtrees, so the DP recovers the exact optimum; on arbitrary input it returns
the best subtree-structured solution, which may be suboptimal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (
    OUTLIER,
    AsymmetricUnsupported,
    Clustering,
    Instance,
    Objective,
    cost,
)


class Infeasible(RuntimeError):
    """No partition with exactly k clusters exists within the outlier budget."""


@dataclass(frozen=True)
class BinaryTree:
    """MST reshaped so every node has at most two children.

    Nodes 0..n_real-1 are the original points; ids >= n_real are dummy vertices
    at distance 0 from everything. Contracting the dummies recovers the input
    tree. Dummies may sit inside clusters but are never centers and never count
    as outliers.
    """

    root: int
    parent: tuple
    left: tuple
    right: tuple
    is_dummy: tuple
    n_real: int

    @property
    def size(self) -> int:
        return len(self.parent)

    def children(self, u: int) -> list[int]:
        out = []
        if self.left[u] >= 0:
            out.append(self.left[u])
        if self.right[u] >= 0:
            out.append(self.right[u])
        return out

    def contracted_edges(self) -> frozenset:
        """Edges between real nodes after removing the dummy vertices."""
        out = set()
        for u in range(self.n_real):
            if u == self.root:
                continue
            p = self.parent[u]
            while p >= self.n_real:
                p = self.parent[p]
            out.add((min(u, p), max(u, p)))
        return frozenset(out)


def build_mst(inst: Instance) -> tuple:
    """Minimum spanning tree edge list (Kruskal, lexicographic tie-breaking)."""
    if not inst.symmetric:
        raise AsymmetricUnsupported("spanning trees need a symmetric instance")
    n = inst.n
    dist = inst.dist
    edges = sorted(
        (dist[u][v], u, v) for u in range(n) for v in range(u + 1, n)
    )
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    out = []
    for _, u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            out.append((u, v))
            if len(out) == n - 1:
                break
    return tuple(out)


def binarize(tree, inst: Instance) -> BinaryTree:
    """Rooted binary version of a spanning tree (root = lowest index).

    While a node has more than two children, its two smallest-id children are
    reattached under a fresh dummy vertex; at most n - 2 dummies are created.
    """
    n = inst.n
    adj: dict[int, list[int]] = {u: [] for u in range(n)}
    for u, v in tree:
        adj[u].append(v)
        adj[v].append(u)
    root = 0
    children: dict[int, list[int]] = {u: [] for u in range(n)}
    seen = {root}
    order = [root]
    for u in order:
        for v in sorted(adj[u]):
            if v not in seen:
                seen.add(v)
                children[u].append(v)
                order.append(v)
    if len(seen) != n:
        raise ValueError("input edges do not form a spanning tree")
    next_id = n
    todo = [u for u in range(n) if len(children[u]) > 2]
    while todo:
        u = todo.pop()
        while len(children[u]) > 2:
            kids = sorted(children[u])
            a, b = kids[0], kids[1]
            dummy = next_id
            next_id += 1
            children[dummy] = [a, b]
            children[u] = kids[2:] + [dummy]
    total = next_id
    parent = [-1] * total
    left = [-1] * total
    right = [-1] * total
    for u in range(total):
        kids = sorted(children.get(u, []))
        assert len(kids) <= 2
        if kids:
            left[u] = kids[0]
        if len(kids) == 2:
            right[u] = kids[1]
        for v in kids:
            parent[v] = u
    is_dummy = tuple(u >= n for u in range(total))
    assert total - n <= max(0, n - 2)
    return BinaryTree(root, tuple(parent), tuple(left), tuple(right), is_dummy, n)


def solve_btp(inst: Instance, btree: BinaryTree, obj: Objective) -> Clustering:
    """Fill the partition DP bottom-up and reconstruct the best clustering.

    State value: minimum cost of handling the subtree of a node with j clusters
    touched, t real outliers, and the node's own cluster centered at c (a real
    point, possibly outside the subtree) or the node marked outlier. k-center
    uses max in place of + when combining costs.
    """
    n = inst.n
    k, z = inst.k, inst.z
    dist = inst.dist
    term = obj.term
    summing = obj.aggregate == "sum"
    INF = math.inf
    size = btree.size
    n_real = btree.n_real
    ncent = n_real + 1  # center axis: 0..n_real-1 real, slot n_real = outlier
    OUT = n_real

    def ed(c: int, node: int):
        if node >= n_real:
            return 0
        return term(dist[c][node])

    combine = (lambda a, b: a + b) if summing else (lambda a, b: a if a >= b else b)

    mask = [0] * size
    post = []
    stack = [(btree.root, False)]
    while stack:
        u, done = stack.pop()
        if done:
            m = 1 << u if u < n_real else 0
            for w in btree.children(u):
                m |= mask[w]
            mask[u] = m
            post.append(u)
        else:
            stack.append((u, True))
            for w in btree.children(u):
                stack.append((w, False))

    # table[u][j][t][c] and best-over-subtree-centers M[u][j][t] = (val, c)
    table: dict[int, list] = {}
    M: dict[int, list] = {}
    bp: dict[int, list] = {}

    for u in post:
        tab = [[[INF] * ncent for _ in range(z + 1)] for _ in range(k + 1)]
        back = [[[None] * ncent for _ in range(z + 1)] for _ in range(k + 1)]
        kids = btree.children(u)
        real = u < n_real
        if not kids:
            if real:
                if z >= 1:
                    tab[0][1][OUT] = 0
            else:
                tab[0][0][OUT] = 0
            for c in range(n_real):
                tab[1][0][c] = ed(c, u)
        elif len(kids) == 1:
            (w,) = kids
            tw, Mw, mw = table[w], M[w], mask[w]
            for j in range(k + 1):
                for t in range(z + 1):
                    treq = t - 1 if real else t
                    if treq >= 0:
                        val, cw = Mw[j][treq]
                        if val < INF:
                            tab[j][t][OUT] = val
                            back[j][t][OUT] = ((j, treq, cw), None)
            for c in range(n_real):
                inside = (mw >> c) & 1
                base = ed(c, u)
                for j in range(1, k + 1):
                    for t in range(z + 1):
                        best = INF
                        choice = None
                        joined = tw[j][t][c]
                        if joined < INF:
                            best = joined
                            choice = ((j, t, c), None)
                        if not inside:
                            val, cw = Mw[j - 1][t]
                            if val < best:
                                best = val
                                choice = ((j - 1, t, cw), None)
                        if best < INF:
                            tab[j][t][c] = combine(base, best)
                            back[j][t][c] = choice
        else:
            l, r = kids
            tl, Ml, ml = table[l], M[l], mask[l]
            tr, Mr, mr = table[r], M[r], mask[r]
            for j in range(k + 1):
                for t in range(z + 1):
                    treq = t - 1 if real else t
                    if treq < 0:
                        continue
                    best = INF
                    choice = None
                    for jl in range(j + 1):
                        row_l = Ml[jl]
                        row_r = Mr[j - jl]
                        for tl_ in range(treq + 1):
                            a, ca = row_l[tl_]
                            if a >= INF:
                                continue
                            b, cb = row_r[treq - tl_]
                            if b >= INF:
                                continue
                            v = combine(a, b)
                            if v < best:
                                best = v
                                choice = ((jl, tl_, ca), (j - jl, treq - tl_, cb))
                    if best < INF:
                        tab[j][t][OUT] = best
                        back[j][t][OUT] = choice
            for c in range(n_real):
                in_l = (ml >> c) & 1
                in_r = (mr >> c) & 1
                base = ed(c, u)
                for j in range(1, k + 1):
                    for t in range(z + 1):
                        best = INF
                        choice = None
                        if not in_l and not in_r:
                            # both children's clusters stay in their subtrees
                            for jl in range(j):
                                row_l = Ml[jl]
                                row_r = Mr[j - 1 - jl]
                                for tl_ in range(t + 1):
                                    a, ca = row_l[tl_]
                                    if a >= INF:
                                        continue
                                    b, cb = row_r[t - tl_]
                                    if b >= INF:
                                        continue
                                    v = combine(a, b)
                                    if v < best:
                                        best = v
                                        choice = ((jl, tl_, ca), (j - 1 - jl, t - tl_, cb))
                        if not in_l:
                            # right child joins u's cluster
                            for jl in range(j + 1):
                                row_l = Ml[jl]
                                col_r = tr[j - jl]
                                for tl_ in range(t + 1):
                                    a, ca = row_l[tl_]
                                    if a >= INF:
                                        continue
                                    b = col_r[t - tl_][c]
                                    if b >= INF:
                                        continue
                                    v = combine(a, b)
                                    if v < best:
                                        best = v
                                        choice = ((jl, tl_, ca), (j - jl, t - tl_, c))
                        if not in_r:
                            # left child joins u's cluster
                            for jl in range(j + 1):
                                col_l = tl[jl]
                                row_r = Mr[j - jl]
                                for tl_ in range(t + 1):
                                    a = col_l[tl_][c]
                                    if a >= INF:
                                        continue
                                    b, cb = row_r[t - tl_]
                                    if b >= INF:
                                        continue
                                    v = combine(a, b)
                                    if v < best:
                                        best = v
                                        choice = ((jl, tl_, c), (j - jl, t - tl_, cb))
                        # both children join u's cluster: it is counted in both
                        # child tables, so the split sums to j + 1
                        for jl in range(1, j + 1):
                            jr = j + 1 - jl
                            if jr < 1 or jr > k:
                                continue
                            col_l = tl[jl]
                            col_r = tr[jr]
                            for tl_ in range(t + 1):
                                a = col_l[tl_][c]
                                if a >= INF:
                                    continue
                                b = col_r[t - tl_][c]
                                if b >= INF:
                                    continue
                                v = combine(a, b)
                                if v < best:
                                    best = v
                                    choice = ((jl, tl_, c), (jr, t - tl_, c))
                        if best < INF:
                            tab[j][t][c] = combine(base, best)
                            back[j][t][c] = choice
        msub = [[(INF, OUT)] * (z + 1) for _ in range(k + 1)]
        m = mask[u]
        for j in range(k + 1):
            row = tab[j]
            out = msub[j]
            for t in range(z + 1):
                best = row[t][OUT]
                cbest = OUT
                cells = row[t]
                cc = m
                while cc:
                    c = (cc & -cc).bit_length() - 1
                    cc &= cc - 1
                    if cells[c] < best:
                        best = cells[c]
                        cbest = c
                out[t] = (best, cbest)
        table[u] = tab
        M[u] = msub
        bp[u] = back

    root = btree.root
    best_val = INF
    best_state = None
    for t in range(z + 1):
        cells = table[root][k][t]
        for c in list(range(n_real)) + [OUT]:
            if cells[c] < best_val:
                best_val = cells[c]
                best_state = (k, t, c)
    if best_state is None or best_val >= INF:
        raise Infeasible("no feasible partition into k clusters within the outlier budget")

    assignment = [OUTLIER] * n
    stack = [(root, best_state)]
    while stack:
        u, (j, t, c) = stack.pop()
        if u < n_real and c != OUT:
            assignment[u] = c
        node_bp = bp[u][j][t][c]
        if node_bp is None:
            continue
        for child, st in zip(btree.children(u), node_bp):
            if st is not None:
                stack.append((child, st))

    centers = tuple(sorted({a for a in assignment if a != OUTLIER}))
    if len(centers) != k:
        raise Infeasible(f"reconstruction produced {len(centers)} clusters, expected {k}")
    index = {c: i for i, c in enumerate(centers)}
    final = tuple(OUTLIER if a == OUTLIER else index[a] for a in assignment)
    clus = Clustering(final, centers)
    achieved = cost(inst, clus, obj)
    if inst.exact:
        assert achieved == best_val, (achieved, best_val)
    else:
        assert math.isclose(achieved, best_val, rel_tol=1e-9, abs_tol=1e-9)
    return clus


def solve_outlier_clustering(inst: Instance, obj: Objective) -> Clustering:
    """MST -> binary tree -> subtree DP; exact on resilient outlier instances."""
    tree = build_mst(inst)
    btree = binarize(tree, inst)
    return solve_btp(inst, btree, obj)
