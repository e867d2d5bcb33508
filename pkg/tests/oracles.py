"""Brute-force reference computations, written independently of kgt.analysis."""

import numpy as np

from kgt.core import ones


def reach_matrix(graph):
    """R[i, j] = 1 iff v_j is reachable from v_i (v_i Lambda v_j nonempty)."""
    vs = list(graph.vertices)
    idx = {v: i for i, v in enumerate(vs)}
    n = len(vs)
    A = np.eye(n, dtype=np.int64)
    for e in graph.edges.values():
        A[idx[e.dst], idx[e.src]] = 1
    R = A.copy()
    for _ in range(n):
        R = np.minimum(R @ A + R, 1)
    return vs, idx, R


def diagonal_adjacency(graph):
    """Vertex adjacency of the degree-(1,...,1) paths, via raw walks."""
    vs = list(graph.vertices)
    idx = {v: i for i, v in enumerate(vs)}
    D = np.zeros((len(vs), len(vs)), dtype=bool)
    word = tuple(range(1, graph.k + 1))
    for walk in graph.walks(word):
        D[idx[graph.r(walk[0])], idx[graph.s(walk[-1])]] = True
    return D


def simple_cycles(D):
    n = D.shape[0]
    out = []

    def dfs(start, cur, path, seen):
        for w in np.nonzero(D[cur])[0]:
            w = int(w)
            if w == start:
                out.append(tuple(path))
            elif w > start and w not in seen:
                seen.add(w)
                path.append(w)
                dfs(start, w, path, seen)
                path.pop()
                seen.discard(w)

    for s in range(n):
        dfs(s, s, [s], {s})
    return out


def cofinal_oracle(graph):
    """Cofinal iff no vertex v and eventually periodic diagonal path avoid H(v).

    Every diagonal walk staying outside H(v) eventually loops through a simple
    cycle, and the periodic path around that cycle also stays outside H(v),
    so enumerating simple cycles of the diagonal graph is enough.
    """
    vs, idx, R = reach_matrix(graph)
    cycles = simple_cycles(diagonal_adjacency(graph))
    for v in vs:
        reach = R[idx[v]]
        for cyc in cycles:
            if not any(reach[i] for i in cyc):
                return False
    return True


def periodic_oracle(graph, v, p, q, depth):
    """sigma^p = sigma^q on all of v Lambda^{p v q + depth (1..1)} segment-wise."""
    from kgt.core import box, deg_add, deg_join, deg_scale, factor

    k = graph.k
    top = deg_add(deg_join(p, q), deg_scale(depth, ones(k)))
    for lam in graph.paths_of_degree(top, range=v):
        for l in box(deg_scale(depth, ones(k))):
            if factor(lam, p, deg_add(p, l)) != factor(lam, q, deg_add(q, l)):
                return False
    return True
