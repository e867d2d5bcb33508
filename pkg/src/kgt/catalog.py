"""Small named k-graphs used throughout the examples and tests."""

from __future__ import annotations

import itertools
from typing import Hashable, Optional, Sequence

from .core import Edge, KGraph, build


def b1() -> KGraph:
    """One vertex ``v`` carrying one loop ``f``."""
    return build(1, ["v"], [Edge("f", 1, "v", "v")], name="B_1")


def cycle(p: int) -> KGraph:
    """The cycle C_p: r(e_i) = v_i and s(e_i) = v_{i+1 mod p}."""
    if p < 1:
        raise ValueError("cycle length must be positive")
    vs = [f"v{i}" for i in range(p)]
    es = [Edge(f"e{i}", 1, f"v{(i + 1) % p}", f"v{i}") for i in range(p)]
    return build(1, vs, es, name=f"C_{p}")


def two_loop() -> KGraph:
    """One vertex with two loops ``a`` and ``b``."""
    return build(1, ["v"], [Edge("a", 1, "v", "v"), Edge("b", 1, "v", "v")], name="two-loop")


def one_square() -> KGraph:
    """One vertex, blue loop ``a``, red loop ``b`` and the square ab = ba."""
    return build(
        2,
        ["v"],
        [Edge("a", 1, "v", "v"), Edge("b", 2, "v", "v")],
        [("a", "b", "b", "a")],
        name="one-square",
    )


def directed_graph(vertices: Sequence[Hashable], arrows: Sequence[tuple], name: str = "") -> KGraph:
    """A 1-graph from ``(id, src, dst)`` triples."""
    return build(1, vertices, [Edge(e, 1, s, r) for e, s, r in arrows], name=name)


def flip_graph(n_blue: int, n_red: int, perm: Optional[Sequence[int]] = None) -> KGraph:
    """One-vertex 2-graph with ``n_blue`` blue and ``n_red`` red loops.

    ``perm`` is a permutation of ``range(n_blue * n_red)`` choosing which
    red-blue pair each blue-red pair is identified with; the identity gives
    the commuting (product) 2-graph.
    """
    blue = [f"a{i}" for i in range(n_blue)]
    red = [f"b{j}" for j in range(n_red)]
    pairs = list(itertools.product(range(n_blue), range(n_red)))
    perm = list(range(len(pairs))) if perm is None else list(perm)
    squares = []
    for idx, (i, j) in enumerate(pairs):
        ii, jj = pairs[perm[idx]]
        squares.append((blue[i], red[j], red[jj], blue[ii]))
    edges = [Edge(a, 1, "v", "v") for a in blue] + [Edge(b, 2, "v", "v") for b in red]
    return build(2, ["v"], edges, squares, name=f"flip({n_blue},{n_red})")


def product(e1: KGraph, e2: KGraph, name: str = "") -> KGraph:
    """Cartesian product of two 1-graphs, as a 2-graph."""
    if e1.k != 1 or e2.k != 1:
        raise ValueError("product() expects two 1-graphs")
    vs = [(a, b) for a in e1.vertices for b in e2.vertices]
    edges = []
    for e, ed in e1.edges.items():
        for w in e2.vertices:
            edges.append(Edge((e, w), 1, (ed.src, w), (ed.dst, w)))
    for f, fd in e2.edges.items():
        for u in e1.vertices:
            edges.append(Edge((u, f), 2, (u, fd.src), (u, fd.dst)))
    squares = []
    for e, ed in e1.edges.items():
        for f, fd in e2.edges.items():
            # (e, r(f)) (s(e), f) = (r(e), f) (e, s(f))
            squares.append(((e, fd.dst), (ed.src, f), (ed.dst, f), (e, fd.src)))
    return build(2, vs, edges, squares, name=name or f"{e1.name}x{e2.name}")


def disjoint_union(g1: KGraph, g2: KGraph, name: str = "") -> KGraph:
    """Tag components with 0 and 1 to keep identifiers apart."""
    if g1.k != g2.k:
        raise ValueError("rank mismatch")
    vs, es, sq = [], [], []
    for tag, g in ((0, g1), (1, g2)):
        vs += [(tag, v) for v in g.vertices]
        es += [Edge((tag, e.id), e.color, (tag, e.src), (tag, e.dst)) for e in g.edges.values()]
        sq += [((tag, f), (tag, gg), (tag, gp), (tag, fp)) for (f, gg), (gp, fp) in g.squares.items()]
    return build(g1.k, vs, es, sq, name=name or f"{g1.name}+{g2.name}")
