"""Small k-graphs (k <= 2, at most 8 vertices, no sources) used by oracle tests."""

import random

from kgt.catalog import (
    b1,
    cycle,
    directed_graph,
    disjoint_union,
    flip_graph,
    one_square,
    product,
    two_loop,
)
from kgt.groups import bd_chain


def random_one_graph(seed, n_vertices, extra):
    """Random 1-graph where every vertex receives at least one edge."""
    rng = random.Random(seed)
    vs = [f"u{i}" for i in range(n_vertices)]
    arrows = []
    for i, v in enumerate(vs):
        arrows.append((f"x{i}", rng.choice(vs), v))
    for j in range(extra):
        arrows.append((f"y{j}", rng.choice(vs), rng.choice(vs)))
    return directed_graph(vs, arrows, name=f"rand{seed}")


def corpus():
    out = [
        b1(),
        cycle(2),
        cycle(3),
        cycle(5),
        cycle(8),
        two_loop(),
        one_square(),
        flip_graph(2, 2),
        flip_graph(2, 2, [1, 0, 3, 2]),
        flip_graph(2, 1, [1, 0]),
        disjoint_union(cycle(2), cycle(3)),
        disjoint_union(b1(), two_loop()),
        disjoint_union(one_square(), one_square()),
        # loop at t feeding into a 2-cycle: the loop path never reaches back
        directed_graph(["t", "c0", "c1"], [("l", "t", "t"), ("a", "t", "c0"), ("b", "c0", "c1"), ("c", "c1", "c0")], "tail"),
        # the same tail pointing the other way is cofinal
        directed_graph(["t", "c0", "c1"], [("a", "c0", "t"), ("b", "c0", "c1"), ("c", "c1", "c0")], "tail-in"),
        # two loops joined by one edge
        directed_graph(["p", "q"], [("lp", "p", "p"), ("lq", "q", "q"), ("pq", "p", "q")], "bridge"),
        product(cycle(2), cycle(3)),
        product(cycle(2), cycle(4)),
        product(b1(), two_loop()),
        product(cycle(2), directed_graph(["p", "q"], [("lp", "p", "p"), ("lq", "q", "q"), ("pq", "p", "q")], "bridge")),
        bd_chain(4).level_graph(4),
    ]
    for seed in range(8):
        out.append(random_one_graph(seed, 3 + seed % 5, seed % 3))
    for seed in range(4):
        out.append(product(random_one_graph(100 + seed, 2, seed % 2), random_one_graph(200 + seed, 3, 1)))
    return out
