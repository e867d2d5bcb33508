import pytest
from hypothesis import given, settings, strategies as st

from kgt.catalog import b1, cycle, flip_graph, two_loop
from kgt.constructions import (
    build_tower,
    connector_path,
    covering_from_quotient,
    cylinder_is_empty,
    cylinder_membership,
    identity_covering,
    profinite_skew_bijection,
    projlim_path,
    projlim_paths,
    skew_lift,
    skew_product,
    skew_split,
    to_dot,
    tower_from_chain,
    validate_covering,
)
from kgt.core import are_isomorphic, box, compose
from kgt.errors import IncompatibleTuple, NotLocallyInjective, NotSurjective
from kgt.groups import FiniteGroup, ProfiniteElement, bd_chain, s3_chain, trivial_chain, trivial_cocycle


def test_skew_product_bd_level_2_is_c2():
    cc = bd_chain(2)
    lam2 = skew_product(cc.graph, cc.c(2), cc.group(2))
    assert len(lam2.vertices) == 2 and len(lam2.edges) == 2
    assert are_isomorphic(lam2, cycle(2)) is not None


def test_skew_product_trivial_group():
    g = flip_graph(2, 2, [1, 0, 3, 2])
    z1 = FiniteGroup.cyclic(1)
    assert are_isomorphic(skew_product(g, trivial_cocycle(g, z1)), g) is not None


@pytest.mark.parametrize("cc", [bd_chain(3), s3_chain()], ids=["bd", "s3"])
def test_skew_product_path_counts(cc):
    n = cc.length
    lvl = cc.level_graph(n)
    for d in box((2,) * cc.graph.k):
        assert len(lvl.paths_of_degree(d)) == len(cc.graph.paths_of_degree(d)) * len(cc.group(n))


def test_skew_lift_and_split_roundtrip():
    cc = s3_chain()
    lvl, c = cc.level_graph(3), cc.c(3)
    G = cc.group(3)
    for lam in cc.graph.paths_of_degree((1, 1)):
        for g in G:
            mu = skew_lift(lvl, c, lam, g)
            assert mu.source == (lam.source, g)
            assert mu.range == (lam.range, G.mul(c(lam), g))
            assert skew_split(mu, cc.graph) == (lam, g)
            assert mu in lvl.paths_of_degree((1, 1))


def test_double_cover_c4_c2():
    c4, c2 = cycle(4), cycle(2)
    vmap = {f"v{i}": f"v{i % 2}" for i in range(4)}
    emap = {f"e{i}": f"e{i % 2}" for i in range(4)}
    p = validate_covering(c4, c2, vmap, emap)
    assert sorted(len(p.vertex_fiber(v)) for v in c2.vertices) == [2, 2]
    identity_covering(c4)
    with pytest.raises((NotSurjective, NotLocallyInjective)):
        validate_covering(c4, c2, {v: "v0" for v in c4.vertices}, {e: "e0" for e in c4.edges})
    with pytest.raises(NotSurjective):
        validate_covering(c2, c4, {"v0": "v0", "v1": "v1"}, {"e0": "e0", "e1": "e1"})


def test_covering_from_quotient_bd():
    cc = bd_chain(3)
    p1 = covering_from_quotient(cc, 1)
    assert len(p1.source.vertices) == 2 and len(p1.target.vertices) == 1
    assert set(p1.edge_map.values()) == {("f", 0)}
    p2 = covering_from_quotient(cc, 2)
    for (v, i), (w, j) in p2.vertex_map.items():
        assert j == i % 2
    t = trivial_chain(two_loop(), 2)
    p = covering_from_quotient(t, 1)
    assert all(a == b for a, b in p.vertex_map.items())


def test_s3_covering_fibers():
    cc = s3_chain()
    p = covering_from_quotient(cc, 2)
    assert sorted({len(p.vertex_fiber(v)) for v in p.target.vertices}) == [3]


def test_tower_bd_three_levels():
    cc = bd_chain(3)
    t = tower_from_chain(cc)
    assert [len(t.level_vertices(n)) for n in (1, 2, 3)] == [1, 2, 4]
    assert len(t.connecting_edges(2)) == 2 and len(t.connecting_edges(3)) == 4
    assert t.graph.k == 2
    # e(r(lam)) lam = p_1(lam) e(s(lam)) for each level-2 edge
    for lam in t.levels[1].edges:
        ed = t.levels[1].edges[lam]
        left = compose(t.graph.path([("e", 2, ed.dst)]), t.graph.path([(2, lam)]))
        right = compose(t.graph.path([(1, t.coverings[0].edge_map[lam])]), t.graph.path([("e", 2, ed.src)]))
        assert left == right


def test_tower_single_level():
    t = build_tower([], first_level=bd_chain(1).level_graph(1))
    assert t.graph.k == 2 and len(t.graph.edges_of_color(2)) == 0
    assert are_isomorphic(b1(), t.levels[0]) is not None


def test_connector_paths():
    cc = bd_chain(4)
    t = tower_from_chain(cc)
    v = (3, ("v", 2))
    assert connector_path(t, v, 3) == t.graph.vertex(v)
    a = connector_path(t, v, 1)
    assert a.degree == (0, 2) and a.range == (1, ("v", 0)) and a.source == v
    for m in range(1, 5):
        for v in t.level_vertices(m):
            for l in range(1, m + 1):
                paths = t.graph.paths_of_degree((0, m - l), source=v)
                assert len(paths) == 1 and paths[0] == connector_path(t, v, l)


def test_projlim_examples():
    cc = bd_chain(3)
    covs = [cc.covering(1), cc.covering(2)]
    comps = [cc.level_graph(1).path([("f", 0)]), cc.level_graph(2).path([("f", 1)]), cc.level_graph(3).path([("f", 3)])]
    x = projlim_path(covs, comps)
    assert x.degree == (1,)
    assert x.range().degree == (0,) and x.range().range() == x.range()
    bad = [comps[0], comps[1], cc.level_graph(3).path([("f", 2)])]
    with pytest.raises(IncompatibleTuple):
        projlim_path(covs, bad)
    ys = projlim_paths(covs, (1,), 3, first_level=cc.level_graph(1))
    assert x in ys and len(ys) == 4
    for y in ys:
        for z in ys:
            if y.source() == z.range():
                assert y.compose(z).components == tuple(compose(a, b) for a, b in zip(y.components, z.components))
        assert y.factor((0,), (1,)) == y


def test_cylinders():
    cc = bd_chain(3)
    covs = [cc.covering(1), cc.covering(2)]
    base = cc.level_graph(1)
    f = base.path([("f", 0)])
    assert cylinder_is_empty([f, cc.level_graph(2).vertex(("v", 0))])
    level2 = projlim_paths(covs[:1], (1,), 2, first_level=base)
    assert len(level2) == 2 and all(cylinder_membership([f], y) for y in level2)
    for y in projlim_paths(covs, (2,), 3, first_level=base):
        assert cylinder_membership(y.components[:2], y)


@pytest.mark.parametrize("level", [1, 2, 3, 4])
def test_profinite_skew_bijection_bd(level):
    cc = bd_chain(4)
    for d in [(0,), (1,), (2,)]:
        rep = profinite_skew_bijection(cc, level, d)
        assert rep and rep.domain_size == rep.codomain_size == len(cc.group(level))


def test_profinite_skew_bijection_examples():
    cc = bd_chain(4)
    rep = profinite_skew_bijection(cc, 4, (1,))
    f = cc.graph.path(["f"])
    g = ProfiniteElement.from_top(cc.chain, 1)
    t = rep.mapping[(f, g)]
    assert [p.source for p in t.components] == [("v", x) for x in g.components]
    e = ProfiniteElement.identity(cc.chain)
    assert [p.source[1] for p in rep.mapping[(f, e)].components] == [0, 0, 0, 0]


def test_profinite_skew_bijection_s3():
    cc = s3_chain()
    for d in [(1, 0), (1, 1)]:
        rep = profinite_skew_bijection(cc, 3, d)
        assert rep and rep.codomain_size == len(cc.graph.paths_of_degree(d)) * 6


def test_dot_is_deterministic():
    t = tower_from_chain(bd_chain(3))
    a, b = to_dot(t.graph, tower=t), to_dot(t.graph, tower=t)
    assert a == b and "cluster_level_3" in a and "dashed" in a


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5), st.integers(0, 3))
def test_bd_covering_fiber_formula(n, length):
    cc = bd_chain(6)
    p = cc.covering(n)
    for lam in p.target.paths_of_degree((length,)):
        fib = p.fiber(lam)
        assert len(fib) == 2
        for mu in fib:
            assert mu.source[1] % 2 ** (n - 1) == lam.source[1]
