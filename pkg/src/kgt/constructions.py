"""Skew products, coverings, tower (k+1)-graphs and projective-limit tuples.

Identifier conventions
----------------------
* skew product ``Lambda x_c G``: vertex ``(v, g)``, edge ``(e, g)`` where ``g``
  is the group label at the *source*; ``r(e, g) = (r(e), c(e) g)``.
* tower graph: vertex ``(n, w)`` for ``w`` in level ``n``; level edge
  ``(n, e)``; the degree-e_{k+1} edge leaving level ``n`` (``n >= 2``) at
  ``w`` is ``("e", n, w)``, with source ``(n, w)`` and range
  ``(n - 1, p_{n-1}(w))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Mapping, Optional, Sequence

from .core import (
    Degree,
    Edge,
    KGraph,
    Path,
    box,
    build,
    compose,
    factor,
    label,
    sort_key,
)
from .errors import (
    ChainMismatch,
    EndpointMismatch,
    IncompatibleTuple,
    IndexOutOfRange,
    LevelOutOfRange,
    NotFunctorial,
    NotLocallyInjective,
    NotLocallySurjective,
    NotSurjective,
    SquareNotPreserved,
)
from .groups import Cocycle, CocycleChain, FiniteGroup, all_elements


# -- skew products ----------------------------------------------------------

def skew_product(graph: KGraph, c: Cocycle, group: Optional[FiniteGroup] = None) -> KGraph:
    """The skew-product k-graph Lambda x_c G."""
    G = c.group if group is None else group
    if G is not c.group:
        raise ValueError("cocycle takes values in a different group")
    if c.graph is not graph:
        raise ValueError("cocycle lives on a different graph")
    vertices = [(v, g) for v in graph.vertices for g in G]
    edges = []
    for e, ed in graph.edges.items():
        ce = c.labels[e]
        for g in G:
            edges.append(Edge((e, g), ed.color, (ed.src, g), (ed.dst, G.mul(ce, g))))
    squares = []
    for (f, g_), (gp, fp) in graph.squares.items():
        cg, cfp = c.labels[g_], c.labels[fp]
        for h in G:
            # (f, c(g)h)(g, h) = (fg, h) = (g'f', h) = (g', c(f')h)(f', h)
            squares.append(((f, G.mul(cg, h)), (g_, h), (gp, G.mul(cfp, h)), (fp, h)))
    name = f"{graph.name or 'L'} x {G.name or 'G'}"
    return build(graph.k, vertices, edges, squares, name=name, max_rank=max(graph.k, 3))


def skew_lift(skew: KGraph, c: Cocycle, path: Path, g: Hashable) -> Path:
    """The path (lambda, g) of the skew product: source (s(lambda), g)."""
    if path.is_vertex:
        return skew.vertex((path.range, g))
    G = c.group
    out = []
    h = g
    for e in reversed(path.edges):
        out.append((e, h))
        h = G.mul(c.labels[e], h)
    out.reverse()
    return Path(skew, (path.range, h), (path.source, g), path.degree, tuple(out))


def skew_split(path: Path, base: KGraph) -> tuple[Path, Hashable]:
    """Inverse of :func:`skew_lift`: returns (lambda, g)."""
    v, g = path.source
    if path.is_vertex:
        return base.vertex(v), g
    return base.path([e for e, _ in path.edges]), g


# -- coverings --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CoveringMap:
    """A validated covering p: source -> target."""

    source: KGraph
    target: KGraph
    vertex_map: Mapping
    edge_map: Mapping

    def vertex(self, v: Hashable) -> Hashable:
        return self.vertex_map[v]

    def edge(self, e: Hashable) -> Hashable:
        return self.edge_map[e]

    def apply(self, path: Path) -> Path:
        if path.graph is not self.source:
            raise ValueError("path is not in the covering's source graph")
        if path.is_vertex:
            return self.target.vertex(self.vertex_map[path.range])
        # colors are preserved, so the image of a normal form is a normal form
        return Path(
            self.target,
            self.vertex_map[path.range],
            self.vertex_map[path.source],
            path.degree,
            tuple(self.edge_map[e] for e in path.edges),
        )

    def fiber(self, path: Path) -> list[Path]:
        """All paths of the source graph mapping onto ``path``."""
        out = []
        for u in self.vertex_fiber(path.range):
            out += [p for p in self.source.paths_of_degree(path.degree, range=u) if self.apply(p) == path]
        return out

    def vertex_fiber(self, v: Hashable) -> list:
        return [u for u in self.source.vertices if self.vertex_map[u] == v]

    def lift(self, path: Path, range_vertex: Hashable) -> Path:
        """The unique lift of ``path`` with the given range (local bijectivity)."""
        for p in self.source.paths_of_degree(path.degree, range=range_vertex):
            if self.apply(p) == path:
                return p
        raise KeyError("no lift with that range")


def validate_covering(
    gamma: KGraph,
    lam: KGraph,
    vertex_map: Mapping,
    edge_map: Mapping,
    bound: Optional[Degree] = None,
) -> CoveringMap:
    """Check that the maps define a covering ``gamma -> lam``."""
    for v in gamma.vertices:
        if v not in vertex_map or not lam.has_vertex(vertex_map[v]):
            raise NotFunctorial(f"vertex map undefined or invalid at {label(v)}", vertex=v)
    for e in gamma.edges:
        if e not in edge_map or edge_map[e] not in lam.edges:
            raise NotFunctorial(f"edge map undefined or invalid at {label(e)}", edge=e)
    missing_v = set(lam.vertices) - set(vertex_map[v] for v in gamma.vertices)
    if missing_v:
        v = min(missing_v, key=sort_key)
        raise NotSurjective(f"vertex {label(v)} of the target is not hit", vertex=v)
    missing_e = set(lam.edges) - set(edge_map[e] for e in gamma.edges)
    if missing_e:
        e = min(missing_e, key=sort_key)
        raise NotSurjective(f"edge {label(e)} of the target is not hit", edge=e)
    for e, ed in gamma.edges.items():
        img = lam.edges[edge_map[e]]
        if img.color != ed.color or img.src != vertex_map[ed.src] or img.dst != vertex_map[ed.dst]:
            raise NotFunctorial(f"edge {label(e)} is not mapped compatibly", edge=e)

    for v in gamma.vertices:
        pv = vertex_map[v]
        for i in range(1, gamma.k + 1):
            for side, mine, theirs in (
                ("range", gamma.edges_into(v, i), lam.edges_into(pv, i)),
                ("source", gamma.edges_from(v, i), lam.edges_from(pv, i)),
            ):
                images = [edge_map[e] for e in mine]
                if len(set(images)) != len(images):
                    raise NotLocallyInjective(
                        f"two {side}-side color-{i} edges at {label(v)} share an image", vertex=v, color=i
                    )
                if set(images) != set(theirs):
                    raise NotLocallySurjective(
                        f"{side}-side color-{i} edges at {label(v)} miss part of the target", vertex=v, color=i
                    )

    for (f, g), (gp, fp) in gamma.squares.items():
        if lam.squares.get((edge_map[f], edge_map[g])) != (edge_map[gp], edge_map[fp]):
            raise SquareNotPreserved(f"square ({label(f)},{label(g)}) is not preserved", square=(f, g, gp, fp))

    p = CoveringMap(gamma, lam, dict(vertex_map), dict(edge_map))
    _check_local_bijectivity(p, (2,) * gamma.k if bound is None else bound)
    return p


def _check_local_bijectivity(p: CoveringMap, bound: Degree) -> None:
    gamma, lam = p.source, p.target
    for n in box(bound):
        if sum(n) == 0:
            continue
        up = gamma.paths_of_degree(n)
        down = lam.paths_of_degree(n)
        for v in gamma.vertices:
            pv = p.vertex_map[v]
            for side, attr in (("range", "range"), ("source", "source")):
                mine = [p.apply(x) for x in up if getattr(x, attr) == v]
                theirs = [x for x in down if getattr(x, attr) == pv]
                if len(set(mine)) != len(mine):
                    raise NotLocallyInjective(f"degree-{n} {side}-side paths at {label(v)} collide", vertex=v, degree=n)
                if set(mine) != set(theirs):
                    raise NotLocallySurjective(f"degree-{n} {side}-side paths at {label(v)} miss targets", vertex=v, degree=n)


def covering_from_quotient(cc: CocycleChain, n: int) -> CoveringMap:
    """p_n: Lambda_{n+1} -> Lambda_n, (lambda, g) -> (lambda, q_n(g))."""
    if not 1 <= n < cc.length:
        raise IndexOutOfRange(f"p_{n} needs levels {n} and {n + 1} of a chain of length {cc.length}", level=n)
    upper, lower = cc.level_graph(n + 1), cc.level_graph(n)
    q = cc.chain.maps[n - 1]
    vmap = {(v, g): (v, q[g]) for v, g in upper.vertices}
    emap = {(e, g): (e, q[g]) for e, g in upper.edges}
    return validate_covering(upper, lower, vmap, emap)


def identity_covering(graph: KGraph) -> CoveringMap:
    return validate_covering(graph, graph, {v: v for v in graph.vertices}, {e: e for e in graph.edges})


# -- tower graphs -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TowerGraph:
    graph: KGraph
    levels: tuple
    coverings: tuple
    chain: Optional[CocycleChain] = field(default=None, compare=False)

    @property
    def depth(self) -> int:
        return len(self.levels)

    @property
    def base_rank(self) -> int:
        return self.graph.k - 1

    def vertex(self, n: int, w: Hashable) -> Hashable:
        return (n, w)

    def level_vertices(self, n: int) -> list:
        return [(n, w) for w in self.levels[n - 1].vertices]

    def connecting_edge(self, n: int, w: Hashable) -> Hashable:
        """The e_{k+1} edge with source (n, w) and range at level n - 1."""
        if not 2 <= n <= self.depth:
            raise LevelOutOfRange(f"no connecting edge leaves level {n}", level=n)
        return ("e", n, w)

    def connecting_edges(self, n: int) -> list:
        return [("e", n, w) for w in self.levels[n - 1].vertices]

    def embed(self, n: int, path: Path) -> Path:
        """The copy i_n(path) inside the tower."""
        if path.is_vertex:
            return self.graph.vertex((n, path.range))
        return Path(
            self.graph,
            (n, path.range),
            (n, path.source),
            path.degree + (0,),
            tuple((n, e) for e in path.edges),
        )

    def restrict(self, path: Path) -> tuple[int, Path]:
        """Inverse of :meth:`embed` for paths with no e_{k+1} component."""
        n, w = path.range
        if path.degree[-1] != 0:
            raise ValueError("path leaves its level")
        lv = self.levels[n - 1]
        if path.is_vertex:
            return n, lv.vertex(w)
        return n, lv.path([e for _, e in path.edges])

    def project_vertex(self, v: Hashable, to: int) -> Hashable:
        """p_{to, m}(w) for v = (m, w)."""
        m, w = v
        if not 1 <= to <= m:
            raise LevelOutOfRange(f"cannot project level {m} to {to}", level=to)
        for n in range(m - 1, to - 1, -1):
            w = self.coverings[n - 1].vertex_map[w]
        return (to, w)


def build_tower(coverings: Sequence[CoveringMap], first_level: Optional[KGraph] = None) -> TowerGraph:
    """The truncated tower of the covering sequence p_1, ..., p_{N-1}.

    ``coverings[n - 1]`` is p_n: Lambda_{n+1} -> Lambda_n.  For ``N = 1``
    pass no coverings and give ``first_level``.
    """
    coverings = tuple(coverings)
    if coverings:
        levels = [coverings[0].target] + [p.source for p in coverings]
        for i in range(1, len(coverings)):
            if coverings[i].target is not coverings[i - 1].source:
                raise ChainMismatch(f"p_{i + 1} does not land on the source of p_{i}", level=i + 1)
        if first_level is not None and first_level is not levels[0]:
            raise ChainMismatch("first_level differs from the target of p_1")
    elif first_level is None:
        raise ChainMismatch("a tower needs at least one level")
    else:
        levels = [first_level]
    k = levels[0].k
    vertices, edges, squares = [], [], []
    for n, lv in enumerate(levels, start=1):
        vertices += [(n, w) for w in lv.vertices]
        edges += [Edge((n, e), ed.color, (n, ed.src), (n, ed.dst)) for e, ed in lv.edges.items()]
        squares += [((n, f), (n, g), (n, gp), (n, fp)) for (f, g), (gp, fp) in lv.squares.items()]
    for n, p in enumerate(coverings, start=1):
        upper = levels[n]
        for w in upper.vertices:
            edges.append(Edge(("e", n + 1, w), k + 1, (n + 1, w), (n, p.vertex_map[w])))
        for lam, ed in upper.edges.items():
            # e(r(lam)) lam = p_n(lam) e(s(lam))
            squares.append(((n, p.edge_map[lam]), ("e", n + 1, ed.src), ("e", n + 1, ed.dst), (n + 1, lam)))
    graph = build(k + 1, vertices, edges, squares, name=f"tower[{len(levels)}]", max_rank=k + 1)
    return TowerGraph(graph, tuple(levels), coverings)


def tower_from_chain(cc: CocycleChain, levels: Optional[int] = None) -> TowerGraph:
    N = cc.length if levels is None else levels
    if not 1 <= N <= cc.length:
        raise IndexOutOfRange(f"chain has {cc.length} levels, asked for {N}", levels=N)
    t = build_tower([cc.covering(n) for n in range(1, N)], first_level=cc.level_graph(1))
    return TowerGraph(t.graph, t.levels, t.coverings, chain=cc)


def connector_path(tower: TowerGraph, v: Hashable, l: int) -> Path:
    """alpha_{l,m}(v): the path of degree (m-l)e_{k+1} from v down to level l."""
    m, w = v
    if not (1 <= l <= m <= tower.depth):
        raise LevelOutOfRange(f"need 1 <= {l} <= {m} <= {tower.depth}", level=l)
    if l == m:
        return tower.graph.vertex(v)
    chain = [w]
    for n in range(m - 1, l - 1, -1):
        chain.append(tower.coverings[n - 1].vertex_map[chain[-1]])
    # chain[i] lives at level m - i; the range-most edge leaves level l + 1
    edges = [("e", m - i, chain[i]) for i in range(len(chain) - 2, -1, -1)]
    return tower.graph.path(edges)


# -- projective limit -------------------------------------------------------

@dataclass(frozen=True)
class ProjLimPath:
    """A compatible tuple (lambda_1, ..., lambda_N) with p_n(lambda_{n+1}) = lambda_n."""

    components: tuple
    coverings: tuple = field(compare=False, hash=False, repr=False)

    @property
    def level(self) -> int:
        return len(self.components)

    @property
    def degree(self) -> Degree:
        return self.components[0].degree

    def range(self) -> "ProjLimPath":
        return ProjLimPath(tuple(p.graph.vertex(p.range) for p in self.components), self.coverings)

    def source(self) -> "ProjLimPath":
        return ProjLimPath(tuple(p.graph.vertex(p.source) for p in self.components), self.coverings)

    def compose(self, other: "ProjLimPath") -> "ProjLimPath":
        if self.level != other.level:
            raise IncompatibleTuple("tuples of different length", left=self.level, right=other.level)
        if self.source() != other.range():
            raise EndpointMismatch("source and range tuples differ")
        return ProjLimPath(tuple(compose(a, b) for a, b in zip(self.components, other.components)), self.coverings)

    def factor(self, p: Degree, q: Degree) -> "ProjLimPath":
        return ProjLimPath(tuple(factor(a, p, q) for a in self.components), self.coverings)

    def label(self) -> str:
        return "(" + ", ".join(p.label() for p in self.components) + ")"


def projlim_path(coverings: Sequence[CoveringMap], components: Sequence[Path]) -> ProjLimPath:
    coverings = tuple(coverings)
    comps = tuple(components)
    if not comps or len(comps) > len(coverings) + 1:
        raise IncompatibleTuple("tuple length does not fit the covering sequence", level=len(comps))
    for n in range(1, len(comps)):
        p = coverings[n - 1]
        if comps[n].graph is not p.source or comps[n - 1].graph is not p.target:
            raise IncompatibleTuple(f"component {n + 1} is in the wrong graph", level=n)
        if p.apply(comps[n]) != comps[n - 1]:
            raise IncompatibleTuple(f"p_{n}(lambda_{n + 1}) != lambda_{n}", level=n)
    return ProjLimPath(comps, coverings)


def projlim_paths(
    coverings: Sequence[CoveringMap],
    degree: Degree,
    level: Optional[int] = None,
    prefix: Sequence[Path] = (),
    first_level: Optional[KGraph] = None,
) -> list[ProjLimPath]:
    """All level-``level`` compatible tuples of the given degree extending ``prefix``."""
    coverings = tuple(coverings)
    N = len(coverings) + 1 if level is None else level
    base = coverings[0].target if coverings else first_level
    if prefix:
        partial = [tuple(prefix)]
    else:
        partial = [(p,) for p in base.paths_of_degree(degree)]
    out = []
    while partial:
        t = partial.pop()
        if len(t) >= N:
            out.append(ProjLimPath(t[:N], coverings))
            continue
        p = coverings[len(t) - 1]
        for lift in p.fiber(t[-1]):
            partial.append(t + (lift,))
    out.sort(key=lambda x: tuple(sort_key(c.edges or (c.range,)) for c in x.components))
    return out


def cylinder_is_empty(zspec: Sequence[Path], coverings: Sequence[CoveringMap] = ()) -> bool:
    """Z(lambda_1..lambda_j) is empty unless the degrees agree (and the tuple is compatible)."""
    if len({p.degree for p in zspec}) > 1:
        return True
    if coverings:
        try:
            projlim_path(coverings, zspec)
        except IncompatibleTuple:
            return True
    return False


def cylinder_membership(zspec: Sequence[Path], candidate: ProjLimPath) -> bool:
    zspec = tuple(zspec)
    if len(zspec) > candidate.level:
        return False
    return candidate.components[: len(zspec)] == zspec


# -- the profinite skew product ---------------------------------------------

@dataclass
class SkewBijectionReport:
    level: int
    degree: Degree
    mapping: dict
    bijective: bool
    range_law: bool
    source_law: bool
    domain_size: int
    codomain_size: int

    def __bool__(self) -> bool:
        return self.bijective and self.range_law and self.source_law

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "degree": list(self.degree),
            "bijective": self.bijective,
            "range_law": self.range_law,
            "source_law": self.source_law,
            "domain_size": self.domain_size,
            "codomain_size": self.codomain_size,
            "pairs": [
                {"path": lam.label(), "g": g.to_list(), "tuple": t.label()}
                for (lam, g), t in sorted(self.mapping.items(), key=lambda kv: kv[1].label())
            ],
        }


def profinite_skew_bijection(cc: CocycleChain, level: int, degree: Degree) -> SkewBijectionReport:
    """(lambda, g) -> ((lambda, Q_n(g)))_{n <= level}, checked against an independent enumeration."""
    graph = cc.graph
    coverings = tuple(cc.covering(n) for n in range(1, level))
    mapping: dict = {}
    range_ok = source_ok = True
    for lam in graph.paths_of_degree(degree):
        c_lam = cc.profinite_value(lam, level)
        for g in all_elements(cc.chain, level):
            comps = tuple(
                skew_lift(cc.level_graph(n), cc.c(n), lam, g.project(n)) for n in range(1, level + 1)
            )
            t = projlim_path(coverings, comps)
            mapping[(lam, g)] = t
            # pulled-back range: (r(lambda), c(lambda) g) and source (s(lambda), g)
            cg = c_lam * g
            want_r = tuple((lam.range, cg.project(n)) for n in range(1, level + 1))
            want_s = tuple((lam.source, g.project(n)) for n in range(1, level + 1))
            range_ok &= tuple(p.range for p in t.range().components) == want_r
            source_ok &= tuple(p.range for p in t.source().components) == want_s
    images = list(mapping.values())
    everything = projlim_paths(coverings, degree, level, first_level=cc.level_graph(1))
    bijective = len(set(images)) == len(images) and set(images) == set(everything)
    return SkewBijectionReport(
        level, tuple(degree), mapping, bijective, range_ok, source_ok, len(mapping), len(everything)
    )


# -- DOT export -------------------------------------------------------------

_PALETTE = ("blue", "red", "darkgreen", "black", "orange")


def _q(x: Hashable) -> str:
    return '"' + label(x).replace('"', '\\"') + '"'


def to_dot(graph: KGraph, tower: Optional[TowerGraph] = None, name: Optional[str] = None) -> str:
    """Deterministic Graphviz source; arrows point from source to range."""
    lines = [f"digraph {_q(name or graph.name or 'kgraph')} {{"]
    if tower is not None:
        for n in range(1, tower.depth + 1):
            lines.append(f"  subgraph cluster_level_{n} {{")
            lines.append(f'    label="level {n}";')
            for v in sorted(tower.level_vertices(n), key=sort_key):
                lines.append(f"    {_q(v)};")
            lines.append("  }")
    else:
        for v in graph.vertices:
            lines.append(f"  {_q(v)};")
    for e, ed in graph.edges.items():
        color = _PALETTE[(ed.color - 1) % len(_PALETTE)]
        style = ', style="dashed"' if tower is not None and ed.color == graph.k else ""
        lines.append(
            f"  {_q(ed.src)} -> {_q(ed.dst)} [label={_q(e)}, color=\"{color}\", kcolor={ed.color}{style}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
