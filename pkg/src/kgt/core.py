"""Finite k-graphs presented by a colored 1-skeleton plus factorisation squares.

A path is stored in color-normal form: all color-1 edges first, then color-2,
and so on.  The squares are the rewrite rules that move between the different
color orders of the same morphism.

Conventions: ``Edge.dst`` is the range r(e) and ``Edge.src`` is the source
s(e), so a path ``e1 e2`` is composable when ``s(e1) == r(e2)``.  Colors are
numbered ``1..k``; degrees are plain tuples of ``k`` non-negative integers.
"""

from __future__ import annotations

import itertools
import os
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Iterator, Mapping, Optional, Sequence

from .errors import (
    CubeViolation,
    DegreeOutOfRange,
    DuplicateEdgeId,
    EndpointMismatch,
    EnumerationLimit,
    FactorisationFailure,
    GraphMismatch,
    InvalidPresentation,
    MissingSquare,
    NonBijectiveSquares,
    RankMismatch,
)

Degree = tuple  # tuple[int, ...] of length k

DEFAULT_MAX_RANK = 3


def max_paths() -> int:
    return int(os.environ.get("KGT_MAX_PATHS", "1000000"))


# -- degrees ----------------------------------------------------------------

def zero(k: int) -> Degree:
    return (0,) * k


def ones(k: int) -> Degree:
    return (1,) * k


def unit(k: int, i: int) -> Degree:
    """The generator e_i of N^k (``i`` is 1-based)."""
    return tuple(1 if j == i - 1 else 0 for j in range(k))


def deg_add(m: Degree, n: Degree) -> Degree:
    return tuple(a + b for a, b in zip(m, n))


def deg_sub(m: Degree, n: Degree) -> Degree:
    return tuple(a - b for a, b in zip(m, n))


def deg_scale(t: int, n: Degree) -> Degree:
    return tuple(t * a for a in n)


def deg_le(m: Degree, n: Degree) -> bool:
    return all(a <= b for a, b in zip(m, n))


def deg_join(m: Degree, n: Degree) -> Degree:
    return tuple(max(a, b) for a, b in zip(m, n))


def deg_meet(m: Degree, n: Degree) -> Degree:
    return tuple(min(a, b) for a, b in zip(m, n))


def embed(n: Degree) -> Degree:
    """N^k -> N^(k+1), appending a zero last coordinate."""
    return tuple(n) + (0,)


def box(bound: Degree) -> Iterator[Degree]:
    """All degrees ``n <= bound`` in lexicographic order."""
    return itertools.product(*(range(b + 1) for b in bound))


def color_word(n: Degree) -> tuple[int, ...]:
    return tuple(i + 1 for i, a in enumerate(n) for _ in range(a))


def as_degree(n: Any, k: int) -> Degree:
    if isinstance(n, int):
        if k != 1:
            raise DegreeOutOfRange(f"integer degree {n} given for rank {k}", degree=n)
        n = (n,)
    n = tuple(int(a) for a in n)
    if len(n) != k or any(a < 0 for a in n):
        raise DegreeOutOfRange(f"{n} is not a degree of rank {k}", degree=n)
    return n


# -- deterministic ordering and labels --------------------------------------

def sort_key(x: Any) -> tuple:
    if isinstance(x, bool):
        return (0, int(x), "")
    if isinstance(x, int):
        return (0, x, "")
    if isinstance(x, str):
        return (1, 0, x)
    if isinstance(x, tuple):
        return (2, tuple(sort_key(y) for y in x), "")
    return (3, 0, repr(x))


def label(x: Any) -> str:
    """Stable string form of a (possibly nested) identifier."""
    if isinstance(x, str):
        return x
    if isinstance(x, tuple):
        return "(" + ",".join(label(y) for y in x) + ")"
    if isinstance(x, Path):
        return x.label()
    return str(x)


# -- data types -------------------------------------------------------------

@dataclass(frozen=True)
class Edge:
    id: Hashable
    color: int
    src: Hashable
    dst: Hashable


@dataclass(frozen=True)
class Path:
    """A morphism of a k-graph, in color-normal form."""

    graph: "KGraph" = field(compare=False, hash=False, repr=False)
    range: Hashable
    source: Hashable
    degree: Degree
    edges: tuple

    @property
    def is_vertex(self) -> bool:
        return not self.edges

    def label(self) -> str:
        if not self.edges:
            return label(self.range)
        return ".".join(label(e) for e in self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def __repr__(self) -> str:
        return f"Path({self.label()}, d={self.degree})"


class KGraph:
    """A validated finite k-graph.  Treat instances as immutable.

    Build one with :func:`build` or :func:`validate_kgraph`; the constructor
    itself trusts its input.
    """

    def __init__(
        self,
        k: int,
        vertices: Iterable[Hashable],
        edges: Iterable[Edge],
        squares: Mapping[tuple, tuple],
        name: str = "",
    ) -> None:
        self.k = k
        self.name = name
        self.vertices = tuple(sorted(vertices, key=sort_key))
        self.edges: dict[Hashable, Edge] = {
            e.id: e for e in sorted(edges, key=lambda e: sort_key(e.id))
        }
        self.squares: dict[tuple, tuple] = dict(squares)
        self._unsquares = {v: key for key, v in self.squares.items()}
        into: dict[tuple, list] = {}
        out: dict[tuple, list] = {}
        for e in self.edges.values():
            into.setdefault((e.dst, e.color), []).append(e.id)
            out.setdefault((e.src, e.color), []).append(e.id)
        self._into = {key: tuple(v) for key, v in into.items()}
        self._out = {key: tuple(v) for key, v in out.items()}
        self._vertex_set = frozenset(self.vertices)

    def __repr__(self) -> str:
        tag = f" {self.name!r}" if self.name else ""
        return (
            f"<KGraph{tag} k={self.k} |V|={len(self.vertices)} "
            f"|E|={len(self.edges)} squares={len(self.squares)}>"
        )

    # -- skeleton
    def color(self, e: Hashable) -> int:
        return self.edges[e].color

    def r(self, e: Hashable) -> Hashable:
        return self.edges[e].dst

    def s(self, e: Hashable) -> Hashable:
        return self.edges[e].src

    def has_vertex(self, v: Hashable) -> bool:
        return v in self._vertex_set

    def edges_into(self, v: Hashable, color: int) -> tuple:
        """Edges of the given color with range ``v`` (the set v Lambda^{e_i})."""
        return self._into.get((v, color), ())

    def edges_from(self, v: Hashable, color: int) -> tuple:
        """Edges of the given color with source ``v`` (the set Lambda^{e_i} v)."""
        return self._out.get((v, color), ())

    def edges_of_color(self, color: int) -> list:
        return [e for e, edge in self.edges.items() if edge.color == color]

    def degree_of(self, edges: Sequence[Hashable]) -> Degree:
        d = [0] * self.k
        for e in edges:
            d[self.edges[e].color - 1] += 1
        return tuple(d)

    # -- square rewriting
    def swap(self, a: Hashable, b: Hashable) -> tuple:
        """Rewrite the composable pair ``ab`` of distinct colors as ``b'a'``."""
        ca, cb = self.edges[a].color, self.edges[b].color
        if ca < cb:
            return self.squares[(a, b)]
        if ca > cb:
            return self._unsquares[(a, b)]
        raise ValueError("cannot swap edges of the same color")

    def normalize(self, edges: Sequence[Hashable]) -> tuple:
        seq = list(edges)
        col = self.edges
        changed = True
        while changed:
            changed = False
            for i in range(len(seq) - 1):
                a, b = seq[i], seq[i + 1]
                if col[a].color > col[b].color:
                    seq[i], seq[i + 1] = self._unsquares[(a, b)]
                    changed = True
        return tuple(seq)

    def reorder(self, edges: Sequence[Hashable], word: Sequence[int]) -> tuple:
        """Return the representative of ``edges`` whose colors read ``word``."""
        seq = list(edges)
        if sorted(word) != sorted(self.edges[e].color for e in seq):
            raise DegreeOutOfRange("color word does not match the path degree")
        for j, want in enumerate(word):
            i = j
            while self.edges[seq[i]].color != want:
                i += 1
            while i > j:
                seq[i - 1], seq[i] = self.swap(seq[i - 1], seq[i])
                i -= 1
        return tuple(seq)

    # -- paths
    def vertex(self, v: Hashable) -> Path:
        if v not in self._vertex_set:
            raise KeyError(v)
        return Path(self, v, v, zero(self.k), ())

    def path(self, edges: Sequence[Hashable]) -> Path:
        """The morphism given by a composable edge sequence in any color order."""
        edges = tuple(edges)
        if not edges:
            raise ValueError("use vertex() for degree-zero paths")
        for e in edges:
            if e not in self.edges:
                raise KeyError(e)
        for a, b in zip(edges, edges[1:]):
            if self.edges[a].src != self.edges[b].dst:
                raise EndpointMismatch(f"{label(a)} and {label(b)} are not composable", first=a, second=b)
        nf = self.normalize(edges)
        return Path(self, self.edges[nf[0]].dst, self.edges[nf[-1]].src, self.degree_of(nf), nf)

    def paths_of_degree(
        self,
        n: Degree,
        range: Optional[Hashable] = None,
        source: Optional[Hashable] = None,
    ) -> list[Path]:
        n = as_degree(n, self.k)
        starts = self.vertices if range is None else (range,)
        word = color_word(n)
        out: list[Path] = []
        limit = max_paths()
        d = tuple(n)
        for v in starts:
            if not word:
                if source is None or source == v:
                    out.append(Path(self, v, v, d, ()))
                continue
            stack: list[tuple[Hashable, tuple]] = [(v, ())]
            while stack:
                cur, acc = stack.pop()
                if len(acc) == len(word):
                    if source is None or cur == source:
                        out.append(Path(self, v, cur, d, acc))
                        if len(out) > limit:
                            raise EnumerationLimit("path enumeration exceeded KGT_MAX_PATHS", limit=limit)
                    continue
                for e in reversed(self.edges_into(cur, word[len(acc)])):
                    stack.append((self.edges[e].src, acc + (e,)))
        return out

    def walks(self, word: Sequence[int]) -> Iterator[tuple]:
        """Composable edge sequences whose colors read ``word`` (any order)."""
        for v in self.vertices:
            stack: list[tuple[Hashable, tuple]] = [(v, ())]
            while stack:
                cur, acc = stack.pop()
                if len(acc) == len(word):
                    yield acc
                    continue
                for e in self.edges_into(cur, word[len(acc)]):
                    stack.append((self.edges[e].src, acc + (e,)))

    def to_raw(self) -> dict:
        """Presentation in the JSON graph schema (identifiers stringified)."""
        return {
            "k": self.k,
            "vertices": [label(v) for v in self.vertices],
            "edges": [
                {"id": label(e.id), "color": e.color, "src": label(e.src), "dst": label(e.dst)}
                for e in self.edges.values()
            ],
            "squares": sorted(
                ([label(f), label(g), label(gp), label(fp)] for (f, g), (gp, fp) in self.squares.items()),
            ),
        }


# -- path calculus ----------------------------------------------------------

def compose(p1: Path, p2: Path) -> Path:
    """The composite ``p1 p2`` (``p2`` first in the arrow direction)."""
    if p1.graph is not p2.graph:
        raise GraphMismatch("paths belong to different graphs")
    if p1.source != p2.range:
        raise EndpointMismatch(
            f"s({p1.label()}) != r({p2.label()})", left=p1.source, right=p2.range
        )
    if p1.is_vertex:
        return p2
    if p2.is_vertex:
        return p1
    return p1.graph.path(p1.edges + p2.edges)


def factor(path: Path, p: Degree, q: Degree) -> Path:
    """The segment lambda(p, q) of degree ``q - p``."""
    g = path.graph
    p, q = as_degree(p, g.k), as_degree(q, g.k)
    d = path.degree
    if not (deg_le(p, q) and deg_le(q, d)):
        raise DegreeOutOfRange(f"need {p} <= {q} <= {d}", p=p, q=q, degree=d)
    if p == q:
        if p == d:
            return g.vertex(path.source)
        if sum(p) == 0:
            return g.vertex(path.range)
    word = color_word(p) + color_word(deg_sub(q, p)) + color_word(deg_sub(d, q))
    seq = g.reorder(path.edges, word)
    i, j = sum(p), sum(q)
    if i == j:
        return g.vertex(g.s(seq[i - 1]) if i else path.range)
    seg = seq[i:j]
    nf = g.normalize(seg)
    return Path(g, g.r(nf[0]), g.s(nf[-1]), deg_sub(q, p), nf)


def vertex_at(path: Path, n: Degree) -> Hashable:
    """The vertex lambda(n) = s(lambda(0, n))."""
    return factor(path, zero(path.graph.k), n).source


def paths_of_degree(graph: KGraph, n: Degree, v: Optional[Hashable] = None) -> list[Path]:
    return graph.paths_of_degree(n, range=v)


# -- construction and validation --------------------------------------------

def build(
    k: int,
    vertices: Iterable[Hashable],
    edges: Iterable,
    squares: Iterable[Sequence[Hashable]] = (),
    *,
    name: str = "",
    max_rank: Optional[int] = None,
    check_factorisation: bool = True,
    factorisation_bound: Optional[Degree] = None,
) -> KGraph:
    """Validate a presentation and return the k-graph it defines.

    ``edges`` holds :class:`Edge` objects or ``(id, color, src, dst)`` tuples;
    ``squares`` holds quadruples ``(f, g, g', f')`` meaning ``fg = g'f'`` with
    ``color(f) < color(g)``.
    """
    max_rank = DEFAULT_MAX_RANK if max_rank is None else max_rank
    if not isinstance(k, int) or k < 1:
        raise InvalidPresentation(f"rank must be a positive integer, got {k!r}", k=k)
    if k > max_rank:
        raise InvalidPresentation(f"rank {k} exceeds the supported maximum {max_rank}", k=k)
    vertices = list(vertices)
    if not vertices:
        raise InvalidPresentation("a k-graph needs at least one vertex")
    vset = set(vertices)
    if len(vset) != len(vertices):
        raise InvalidPresentation("duplicate vertex id")

    edge_map: dict[Hashable, Edge] = {}
    for e in edges:
        if not isinstance(e, Edge):
            e = Edge(*e)
        if e.id in edge_map:
            raise DuplicateEdgeId(f"duplicate edge id {label(e.id)}", edge=e.id)
        if not isinstance(e.color, int) or not 1 <= e.color <= k:
            raise InvalidPresentation(f"edge {label(e.id)} has color {e.color!r} outside 1..{k}", edge=e.id)
        if e.src not in vset or e.dst not in vset:
            raise InvalidPresentation(f"edge {label(e.id)} has an unknown endpoint", edge=e.id)
        edge_map[e.id] = e

    sq: dict[tuple, tuple] = {}
    targets: dict[tuple, tuple] = {}
    for quad in squares:
        if len(quad) != 4:
            raise InvalidPresentation("squares must be quadruples (f, g, g', f')", square=tuple(quad))
        f, g, gp, fp = quad
        for x in quad:
            if x not in edge_map:
                raise InvalidPresentation(f"square mentions unknown edge {label(x)}", square=tuple(quad))
        ci, cj = edge_map[f].color, edge_map[g].color
        if not (ci == edge_map[fp].color and cj == edge_map[gp].color and ci < cj):
            raise InvalidPresentation(
                "square colors must satisfy color(f) = color(f') < color(g) = color(g')",
                square=tuple(quad),
            )
        E = edge_map
        if not (
            E[f].src == E[g].dst
            and E[gp].src == E[fp].dst
            and E[f].dst == E[gp].dst
            and E[g].src == E[fp].src
        ):
            raise EndpointMismatch("square endpoints do not match", square=tuple(quad))
        if (f, g) in sq:
            raise NonBijectiveSquares(f"two squares for the pair ({label(f)},{label(g)})", pair=(f, g))
        if (gp, fp) in targets:
            raise NonBijectiveSquares(
                f"pair ({label(gp)},{label(fp)}) is the image of two squares", pair=(gp, fp)
            )
        sq[(f, g)] = (gp, fp)
        targets[(gp, fp)] = (f, g)

    graph = KGraph(k, vertices, edge_map.values(), sq, name=name)

    for i, j in itertools.combinations(range(1, k + 1), 2):
        for f in graph.edges_of_color(i):
            for g in graph.edges_into(graph.s(f), j):
                if (f, g) not in sq:
                    raise MissingSquare(f"no square for ({label(f)},{label(g)})", f=f, g=g)
        for gp in graph.edges_of_color(j):
            for fp in graph.edges_into(graph.s(gp), i):
                if (gp, fp) not in targets:
                    raise NonBijectiveSquares(
                        f"pair ({label(gp)},{label(fp)}) is not the image of any square", pair=(gp, fp)
                    )

    if k >= 3:
        _check_cubes(graph)
    if check_factorisation:
        check_unique_factorisation(graph, factorisation_bound)
    return graph


def _check_cubes(graph: KGraph) -> None:
    k = graph.k
    for i, j, l in itertools.combinations(range(1, k + 1), 3):
        for f in graph.edges_of_color(i):
            for g in graph.edges_into(graph.s(f), j):
                for h in graph.edges_into(graph.s(g), l):
                    # left-first: (fg)h -> g1 f1 h -> g1 h1 f2 -> h2 g2 f2
                    g1, f1 = graph.swap(f, g)
                    h1, f2 = graph.swap(f1, h)
                    h2, g2 = graph.swap(g1, h1)
                    # right-first: f(gh) -> f h1' g1' -> h2' f1' g1' -> h2' g2' f2'
                    h1b, g1b = graph.swap(g, h)
                    h2b, f1b = graph.swap(f, h1b)
                    g2b, f2b = graph.swap(f1b, g1b)
                    if (h2, g2, f2) != (h2b, g2b, f2b):
                        raise CubeViolation(
                            f"cube condition fails on ({label(f)},{label(g)},{label(h)})", f=f, g=g, h=h
                        )


def check_unique_factorisation(graph: KGraph, bound: Optional[Degree] = None) -> int:
    """Exhaustively confirm unique factorisation for all degrees ``<= bound``.

    For every degree ``n`` and every color order of ``n``, the walks following
    that order must be in bijection with the normal-form paths of degree
    ``n``.  Returns the number of (degree, order) pairs checked.
    """
    bound = (2,) * graph.k if bound is None else bound
    checked = 0
    for n in box(bound):
        if sum(n) < 2:
            continue
        normal = {p.edges for p in graph.paths_of_degree(n)}
        for word in sorted(set(itertools.permutations(color_word(n)))):
            seen: dict[tuple, tuple] = {}
            for walk in graph.walks(word):
                nf = graph.normalize(walk)
                if nf in seen:
                    raise FactorisationFailure(
                        f"two factorisations of degree {n} in order {word}",
                        degree=n, first=seen[nf], second=walk,
                    )
                seen[nf] = walk
            if set(seen) != normal:
                raise FactorisationFailure(
                    f"color order {word} does not reach every path of degree {n}", degree=n
                )
            checked += 1
    return checked


def validate_kgraph(raw: Mapping[str, Any], **kwargs: Any) -> KGraph:
    """Validate a presentation in the JSON graph schema.

    ``raw`` has keys ``k``, ``vertices``, ``edges`` (each ``{id, color, src,
    dst}``) and optional ``squares`` (quadruples ``[f, g, g', f']``).
    """
    try:
        k = raw["k"]
        vertices = list(raw["vertices"])
        edges = [Edge(e["id"], e["color"], e["src"], e["dst"]) for e in raw["edges"]]
    except (KeyError, TypeError) as exc:
        raise InvalidPresentation(f"malformed graph presentation: {exc}") from exc
    squares = [tuple(q) for q in raw.get("squares", ())]
    return build(k, vertices, edges, squares, **kwargs)


# -- structure --------------------------------------------------------------

@dataclass(frozen=True)
class StructureReport:
    no_sources: bool
    connected: bool
    sources: tuple = ()  # (vertex, color) pairs with v Lambda^{e_i} empty

    def to_dict(self) -> dict:
        return {
            "no_sources": self.no_sources,
            "connected": self.connected,
            "sources": [[label(v), c] for v, c in self.sources],
        }


def structural_checks(graph: KGraph) -> StructureReport:
    sources = tuple(
        (v, i)
        for v in graph.vertices
        for i in range(1, graph.k + 1)
        if not graph.edges_into(v, i)
    )
    parent = {v: v for v in graph.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in graph.edges.values():
        a, b = find(e.src), find(e.dst)
        if a != b:
            parent[a] = b
    roots = {find(v) for v in graph.vertices}
    return StructureReport(no_sources=not sources, connected=len(roots) == 1, sources=sources)


# -- isomorphism ------------------------------------------------------------

@dataclass(frozen=True)
class Isomorphism:
    vertex_map: dict
    edge_map: dict

    def to_dict(self) -> dict:
        return {
            "vertices": {label(a): label(b) for a, b in self.vertex_map.items()},
            "edges": {label(a): label(b) for a, b in self.edge_map.items()},
        }


def _signature(graph: KGraph, v: Hashable) -> tuple:
    return tuple(
        (len(graph.edges_into(v, i)), len(graph.edges_from(v, i))) for i in range(1, graph.k + 1)
    )


def is_isomorphism(lam: KGraph, gam: KGraph, vmap: Mapping, emap: Mapping) -> bool:
    """Check that (vmap, emap) is a degree-preserving bijective functor."""
    if lam.k != gam.k:
        return False
    if sorted(map(sort_key, vmap.values())) != sorted(map(sort_key, gam.vertices)):
        return False
    if set(vmap) != set(lam.vertices) or set(emap) != set(lam.edges):
        return False
    if sorted(map(sort_key, emap.values())) != sorted(map(sort_key, gam.edges)):
        return False
    for e, edge in lam.edges.items():
        img = gam.edges[emap[e]]
        if img.color != edge.color or img.src != vmap[edge.src] or img.dst != vmap[edge.dst]:
            return False
    for (f, g), (gp, fp) in lam.squares.items():
        if gam.squares.get((emap[f], emap[g])) != (emap[gp], emap[fp]):
            return False
    return True


def are_isomorphic(lam: KGraph, gam: KGraph) -> Optional[Isomorphism]:
    """Find a degree-preserving isomorphism ``lam -> gam`` by backtracking."""
    if lam.k != gam.k:
        raise RankMismatch(f"ranks differ: {lam.k} vs {gam.k}", left=lam.k, right=gam.k)
    if len(lam.vertices) != len(gam.vertices) or len(lam.edges) != len(gam.edges):
        return None
    for i in range(1, lam.k + 1):
        if len(lam.edges_of_color(i)) != len(gam.edges_of_color(i)):
            return None
    sig_l = {v: _signature(lam, v) for v in lam.vertices}
    sig_g = {v: _signature(gam, v) for v in gam.vertices}
    if sorted(sig_l.values()) != sorted(sig_g.values()):
        return None

    # edges in BFS order so that each new edge usually touches a mapped vertex
    order: list = []
    seen_e: set = set()
    seen_v: set = set()
    adj: dict = {v: [] for v in lam.vertices}
    for e, edge in lam.edges.items():
        adj[edge.src].append(e)
        adj[edge.dst].append(e)
    for root in lam.vertices:
        if root in seen_v:
            continue
        seen_v.add(root)
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for e in adj[u]:
                if e in seen_e:
                    continue
                seen_e.add(e)
                order.append(e)
                for w in (lam.s(e), lam.r(e)):
                    if w not in seen_v:
                        seen_v.add(w)
                        queue.append(w)

    squares_of: dict = {e: [] for e in lam.edges}
    for (f, g), (gp, fp) in lam.squares.items():
        for x in {f, g, gp, fp}:
            squares_of[x].append((f, g, gp, fp))
    by_color = {i: gam.edges_of_color(i) for i in range(1, gam.k + 1)}

    vmap: dict = {}
    vused: set = set()
    emap: dict = {}
    eused: set = set()

    def bind(a, b) -> Optional[bool]:
        """Bind vertex a -> b; True if newly bound, None on conflict."""
        if a in vmap:
            return False if vmap[a] == b else None
        if b in vused or sig_l[a] != sig_g[b]:
            return None
        vmap[a] = b
        vused.add(b)
        return True

    def squares_ok(e) -> bool:
        for f, g, gp, fp in squares_of[e]:
            if f in emap and g in emap and gp in emap and fp in emap:
                if gam.squares.get((emap[f], emap[g])) != (emap[gp], emap[fp]):
                    return False
        return True

    def search(idx: int) -> bool:
        if idx == len(order):
            return True
        e = order[idx]
        edge = lam.edges[e]
        for cand in by_color[edge.color]:
            if cand in eused:
                continue
            ce = gam.edges[cand]
            new = []
            ok = True
            for a, b in ((edge.src, ce.src), (edge.dst, ce.dst)):
                res = bind(a, b)
                if res is None:
                    ok = False
                    break
                if res:
                    new.append(a)
            if ok:
                emap[e] = cand
                eused.add(cand)
                if squares_ok(e) and search(idx + 1):
                    return True
                del emap[e]
                eused.discard(cand)
            for a in new:
                vused.discard(vmap.pop(a))
        return False

    if not search(0):
        return None
    rest_l = [v for v in lam.vertices if v not in vmap]
    rest_g = [v for v in gam.vertices if v not in vused]
    for a, b in zip(rest_l, rest_g):  # isolated vertices
        vmap[a] = b
    iso = Isomorphism(dict(vmap), dict(emap))
    return iso
