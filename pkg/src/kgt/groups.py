"""Finite groups, chains of surjections, truncated profinite elements, cocycles."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Mapping, Optional, Sequence

import numpy as np

from .core import KGraph, Path, label, sort_key
from .errors import (
    ChainIncompatible,
    GraphMismatch,
    GroupAxiomError,
    GroupTooLarge,
    IndexOutOfRange,
    LevelMismatch,
    MissingLabel,
    NotAHomomorphism,
    SquareIncompatible,
    SurjectivityFailure,
)


def max_group_order() -> int:
    return int(os.environ.get("KGT_MAX_GROUP", "512"))


class FiniteGroup:
    """A finite group given by its multiplication table.

    Elements are arbitrary hashable labels; ``table[i, j]`` is the index of
    ``elements[i] * elements[j]``.  The group axioms are checked on
    construction.
    """

    def __init__(self, elements: Sequence[Hashable], table, name: str = "") -> None:
        elements = tuple(elements)
        n = len(elements)
        if n == 0:
            raise GroupAxiomError("a group needs at least one element")
        if n > max_group_order():
            raise GroupTooLarge(f"group of order {n} exceeds KGT_MAX_GROUP", order=n)
        index = {x: i for i, x in enumerate(elements)}
        if len(index) != n:
            raise GroupAxiomError("duplicate group element")
        t = np.asarray(table, dtype=np.int64)
        if t.shape != (n, n) or t.min() < 0 or t.max() >= n:
            raise GroupAxiomError("multiplication table has the wrong shape or entries")
        ar = np.arange(n)
        ids = [i for i in range(n) if np.array_equal(t[i], ar) and np.array_equal(t[:, i], ar)]
        if not ids:
            raise GroupAxiomError("no identity element")
        e = ids[0]
        for a in range(n):
            # (a b) c == a (b c) for all b, c
            if not np.array_equal(t[t[a]], t[a][t]):
                raise GroupAxiomError("multiplication is not associative", element=elements[a])
        inv = np.full(n, -1, dtype=np.int64)
        rows, cols = np.nonzero(t == e)
        for i, j in zip(rows, cols):
            if t[j, i] == e:
                inv[i] = j
        if (inv < 0).any():
            raise GroupAxiomError("some element has no inverse")
        self.name = name
        self.elements = elements
        self.table = t
        self._index = index
        self._inv = inv
        self._e = e

    def __repr__(self) -> str:
        return f"<FiniteGroup {self.name or '?'} order={len(self)}>"

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        try:
            return x in self._index
        except TypeError:
            return False

    @property
    def identity(self) -> Hashable:
        return self.elements[self._e]

    def index(self, x: Hashable) -> int:
        return self._index[x]

    def mul(self, a: Hashable, b: Hashable) -> Hashable:
        return self.elements[self.table[self._index[a], self._index[b]]]

    def inv(self, a: Hashable) -> Hashable:
        return self.elements[self._inv[self._index[a]]]

    def prod(self, xs: Iterable[Hashable]) -> Hashable:
        i = self._e
        for x in xs:
            i = self.table[i, self._index[x]]
        return self.elements[i]

    def element(self, literal: Any) -> Hashable:
        """Resolve a JSON literal (lists become tuples) to an element."""
        x = _freeze(literal)
        if x not in self._index:
            raise KeyError(f"{literal!r} is not an element of {self.name or 'the group'}")
        return x

    # -- constructors
    @classmethod
    def cyclic(cls, m: int) -> "FiniteGroup":
        ar = np.arange(m)
        return cls(tuple(range(m)), (ar[:, None] + ar[None, :]) % m, name=f"Z/{m}")

    @classmethod
    def symmetric(cls, n: int) -> "FiniteGroup":
        """S_n on ``{0..n-1}``; ``(a*b)(i) = a(b(i))``."""
        perms = sorted(itertools.permutations(range(n)))
        idx = {p: i for i, p in enumerate(perms)}
        table = [[idx[tuple(a[b[i]] for i in range(n))] for b in perms] for a in perms]
        return cls(perms, table, name=f"S_{n}")

    @classmethod
    def from_products(cls, elements: Sequence[Any], products: Sequence[Sequence[Any]], name: str = "") -> "FiniteGroup":
        """``products[i][j]`` is the element ``elements[i] * elements[j]``."""
        elems = [_freeze(x) for x in elements]
        idx = {x: i for i, x in enumerate(elems)}
        try:
            table = [[idx[_freeze(x)] for x in row] for row in products]
        except KeyError as exc:
            raise GroupAxiomError(f"table entry {exc} is not a listed element") from exc
        return cls(elems, table, name=name)


def _freeze(x: Any) -> Any:
    if isinstance(x, list):
        return tuple(_freeze(y) for y in x)
    return x


def check_homomorphism(src: FiniteGroup, dst: FiniteGroup, mapping: Mapping, n: Optional[int] = None) -> None:
    """Raise unless ``mapping`` is a surjective homomorphism ``src -> dst``."""
    for x in src:
        if x not in mapping or mapping[x] not in dst:
            raise NotAHomomorphism(f"map is not defined into the target on {label(x)}", level=n, element=x)
    for a in src:
        for b in src:
            if mapping[src.mul(a, b)] != dst.mul(mapping[a], mapping[b]):
                raise NotAHomomorphism(
                    f"q({label(a)}*{label(b)}) != q({label(a)})*q({label(b)})", level=n, a=a, b=b
                )
    if set(mapping[x] for x in src) != set(dst):
        raise SurjectivityFailure(f"surjection at level {n} misses part of its target", level=n)


class QuotientChain:
    """Groups G_1..G_N with surjections q_n: G_{n+1} -> G_n (levels are 1-based)."""

    def __init__(self, groups: Sequence[FiniteGroup], maps: Sequence[Mapping]) -> None:
        if not groups:
            raise IndexOutOfRange("a chain needs at least one group")
        if len(maps) != len(groups) - 1:
            raise IndexOutOfRange("need exactly one surjection between consecutive groups")
        for n, q in enumerate(maps, start=1):
            check_homomorphism(groups[n], groups[n - 1], q, n)
        self.groups = tuple(groups)
        self.maps = tuple(dict(q) for q in maps)

    def __len__(self) -> int:
        return len(self.groups)

    @property
    def length(self) -> int:
        return len(self.groups)

    def group(self, n: int) -> FiniteGroup:
        if not 1 <= n <= len(self.groups):
            raise IndexOutOfRange(f"level {n} outside 1..{len(self.groups)}", level=n)
        return self.groups[n - 1]

    def q(self, n: int, g: Hashable) -> Hashable:
        """q_n: G_{n+1} -> G_n."""
        if not 1 <= n < len(self.groups):
            raise IndexOutOfRange(f"q_{n} undefined for chain of length {len(self.groups)}", level=n)
        return self.maps[n - 1][g]

    def project(self, g: Hashable, frm: int, to: int) -> Hashable:
        """Image of ``g`` in G_``to`` under q_to o ... o q_(frm-1)."""
        if to > frm:
            raise IndexOutOfRange("can only project downwards")
        for n in range(frm - 1, to - 1, -1):
            g = self.q(n, g)
        return g

    def truncate(self, levels: int) -> "QuotientChain":
        if not 1 <= levels <= len(self.groups):
            raise IndexOutOfRange(f"cannot truncate to {levels} levels", level=levels)
        out = object.__new__(QuotientChain)
        out.groups = self.groups[:levels]
        out.maps = self.maps[: levels - 1]
        return out

    def kernel(self, n: int) -> list:
        """ker(q_n) inside G_{n+1}."""
        e = self.group(n).identity
        return [g for g in self.group(n + 1) if self.q(n, g) == e]

    def stabilizes(self) -> bool:
        """True when the last surjection is a bijection (chain constant at the top)."""
        return len(self.groups) >= 2 and len(self.groups[-1]) == len(self.groups[-2])


@dataclass(frozen=True)
class ProfiniteElement:
    """A compatible tuple (g_1, ..., g_N) with q_n(g_{n+1}) = g_n."""

    chain: QuotientChain
    components: tuple

    def __post_init__(self) -> None:
        comps = self.components
        if not 1 <= len(comps) <= self.chain.length:
            raise LevelMismatch("element level outside the chain", level=len(comps))
        for n, g in enumerate(comps, start=1):
            if g not in self.chain.group(n):
                raise LevelMismatch(f"component {n} is not in G_{n}", level=n)
        for n in range(1, len(comps)):
            if self.chain.q(n, comps[n]) != comps[n - 1]:
                raise ChainIncompatible(f"q_{n}(g_{n + 1}) != g_{n}", level=n)

    @property
    def level(self) -> int:
        return len(self.components)

    @classmethod
    def from_top(cls, chain: QuotientChain, g: Hashable, level: Optional[int] = None) -> "ProfiniteElement":
        """The unique compatible tuple ending in ``g`` at ``level``."""
        level = chain.length if level is None else level
        comps = [g]
        for n in range(level - 1, 0, -1):
            comps.append(chain.q(n, comps[-1]))
        return cls(chain, tuple(reversed(comps)))

    @classmethod
    def identity(cls, chain: QuotientChain, level: Optional[int] = None) -> "ProfiniteElement":
        level = chain.length if level is None else level
        return cls(chain, tuple(chain.group(n).identity for n in range(1, level + 1)))

    def __mul__(self, other: "ProfiniteElement") -> "ProfiniteElement":
        return multiply(self, other)

    def project(self, n: int) -> Hashable:
        return project_Qn(self, n)

    def inverse(self) -> "ProfiniteElement":
        return ProfiniteElement(
            self.chain,
            tuple(self.chain.group(n).inv(g) for n, g in enumerate(self.components, start=1)),
        )

    def to_list(self) -> list:
        return [label(g) if isinstance(g, tuple) else g for g in self.components]


def multiply(a: ProfiniteElement, b: ProfiniteElement) -> ProfiniteElement:
    if a.chain is not b.chain or a.level != b.level:
        raise LevelMismatch("profinite elements live at different levels", left=a.level, right=b.level)
    return ProfiniteElement(
        a.chain,
        tuple(a.chain.group(n).mul(x, y) for n, (x, y) in enumerate(zip(a.components, b.components), start=1)),
    )


def project_Qn(g: ProfiniteElement, n: int) -> Hashable:
    """Q_n: the n-th component."""
    if not 1 <= n <= g.level:
        raise LevelMismatch(f"level {n} above truncation level {g.level}", level=n)
    return g.components[n - 1]


def truncate(g: ProfiniteElement, level: int) -> ProfiniteElement:
    if not 1 <= level <= g.level:
        raise LevelMismatch(f"cannot truncate level-{g.level} element to {level}", level=level)
    return ProfiniteElement(g.chain, g.components[:level])


def all_elements(chain: QuotientChain, level: Optional[int] = None) -> list[ProfiniteElement]:
    """Every compatible tuple at ``level`` (one per element of G_level)."""
    level = chain.length if level is None else level
    return [ProfiniteElement.from_top(chain, g, level) for g in chain.group(level)]


# -- cocycles ---------------------------------------------------------------

class Cocycle:
    """Edge labels into a finite group, compatible with every square."""

    def __init__(self, graph: KGraph, group: FiniteGroup, labels: Mapping[Hashable, Hashable]) -> None:
        self.graph = graph
        self.group = group
        self.labels = dict(labels)

    def __repr__(self) -> str:
        return f"<Cocycle {self.graph.name or '?'} -> {self.group.name or '?'}>"

    def __call__(self, x) -> Hashable:
        if isinstance(x, Path):
            return cocycle_of_path(self, x)
        return self.labels[x]


def validate_cocycle(graph: KGraph, labels: Mapping, group: FiniteGroup) -> Cocycle:
    for e in graph.edges:
        if e not in labels:
            raise MissingLabel(f"edge {label(e)} has no cocycle value", edge=e)
        if labels[e] not in group:
            raise MissingLabel(f"value on {label(e)} is not in {group.name}", edge=e)
    for (f, g), (gp, fp) in graph.squares.items():
        if group.mul(labels[f], labels[g]) != group.mul(labels[gp], labels[fp]):
            raise SquareIncompatible(
                f"c({label(f)})c({label(g)}) != c({label(gp)})c({label(fp)})", square=(f, g, gp, fp)
            )
    return Cocycle(graph, group, {e: labels[e] for e in graph.edges})


def cocycle_of_path(c: Cocycle, path: Path) -> Hashable:
    if path.graph is not c.graph and (path.graph.k != c.graph.k or any(e not in c.labels for e in path.edges)):
        raise GraphMismatch("path is not in the cocycle's graph")
    return c.group.prod(c.labels[e] for e in path.edges)


def trivial_cocycle(graph: KGraph, group: FiniteGroup) -> Cocycle:
    return Cocycle(graph, group, {e: group.identity for e in graph.edges})


class CocycleChain:
    """A quotient chain together with compatible cocycles c_1..c_N on one graph."""

    def __init__(self, chain: QuotientChain, cocycles: Sequence[Cocycle]) -> None:
        self.chain = chain
        self.cocycles = tuple(cocycles)
        self.graph = cocycles[0].graph
        self._cache: dict = {}

    def __repr__(self) -> str:
        return f"<CocycleChain on {self.graph.name or '?'} levels={self.length}>"

    @property
    def length(self) -> int:
        return self.chain.length

    def c(self, n: int) -> Cocycle:
        if not 1 <= n <= self.length:
            raise IndexOutOfRange(f"no cocycle at level {n}", level=n)
        return self.cocycles[n - 1]

    def group(self, n: int) -> FiniteGroup:
        return self.chain.group(n)

    def profinite_value(self, path: Path, level: Optional[int] = None) -> ProfiniteElement:
        """(c_n(path))_{n <= level} as a profinite element."""
        level = self.length if level is None else level
        return ProfiniteElement(self.chain, tuple(self.c(n)(path) for n in range(1, level + 1)))

    def truncate(self, levels: int) -> "CocycleChain":
        return CocycleChain(self.chain.truncate(levels), self.cocycles[:levels])

    def level_graph(self, n: int) -> KGraph:
        """Lambda_n = Lambda x_{c_n} G_n (cached)."""
        from .constructions import skew_product

        key = ("level", n)
        if key not in self._cache:
            self._cache[key] = skew_product(self.graph, self.c(n))
        return self._cache[key]

    def covering(self, n: int):
        """p_n: Lambda_{n+1} -> Lambda_n (cached)."""
        from .constructions import covering_from_quotient

        key = ("cover", n)
        if key not in self._cache:
            self._cache[key] = covering_from_quotient(self, n)
        return self._cache[key]


def validate_chain(chain: QuotientChain, cocycles: Sequence[Cocycle]) -> CocycleChain:
    if len(cocycles) != chain.length:
        raise IndexOutOfRange("need one cocycle per level", levels=chain.length, cocycles=len(cocycles))
    graph = cocycles[0].graph
    for n, c in enumerate(cocycles, start=1):
        if c.graph is not graph:
            raise GraphMismatch(f"cocycle {n} lives on a different graph", level=n)
        if c.group is not chain.group(n):
            raise GraphMismatch(f"cocycle {n} does not take values in G_{n}", level=n)
        validate_cocycle(graph, c.labels, c.group)
    for n in range(1, chain.length):
        for e in graph.edges:
            if chain.q(n, cocycles[n].labels[e]) != cocycles[n - 1].labels[e]:
                raise ChainIncompatible(
                    f"q_{n}(c_{n + 1}({label(e)})) != c_{n}({label(e)})", level=n, edge=e
                )
    return CocycleChain(chain, cocycles)


def cyclic_chain(orders: Sequence[int]) -> QuotientChain:
    """Cyclic groups Z/m_1 <- Z/m_2 <- ... with reduction maps (m_n | m_{n+1})."""
    groups = [FiniteGroup.cyclic(m) for m in orders]
    maps = [{x: x % orders[i] for x in groups[i + 1]} for i in range(len(orders) - 1)]
    return QuotientChain(groups, maps)


def bd_chain(levels: int) -> CocycleChain:
    """B_1 with G_n = Z/2^{n-1}, reductions mod 2^{n-1}, and c_n(f) = 1."""
    from .catalog import b1

    if levels < 1:
        raise IndexOutOfRange("need at least one level", levels=levels)
    graph = b1()
    chain = cyclic_chain([2 ** (n - 1) for n in range(1, levels + 1)])
    cocycles = [Cocycle(graph, chain.group(n), {"f": 1 % 2 ** (n - 1)}) for n in range(1, levels + 1)]
    return validate_chain(chain, cocycles)


def trivial_chain(graph: KGraph, levels: int) -> CocycleChain:
    """Trivial groups at every level and identity cocycles."""
    chain = cyclic_chain([1] * levels)
    return validate_chain(chain, [trivial_cocycle(graph, chain.group(n)) for n in range(1, levels + 1)])


def uniform_cyclic_chain(graph: KGraph, orders: Sequence[int], generator_labels: Mapping[Hashable, int]) -> CocycleChain:
    """Chain of cyclic groups where c_n(e) is ``generator_labels[e] mod m_n``."""
    chain = cyclic_chain(orders)
    cocycles = [
        validate_cocycle(graph, {e: generator_labels[e] % m for e in graph.edges}, chain.group(n))
        for n, m in enumerate(orders, start=1)
    ]
    return validate_chain(chain, cocycles)


def sorted_elements(group: FiniteGroup) -> list:
    return sorted(group.elements, key=sort_key)


def _sign(perm: tuple) -> int:
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return inv % 2


def s3_chain() -> CocycleChain:
    """A non-abelian chain Z/1 <- Z/2 <- S_3 (sign map) on a one-vertex 2-graph.

    The graph has blue loops a0, a1, one red loop b0 and squares a0 b0 = b0 a1,
    a1 b0 = b0 a0.  At the top c(b0) is a transposition and c(a0) a 3-cycle, so
    c(a1) = c(b0)^-1 c(a0) c(b0) is the other 3-cycle.
    """
    from .catalog import flip_graph

    graph = flip_graph(2, 1, [1, 0])
    s3 = FiniteGroup.symmetric(3)
    z2, z1 = FiniteGroup.cyclic(2), FiniteGroup.cyclic(1)
    t, r = (1, 0, 2), (1, 2, 0)
    top = {"b0": t, "a0": r, "a1": s3.mul(s3.inv(t), s3.mul(r, t))}
    chain = QuotientChain([z1, z2, s3], [{0: 0, 1: 0}, {g: _sign(g) for g in s3}])
    labels = [
        {e: 0 for e in top},
        {e: _sign(g) for e, g in top.items()},
        top,
    ]
    return validate_chain(chain, [validate_cocycle(graph, lab, grp) for lab, grp in zip(labels, (z1, z2, s3))])
