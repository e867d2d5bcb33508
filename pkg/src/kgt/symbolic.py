"""Formal generator calculus for coactions, the triangle of cocycles and the
fiber-sum square relating skew products with crossed products.

Everything here is symbolic.  A generator is ``S(lambda)`` (the partial
isometry of a path in some graph) or ``SG(lambda, g)`` (the crossed-product
label ``(s_lambda, g)``), optionally followed by tensor legs ``u(g)``.  Maps
are defined on generators and extended linearly; identities are checked on
every generator up to a degree bound, never on the full algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Optional

from .constructions import CoveringMap, skew_split
from .core import KGraph, Path, box, label, sort_key
from .errors import IndexOutOfRange
from .groups import CocycleChain

S, SG = "S", "SG"


def base_space(graph: KGraph) -> str:
    return f"C*({graph.name or 'Lambda'})"


def level_space(n: int) -> str:
    return f"C*(Lambda_{n})"


def crossed_space(n: int) -> str:
    return f"C*(Lambda) x G_{n}"


def group_tag(n: int) -> str:
    return f"G_{n}"


@dataclass(frozen=True)
class GeneratorTerm:
    kind: str
    space: str
    path: Path
    g: Hashable = None
    legs: tuple = ()  # ((group tag, element), ...)

    def with_legs(self, legs: Iterable) -> "GeneratorTerm":
        return GeneratorTerm(self.kind, self.space, self.path, self.g, tuple(legs))

    def key(self) -> tuple:
        return sort_key((self.kind, self.space, self.path.label(), label(self.g), tuple(self.legs)))

    def __str__(self) -> str:
        head = f"S({self.path.label()})" if self.kind == S else f"SG({self.path.label()}, {label(self.g)})"
        return head + "".join(f" (x) u_{t}({label(g)})" for t, g in self.legs)


class FormalSum:
    """Finite Z-linear combination of generator terms in canonical form."""

    __slots__ = ("terms",)

    def __init__(self, items: Iterable = ()) -> None:
        acc: dict = {}
        for t, c in items:
            acc[t] = acc.get(t, 0) + c
        self.terms = tuple(sorted(((t, c) for t, c in acc.items() if c), key=lambda tc: tc[0].key()))

    @classmethod
    def of(cls, *terms: GeneratorTerm) -> "FormalSum":
        return cls((t, 1) for t in terms)

    def __add__(self, other: "FormalSum") -> "FormalSum":
        return FormalSum(self.terms + other.terms)

    def __sub__(self, other: "FormalSum") -> "FormalSum":
        return FormalSum(self.terms + tuple((t, -c) for t, c in other.terms))

    def scale(self, a: int) -> "FormalSum":
        return FormalSum((t, a * c) for t, c in self.terms)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FormalSum) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def support(self) -> list:
        return [t for t, _ in self.terms]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(str(t) if c == 1 else f"{c}*{t}" for t, c in self.terms)

    __repr__ = __str__


class GeneratorMap:
    """A rule on generators, extended linearly to formal sums."""

    def __init__(self, rule: Callable[[GeneratorTerm], FormalSum], name: str = "") -> None:
        self.rule = rule
        self.name = name

    def __repr__(self) -> str:
        return f"<GeneratorMap {self.name}>"

    def __call__(self, x) -> FormalSum:
        if isinstance(x, GeneratorTerm):
            return self.rule(x)
        out = []
        for t, c in x.terms:
            out += [(u, c * d) for u, d in self.rule(t).terms]
        return FormalSum(out)

    def compose(self, inner: "GeneratorMap") -> "GeneratorMap":
        """self o inner."""
        return GeneratorMap(lambda t: self(inner(t)), f"{self.name} o {inner.name}")

    def override(self, overrides: Mapping[GeneratorTerm, FormalSum], name: str = "") -> "GeneratorMap":
        """Same map with some generator values replaced (used for fault injection)."""
        table = dict(overrides)
        return GeneratorMap(lambda t: table[t] if t in table else self.rule(t), name or f"{self.name}*")

    @classmethod
    def identity(cls) -> "GeneratorMap":
        return cls(FormalSum.of, "id")


def compose(*maps: GeneratorMap) -> GeneratorMap:
    out = maps[-1]
    for m in reversed(maps[:-1]):
        out = m.compose(out)
    return out


# -- the maps ---------------------------------------------------------------

def _level(cc: CocycleChain, n: int, top_offset: int = 0) -> None:
    if not 1 <= n <= cc.length - top_offset:
        raise IndexOutOfRange(f"level {n} outside 1..{cc.length - top_offset}", level=n)


def delta_n(cc: CocycleChain, n: int) -> GeneratorMap:
    """delta^n: S(lambda) -> S(lambda) (x) u(c_n(lambda)); the new leg goes first."""
    _level(cc, n)
    c, tag, space = cc.c(n), group_tag(n), base_space(cc.graph)

    def rule(t: GeneratorTerm) -> FormalSum:
        if t.kind != S or t.space != space:
            raise ValueError(f"delta^{n} is defined on generators of {space}")
        return FormalSum.of(t.with_legs(((tag, c(t.path)),) + t.legs))

    return GeneratorMap(rule, f"delta^{n}")


def delta_group(tag: str, leg: int = 0) -> GeneratorMap:
    """id (x) delta_G: u(s) -> u(s) (x) u(s) on the given leg."""

    def rule(t: GeneratorTerm) -> FormalSum:
        legs = list(t.legs)
        if leg >= len(legs) or legs[leg][0] != tag:
            raise ValueError(f"no {tag} leg at position {leg}")
        return FormalSum.of(t.with_legs(legs[: leg + 1] + [legs[leg]] + legs[leg + 1 :]))

    return GeneratorMap(rule, f"id x delta_{tag}")


def id_tensor_q(cc: CocycleChain, n: int, leg: int = 0) -> GeneratorMap:
    """id (x) q_n: replaces a G_{n+1} leg by its image in G_n."""
    _level(cc, n, 1)
    src, dst = group_tag(n + 1), group_tag(n)

    def rule(t: GeneratorTerm) -> FormalSum:
        legs = list(t.legs)
        if leg >= len(legs) or legs[leg][0] != src:
            raise ValueError(f"no {src} leg at position {leg}")
        legs[leg] = (dst, cc.chain.q(n, legs[leg][1]))
        return FormalSum.of(t.with_legs(legs))

    return GeneratorMap(rule, f"id x q_{n}")


def iota_covering(p: CoveringMap, source_space: str, target_space: str) -> GeneratorMap:
    """iota_p: S(mu) -> sum of S(mu') over the p-fiber of mu."""

    def rule(t: GeneratorTerm) -> FormalSum:
        if t.kind != S or t.space != target_space:
            raise ValueError(f"iota is defined on generators of {target_space}")
        return FormalSum.of(*(GeneratorTerm(S, source_space, mu, None, t.legs) for mu in p.fiber(t.path)))

    return GeneratorMap(rule, f"iota[{target_space} -> {source_space}]")


def iota_level(cc: CocycleChain, n: int) -> GeneratorMap:
    """iota_{p_n}: C*(Lambda_n) -> C*(Lambda_{n+1})."""
    _level(cc, n, 1)
    return iota_covering(cc.covering(n), level_space(n + 1), level_space(n))


def iota_n(cc: CocycleChain, n: int) -> GeneratorMap:
    """SG(lambda, g) -> sum of SG(lambda, g') over q_n(g') = g."""
    _level(cc, n, 1)
    G = cc.group(n + 1)
    src, dst = crossed_space(n), crossed_space(n + 1)

    def rule(t: GeneratorTerm) -> FormalSum:
        if t.kind != SG or t.space != src:
            raise ValueError(f"iota_{n} is defined on generators of {src}")
        return FormalSum.of(*(GeneratorTerm(SG, dst, t.path, h, t.legs) for h in G if cc.chain.q(n, h) == t.g))

    return GeneratorMap(rule, f"iota_{n}")


def phi_n(cc: CocycleChain, n: int) -> GeneratorMap:
    """S((lambda, g)) -> SG(lambda, g)."""
    _level(cc, n)
    src, dst, base = level_space(n), crossed_space(n), cc.graph

    def rule(t: GeneratorTerm) -> FormalSum:
        if t.kind != S or t.space != src:
            raise ValueError(f"phi_{n} is defined on generators of {src}")
        lam, g = skew_split(t.path, base)
        return FormalSum.of(GeneratorTerm(SG, dst, lam, g, t.legs))

    return GeneratorMap(rule, f"phi_{n}")


def phi_n_inverse(cc: CocycleChain, n: int) -> GeneratorMap:
    from .constructions import skew_lift

    _level(cc, n)
    lvl, c = cc.level_graph(n), cc.c(n)
    src, dst = crossed_space(n), level_space(n)

    def rule(t: GeneratorTerm) -> FormalSum:
        if t.kind != SG or t.space != src:
            raise ValueError(f"phi_{n}^-1 is defined on generators of {src}")
        return FormalSum.of(GeneratorTerm(S, dst, skew_lift(lvl, c, t.path, t.g), None, t.legs))

    return GeneratorMap(rule, f"phi_{n}^-1")


# -- generator sets ---------------------------------------------------------

def generators(graph: KGraph, space: str, bound: int = 2) -> list[GeneratorTerm]:
    out = []
    for n in box((bound,) * graph.k):
        out += [GeneratorTerm(S, space, p) for p in graph.paths_of_degree(n)]
    return out


def crossed_generators(cc: CocycleChain, n: int, bound: int = 2) -> list[GeneratorTerm]:
    return [
        GeneratorTerm(SG, crossed_space(n), t.path, g)
        for t in generators(cc.graph, "", bound)
        for g in cc.group(n)
    ]


# -- checks -----------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    ok: bool
    checked: int
    failures: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok, "checked": self.checked, "failures": self.failures}


def _compare(name: str, gens: Iterable[GeneratorTerm], lhs: GeneratorMap, rhs: GeneratorMap, expected=None) -> CheckResult:
    failures = []
    count = 0
    for t in gens:
        count += 1
        a, b = lhs(t), rhs(t)
        want = expected(t) if expected is not None else a
        if a != b or a != want:
            item = {"generator": str(t), "lhs": str(a), "rhs": str(b)}
            if expected is not None:
                item["expected"] = str(want)
            failures.append(item)
    return CheckResult(name, not failures, count, failures)


def check_coaction_identity(
    cc: CocycleChain, n: int, bound: int = 2, delta: Optional[GeneratorMap] = None
) -> CheckResult:
    """(delta^n (x) 1) o delta^n = (1 (x) delta_G) o delta^n on every S(lambda)."""
    delta = delta if delta is not None else delta_n(cc, n)
    tag, c = group_tag(n), cc.c(n)
    lhs = delta.compose(delta)  # delta acts on the C*(Lambda) factor, legs ride along
    rhs = delta_group(tag).compose(delta)
    expected = lambda t: FormalSum.of(t.with_legs(((tag, c(t.path)), (tag, c(t.path)))))  # noqa: E731
    return _compare(f"coaction identity at level {n}", generators(cc.graph, base_space(cc.graph), bound), lhs, rhs, expected)


def check_triangle(
    cc: CocycleChain,
    n: int,
    bound: int = 2,
    upper: Optional[GeneratorMap] = None,
    lower: Optional[GeneratorMap] = None,
) -> CheckResult:
    """(id (x) q_n) o delta^{n+1} = delta^n on every S(lambda)."""
    _level(cc, n, 1)
    upper = upper if upper is not None else delta_n(cc, n + 1)
    lower = lower if lower is not None else delta_n(cc, n)
    lhs = id_tensor_q(cc, n).compose(upper)
    return _compare(f"triangle at level {n}", generators(cc.graph, base_space(cc.graph), bound), lhs, lower)


def check_lemma42_square(
    cc: CocycleChain,
    n: int,
    bound: int = 2,
    iota_p: Optional[GeneratorMap] = None,
    iota_g: Optional[GeneratorMap] = None,
) -> CheckResult:
    """phi_{n+1} o iota_{p_n} = iota_n o phi_n on every generator of Lambda_n."""
    _level(cc, n, 1)
    iota_p = iota_p if iota_p is not None else iota_level(cc, n)
    iota_g = iota_g if iota_g is not None else iota_n(cc, n)
    lhs = phi_n(cc, n + 1).compose(iota_p)
    rhs = iota_g.compose(phi_n(cc, n))
    return _compare(f"fiber-sum square at level {n}", generators(cc.level_graph(n), level_space(n), bound), lhs, rhs)


def check_fiber_cardinalities(cc: CocycleChain, n: int, bound: int = 2) -> CheckResult:
    """|support(iota_{p_n}(S(mu)))| = |ker q_n| for every generator."""
    iota = iota_level(cc, n)
    size = len(cc.chain.kernel(n))
    failures = []
    gens = generators(cc.level_graph(n), level_space(n), bound)
    for t in gens:
        got = len(iota(t).support())
        if got != size:
            failures.append({"generator": str(t), "fiber": got, "expected": size})
    return CheckResult(f"fiber cardinality at level {n}", not failures, len(gens), failures)


def all_checks(cc: CocycleChain, bound: int = 2) -> list[CheckResult]:
    out = [check_coaction_identity(cc, n, bound) for n in range(1, cc.length + 1)]
    for n in range(1, cc.length):
        out += [check_triangle(cc, n, bound), check_lemma42_square(cc, n, bound), check_fiber_cardinalities(cc, n, bound)]
    return out
