"""JSON spec files: schema, loading, and the built-in example emitters."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

import jsonschema

from .catalog import cycle, two_loop
from .core import KGraph, validate_kgraph
from .errors import SpecError
from .groups import (
    CocycleChain,
    FiniteGroup,
    QuotientChain,
    _freeze,
    validate_chain,
    validate_cocycle,
)

_ID = {"type": ["string", "integer"]}
_ELEMENT: dict = {}  # any JSON value; lists are frozen to tuples

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["graph"],
    "properties": {
        "graph": {
            "type": "object",
            "additionalProperties": False,
            "required": ["k", "vertices", "edges"],
            "properties": {
                "name": {"type": "string"},
                "k": {"type": "integer", "minimum": 1},
                "vertices": {"type": "array", "items": _ID},
                "edges": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["id", "color", "src", "dst"],
                        "properties": {"id": _ID, "color": {"type": "integer", "minimum": 1}, "src": _ID, "dst": _ID},
                    },
                },
                "squares": {"type": "array", "items": {"type": "array", "items": _ID, "minItems": 4, "maxItems": 4}},
            },
        },
        "groups": {
            "type": "array",
            "minItems": 1,
            "items": {
                "oneOf": [
                    {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["cyclic"],
                        "properties": {"cyclic": {"type": "integer", "minimum": 1}},
                    },
                    {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["symmetric"],
                        "properties": {"symmetric": {"type": "integer", "minimum": 1}},
                    },
                    {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["elements", "table"],
                        "properties": {
                            "name": {"type": "string"},
                            "elements": {"type": "array", "minItems": 1},
                            "table": {"type": "array", "items": {"type": "array"}},
                        },
                    },
                ]
            },
        },
        "chain": {
            "type": "object",
            "additionalProperties": False,
            "required": ["surjections"],
            "properties": {
                "surjections": {
                    "type": "array",
                    "items": {"type": "array", "items": {"type": "array", "minItems": 2, "maxItems": 2}},
                }
            },
        },
        "cocycles": {"type": "array", "items": {"type": "object"}},
        "defaults": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "levels": {"type": "integer", "minimum": 1},
                "bound": {"type": "integer", "minimum": 0},
                "degree_bound": {"type": "integer", "minimum": 0},
                "lag_bound": {"type": "integer", "minimum": 0},
            },
        },
    },
}


@dataclass
class Spec:
    graph: KGraph
    chain: Optional[CocycleChain] = None
    defaults: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)

    def require_chain(self) -> CocycleChain:
        if self.chain is None:
            raise SpecError("this command needs groups, chain and cocycles in the spec")
        return self.chain


def _group(raw: dict) -> FiniteGroup:
    if "cyclic" in raw:
        return FiniteGroup.cyclic(raw["cyclic"])
    if "symmetric" in raw:
        return FiniteGroup.symmetric(raw["symmetric"])
    return FiniteGroup.from_products(raw["elements"], raw["table"], name=raw.get("name", ""))


def _graph_id(graph: KGraph, x: Any) -> Any:
    """Map a JSON edge key (always a string) back to the edge id."""
    if x in graph.edges:
        return x
    for e in graph.edges:
        if str(e) == x:
            return e
    raise SpecError(f"cocycle names unknown edge {x!r}", edge=x)


def load_spec(raw: dict) -> Spec:
    try:
        jsonschema.validate(raw, SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise SpecError(f"spec does not match the schema at '{path}': {exc.message}", path=path) from None
    g = raw["graph"]
    graph = validate_kgraph(g, name=g.get("name", ""))
    present = [key in raw for key in ("groups", "cocycles")]
    if not any(present) and "chain" not in raw:
        return Spec(graph, None, dict(raw.get("defaults", {})), raw)
    if not all(present):
        raise SpecError("groups and cocycles must be given together")
    groups = [_group(x) for x in raw["groups"]]
    surj = raw.get("chain", {}).get("surjections", [])
    maps = [{_freeze(a): _freeze(b) for a, b in pairs} for pairs in surj]
    chain = QuotientChain(groups, maps)
    if len(raw["cocycles"]) != len(groups):
        raise SpecError("need one cocycle per group", groups=len(groups), cocycles=len(raw["cocycles"]))
    cocycles = [
        validate_cocycle(graph, {_graph_id(graph, e): _freeze(x) for e, x in lab.items()}, grp)
        for lab, grp in zip(raw["cocycles"], groups)
    ]
    return Spec(graph, validate_chain(chain, cocycles), dict(raw.get("defaults", {})), raw)


# -- example emitters -------------------------------------------------------

def bd_spec(levels: int) -> dict:
    """B_1 with the odometer chain Z/2^{n-1} and c_n(f) = 1."""
    if levels < 1:
        raise SpecError("need at least one level", levels=levels)
    orders = [2 ** (n - 1) for n in range(1, levels + 1)]
    return {
        "graph": {"name": "B_1", "k": 1, "vertices": ["v"], "edges": [{"id": "f", "color": 1, "src": "v", "dst": "v"}], "squares": []},
        "groups": [{"cyclic": m} for m in orders],
        "chain": {"surjections": [[[x, x % orders[i]] for x in range(orders[i + 1])] for i in range(levels - 1)]},
        "cocycles": [{"f": 1 % m} for m in orders],
        "defaults": {"levels": levels, "bound": 3, "degree_bound": 2, "lag_bound": 2},
    }


def _graph_only(graph: KGraph) -> dict:
    raw = graph.to_raw()
    raw["name"] = graph.name
    return {"graph": raw, "defaults": {"bound": 3, "degree_bound": 2, "lag_bound": 2}}


def cycle_spec(p: int) -> dict:
    return _graph_only(cycle(p))


def twoloop_spec() -> dict:
    return _graph_only(two_loop())
