"""Command-line front end.

Every command reads a JSON spec (a file path or ``-`` for stdin) and writes
one JSON document to stdout.  Errors go to stderr as JSON with exit code 3.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Any, Optional, Sequence

from .analysis import is_simple_tower, SIMPLE, NOT_SIMPLE
from .constructions import profinite_skew_bijection, projlim_paths, to_dot, tower_from_chain
from .core import label, structural_checks
from .errors import CoveringError, KGraphError, SpecError
from .groups import CocycleChain, trivial_chain
from .spec_io import Spec, bd_spec, cycle_spec, load_spec, twoloop_spec
from .symbolic import all_checks

EXIT_ERROR = 3


def _dump(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _read_spec(path: str) -> Spec:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise SpecError(f"cannot read spec: {exc}", path=path) from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"spec is not valid JSON: {exc}") from None
    return load_spec(raw)


def _chain(spec: Spec, levels: Optional[int]) -> tuple[CocycleChain, str]:
    """The spec's chain truncated to ``levels``, or a trivial chain for graph-only specs."""
    if spec.chain is None:
        return trivial_chain(spec.graph, levels or spec.defaults.get("levels", 1)), "trivial"
    cc = spec.chain
    n = levels or spec.defaults.get("levels", cc.length)
    if n < cc.length:
        cc = cc.truncate(n)
    elif n > cc.length:
        raise SpecError(f"spec chain has {cc.length} levels, asked for {n}", levels=n)
    return cc, "spec"


def _graph_summary(graph) -> dict:
    st = structural_checks(graph)
    return {
        "k": graph.k,
        "vertices": len(graph.vertices),
        "edges": len(graph.edges),
        "squares": len(graph.squares),
        "structure": st.to_dict(),
    }


def _write_dot(path: Optional[str], text: str) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


# -- commands ---------------------------------------------------------------

def cmd_validate(args) -> tuple[dict, int]:
    spec = _read_spec(args.spec)
    out: dict[str, Any] = {"valid": True, "graph": _graph_summary(spec.graph)}
    if spec.chain is not None:
        cc = spec.chain
        out["chain"] = {
            "levels": cc.length,
            "group_orders": [len(cc.group(n)) for n in range(1, cc.length + 1)],
            "kernel_orders": [len(cc.chain.kernel(n)) for n in range(1, cc.length)],
        }
    return out, 0


def cmd_skew(args) -> tuple[dict, int]:
    spec = _read_spec(args.spec)
    cc, source = _chain(spec, None)
    lvl = cc.level_graph(args.level)
    _write_dot(args.dot, to_dot(lvl, name=f"Lambda_{args.level}"))
    return {"level": args.level, "chain": source, "summary": _graph_summary(lvl), "graph": lvl.to_raw()}, 0


def cmd_cover_check(args) -> tuple[dict, int]:
    spec = _read_spec(args.spec)
    cc, source = _chain(spec, None)
    n = args.level
    out: dict[str, Any] = {"level": n, "chain": source, "covering": f"p_{n}: Lambda_{n + 1} -> Lambda_{n}"}
    try:
        p = cc.covering(n)
    except CoveringError as exc:
        out.update({"valid": False, "error": exc.to_dict()})
        return out, 1
    fibers = sorted({len(p.vertex_fiber(v)) for v in p.target.vertices})
    out.update(
        {
            "valid": True,
            "source_vertices": len(p.source.vertices),
            "target_vertices": len(p.target.vertices),
            "vertex_fiber_sizes": fibers,
            "vertex_map": {label(u): label(v) for u, v in sorted(p.vertex_map.items(), key=lambda kv: label(kv[0]))},
        }
    )
    return out, 0


def cmd_tower(args) -> tuple[dict, int]:
    spec = _read_spec(args.spec)
    cc, source = _chain(spec, args.levels)
    t = tower_from_chain(cc, args.levels or cc.length)
    _write_dot(args.dot, to_dot(t.graph, tower=t))
    out = {
        "levels": t.depth,
        "chain": source,
        "level_vertex_counts": [len(lv.vertices) for lv in t.levels],
        "summary": _graph_summary(t.graph),
        "graph": t.graph.to_raw(),
    }
    return out, 0


def cmd_simplicity(args) -> tuple[dict, int]:
    spec = _read_spec(args.spec)
    cc, source = _chain(spec, args.levels)
    d = spec.defaults
    rep = is_simple_tower(
        cc,
        degree_bound=args.degree_bound if args.degree_bound is not None else d.get("degree_bound", 2),
        depth_bound=args.bound if args.bound is not None else d.get("bound", 3),
        lag_bound=args.lag_bound if args.lag_bound is not None else d.get("lag_bound", 2),
    )
    out = rep.to_dict()
    out["chain"] = source
    code = {SIMPLE: 0, NOT_SIMPLE: 1}.get(rep.verdict, 2)
    return out, code


def cmd_projlim(args) -> tuple[dict, int]:
    spec = _read_spec(args.spec)
    cc, source = _chain(spec, args.levels)
    N = cc.length
    degree = tuple(int(x) for x in args.degree.split(","))
    if len(degree) != spec.graph.k:
        raise SpecError(f"degree needs {spec.graph.k} coordinates", degree=list(degree))
    covs = [cc.covering(n) for n in range(1, N)]
    tuples = projlim_paths(covs, degree, N, first_level=cc.level_graph(1))
    bij = profinite_skew_bijection(cc, N, degree)
    out = {
        "levels": N,
        "chain": source,
        "degree": list(degree),
        "count": len(tuples),
        "tuples": [[c.label() for c in t.components] for t in tuples],
        "skew_bijection": bij.to_dict(),
    }
    return out, 0


def cmd_symbolic(args) -> tuple[dict, int]:
    spec = _read_spec(args.spec)
    cc, source = _chain(spec, args.levels)
    results = all_checks(cc, args.degree_bound)
    ok = all(results)
    return {"levels": cc.length, "chain": source, "ok": ok, "checks": [r.to_dict() for r in results]}, 0 if ok else 1


def cmd_example(args) -> tuple[dict, int]:
    if args.which == "bd":
        return bd_spec(args.levels), 0
    if args.which == "cycle":
        return cycle_spec(args.p), 0
    return twoloop_spec(), 0


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--timing", action="store_true", help="add wall-clock seconds to the report")
    spec_arg = argparse.ArgumentParser(add_help=False, parents=[common])
    spec_arg.add_argument("spec", nargs="?", default="-", help="spec file, '-' for stdin (default)")

    ap = argparse.ArgumentParser(prog="kgt", description="k-graph towers, skew products and simplicity checks")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[spec_arg], help="validate graph and chain")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("skew", parents=[spec_arg], help="skew product at one level")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--dot")
    p.set_defaults(func=cmd_skew)

    p = sub.add_parser("cover-check", parents=[spec_arg], help="validate p_n: Lambda_{n+1} -> Lambda_n")
    p.add_argument("--level", type=int, required=True)
    p.set_defaults(func=cmd_cover_check)

    p = sub.add_parser("tower", parents=[spec_arg], help="truncated tower graph")
    p.add_argument("--levels", type=int)
    p.add_argument("--dot")
    p.set_defaults(func=cmd_tower)

    p = sub.add_parser("simplicity", parents=[spec_arg], help="simplicity criterion (exit 0/1/2)")
    p.add_argument("--levels", type=int)
    p.add_argument("--bound", type=int, help="depth bound for periodicity search")
    p.add_argument("--degree-bound", type=int)
    p.add_argument("--lag-bound", type=int)
    p.set_defaults(func=cmd_simplicity)

    p = sub.add_parser("projlim", parents=[spec_arg], help="compatible path tuples at level N")
    p.add_argument("--levels", type=int)
    p.add_argument("--degree", required=True, help="comma-separated degree, e.g. 1 or 1,0")
    p.set_defaults(func=cmd_projlim)

    p = sub.add_parser("symbolic", parents=[spec_arg], help="generator-level identities")
    p.add_argument("--levels", type=int)
    p.add_argument("--degree-bound", type=int, default=2)
    p.set_defaults(func=cmd_symbolic)

    p = sub.add_parser("example", parents=[common], help="emit a built-in spec")
    ex = p.add_subparsers(dest="which", required=True)
    e = ex.add_parser("bd")
    e.add_argument("--levels", type=int, default=4)
    e = ex.add_parser("cycle")
    e.add_argument("--p", type=int, default=4)
    ex.add_parser("twoloop")
    p.set_defaults(func=cmd_example)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        doc, code = args.func(args)
    except KGraphError as exc:
        sys.stderr.write(_dump({"error": exc.to_dict()}))
        return EXIT_ERROR
    except (ValueError, KeyError) as exc:
        sys.stderr.write(_dump({"error": {"type": type(exc).__name__, "message": str(exc)}}))
        return EXIT_ERROR
    if getattr(args, "timing", False):
        doc = dict(doc, timing_seconds=round(time.perf_counter() - start, 6))
    sys.stdout.write(_dump(doc))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
