"""Command-line front end: ``pbnpin check|graph|synthesize|verify``.

Exit codes: 0 stable or valid, 1 unstable, 2 input error, 3 cap exceeded.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .errors import CapExceededError, ModelError, PbnError
from .netparse import ParseError, parse_file
from .pbnmodel import DEFAULT_MAX_INDEGREE, DEFAULT_MAX_NODES, PbnModel
from .pipeline import synthesize
from .report import dumps, synthesis_report, verification_report
from .verify import DEFAULT_MAX_MODES, check_global_stability
from .wiring import build_wiring_digraph, find_cycles, is_acyclic, to_dot

__all__ = ["main", "parse_target", "parse_fas_file"]

EXIT_OK, EXIT_UNSTABLE, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


def parse_target(text: str, model: PbnModel) -> tuple[int, ...]:
    """``"A=1,B=0"`` (or a bare bit string like ``"10"``) to a full value tuple."""
    text = text.strip()
    if text and set(text) <= {"0", "1"}:
        if len(text) != model.n:
            raise ModelError(f"target has {len(text)} bits for {model.n} nodes")
        return tuple(int(c) for c in text)
    values = {}
    for part in text.replace(" ", ",").split(","):
        if not part:
            continue
        key, sep, val = part.partition("=")
        if not sep or val not in ("0", "1"):
            raise ModelError(f"bad target entry {part!r}; expected NAME=0 or NAME=1")
        if key not in model.names():
            raise ModelError(f"unknown node {key!r} in target")
        values[key] = int(val)
    missing = [nm for nm in model.names() if nm not in values]
    if missing:
        raise ModelError(f"target does not assign {', '.join(missing)}")
    return tuple(values[nm] for nm in model.names())


def parse_fas_file(path: str, model: PbnModel) -> list[tuple[int, int]]:
    """One edge per line as ``TAIL -> HEAD`` (node names); ``#`` comments allowed."""
    edges = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tail, sep, head = line.partition("->")
            if not sep:
                raise ModelError(f"{path}:{lineno}: expected 'TAIL -> HEAD'")
            tail, head = tail.strip(), head.strip()
            for nm in (tail, head):
                if nm not in model.names():
                    raise ModelError(f"{path}:{lineno}: unknown node {nm!r}")
            edges.append((model.index_of(tail), model.index_of(head)))
    return edges


def _load(args) -> PbnModel:
    return parse_file(args.input, max_indegree=args.max_indegree)


def _target(args, model: PbnModel):
    if getattr(args, "target", None):
        return parse_target(args.target, model)
    return model.target


def cmd_check(args) -> int:
    model = _load(args)
    g = build_wiring_digraph(model)
    print(f"ok: {model.name}: {model.n} nodes, {len(g.edges)} edges")
    return EXIT_OK


def cmd_graph(args) -> int:
    model = _load(args)
    g = build_wiring_digraph(model)
    names = model.names()
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(to_dot(model, g))
    if is_acyclic(g):
        print("acyclic: no feedback arcs; only steady-state pinning is needed")
        return EXIT_OK
    cycles = find_cycles(g)
    print(f"cyclic: {len(cycles)} elementary cycles")
    for cyc in cycles:
        print("  " + " -> ".join(names[i - 1] for i in cyc + cyc[:1]))
    return EXIT_OK


def cmd_synthesize(args) -> int:
    model = _load(args)
    target = _target(args, model)
    if target is None:
        raise ModelError("no target: add a target clause or pass --target")
    fas = args.fas
    if fas not in ("dfs", "min"):
        fas = parse_fas_file(fas, model)
    result = synthesize(model, target, fas, max_nodes=args.max_nodes, max_modes=args.max_modes)
    names = model.names()
    p1, p2 = result.stage1, result.stage2
    print(f"FAS: {len(p1.fas.edges)} edges")
    print(f"first-stage pinned: {[names[i - 1] for i in p1.pinned]}"
          f" (per-mode: {[names[i - 1] for i in p1.nonuniform]})")
    print(f"steady-state pinned: {[names[i - 1] for i in p2.gamma]} (cost {p2.xi})")
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(dumps(synthesis_report(result)))
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(to_dot(model, result.digraph, p1.fas, set(p1.pinned) | set(p2.gamma)))
    v = result.verification
    print("stable" if v.stable else "unstable: " + "; ".join(v.diagnostics))
    return EXIT_OK if v.stable else EXIT_UNSTABLE


def cmd_verify(args) -> int:
    model = _load(args)
    target = _target(args, model)
    v = check_global_stability(model, target, args.max_nodes, args.max_modes)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(dumps({"schema": 1, "verification": verification_report(v, model)}))
    if v.stable:
        print(f"stable at {''.join(map(str, v.target))} (state {v.steady_state})")
        return EXIT_OK
    print("unstable: " + "; ".join(v.diagnostics))
    return EXIT_UNSTABLE


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pbnpin", description="Pinning stabilization of probabilistic Boolean networks")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("input", help=".pbn network file")
        sp.add_argument("--max-indegree", type=_positive, default=DEFAULT_MAX_INDEGREE)
        sp.add_argument("--max-nodes", type=_positive, default=DEFAULT_MAX_NODES)
        sp.add_argument("--max-modes", type=_positive, default=DEFAULT_MAX_MODES)
        sp.add_argument("--seed", type=int, default=0, help="reserved for sampling; runs are deterministic")

    sp = sub.add_parser("check", help="parse and validate a network")
    common(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("graph", help="wiring digraph and its cycles")
    common(sp)
    sp.add_argument("--dot", help="write Graphviz source here")
    sp.set_defaults(func=cmd_graph)

    sp = sub.add_parser("synthesize", help="design both controller stages and verify the result")
    common(sp)
    sp.add_argument("--target", help='steady state, e.g. "A=1,B=0"')
    sp.add_argument("--fas", default="dfs", help="dfs, min, or a file of 'TAIL -> HEAD' lines")
    sp.add_argument("--report", help="write the JSON report here")
    sp.add_argument("--dot", help="write Graphviz source here")
    sp.set_defaults(func=cmd_synthesize)

    sp = sub.add_parser("verify", help="check global stability exhaustively")
    common(sp)
    sp.add_argument("--target", help='steady state, e.g. "A=1,B=0"')
    sp.add_argument("--report", help="write the JSON verdict here")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ParseError as exc:
        where = f" (node {exc.node})" if exc.node else ""
        print(f"{args.input}:{exc.span}: error: {exc.message}{where}", file=sys.stderr)
        return EXIT_INPUT
    except (PbnError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
