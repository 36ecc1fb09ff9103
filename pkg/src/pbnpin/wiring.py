"""Wiring digraph, cycle detection, feedback arc sets and the first pinning partition."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

import networkx as nx

from .errors import CapExceededError, ModelError
from .pbnmodel import PbnModel

__all__ = [
    "Edge",
    "WiringDigraph",
    "Fas",
    "PinningPlan",
    "DEFAULT_MAX_FAS_EDGES",
    "build_wiring_digraph",
    "mode_digraph",
    "is_acyclic",
    "find_cycles",
    "compute_fas",
    "pinning_partition",
    "to_dot",
]

Edge = tuple[int, int]  # (tail j, head i) for x_j -> x_i
DEFAULT_MAX_FAS_EDGES = 24


@dataclass(frozen=True)
class WiringDigraph:
    n: int
    edges: frozenset[Edge]

    def successors(self, j: int) -> list[int]:
        return sorted(i for (t, i) in self.edges if t == j)

    def predecessors(self, i: int) -> list[int]:
        return sorted(t for (t, h) in self.edges if h == i)

    def without(self, removed: Iterable[Edge]) -> "WiringDigraph":
        return WiringDigraph(self.n, self.edges - frozenset(removed))

    def self_loops(self) -> list[Edge]:
        return sorted(e for e in self.edges if e[0] == e[1])


@dataclass(frozen=True)
class Fas:
    edges: frozenset[Edge]

    def heads(self) -> list[int]:
        return sorted({h for (_, h) in self.edges})

    def tails_into(self, head: int) -> list[int]:
        return sorted(t for (t, h) in self.edges if h == head)


@dataclass
class PinningPlan:
    """First-stage pinning data: FAS, pinned nodes and their input split.

    ``deleted[i]`` holds the tails of FAS edges into ``i``; ``kept[i]`` is
    the rest of ``N_i``.  ``uniform`` and ``nonuniform`` are filled in by
    controller synthesis.
    """

    fas: Fas
    pinned: tuple[int, ...]
    deleted: dict[int, tuple[int, ...]]
    kept: dict[int, tuple[int, ...]]
    uniform: tuple[int, ...] = ()
    nonuniform: tuple[int, ...] = ()
    controllers: dict = field(default_factory=dict)


def build_wiring_digraph(model: PbnModel) -> WiringDigraph:
    """Edge j -> i iff x_j is a functional variable of a positive-probability candidate of f_i."""
    edges = set()
    for node in model.nodes:
        for j in node.neighbors:
            edges.add((j, node.index))
    return WiringDigraph(model.n, frozenset(edges))


def mode_digraph(model: PbnModel, choice: Sequence[int]) -> WiringDigraph:
    """Digraph of one constituent network; ``choice[i-1]`` is the 0-based candidate of node i."""
    edges = set()
    for node, k in zip(model.nodes, choice):
        for j in node.candidates[k].functional_vars:
            edges.add((j, node.index))
    return WiringDigraph(model.n, frozenset(edges))


def _adjacency(g: WiringDigraph) -> dict[int, list[int]]:
    adj = {v: [] for v in range(1, g.n + 1)}
    for t, h in g.edges:
        adj[t].append(h)
    for v in adj:
        adj[v].sort()
    return adj


def _dfs_back_edges(g: WiringDigraph) -> list[Edge]:
    """Back edges of an iterative DFS; roots and neighbours visited in ascending order."""
    adj = _adjacency(g)
    WHITE, GREY, BLACK = 0, 1, 2
    colour = {v: WHITE for v in adj}
    back = []
    for root in sorted(adj):
        if colour[root] != WHITE:
            continue
        colour[root] = GREY
        stack = [(root, iter(adj[root]))]
        while stack:
            v, it = stack[-1]
            for w in it:
                if colour[w] == GREY:
                    back.append((v, w))
                elif colour[w] == WHITE:
                    colour[w] = GREY
                    stack.append((w, iter(adj[w])))
                    break
            else:
                colour[v] = BLACK
                stack.pop()
    return back


def is_acyclic(g: WiringDigraph) -> bool:
    return not _dfs_back_edges(g)


def find_cycles(g: WiringDigraph) -> list[list[int]]:
    """All elementary cycles, self-loops included as length-1 cycles, in a canonical order."""
    dg = nx.DiGraph()
    dg.add_nodes_from(range(1, g.n + 1))
    dg.add_edges_from(g.edges)
    cycles = []
    for cyc in nx.simple_cycles(dg):
        k = cyc.index(min(cyc))
        cycles.append(cyc[k:] + cyc[:k])
    return sorted(cycles, key=lambda c: (len(c), c))


def _validate_fas(g: WiringDigraph, edges: frozenset[Edge]) -> Fas:
    unknown = edges - g.edges
    if unknown:
        raise ModelError(f"FAS edges {sorted(unknown)} are not in the wiring digraph")
    if not is_acyclic(g.without(edges)):
        raise ModelError("removing the given edges leaves a cycle")
    return Fas(edges)


def compute_fas(g: WiringDigraph, strategy: str = "dfs_back_edges",
                edges: Optional[Iterable[Edge]] = None,
                max_edges: int = DEFAULT_MAX_FAS_EDGES) -> Fas:
    """Feedback arc set by DFS back edges, exhaustive minimum search, or a user-supplied set.

    Self-loops are always part of the result.  The returned set is checked
    to leave an acyclic graph whatever the strategy.
    """
    loops = frozenset(g.self_loops())
    if strategy == "user_supplied":
        if edges is None:
            raise ValueError("user_supplied strategy needs an edge list")
        return _validate_fas(g, frozenset(edges))
    if strategy == "dfs_back_edges":
        return _validate_fas(g, loops | frozenset(_dfs_back_edges(g)))
    if strategy == "exhaustive_min":
        if len(g.edges) > max_edges:
            raise CapExceededError(
                f"exhaustive FAS search refused: {len(g.edges)} edges exceed the cap {max_edges}")
        rest = sorted(g.edges - loops)
        base = g.without(loops)
        for size in range(len(rest) + 1):
            for combo in combinations(rest, size):
                if is_acyclic(base.without(combo)):
                    return _validate_fas(g, loops | frozenset(combo))
        raise AssertionError("removing every edge must leave an acyclic graph")
    raise ValueError(f"unknown FAS strategy {strategy!r}")


def pinning_partition(model: PbnModel, fas: Fas) -> PinningPlan:
    """Pin every FAS head; split each pinned node's inputs into deleted and kept."""
    g = build_wiring_digraph(model)
    _validate_fas(g, fas.edges)
    pinned = tuple(fas.heads())
    deleted, kept = {}, {}
    for i in pinned:
        star = tuple(fas.tails_into(i))
        deleted[i] = star
        kept[i] = tuple(j for j in model.node(i).neighbors if j not in star)
    return PinningPlan(fas, pinned, deleted, kept)


def to_dot(model: PbnModel, g: Optional[WiringDigraph] = None, fas: Optional[Fas] = None,
           pinned: Iterable[int] = ()) -> str:
    """Graphviz source; FAS edges are red and pinned nodes filled."""
    g = g or build_wiring_digraph(model)
    fas_edges = fas.edges if fas is not None else frozenset()
    pinned = set(pinned)
    lines = [f'digraph "{model.name}" {{']
    for node in model.nodes:
        attrs = [f'label="{node.name}"']
        if node.index in pinned:
            attrs += ["style=filled", "fillcolor=lightblue"]
        lines.append(f"  x{node.index} [{', '.join(attrs)}];")
    for t, h in sorted(g.edges):
        attr = " [color=red]" if (t, h) in fas_edges else ""
        lines.append(f"  x{t} -> x{h}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"
