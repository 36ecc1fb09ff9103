"""Exhaustive stability oracle.

Everything here works from the candidate truth tables alone and shares no
code with controller synthesis: constituent networks are enumerated, each
one's next-state map is tabulated over all ``2**n`` states, and global
stability is decided by reachability in the union transition graph.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm, prod
from typing import Optional, Sequence

import numpy as np

from .errors import CapExceededError
from .pbnmodel import DEFAULT_MAX_NODES, PbnModel, state_index, state_values
from .stp import LogicalMatrix
from .wiring import build_wiring_digraph, is_acyclic

__all__ = [
    "DEFAULT_MAX_MODES",
    "ModeModel",
    "Attractor",
    "VerificationReport",
    "merged_candidates",
    "enumerate_modes",
    "next_state_map",
    "attractors",
    "mode_distribution",
    "check_global_stability",
    "simulate",
]

DEFAULT_MAX_MODES = 4096


@dataclass(frozen=True)
class ModeModel:
    """One constituent deterministic network.

    ``functions[i-1]`` is ``(inputs, structure matrix)`` for node ``i``.
    """

    index: int
    choice: tuple[int, ...]
    probability: Fraction
    functions: tuple[tuple[tuple[int, ...], LogicalMatrix], ...]


@dataclass(frozen=True)
class Attractor:
    states: tuple[int, ...]  # 1-based state indices, starting from the smallest

    @property
    def is_fixed_point(self) -> bool:
        return len(self.states) == 1


@dataclass
class VerificationReport:
    n: int
    target: Optional[tuple[int, ...]]
    mode_probabilities: list[Fraction]
    mode_attractors: list[list[Attractor]]
    fixed_in_every_mode: bool = False
    unique_in_every_mode: bool = False
    reachability: bool = False
    stable: bool = False
    steady_states: list[int] = field(default_factory=list)
    wiring_acyclic: bool = False
    sufficient_condition: bool = False
    diagnostics: list[str] = field(default_factory=list)

    @property
    def steady_state(self) -> Optional[int]:
        return state_index(self.target) if self.stable and self.target is not None else None


def merged_candidates(node) -> list[tuple[Fraction, tuple[int, ...], LogicalMatrix]]:
    """Active candidates with identical truth tables folded together (probabilities summed)."""
    groups: dict[LogicalMatrix, Fraction] = {}
    order = []
    for ext, cand in zip(node.extended_matrices(), node.active):
        if ext not in groups:
            groups[ext] = Fraction(0)
            order.append(ext)
        groups[ext] += cand.probability
    return [(groups[ext], node.neighbors, ext) for ext in order]


def enumerate_modes(model: PbnModel, max_modes: int = DEFAULT_MAX_MODES) -> list[ModeModel]:
    per_node = [merged_candidates(nd) for nd in model.nodes]
    count = prod(len(c) for c in per_node)
    if count > max_modes:
        raise CapExceededError(f"{count} modes exceed the cap {max_modes}")
    modes = []
    for idx, choice in enumerate(itertools.product(*(range(len(c)) for c in per_node)), start=1):
        p = Fraction(1)
        funcs = []
        for opts, k in zip(per_node, choice):
            prob, inputs, mat = opts[k]
            p *= prob
            funcs.append((inputs, mat))
        modes.append(ModeModel(idx, choice, p, tuple(funcs)))
    return modes


def _state_bits(n: int) -> np.ndarray:
    """values[s, i] = x_{i+1} of the state with 0-based index s."""
    s = np.arange(2 ** n)[:, None]
    shifts = np.arange(n - 1, -1, -1)[None, :]
    return 1 - ((s >> shifts) & 1)


def next_state_map(mode: ModeModel, n: int) -> np.ndarray:
    """0-based successor of every 0-based state."""
    x = _state_bits(n)
    nxt = np.zeros(2 ** n, dtype=np.int64)
    for i, (inputs, mat) in enumerate(mode.functions):
        k = len(inputs)
        col = np.zeros(2 ** n, dtype=np.int64)
        for m, v in enumerate(inputs):
            col |= (1 - x[:, v - 1]) << (k - 1 - m)
        value = np.asarray(mat.cols, dtype=np.int64)[col] == 1
        nxt |= (~value).astype(np.int64) << (n - 1 - i)
    return nxt


def attractors(next_map: np.ndarray) -> list[Attractor]:
    """Cycles of the functional graph ``s -> next_map[s]``."""
    size = len(next_map)
    colour = np.zeros(size, dtype=np.int8)  # 0 new, 1 on current path, 2 done
    found = []
    for start in range(size):
        if colour[start]:
            continue
        path = []
        s = start
        while colour[s] == 0:
            colour[s] = 1
            path.append(s)
            s = int(next_map[s])
        if colour[s] == 1:
            cyc = path[path.index(s):]
            k = cyc.index(min(cyc))
            cyc = cyc[k:] + cyc[:k]
            found.append(Attractor(tuple(c + 1 for c in cyc)))
        for p in path:
            colour[p] = 2
    return sorted(found, key=lambda a: (len(a.states), a.states))


def _check_cap(model: PbnModel, max_nodes: int) -> None:
    if model.n > max_nodes:
        raise CapExceededError(f"{model.n} nodes exceed the state-space cap {max_nodes}")


def mode_distribution(model: PbnModel, max_nodes: int = DEFAULT_MAX_NODES,
                      max_modes: int = DEFAULT_MAX_MODES) -> list[dict[int, Fraction]]:
    """Per state (0-based list position), the successor distribution as {1-based index: prob}."""
    _check_cap(model, max_nodes)
    dist: list[dict[int, Fraction]] = [dict() for _ in range(2 ** model.n)]
    for mode in enumerate_modes(model, max_modes):
        nxt = next_state_map(mode, model.n)
        for s, t in enumerate(nxt):
            d = dist[s]
            d[int(t) + 1] = d.get(int(t) + 1, Fraction(0)) + mode.probability
    return dist


def check_global_stability(model: PbnModel, epsilon: Optional[Sequence[int]] = None,
                           max_nodes: int = DEFAULT_MAX_NODES,
                           max_modes: int = DEFAULT_MAX_MODES) -> VerificationReport:
    """Decide whether every trajectory reaches ``epsilon`` and stays there with probability 1.

    ``stable`` holds iff every constituent network fixes ``epsilon`` and
    ``epsilon`` is reachable from every state in the union graph.  Without
    ``epsilon`` the unique common fixed point (if any) is used.
    """
    _check_cap(model, max_nodes)
    n = model.n
    modes = enumerate_modes(model, max_modes)
    maps = [next_state_map(m, n) for m in modes]
    report = VerificationReport(
        n=n,
        target=tuple(epsilon) if epsilon is not None else None,
        mode_probabilities=[m.probability for m in modes],
        mode_attractors=[attractors(mp) for mp in maps],
    )
    common = np.ones(2 ** n, dtype=bool)
    for mp in maps:
        common &= mp == np.arange(2 ** n)
    report.steady_states = [int(s) + 1 for s in np.nonzero(common)[0]]
    if epsilon is None:
        if len(report.steady_states) != 1:
            report.diagnostics.append(f"{len(report.steady_states)} common fixed points; no unique candidate")
            return report
        report.target = state_values(report.steady_states[0], n)
    eps = state_index(report.target) - 1

    report.fixed_in_every_mode = bool(common[eps])
    report.unique_in_every_mode = all(
        len(att) == 1 and att[0].states == (eps + 1,) for att in report.mode_attractors)

    preds: list[list[int]] = [[] for _ in range(2 ** n)]
    for mp in maps:
        for s, t in enumerate(mp):
            preds[int(t)].append(s)
    seen = np.zeros(2 ** n, dtype=bool)
    seen[eps] = True
    queue = deque([eps])
    while queue:
        t = queue.popleft()
        for s in preds[t]:
            if not seen[s]:
                seen[s] = True
                queue.append(s)
    report.reachability = bool(seen.all())
    report.stable = report.fixed_in_every_mode and report.reachability

    report.wiring_acyclic = is_acyclic(build_wiring_digraph(model))
    report.sufficient_condition = report.wiring_acyclic and report.fixed_in_every_mode
    if not report.fixed_in_every_mode:
        movers = [m.index for m, mp in zip(modes, maps) if mp[eps] != eps]
        report.diagnostics.append(f"target is not fixed in modes {movers}")
    if not report.reachability:
        report.diagnostics.append(f"{int((~seen).sum())} states cannot reach the target")
    return report


def simulate(model: PbnModel, x0: Sequence[int], steps: int, seed: int = 0) -> list[tuple[int, ...]]:
    """Sample a trajectory; each node draws its candidate independently at every step."""
    rng = np.random.default_rng(seed)
    tables = []
    for nd in model.nodes:
        opts = merged_candidates(nd)
        denom = lcm(*(p.denominator for p, _, _ in opts))
        cum = np.cumsum([p.numerator * (denom // p.denominator) for p, _, _ in opts])
        tables.append((denom, cum, [(inputs, mat) for _, inputs, mat in opts]))
    x = tuple(int(v) for v in x0)
    traj = [x]
    for _ in range(steps):
        nxt = []
        for denom, cum, funcs in tables:
            k = int(np.searchsorted(cum, rng.integers(0, denom), side="right"))
            inputs, mat = funcs[k]
            col = state_index([x[v - 1] for v in inputs])
            nxt.append(1 if mat.cols[col - 1] == 1 else 0)
        x = tuple(nxt)
        traj.append(x)
    return traj
