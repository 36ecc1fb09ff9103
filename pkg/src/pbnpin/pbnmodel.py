"""Probabilistic Boolean network model.

States and assignments follow one canonical bijection: a Boolean value
``x`` is the unit vector ``delta_2^{2-x}``, and a tuple of values is the
STP of its factors, first variable highest-order.  For ``k`` variables the
0-based column of an assignment is ``sum((1 - x_m) * 2**(k-1-m))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .boolexpr import BoolExpr
from .errors import CapExceededError, ModelError
from .stp import LogicalMatrix, Matrix, StochasticMatrix, as_fraction, khatri_rao

__all__ = [
    "DEFAULT_MAX_INDEGREE",
    "DEFAULT_MAX_NODES",
    "CandidateFunction",
    "PbnNode",
    "PbnModel",
    "assignment_table",
    "functional_variables",
    "structure_matrix",
    "extend_structure_matrix",
    "expected_matrix",
    "retrieval_matrix",
    "transition_matrix",
    "next_state_distribution",
    "state_index",
    "state_values",
]

DEFAULT_MAX_INDEGREE = 20
DEFAULT_MAX_NODES = 12


def assignment_table(k: int) -> np.ndarray:
    """Boolean array of shape (2**k, k); row ``j`` is the assignment of column ``j``."""
    j = np.arange(2 ** k)[:, None]
    shifts = np.arange(k - 1, -1, -1)[None, :]
    return ((j >> shifts) & 1) == 0


def state_index(values: Sequence[int]) -> int:
    """1-based index of the unit vector encoding ``values``."""
    n = len(values)
    idx = 0
    for m, x in enumerate(values):
        if x not in (0, 1):
            raise ValueError(f"state entries must be 0 or 1, got {x!r}")
        idx += (1 - int(x)) << (n - 1 - m)
    return idx + 1


def state_values(index: int, n: int) -> tuple[int, ...]:
    if not 1 <= index <= 2 ** n:
        raise ValueError(f"index {index} outside [1, {2 ** n}]")
    s = index - 1
    return tuple(1 - ((s >> (n - 1 - m)) & 1) for m in range(n))


def _truth_values(expr: BoolExpr, ordered_vars: Sequence[int]) -> np.ndarray:
    table = assignment_table(len(ordered_vars))
    env = {v: table[:, m] for m, v in enumerate(ordered_vars)}
    out = expr.evaluate(env)
    return np.broadcast_to(out, (2 ** len(ordered_vars),))


def functional_variables(expr: BoolExpr, candidates: Iterable[int],
                         max_indegree: int = DEFAULT_MAX_INDEGREE) -> frozenset[int]:
    """Variables whose flip changes the value of ``expr`` for some assignment."""
    cand = sorted(set(candidates))
    missing = expr.variables() - set(cand)
    if missing:
        raise ModelError(f"expression references variables {sorted(missing)} outside the candidate set")
    if len(cand) > max_indegree:
        raise CapExceededError(f"{len(cand)} candidate inputs exceed the in-degree cap {max_indegree}")
    k = len(cand)
    vals = _truth_values(expr, cand)
    out = set()
    for m, v in enumerate(cand):
        stride = 1 << (k - 1 - m)
        # columns j and j + stride differ exactly in variable m
        idx = np.arange(2 ** k)
        low = idx[(idx & stride) == 0]
        if np.any(vals[low] != vals[low + stride]):
            out.add(v)
    return frozenset(out)


def structure_matrix(expr: BoolExpr, ordered_vars: Sequence[int]) -> LogicalMatrix:
    """Truth table of ``expr`` in column form (column index 1 = true)."""
    ordered_vars = list(ordered_vars)
    if not expr.variables() <= set(ordered_vars):
        # non-functional references are harmless only if they do not matter
        extra = sorted(expr.variables() - set(ordered_vars))
        full = ordered_vars + extra
        fv = functional_variables(expr, full, max_indegree=max(len(full), 1))
        if not fv <= set(ordered_vars):
            raise ModelError(f"functional variables {sorted(fv - set(ordered_vars))} missing from ordering")
        table = assignment_table(len(ordered_vars))
        env = {v: table[:, m] for m, v in enumerate(ordered_vars)}
        env.update({v: np.zeros(2 ** len(ordered_vars), dtype=bool) for v in extra})
        vals = np.broadcast_to(expr.evaluate(env), (2 ** len(ordered_vars),))
    else:
        vals = _truth_values(expr, ordered_vars)
    return LogicalMatrix(2, tuple(1 if v else 2 for v in vals))


def _project_columns(source_vars: Sequence[int], target_vars: Sequence[int]) -> np.ndarray:
    """0-based source column for every target column."""
    pos = {v: m for m, v in enumerate(target_vars)}
    missing = [v for v in source_vars if v not in pos]
    if missing:
        raise ValueError(f"variables {missing} are not in the target set")
    k, q = len(target_vars), len(source_vars)
    j = np.arange(2 ** k)
    out = np.zeros(2 ** k, dtype=np.int64)
    for m, v in enumerate(source_vars):
        bit = (j >> (k - 1 - pos[v])) & 1
        out |= bit << (q - 1 - m)
    return out


def extend_structure_matrix(f: LogicalMatrix, source_vars: Sequence[int],
                            target_vars: Sequence[int]) -> LogicalMatrix:
    """Re-express ``f`` (over ``source_vars``) as a function of ``target_vars``."""
    if f.n_cols != 2 ** len(source_vars):
        raise ValueError("structure matrix width does not match its variable list")
    proj = _project_columns(list(source_vars), list(target_vars))
    return LogicalMatrix(f.rows, tuple(f.cols[c] for c in proj))


@dataclass(frozen=True)
class CandidateFunction:
    expr: BoolExpr
    probability: Fraction
    functional_vars: tuple[int, ...]
    structure_matrix: LogicalMatrix

    @classmethod
    def build(cls, expr: BoolExpr, probability, candidates: Iterable[int],
              max_indegree: int = DEFAULT_MAX_INDEGREE) -> "CandidateFunction":
        p = as_fraction(probability)
        if not 0 <= p <= 1:
            raise ModelError(f"probability {p} outside [0, 1]")
        fv = tuple(sorted(functional_variables(expr, candidates, max_indegree)))
        return cls(expr, p, fv, structure_matrix(expr, fv))


@dataclass(frozen=True)
class PbnNode:
    name: str
    index: int
    candidates: tuple[CandidateFunction, ...]

    def __post_init__(self):
        if not self.candidates:
            raise ModelError(f"node {self.name} has no candidate functions")
        total = sum((c.probability for c in self.candidates), Fraction(0))
        if total != 1:
            raise ModelError(f"probabilities of node {self.name} sum to {total}, not 1")

    @property
    def active(self) -> tuple[CandidateFunction, ...]:
        """Candidates with positive probability."""
        return tuple(c for c in self.candidates if c.probability > 0)

    @cached_property
    def neighbors(self) -> tuple[int, ...]:
        """N_i: union of functional variables over candidates with positive probability."""
        out = set()
        for c in self.active:
            out.update(c.functional_vars)
        return tuple(sorted(out))

    def extended_matrices(self) -> list[LogicalMatrix]:
        """Structure matrices of the active candidates, all over ``neighbors``."""
        return [extend_structure_matrix(c.structure_matrix, c.functional_vars, self.neighbors)
                for c in self.active]


@dataclass(frozen=True)
class PbnModel:
    """Nodes are indexed 1..n in declaration order."""

    nodes: tuple[PbnNode, ...]
    name: str = "pbn"
    target: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        names = [nd.name for nd in self.nodes]
        if len(set(names)) != len(names):
            raise ModelError("duplicate node names")
        for pos, nd in enumerate(self.nodes, start=1):
            if nd.index != pos:
                raise ModelError(f"node {nd.name} has index {nd.index}, expected {pos}")
        if self.target is not None and len(self.target) != len(self.nodes):
            raise ModelError("target length does not match node count")

    @property
    def n(self) -> int:
        return len(self.nodes)

    def node(self, key) -> PbnNode:
        if isinstance(key, int):
            return self.nodes[key - 1]
        for nd in self.nodes:
            if nd.name == key:
                return nd
        raise KeyError(key)

    def index_of(self, name: str) -> int:
        return self.node(name).index

    def names(self) -> list[str]:
        return [nd.name for nd in self.nodes]

    @classmethod
    def from_functions(cls, spec: Sequence[tuple[str, Sequence[tuple[object, BoolExpr]]]],
                       name: str = "pbn", target: Optional[Sequence[int]] = None,
                       max_indegree: int = DEFAULT_MAX_INDEGREE) -> "PbnModel":
        """Build from ``[(node_name, [(probability, expr), ...]), ...]``.

        Expressions refer to nodes by 1-based index via :class:`Var`.
        """
        n = len(spec)
        nodes = []
        for i, (node_name, cands) in enumerate(spec, start=1):
            built = []
            for prob, expr in cands:
                refs = expr.variables()
                bad = [r for r in refs if not 1 <= r <= n]
                if bad:
                    raise ModelError(f"node {node_name} references unknown node indices {bad}")
                built.append(CandidateFunction.build(expr, prob, sorted(refs), max_indegree))
            nodes.append(PbnNode(node_name, i, tuple(built)))
        return cls(tuple(nodes), name, tuple(target) if target is not None else None)

    def with_target(self, target: Optional[Sequence[int]]) -> "PbnModel":
        return PbnModel(self.nodes, self.name, tuple(target) if target is not None else None)


def expected_matrix(node: PbnNode) -> Matrix:
    """Convex combination of the extended structure matrices (column-stochastic)."""
    k = len(node.neighbors)
    acc = np.empty((2, 2 ** k), dtype=object)
    acc.fill(Fraction(0))
    for cand, ext in zip(node.active, node.extended_matrices()):
        for j, c in enumerate(ext.cols):
            acc[c - 1, j] += cand.probability
    return StochasticMatrix(acc)


def retrieval_matrix(variables: Sequence[int], n: int) -> LogicalMatrix:
    """Logical matrix selecting the factors ``variables`` out of the full state of ``n`` nodes."""
    proj = _project_columns(list(variables), list(range(1, n + 1)))
    return LogicalMatrix(2 ** len(variables), tuple(int(c) + 1 for c in proj))


def _check_oracle_cap(model: PbnModel, max_nodes: int) -> None:
    if model.n > max_nodes:
        raise CapExceededError(f"{model.n} nodes exceed the state-space cap {max_nodes}")


def transition_matrix(model: PbnModel, max_nodes: int = DEFAULT_MAX_NODES) -> Matrix:
    """Khatri-Rao product of ``F_i Upsilon_i`` over all nodes: column s is P(x(t+1) | x(t)=s)."""
    _check_oracle_cap(model, max_nodes)
    out = None
    for node in model.nodes:
        local = expected_matrix(node)
        ups = retrieval_matrix(node.neighbors, model.n)
        # F Upsilon on indices: column s of the product is column ups[s] of F
        block = local.permute_columns([c - 1 for c in ups.cols])
        out = block if out is None else khatri_rao(out, block)
    return out


def next_state_distribution(model: PbnModel, index: int) -> dict[int, Fraction]:
    """Distribution of the successor of the state with 1-based ``index``, computed per node."""
    x = state_values(index, model.n)
    dist = {(): Fraction(1)}
    for node in model.nodes:
        p_true = Fraction(0)
        for cand in node.candidates:
            col = state_index([x[v - 1] for v in cand.functional_vars])
            if cand.structure_matrix.cols[col - 1] == 1:
                p_true += cand.probability
        nxt = {}
        for prefix, p in dist.items():
            for bit, q in ((1, p_true), (0, 1 - p_true)):
                if q:
                    nxt[prefix + (bit,)] = p * q
        dist = nxt
    return {state_index(s): p for s, p in dist.items()}
