"""Second-stage pinning: force a prescribed steady state, then assemble the controlled network.

After the first stage every node ``i`` has dynamics ``G_i`` over its
remaining inputs ``N°_i``.  The target ``epsilon`` is a fixed point iff
each ``G_i`` maps epsilon's restriction to ``delta_2^{2-eps_i}``.  The
constraints decouple per node, so the minimal pinning set is just the set
of nodes that violate theirs.  Those nodes get a controller
``x+ = v (+) G`` whose output is the constant ``eps_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .boolexpr import BoolExpr, apply_table, from_truth_table
from .errors import SynthesisError
from .pbnmodel import CandidateFunction, PbnModel, PbnNode, state_index
from .pinsynth import (STEADY_FAMILY_ORDER, NonUniformController, UniformController,
                       find_cover, synthesize_uniform)
from .stp import LogicalMatrix, Matrix
from .wiring import PinningPlan

__all__ = [
    "SteadyTarget",
    "NodeDynamics",
    "SteadyController",
    "SteadyPlan",
    "minimal_steady_pinning",
    "synthesize_steady_controller",
    "plan_steady_stage",
    "assemble_controlled_pbn",
]


@dataclass(frozen=True)
class SteadyTarget:
    epsilon: tuple[int, ...]

    def __post_init__(self):
        if any(v not in (0, 1) for v in self.epsilon):
            raise ValueError(f"steady state entries must be 0 or 1, got {self.epsilon}")

    @property
    def index(self) -> int:
        return state_index(self.epsilon)


@dataclass(frozen=True)
class NodeDynamics:
    """Post-first-stage dynamics ``G`` of one node over ``inputs`` (canonical order)."""

    inputs: tuple[int, ...]
    G: Matrix


@dataclass(frozen=True)
class SteadyController:
    node: int
    inputs: tuple[int, ...]
    Q: LogicalMatrix
    m_oplus: LogicalMatrix
    upsilon: LogicalMatrix


@dataclass
class SteadyPlan:
    target: SteadyTarget
    lam: tuple[int, ...]
    Q: dict[int, LogicalMatrix] = field(default_factory=dict)
    controllers: dict[int, SteadyController] = field(default_factory=dict)

    @property
    def xi(self) -> int:
        return sum(self.lam)

    @property
    def gamma(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.lam, start=1) if v)


def _unit(value: int) -> tuple[Fraction, Fraction]:
    return (Fraction(1), Fraction(0)) if value else (Fraction(0), Fraction(1))


def minimal_steady_pinning(dynamics: Mapping[int, NodeDynamics], target: SteadyTarget) -> SteadyPlan:
    """Pin exactly the nodes whose dynamics do not already fix ``target``.

    ``dynamics`` must cover nodes ``1..n``.  Each pinned node gets the
    constant ``Q_i`` whose every column is ``delta_2^{2-eps_i}``.
    """
    eps = target.epsilon
    n = len(eps)
    if sorted(dynamics) != list(range(1, n + 1)):
        raise ValueError("dynamics must be given for every node 1..n")
    lam = []
    Q = {}
    for i in range(1, n + 1):
        d = dynamics[i]
        col = state_index([eps[j - 1] for j in d.inputs]) if d.inputs else 1
        if d.G.col(col) == _unit(eps[i - 1]):
            lam.append(0)
        else:
            lam.append(1)
            Q[i] = LogicalMatrix(2, (1 if eps[i - 1] else 2,) * d.G.cols)
    return SteadyPlan(target, tuple(lam), Q)


def synthesize_steady_controller(node: int, G: Matrix, Q: LogicalMatrix,
                                 inputs: Sequence[int] = ()) -> SteadyController:
    """Solve ``M_oplus Upsilon (I (x) G) Phi = Q`` for a constant ``Q``.

    The forcing branch alone covers every column, so ``Upsilon`` is all
    ones and both branches of ``M_oplus`` are that forcing map.
    """
    Qm = Q.to_matrix()
    fam = find_cover(Qm, G, STEADY_FAMILY_ORDER)
    if fam is None:
        raise SynthesisError(f"steady controller of node {node}: Q is not reachable from G")
    m_oplus, upsilon = synthesize_uniform(Qm, G, fam)
    return SteadyController(node, tuple(inputs), Q, m_oplus, upsilon)


def plan_steady_stage(dynamics: Mapping[int, NodeDynamics], target: SteadyTarget) -> SteadyPlan:
    plan = minimal_steady_pinning(dynamics, target)
    for i, q in plan.Q.items():
        plan.controllers[i] = synthesize_steady_controller(i, dynamics[i].G, q, dynamics[i].inputs)
    return plan


def _table(m: LogicalMatrix) -> tuple[int, int, int, int]:
    if m.n_cols != 4:
        raise ValueError("operator matrices must be 2 x 4")
    return tuple(m.cols)


def _index_expr(seq: LogicalMatrix, inputs: Sequence[int]) -> BoolExpr:
    """Boolean formula of a 2 x 2^k logical matrix over ``inputs``."""
    return from_truth_table([c == 1 for c in seq.cols], inputs)


def assemble_controlled_pbn(model: PbnModel, stage1: Optional[PinningPlan] = None,
                            stage2: Optional[SteadyPlan] = None) -> PbnModel:
    """Rebuild the network with both controller layers substituted in.

    Per node: ``x+ = v (+) (u (.) f)`` when pinned in both stages,
    ``u (.) f`` or ``v (+) f`` when pinned in one, ``f`` otherwise.  A
    non-uniform first-stage controller gives every candidate its own
    ``u``.  Candidate probabilities are unchanged.
    """
    controllers = stage1.controllers if stage1 is not None else {}
    steady = stage2.controllers if stage2 is not None else {}
    nodes = []
    for node in model.nodes:
        i = node.index
        c1 = controllers.get(i)
        c2 = steady.get(i)
        new_cands = []
        k = 0  # position among active candidates
        for cand in node.candidates:
            expr = cand.expr
            if cand.probability > 0 and c1 is not None:
                if isinstance(c1, UniformController):
                    u = _index_expr(c1.psi_hat, c1.input_order)
                    expr = apply_table(_table(c1.m_odot), u, expr)
                elif isinstance(c1, NonUniformController):
                    mc = c1.modes[k]
                    u = _index_expr(mc.psi_hat, c1.input_order)
                    expr = apply_table(_table(mc.m_odot), u, expr)
                else:
                    raise TypeError(f"unknown controller type {type(c1).__name__}")
                k += 1
            if c2 is not None:
                v = _index_expr(c2.upsilon, c2.inputs)
                expr = apply_table(_table(c2.m_oplus), v, expr)
            new_cands.append(CandidateFunction.build(expr, cand.probability, sorted(expr.variables())))
        nodes.append(PbnNode(node.name, i, tuple(new_cands)))
    target = stage2.target.epsilon if stage2 is not None else model.target
    return PbnModel(tuple(nodes), model.name, target)
