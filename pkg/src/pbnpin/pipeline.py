"""End-to-end pinning synthesis: digraph, FAS, both controller stages, assembly, verification."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .errors import ModelError
from .pbnmodel import DEFAULT_MAX_NODES, PbnModel, expected_matrix
from .pinsynth import node_dynamics, synthesize_nonuniform, uniform_controller
from .steadypin import NodeDynamics, SteadyPlan, SteadyTarget, assemble_controlled_pbn, plan_steady_stage
from .verify import DEFAULT_MAX_MODES, VerificationReport, check_global_stability
from .wiring import (DEFAULT_MAX_FAS_EDGES, Edge, PinningPlan, WiringDigraph, build_wiring_digraph,
                     compute_fas, find_cycles, pinning_partition)

__all__ = ["SynthesisResult", "first_stage", "post_stage1_dynamics", "synthesize"]

FasChoice = Union[str, Iterable[Edge]]


@dataclass
class SynthesisResult:
    model: PbnModel
    target: SteadyTarget
    digraph: WiringDigraph
    cycles: list[list[int]]
    stage1: PinningPlan
    dynamics: dict[int, NodeDynamics]
    stage2: SteadyPlan
    controlled: PbnModel
    verification: Optional[VerificationReport] = None
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def stable(self) -> bool:
        return bool(self.verification and self.verification.stable)


def first_stage(model: PbnModel, fas) -> PinningPlan:
    """Partition by ``fas`` and give every pinned node a uniform or per-mode controller."""
    plan = pinning_partition(model, fas)
    uniform, nonuniform = [], []
    for i in plan.pinned:
        node = model.node(i)
        ctrl = uniform_controller(node_dynamics(node, plan.deleted[i]))
        if ctrl is None:
            ctrl = synthesize_nonuniform(node, plan.deleted[i])
            nonuniform.append(i)
        else:
            uniform.append(i)
        plan.controllers[i] = ctrl
    plan.uniform = tuple(uniform)
    plan.nonuniform = tuple(nonuniform)
    return plan


def post_stage1_dynamics(model: PbnModel, plan: PinningPlan) -> dict[int, NodeDynamics]:
    out = {}
    for node in model.nodes:
        i = node.index
        ctrl = plan.controllers.get(i)
        if ctrl is None:
            out[i] = NodeDynamics(node.neighbors, expected_matrix(node))
        elif i in plan.uniform:
            out[i] = NodeDynamics(plan.kept[i], ctrl.target.G)
        else:
            out[i] = NodeDynamics(plan.kept[i], ctrl.G)
    return out


def _resolve_fas(g: WiringDigraph, fas: FasChoice, max_fas_edges: int):
    if isinstance(fas, str):
        strategy = {"dfs": "dfs_back_edges", "min": "exhaustive_min"}.get(fas, fas)
        return compute_fas(g, strategy, max_edges=max_fas_edges)
    return compute_fas(g, "user_supplied", edges=fas)


def synthesize(model: PbnModel, target: Optional[Sequence[int]] = None, fas: FasChoice = "dfs",
               verify: bool = True, max_nodes: int = DEFAULT_MAX_NODES,
               max_modes: int = DEFAULT_MAX_MODES,
               max_fas_edges: int = DEFAULT_MAX_FAS_EDGES) -> SynthesisResult:
    """Run the whole procedure; ``target`` defaults to the model's own."""
    eps = tuple(target) if target is not None else model.target
    if eps is None:
        raise ModelError("no steady state given: supply a target clause or argument")
    if len(eps) != model.n:
        raise ModelError(f"target has {len(eps)} entries for {model.n} nodes")
    steady = SteadyTarget(tuple(int(v) for v in eps))
    timings = {}

    t0 = time.perf_counter()
    g = build_wiring_digraph(model)
    cycles = find_cycles(g)
    fas_set = _resolve_fas(g, fas, max_fas_edges)
    plan1 = first_stage(model, fas_set)
    timings["stage1"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    dyn = post_stage1_dynamics(model, plan1)
    plan2 = plan_steady_stage(dyn, steady)
    controlled = assemble_controlled_pbn(model, plan1, plan2)
    timings["stage2"] = time.perf_counter() - t0

    result = SynthesisResult(model, steady, g, cycles, plan1, dyn, plan2, controlled, timings=timings)
    if verify:
        t0 = time.perf_counter()
        result.verification = check_global_stability(controlled, steady.epsilon, max_nodes, max_modes)
        timings["verify"] = time.perf_counter() - t0
    return result
