"""JSON report for a synthesis or verification run (schema 1).

Matrices appear as column-index arrays with the input order spelled out
next to them; probabilities are exact strings.
"""

from __future__ import annotations

import json
from typing import Optional

from .boolexpr import from_truth_table, render
from .netparse import format_probability, serialize
from .pbnmodel import PbnModel, state_values
from .pinsynth import NonUniformController, UniformController
from .stp import LogicalMatrix, Matrix
from .verify import VerificationReport
from .wiring import is_acyclic

__all__ = ["SCHEMA_VERSION", "synthesis_report", "verification_report", "dumps"]

SCHEMA_VERSION = 1


def _names(model: PbnModel):
    names = model.names()
    return names, (lambda i: names[i - 1])


def _cols(m: LogicalMatrix) -> list[int]:
    return list(m.cols)


def _stochastic(m: Matrix) -> list[list[str]]:
    return [[format_probability(v) for v in row] for row in m.data]


def _formula(m: LogicalMatrix, inputs, name) -> str:
    return render(from_truth_table([c == 1 for c in m.cols], inputs), name)


def _uniform(c: UniformController, name) -> dict:
    return {
        "kind": "uniform",
        "input_order": [name(j) for j in c.input_order],
        "family": [str(o) for o in c.family],
        "m_odot": _cols(c.m_odot),
        "psi_hat": _cols(c.psi_hat),
        "u": _formula(c.psi_hat, c.input_order, name),
        "frozen_inputs": {name(j): v for j, v in zip(c.input_order[len(c.input_order) - len(c.target.frozen):],
                                                     c.target.frozen)},
        "G": _stochastic(c.target.G),
    }


def _nonuniform(c: NonUniformController, name) -> dict:
    return {
        "kind": "nonuniform",
        "input_order": [name(j) for j in c.input_order],
        "modes": [{
            "candidate": mc.candidate,
            "m_odot": _cols(mc.m_odot),
            "psi_hat": _cols(mc.psi_hat),
            "u": _formula(mc.psi_hat, c.input_order, name),
        } for mc in c.modes],
        "G": _stochastic(c.G),
    }


def verification_report(v: VerificationReport, model: Optional[PbnModel] = None) -> dict:
    out = {
        "stable": v.stable,
        "target": list(v.target) if v.target is not None else None,
        "target_index": v.steady_state if v.stable else None,
        "fixed_in_every_mode": v.fixed_in_every_mode,
        "unique_attractor_in_every_mode": v.unique_in_every_mode,
        "all_states_reach_target": v.reachability,
        "modes": len(v.mode_probabilities),
        "mode_probabilities": [format_probability(p) for p in v.mode_probabilities],
        "mode_attractors": [[{"states": list(a.states),
                              "values": ["".join(map(str, state_values(s, v.n))) for s in a.states]}
                             for a in att] for att in v.mode_attractors],
        "common_fixed_points": v.steady_states,
        "wiring_acyclic": v.wiring_acyclic,
        "sufficient_condition": v.sufficient_condition,
        "diagnostics": list(v.diagnostics),
    }
    if model is not None:
        out["model"] = model.name
    return out


def synthesis_report(result) -> dict:
    """Report for a :class:`pipeline.SynthesisResult`."""
    model = result.model
    names, name = _names(model)
    p1, p2 = result.stage1, result.stage2
    stage1 = {}
    for i, ctrl in p1.controllers.items():
        entry = _uniform(ctrl, name) if isinstance(ctrl, UniformController) else _nonuniform(ctrl, name)
        entry["deleted"] = [name(j) for j in p1.deleted[i]]
        entry["kept"] = [name(j) for j in p1.kept[i]]
        stage1[name(i)] = entry
    stage2 = {}
    for i, c in p2.controllers.items():
        stage2[name(i)] = {
            "input_order": [name(j) for j in c.inputs],
            "Q": _cols(c.Q),
            "m_oplus": _cols(c.m_oplus),
            "upsilon": _cols(c.upsilon),
            "v": _formula(c.upsilon, c.inputs, name),
        }
    return {
        "schema": SCHEMA_VERSION,
        "model": model.name,
        "nodes": names,
        "target": {"values": list(result.target.epsilon), "index": result.target.index},
        "digraph": {
            "edges": [[name(t), name(h)] for t, h in sorted(result.digraph.edges)],
            "acyclic": is_acyclic(result.digraph),
            "cycle_count": len(result.cycles),
        },
        "fas": [[name(t), name(h)] for t, h in sorted(p1.fas.edges)],
        "stage1": {
            "pinned": [name(i) for i in p1.pinned],
            "uniform": [name(i) for i in p1.uniform],
            "nonuniform": [name(i) for i in p1.nonuniform],
            "controllers": stage1,
        },
        "stage2": {
            "lambda": list(p2.lam),
            "xi": p2.xi,
            "gamma": [name(i) for i in p2.gamma],
            "controllers": stage2,
        },
        "controlled_model": serialize(result.controlled),
        "verification": (verification_report(result.verification)
                         if result.verification is not None else None),
        "timings": {k: round(t, 6) for k, t in result.timings.items()},
    }


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"
