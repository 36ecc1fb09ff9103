"""Pinning control for stabilizing probabilistic Boolean networks.

Typical use::

    from pbnpin import load_example, synthesize
    result = synthesize(load_example("cell_cycle"), fas="dfs")
    result.stable
"""

from importlib import resources

from .errors import CapExceededError, ModelError, PbnError, SynthesisError
from .netparse import ParseError, parse, parse_file, serialize
from .pbnmodel import PbnModel, state_index, state_values, transition_matrix
from .pipeline import SynthesisResult, synthesize
from .steadypin import SteadyTarget, assemble_controlled_pbn
from .verify import check_global_stability, simulate
from .wiring import build_wiring_digraph, compute_fas

__version__ = "0.1.0"

__all__ = [
    "PbnError", "ModelError", "CapExceededError", "SynthesisError", "ParseError",
    "parse", "parse_file", "serialize", "load_example",
    "PbnModel", "state_index", "state_values", "transition_matrix",
    "SynthesisResult", "synthesize", "SteadyTarget", "assemble_controlled_pbn",
    "check_global_stability", "simulate", "build_wiring_digraph", "compute_fas",
]


def load_example(name: str) -> PbnModel:
    """Bundled network by stem, e.g. ``"cell_cycle"``."""
    text = resources.files(__package__).joinpath("data", f"{name}.pbn").read_text(encoding="utf-8")
    return parse(text)
