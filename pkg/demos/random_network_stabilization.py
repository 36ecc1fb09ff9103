"""Stabilizing random networks and checking each result independently.

Generates random probabilistic Boolean networks, synthesizes pinning
control to a random steady state, and re-checks the controlled network
after a round trip through the text format.

Run:  python3 demos/random_network_stabilization.py [count] [seed]
"""

import sys
from fractions import Fraction

import numpy as np

from pbnpin.boolexpr import And, Not, Or, Var
from pbnpin.netparse import parse, serialize
from pbnpin.pbnmodel import PbnModel
from pbnpin.pipeline import synthesize
from pbnpin.verify import check_global_stability

count = int(sys.argv[1]) if len(sys.argv) > 1 else 10
rng = np.random.default_rng(int(sys.argv[2]) if len(sys.argv) > 2 else 0)


def random_literal(inputs):
    v = Var(int(rng.choice(inputs)))
    return Not(v) if rng.random() < 0.5 else v


def random_network(n):
    spec = []
    for i in range(1, n + 1):
        k = int(rng.integers(1, 3))
        weights = rng.integers(1, 5, size=k)
        cands = []
        for w in weights:
            inputs = list(rng.choice(np.arange(1, n + 1), size=min(n, 2), replace=False))
            op = And if rng.random() < 0.5 else Or
            cands.append((Fraction(int(w), int(weights.sum())), op(random_literal(inputs), random_literal(inputs))))
        spec.append((f"g{i}", cands))
    eps = tuple(int(v) for v in rng.integers(0, 2, size=n))
    return PbnModel.from_functions(spec, name="random", target=eps)


print(f"{'n':>2} {'edges':>5} {'FAS':>4} {'pinned':>6} {'per-mode':>8} {'cost':>4}  stable  re-checked")
for _ in range(count):
    model = random_network(int(rng.integers(3, 9)))
    res = synthesize(model)
    again = check_global_stability(parse(serialize(res.controlled)))
    print(f"{model.n:>2} {len(res.digraph.edges):>5} {len(res.stage1.fas.edges):>4} "
          f"{len(res.stage1.pinned):>6} {len(res.stage1.nonuniform):>8} {res.stage2.xi:>4}  "
          f"{str(res.stable):6s}  {again.stable}")
