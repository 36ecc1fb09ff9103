"""Random networks and matrices for property tests (numpy Generator based)."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from pbnpin.boolexpr import And, Const, Not, Or, Var, Xor
from pbnpin.pbnmodel import PbnModel



def random_expr(rng: np.random.Generator, inputs, depth: int = 2):
    if not inputs:
        return Const(bool(rng.integers(2)))
    if depth == 0 or rng.random() < 0.3:
        leaf = Var(int(rng.choice(inputs)))
        return Not(leaf) if rng.random() < 0.4 else leaf
    op = rng.choice(["and", "or", "xor", "not"], p=[0.4, 0.4, 0.1, 0.1])
    if op == "not":
        return Not(random_expr(rng, inputs, depth - 1))
    cls = {"and": And, "or": Or, "xor": Xor}[op]
    return cls(random_expr(rng, inputs, depth - 1), random_expr(rng, inputs, depth - 1))


def random_probabilities(rng: np.random.Generator, k: int) -> list[Fraction]:
    if k == 1:
        return [Fraction(1)]
    weights = rng.integers(1, 6, size=k)
    total = int(weights.sum())
    return [Fraction(int(w), total) for w in weights]


def random_pbn(rng: np.random.Generator, n: int, max_candidates: int = 3, max_inputs: int = 3,
               acyclic: bool = False, target: bool = False) -> PbnModel:
    """Random network; ``acyclic`` restricts inputs of node i to nodes below i."""
    spec = []
    for i in range(1, n + 1):
        pool = list(range(1, i)) if acyclic else list(range(1, n + 1))
        k = int(rng.integers(1, max_candidates + 1))
        cands = []
        for p in random_probabilities(rng, k):
            m = int(rng.integers(0, min(max_inputs, len(pool)) + 1)) if pool else 0
            inputs = sorted(int(v) for v in rng.choice(pool, size=m, replace=False)) if m else []
            cands.append((p, random_expr(rng, inputs)))
        spec.append((f"g{i}", cands))
    eps = tuple(int(v) for v in rng.integers(0, 2, size=n)) if target else None
    return PbnModel.from_functions(spec, name="random", target=eps)


def random_stochastic_columns(rng: np.random.Generator, m: int, logical_share: float = 0.5):
    """2 x m column-stochastic entries; each column is a unit vector with probability ``logical_share``."""
    cols = []
    for _ in range(m):
        if rng.random() < logical_share:
            p = Fraction(int(rng.integers(2)))
        else:
            den = int(rng.integers(2, 7))
            p = Fraction(int(rng.integers(1, den)), den)
        cols.append((p, 1 - p))
    return cols


def brute_force_solvable(T_cols, L_cols) -> bool:
    """Search every 2x4 operator and every selector sequence for an exact match."""
    import itertools

    m = len(L_cols)
    psi = np.array(list(itertools.product((0, 1), repeat=m)), dtype=np.int64)  # (2**m, m)
    for table in itertools.product((1, 2), repeat=4):
        ok = np.zeros((m, 2), dtype=bool)
        for j, (l, t) in enumerate(zip(L_cols, T_cols)):
            for u in (0, 1):
                out = [Fraction(0), Fraction(0)]
                out[table[2 * u] - 1] += l[0]      # f = 1
                out[table[2 * u + 1] - 1] += l[1]  # f = 0
                ok[j, u] = tuple(out) == tuple(t)
        if ok[np.arange(m)[None, :], psi].all(axis=1).any():
            return True
    return False


def random_target_columns(rng: np.random.Generator, L_cols):
    """Per column: copy, negate, force 1, force 0, or an unrelated distribution."""
    out = []
    for p, q in L_cols:
        kind = int(rng.integers(5))
        if kind == 0:
            out.append((p, q))
        elif kind == 1:
            out.append((q, p))
        elif kind == 2:
            out.append((Fraction(1), Fraction(0)))
        elif kind == 3:
            out.append((Fraction(0), Fraction(1)))
        else:
            out.append(random_stochastic_columns(rng, 1, logical_share=0.3)[0])
    return out
