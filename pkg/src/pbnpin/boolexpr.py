"""Boolean expression trees over node indices.

Expressions evaluate element-wise on numpy boolean arrays, which lets a
whole truth table be computed in one pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

__all__ = [
    "BoolExpr",
    "Const",
    "Var",
    "Not",
    "And",
    "Or",
    "Xor",
    "TRUE",
    "FALSE",
    "apply_table",
    "from_truth_table",
    "render",
]

# binding strength used by the printer; matches the DSL grammar
_PREC = {"or": 1, "xor": 2, "and": 3, "not": 4, "atom": 5}


class BoolExpr:
    def evaluate(self, env: Mapping[int, np.ndarray]) -> np.ndarray:
        raise NotImplementedError

    def variables(self) -> frozenset[int]:
        raise NotImplementedError

    def substitute(self, mapping: Mapping[int, "BoolExpr"]) -> "BoolExpr":
        raise NotImplementedError

    def __invert__(self):
        return Not(self)

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __xor__(self, other):
        return Xor(self, other)


@dataclass(frozen=True)
class Const(BoolExpr):
    value: bool

    def evaluate(self, env):
        shape = next(iter(env.values())).shape if env else ()
        return np.full(shape, bool(self.value))

    def variables(self):
        return frozenset()

    def substitute(self, mapping):
        return self


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class Var(BoolExpr):
    index: int

    def evaluate(self, env):
        return np.asarray(env[self.index], dtype=bool)

    def variables(self):
        return frozenset((self.index,))

    def substitute(self, mapping):
        return mapping.get(self.index, self)


@dataclass(frozen=True)
class Not(BoolExpr):
    arg: BoolExpr

    def evaluate(self, env):
        return np.logical_not(self.arg.evaluate(env))

    def variables(self):
        return self.arg.variables()

    def substitute(self, mapping):
        return Not(self.arg.substitute(mapping))


@dataclass(frozen=True)
class _Binary(BoolExpr):
    left: BoolExpr
    right: BoolExpr

    def variables(self):
        return self.left.variables() | self.right.variables()

    def substitute(self, mapping):
        return type(self)(self.left.substitute(mapping), self.right.substitute(mapping))


class And(_Binary):
    def evaluate(self, env):
        return np.logical_and(self.left.evaluate(env), self.right.evaluate(env))


class Or(_Binary):
    def evaluate(self, env):
        return np.logical_or(self.left.evaluate(env), self.right.evaluate(env))


class Xor(_Binary):
    def evaluate(self, env):
        return np.logical_xor(self.left.evaluate(env), self.right.evaluate(env))


def _kind(e: BoolExpr) -> str:
    if isinstance(e, Or):
        return "or"
    if isinstance(e, Xor):
        return "xor"
    if isinstance(e, And):
        return "and"
    if isinstance(e, Not):
        return "not"
    return "atom"


def render(e: BoolExpr, name: Callable[[int], str] = lambda i: f"x{i}") -> str:
    """Print with the DSL operators ``! & ^ |`` and minimal parentheses."""
    if isinstance(e, Const):
        return "1" if e.value else "0"
    if isinstance(e, Var):
        return name(e.index)
    if isinstance(e, Not):
        inner = render(e.arg, name)
        if _PREC[_kind(e.arg)] < _PREC["not"]:
            inner = f"({inner})"
        return "!" + inner
    kind = _kind(e)
    op = {"or": " | ", "xor": " ^ ", "and": " & "}[kind]
    parts = []
    for side, child in (("l", e.left), ("r", e.right)):
        s = render(child, name)
        ck = _PREC[_kind(child)]
        # left-associative: a right child of equal strength needs parentheses
        if ck < _PREC[kind] or (side == "r" and ck == _PREC[kind]):
            s = f"({s})"
        parts.append(s)
    return op.join(parts)


def _conj(terms: list[BoolExpr]) -> BoolExpr:
    out = terms[0]
    for t in terms[1:]:
        out = And(out, t)
    return out


def _disj(terms: list[BoolExpr]) -> BoolExpr:
    out = terms[0]
    for t in terms[1:]:
        out = Or(out, t)
    return out


def from_truth_table(values, variables) -> BoolExpr:
    """Build a compact expression whose truth table over ``variables`` is ``values``.

    ``values[j]`` is the output for column ``j`` of the canonical ordering
    (first variable is the highest-order factor, value 1 before 0).  The
    result is a minimised sum of products.
    """
    from sympy import symbols
    from sympy.logic import SOPform
    from sympy.logic.boolalg import And as SAnd, Not as SNot, Or as SOr, BooleanTrue, BooleanFalse

    variables = list(variables)
    values = [bool(v) for v in values]
    k = len(variables)
    if len(values) != 2 ** k:
        raise ValueError("truth table length must be 2**len(variables)")
    if all(values):
        return TRUE
    if not any(values):
        return FALSE
    syms = symbols([f"v{i}" for i in range(k)]) if k > 1 else (symbols("v0"),)
    # sympy minterms use plain binary with the first symbol as the MSB and 1 meaning True
    minterms = []
    for j, val in enumerate(values):
        if val:
            minterms.append([1 - ((j >> (k - 1 - m)) & 1) for m in range(k)])
    sop = SOPform(list(syms), minterms)
    back = {s: Var(v) for s, v in zip(syms, variables)}

    def convert(node):
        if isinstance(node, BooleanTrue):
            return TRUE
        if isinstance(node, BooleanFalse):
            return FALSE
        if node in back:
            return back[node]
        if isinstance(node, SNot):
            return Not(convert(node.args[0]))
        args = sorted(node.args, key=str)
        if isinstance(node, SAnd):
            return _conj([convert(a) for a in args])
        if isinstance(node, SOr):
            return _disj([convert(a) for a in args])
        raise TypeError(f"unexpected sympy node {node!r}")

    return convert(sop)


def apply_table(table: tuple[int, int, int, int], a: BoolExpr, b: BoolExpr) -> BoolExpr:
    """Expression for ``a op b`` where ``op`` has structure matrix ``delta_2[table]``.

    Column order is (a,b) = (1,1), (1,0), (0,1), (0,0); entry 1 means true.
    """
    out = tuple(c == 1 for c in table)
    if all(out):
        return TRUE
    if not any(out):
        return FALSE
    known = {
        (True, True, False, False): lambda: a,
        (False, False, True, True): lambda: Not(a),
        (True, False, True, False): lambda: b,
        (False, True, False, True): lambda: Not(b),
        (True, False, False, False): lambda: And(a, b),
        (True, True, True, False): lambda: Or(a, b),
        (False, True, True, False): lambda: Xor(a, b),
        (True, False, False, True): lambda: Not(Xor(a, b)),
    }
    if out in known:
        return known[out]()
    terms = []
    for (va, vb), v in zip(((1, 1), (1, 0), (0, 1), (0, 0)), out):
        if v:
            terms.append(And(a if va else Not(a), b if vb else Not(b)))
    return _disj(terms)
