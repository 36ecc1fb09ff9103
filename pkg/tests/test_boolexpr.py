from itertools import product

import numpy as np
from hypothesis import given, settings, strategies as st

from pbnpin.boolexpr import FALSE, TRUE, And, Not, Or, Var, Xor, apply_table, from_truth_table, render
from pbnpin.pbnmodel import assignment_table

import gen


def table(expr, variables):
    t = assignment_table(len(variables))
    env = {v: t[:, m] for m, v in enumerate(variables)}
    return list(np.broadcast_to(expr.evaluate(env), (2 ** len(variables),)))


def test_evaluate_scalar_semantics():
    e = Or(And(Var(1), Not(Var(2))), Xor(Var(2), Var(3)))
    for a, b, c in product([False, True], repeat=3):
        env = {1: np.array(a), 2: np.array(b), 3: np.array(c)}
        assert bool(e.evaluate(env)) == ((a and not b) or (b != c))


def test_render_minimal_parentheses():
    e = Or(And(Var(1), Not(Var(2))), Var(3))
    assert render(e) == "x1 & !x2 | x3"
    assert render(And(Or(Var(1), Var(2)), Var(3))) == "(x1 | x2) & x3"
    assert render(Not(And(Var(1), Var(2)))) == "!(x1 & x2)"
    assert render(Xor(Var(1), And(Var(2), Var(3)))) == "x1 ^ x2 & x3"


def test_substitute():
    e = And(Var(1), Var(2)).substitute({2: Not(Var(3))})
    assert e.variables() == {1, 3}


def test_apply_table_known_operators():
    a, b = Var(1), Var(2)
    ops = {(1, 2, 2, 2): lambda x, y: x and y, (1, 1, 1, 2): lambda x, y: x or y,
           (2, 1, 1, 2): lambda x, y: x != y, (1, 2, 2, 1): lambda x, y: x == y,
           (1, 1, 2, 2): lambda x, y: x, (2, 1, 2, 1): lambda x, y: not y,
           (1, 2, 1, 1): lambda x, y: (not x) or y, (2, 2, 2, 2): lambda x, y: False}
    for tab, fn in ops.items():
        e = apply_table(tab, a, b)
        assert table(e, [1, 2]) == [fn(x, y) for x, y in ((True, True), (True, False), (False, True), (False, False))]


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 4).flatmap(lambda k: st.tuples(st.just(k), st.lists(st.booleans(), min_size=2 ** k, max_size=2 ** k))))
def test_from_truth_table_round_trip(arg):
    k, values = arg
    variables = [2 * m + 3 for m in range(k)]
    e = from_truth_table(values, variables)
    assert e.variables() <= set(variables)
    assert [bool(v) for v in table(e, variables)] == values


def test_from_truth_table_constants():
    assert from_truth_table([True, True], [4]) == TRUE
    assert from_truth_table([False] * 4, [1, 2]) == FALSE


def test_random_expressions_render_round_trip():
    from pbnpin.netparse import parse
    rng = np.random.default_rng(5)
    for _ in range(50):
        e = gen.random_expr(rng, [1, 2, 3], depth=3)
        src = f"node a {{ 1: {render(e, lambda i: 'abc'[i - 1])} }} node b {{ 1: b }} node c {{ 1: c }}"
        back = parse(src).nodes[0].candidates[0].expr
        assert table(back, [1, 2, 3]) == table(e, [1, 2, 3])
