from fractions import Fraction

import numpy as np
import pytest

from pbnpin.pinsynth import (FAMILY_ORDER, SELECT_OPERATOR, Omega, choose_target, classify_column,
                             controller_output, find_cover, node_dynamics, solvable_uniform,
                             synthesize_nonuniform, synthesize_uniform, target_candidates,
                             uniform_controller, verify_controller)
from pbnpin.stp import LogicalMatrix, Matrix
from pbnpin.wiring import build_wiring_digraph, compute_fas, pinning_partition

import gen

H = Fraction(1, 2)


def mat(cols):
    return Matrix(np.array(cols, dtype=object).T)


def test_classify_column():
    one, zero = (Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))
    assert classify_column(one, one) == {Omega.COPY, Omega.FORCE_TRUE}
    assert classify_column(one, zero) == {Omega.FORCE_TRUE, Omega.NEGATE}
    assert classify_column((H, H), (H, H)) == {Omega.COPY, Omega.NEGATE}
    assert classify_column(zero, (H, H)) == {Omega.FORCE_FALSE}
    assert classify_column((H, H), (Fraction(1, 3), Fraction(2, 3))) == frozenset()


def test_family_order_covers_all_pairs():
    singles = [f for f in FAMILY_ORDER if len(f) == 1]
    pairs = {frozenset(f) for f in FAMILY_ORDER if len(f) == 2}
    assert len(singles) == 4 and len(pairs) == 6


def test_cover_examples():
    L = mat([(1, 0), (0, 1), (H, H)])
    assert find_cover(mat([(0, 1), (0, 1), (0, 1)]), L) == (Omega.FORCE_FALSE,)
    assert find_cover(mat([(1, 0), (0, 1), (H, H)]), L) == (Omega.COPY,)
    assert find_cover(mat([(1, 0), (0, 1), (1, 0)]), L) is not None
    # three columns needing force-true, force-false and copy/negate respectively
    assert not solvable_uniform(mat([(1, 0), (0, 1), (H, H)]), mat([(H, H), (H, H), (H, H)]))


def test_uniform_solvability_matches_brute_force():
    rng = np.random.default_rng(7)
    for _ in range(150):
        k = int(rng.integers(0, 3))
        m = 2 ** k
        L_cols = gen.random_stochastic_columns(rng, m)
        T_cols = gen.random_target_columns(rng, L_cols)
        L, T = mat(L_cols), mat(T_cols)
        expected = gen.brute_force_solvable(T_cols, L_cols)
        assert solvable_uniform(T, L) == expected
        if expected:
            m_odot, psi = synthesize_uniform(T, L, find_cover(T, L))
            assert verify_controller(m_odot, psi, L, T)


def test_controller_output_is_stp_product():
    # M (x) psi (x) L column evaluated via dense products
    from pbnpin.stp import kron
    m_odot = LogicalMatrix(2, (1, 2, 2, 2))
    l_col = (Fraction(1, 3), Fraction(2, 3))
    for u in (1, 2):
        dense = m_odot.to_matrix() @ kron(LogicalMatrix(2, (u,)).to_matrix(), Matrix([[l_col[0]], [l_col[1]]]))
        assert controller_output(m_odot, u, l_col) == dense.col(1)


def test_target_candidates_freeze_deleted_inputs(cell_cycle):
    L = node_dynamics(cell_cycle.node("Cdc20"), [9])
    cands = target_candidates(L)
    assert [td.frozen for td in cands] == [(0,), (1,)]
    assert cands[0].G == LogicalMatrix(2, (2,))  # Cdc20 = CycB, frozen false


@pytest.fixture(scope="module")
def plan(cell_cycle, cell_cycle_fas):
    g = build_wiring_digraph(cell_cycle)
    return pinning_partition(cell_cycle, compute_fas(g, "user_supplied", edges=cell_cycle_fas))


def _dyn(model, plan, i):
    return node_dynamics(model.node(i), plan.deleted[i])


def test_node1_needs_per_mode_control(cell_cycle, plan):
    L = _dyn(cell_cycle, plan, 1)
    assert uniform_controller(L) is None
    assert choose_target(L) is None
    nu = synthesize_nonuniform(cell_cycle.node(1), plan.deleted[1])
    targets = [mc.target.T for mc in nu.modes]
    assert targets[0] == LogicalMatrix(2, (2, 2, 1, 1) + (2,) * 6 + (1, 1, 2, 2, 1, 1))
    assert targets[1] == LogicalMatrix(2, (2,) * 10 + (1, 1, 2, 2, 1, 1))
    assert targets[2] == LogicalMatrix(2, (2,) * 16)
    for mc in nu.modes:
        assert mc.m_odot == SELECT_OPERATOR
        assert verify_controller(mc.m_odot, mc.psi_hat, mc.L, mc.target.T)
    row0 = list(nu.G.data[0])
    assert row0 == [0, Fraction(99, 100), 0, 0, 0, Fraction(199, 200), 0, Fraction(199, 200)]


@pytest.mark.parametrize("i, m_odot, psi", [
    (4, (1, 1, 2, 2), (2,) * 32 + (1,) * 32),
    (5, (1, 1, 2, 2), (2,) * 12 + (1,) * 4),
    (6, (2, 2, 2, 2), (1, 1)),
    (8, (1, 1, 2, 2), (1,) * 26 + (2, 2) + (1,) * 4),
    (9, (1, 1, 2, 2), (2, 2, 1, 1)),
])
def test_uniform_controllers_cell_cycle(cell_cycle, plan, i, m_odot, psi):
    c = uniform_controller(_dyn(cell_cycle, plan, i))
    assert c is not None
    assert c.m_odot == LogicalMatrix(2, m_odot)
    assert c.psi_hat == LogicalMatrix(2, psi)
    assert verify_controller(c.m_odot, c.psi_hat, _dyn(cell_cycle, plan, i).matrix, c.target.T)


def test_target_dynamics_cell_cycle(cell_cycle, plan):
    G = {i: uniform_controller(_dyn(cell_cycle, plan, i)).target.G for i in (4, 5, 6, 8, 9)}
    assert G[4] == LogicalMatrix(2, (2, 1))
    assert G[5] == LogicalMatrix(2, (2, 2, 2, 1))
    assert G[6] == LogicalMatrix(2, (2,))
    assert G[8] == LogicalMatrix(2, (1,) * 13 + (2, 1, 1))
    assert G[9] == LogicalMatrix(2, (2, 1))


def test_nonuniform_on_random_nodes():
    rng = np.random.default_rng(4)
    for _ in range(30):
        m = gen.random_pbn(rng, 4, max_candidates=3)
        for node in m.nodes:
            if not node.neighbors:
                continue
            deleted = [node.neighbors[-1]]
            nu = synthesize_nonuniform(node, deleted)
            assert len(nu.modes) == len(node.active)
            assert nu.G.is_stochastic()
