"""First-stage controller synthesis for pinned nodes.

A pinned node's expected dynamics ``L`` (inputs reordered so that kept
inputs come first and deleted inputs last) must be turned into target
dynamics ``T`` that ignore the deleted inputs.  A controller
``x+ = u (.) f`` with ``u = phi(x)`` realises ``T`` column by column:
``u`` picks one of two branches of ``(.)``, and each branch is one of the
four maps copy, force-true, negate, force-false applied to the column of
``L``.  Those four maps are the classes Omega1..Omega4 below.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import SynthesisError
from .pbnmodel import PbnNode, _project_columns, expected_matrix
from .stp import LogicalMatrix, Matrix

__all__ = [
    "Omega",
    "FAMILY_ORDER",
    "STEADY_FAMILY_ORDER",
    "SELECT_OPERATOR",
    "ReorderedDynamics",
    "TargetDynamics",
    "UniformController",
    "ModeController",
    "NonUniformController",
    "reorder_inputs",
    "classify_column",
    "find_cover",
    "solvable_uniform",
    "target_candidates",
    "choose_target",
    "synthesize_uniform",
    "synthesize_nonuniform",
    "uniform_controller",
    "node_dynamics",
    "controller_output",
    "verify_controller",
]


class Omega(IntEnum):
    COPY = 1
    FORCE_TRUE = 2
    NEGATE = 3
    FORCE_FALSE = 4

    def __str__(self) -> str:
        return f"Omega{self.value}"


# (output index when f = 1, output index when f = 0) for each branch map
_BRANCH = {
    Omega.COPY: (1, 2),
    Omega.FORCE_TRUE: (1, 1),
    Omega.NEGATE: (2, 1),
    Omega.FORCE_FALSE: (2, 2),
}

FAMILY_ORDER: tuple[tuple[Omega, ...], ...] = (
    (Omega.COPY,), (Omega.FORCE_TRUE,), (Omega.NEGATE,), (Omega.FORCE_FALSE,),
    (Omega.FORCE_TRUE, Omega.FORCE_FALSE),
    (Omega.COPY, Omega.FORCE_TRUE), (Omega.COPY, Omega.NEGATE), (Omega.COPY, Omega.FORCE_FALSE),
    (Omega.FORCE_TRUE, Omega.NEGATE), (Omega.NEGATE, Omega.FORCE_FALSE),
)
# constant targets are always met by a single forcing branch
STEADY_FAMILY_ORDER = (
    (Omega.FORCE_TRUE,), (Omega.FORCE_FALSE,),
) + tuple(f for f in FAMILY_ORDER if f not in ((Omega.FORCE_TRUE,), (Omega.FORCE_FALSE,)))

# u = 1 passes f through, u = 0 negates it
SELECT_OPERATOR = LogicalMatrix(2, (1, 2, 2, 1))

TRUE_COL = (Fraction(1), Fraction(0))
FALSE_COL = (Fraction(0), Fraction(1))


@dataclass(frozen=True)
class ReorderedDynamics:
    """``matrix`` is the node's dynamics with inputs ordered ``kept + deleted``."""

    node: int
    kept: tuple[int, ...]
    deleted: tuple[int, ...]
    matrix: Matrix
    perm: tuple[int, ...]  # new column k takes old column perm[k] (0-based)

    @property
    def order(self) -> tuple[int, ...]:
        return self.kept + self.deleted

    @property
    def block(self) -> int:
        return 2 ** len(self.deleted)


@dataclass(frozen=True)
class TargetDynamics:
    """``G`` over the kept inputs and its block replication ``T`` over all inputs."""

    G: Matrix
    T: Matrix
    frozen: tuple[int, ...]  # values assigned to the deleted inputs


@dataclass(frozen=True)
class UniformController:
    node: int
    m_odot: LogicalMatrix
    psi_hat: LogicalMatrix
    family: tuple[Omega, ...]
    input_order: tuple[int, ...]
    target: TargetDynamics


@dataclass(frozen=True)
class ModeController:
    candidate: int  # 0-based position in the node's active candidates
    m_odot: LogicalMatrix
    psi_hat: LogicalMatrix
    L: Matrix
    target: TargetDynamics


@dataclass(frozen=True)
class NonUniformController:
    node: int
    input_order: tuple[int, ...]
    modes: tuple[ModeController, ...]
    G: Matrix  # expectation of the per-mode targets over the kept inputs


def reorder_inputs(node: int, expected: Matrix, neighbors: Sequence[int],
                   deleted: Sequence[int]) -> ReorderedDynamics:
    """Permute columns so the input order becomes (kept ascending, deleted ascending)."""
    neighbors = list(neighbors)
    deleted = tuple(sorted(deleted))
    missing = [j for j in deleted if j not in neighbors]
    if missing:
        raise ValueError(f"deleted inputs {missing} are not inputs of node {node}")
    kept = tuple(j for j in neighbors if j not in deleted)
    perm = tuple(int(c) for c in _project_columns(neighbors, list(kept + deleted)))
    return ReorderedDynamics(node, kept, deleted, expected.permute_columns(perm), perm)


def classify_column(t: Sequence[Fraction], l: Sequence[Fraction]) -> frozenset[Omega]:
    t, l = tuple(t), tuple(l)
    out = set()
    if t == l:
        out.add(Omega.COPY)
    if t == TRUE_COL:
        out.add(Omega.FORCE_TRUE)
    if t == (l[1], l[0]):
        out.add(Omega.NEGATE)
    if t == FALSE_COL:
        out.add(Omega.FORCE_FALSE)
    return frozenset(out)


def _memberships(T: Matrix, L: Matrix) -> list[frozenset[Omega]]:
    if T.shape != L.shape or T.rows != 2:
        raise ValueError(f"T and L must both be 2 x m, got {T.shape} and {L.shape}")
    return [classify_column(T.col(j), L.col(j)) for j in range(1, T.cols + 1)]


def find_cover(T: Matrix, L: Matrix, order=FAMILY_ORDER) -> Optional[tuple[Omega, ...]]:
    """First family of at most two classes (in ``order``) that every column belongs to."""
    member = _memberships(T, L)
    for fam in order:
        if all(m & set(fam) for m in member):
            return fam
    return None


def solvable_uniform(T: Matrix, L: Matrix) -> bool:
    """Whether ``T`` is reachable by one controller valid for every mode."""
    return find_cover(T, L) is not None


def _kept_dependence(G: Matrix, n_kept: int) -> int:
    """Number of kept inputs the columns of ``G`` actually depend on."""
    cols = [G.col(j) for j in range(1, G.cols + 1)]
    count = 0
    for m in range(n_kept):
        stride = 1 << (n_kept - 1 - m)
        if any(cols[j] != cols[j + stride] for j in range(len(cols)) if not j & stride):
            count += 1
    return count


def target_candidates(L: ReorderedDynamics) -> list[TargetDynamics]:
    """Targets obtained by freezing the deleted inputs, all-false assignment first."""
    b = L.block
    nd = len(L.deleted)
    n_blocks = L.matrix.cols // b
    data = L.matrix.data
    out = []
    for pos in range(b - 1, -1, -1):
        frozen = tuple(1 - ((pos >> (nd - 1 - m)) & 1) for m in range(nd))
        g = data[:, [blk * b + pos for blk in range(n_blocks)]].copy()
        t = np.repeat(g, b, axis=1)
        out.append(TargetDynamics(Matrix._wrap(g), Matrix._wrap(t), frozen))
    return out


def choose_target(L: ReorderedDynamics, order=FAMILY_ORDER
                  ) -> Optional[tuple[TargetDynamics, tuple[Omega, ...]]]:
    """Pick a deterministic target reachable by a uniform controller.

    Among frozen-input targets that are logical and covered by at most two
    classes, the one depending on the most kept inputs wins; ties go to the
    earlier candidate.  ``None`` means no uniform controller exists for any
    frozen assignment.
    """
    best = None
    for td in target_candidates(L):
        if not td.T.is_logical():
            continue
        fam = find_cover(td.T, L.matrix, order)
        if fam is None:
            continue
        score = _kept_dependence(td.G, len(L.kept))
        if best is None or score > best[0]:
            best = (score, td, fam)
    return None if best is None else (best[1], best[2])


def controller_output(m_odot: LogicalMatrix, psi_col: int, l_col: Sequence[Fraction]) -> tuple[Fraction, Fraction]:
    """``M (.) psi_col (.) l_col`` for one column, evaluated exactly."""
    out = [Fraction(0), Fraction(0)]
    for f_idx, p in ((1, l_col[0]), (2, l_col[1])):
        if p:
            row = m_odot.cols[(psi_col - 1) * 2 + (f_idx - 1)]
            out[row - 1] += p
    return tuple(out)


def verify_controller(m_odot: LogicalMatrix, psi_hat: LogicalMatrix, L: Matrix, T: Matrix) -> bool:
    if psi_hat.n_cols != L.cols:
        return False
    return all(controller_output(m_odot, psi_hat.cols[j - 1], L.col(j)) == T.col(j)
               for j in range(1, L.cols + 1))


def _build(T: Matrix, L: Matrix, family: Sequence[Omega]) -> tuple[LogicalMatrix, LogicalMatrix]:
    first, second = family[0], family[-1]
    m_odot = LogicalMatrix(2, _BRANCH[first] + _BRANCH[second])
    psi = []
    for j, member in enumerate(_memberships(T, L), start=1):
        if first in member:
            psi.append(1)
        elif second in member:
            psi.append(2)
        else:
            raise SynthesisError(f"column {j} is not covered by {family}")
    psi_hat = LogicalMatrix(2, tuple(psi))
    if not verify_controller(m_odot, psi_hat, L, T):
        raise SynthesisError("synthesized controller does not reproduce its target")
    return m_odot, psi_hat


def synthesize_uniform(T: Matrix, L: Matrix, family: Sequence[Omega]) -> tuple[LogicalMatrix, LogicalMatrix]:
    """``(M_odot, Psi_hat)`` with ``M_odot Psi_hat (I (x) L) Phi = T``.

    Columns in the first class of ``family`` get ``u = 1`` and use the
    branch ``(alpha1, alpha2)``; the rest get ``u = 0`` and the branch
    ``(alpha3, alpha4)``.  A single-class family uses the same branch twice.
    """
    return _build(T, L, tuple(family))


def uniform_controller(L: ReorderedDynamics, order=FAMILY_ORDER) -> Optional[UniformController]:
    picked = choose_target(L, order)
    if picked is None:
        return None
    td, fam = picked
    m_odot, psi_hat = synthesize_uniform(td.T, L.matrix, fam)
    return UniformController(L.node, m_odot, psi_hat, fam, L.order, td)


def synthesize_nonuniform(node: PbnNode, deleted: Sequence[int]) -> NonUniformController:
    """One pass/negate controller per active candidate of ``node``."""
    neighbors = node.neighbors
    modes = []
    G_acc = None
    order = None
    for k, (cand, ext) in enumerate(zip(node.active, node.extended_matrices())):
        Lk = reorder_inputs(node.index, ext.to_matrix(), neighbors, deleted)
        order = Lk.order
        picked = choose_target(Lk)
        if picked is None:  # cannot happen for logical L; kept as a guard
            raise SynthesisError(f"no deterministic target for mode {k} of node {node.name}")
        td = picked[0]
        psi = tuple(1 if td.T.col(j) == Lk.matrix.col(j) else 2 for j in range(1, Lk.matrix.cols + 1))
        psi_hat = LogicalMatrix(2, psi)
        if not verify_controller(SELECT_OPERATOR, psi_hat, Lk.matrix, td.T):
            raise SynthesisError(f"mode {k} controller of node {node.name} failed verification")
        modes.append(ModeController(k, SELECT_OPERATOR, psi_hat, Lk.matrix, td))
        weighted = td.G.scale(cand.probability)
        G_acc = weighted if G_acc is None else G_acc + weighted
    if order is None:
        raise SynthesisError(f"node {node.name} has no active candidates")
    return NonUniformController(node.index, order, tuple(modes), G_acc)


def node_dynamics(node: PbnNode, deleted: Sequence[int]) -> ReorderedDynamics:
    return reorder_inputs(node.index, expected_matrix(node), node.neighbors, deleted)

