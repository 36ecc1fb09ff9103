"""A short tour of the semi-tensor product on logical vectors.

Truth values are unit vectors (true = [1, 0], false = [0, 1]) and a
Boolean function is a logical matrix applied by STP.  Everything is exact.

Run:  python3 demos/stp_algebra_tour.py
"""

from pbnpin.boolexpr import And, Or, Var, Not
from pbnpin.pbnmodel import structure_matrix
from pbnpin.stp import delta, khatri_rao, kron, power_reducing_matrix, stp, stp_chain, swap_matrix

T, F = delta(2, 1), delta(2, 2)

f = Or(And(Var(1), Not(Var(2))), Var(3))
H = structure_matrix(f, [1, 2, 3])
print(f"x1 & !x2 | x3 has structure matrix {H}")
for x in [(1, 0, 0), (0, 1, 0), (0, 0, 1)]:
    vec = stp_chain([H] + [T if v else F for v in x])
    print(f"  f{x} = {1 if vec == T else 0}")

print()
print("swapping factors: W[2,2] x y = y x")
W = swap_matrix(2, 2)
print(f"  W[2,2] = {W}")
print(f"  W true false == false true: {stp_chain([W, T, F]) == stp(F, T)}")

print()
print("squaring a state: x x = Phi x")
Phi = power_reducing_matrix(2)
x = delta(4, 3)
print(f"  Phi_2 = {Phi}")
print(f"  Phi_2 delta4^3 == delta4^3 (x) delta4^3: {Phi.to_matrix() @ x == kron(x, x)}")

print()
print("joint next-state distribution from per-gene distributions (Khatri-Rao):")
A = structure_matrix(Var(2), [1, 2]).to_matrix()
B = structure_matrix(And(Var(1), Var(2)), [1, 2]).to_matrix()
print(f"  columns of A*B: {khatri_rao(A, B).to_logical()}")
