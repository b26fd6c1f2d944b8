"""Which matrices stay bounded under conjugation toward a singular base?

Walks through the kernel criterion: conjugates U A U^{-1} stay bounded along
some path of invertibles U -> Z exactly when A maps ker(Z) into itself.  The
matrices doing so form an algebra whose dimension depends only on rank(Z).
"""

import numpy as np

from conjlim import (
    divergence_certified,
    ginibre,
    keeps_kernel_invariant,
    kernel_algebra_basis,
    kernel_algebra_dim,
    random_singular,
)

np.set_printoptions(precision=3, suppress=True, linewidth=100)

print("=== the kernel criterion ===")
z = np.diag([1.0, 0.0, 0.0])
print("base point Z = diag(1, 0, 0), kernel spanned by e2, e3\n")

member = np.array([[2.0, 0.0, 0.0], [5.0, 1.0, 3.0], [1.0, 0.0, 4.0]])
print("A with zero top-right block:")
print(member)
verdict = keeps_kernel_invariant(member, z)
print(f"keeps kernel invariant: {verdict.member} (residual {verdict.residual:.2e})\n")

violator = np.zeros((3, 3))
violator[0, 1] = 1.0
print("A = unit matrix at (1,2):")
verdict = keeps_kernel_invariant(violator, z)
print(f"keeps kernel invariant: {verdict.member}")
print(f"witness kernel vector:  {verdict.witness.real}")
print(f"certified divergent along every path: {divergence_certified(violator, z)}\n")

print("=== the invariance algebra and its dimension ===")
print("rank m in dimension n gives dimension n^2 - m*n + m^2:")
for n, m in [(2, 1), (3, 1), (4, 2), (6, 3)]:
    print(f"  n={n}, m={m}: {kernel_algebra_dim(n, m)}")

print("\nthe explicit basis for a random rank-2 base in dimension 4:")
rng = np.random.default_rng(0)
z4 = random_singular(4, 2, rng)
basis = kernel_algebra_basis(z4)
print(f"  {len(basis)} basis matrices, expected {kernel_algebra_dim(4, 2)}")
print(f"  all pass the membership test: "
      f"{all(keeps_kernel_invariant(b, z4).member for b in basis)}")

print("\nthe algebra is closed under products and combinations:")
coeff = ginibre(len(basis), 1, rng).reshape(-1)
a = sum(c * b for c, b in zip(coeff, basis))
coeff = ginibre(len(basis), 1, rng).reshape(-1)
b = sum(c * bb for c, bb in zip(coeff, basis))
print(f"  A*B member:     {keeps_kernel_invariant(a @ b, z4).member}")
print(f"  2A - 3B member: {keeps_kernel_invariant(2 * a - 3 * b, z4).member}")

print("\na generic matrix almost surely violates the criterion:")
generic = ginibre(4, rng=rng)
print(f"  generic member: {keeps_kernel_invariant(generic, z4).member}")
