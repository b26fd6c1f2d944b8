"""Modifiers: measuring the conjugate after a linear map, e.g. deleting the
diagonal.

Membership now asks for a companion C (im C = ker Z, ker C = im Z) making
phi(Z A C) vanish.  Deleting the diagonal changes no verdicts; sparser
Hadamard patterns genuinely enlarge the bounded set, and the dividing line
is whether phi annihilates some nonzero square-zero matrix.
"""

import numpy as np

from conjlim import (
    Modifier,
    apply,
    ginibre,
    keeps_kernel_invariant,
    kernel_algebra_basis,
    nilpotent_faithful,
    nilpotent_faithful_randomized,
    random_singular,
    some_path_bounded,
)

np.set_printoptions(precision=3, suppress=True, linewidth=100)
rng = np.random.default_rng(3)

print("=== deleting the diagonal changes nothing ===")
matches = 0
for i in range(40):
    n = int(rng.integers(2, 6))
    z = random_singular(n, int(rng.integers(1, n)), rng)
    if i % 2 == 0:
        basis = kernel_algebra_basis(z)
        w = ginibre(len(basis), 1, rng).reshape(-1)
        a = sum(c * b for c, b in zip(w, basis))
    else:
        a = ginibre(n, rng=rng)
    under_j = some_path_bounded(a, z, Modifier.delete_diagonal(n), seed=i).member
    plain = keeps_kernel_invariant(a, z).member
    matches += int(under_j == plain)
print(f"delete-diagonal verdict == kernel criterion on {matches}/40 random pairs")

print("\n=== a sparse pattern where every matrix becomes bounded ===")
z = np.diag([1.0, 0.0, 0.0])
h = np.zeros((3, 3))
h[0, 2] = 1.0
phi = Modifier.hadamard(h)
print("base diag(1,0,0), Hadamard factor with a single 1 at (1,3):")
hits = sum(
    some_path_bounded(ginibre(3, rng=rng), z, phi, seed=s).member for s in range(40)
)
print(f"membership holds for {hits}/40 random matrices...")

print("...but every single companion is beaten by some matrix:")
kb = np.eye(3)[:, 1:]
for trial in range(3):
    x = ginibre(2, rng=rng)
    c = kb @ x @ kb.T
    a = ginibre(3, rng=rng)
    val = np.linalg.norm(apply(phi, z @ a @ c), 2)
    print(f"  companion #{trial}: random A gives ||phi(Z A C)|| = {val:.2e} != 0")

print("\n=== the faithfulness criterion ===")
print("a Hadamard modifier preserves all verdicts iff every off-diagonal")
print("entry of its factor is nonzero:\n")
for label, factor in [
    ("all-ones minus identity", np.ones((3, 3)) - np.eye(3)),
    ("single corner entry", h),
    ("dense random factor", ginibre(3, rng=rng)),
]:
    report = nilpotent_faithful(Modifier.hadamard(factor))
    print(f"  {label}: faithful = {report.faithful}")
    if report.counterexample is not None:
        t = report.counterexample
        print(f"    counterexample T (T^2 = 0, phi(T) = 0):")
        print("    " + str(t.real).replace("\n", "\n    "))

print("\nthe randomized falsifier reaches the same conclusions:")
for factor in [np.ones((3, 3)) - np.eye(3), h]:
    phi = Modifier.hadamard(factor)
    exact = nilpotent_faithful(phi).faithful
    sampled = nilpotent_faithful_randomized(phi, seed=0, trials=60).faithful
    print(f"  exact {exact} vs sampled {sampled}")
