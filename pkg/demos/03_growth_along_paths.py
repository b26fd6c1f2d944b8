"""Measuring conjugation growth numerically and exactly.

Samples ||U(t) A U(t)^{-1}|| over a logarithmic grid, fits the growth
exponent alpha of t^{-alpha}, and cross-checks the fitted verdict against
the exact polynomial test that compares the lowest t-degrees of
U(t) A adj(U(t)) and det(U(t)).
"""

import numpy as np

from conjlim import (
    MatrixPath,
    construct_good_path,
    ginibre,
    kernel_algebra_basis,
    polynomial_growth_degrees,
    polynomial_path_bounded,
    random_singular,
    simulate,
)

np.set_printoptions(precision=3, suppress=True, linewidth=100)

print("=== closed-form sanity checks along diag(1, t) ===")
z = np.diag([1.0, 0.0])
e = np.diag([0.0, 1.0])
path = MatrixPath.linear(z, e)

for label, a in [
    ("unit at (1,2)  -> conjugate [[0, 1/t], [0, 0]]", np.array([[0.0, 1.0], [0.0, 0.0]])),
    ("unit at (2,1)  -> conjugate [[0, 0], [t, 0]]", np.array([[0.0, 0.0], [1.0, 0.0]])),
    ("identity       -> constant", np.eye(2)),
]:
    report = simulate(path, a)
    print(f"{label}")
    print(f"    alpha = {report.alpha:+.3f}, r2 = {report.r2:.3f}, verdict = {report.verdict}")

print("\nsampled norms of the divergent case (smallest decade):")
report = simulate(path, np.array([[0.0, 1.0], [0.0, 0.0]]))
for t, v in list(zip(report.t_values, report.norms))[-6:]:
    print(f"    t = {t:.2e}   norm = {v:.2e}")

print("\n=== exact polynomial test vs the fitted verdict ===")
deg_p, deg_d = polynomial_growth_degrees(z, [e], np.array([[0.0, 1.0], [0.0, 0.0]]))
print(f"divergent case: lowest degree of U A adj(U) is {deg_p}, of det(U) is {deg_d}")
deg_p, deg_d = polynomial_growth_degrees(z, [e], np.array([[0.0, 0.0], [1.0, 0.0]]))
print(f"bounded case:   lowest degree of U A adj(U) is {deg_p}, of det(U) is {deg_d}")

rng = np.random.default_rng(2)
agree = 0
total = 0
for i in range(40):
    n = int(rng.integers(2, 5))
    zz = random_singular(n, int(rng.integers(1, n)), rng)
    coeffs = [ginibre(n, rng=rng) for _ in range(int(rng.integers(1, 3)))]
    if i % 2 == 0:
        basis = kernel_algebra_basis(zz)
        w = ginibre(len(basis), 1, rng).reshape(-1)
        a = sum(c * b for c, b in zip(w, basis))
    else:
        a = ginibre(n, rng=rng)
    exact = polynomial_path_bounded(zz, coeffs, a)
    fitted = simulate(MatrixPath.polynomial(zz, coeffs), a)
    if fitted.verdict != "inconclusive":
        total += 1
        agree += int(exact == (fitted.verdict == "bounded"))
print(f"\nrandom degree-<=2 paths: exact and fitted verdicts agree on {agree}/{total}")

print("\n=== the dichotomy along constructed paths ===")
zz = random_singular(4, 2, rng)
gp = construct_good_path(zz, order=2)
basis = kernel_algebra_basis(zz)
w = ginibre(len(basis), 1, rng).reshape(-1)
member = sum(c * b for c, b in zip(w, basis))
generic = ginibre(4, rng=rng)
for label, a in [("kernel-invariant member", member), ("generic matrix", generic)]:
    report = simulate(MatrixPath.from_good_path(gp), a)
    print(f"{label}: alpha = {report.alpha:+.3f} -> {report.verdict}")
