"""Paths of invertibles whose inverses have a simple pole.

Every square complex matrix Z is the limit of a linear path Z + tE whose
inverse is exactly C/t + C0.  The pole coefficient C is characterized by
im(C) = ker(Z) and ker(C) = im(Z), satisfies ZC = CZ = 0, and swapping the
roles of path and inverse gives a dual path converging to C.
"""

import numpy as np

from conjlim import (
    NotAGoodPathError,
    construct_good_path,
    dual_path,
    ginibre,
    is_pole_coefficient,
    laurent_inverse,
    polar_factors,
    random_singular,
    rigidity_index,
)

np.set_printoptions(precision=3, suppress=True, linewidth=100)
rng = np.random.default_rng(1)

print("=== construction through the polar factorization ===")
z = random_singular(4, 2, rng)
f = polar_factors(z)
print(f"Z = U R with U unitary, R = sqrt(Z^H Z) PSD")
print(f"  ||U R - Z||     = {np.linalg.norm(f.unitary @ f.root - z, 2):.2e}")
print(f"  ||U^H U - I||   = {np.linalg.norm(f.unitary.conj().T @ f.unitary - np.eye(4), 2):.2e}")

gp = construct_good_path(z, order=8)
print("\nlinear path Z + tE with exact simple-pole inverse C/t + C0:")
print(f"  coefficient residuals through order 8: {gp.product_residuals().max():.2e}")
print(f"  ||Z C|| and ||C Z||:                   {gp.annihilation_residual():.2e}")
print(f"  im(C) = ker(Z), ker(C) = im(Z):        {is_pole_coefficient(gp.inverse_pole, z)}")

print("\n=== solving for the Laurent coefficients of a given path ===")
pole, series = laurent_inverse(z, gp.path_coeffs, order=4)
print(f"round trip reproduces the stored pole: {np.linalg.norm(pole - gp.inverse_pole, 2):.2e}")

print("\nan antidiagonal perturbation of diag(1,0) has a second-order pole:")
bad_e = np.array([[0.0, 1.0], [1.0, 0.0]])
try:
    laurent_inverse(np.diag([1.0, 0.0]), [bad_e], order=4)
except NotAGoodPathError as exc:
    print(f"  rejected: {exc}")

print("\nan invertible base point needs no pole at all:")
z_inv = np.eye(3) + 0.1 * ginibre(3, rng=rng)
pole, series = laurent_inverse(z_inv, [ginibre(3, rng=rng)], order=3)
print(f"  ||pole|| = {np.linalg.norm(pole, 2):.2e} "
      f"(series starts at the plain inverse, ||C0 - Z^-1|| = "
      f"{np.linalg.norm(series[0] - np.linalg.inv(z_inv), 2):.2e})")

print("\n=== duality ===")
dual = dual_path(construct_good_path(np.diag([1.0, 0.0]), order=3))
print("dual of the path to diag(1,0) converges to diag(0,1):")
print(dual.base.real)
print(f"with the original base as its pole: ||pole - diag(1,0)|| = "
      f"{np.linalg.norm(dual.inverse_pole - np.diag([1.0, 0.0]), 2):.2e}")
dual.validate()
print("dual path passes the full identity validation")

print("\n=== rigidity of the coefficient kernels ===")
print(f"constructed paths always kill the kernel at first order: index = "
      f"{rigidity_index(gp.base, gp.path_coeffs)}")
held = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
print(f"a padded list that holds the kernel one step longer: index = "
      f"{rigidity_index(np.diag([1.0, 0.0]), held)}")
