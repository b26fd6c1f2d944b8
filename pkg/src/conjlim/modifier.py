"""Modifiers: bounded linear maps applied to a conjugate before measuring its
norm, and the machinery that decides boundedness questions under them.

Three kinds are supported: the identity, Hadamard (entrywise) multiplication
by a fixed matrix H, and a general linear map given by an n^2 x n^2 matrix
acting on column-stacked matrices.  Deleting the diagonal is the Hadamard
modifier with the all-ones-off-diagonal matrix and plays a special role: it
changes no boundedness verdicts.

The central decision procedure is :func:`some_path_bounded`: whether some
path of invertibles converging to Z keeps ``phi(U A U^{-1})`` bounded.  This
holds iff some C with ``im(C) = ker(Z)`` and ``ker(C) = im(Z)`` satisfies
``phi(Z A C) = 0``.  Writing ``C = K X L^H`` with K, L orthonormal bases of
``ker(Z)`` and ``im(Z)^perp`` reduces the question to whether a computed
linear solution space of k x k matrices contains an invertible element,
which is decided by seeded random sampling (a random element of a subspace
containing an invertible one is invertible with probability 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from .criteria import MembershipVerdict
from .numkit import (
    DEFAULT_TOL,
    ConjlimError,
    InvalidInputError,
    Tolerance,
    as_square,
    ginibre,
    kernel_basis,
    operator_norm,
    random_unitary,
)

__all__ = [
    "Modifier",
    "apply",
    "CertificateError",
    "ConjugationFamilyError",
    "some_path_bounded",
    "some_path_bounded_dual",
    "FaithfulnessReport",
    "nilpotent_faithful",
    "nilpotent_faithful_randomized",
    "GershgorinRegion",
    "gershgorin_region",
    "DiagonalBoundCertificate",
    "diagonal_bound_certificate",
    "ConjugationBoundReport",
    "conjugation_family_bound",
]

#: Invertibility threshold for sampled elements of the solution space:
#: smallest singular value must exceed this times the largest.
INVERTIBILITY_REL = 1e-8

#: Default number of random draws before declaring the solution space free
#: of invertible elements.
DEFAULT_DRAWS = 16


class CertificateError(ConjlimError):
    """A quantitative certificate inequality failed on the given input."""


class ConjugationFamilyError(ConjlimError):
    """The supplied matrices are not mutually similar within tolerance."""


@dataclass(frozen=True)
class Modifier:
    """A bounded linear map on n x n matrices.

    ``kind`` is one of ``"identity"``, ``"hadamard"`` (entrywise product
    with ``data``), or ``"general"`` (``data`` is n^2 x n^2 and acts on
    column-stacked matrices).
    """

    kind: str
    dim: int
    data: np.ndarray | None = field(default=None)

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidInputError(f"modifier dimension must be positive, got {self.dim}")
        n = self.dim
        if self.kind == "identity":
            if self.data is not None:
                raise InvalidInputError("identity modifier carries no data")
        elif self.kind == "hadamard":
            h = as_square(self.data, "hadamard factor")
            if h.shape != (n, n):
                raise InvalidInputError(f"hadamard factor must be {n}x{n}, got {h.shape}")
            object.__setattr__(self, "data", h)
        elif self.kind == "general":
            l = as_square(self.data, "modifier matrix")
            if l.shape != (n * n, n * n):
                raise InvalidInputError(
                    f"general modifier must be {n * n}x{n * n}, got {l.shape}"
                )
            object.__setattr__(self, "data", l)
        else:
            raise InvalidInputError(f"unknown modifier kind {self.kind!r}")

    @staticmethod
    def identity(n: int) -> "Modifier":
        return Modifier("identity", n)

    @staticmethod
    def hadamard(h) -> "Modifier":
        h = as_square(h, "hadamard factor")
        return Modifier("hadamard", h.shape[0], h)

    @staticmethod
    def general(l) -> "Modifier":
        l = as_square(l, "modifier matrix")
        n = int(round(np.sqrt(l.shape[0])))
        if n * n != l.shape[0]:
            raise InvalidInputError("general modifier size must be a perfect square")
        return Modifier("general", n, l)

    @staticmethod
    def delete_diagonal(n: int) -> "Modifier":
        """Hadamard modifier that zeroes the diagonal and keeps the rest."""
        return Modifier.hadamard(np.ones((n, n)) - np.eye(n))

    def __call__(self, a) -> np.ndarray:
        return apply(self, a)

    def as_operator(self) -> np.ndarray:
        """Matrix of the modifier on column-stacked n x n matrices."""
        n = self.dim
        if self.kind == "identity":
            return np.eye(n * n, dtype=np.complex128)
        if self.kind == "hadamard":
            return np.diag(self.data.reshape(-1, order="F"))
        return self.data.copy()

    def norm_scale(self) -> float:
        """Operator-norm bound used when scaling residual thresholds."""
        if self.kind == "identity":
            return 1.0
        if self.kind == "hadamard":
            return max(1.0, float(np.abs(self.data).max()))
        return max(1.0, operator_norm(self.data))


def apply(phi: Modifier, a) -> np.ndarray:
    """Apply the modifier: identity, entrywise product, or vectorized map."""
    m = as_square(a, "A")
    if m.shape[0] != phi.dim:
        raise InvalidInputError(
            f"modifier dimension {phi.dim} does not match matrix {m.shape}"
        )
    if phi.kind == "identity":
        return m.copy()
    if phi.kind == "hadamard":
        return phi.data * m
    vec = m.reshape(-1, order="F")
    return (phi.data @ vec).reshape((phi.dim, phi.dim), order="F")


def _pole_factor_bases(Z: np.ndarray, tol: Tolerance):
    """Orthonormal bases K of ker(Z) and L of im(Z)^perp = ker(Z^H).

    Every C with im(C) = ker(Z), ker(C) = im(Z) is K X L^H, X invertible.
    """
    k_basis = kernel_basis(Z, tol).basis
    l_basis = kernel_basis(Z.conj().T, tol).basis
    return k_basis, l_basis


def _membership_existential(
    a, z, phi: Modifier, tol: Tolerance, seed, draws: int, dual: bool
) -> MembershipVerdict:
    A = as_square(a, "A")
    Z = as_square(z, "Z")
    if A.shape != Z.shape:
        raise InvalidInputError(f"size mismatch: A is {A.shape}, Z is {Z.shape}")
    n = Z.shape[0]
    if phi.dim != n:
        raise InvalidInputError("modifier dimension does not match the matrices")
    kb, lb = _pole_factor_bases(Z, tol)
    k = kb.shape[1]
    threshold = tol.residual_scale(
        operator_norm(Z) * operator_norm(A)
    ) * phi.norm_scale()
    if k == 0:
        # invertible base point: C = 0 is the unique admissible companion
        return MembershipVerdict(True, 0.0, np.zeros((n, n), dtype=np.complex128), threshold)

    phi_op = phi.as_operator()
    if dual:
        constraint = phi_op @ np.kron((lb.conj().T @ A @ Z).T, kb)
    else:
        constraint = phi_op @ np.kron(lb.conj(), Z @ A @ kb)

    _, s, vh = np.linalg.svd(constraint, full_matrices=True)
    null_mask = np.ones(k * k, dtype=bool)
    null_mask[: s.size] = s <= threshold
    null_vecs = vh[null_mask].conj().T  # (k^2, d)
    d = null_vecs.shape[1]
    if d == 0:
        return MembershipVerdict(
            False, 0.0, np.zeros((n, n), dtype=np.complex128), threshold
        )

    rng = np.random.default_rng(seed)
    best_margin = -1.0
    best_x = None
    for _ in range(draws):
        coeff = ginibre(d, 1, rng).reshape(-1)
        x = (null_vecs @ coeff).reshape((k, k), order="F")
        sv = np.linalg.svd(x, compute_uv=False)
        if sv[0] <= 0.0:
            continue
        margin = float(sv[-1] / sv[0])
        if margin > best_margin:
            best_margin = margin
            best_x = x
        if sv[-1] > INVERTIBILITY_REL * sv[0]:
            companion = kb @ x @ lb.conj().T
            product = (companion @ A @ Z) if dual else (Z @ A @ companion)
            residual = float(np.linalg.norm(apply(phi, product), 2))
            return MembershipVerdict(True, residual, companion, threshold)
    witness = kb @ best_x @ lb.conj().T if best_x is not None else np.zeros((n, n))
    return MembershipVerdict(False, best_margin, witness, threshold)


def some_path_bounded(
    a, z, phi: Modifier, tol: Tolerance = DEFAULT_TOL, *, seed, draws: int = DEFAULT_DRAWS
) -> MembershipVerdict:
    """Does some path of invertibles ``U -> Z`` keep ``phi(U A U^{-1})``
    bounded?

    Equivalent to the existence of a companion ``C = K X L^H`` (X invertible)
    with ``phi(Z A C) = 0``.  The verdict's witness is the companion found on
    success; on failure it is the most-invertible candidate sampled, with
    ``residual`` holding its relative invertibility margin.  A false verdict
    is correct with probability 1; seeds make it reproducible.
    """
    return _membership_existential(a, z, phi, tol, seed, draws, dual=False)


def some_path_bounded_dual(
    a, z, phi: Modifier, tol: Tolerance = DEFAULT_TOL, *, seed, draws: int = DEFAULT_DRAWS
) -> MembershipVerdict:
    """Mirror of :func:`some_path_bounded` for ``phi(U^{-1} A U)``, i.e.
    existence of a companion with ``phi(C A Z) = 0``."""
    return _membership_existential(a, z, phi, tol, seed, draws, dual=True)


@dataclass(frozen=True)
class FaithfulnessReport:
    """Whether the modifier is nonzero on every nonzero T with T^2 = 0.

    ``exact`` records whether the conclusion came from the closed-form
    criterion (identity and Hadamard kinds) or from the randomized falsifier
    (general kind), whose positive answer is only probabilistic.
    """

    faithful: bool
    counterexample: np.ndarray | None
    exact: bool


def _elementary(n: int, i: int, j: int) -> np.ndarray:
    e = np.zeros((n, n), dtype=np.complex128)
    e[i, j] = 1.0
    return e


def nilpotent_faithful(
    phi: Modifier, tol: Tolerance = DEFAULT_TOL, *, seed: int = 0, trials: int = 200
) -> FaithfulnessReport:
    """Decide whether ``phi(T) = 0`` forces ``T = 0`` among T with T^2 = 0.

    This property characterizes the modifiers that change no boundedness
    verdict.  For Hadamard modifiers it is exact: it holds iff every
    off-diagonal entry of H is nonzero, and a zero entry at (i, j) yields
    the counterexample E_ij.  General modifiers fall back on the randomized
    falsifier.
    """
    if phi.kind == "identity":
        return FaithfulnessReport(True, None, True)
    if phi.kind == "hadamard":
        n = phi.dim
        for i in range(n):
            for j in range(n):
                if i != j and phi.data[i, j] == 0:
                    return FaithfulnessReport(False, _elementary(n, i, j), True)
        return FaithfulnessReport(True, None, True)
    return nilpotent_faithful_randomized(phi, tol, seed=seed, trials=trials)


def nilpotent_faithful_randomized(
    phi: Modifier, tol: Tolerance = DEFAULT_TOL, *, seed: int = 0, trials: int = 200
) -> FaithfulnessReport:
    """Randomized falsifier usable for any modifier kind.

    Samples square-zero candidates T (elementary off-diagonal units, rotated
    rank-one units x y^H with x perpendicular to y, and random block products
    W1 Y W2^H over orthogonal frames) and reports the first nonzero T with
    ``phi(T) = 0``.  A ``faithful=True`` answer is probabilistic.
    """
    n = phi.dim
    rng = np.random.default_rng(seed)
    scale = phi.norm_scale()

    def falsifies(t: np.ndarray) -> bool:
        tn = operator_norm(t)
        if tn <= 0.0:
            return False
        return float(np.linalg.norm(apply(phi, t), 2)) <= tol.residual_scale(scale * tn)

    for i in range(n):
        for j in range(n):
            if i != j:
                t = _elementary(n, i, j)
                if falsifies(t):
                    return FaithfulnessReport(False, t, False)
    for _ in range(trials):
        if n >= 2 and rng.uniform() < 0.5:
            q = random_unitary(n, rng)
            t = np.outer(q[:, 0], q[:, 1].conj())
        else:
            q = random_unitary(n, rng)
            j = int(rng.integers(1, max(2, n // 2 + 1))) if n >= 2 else 1
            j = min(j, n - j) if n >= 2 else 0
            if j < 1:
                continue
            y = ginibre(j, j, rng)
            t = q[:, :j] @ y @ q[:, j : 2 * j].conj().T
        if falsifies(t):
            return FaithfulnessReport(False, t, False)
    return FaithfulnessReport(True, None, False)


@dataclass(frozen=True)
class GershgorinRegion:
    """Disk centers (diagonal entries) and radii (off-diagonal row sums)."""

    centers: np.ndarray
    radii: np.ndarray

    def contains(self, values, margin: float = 0.0) -> bool:
        """True iff every value lies in the union of the disks (inflated by
        ``margin``)."""
        vals = np.atleast_1d(np.asarray(values, dtype=np.complex128))
        dist = np.abs(vals[:, None] - self.centers[None, :]) - self.radii[None, :]
        return bool(np.all(dist.min(axis=1) <= margin))


def gershgorin_region(a) -> GershgorinRegion:
    """Eigenvalue-localizing disks: centers ``a_ii`` and radii
    ``R_i = sum_{j != i} |a_ij|``."""
    m = as_square(a, "A")
    centers = np.diagonal(m).copy()
    radii = np.abs(m).sum(axis=1) - np.abs(centers)
    return GershgorinRegion(centers=centers, radii=np.asarray(radii, dtype=float))


@dataclass(frozen=True)
class DiagonalBoundCertificate:
    """Constituents of ``sum_i |a_ii| <= 2 sum_j R_j + sum_i |lambda_i|``."""

    diag_sum: float
    radii_sum: float
    eigenvalue_sum: float

    @property
    def bound(self) -> float:
        return 2.0 * self.radii_sum + self.eigenvalue_sum


def diagonal_bound_certificate(a) -> DiagonalBoundCertificate:
    """Certificate controlling the diagonal by the off-diagonal mass plus the
    spectrum: checks ``sum_i |a_ii| <= 2 sum_j R_j + sum_i |lambda_i|``.

    Diagonal matrices realize it with equality.  Raises
    :class:`CertificateError` if the inequality fails on the input.
    """
    m = as_square(a, "A")
    region = gershgorin_region(m)
    eigs = np.linalg.eigvals(m)
    cert = DiagonalBoundCertificate(
        diag_sum=float(np.abs(region.centers).sum()),
        radii_sum=float(region.radii.sum()),
        eigenvalue_sum=float(np.abs(eigs).sum()),
    )
    slack = 1e-9 * max(1.0, cert.bound)
    if cert.diag_sum > cert.bound + slack:
        raise CertificateError(
            f"diagonal bound violated: {cert.diag_sum:.6e} > {cert.bound:.6e}"
        )
    return cert


@dataclass(frozen=True)
class ConjugationBoundReport:
    """Realized constants of the off-diagonal-controls-norm transfer."""

    ok: bool
    vacuous: bool
    sup_full: float
    sup_offdiag: float
    slope_constant: float
    eigenvalue_sum: float


def conjugation_family_bound(
    mats,
    tol: Tolerance = DEFAULT_TOL,
    eig_tol: float = 1e-6,
    offdiag_cap: float = 1e6,
) -> ConjugationBoundReport:
    """For a family of mutually similar matrices, check the quantitative
    transfer "bounded off-diagonals imply a bounded family":

        sup_k ||B_k|| <= (2n + 1) * sup_k ||J * B_k|| + sum_i |lambda_i(B_0)|

    whenever ``sup_k ||J * B_k|| < offdiag_cap`` (otherwise the implication
    is vacuous and the report says so).  Similarity is spot-checked through
    eigenvalue matching; a mismatch beyond ``eig_tol`` raises
    :class:`ConjugationFamilyError`.
    """
    family = [as_square(b, "family member") for b in mats]
    if not family:
        raise InvalidInputError("family must be non-empty")
    n = family[0].shape[0]
    for b in family:
        if b.shape != (n, n):
            raise InvalidInputError("family members must share one shape")

    ref = np.sort_complex(np.linalg.eigvals(family[0]))
    ref_scale = max(1.0, operator_norm(family[0]))
    for b in family[1:]:
        eigs = np.linalg.eigvals(b)
        cost = np.abs(ref[:, None] - eigs[None, :])
        rows, cols = scipy.optimize.linear_sum_assignment(cost)
        if float(cost[rows, cols].max()) > eig_tol * ref_scale:
            raise ConjugationFamilyError(
                f"eigenvalues differ by {cost[rows, cols].max():.3e}; "
                "matrices are not a conjugation family"
            )

    j = Modifier.delete_diagonal(n)
    sup_full = max(operator_norm(b) for b in family)
    sup_off = max(operator_norm(apply(j, b)) for b in family)
    c1 = 2.0 * n + 1.0
    c2 = float(np.abs(ref).sum())
    vacuous = sup_off >= offdiag_cap
    ok = vacuous or sup_full <= c1 * sup_off + c2 + 1e-9 * max(1.0, sup_full)
    return ConjugationBoundReport(
        ok=ok,
        vacuous=vacuous,
        sup_full=sup_full,
        sup_offdiag=sup_off,
        slope_constant=c1,
        eigenvalue_sum=c2,
    )
