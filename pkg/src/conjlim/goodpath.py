"""Paths of invertible matrices converging to a base point Z whose inverses
have a simple pole: ``(Z + t E(t))^{-1} = C/t + C_0 + C_1 t + ...``.

Such a path exists for every complex square Z.  Its pole coefficient C is
characterized algebraically: ``im(C) = ker(Z)`` and ``ker(C) = im(Z)``, and
it always satisfies ``ZC = CZ = 0``.  The construction used here goes
through the polar factorization ``Z = U R`` with U unitary and R the PSD
root of ``Z^H Z``: filling the null block of R with the identity gives a
linear path whose inverse is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .numkit import (
    DEFAULT_TOL,
    ConjlimError,
    InvalidInputError,
    Tolerance,
    as_square,
    image_basis,
    kernel_basis,
    matrix_from_json,
    matrix_to_json,
    operator_norm,
    subspace_equal,
    subspace_intersection,
)

__all__ = [
    "NotAGoodPathError",
    "InvalidPathError",
    "RigidityViolationError",
    "PolarFactors",
    "GoodPath",
    "polar_factors",
    "construct_good_path",
    "laurent_inverse",
    "is_pole_coefficient",
    "dual_path",
    "rigidity_index",
]

#: Relative least-squares residual above which coefficient matching is
#: declared infeasible (the inverse has a pole of order >= 2).
LAURENT_REJECT_REL = 1e-6

#: Small path parameters sampled to confirm invertibility near zero.
_SAMPLE_TS = (1e-2, 1e-3, 1e-4)


class NotAGoodPathError(ConjlimError):
    """No inverse with pole order <= 1 matches the given path."""


class InvalidPathError(ConjlimError):
    """The path is singular for small t > 0 (or identically singular)."""


class RigidityViolationError(ConjlimError):
    """The coefficient kernels violate the prefix-containment structure that
    every simple-pole path must have."""


@dataclass(frozen=True)
class PolarFactors:
    """Factorization ``Z = unitary @ root`` with ``root = sqrt(Z^H Z)``."""

    unitary: np.ndarray
    root: np.ndarray


@dataclass(frozen=True)
class GoodPath:
    """A path ``base + sum_k t^k path_coeffs[k-1]`` together with the
    truncated Laurent expansion of its inverse.

    ``inverse_pole`` is the coefficient of ``t^{-1}`` (may be zero when the
    base point is invertible, in which case :attr:`has_pole` is False) and
    ``inverse_series[j]`` is the coefficient of ``t^j`` for j = 0..order.
    """

    base: np.ndarray
    path_coeffs: tuple[np.ndarray, ...]
    inverse_pole: np.ndarray
    inverse_series: tuple[np.ndarray, ...]
    order: int
    tol: Tolerance = field(default=DEFAULT_TOL, compare=False)

    def __post_init__(self):
        base = as_square(self.base, "base")
        n = base.shape[0]
        coeffs = tuple(as_square(e, "path coefficient") for e in self.path_coeffs)
        series = tuple(as_square(c, "inverse coefficient") for c in self.inverse_series)
        pole = as_square(self.inverse_pole, "inverse pole")
        for m in coeffs + series + (pole,):
            if m.shape != (n, n):
                raise InvalidInputError("all path data must share the base shape")
        if self.order != len(series) - 1:
            raise InvalidInputError(
                f"order {self.order} does not match series length {len(series)}"
            )
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "path_coeffs", coeffs)
        object.__setattr__(self, "inverse_pole", pole)
        object.__setattr__(self, "inverse_series", series)

    @property
    def dim(self) -> int:
        return self.base.shape[0]

    @property
    def has_pole(self) -> bool:
        return operator_norm(self.inverse_pole) > self.tol.residual_scale(
            operator_norm(self.base)
        )

    def at(self, t: float) -> np.ndarray:
        """Path value ``base + sum_k t^k E_k``."""
        out = self.base.astype(np.complex128, copy=True)
        tk = 1.0
        for e in self.path_coeffs:
            tk *= t
            out += tk * e
        return out

    def inverse_at(self, t: float) -> np.ndarray:
        """Truncated Laurent inverse ``pole/t + sum_j t^j C_j``."""
        if t == 0:
            raise InvalidInputError("inverse expansion is undefined at t = 0")
        out = self.inverse_pole / t
        tk = 1.0
        for c in self.inverse_series:
            out = out + tk * c
            tk *= t
        return out

    def _inverse_coeff(self, j: int) -> np.ndarray:
        if j == -1:
            return self.inverse_pole
        if 0 <= j <= self.order:
            return self.inverse_series[j]
        raise IndexError(j)

    def product_residuals(self) -> np.ndarray:
        """Coefficient residuals of the two-sided identity
        ``path(t) * inverse(t) = I = inverse(t) * path(t)``, for the powers
        ``t^m`` with m = -1..order.  All entries should be at noise level."""
        n = self.dim
        eye = np.eye(n)
        pathc = [self.base, *self.path_coeffs]
        out = np.zeros(self.order + 2)
        for row, m in enumerate(range(-1, self.order + 1)):
            left = np.zeros((n, n), dtype=np.complex128)
            right = np.zeros((n, n), dtype=np.complex128)
            for k, pk in enumerate(pathc):
                j = m - k
                if -1 <= j <= self.order:
                    cj = self._inverse_coeff(j)
                    left += pk @ cj
                    right += cj @ pk
            target = eye if m == 0 else 0.0
            out[row] = max(
                float(np.linalg.norm(left - target, 2)),
                float(np.linalg.norm(right - target, 2)),
            )
        return out

    def annihilation_residual(self) -> float:
        """``max(||base @ pole||, ||pole @ base||)`` — zero for a valid pole."""
        return max(
            float(np.linalg.norm(self.base @ self.inverse_pole, 2)),
            float(np.linalg.norm(self.inverse_pole @ self.base, 2)),
        )

    def coefficient_scale(self) -> float:
        norms = [operator_norm(self.base), operator_norm(self.inverse_pole)]
        norms += [operator_norm(e) for e in self.path_coeffs]
        norms += [operator_norm(c) for c in self.inverse_series]
        return max(1.0, *norms)

    def validate(self, residual_tol: float = 1e-8) -> None:
        """Raise :class:`NotAGoodPathError` unless every coefficient residual
        is below ``residual_tol`` scaled by the coefficient norms and the
        pole annihilates the base within the stored tolerance."""
        scale = self.coefficient_scale()
        res = self.product_residuals()
        if float(res.max()) > residual_tol * scale:
            raise NotAGoodPathError(
                f"inverse identity residual {res.max():.3e} exceeds {residual_tol:.1e} * {scale:.3e}"
            )
        ann = self.annihilation_residual()
        if ann > self.tol.residual_scale(operator_norm(self.base) * scale):
            raise NotAGoodPathError(f"pole does not annihilate the base: {ann:.3e}")

    def to_json(self) -> dict:
        return {
            "base": matrix_to_json(self.base),
            "path_coeffs": [matrix_to_json(e) for e in self.path_coeffs],
            "inverse_pole": matrix_to_json(self.inverse_pole),
            "inverse_series": [matrix_to_json(c) for c in self.inverse_series],
            "order": self.order,
            "has_pole": self.has_pole,
        }

    @staticmethod
    def from_json(obj: dict, tol: Tolerance = DEFAULT_TOL) -> "GoodPath":
        return GoodPath(
            base=matrix_from_json(obj["base"]),
            path_coeffs=tuple(matrix_from_json(e) for e in obj["path_coeffs"]),
            inverse_pole=matrix_from_json(obj["inverse_pole"]),
            inverse_series=tuple(matrix_from_json(c) for c in obj["inverse_series"]),
            order=int(obj["order"]),
            tol=tol,
        )


def polar_factors(z, tol: Tolerance = DEFAULT_TOL) -> PolarFactors:
    """Sharpened polar factorization ``Z = U R``.

    R is the Hermitian PSD root of ``Z^H Z`` and U is unitary (in finite
    dimension the isometric extension off the image can always be chosen
    unitary), so U is in particular an invertible partial isometry.
    """
    Z = as_square(z, "Z")
    u, s, vh = np.linalg.svd(Z)
    unitary = u @ vh
    v = vh.conj().T
    root = (v * s) @ v.conj().T
    root = 0.5 * (root + root.conj().T)
    return PolarFactors(unitary=unitary, root=root)


def construct_good_path(z, tol: Tolerance = DEFAULT_TOL, order: int = 8) -> GoodPath:
    """Linear path ``Z + tE`` with exact simple-pole inverse, for any square Z.

    With ``Z = U R`` the polar factorization and R diagonalized as
    ``R11 (+) 0`` by a unitary V, the filler is ``E = U V (0 (+) I) V^H``;
    the inverse of ``Z + tE`` is then ``V (0 (+) I) V^H U^H / t +
    V (R11^{-1} (+) 0) V^H U^H`` with all higher coefficients zero.  For an
    invertible Z this degenerates to E = 0 and a pole-free expansion, which
    is reported through :attr:`GoodPath.has_pole`.
    """
    Z = as_square(z, "Z")
    n = Z.shape[0]
    if order < 0:
        raise InvalidInputError(f"order must be nonnegative, got {order}")
    u, s, vh = np.linalg.svd(Z)
    smax = float(s[0]) if s.size else 0.0
    rank = int(np.count_nonzero(s > tol.rank_rel * smax)) if smax > 0 else 0
    unitary = u @ vh
    v = vh.conj().T
    v_ker = v[:, rank:]
    v_im = v[:, :rank]
    ker_proj = v_ker @ v_ker.conj().T
    filler = unitary @ ker_proj
    pole = ker_proj @ unitary.conj().T
    c0 = (v_im * (1.0 / s[:rank])) @ v_im.conj().T @ unitary.conj().T
    zero = np.zeros((n, n), dtype=np.complex128)
    series = (c0,) + tuple(zero for _ in range(order))
    return GoodPath(
        base=Z,
        path_coeffs=(filler,),
        inverse_pole=pole,
        inverse_series=series,
        order=order,
        tol=tol,
    )


def _path_value(base: np.ndarray, coeffs, t: float) -> np.ndarray:
    out = base.astype(np.complex128, copy=True)
    tk = 1.0
    for e in coeffs:
        tk *= t
        out += tk * e
    return out


def laurent_inverse(z, coeffs, order: int = 8, tol: Tolerance = DEFAULT_TOL):
    """Solve for the Laurent coefficients of ``(Z + sum t^k E_k)^{-1}`` under
    the pole-order-one ansatz.

    The two-sided coefficient-matching equations for the powers t^{-1}..t^N
    are stacked into one least-squares system over the vectorized unknowns
    ``C_{-1}, C_0, ..., C_N``; relative residual above
    :data:`LAURENT_REJECT_REL` means no simple-pole inverse exists and raises
    :class:`NotAGoodPathError`.  Returns ``(pole, [C_0, ..., C_N])``.
    """
    Z = as_square(z, "Z")
    n = Z.shape[0]
    es = [as_square(e, "path coefficient") for e in coeffs]
    for e in es:
        if e.shape != (n, n):
            raise InvalidInputError("path coefficients must match the base shape")
    if order < 0:
        raise InvalidInputError(f"order must be nonnegative, got {order}")

    for t in _SAMPLE_TS:
        sv = np.linalg.svd(_path_value(Z, es, t), compute_uv=False)
        if sv[-1] <= 1e-13 * max(1.0, float(sv[0])):
            raise InvalidPathError(f"path is singular at sampled t = {t}")

    pathc = [Z, *es]
    unknowns = order + 2  # C_{-1} .. C_order
    blk = n * n
    eye = np.eye(n)
    rows = 2 * unknowns * blk
    system = np.zeros((rows, unknowns * blk), dtype=np.complex128)
    rhs = np.zeros(rows, dtype=np.complex128)
    for row, m in enumerate(range(-1, order + 1)):
        lrow = row * blk
        rrow = (unknowns + row) * blk
        for k, pk in enumerate(pathc):
            j = m - k
            if not (-1 <= j <= order):
                continue
            col = (j + 1) * blk
            system[lrow : lrow + blk, col : col + blk] += np.kron(eye, pk)
            system[rrow : rrow + blk, col : col + blk] += np.kron(pk.T, eye)
        if m == 0:
            rhs[lrow : lrow + blk] = eye.reshape(-1, order="F")
            rhs[rrow : rrow + blk] = eye.reshape(-1, order="F")

    solution, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    defect = float(np.linalg.norm(system @ solution - rhs))
    scale = float(np.linalg.norm(rhs)) + float(
        np.linalg.norm(system, "fro") * np.linalg.norm(solution)
    )
    if defect > LAURENT_REJECT_REL * max(1.0, scale):
        raise NotAGoodPathError(
            f"no inverse with pole order <= 1: relative residual {defect / max(1.0, scale):.3e}"
        )
    mats = [
        solution[i * blk : (i + 1) * blk].reshape((n, n), order="F")
        for i in range(unknowns)
    ]
    return mats[0], mats[1:]


def is_pole_coefficient(c, z, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff ``im(C) = ker(Z)`` and ``im(Z) = ker(C)`` — exactly the
    matrices arising as the pole of some simple-pole path to Z."""
    C = as_square(c, "C")
    Z = as_square(z, "Z")
    if C.shape != Z.shape:
        raise InvalidInputError("C and Z must have equal shapes")
    if not subspace_equal(image_basis(C, tol), kernel_basis(Z, tol), tol):
        return False
    return subspace_equal(image_basis(Z, tol), kernel_basis(C, tol), tol)


def dual_path(gp: GoodPath) -> GoodPath:
    """Path-level duality: ``pole + t * series(t)`` is itself a simple-pole
    path, converging to the pole coefficient, with inverse
    ``base/t + sum_j t^j E_{j+1}``.  Applying it twice reproduces the
    original coefficients through the shared truncation order."""
    n = gp.dim
    zero = np.zeros((n, n), dtype=np.complex128)
    new_series = [
        gp.path_coeffs[j] if j < len(gp.path_coeffs) else zero
        for j in range(gp.order + 1)
    ]
    return GoodPath(
        base=gp.inverse_pole,
        path_coeffs=gp.inverse_series,
        inverse_pole=gp.base,
        inverse_series=tuple(new_series),
        order=gp.order,
        tol=gp.tol,
    )


def rigidity_index(e0, coeffs, tol: Tolerance = DEFAULT_TOL) -> int:
    """Least n >= 1 with ``ker(E_0) <= ker(E_m)`` for all m < n and
    ``ker(E_0) ^ ker(E_n) = 0``.

    Every simple-pole path has such an index (linear constructions have
    n = 1); exhausting the coefficients without finding one, or hitting a
    partial overlap that blocks all further candidates, raises
    :class:`RigidityViolationError` and signals that the coefficients do not
    come from a simple-pole path.  An invertible ``E_0`` returns 1 vacuously.
    """
    E0 = as_square(e0, "E0")
    k0 = kernel_basis(E0, tol)
    if k0.dim == 0:
        return 1
    es = [as_square(e, "coefficient") for e in coeffs]
    for idx, e in enumerate(es, start=1):
        if e.shape != E0.shape:
            raise InvalidInputError("coefficients must match the base shape")
        kn = kernel_basis(e, tol)
        if subspace_intersection(k0, kn, tol).dim == 0:
            return idx
        contained = float(np.linalg.norm(e @ k0.basis, 2)) <= tol.residual_scale(
            operator_norm(e)
        )
        if not contained:
            raise RigidityViolationError(
                f"ker(E_0) meets ker(E_{idx}) without being contained in it"
            )
    raise RigidityViolationError(
        "coefficients exhausted with ker(E_0) still contained in every kernel"
    )
