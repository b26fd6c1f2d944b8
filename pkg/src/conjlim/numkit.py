"""Dense complex linear algebra shared by every other module.

Matrices are plain ``numpy.ndarray`` objects with complex128 entries.  Rank
decisions use a relative singular-value cutoff, subspaces are always stored
with orthonormal bases so that equality and containment reduce to projector
norm tests, and the matrix norm is the operator 2-norm throughout.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ConjlimError",
    "InvalidInputError",
    "NotPSDError",
    "Tolerance",
    "DEFAULT_TOL",
    "as_matrix",
    "as_square",
    "as_vector",
    "operator_norm",
    "rank_of",
    "Subspace",
    "kernel_basis",
    "image_basis",
    "orthonormal_complement",
    "subspace_equal",
    "subspace_intersection",
    "psd_sqrt",
    "ginibre",
    "random_unitary",
    "random_singular",
    "matrix_to_json",
    "matrix_from_json",
    "save_matrix",
    "load_matrix",
]


class ConjlimError(Exception):
    """Base class for errors raised by this package."""


class InvalidInputError(ConjlimError, ValueError):
    """An input violates a precondition (shape, finiteness, range)."""


class NotPSDError(ConjlimError):
    """Matrix is not Hermitian positive semidefinite within tolerance."""


@dataclass(frozen=True)
class Tolerance:
    """Numerical policy shared by all rank and residual decisions.

    Parameters
    ----------
    rank_rel : float
        Relative singular-value cutoff: directions with
        ``sigma <= rank_rel * sigma_max`` count as null.  Must lie in (0, 1).
    residual_abs : float
        Absolute residual cutoff, scaled by input norms where appropriate
        via :meth:`residual_scale`.
    """

    rank_rel: float = 1e-10
    residual_abs: float = 1e-10

    def __post_init__(self):
        if not (0.0 < self.rank_rel < 1.0):
            raise InvalidInputError(f"rank_rel must be in (0, 1), got {self.rank_rel}")
        if self.residual_abs <= 0.0:
            raise InvalidInputError(
                f"residual_abs must be positive, got {self.residual_abs}"
            )

    def residual_scale(self, *norms: float) -> float:
        """Residual threshold ``residual_abs * max(1, prod(norms))``."""
        scale = 1.0
        for value in norms:
            scale *= float(value)
        return self.residual_abs * max(1.0, scale)


DEFAULT_TOL = Tolerance()


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and return ``a`` as a finite complex 2-d array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise InvalidInputError(f"{name} must be 2-dimensional, got shape {m.shape}")
    if m.size == 0:
        raise InvalidInputError(f"{name} must be non-empty, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return m


def as_square(a, name: str = "matrix") -> np.ndarray:
    m = as_matrix(a, name)
    if m.shape[0] != m.shape[1]:
        raise InvalidInputError(f"{name} must be square, got shape {m.shape}")
    return m


def as_vector(v, name: str = "vector") -> np.ndarray:
    x = np.asarray(v, dtype=np.complex128).reshape(-1)
    if x.size == 0:
        raise InvalidInputError(f"{name} must be non-empty")
    if not np.all(np.isfinite(x)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return x


def same_shape(a: np.ndarray, b: np.ndarray, what: str = "matrices") -> None:
    if a.shape != b.shape:
        raise InvalidInputError(f"{what} must have equal shapes: {a.shape} vs {b.shape}")


def operator_norm(m) -> float:
    """Largest singular value of ``m`` (operator 2-norm)."""
    a = as_matrix(m)
    return float(np.linalg.norm(a, 2))


def _svd_rank(s: np.ndarray, rank_rel: float) -> int:
    smax = float(s[0]) if s.size else 0.0
    if smax <= 0.0:
        return 0
    return int(np.count_nonzero(s > rank_rel * smax))


def rank_of(m, tol: Tolerance = DEFAULT_TOL) -> int:
    """Numerical rank at the relative cutoff of ``tol``."""
    a = as_matrix(m)
    s = np.linalg.svd(a, compute_uv=False)
    return _svd_rank(s, tol.rank_rel)


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=np.complex128, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of C^n stored as an orthonormal column basis.

    ``basis`` has shape ``(ambient_dim, dim)``; ``dim`` may be zero.  The
    tolerance that produced the subspace is kept alongside it.
    """

    basis: np.ndarray
    tol: Tolerance = DEFAULT_TOL

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=np.complex128)
        if b.ndim != 2 or b.shape[0] == 0:
            raise InvalidInputError(f"subspace basis must be (n, d), got {b.shape}")
        if b.shape[1] > b.shape[0]:
            raise InvalidInputError("subspace dimension exceeds ambient dimension")
        if b.shape[1] > 0:
            gram = b.conj().T @ b
            if np.linalg.norm(gram - np.eye(b.shape[1]), 2) > 100 * self.tol.residual_scale():
                raise InvalidInputError("subspace basis columns are not orthonormal")
        object.__setattr__(self, "basis", _readonly(b))

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        """Orthogonal projector onto the subspace."""
        return self.basis @ self.basis.conj().T

    def contains(self, v) -> bool:
        x = as_vector(v)
        if x.size != self.ambient_dim:
            raise InvalidInputError("vector dimension does not match ambient dimension")
        res = x - self.projector() @ x
        return float(np.linalg.norm(res)) <= self.tol.residual_scale(np.linalg.norm(x))

    @staticmethod
    def from_span(vectors, tol: Tolerance = DEFAULT_TOL) -> "Subspace":
        """Orthonormalize the columns of ``vectors`` (rank-revealing)."""
        m = as_matrix(vectors, "span")
        u, s, _ = np.linalg.svd(m, full_matrices=False)
        r = _svd_rank(s, tol.rank_rel)
        return Subspace(u[:, :r], tol)

    @staticmethod
    def zero(ambient_dim: int, tol: Tolerance = DEFAULT_TOL) -> "Subspace":
        return Subspace(np.zeros((ambient_dim, 0)), tol)

    @staticmethod
    def full(ambient_dim: int, tol: Tolerance = DEFAULT_TOL) -> "Subspace":
        return Subspace(np.eye(ambient_dim), tol)


def kernel_basis(m, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of the numerical null space of ``m``.

    Singular directions with ``sigma <= rank_rel * sigma_max`` span the
    kernel; a zero matrix has the full domain as kernel.
    """
    a = as_matrix(m)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    r = _svd_rank(s, tol.rank_rel)
    return Subspace(vh[r:].conj().T, tol)


def image_basis(m, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of the numerical column space of ``m``."""
    a = as_matrix(m)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    r = _svd_rank(s, tol.rank_rel)
    return Subspace(u[:, :r], tol)


def orthonormal_complement(s: Subspace) -> Subspace:
    """Orthonormal basis of the orthogonal complement."""
    if s.dim == 0:
        return Subspace.full(s.ambient_dim, s.tol)
    return kernel_basis(s.basis.conj().T, s.tol)


def subspace_equal(s1: Subspace, s2: Subspace, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff the two subspaces agree within the projector-norm tolerance."""
    if s1.ambient_dim != s2.ambient_dim:
        raise InvalidInputError(
            f"ambient dimensions differ: {s1.ambient_dim} vs {s2.ambient_dim}"
        )
    if s1.dim != s2.dim:
        return False
    if s1.dim == 0:
        return True
    gap = np.linalg.norm(s1.projector() - s2.projector(), 2)
    return float(gap) <= tol.residual_abs


def subspace_intersection(s1: Subspace, s2: Subspace, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of the intersection of two subspaces."""
    if s1.ambient_dim != s2.ambient_dim:
        raise InvalidInputError("ambient dimensions differ")
    n = s1.ambient_dim
    if s1.dim == 0 or s2.dim == 0:
        return Subspace.zero(n, tol)
    eye = np.eye(n)
    stacked = np.vstack([eye - s1.projector(), eye - s2.projector()])
    return kernel_basis(stacked, tol)


def psd_sqrt(m, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Hermitian PSD square root of a Hermitian PSD matrix.

    Raises :class:`NotPSDError` when the input is materially non-Hermitian or
    has a negative eigenvalue beyond tolerance.
    """
    a = as_square(m)
    norm = operator_norm(a)
    if np.linalg.norm(a - a.conj().T, 2) > tol.residual_scale(norm):
        raise NotPSDError("matrix is not Hermitian within tolerance")
    h = 0.5 * (a + a.conj().T)
    w, v = np.linalg.eigh(h)
    if w.size and float(w[0]) < -tol.residual_scale(norm):
        raise NotPSDError(f"matrix has negative eigenvalue {w[0]:.3e}")
    w = np.clip(w, 0.0, None)
    root = (v * np.sqrt(w)) @ v.conj().T
    return 0.5 * (root + root.conj().T)


# ---------------------------------------------------------------------------
# Random ensembles.  All randomized code in the package draws from the
# complex Ginibre ensemble through an explicit generator.

def ginibre(rows: int, cols: int | None = None, rng: np.random.Generator | None = None) -> np.ndarray:
    """Matrix with i.i.d. standard complex normal entries."""
    if cols is None:
        cols = rows
    if rng is None:
        raise InvalidInputError("ginibre requires an explicit Generator")
    re = rng.standard_normal((rows, cols))
    im = rng.standard_normal((rows, cols))
    return (re + 1j * im) / np.sqrt(2.0)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(ginibre(n, rng=rng))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_singular(n: int, rank: int, rng: np.random.Generator) -> np.ndarray:
    """Random n x n matrix of the given rank (almost surely)."""
    if not (0 <= rank <= n):
        raise InvalidInputError(f"rank must be in [0, {n}], got {rank}")
    if rank == 0:
        return np.zeros((n, n), dtype=np.complex128)
    return ginibre(n, rank, rng) @ ginibre(rank, n, rng)


# ---------------------------------------------------------------------------
# JSON interchange.  {"rows": r, "cols": c, "data": [[re, im], ...]} with the
# entries row-major; decimal text round-trips float64 exactly.

def matrix_to_json(m) -> dict:
    a = as_matrix(m)
    data = [[float(z.real), float(z.imag)] for z in a.reshape(-1)]
    return {"rows": int(a.shape[0]), "cols": int(a.shape[1]), "data": data}


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise InvalidInputError(f"matrix JSON must be an object, got {type(obj).__name__}")
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"matrix JSON missing or malformed field: {exc}") from exc
    if rows <= 0 or cols <= 0:
        raise InvalidInputError(f"matrix dimensions must be positive, got {rows}x{cols}")
    if len(data) != rows * cols:
        raise InvalidInputError(
            f"matrix JSON has {len(data)} entries, expected {rows * cols}"
        )
    flat = np.empty(rows * cols, dtype=np.complex128)
    for i, pair in enumerate(data):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise InvalidInputError(f"entry {i} must be a [re, im] pair, got {pair!r}")
        flat[i] = complex(float(pair[0]), float(pair[1]))
    return as_matrix(flat.reshape(rows, cols))


def save_matrix(path, m) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_json(m), fh)


def load_matrix(path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        return matrix_from_json(json.load(fh))
