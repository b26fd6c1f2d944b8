"""Numeric path simulation and search: growth exponents of
``||phi(U(t) A U(t)^{-1})||`` along paths ``U(t) -> Z``, empirical divergence
certificates, kernel filtrations of path coefficients, and the exact
polynomial-path boundedness test via adjugate/determinant degrees.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .goodpath import GoodPath, InvalidPathError
from .modifier import Modifier, apply
from .numkit import (
    DEFAULT_TOL,
    ConjlimError,
    InvalidInputError,
    Subspace,
    Tolerance,
    as_square,
    as_vector,
    ginibre,
    kernel_basis,
    operator_norm,
    subspace_intersection,
)

__all__ = [
    "PathSingularError",
    "MatrixPath",
    "log_grid",
    "GrowthReport",
    "simulate",
    "SearchOutcome",
    "divergence_search",
    "rank_one_probe",
    "Filtration",
    "kernel_filtration",
    "preserves_filtration",
    "polynomial_path_bounded",
    "polynomial_growth_degrees",
    "LocalityProbeReport",
    "locality_probe",
]

#: Growth-exponent thresholds for the fitted ``t^{-alpha}`` law and the
#: minimum fit quality required for a definite verdict.
ALPHA_BOUNDED_MAX = 0.1
ALPHA_DIVERGENT_MIN = 0.9
R2_MIN = 0.9

#: Relative coefficient magnitude below which a polynomial coefficient
#: counts as zero in the exact path test.
POLY_COEFF_REL = 1e-9


class PathSingularError(ConjlimError):
    """The path is singular at a grid point."""


def log_grid(t_max: float = 1e-1, t_min: float = 1e-6, count: int = 26) -> np.ndarray:
    """Logarithmically spaced decreasing grid on ``[t_min, t_max]``."""
    if not (0 < t_min < t_max):
        raise InvalidInputError("grid endpoints must satisfy 0 < t_min < t_max")
    if count < 2:
        raise InvalidInputError("grid needs at least two points")
    return np.geomspace(t_max, t_min, count)


@dataclass(frozen=True)
class MatrixPath:
    """A path of matrices parametrized by small ``t > 0``.

    Kinds: ``linear`` (one coefficient), ``polynomial`` (finitely many),
    ``goodpath`` (a :class:`~conjlim.goodpath.GoodPath`'s forward path) and
    ``samples`` (an explicit list of ``(t, U)`` pairs).
    """

    kind: str
    base: np.ndarray | None = None
    coeffs: tuple[np.ndarray, ...] = ()
    samples: tuple[tuple[float, np.ndarray], ...] = ()
    source: GoodPath | None = field(default=None, compare=False)

    @staticmethod
    def linear(z, e) -> "MatrixPath":
        Z = as_square(z, "Z")
        E = as_square(e, "E")
        if E.shape != Z.shape:
            raise InvalidInputError("path coefficient must match the base shape")
        return MatrixPath(kind="linear", base=Z, coeffs=(E,))

    @staticmethod
    def polynomial(z, coeffs) -> "MatrixPath":
        Z = as_square(z, "Z")
        es = tuple(as_square(e, "path coefficient") for e in coeffs)
        for e in es:
            if e.shape != Z.shape:
                raise InvalidInputError("path coefficients must match the base shape")
        return MatrixPath(kind="polynomial", base=Z, coeffs=es)

    @staticmethod
    def from_good_path(gp: GoodPath) -> "MatrixPath":
        return MatrixPath(kind="goodpath", base=gp.base, coeffs=gp.path_coeffs, source=gp)

    @staticmethod
    def from_samples(pairs) -> "MatrixPath":
        cleaned = []
        for t, u in pairs:
            t = float(t)
            if t <= 0:
                raise InvalidInputError(f"sample parameters must be positive, got {t}")
            cleaned.append((t, as_square(u, "sample matrix")))
        if not cleaned:
            raise InvalidInputError("samples path needs at least one pair")
        cleaned.sort(key=lambda p: -p[0])
        n = cleaned[0][1].shape[0]
        for _, u in cleaned:
            if u.shape != (n, n):
                raise InvalidInputError("sample matrices must share one shape")
        return MatrixPath(kind="samples", samples=tuple(cleaned))

    @property
    def dim(self) -> int:
        if self.kind == "samples":
            return self.samples[0][1].shape[0]
        return self.base.shape[0]

    def at(self, t: float) -> np.ndarray:
        if self.kind == "samples":
            for ts, u in self.samples:
                if np.isclose(ts, t, rtol=1e-12, atol=0.0):
                    return u
            raise InvalidInputError(f"samples path has no matrix at t = {t}")
        out = self.base.astype(np.complex128, copy=True)
        tk = 1.0
        for e in self.coeffs:
            tk *= t
            out += tk * e
        return out

    def grid(self, default: np.ndarray | None = None) -> np.ndarray:
        if self.kind == "samples":
            return np.array([t for t, _ in self.samples])
        return log_grid() if default is None else np.asarray(default, dtype=float)


@dataclass(frozen=True)
class GrowthReport:
    """Sampled conjugation norms with a fitted growth law.

    ``alpha`` is the exponent of the fitted ``t^{-alpha}`` over the smallest
    decade of the grid and ``r2`` its fit quality.  The verdict is
    ``bounded`` when ``alpha <= 0.1``, ``divergent`` when ``alpha >= 0.9``,
    and ``inconclusive`` otherwise or when the fit is poor.  The extreme
    sampled norms are reported as surrogates for the limit behavior, with no
    claim that they equal it.
    """

    t_values: np.ndarray
    norms: np.ndarray
    alpha: float
    r2: float
    verdict: str
    norm_max: float
    norm_min: float

    def to_json(self) -> dict:
        return {
            "t_values": [float(t) for t in self.t_values],
            "norms": [float(v) for v in self.norms],
            "alpha": self.alpha,
            "r2": self.r2,
            "verdict": self.verdict,
            "norm_max": self.norm_max,
            "norm_min": self.norm_min,
        }


def _conjugate(u: np.ndarray, a: np.ndarray) -> np.ndarray:
    # U A U^{-1} through one linear solve: (U A) U^{-1} = solve(U^T, (U A)^T)^T
    return np.linalg.solve(u.T, (u @ a).T).T


def _fit_window(ts: np.ndarray, logs: np.ndarray):
    t_min = ts.min()
    mask = ts <= t_min * 10.0 * (1.0 + 1e-12)
    if mask.sum() < 3:
        order = np.argsort(ts)
        mask = np.zeros(ts.size, dtype=bool)
        mask[order[: min(3, ts.size)]] = True
    return np.log(ts[mask]), logs[mask]


def simulate(
    path: MatrixPath,
    a,
    phi: Modifier | None = None,
    grid=None,
    tol: Tolerance = DEFAULT_TOL,
) -> GrowthReport:
    """Sample ``||phi(U(t) A U(t)^{-1})||`` over the grid and fit the growth
    exponent on the smallest decade.

    Raises :class:`PathSingularError` (naming the offending t) if the path is
    singular at a grid point; the gate sits just above machine precision so
    that legitimately near-singular points — the interesting regime for
    divergence — still get evaluated.  Near-constant windows are treated as
    perfect bounded fits; identically vanishing norms report ``alpha = 0``.
    """
    A = as_square(a, "A")
    n = A.shape[0]
    if path.dim != n:
        raise InvalidInputError("A must match the path dimension")
    if phi is None:
        phi = Modifier.identity(n)
    ts = path.grid(grid)
    norms = np.empty(ts.size)
    for i, t in enumerate(ts):
        u = path.at(float(t))
        sv = np.linalg.svd(u, compute_uv=False)
        if sv[-1] <= 1e-13 * max(1.0, float(sv[0])):
            raise PathSingularError(f"path is singular at grid point t = {t}")
        norms[i] = operator_norm(apply(phi, _conjugate(u, A)))

    floor = 1e-300
    logs = np.log(np.maximum(norms, floor))
    lt, ln = _fit_window(ts, logs)

    if np.all(norms[ts <= ts.min() * 10.0 * (1 + 1e-12)] < 1e-150):
        alpha, r2 = 0.0, 1.0
    else:
        fit = np.polyfit(lt, ln, 1)
        alpha = float(-fit[0])
        spread = float(ln.max() - ln.min())
        if spread < 1e-3:
            # constancy at this level is a trustworthy bounded signal even
            # when residual noise wrecks the regression r^2
            r2 = 1.0
        else:
            pred = np.polyval(fit, lt)
            ss_res = float(np.sum((ln - pred) ** 2))
            ss_tot = float(np.sum((ln - ln.mean()) ** 2))
            r2 = 1.0 if ss_tot <= 0.0 else 1.0 - ss_res / ss_tot

    if r2 < R2_MIN:
        verdict = "inconclusive"
    elif alpha <= ALPHA_BOUNDED_MAX:
        verdict = "bounded"
    elif alpha >= ALPHA_DIVERGENT_MIN:
        verdict = "divergent"
    else:
        verdict = "inconclusive"

    return GrowthReport(
        t_values=ts,
        norms=norms,
        alpha=float(alpha),
        r2=float(r2),
        verdict=verdict,
        norm_max=float(norms.max()),
        norm_min=float(norms.min()),
    )


@dataclass(frozen=True)
class SearchOutcome:
    """Best invertible perturbation found by :func:`divergence_search`."""

    matrix: np.ndarray | None
    norm: float
    evaluations: int


def divergence_search(
    a,
    z,
    phi: Modifier | None = None,
    radius: float = 0.1,
    budget: int = 10_000,
    *,
    seed,
    stop_at: float | None = None,
    tol: Tolerance = DEFAULT_TOL,
) -> SearchOutcome:
    """Search for invertible U with ``||U - Z|| < radius`` maximizing
    ``||phi(U A U^{-1})||``.

    Strategy: seeded multistart over random invertible perturbations of Z,
    then local ascent whose moves shrink the smallest singular value of the
    current iterate (steering it toward a nearby singular matrix whose
    kernel the conjugation violates) and kick it with rank-one probes
    ``x y^H``.  The budget counts objective evaluations; ``stop_at`` allows
    early exit once a caller threshold is certified.

    For a singular Z and non-scalar A the supremum is infinite and the
    search certifies this empirically by exceeding any threshold; scalar A
    short-circuits, since conjugation fixes it and the objective is the
    constant ``||phi(A)||``.
    """
    A = as_square(a, "A")
    Z = as_square(z, "Z")
    if A.shape != Z.shape:
        raise InvalidInputError("A and Z must have equal shapes")
    if radius <= 0:
        raise InvalidInputError(f"radius must be positive, got {radius}")
    n = Z.shape[0]
    if phi is None:
        phi = Modifier.identity(n)
    if phi.dim != n:
        raise InvalidInputError("modifier dimension mismatch")
    rng = np.random.default_rng(seed)

    mu = np.trace(A) / n
    if operator_norm(A - mu * np.eye(n)) <= 1e-13 * max(1.0, abs(mu), operator_norm(A)):
        # conjugation fixes scalars: objective is constant
        start = Z + (radius / 2.0) * np.eye(n)
        return SearchOutcome(start, operator_norm(apply(phi, A)), 0)

    evals = 0
    best_val = -np.inf
    best_mat: np.ndarray | None = None

    def valid(u: np.ndarray) -> bool:
        if operator_norm(u - Z) >= radius:
            return False
        sv = np.linalg.svd(u, compute_uv=False)
        return sv[-1] > 1e-12 * max(1.0, float(sv[0]))

    def value(u: np.ndarray) -> float | None:
        nonlocal evals, best_val, best_mat
        if not valid(u):
            return None
        evals += 1
        try:
            b = _conjugate(u, A)
        except np.linalg.LinAlgError:
            return None
        val = operator_norm(apply(phi, b))
        if val > best_val:
            best_val, best_mat = val, u.copy()
        return val

    def random_start() -> np.ndarray | None:
        for _ in range(8):
            g = ginibre(n, rng=rng)
            g /= operator_norm(g)
            delta = radius * rng.uniform(0.2, 0.6)
            u = Z + delta * g
            sv = np.linalg.svd(u, compute_uv=False)
            if sv[-1] >= 0.05 * delta:
                return u
        return None

    def done() -> bool:
        return evals >= budget or (stop_at is not None and best_val >= stop_at)

    while not done():
        u = random_start()
        if u is None:
            break
        cur = value(u)
        if cur is None:
            continue
        stall = 0
        while not done() and stall < 25:
            uu, ss, vv = np.linalg.svd(u)
            shrunk = ss.copy()
            shrunk[-1] *= 0.25
            candidates = [(uu * shrunk) @ vv]
            for _ in range(2):
                x = as_vector(ginibre(n, 1, rng).reshape(-1))
                y = as_vector(ginibre(n, 1, rng).reshape(-1))
                x /= np.linalg.norm(x)
                y /= np.linalg.norm(y)
                eps = float(ss[-1]) * rng.uniform(0.3, 1.5) + 1e-3 * radius * rng.uniform()
                candidates.append(u + eps * np.outer(x, y.conj()))
            improved = False
            for cand in candidates:
                val = value(cand)
                if done():
                    break
                if val is not None and val > cur * (1.0 + 1e-6):
                    u, cur = cand, val
                    improved = True
                    break
            stall = 0 if improved else stall + 1

    if best_mat is None:
        for fallback in (Z + (radius / 2.0) * np.eye(n), Z + (radius / 2.0) * np.eye(n) * 1j):
            if value(fallback) is not None:
                break
    return SearchOutcome(best_mat, float(best_val), evals)


def rank_one_probe(x, y) -> np.ndarray:
    """Matrix of ``u -> (y, u) x``, i.e. the outer product ``x y^H``.

    These probes drive the divergence search and satisfy the composition
    rules ``E_xy E_yz = E_xz`` (unit vectors) and
    ``E_xy A E_xy = (y^H A x) E_xy``; summing ``E_{e_i e_i}`` over an
    orthonormal basis gives the identity.
    """
    xv = as_vector(x, "x")
    yv = as_vector(y, "y")
    if np.linalg.norm(xv) == 0.0 or np.linalg.norm(yv) == 0.0:
        raise InvalidInputError("probe vectors must be nonzero")
    return np.outer(xv, yv.conj())


@dataclass(frozen=True)
class Filtration:
    """Descending chain of subspaces ``F^0 >= F^1 >= ...``."""

    spaces: tuple[Subspace, ...]

    def __post_init__(self):
        if not self.spaces:
            raise InvalidInputError("filtration must contain at least one subspace")
        n = self.spaces[0].ambient_dim
        prev: Subspace | None = None
        for s in self.spaces:
            if s.ambient_dim != n:
                raise InvalidInputError("filtration spaces must share the ambient space")
            if prev is not None:
                if s.dim > prev.dim:
                    raise InvalidInputError("filtration must be descending")
                if s.dim > 0:
                    gap = np.linalg.norm(
                        (np.eye(n) - prev.projector()) @ s.basis, 2
                    )
                    if gap > 1e-8:
                        raise InvalidInputError("filtration spaces are not nested")
            prev = s
        object.__setattr__(self, "spaces", tuple(self.spaces))

    @property
    def ambient_dim(self) -> int:
        return self.spaces[0].ambient_dim

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.spaces)


def kernel_filtration(mats, tol: Tolerance = DEFAULT_TOL) -> Filtration:
    """``F^i = ker(E_0) ^ ... ^ ker(E_i)`` for the given coefficient list.

    For coefficients of a path that is invertible near zero the chain
    reaches the zero subspace.
    """
    ms = [as_square(m, "coefficient") for m in mats]
    if not ms:
        raise InvalidInputError("coefficient list must be non-empty")
    spaces = [kernel_basis(ms[0], tol)]
    for m in ms[1:]:
        spaces.append(subspace_intersection(spaces[-1], kernel_basis(m, tol), tol))
    return Filtration(tuple(spaces))


def preserves_filtration(a, filtration: Filtration, tol: Tolerance = DEFAULT_TOL):
    """Does ``A`` map every ``F^i`` into itself?

    Returns a :class:`~conjlim.criteria.MembershipVerdict`; the witness on
    failure is the first basis vector of the first violated space.
    """
    from .criteria import MembershipVerdict

    A = as_square(a, "A")
    n = A.shape[0]
    if filtration.ambient_dim != n:
        raise InvalidInputError("A must match the filtration's ambient dimension")
    threshold = tol.residual_scale(operator_norm(A))
    worst = 0.0
    eye = np.eye(n)
    for space in filtration.spaces:
        if space.dim in (0, n):
            continue
        defect = (eye - space.projector()) @ A @ space.basis
        residual = float(np.linalg.norm(defect, 2))
        worst = max(worst, residual)
        if residual > threshold:
            cols = np.linalg.norm(defect, axis=0)
            above = np.nonzero(cols > threshold)[0]
            j = int(above[0]) if above.size else int(np.argmax(cols))
            return MembershipVerdict(False, residual, space.basis[:, j].copy(), threshold)
    return MembershipVerdict(True, worst, None, threshold)


# ---------------------------------------------------------------------------
# Exact polynomial-path test.

def _adjugate(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    if n == 1:
        return np.ones((1, 1), dtype=np.complex128)
    adj = np.empty((n, n), dtype=np.complex128)
    rows = list(range(n))
    cols = list(range(n))
    for i in range(n):
        sub_rows = rows[:i] + rows[i + 1 :]
        for j in range(n):
            sub_cols = cols[:j] + cols[j + 1 :]
            minor = m[np.ix_(sub_rows, sub_cols)]
            adj[j, i] = (-1) ** (i + j) * np.linalg.det(minor)
    return adj


def _poly_samples(z: np.ndarray, coeffs, a: np.ndarray):
    """Values of det(path) and path*A*adj(path) at roots of unity."""
    n = z.shape[0]
    p = len(coeffs)
    count = n * (p + 1) + 1
    ts = np.exp(2j * np.pi * np.arange(count) / count)
    dets = np.empty(count, dtype=np.complex128)
    prods = np.empty((count, n, n), dtype=np.complex128)
    for idx, t in enumerate(ts):
        u = z.astype(np.complex128, copy=True)
        tk = 1.0 + 0j
        for e in coeffs:
            tk *= t
            u += tk * e
        dets[idx] = np.linalg.det(u)
        prods[idx] = u @ a @ _adjugate(u)
    det_coeffs = np.fft.fft(dets) / count
    prod_coeffs = np.fft.fft(prods, axis=0) / count
    return det_coeffs, prod_coeffs


def _poly_conv_dets(z: np.ndarray, coeffs, a: np.ndarray):
    """Fallback with exact coefficient convolutions instead of sampling."""
    n = z.shape[0]
    p = len(coeffs)
    deg = p + 1  # entries of the path have degree <= p; arrays sized deg
    entry = np.zeros((n, n, deg), dtype=np.complex128)
    entry[:, :, 0] = z
    for k, e in enumerate(coeffs, start=1):
        entry[:, :, k] = e

    from functools import lru_cache

    def conv(x, y):
        return np.convolve(x, y)

    @lru_cache(maxsize=None)
    def minor_det(row: int, cols: frozenset):
        cols_list = sorted(cols)
        if row == n:
            return np.ones(1, dtype=np.complex128)
        if not cols_list:
            return np.ones(1, dtype=np.complex128)
        acc = None
        for pos, c in enumerate(cols_list):
            sub = minor_det(row + 1, cols - {c})
            term = conv(entry[row, c], sub) * ((-1) ** pos)
            acc = term if acc is None else _poly_add(acc, term)
        return acc

    def _poly_add(x, y):
        if x.size < y.size:
            x = np.pad(x, (0, y.size - x.size))
        elif y.size < x.size:
            y = np.pad(y, (0, x.size - y.size))
        return x + y

    all_cols = frozenset(range(n))
    det_poly = minor_det(0, all_cols)

    # adjugate entries are signed minors of the transposed pattern
    def minor_without(i: int, j: int):
        rows = [r for r in range(n) if r != i]
        cols = [c for c in range(n) if c != j]
        if not rows:
            return np.ones(1, dtype=np.complex128)
        sub = entry[np.ix_(rows, cols)]
        m = len(rows)

        def rec(r: int, avail: frozenset):
            if r == m:
                return np.ones(1, dtype=np.complex128)
            acc = None
            for pos, c in enumerate(sorted(avail)):
                term = conv(sub[r, c], rec(r + 1, avail - {c})) * ((-1) ** pos)
                acc = term if acc is None else _poly_add(acc, term)
            return acc

        return rec(0, frozenset(range(m)))

    max_len = n * (p + 1) + 1
    adj = np.zeros((n, n, max_len), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            mpoly = minor_without(i, j) * ((-1) ** (i + j))
            adj[j, i, : mpoly.size] = mpoly

    prod = np.zeros((max_len, n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            acc = np.zeros(max_len, dtype=np.complex128)
            for r in range(n):
                for c in range(n):
                    if a[r, c] == 0:
                        continue
                    term = conv(entry[i, r], adj[c, j]) * a[r, c]
                    acc[: term.size] += term[:max_len]
            prod[:, i, j] = acc
    det_out = np.zeros(max_len, dtype=np.complex128)
    det_out[: det_poly.size] = det_poly[:max_len]
    return det_out, prod


def polynomial_growth_degrees(z, coeffs, a, tol: Tolerance = DEFAULT_TOL, method: str = "interpolate"):
    """Lowest nonzero t-degrees of ``det(path)`` and ``path * A * adj(path)``.

    Returns ``(product_degree, det_degree)`` where a degree of ``None`` means
    the polynomial vanishes identically at the relative coefficient
    threshold.
    """
    Z = as_square(z, "Z")
    A = as_square(a, "A")
    es = [as_square(e, "path coefficient") for e in coeffs]
    for e in es:
        if e.shape != Z.shape:
            raise InvalidInputError("path coefficients must match the base shape")
    if A.shape != Z.shape:
        raise InvalidInputError("A must match the base shape")
    if method == "interpolate":
        det_coeffs, prod_coeffs = _poly_samples(Z, es, A)
    elif method == "convolve":
        det_coeffs, prod_coeffs = _poly_conv_dets(Z, es, A)
    else:
        raise InvalidInputError(f"unknown method {method!r}")

    def lowest(arr: np.ndarray) -> int | None:
        mags = np.abs(arr.reshape(arr.shape[0], -1)).max(axis=1)
        top = float(mags.max())
        if top <= 0.0:
            return None
        nz = np.nonzero(mags > POLY_COEFF_REL * top)[0]
        return int(nz[0]) if nz.size else None

    return lowest(prod_coeffs.reshape(prod_coeffs.shape[0], -1)), lowest(
        det_coeffs.reshape(-1, 1)
    )


def polynomial_path_bounded(
    z, coeffs, a, tol: Tolerance = DEFAULT_TOL, method: str = "interpolate"
) -> bool:
    """Exact boundedness of ``||U(t) A U(t)^{-1}||`` as t -> 0 along the
    polynomial path ``U(t) = Z + sum t^k E_k``.

    Since ``U^{-1} = adj(U)/det(U)``, the conjugate is bounded iff the lowest
    nonzero t-degree of ``U(t) A adj(U(t))`` is at least that of
    ``det(U(t))``.  Both polynomials are recovered exactly by evaluation at
    roots of unity and an inverse DFT (``method="interpolate"``); a direct
    coefficient-convolution fallback is available as ``method="convolve"``.
    Raises :class:`~conjlim.goodpath.InvalidPathError` for identically
    singular paths.
    """
    prod_deg, det_deg = polynomial_growth_degrees(z, coeffs, a, tol, method)
    if det_deg is None:
        raise InvalidPathError("path determinant vanishes identically")
    if prod_deg is None:
        return True
    return prod_deg >= det_deg


@dataclass(frozen=True)
class LocalityProbeReport:
    """Result of the locality falsifier for all-path boundedness claims."""

    consistent: bool
    witness: np.ndarray | None
    best_norm: float


def locality_probe(
    a,
    z,
    phi: Modifier | None = None,
    r: float = 0.1,
    *,
    seed,
    samples: int = 6,
    budget: int = 4800,
    threshold: float = 1e6,
    tol: Tolerance = DEFAULT_TOL,
) -> LocalityProbeReport:
    """Falsifier for "every path to Z keeps ``phi(U A U^{-1})`` bounded".

    Boundedness along all paths at Z forces the same at every nearby base
    point, so the probe samples base points Z' with ``||Z' - Z|| < r``
    (starting with Z itself) and runs a divergence search around each; a
    search exceeding ``threshold`` refutes the claim and the violating Z' is
    returned as witness.
    """
    A = as_square(a, "A")
    Z = as_square(z, "Z")
    if A.shape != Z.shape:
        raise InvalidInputError("A and Z must have equal shapes")
    if r <= 0:
        raise InvalidInputError(f"radius must be positive, got {r}")
    n = Z.shape[0]
    rng = np.random.default_rng(seed)
    per_probe = max(200, budget // max(1, samples))
    best = 0.0
    for i in range(samples):
        if i == 0:
            probe = Z.copy()
        else:
            g = ginibre(n, rng=rng)
            probe = Z + (r / 2.0) * rng.uniform(0.1, 1.0) * g / operator_norm(g)
        out = divergence_search(
            A,
            probe,
            phi,
            radius=r / 2.0,
            budget=per_probe,
            seed=int(rng.integers(0, 2**31 - 1)),
            stop_at=threshold,
            tol=tol,
        )
        best = max(best, out.norm)
        if out.norm >= threshold:
            return LocalityProbeReport(False, probe, float(out.norm))
    return LocalityProbeReport(True, None, float(best))
