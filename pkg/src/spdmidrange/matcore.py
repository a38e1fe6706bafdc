"""Dense real symmetric linear algebra.

Factorizations, eigendecompositions, spectral matrix functions, extremal
generalized eigenvalues of SPD pencils, and Loewner-order tests. All
operations are pure functions of immutable inputs (stored arrays are
write-locked), so they are safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular


class NotPositiveDefinite(ValueError):
    """Input lies outside the open cone of positive definite matrices."""


class NoConvergence(RuntimeError):
    """An iterative computation exceeded its iteration cap."""


class DimensionMismatch(ValueError):
    """Operands have incompatible dimensions."""


def max_abs(values: np.ndarray) -> float:
    """Entrywise max-abs norm, the scale used by all relative tolerances."""
    return float(np.max(np.abs(values)))


def tolerance_scale(*operands: np.ndarray) -> float:
    """max-abs over the operands, floored at 1 so tolerances stay meaningful
    for small-normed data."""
    return max(1.0, *(max_abs(v) for v in operands))


@dataclass(frozen=True)
class SymMatrix:
    """Dense real symmetric matrix of dimension n.

    Input is symmetrized as (M + M^T)/2 on construction and must be square
    with finite entries. The stored array is read-only.
    """

    values: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.values, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise DimensionMismatch(f"expected a nonempty square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("matrix entries must be finite")
        m = 0.5 * (m + m.T)
        m.setflags(write=False)
        object.__setattr__(self, "values", m)

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class SpdMatrix:
    """Symmetric matrix certified positive definite by a Cholesky factorization.

    Construction fails with :class:`NotPositiveDefinite` when any Cholesky
    pivot is nonpositive; the lower-triangular factor is kept for reuse in
    pencil reductions and triangular solves.
    """

    base: SymMatrix
    cholesky_factor: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        factor = cholesky(self.base)
        factor.setflags(write=False)
        object.__setattr__(self, "cholesky_factor", factor)

    @property
    def values(self) -> np.ndarray:
        return self.base.values

    @property
    def n(self) -> int:
        return self.base.n


def sym(values) -> SymMatrix:
    """Shorthand constructor for :class:`SymMatrix`."""
    return SymMatrix(values)


def spd(values) -> SpdMatrix:
    """Shorthand constructor for :class:`SpdMatrix` (symmetrize + certify)."""
    return SpdMatrix(SymMatrix(values))


@dataclass(frozen=True)
class EigenDecomp:
    """Full symmetric eigendecomposition with eigenvalues in ascending order."""

    values: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class PencilExtremes:
    """Extremal generalized eigenvalues lambda_min <= lambda_max of an SPD pencil."""

    lambda_min: float
    lambda_max: float
    method: str

    def __post_init__(self) -> None:
        if not (0.0 < self.lambda_min <= self.lambda_max):
            raise NotPositiveDefinite(
                f"pencil extremes ({self.lambda_min}, {self.lambda_max}) are not positive"
            )


def cholesky(s: SymMatrix) -> np.ndarray:
    """Lower-triangular L with L @ L.T == S and positive diagonal.

    Raises
    ------
    NotPositiveDefinite
        When a pivot is nonpositive, i.e. S is outside the PD cone.
    """
    try:
        return np.linalg.cholesky(s.values)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite("matrix is not positive definite") from exc


def eigh(s: SymMatrix) -> EigenDecomp:
    """Eigendecomposition of a symmetric matrix, values ascending, V orthonormal."""
    try:
        values, vectors = np.linalg.eigh(s.values)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - pathological input
        raise NoConvergence("symmetric eigensolver did not converge") from exc
    return EigenDecomp(values, vectors)


def _spectral_map(values: np.ndarray, fn) -> np.ndarray:
    w, v = np.linalg.eigh(values)
    return (v * fn(w)) @ v.T


def spd_sqrt(s: SpdMatrix) -> SymMatrix:
    """Principal matrix square root V sqrt(D) V^T."""
    return sym(_spectral_map(s.values, np.sqrt))


def spd_log(s: SpdMatrix) -> SymMatrix:
    """Matrix logarithm V log(D) V^T."""
    return sym(_spectral_map(s.values, np.log))


def spd_pow(s: SpdMatrix, t: float) -> SymMatrix:
    """Matrix power V D^t V^T for real t."""
    return sym(_spectral_map(s.values, lambda w: w**t))


def sym_exp(s: SymMatrix) -> SymMatrix:
    """Matrix exponential of a symmetric matrix; inverse of :func:`spd_log`."""
    return sym(_spectral_map(s.values, np.exp))


_POWER_SEED = 0x5EED  # fixed PRNG seed keeps the iterative path deterministic


def _power_dominant(matvec, n: int, rtol: float, max_iter: int) -> float:
    """Dominant eigenvalue of an SPD operator by power iteration.

    Stops on the Rayleigh-quotient residual ||Av - rho v|| <= rtol * rho for a
    unit vector v. The start vector is drawn from a fixed-seed PCG64 stream so
    results are reproducible and almost surely not orthogonal to the dominant
    eigenvector.
    """
    rng = np.random.default_rng(_POWER_SEED)
    x = rng.standard_normal(n)
    x /= np.linalg.norm(x)
    for _ in range(max_iter):
        y = matvec(x)
        rho = float(x @ y)
        if np.linalg.norm(y - rho * x) <= rtol * abs(rho):
            return rho
        norm = np.linalg.norm(y)
        if norm == 0.0:  # pragma: no cover - impossible for PD operators
            raise NoConvergence("power iteration hit the zero vector")
        x = y / norm
    raise NoConvergence(f"power iteration did not converge in {max_iter} iterations")


def _reduced_pencil(b_values: np.ndarray, a_factor: np.ndarray) -> np.ndarray:
    """L_A^{-1} B L_A^{-T}, the symmetric reduction of the pencil (B, A)."""
    c = solve_triangular(a_factor, b_values, lower=True, check_finite=False)
    c = solve_triangular(a_factor, c.T, lower=True, check_finite=False)
    return 0.5 * (c + c.T)


def reduced_spectrum(b: SpdMatrix, a: SpdMatrix) -> np.ndarray:
    """All generalized eigenvalues of the pencil (B, A), ascending.

    These coincide with the eigenvalues of A^{-1/2} B A^{-1/2} and of B A^{-1}.
    """
    if a.n != b.n:
        raise DimensionMismatch(f"pencil dimensions differ: {b.n} vs {a.n}")
    return np.linalg.eigvalsh(_reduced_pencil(b.values, a.cholesky_factor))


def gen_eig_extremes(
    b: SpdMatrix,
    a: SpdMatrix,
    method: str = "full",
    rtol: float = 1e-8,
    max_iter: int = 5000,
) -> PencilExtremes:
    """Extremal generalized eigenvalues of the pencil (B, A): det(B - lam A) = 0.

    ``method="full"`` eigendecomposes the reduced matrix L_A^{-1} B L_A^{-T}.
    ``method="iterative"`` runs power iteration on the reduced operator for
    lambda_max and on its inverse, applied through triangular solves against
    both Cholesky factors, for lambda_min; it raises :class:`NoConvergence`
    on near-degenerate spectra, in which case callers fall back to "full".
    """
    if a.n != b.n:
        raise DimensionMismatch(f"pencil dimensions differ: {b.n} vs {a.n}")
    if method == "full":
        w = reduced_spectrum(b, a)
        return PencilExtremes(float(w[0]), float(w[-1]), "full")
    if method != "iterative":
        raise ValueError(f"unknown method {method!r}")

    la = a.cholesky_factor
    lb = b.cholesky_factor
    b_values = b.values

    def forward(v: np.ndarray) -> np.ndarray:
        u = solve_triangular(la, v, trans="T", lower=True, check_finite=False)
        return solve_triangular(la, b_values @ u, lower=True, check_finite=False)

    def inverse(v: np.ndarray) -> np.ndarray:
        u = la @ v
        u = solve_triangular(lb, u, lower=True, check_finite=False)
        u = solve_triangular(lb, u, trans="T", lower=True, check_finite=False)
        return la.T @ u

    lam_max = _power_dominant(forward, a.n, rtol, max_iter)
    lam_min = 1.0 / _power_dominant(inverse, a.n, rtol, max_iter)
    return PencilExtremes(lam_min, lam_max, "iterative")


def loewner_leq(a: SymMatrix, b: SymMatrix, tol: float = 0.0) -> bool:
    """Loewner order test: A <= B iff B - A is positive semidefinite.

    The check is lambda_min(B - A) >= -tol * max(1, ||B - A||_maxabs).
    """
    if a.n != b.n:
        raise DimensionMismatch(f"dimensions differ: {a.n} vs {b.n}")
    if tol < 0.0:
        raise ValueError("tol must be nonnegative")
    diff = b.values - a.values
    lam_min = float(np.linalg.eigvalsh(diff)[0])
    return lam_min >= -tol * max(1.0, max_abs(diff))


def shift_spectrum_check(m: np.ndarray, c1: float, c2: float) -> np.ndarray:
    """Spectrum of c1*M + c2*I as the shifted values {c1 lam_i(M) + c2}, sorted.

    Test utility for diagonalizable M with real spectrum (e.g. products of SPD
    matrices); complains if the computed spectrum has a nonreal part.
    """
    lam = np.linalg.eigvals(np.asarray(m, dtype=float))
    if np.max(np.abs(lam.imag)) > 1e-8 * max(1.0, np.max(np.abs(lam))):
        raise ValueError("matrix spectrum is not real; shift check is undefined")
    return np.sort(c1 * lam.real + c2)
