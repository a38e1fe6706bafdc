"""Affine-invariant geometry on the SPD cone.

Distances d_1, d_2, d_inf, the closed-form two-point midrange, geometric mean,
diamond midpoint, Riemannian and projective-line geodesics, the Karcher mean,
and the block-PSD extremal-ordering certificate.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .matcore import (
    DimensionMismatch,
    NoConvergence,
    SpdMatrix,
    SymMatrix,
    gen_eig_extremes,
    max_abs,
    reduced_spectrum,
    spd,
)

DISTANCE_KINDS = (1, 2, math.inf)
GEODESIC_KINDS = ("riemannian", "nussbaum")

#: below this relative spread the pencil is treated as proportional (B = c A)
_DEGENERATE_REL = 1e-12


def _extremes(b: SpdMatrix, a: SpdMatrix, method: str) -> tuple[float, float]:
    """(lambda_min, lambda_max) of the pencil (B, A); the iterative engine
    falls back to the dense one on NoConvergence."""
    if method == "iterative":
        try:
            ext = gen_eig_extremes(b, a, "iterative")
            return ext.lambda_min, ext.lambda_max
        except NoConvergence:
            pass
    ext = gen_eig_extremes(b, a, "full")
    return ext.lambda_min, ext.lambda_max


def thompson_distance(a: SpdMatrix, b: SpdMatrix, method: str = "full") -> float:
    """d_inf(A, B) = log max(lambda_max(B A^{-1}), lambda_max(A B^{-1}))."""
    lam_min, lam_max = _extremes(b, a, method)
    return max(math.log(lam_max), -math.log(lam_min))


def dphi_distance(a: SpdMatrix, b: SpdMatrix, p: float) -> float:
    """Affine-invariant distance ||log A^{-1/2} B A^{-1/2}||_p for p in {1, 2, inf}.

    p=2 is the Riemannian distance, p=inf the Thompson metric, p=1 the
    distance underlying geometric medians.
    """
    if p not in DISTANCE_KINDS:
        raise ValueError(f"p must be one of {DISTANCE_KINDS}, got {p}")
    logs = np.log(reduced_spectrum(b, a))
    if p == 1:
        return float(np.sum(np.abs(logs)))
    if p == 2:
        return float(math.sqrt(np.sum(logs * logs)))
    return float(np.max(np.abs(logs)))


def star_midrange(a: SpdMatrix, b: SpdMatrix, method: str = "full") -> SpdMatrix:
    """Closed-form Thompson midpoint (B + sqrt(lmin lmax) A) / (sqrt(lmin) + sqrt(lmax)).

    (lmin, lmax) are the extremal generalized eigenvalues of the pencil (B, A),
    so only two extremal eigenvalues are needed; the result is a linear
    combination of the inputs and never goes through matrix square roots.
    """
    lam_min, lam_max = _extremes(b, a, method)
    root = math.sqrt(lam_min * lam_max)
    denom = math.sqrt(lam_min) + math.sqrt(lam_max)
    return spd((b.values + root * a.values) / denom)


def geometric_mean(a: SpdMatrix, b: SpdMatrix) -> SpdMatrix:
    """A # B = A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2}, the d_p-midpoint
    for every gauge p."""
    w, v = np.linalg.eigh(a.values)
    sqrt_a = (v * np.sqrt(w)) @ v.T
    isqrt_a = (v / np.sqrt(w)) @ v.T
    inner = isqrt_a @ b.values @ isqrt_a
    wi, vi = np.linalg.eigh(0.5 * (inner + inner.T))
    inner_root = (vi * np.sqrt(wi)) @ vi.T
    return spd(sqrt_a @ inner_root @ sqrt_a)


def diamond_midpoint(a: SpdMatrix, b: SpdMatrix, method: str = "full") -> SpdMatrix:
    """Two-branch Thompson midpoint proportional to A + B.

    Scales A + B by sqrt(lmax)/(1 + lmax) when lmin*lmax >= 1 and by
    sqrt(lmin)/(1 + lmin) otherwise, with extremes from the pencil (B, A).
    Unlike the star midrange it does not scale geometrically in (a, b).
    """
    lam_min, lam_max = _extremes(b, a, method)
    if lam_min * lam_max >= 1.0:
        factor = math.sqrt(lam_max) / (1.0 + lam_max)
    else:
        factor = math.sqrt(lam_min) / (1.0 + lam_min)
    return spd(factor * (a.values + b.values))


def geodesic_point(a: SpdMatrix, b: SpdMatrix, t: float, kind: str) -> SpdMatrix:
    """Point at parameter t on a minimal geodesic from A to B.

    ``kind="riemannian"`` is the curve A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2},
    length-minimizing for every d_p. ``kind="nussbaum"`` is the projective
    straight line, minimal for d_inf; its midpoint t=1/2 reproduces the star
    midrange. Endpoints reproduce A and B.
    """
    if kind not in GEODESIC_KINDS:
        raise ValueError(f"kind must be one of {GEODESIC_KINDS}, got {kind!r}")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    if kind == "riemannian":
        w, v = np.linalg.eigh(a.values)
        sqrt_a = (v * np.sqrt(w)) @ v.T
        isqrt_a = (v / np.sqrt(w)) @ v.T
        inner = isqrt_a @ b.values @ isqrt_a
        wi, vi = np.linalg.eigh(0.5 * (inner + inner.T))
        inner_pow = (vi * wi**t) @ vi.T
        return spd(sqrt_a @ inner_pow @ sqrt_a)

    lam_min, lam_max = _extremes(b, a, "full")
    if lam_max - lam_min <= _DEGENERATE_REL * lam_max:
        # proportional pencil: the projective line degenerates to lam^t A
        return spd(lam_min**t * a.values)
    spread = lam_max - lam_min
    coeff_b = (lam_max**t - lam_min**t) / spread
    coeff_a = (lam_max * lam_min**t - lam_min * lam_max**t) / spread
    return spd(coeff_b * b.values + coeff_a * a.values)


def karcher_mean(
    ys: Sequence[SpdMatrix], tol: float = 1e-8, max_iter: int = 1000
) -> SpdMatrix:
    """Karcher (geometric) mean by unit-step fixed-point iteration.

    Iterates X <- X^{1/2} exp(mean_i log(X^{-1/2} Y_i X^{-1/2})) X^{1/2} from
    the arithmetic mean and stops when the Frobenius norm of the mean log is
    at most ``tol``. For two matrices this converges to the geometric mean.

    Raises
    ------
    NoConvergence
        After ``max_iter`` iterations above tolerance.
    """
    ys = list(ys)
    if not ys:
        raise ValueError("karcher_mean needs at least one matrix")
    n = ys[0].n
    if any(y.n != n for y in ys):
        raise DimensionMismatch("matrices must share one dimension")
    x = np.mean([y.values for y in ys], axis=0)
    for _ in range(max_iter):
        w, v = np.linalg.eigh(x)
        sqrt_x = (v * np.sqrt(w)) @ v.T
        isqrt_x = (v / np.sqrt(w)) @ v.T
        acc = np.zeros_like(x)
        for y in ys:
            inner = isqrt_x @ y.values @ isqrt_x
            wi, vi = np.linalg.eigh(0.5 * (inner + inner.T))
            acc += (vi * np.log(wi)) @ vi.T
        grad = acc / len(ys)
        grad = 0.5 * (grad + grad.T)
        if float(np.linalg.norm(grad)) <= tol:
            return spd(x)
        wg, vg = np.linalg.eigh(grad)
        x = sqrt_x @ ((vg * np.exp(wg)) @ vg.T) @ sqrt_x
        x = 0.5 * (x + x.T)
    raise NoConvergence(f"karcher mean did not reach tol={tol} in {max_iter} iterations")


def block_psd_certificate(
    a: SpdMatrix, b: SpdMatrix, x: SymMatrix, tol: float = 1e-8
) -> bool:
    """True iff the block matrix [[A, X], [X, B]] is PSD within tolerance.

    For symmetric X this certifies X <= A # B; the star midrange attains the
    maximum over the real span of A and B, so it sits on the boundary.
    """
    if not (a.n == b.n == x.n):
        raise DimensionMismatch("block certificate needs a common dimension")
    block = np.block([[a.values, x.values], [x.values, b.values]])
    lam_min = float(np.linalg.eigvalsh(block)[0])
    return lam_min >= -tol * max(1.0, max_abs(block))
