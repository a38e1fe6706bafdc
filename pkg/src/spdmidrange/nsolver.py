"""N-point geometric midrange: the smallest enclosing Thompson ball.

Cost bounds, a quasiconvex bisection whose feasibility core is Dykstra's
cyclic projection algorithm over the epigraph constraints
e^{-t} Y_i <= X <= e^{t} Y_i, active-set extraction with side labels,
ordered-chain and diagonal shortcuts, and post-hoc optimality certificates
for the convex (xi, tau) reformulation.

A solve is single-threaded and deterministic for a fixed configuration:
the projection order is the input order, lower set then upper set per index.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.linalg import lapack

from .geometry import star_midrange, thompson_distance
from .matcore import (
    DimensionMismatch,
    SpdMatrix,
    SymMatrix,
    gen_eig_extremes,
    loewner_leq,
    max_abs,
    spd,
)

logger = logging.getLogger(__name__)

#: infeasibility is declared when the best violation fails to improve by this
#: relative factor over a full stall window of cycles
_STALL_IMPROVEMENT = 1e-6


class SolverStalled(RuntimeError):
    """The feasibility core exhausted its projection budget at the final bracket.

    The best feasible incumbent is still available as ``.solution``.
    """

    def __init__(self, message: str, solution: "MidrangeSolution"):
        super().__init__(message)
        self.solution = solution


class CertificateViolation(RuntimeError):
    """A solution failed the convex-form optimality certificate."""


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances and iteration caps for the bisection solver.

    bisect_tol: final gap on t between the infeasible and feasible brackets.
    feas_tol: relative slack-eigenvalue tolerance accepted by the projection
        core (violations are scaled by max(1, maxabs) of the constraint matrix).
    stall_window: cycles of the projection core without relative improvement
        before a probe is declared infeasible.
    max_proj_iters: cap on individual projections per feasibility call.
    active_tol: relative tolerance classifying a data matrix as active.
    """

    bisect_tol: float = 1e-6
    feas_tol: float = 1e-8
    stall_window: int = 200
    max_proj_iters: int = 20000
    active_tol: float = 1e-6

    def __post_init__(self) -> None:
        if self.bisect_tol <= np.finfo(float).eps:
            raise ValueError("bisect_tol must exceed machine epsilon")
        if min(self.feas_tol, self.active_tol) <= 0.0:
            raise ValueError("tolerances must be positive")
        if min(self.stall_window, self.max_proj_iters) <= 0:
            raise ValueError("iteration limits must be positive")


class ActiveIndex(NamedTuple):
    """Index of an active data matrix with the side(s) of the tight constraint."""

    index: int
    side: str  # "upper" | "lower" | "both"


@dataclass
class FeasibilityResult:
    """Outcome of one feasibility probe at fixed t.

    ``reason`` is "converged" for a certified point, "stalled" when the
    violation flattened out, "iteration_cap" when the projection budget ran
    out first. Infeasibility is a verdict, not an error.
    """

    feasible: bool
    x: SpdMatrix | None
    residual: float
    reason: str
    projections: int
    cycles: int


@dataclass
class MidrangeSolution:
    """Solution record for the N-point midrange problem.

    ``two_active_attains_lower`` holds the dichotomy diagnostic: when exactly
    two matrices are active at a converged optimum the cost must sit at the
    lower bound (within 10 * bisect_tol); None when the premise does not apply.
    """

    x: SpdMatrix
    t_star: float
    lower: float
    upper: float
    active: list[ActiveIndex]
    status: str  # "converged" | "iteration_cap" | "stalled"
    iterations: dict[str, int]
    two_active_attains_lower: bool | None = None


# ---------------------------------------------------------------------------
# exact Frobenius projections onto one-sided Loewner constraints


def _psd_part(m: np.ndarray) -> np.ndarray:
    """Nearest PSD matrix in Frobenius norm: clip negative eigenvalues."""
    w, v, info = lapack.dsyevd(m)
    if info != 0:  # pragma: no cover - LAPACK failure on finite input
        w, v = np.linalg.eigh(m)
    return (v * np.clip(w, 0.0, None)) @ v.T


def project_upper(x: SymMatrix, y: SpdMatrix, s: float) -> SymMatrix:
    """Frobenius projection of X onto {X : X <= s Y}, as s Y - psd(s Y - X)."""
    if s <= 0.0:
        raise ValueError("s must be positive")
    if x.n != y.n:
        raise DimensionMismatch("projection operands must share a dimension")
    bound = s * y.values
    return SymMatrix(bound - _psd_part(bound - x.values))


def project_lower(x: SymMatrix, y: SpdMatrix, s: float) -> SymMatrix:
    """Frobenius projection of X onto {X : X >= s Y}, as s Y + psd(X - s Y)."""
    if s <= 0.0:
        raise ValueError("s must be positive")
    if x.n != y.n:
        raise DimensionMismatch("projection operands must share a dimension")
    bound = s * y.values
    return SymMatrix(bound + _psd_part(x.values - bound))


# ---------------------------------------------------------------------------
# Dykstra feasibility kernels


def _dykstra_general(lowers, uppers, scales, x, cfg: SolverConfig):
    """Cyclic Dykstra iteration over the 2N constraint sets, ndarray path.

    Returns (feasible, x_values, residual, reason, projections, cycles). The
    violation of the running iterate is evaluated once per cycle and drives
    both acceptance and stall detection.

    Slack constraints are cheap: a Dykstra correction resets to exactly zero
    whenever the corrected point lands inside its set, and a certified
    feasibility margin stays valid while the iterate has drifted (in
    Frobenius norm, which dominates the spectral perturbation of eigenvalues)
    by less than that margin. Such constraints skip LAPACK entirely; only the
    binding ones pay for eigendecompositions.
    """
    count = 2 * len(lowers)
    # constraint k checks sign_k * (X - bound_k) >= 0: even k lower, odd k upper
    bound = []
    scale = []
    for i, (low, up) in enumerate(zip(lowers, uppers)):
        bound.extend((low, up))
        scale.extend((scales[i], scales[len(lowers) + i]))
    sign = [1.0 if k % 2 == 0 else -1.0 for k in range(count)]
    corrections: list[np.ndarray | None] = [None] * count  # None == exact zero
    margin = [-math.inf] * count  # certified slack eigenvalue at drift mark
    mark = [0.0] * count
    drift = 0.0
    best_history: list[float] = []
    best = math.inf
    projections = 0
    cycle = 0
    while True:
        cycle += 1
        for k in range(count):
            projections += 1
            corr = corrections[k]
            if corr is None:
                if margin[k] > drift - mark[k]:
                    continue  # certified slack: projection is the identity
                z = x
            else:
                z = x + corr
            diff = sign[k] * (z - bound[k])
            w, v, info = lapack.dsyevd(diff)
            if info != 0:  # pragma: no cover - LAPACK failure on finite input
                w, v = np.linalg.eigh(diff)
            if w[0] >= 0.0:
                # z already satisfies the constraint: x := z, correction := 0
                if corr is not None:
                    drift += float(np.linalg.norm(corr))
                    x = z
                    corrections[k] = None
                margin[k] = float(w[0])
                mark[k] = drift
                continue
            part = (v * np.clip(w, 0.0, None)) @ v.T
            projected = bound[k] + sign[k] * part
            new_corr = z - projected
            drift += float(np.linalg.norm(projected - x))
            corrections[k] = new_corr
            margin[k] = -math.inf
            x = projected
        residual = 0.0
        for k in range(count):
            if corrections[k] is None and margin[k] > drift - mark[k]:
                continue  # certified slack: violation is zero
            diff = sign[k] * (x - bound[k])
            lam = float(lapack.dsyevd(diff, compute_v=0)[0][0])
            if corrections[k] is None and lam >= 0.0:
                margin[k] = lam
                mark[k] = drift
            if -lam / scale[k] > residual:
                residual = -lam / scale[k]
        if residual <= cfg.feas_tol:
            return True, x, residual, "converged", projections, cycle
        if projections >= cfg.max_proj_iters:
            return False, None, residual, "iteration_cap", projections, cycle
        best = min(best, residual)
        best_history.append(best)
        if cycle > cfg.stall_window and best_history[-1] > best_history[
            -1 - cfg.stall_window
        ] * (1.0 - _STALL_IMPROVEMENT):
            return False, None, residual, "stalled", projections, cycle


def _eig2_min(a: float, b: float, c: float) -> float:
    h = 0.5 * (a + c)
    return h - math.hypot(0.5 * (a - c), b)


def _psd_part2(a: float, b: float, c: float) -> tuple[float, float, float]:
    """2x2 closed-form PSD clip; keeps exact zeros off-diagonal for diagonal input."""
    if b == 0.0:
        return (a if a > 0.0 else 0.0, 0.0, c if c > 0.0 else 0.0)
    h = 0.5 * (a + c)
    r = math.hypot(0.5 * (a - c), b)
    low, high = h - r, h + r
    if low >= 0.0:
        return a, b, c
    if high <= 0.0:
        return 0.0, 0.0, 0.0
    # rank-1 part high * v v^T; pick the better-conditioned eigenvector form
    if a <= c:
        v1, v2 = b, high - a
    else:
        v1, v2 = high - c, b
    norm_sq = v1 * v1 + v2 * v2
    f = high / norm_sq
    return f * v1 * v1, f * v1 * v2, f * v2 * v2


def _dykstra_2x2(lowers, uppers, scales, x, cfg: SolverConfig):
    """Scalarized Dykstra kernel for n = 2; same iteration as the general path.

    Symmetric 2x2 matrices travel as (a, b, c) float triples, with closed-form
    eigenvalue clips, which keeps the near-optimal probes of the bisection
    affordable where convergence is slowest.
    """
    count = len(lowers)
    low = [(float(m[0, 0]), float(m[0, 1]), float(m[1, 1])) for m in lowers]
    upp = [(float(m[0, 0]), float(m[0, 1]), float(m[1, 1])) for m in uppers]
    xa, xb, xc = float(x[0, 0]), float(x[0, 1]), float(x[1, 1])
    corr = [(0.0, 0.0, 0.0) for _ in range(2 * count)]
    best_history: list[float] = []
    best = math.inf
    projections = 0
    cycle = 0
    feas_tol = cfg.feas_tol
    while True:
        cycle += 1
        for i in range(count):
            la, lb, lc = low[i]
            ca, cb, cc = corr[2 * i]
            za, zb, zc = xa + ca, xb + cb, xc + cc
            da, db, dc = za - la, zb - lb, zc - lc
            if _eig2_min(da, db, dc) >= 0.0:
                xa, xb, xc = za, zb, zc
                corr[2 * i] = (0.0, 0.0, 0.0)
            else:
                pa, pb, pc = _psd_part2(da, db, dc)
                xa, xb, xc = la + pa, lb + pb, lc + pc
                corr[2 * i] = (za - xa, zb - xb, zc - xc)
            ua, ub, uc = upp[i]
            ca, cb, cc = corr[2 * i + 1]
            za, zb, zc = xa + ca, xb + cb, xc + cc
            da, db, dc = ua - za, ub - zb, uc - zc
            if _eig2_min(da, db, dc) >= 0.0:
                xa, xb, xc = za, zb, zc
                corr[2 * i + 1] = (0.0, 0.0, 0.0)
            else:
                pa, pb, pc = _psd_part2(da, db, dc)
                xa, xb, xc = ua - pa, ub - pb, uc - pc
                corr[2 * i + 1] = (za - xa, zb - xb, zc - xc)
            projections += 2
        residual = 0.0
        for i in range(count):
            la, lb, lc = low[i]
            v = -_eig2_min(xa - la, xb - lb, xc - lc) / scales[i]
            if v > residual:
                residual = v
            ua, ub, uc = upp[i]
            v = -_eig2_min(ua - xa, ub - xb, uc - xc) / scales[count + i]
            if v > residual:
                residual = v
        if residual <= feas_tol:
            return True, np.array([[xa, xb], [xb, xc]]), residual, "converged", projections, cycle
        if projections >= cfg.max_proj_iters:
            return False, None, residual, "iteration_cap", projections, cycle
        if residual < best:
            best = residual
        best_history.append(best)
        if cycle > cfg.stall_window and best_history[-1] > best_history[
            -1 - cfg.stall_window
        ] * (1.0 - _STALL_IMPROVEMENT):
            return False, None, residual, "stalled", projections, cycle


def feasibility(
    ys: Sequence[SpdMatrix],
    t: float,
    cfg: SolverConfig | None = None,
    x0: SymMatrix | SpdMatrix | None = None,
) -> FeasibilityResult:
    """Decide whether some X satisfies e^{-t} Y_i <= X <= e^{t} Y_i for all i.

    Runs Dykstra's cyclic algorithm with per-set correction terms from ``x0``
    (default: the arithmetic mean). Feasible is declared when the worst
    relative constraint violation
    max_i max(-lam_min(e^t Y_i - X), -lam_min(X - e^{-t} Y_i)) / scale_i
    drops to ``feas_tol``, with scale_i = max(1, maxabs of the constraint
    matrix). Infeasible is declared when the best violation stops improving
    over a stall window or the projection budget runs out; the verdict is
    heuristic, which is safe inside the bisection bracket.
    """
    cfg = cfg or SolverConfig()
    ys = list(ys)
    if not ys:
        raise ValueError("feasibility needs at least one matrix")
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    n = ys[0].n
    if any(y.n != n for y in ys):
        raise DimensionMismatch("matrices must share one dimension")
    xi, tau = math.exp(t), math.exp(-t)
    lowers = [tau * y.values for y in ys]
    uppers = [xi * y.values for y in ys]
    scales = np.array(
        [max(1.0, max_abs(m)) for m in lowers] + [max(1.0, max_abs(m)) for m in uppers]
    )
    start = np.mean([y.values for y in ys], axis=0) if x0 is None else np.array(x0.values)
    kernel = _dykstra_2x2 if n == 2 else _dykstra_general
    feasible, x_values, residual, reason, projections, cycles = kernel(
        lowers, uppers, scales, start, cfg
    )
    x = spd(x_values) if feasible else None
    return FeasibilityResult(feasible, x, residual, reason, projections, cycles)


# ---------------------------------------------------------------------------
# bounds, bisection driver, diagnostics


def _distance_matrix(ys: Sequence[SpdMatrix]) -> np.ndarray:
    count = len(ys)
    d = np.zeros((count, count))
    for i in range(count):
        for j in range(i + 1, count):
            d[i, j] = d[j, i] = thompson_distance(ys[i], ys[j])
    return d


def _bounds_from_matrix(d: np.ndarray) -> tuple[float, float, int]:
    lower = 0.5 * float(d.max())
    row_max = d.max(axis=1)
    index = int(np.argmin(row_max))
    upper = float(row_max[index])
    slack = 1e-12 * max(1.0, upper)
    if not (lower <= upper + slack and upper <= 2.0 * lower + slack):
        raise RuntimeError(f"bound sandwich violated: l={lower}, u={upper}")
    return lower, upper, index


def bounds(ys: Sequence[SpdMatrix]) -> tuple[float, float]:
    """Cost bounds (l, u): l = half the Thompson diameter,
    u = min_i max_j d_inf(Y_i, Y_j), with l <= u <= 2l."""
    ys = list(ys)
    if not ys:
        raise ValueError("bounds needs at least one matrix")
    if len(ys) == 1:
        return 0.0, 0.0
    lower, upper, _ = _bounds_from_matrix(_distance_matrix(ys))
    return lower, upper


def _active_gaps(x: SpdMatrix, t: float, ys: Sequence[SpdMatrix]) -> list[tuple[float, float]]:
    """(t - log lambda_max, t + log lambda_min) of the pencil (X, Y_j) per index."""
    gaps = []
    for y in ys:
        ext = gen_eig_extremes(x, y, "full")
        gaps.append((t - math.log(ext.lambda_max), t + math.log(ext.lambda_min)))
    return gaps


def _classify(gaps, threshold: float) -> list[ActiveIndex]:
    out: list[ActiveIndex] = []
    for j, (upper_gap, lower_gap) in enumerate(gaps):
        if min(upper_gap, lower_gap) <= threshold:
            on_upper = upper_gap <= threshold
            on_lower = lower_gap <= threshold
            side = "both" if (on_upper and on_lower) else ("upper" if on_upper else "lower")
            out.append(ActiveIndex(j, side))
    return out


def active_set(
    x: SpdMatrix,
    t: float,
    ys: Sequence[SpdMatrix],
    active_tol: float = 1e-6,
) -> list[ActiveIndex]:
    """Indices with d_inf(X, Y_j) within active_tol * max(1, t) of t.

    Each active index is labeled "upper" when log lambda_max of the pencil
    (X, Y_j) is tight, "lower" when -log lambda_min is tight, "both" for both.
    """
    return _classify(_active_gaps(x, t, ys), active_tol * max(1.0, t))


def _check_opposing_sides(gaps, t: float, active_tol: float, count: int) -> None:
    # at an optimum with N >= 2 some upper side and some lower side must be
    # tight; checked with 100x leniency since the reported t overshoots the
    # true optimum by up to bisect_tol
    if count < 2:
        return
    relaxed = _classify(gaps, 100.0 * active_tol * max(1.0, t))
    sides = {s for _, s in relaxed}
    if "both" in sides or {"upper", "lower"} <= sides:
        return
    logger.warning(
        "optimality diagnostic: no tight upper/lower pair among active set %s", relaxed
    )


def solve_midrange(
    ys: Sequence[SpdMatrix], cfg: SolverConfig | None = None
) -> MidrangeSolution:
    """Minimize max_i d_inf(X, Y_i) by bisection on the quasiconvex epigraph form.

    The bracket starts at the cost bounds [l, u]; u is feasible by construction
    with X = the 1-center data point, so no projection work is spent there.
    Each certified probe warm-starts the next feasibility call (corrections
    reset). Terminates when the bracket closes to ``bisect_tol`` and returns
    the last certified (X, t) with bounds, labeled active set, and counters.

    Raises
    ------
    SolverStalled
        When the feasibility core exhausts ``max_proj_iters`` at the final
        bracket; the exception carries the best feasible incumbent.
    """
    cfg = cfg or SolverConfig()
    ys = list(ys)
    if not ys:
        raise ValueError("solve_midrange needs at least one matrix")
    n = ys[0].n
    if any(y.n != n for y in ys):
        raise DimensionMismatch("matrices must share one dimension")
    counters = {"bisection_steps": 0, "feasibility_calls": 0, "projections": 0}
    if len(ys) == 1:
        return MidrangeSolution(
            x=ys[0],
            t_star=0.0,
            lower=0.0,
            upper=0.0,
            active=[ActiveIndex(0, "both")],
            status="converged",
            iterations=counters,
        )

    lower, upper, center_index = _bounds_from_matrix(_distance_matrix(ys))
    lo, hi = lower, upper
    x_values = np.array(ys[center_index].values)
    last: FeasibilityResult | None = None
    while hi - lo > cfg.bisect_tol:
        mid = 0.5 * (lo + hi)
        result = feasibility(ys, mid, cfg, x0=SymMatrix(x_values))
        counters["bisection_steps"] += 1
        counters["feasibility_calls"] += 1
        counters["projections"] += result.projections
        if result.feasible:
            hi = mid
            x_values = result.x.values
        else:
            lo = mid
        last = result

    x_star = spd(x_values)
    gaps = _active_gaps(x_star, hi, ys)
    active = _classify(gaps, cfg.active_tol * max(1.0, hi))
    pair_flag = (hi - lower <= 10.0 * cfg.bisect_tol) if len(active) == 2 else None
    solution = MidrangeSolution(
        x=x_star,
        t_star=hi,
        lower=lower,
        upper=upper,
        active=active,
        status="converged",
        iterations=counters,
        two_active_attains_lower=pair_flag,
    )
    if last is not None and not last.feasible and last.reason == "iteration_cap":
        solution.status = "iteration_cap"
        raise SolverStalled(
            "projection budget exhausted at the final bracket "
            f"(residual {last.residual:.3e}); best incumbent attached",
            solution,
        )
    _check_opposing_sides(gaps, hi, cfg.active_tol, len(ys))
    if pair_flag is False:
        logger.warning(
            "attainment diagnostic: two active matrices but t_star - l = %.3e "
            "exceeds 10 * bisect_tol",
            hi - lower,
        )
    return solution


def ordered_shortcut(
    ys: Sequence[SpdMatrix], cfg: SolverConfig | None = None
) -> MidrangeSolution | None:
    """Closed-form solve when the data is a Loewner chain.

    Scans for a global minimum Y_m and maximum Y_M in the Loewner order
    (tolerance ``feas_tol``); when both exist the problem collapses to the
    two-point midrange of (Y_m, Y_M), solved by the star midpoint at cost
    t = d_inf(Y_m, Y_M)/2 with the lower bound attained. Returns None when
    no chain extremes exist.
    """
    cfg = cfg or SolverConfig()
    ys = list(ys)
    if len(ys) < 2:
        raise ValueError("ordered_shortcut needs at least two matrices")
    tol = cfg.feas_tol
    bottom = next(
        (m for m in range(len(ys)) if all(loewner_leq(ys[m].base, y.base, tol) for y in ys)),
        None,
    )
    if bottom is None:
        return None
    top = next(
        (m for m in range(len(ys)) if all(loewner_leq(y.base, ys[m].base, tol) for y in ys)),
        None,
    )
    if top is None:
        return None
    x = star_midrange(ys[bottom], ys[top])
    t = 0.5 * thompson_distance(ys[bottom], ys[top])
    lower, upper, _ = _bounds_from_matrix(_distance_matrix(ys))
    active = active_set(x, t, ys, cfg.active_tol)
    pair_flag = (t - lower <= 10.0 * cfg.bisect_tol) if len(active) == 2 else None
    return MidrangeSolution(
        x=x,
        t_star=t,
        lower=lower,
        upper=upper,
        active=active,
        status="converged",
        iterations={"bisection_steps": 0, "feasibility_calls": 0, "projections": 0},
        two_active_attains_lower=pair_flag,
    )


def vector_midrange(ys: Sequence[np.ndarray]) -> np.ndarray:
    """Coordinatewise geometric mean of the coordinatewise min and max.

    Solves the affine-invariant midrange problem in the positive orthant
    exactly, attaining its lower bound.
    """
    arr = np.asarray(list(ys), dtype=float)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError("expected a nonempty list of equal-length vectors")
    if np.any(arr <= 0.0):
        raise ValueError("vector entries must be positive")
    return np.sqrt(arr.min(axis=0) * arr.max(axis=0))


def two_point_stationarity_check(
    x: SpdMatrix, y1: SpdMatrix, y2: SpdMatrix, tol: float = 1e-6
) -> bool:
    """Check the crossed two-point optimality equalities at X.

    True iff log lambda_max of the pencil (X, Y_1) equals -log lambda_min of
    (X, Y_2) and the mirrored pair agrees, both within ``tol``. Holds for the
    star midrange of a pair with distinct pencil extremes.
    """
    e1 = gen_eig_extremes(x, y1, "full")
    e2 = gen_eig_extremes(x, y2, "full")
    up1, low1 = math.log(e1.lambda_max), -math.log(e1.lambda_min)
    up2, low2 = math.log(e2.lambda_max), -math.log(e2.lambda_min)
    return abs(up1 - low2) <= tol and abs(up2 - low1) <= tol


@dataclass(frozen=True)
class CertificateRecord:
    """Post-hoc certificate for the convex (xi, tau) reformulation."""

    xi: float
    tau: float
    xi_tau_gap: float
    lower_margins: tuple[float, ...]
    upper_margins: tuple[float, ...]
    tight: bool


def convex_form_report(
    solution: MidrangeSolution,
    ys: Sequence[SpdMatrix],
    feas_tol: float = 1e-8,
) -> CertificateRecord:
    """Verify a solution against the convex formulation with xi=e^t, tau=e^{-t}.

    Checks tau Y_i <= X <= xi Y_i within ``feas_tol`` (same relative scaling as
    the feasibility core), that 1/xi - tau <= feas_tol, and that the coupling
    constraint is tight at the optimum.

    Raises
    ------
    CertificateViolation
        Listing the failing constraint indices.
    """
    ys = list(ys)
    xi = math.exp(solution.t_star)
    tau = math.exp(-solution.t_star)
    x = solution.x.values
    lower_margins = []
    upper_margins = []
    failing = []
    for i, y in enumerate(ys):
        low = tau * y.values
        high = xi * y.values
        low_margin = float(np.linalg.eigvalsh(x - low)[0]) / max(1.0, max_abs(low))
        high_margin = float(np.linalg.eigvalsh(high - x)[0]) / max(1.0, max_abs(high))
        lower_margins.append(low_margin)
        upper_margins.append(high_margin)
        if low_margin < -feas_tol or high_margin < -feas_tol:
            failing.append(i)
    gap = 1.0 / xi - tau
    tight = abs(gap) <= feas_tol
    if failing:
        raise CertificateViolation(f"LMI constraints violated at indices {failing}")
    if gap > feas_tol or not tight:
        raise CertificateViolation(f"coupling constraint 1/xi - tau = {gap:.3e} not tight")
    return CertificateRecord(
        xi=xi,
        tau=tau,
        xi_tau_gap=gap,
        lower_margins=tuple(lower_margins),
        upper_margins=tuple(upper_margins),
        tight=tight,
    )
