"""Geometric midrange statistics on the cone of SPD matrices.

Thompson-metric distances, closed-form two-point midranges, geodesics and
means, and an N-point smallest-enclosing-Thompson-ball solver with bounds,
active-set diagnostics, and benchmark/visualization emitters.
"""

from .bench import BenchRecord, bench_distances, bench_means, write_records_csv
from .dataio import (
    Dataset,
    ParseError,
    embed2x2,
    embed2x2_inverse,
    load_dataset,
    load_solution,
    random_spd,
    save_dataset,
    save_solution,
)
from .geometry import (
    block_psd_certificate,
    diamond_midpoint,
    dphi_distance,
    geodesic_point,
    geometric_mean,
    karcher_mean,
    star_midrange,
    thompson_distance,
)
from .matcore import (
    DimensionMismatch,
    EigenDecomp,
    NoConvergence,
    NotPositiveDefinite,
    PencilExtremes,
    SpdMatrix,
    SymMatrix,
    cholesky,
    eigh,
    gen_eig_extremes,
    loewner_leq,
    reduced_spectrum,
    shift_spectrum_check,
    spd,
    spd_log,
    spd_pow,
    spd_sqrt,
    sym,
    sym_exp,
)
from .nsolver import (
    ActiveIndex,
    CertificateRecord,
    CertificateViolation,
    FeasibilityResult,
    MidrangeSolution,
    SolverConfig,
    SolverStalled,
    active_set,
    bounds,
    convex_form_report,
    feasibility,
    ordered_shortcut,
    project_lower,
    project_upper,
    solve_midrange,
    two_point_stationarity_check,
    vector_midrange,
)

__version__ = "0.1.0"
