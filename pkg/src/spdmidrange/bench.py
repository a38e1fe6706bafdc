"""Timing harness for means and distances across matrix dimension.

Reports medians (with p10/p90) of wall-clock times over freshly generated
random SPD pairs. Absolute numbers are machine-dependent; the meaningful
output is the ordering trend: the arithmetic mean and Euclidean distance are
cheapest, and at large n the extremal-eigenvalue midrange and Thompson
distance undercut the full-decomposition geometric mean and Riemannian
distance. Timing loops are single-threaded with one excluded warm-up call,
and a timed result is discarded if it fails basic validity checks.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .dataio import random_spd
from .geometry import dphi_distance, geometric_mean, star_midrange, thompson_distance
from .matcore import NotPositiveDefinite, SpdMatrix, spd

CSV_COLUMNS = ("n", "operation", "trials", "median_s", "p10_s", "p90_s")


@dataclass(frozen=True)
class BenchRecord:
    n: int
    operation: str
    trials: int
    median_seconds: float
    p10_seconds: float
    p90_seconds: float

    def __post_init__(self) -> None:
        if self.trials < 3:
            raise ValueError("a benchmark record needs at least 3 valid trials")
        if not self.p10_seconds <= self.median_seconds <= self.p90_seconds:
            raise ValueError("percentiles out of order")


def _valid_mean(result: SpdMatrix | np.ndarray) -> bool:
    values = result.values if isinstance(result, SpdMatrix) else result
    if not np.all(np.isfinite(values)):
        return False
    try:
        spd(values)
    except NotPositiveDefinite:
        return False
    return True


def _valid_distance(result: float) -> bool:
    return np.isfinite(result) and result >= 0.0


def _time_operation(op: Callable, pairs, validate) -> list[float]:
    a0, b0 = pairs[0]
    validate(op(a0, b0))  # warm-up, excluded from timing
    times = []
    for a, b in pairs:
        start = time.perf_counter()
        result = op(a, b)
        elapsed = time.perf_counter() - start
        if validate(result):
            times.append(elapsed)
    return times


def _record(n: int, name: str, times: list[float]) -> BenchRecord:
    if len(times) < 3:
        raise RuntimeError(f"operation {name!r} produced fewer than 3 valid trials")
    p10, median, p90 = np.percentile(times, [10, 50, 90])
    return BenchRecord(n, name, len(times), float(median), float(p10), float(p90))


def _pairs_for(n: int, trials: int, seed: int):
    # one child seed per dimension keeps inputs deterministic and independent
    child = int(np.random.SeedSequence(seed).generate_state(1)[0] ^ n)
    data = random_spd(n, 2 * trials, seed=child, model="wishart_shifted")
    return [(data.matrices[2 * i], data.matrices[2 * i + 1]) for i in range(trials)]


def bench_means(n_list: Sequence[int], trials: int, seed: int) -> list[BenchRecord]:
    """Time the star midrange (iterative extremes), geometric mean, and
    arithmetic mean on random SPD pairs for each dimension in ``n_list``."""
    if not n_list or list(n_list) != sorted(n_list):
        raise ValueError("n_list must be nonempty and ascending")
    operations = [
        ("star_midrange", lambda a, b: star_midrange(a, b, method="iterative"), _valid_mean),
        ("geometric_mean", geometric_mean, _valid_mean),
        ("arithmetic_mean", lambda a, b: 0.5 * (a.values + b.values), _valid_mean),
    ]
    records = []
    for n in n_list:
        pairs = _pairs_for(n, trials, seed)
        for name, op, validate in operations:
            records.append(_record(n, name, _time_operation(op, pairs, validate)))
    return records


def bench_distances(n_list: Sequence[int], trials: int, seed: int) -> list[BenchRecord]:
    """Time the Thompson (iterative extremes), Riemannian (full spectrum), and
    Euclidean distances on random SPD pairs for each dimension in ``n_list``."""
    if not n_list or list(n_list) != sorted(n_list):
        raise ValueError("n_list must be nonempty and ascending")
    operations = [
        ("thompson", lambda a, b: thompson_distance(a, b, method="iterative"), _valid_distance),
        ("riemannian", lambda a, b: dphi_distance(a, b, 2), _valid_distance),
        (
            "euclidean",
            lambda a, b: float(np.linalg.norm(a.values - b.values)),
            _valid_distance,
        ),
    ]
    records = []
    for n in n_list:
        pairs = _pairs_for(n, trials, seed)
        for name, op, validate in operations:
            records.append(_record(n, name, _time_operation(op, pairs, validate)))
    return records


def write_records_csv(records: Sequence[BenchRecord], path: str | Path) -> None:
    """Write benchmark records with columns n,operation,trials,median_s,p10_s,p90_s."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow(
                [r.n, r.operation, r.trials, repr(r.median_seconds), repr(r.p10_seconds), repr(r.p90_seconds)]
            )
