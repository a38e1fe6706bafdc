"""Dataset ingestion, serialization, and random SPD generation.

File formats
------------
JSON dataset: ``{"n": int, "matrices": [[row-major n*n floats], ...],
"labels": [str, ...]?}``. CSV dataset: blocks of n whitespace- or
comma-separated rows, one block per matrix, blank lines between blocks.
Matrices are symmetrized and PD-certified on load. Floats are written with
``repr`` (shortest decimal that round-trips the double exactly), so
save -> load is bitwise stable.

Randomness
----------
Generators draw from numpy's ``Generator`` seeded PCG64 stream
(``standard_normal`` via the ziggurat method), so a fixed seed regenerates an
identical dataset on any platform.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .matcore import (
    DimensionMismatch,
    NotPositiveDefinite,
    SpdMatrix,
    SymMatrix,
    spd,
    sym,
    sym_exp,
)
from .nsolver import ActiveIndex, MidrangeSolution

RANDOM_MODELS = ("wishart_shifted", "logeuclid_ball")


class ParseError(ValueError):
    """The input file does not match the documented dataset/solution schema."""


@dataclass
class Dataset:
    """Ordered collection of SPD matrices of one dimension."""

    n: int
    matrices: list[SpdMatrix]
    labels: list[str] | None = None

    def __post_init__(self) -> None:
        if not self.matrices:
            raise ValueError("dataset must contain at least one matrix")
        if any(m.n != self.n for m in self.matrices):
            raise DimensionMismatch("all matrices must have the declared dimension")
        if self.labels is not None and len(self.labels) != len(self.matrices):
            raise ParseError("labels must match the number of matrices")


def _certify(entries: np.ndarray, index: int) -> SpdMatrix:
    try:
        return spd(entries)
    except NotPositiveDefinite as exc:
        raise NotPositiveDefinite(f"matrix {index} is not positive definite") from exc


def _infer_format(path: Path, fmt: str | None) -> str:
    if fmt is not None:
        return fmt
    suffix = path.suffix.lower().lstrip(".")
    return suffix if suffix in ("json", "csv") else "json"


def load_dataset(path: str | Path, fmt: str | None = None) -> Dataset:
    """Load a dataset from JSON or CSV; format inferred from the suffix.

    Raises ParseError on malformed input, DimensionMismatch on inconsistent
    shapes, and NotPositiveDefinite (with the matrix index) when a block is
    outside the cone.
    """
    path = Path(path)
    fmt = _infer_format(path, fmt)
    text = path.read_text()
    if fmt == "json":
        return _dataset_from_json(text)
    if fmt == "csv":
        return _dataset_from_csv(text)
    raise ValueError(f"unknown dataset format {fmt!r}")


def _dataset_from_json(text: str) -> Dataset:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "n" not in doc or "matrices" not in doc:
        raise ParseError('dataset JSON needs keys "n" and "matrices"')
    n = doc["n"]
    if not isinstance(n, int) or n < 1:
        raise ParseError('"n" must be a positive integer')
    rows = doc["matrices"]
    if not isinstance(rows, list) or not rows:
        raise ParseError('"matrices" must be a nonempty list')
    matrices = []
    for i, flat in enumerate(rows):
        if not isinstance(flat, list) or len(flat) != n * n:
            raise DimensionMismatch(f"matrix {i} must hold {n * n} row-major entries")
        matrices.append(_certify(np.asarray(flat, dtype=float).reshape(n, n), i))
    labels = doc.get("labels")
    if labels is not None and (
        not isinstance(labels, list) or not all(isinstance(s, str) for s in labels)
    ):
        raise ParseError('"labels" must be a list of strings')
    return Dataset(n=n, matrices=matrices, labels=labels)


def _dataset_from_csv(text: str) -> Dataset:
    blocks: list[list[str]] = [[]]
    for line in text.splitlines():
        if line.strip():
            blocks[-1].append(line)
        elif blocks[-1]:
            blocks.append([])
    if blocks and not blocks[-1]:
        blocks.pop()
    if not blocks:
        raise ParseError("no matrix blocks found")
    matrices = []
    n = len(blocks[0])
    for i, block in enumerate(blocks):
        if len(block) != n:
            raise DimensionMismatch(f"block {i} has {len(block)} rows, expected {n}")
        rows = []
        for line in block:
            parts = line.replace(",", " ").split()
            try:
                rows.append([float(p) for p in parts])
            except ValueError as exc:
                raise ParseError(f"block {i}: non-numeric entry in {line!r}") from exc
            if len(rows[-1]) != n:
                raise DimensionMismatch(f"block {i} has a row of length {len(rows[-1])}")
        matrices.append(_certify(np.asarray(rows), i))
    return Dataset(n=n, matrices=matrices)


def save_dataset(dataset: Dataset, path: str | Path, fmt: str | None = None) -> None:
    """Write a dataset as JSON or CSV (suffix-inferred), bit-exact on reload."""
    path = Path(path)
    fmt = _infer_format(path, fmt)
    if fmt == "json":
        doc: dict = {
            "n": dataset.n,
            "matrices": [m.values.flatten().tolist() for m in dataset.matrices],
        }
        if dataset.labels is not None:
            doc["labels"] = list(dataset.labels)
        path.write_text(json.dumps(doc))
    elif fmt == "csv":
        blocks = [
            "\n".join(" ".join(repr(v) for v in row) for row in m.values)
            for m in dataset.matrices
        ]
        path.write_text("\n\n".join(blocks) + "\n")
    else:
        raise ValueError(f"unknown dataset format {fmt!r}")


def save_solution(solution: MidrangeSolution, path: str | Path) -> None:
    """Serialize a midrange solution to JSON at full double precision."""
    doc = {
        "n": solution.x.n,
        "x": solution.x.values.flatten().tolist(),
        "t_star": solution.t_star,
        "lower": solution.lower,
        "upper": solution.upper,
        "active": [{"index": a.index, "side": a.side} for a in solution.active],
        "status": solution.status,
        "iterations": solution.iterations,
        "two_active_attains_lower": solution.two_active_attains_lower,
    }
    Path(path).write_text(json.dumps(doc))


def load_solution(path: str | Path) -> MidrangeSolution:
    """Reload a solution JSON written by :func:`save_solution`."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    try:
        n = doc["n"]
        x = spd(np.asarray(doc["x"], dtype=float).reshape(n, n))
        active = [ActiveIndex(int(a["index"]), str(a["side"])) for a in doc["active"]]
        return MidrangeSolution(
            x=x,
            t_star=float(doc["t_star"]),
            lower=float(doc["lower"]),
            upper=float(doc["upper"]),
            active=active,
            status=str(doc["status"]),
            iterations={str(k): int(v) for k, v in doc["iterations"].items()},
            two_active_attains_lower=doc.get("two_active_attains_lower"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed solution file: {exc}") from exc


def random_spd(
    n: int,
    count: int,
    seed: int,
    model: str = "wishart_shifted",
    sigma: SymMatrix | np.ndarray | None = None,
    stddev: float = 1.0,
    radius: float = 1.0,
) -> Dataset:
    """Generate a deterministic random SPD dataset.

    ``wishart_shifted`` draws Y = Sigma + A^T A with A an n-by-n matrix of
    i.i.d. normal entries scaled by ``stddev`` (defaults: Sigma = I, unit
    variance). ``logeuclid_ball`` returns exp(radius * S / ||S||_spec) for a
    random symmetric S, which places every sample at Thompson distance exactly
    ``radius`` from the identity.
    """
    if n < 1 or count < 1:
        raise ValueError("n and count must be positive")
    if model not in RANDOM_MODELS:
        raise ValueError(f"model must be one of {RANDOM_MODELS}, got {model!r}")
    rng = np.random.default_rng(seed)
    matrices = []
    if model == "wishart_shifted":
        if sigma is None:
            sigma_values = np.eye(n)
        else:
            sigma_values = sigma.values if isinstance(sigma, SymMatrix) else np.asarray(sigma)
            if sigma_values.shape != (n, n):
                raise DimensionMismatch(f"sigma must be {n}x{n}")
        for i in range(count):
            a = stddev * rng.standard_normal((n, n))
            matrices.append(_certify(sigma_values + a.T @ a, i))
    else:
        for i in range(count):
            g = rng.standard_normal((n, n))
            s = 0.5 * (g + g.T)
            spectral = float(np.max(np.abs(np.linalg.eigvalsh(s))))
            matrices.append(_certify(sym_exp(sym(radius * s / spectral)).values, i))
    return Dataset(n=n, matrices=matrices)


_SQRT2 = math.sqrt(2.0)


def embed2x2(s: SymMatrix) -> np.ndarray:
    """Isometric embedding of a symmetric 2x2 matrix into R^3.

    (a, b; b, c) maps to (sqrt(2) b, (a - c)/sqrt(2), (a + c)/sqrt(2)); the
    Frobenius norm is preserved and S is PSD iff the third coordinate is at
    least the Euclidean norm of the first two (the circular-cone picture).
    """
    if s.n != 2:
        raise DimensionMismatch(f"embedding is specific to 2x2 matrices, got n={s.n}")
    a, b, c = s.values[0, 0], s.values[0, 1], s.values[1, 1]
    return np.array([_SQRT2 * b, (a - c) / _SQRT2, (a + c) / _SQRT2])


def embed2x2_inverse(point: Sequence[float]) -> SymMatrix:
    """Inverse of :func:`embed2x2`."""
    x, y, z = (float(v) for v in point)
    a = (z + y) / _SQRT2
    c = (z - y) / _SQRT2
    b = x / _SQRT2
    return sym(np.array([[a, b], [b, c]]))
