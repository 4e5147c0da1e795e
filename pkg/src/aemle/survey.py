"""Batch sweeps over amplitudes and noise levels.

Three studies built on the Fisher machinery: the linear density of anomalous
target amplitudes (fraction of a in [0,1] with beta above a threshold), error
bound versus total query count for classical and exponential schedules, and
the error bound on an (a, kappa) grid.  All sweeps are vectorized over the
amplitude axis and seeded where sampling is involved.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError
from .fisher import (
    ANOMALY_THRESHOLD,
    _DET_RTOL,
    _element_sums,
    classical_bound,
    cr_lower_bound,
    max_grover_depth,
)
from .model import Schedule, ScheduleKind, amplitude_point, make_schedule, total_queries

# Samples closer than this to a = 0 or a = 1 are excluded (singular Fisher).
_EDGE_MARGIN = 1e-9

# Depth-count cap for the default density schedule.
_DENSITY_M_CAP = 25


@dataclass(frozen=True)
class DensityResult:
    """Fraction of uniformly drawn amplitudes that are anomalous at one kappa."""

    kappa: float
    density_percent: float
    stderr_percent: float
    samples: int
    threshold: float
    skipped: int
    schedule: Schedule


@dataclass(frozen=True)
class QueryErrorRow:
    """One point of an error-versus-queries curve."""

    kind: str
    kappa: float
    M: int
    n_queries: int
    epsilon_min: float
    beyond_max_depth: bool


@dataclass(frozen=True)
class ContourGrid:
    """epsilon_min over an amplitude grid (rows) by noise grid (columns)."""

    a_values: tuple[float, ...]
    kappa_values: tuple[float, ...]
    epsilon_min: tuple[tuple[float, ...], ...]


def default_density_schedule(kappa: float, shots: int = 100) -> Schedule:
    """Exponential schedule whose deepest stage sits just under the depth limit.

    M = floor(log2(m-bar)) + 1 puts the last depth 2^{M-1} at the largest
    power of two not exceeding m-bar(kappa), capped at M = 25 stages.
    """
    mbar = max_grover_depth(kappa)
    if mbar < 1:
        return make_schedule(ScheduleKind.EIS, 1, shots)
    M = min(int(math.floor(math.log2(mbar))) + 1, _DENSITY_M_CAP)
    return make_schedule(ScheduleKind.EIS, M, shots)


def _beta_grid(a: np.ndarray, kappa: float, schedule: Schedule) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized beta over interior amplitudes; second array flags bad samples."""
    depths = np.asarray(schedule.depths)
    shots = np.asarray(schedule.shots)
    i11, i12, i22 = _element_sums(a, kappa, depths, shots)
    with np.errstate(invalid="ignore", divide="ignore"):
        beta = np.minimum(i12 * i12 / (i11 * i22), 1.0)
    bad = ~np.isfinite(beta) | (i11 <= 0.0) | (i22 <= 0.0)
    return beta, bad


def anomaly_density(
    kappa: float,
    samples: int,
    threshold: float = ANOMALY_THRESHOLD,
    schedule: Schedule | None = None,
    seed: int = 0,
) -> DensityResult:
    """Percentage of uniform a in [0,1] with beta above the threshold.

    Draws `samples` amplitudes, skips those within 1e-9 of an endpoint or
    with a degenerate Fisher matrix (counted in `skipped`), and reports the
    anomalous fraction with its binomial standard error.
    """
    if samples < 1000:
        raise ConfigError(f"samples={samples} must be >= 1000 for a stable density")
    if not (0.0 < threshold < 1.0):
        raise ConfigError(f"threshold={threshold} outside (0, 1)")
    if kappa <= 0.0:
        raise DomainError("anomaly density needs kappa > 0 (beta -> 0 for all a at kappa = 0)")
    if schedule is None:
        schedule = default_density_schedule(kappa)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence((seed, 0))))
    a = rng.random(samples)
    edge = (a < _EDGE_MARGIN) | (a > 1.0 - _EDGE_MARGIN)
    interior = a[~edge]
    beta, bad = _beta_grid(interior, kappa, schedule)
    used = int(interior.size - np.count_nonzero(bad))
    skipped = samples - used
    if used == 0:
        raise DomainError("all samples skipped; schedule carries no kappa information")
    hits = int(np.count_nonzero(beta[~bad] > threshold))
    rho = hits / used
    return DensityResult(
        kappa=kappa,
        density_percent=100.0 * rho,
        stderr_percent=100.0 * math.sqrt(rho * (1.0 - rho) / used),
        samples=used,
        threshold=threshold,
        skipped=skipped,
        schedule=schedule,
    )


def error_vs_queries(
    a: float,
    kappas: list[float],
    M_max: int,
    shots: int,
    kind: ScheduleKind | str = ScheduleKind.EIS,
    r: float | None = None,
) -> list[QueryErrorRow]:
    """Error-bound curves against total queries, one per noise level.

    Emits one row per (kappa, M) for the amplifying schedule plus a matching
    classical row sqrt(a(1-a)/N_q) at the same query counts.  Rows whose
    deepest stage exceeds m-bar(kappa) are flagged: past that point the bound
    saturates and extra depth is wasted.
    """
    if not (0.0 < a < 1.0):
        raise DomainError(f"a={a} outside (0, 1)")
    rows: list[QueryErrorRow] = []
    for kappa in kappas:
        point = amplitude_point(a, kappa)
        mbar = max_grover_depth(kappa) if kappa > 0.0 else None
        for M in range(1, M_max + 1):
            schedule = make_schedule(kind, M, shots, r)
            nq = total_queries(schedule)
            eps = cr_lower_bound(point, schedule).epsilon_min
            beyond = mbar is not None and max(schedule.depths) > mbar
            rows.append(
                QueryErrorRow(
                    kind=ScheduleKind(kind).value if isinstance(kind, str) else kind.value,
                    kappa=kappa,
                    M=M,
                    n_queries=nq,
                    epsilon_min=eps,
                    beyond_max_depth=beyond,
                )
            )
            rows.append(
                QueryErrorRow(
                    kind="classical",
                    kappa=kappa,
                    M=M,
                    n_queries=nq,
                    epsilon_min=classical_bound(a, nq),
                    beyond_max_depth=False,
                )
            )
    return rows


def error_vs_kappa_contour(
    a_values: np.ndarray, kappa_values: np.ndarray, schedule: Schedule
) -> ContourGrid:
    """epsilon_min on the product grid, amplitudes down the rows.

    Cells where the Fisher matrix is numerically singular fall back to the
    one-parameter bound, matching cr_lower_bound pointwise.
    """
    a = np.asarray(a_values, dtype=float)
    kappas = np.asarray(kappa_values, dtype=float)
    if np.any(a <= 0.0) or np.any(a >= 1.0):
        raise DomainError("amplitude grid must lie strictly inside (0, 1)")
    if np.any(kappas < 0.0):
        raise DomainError("kappa grid must be non-negative")
    depths = np.asarray(schedule.depths)
    shots = np.asarray(schedule.shots)
    columns = []
    for kappa in kappas:
        i11, i12, i22 = _element_sums(a, float(kappa), depths, shots)
        det = i11 * i22 - i12 * i12
        invertible = (i22 > 0.0) & (det > _DET_RTOL * i11 * i22)
        with np.errstate(invalid="ignore", divide="ignore"):
            eps = np.where(invertible, np.sqrt(i22 / np.where(det > 0, det, 1.0)), 1.0 / np.sqrt(i11))
        columns.append(eps)
    grid = np.stack(columns, axis=1)  # shape (len(a), len(kappas))
    return ContourGrid(
        a_values=tuple(float(v) for v in a),
        kappa_values=tuple(float(v) for v in kappas),
        epsilon_min=tuple(tuple(float(v) for v in row) for row in grid),
    )


def anomality_trace(a_values: np.ndarray, kappa: float, schedule: Schedule) -> np.ndarray:
    """beta over an amplitude grid at fixed kappa (degenerate cells -> nan)."""
    beta, bad = _beta_grid(np.asarray(a_values, dtype=float), kappa, schedule)
    out = beta.copy()
    out[bad] = np.nan
    return out


def anomalous_segment_count(
    kappa: float,
    threshold: float = ANOMALY_THRESHOLD,
    grid_size: int = 200_000,
    schedule: Schedule | None = None,
    shots: int = 100,
) -> int:
    """Number of maximal a-intervals with beta above the threshold.

    Measured on a uniform interior grid of `grid_size` midpoints; a segment
    is a maximal run of consecutive grid points above the threshold.
    """
    if grid_size < 2:
        raise ConfigError(f"grid_size={grid_size} must be >= 2")
    if schedule is None:
        schedule = default_density_schedule(kappa, shots)
    a = (np.arange(grid_size) + 0.5) / grid_size
    beta, bad = _beta_grid(a, kappa, schedule)
    above = (beta > threshold) & ~bad
    starts = int(np.count_nonzero(above[1:] & ~above[:-1])) + int(above[0])
    return starts
