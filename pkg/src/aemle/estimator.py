"""Two-parameter likelihood and the adaptive constant grid-search estimator.

The estimator processes stages incrementally: after stage k-1 it computes the
Fisher matrix of the schedule so far at the running estimate, sizes a
confidence box C_eps times the per-parameter Cramer-Rao errors, and searches
stage k's accumulated likelihood on a constant-size grid inside that box
(a linear, kappa log-spaced).  The previous estimate is snapped onto the new
grid so a stage can never do worse than carrying the old estimate forward.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateDataError, DegenerateScheduleError
from .fisher import ANOMALY_THRESHOLD, FisherMatrix, anomality, fisher_matrix
from .model import Schedule, amplitude_point, explicit_schedule

# Probability clamp inside logs: h=0 or h=N with extreme P must stay finite.
EPS_P = 1e-12

# Positive floor for the log-spaced kappa grid (kappa = 0 is represented by it).
_KAPPA_GRID_FLOOR = 1e-10

# Inset used when evaluating Fisher information at a boundary estimate.
_A_INSET = 1e-9


@dataclass(frozen=True)
class ExperimentData:
    """Observed stages (m_k, N_k, h_k) of a staged amplification experiment."""

    stages: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        if not self.stages:
            raise ConfigError("experiment data must have at least one stage")
        prev = -1
        for m, n, h in self.stages:
            if m < 0:
                raise ConfigError(f"depth m={m} must be >= 0")
            if m < prev:
                raise ConfigError("stage depths must be non-decreasing")
            if n < 0 or not 0 <= h <= n:
                raise ConfigError(f"hits h={h} outside [0, N={n}]")
            prev = m

    @property
    def depths(self) -> tuple[int, ...]:
        return tuple(m for m, _, _ in self.stages)

    @property
    def shots(self) -> tuple[int, ...]:
        return tuple(n for _, n, _ in self.stages)

    @property
    def hits(self) -> tuple[int, ...]:
        return tuple(h for _, _, h in self.stages)

    def schedule(self) -> Schedule:
        return explicit_schedule((m, n) for m, n, _ in self.stages)


def data_to_json(data: ExperimentData) -> str:
    return json.dumps(
        {"stages": [{"m": m, "shots": n, "hits": h} for m, n, h in data.stages]}
    )


def data_from_json(text: str) -> ExperimentData:
    try:
        doc = json.loads(text)
        stages = tuple(
            (int(s["m"]), int(s["shots"]), int(s["hits"])) for s in doc["stages"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed experiment-data JSON: {exc}") from exc
    return ExperimentData(stages=stages)


@dataclass(frozen=True)
class MleConfig:
    """Tuning knobs of the adaptive grid search."""

    divisions_per_stage: int = 64
    chebyshev_factor_scale: float = 3.0
    kappa_init_range: tuple[float, float] = (1e-6, 2.0)
    a_init_range: tuple[float, float] = (0.0, 1.0)
    max_stages: int = 64

    def __post_init__(self) -> None:
        if self.divisions_per_stage < 8:
            raise ConfigError("divisions_per_stage must be >= 8")
        if self.chebyshev_factor_scale <= 0.0:
            raise ConfigError("chebyshev_factor_scale must be positive")
        klo, khi = self.kappa_init_range
        alo, ahi = self.a_init_range
        if not (0.0 <= klo < khi):
            raise ConfigError("kappa_init_range must satisfy 0 <= low < high")
        if not (0.0 <= alo < ahi <= 1.0):
            raise ConfigError("a_init_range must be a non-empty subrange of [0, 1]")
        if self.max_stages < 1:
            raise ConfigError("max_stages must be >= 1")


@dataclass(frozen=True)
class StageTrace:
    """Grid bounds used at one refinement stage, with the stage objective
    at the new argmax and at the carried-forward estimate."""

    stage: int
    a_lo: float
    a_hi: float
    kappa_lo: float
    kappa_hi: float
    best_ll: float
    carried_ll: float


@dataclass(frozen=True)
class EstimateResult:
    a_hat: float
    kappa_hat: float
    log_likelihood_at_max: float
    fisher_at_estimate: FisherMatrix
    likelihood_evaluations: int
    stage_trace: tuple[StageTrace, ...]
    anomalous: bool
    anomality: float | None
    kappa_identifiable: bool


def _prob_grid(a_grid: np.ndarray, kappa_grid: np.ndarray, depths: np.ndarray) -> np.ndarray:
    theta = np.arcsin(np.sqrt(np.clip(a_grid, 0.0, 1.0)))[:, None, None]
    kk = kappa_grid[None, :, None]
    mm = depths[None, None, :]
    probs = 0.5 - 0.5 * np.exp(-kk * mm) * np.cos(2.0 * (2.0 * mm + 1.0) * theta)
    return np.clip(probs, EPS_P, 1.0 - EPS_P)


def _ll_grid(
    data: ExperimentData,
    upto: int,
    a_grid: np.ndarray,
    kappa_grid: np.ndarray,
) -> np.ndarray:
    """Log-likelihood of stages 0..upto on the (a, kappa) grid."""
    depths = np.asarray(data.depths[: upto + 1], dtype=float)
    shots = np.asarray(data.shots[: upto + 1], dtype=float)
    hits = np.asarray(data.hits[: upto + 1], dtype=float)
    probs = _prob_grid(a_grid, kappa_grid, depths)
    return np.sum(hits * np.log(probs) + (shots - hits) * np.log1p(-probs), axis=2)


def log_likelihood(data: ExperimentData, a: float, kappa: float) -> float:
    """Sum of h ln P + (N - h) ln(1 - P) over stages, with P clamped to
    [1e-12, 1 - 1e-12]; always finite."""
    grid = _ll_grid(data, len(data.stages) - 1, np.asarray([float(a)]), np.asarray([float(kappa)]))
    return float(grid[0, 0])


def _chebyshev_factor(eps_target: float, scale: float) -> int:
    """C_eps = max(3, ceil(sqrt(ln(1/eps_target))) * scale)."""
    eps = min(max(eps_target, 1e-300), 0.5)
    return max(3, math.ceil(math.sqrt(math.log(1.0 / eps))) * math.ceil(scale))


def _snap(grid: np.ndarray, value: float) -> np.ndarray:
    """Replace the grid point nearest to value with value itself."""
    out = grid.copy()
    out[int(np.argmin(np.abs(grid - value)))] = value
    return out


def _box_errors(
    a_hat: float, kappa_hat: float, data: ExperimentData, upto: int
) -> tuple[float | None, float | None]:
    """Per-parameter Cramer-Rao errors of the schedule up to stage `upto`,
    evaluated at the running estimate (inset from the a boundary)."""
    point = amplitude_point(
        min(max(a_hat, _A_INSET), 1.0 - _A_INSET), max(kappa_hat, _KAPPA_GRID_FLOOR)
    )
    sched = explicit_schedule(
        (m, n) for m, n, _ in data.stages[: upto + 1]
    )
    info = fisher_matrix(point, sched)
    det = info.det
    if info.i22 > 0.0 and det > 1e-12 * info.i11 * info.i22:
        return math.sqrt(info.i22 / det), math.sqrt(info.i11 / det)
    if info.i11 > 0.0:
        return 1.0 / math.sqrt(info.i11), None
    return None, None


def mle_grid_adaptive(data: ExperimentData, config: MleConfig | None = None) -> EstimateResult:
    """Adaptive constant grid-search MLE of (a, kappa).

    Stage 0 searches the full init box; stage k restricts to the confidence
    box around the stage k-1 estimate.  Ties break toward smaller a, then
    smaller kappa.  If no stage has m > 0, kappa is unidentifiable: it is
    fixed at the log-midpoint of kappa_init_range and flagged.
    """
    config = config or MleConfig()
    n_stages = len(data.stages)
    if n_stages > config.max_stages:
        raise ConfigError(f"data has {n_stages} stages, config allows {config.max_stages}")
    if all(m == 0 for m in data.depths) and all(h in (0, n) for _, n, h in data.stages):
        raise DegenerateDataError(
            "all stages are classical with saturated hit counts; the estimate "
            "lies on the amplitude boundary"
        )
    div = config.divisions_per_stage
    kappa_identifiable = any(m > 0 for m in data.depths)
    klo_init = max(config.kappa_init_range[0], _KAPPA_GRID_FLOOR)
    khi_init = max(config.kappa_init_range[1], 2 * _KAPPA_GRID_FLOOR)
    kappa_mid = math.sqrt(klo_init * khi_init)

    a_hat = kappa_hat = None
    evaluations = 0
    trace: list[StageTrace] = []
    best_ll = float("-inf")

    for stage in range(n_stages):
        if stage == 0:
            a_lo, a_hi = config.a_init_range
            k_lo, k_hi = klo_init, khi_init
        else:
            eps_a, eps_k = _box_errors(a_hat, kappa_hat, data, stage - 1)
            if eps_a is not None:
                c_box = _chebyshev_factor(min(eps_a, 0.5), config.chebyshev_factor_scale)
                a_lo = max(0.0, a_hat - c_box * eps_a)
                a_hi = min(1.0, a_hat + c_box * eps_a)
            else:
                a_lo, a_hi = config.a_init_range
            if eps_k is not None:
                c_box = _chebyshev_factor(min(eps_a, 0.5), config.chebyshev_factor_scale)
                k_lo = max(kappa_hat - c_box * eps_k, _KAPPA_GRID_FLOOR)
                k_hi = max(kappa_hat + c_box * eps_k, 2 * _KAPPA_GRID_FLOOR)
            else:
                k_lo, k_hi = klo_init, khi_init

        a_grid = np.linspace(a_lo, a_hi, div)
        if kappa_identifiable:
            k_grid = np.geomspace(k_lo, k_hi, div)
        else:
            k_lo = k_hi = kappa_mid
            k_grid = np.asarray([kappa_mid])
        if stage > 0:
            a_grid = _snap(a_grid, a_hat)
            if kappa_identifiable:
                k_grid = _snap(k_grid, kappa_hat)

        ll = _ll_grid(data, stage, a_grid, k_grid)
        evaluations += ll.size
        flat = int(np.argmax(ll))  # first max in a-major order: smallest a, then kappa
        ia, ik = np.unravel_index(flat, ll.shape)
        carried_ll = float("nan")
        if stage > 0:
            ia_prev = int(np.argmin(np.abs(a_grid - a_hat)))
            ik_prev = int(np.argmin(np.abs(k_grid - kappa_hat)))
            carried_ll = float(ll[ia_prev, ik_prev])
        a_hat, kappa_hat = float(a_grid[ia]), float(k_grid[ik])
        best_ll = float(ll[ia, ik])
        trace.append(
            StageTrace(
                stage=stage,
                a_lo=float(a_lo),
                a_hi=float(a_hi),
                kappa_lo=float(k_lo),
                kappa_hi=float(k_hi),
                best_ll=best_ll,
                carried_ll=carried_ll,
            )
        )

    point = amplitude_point(
        min(max(a_hat, _A_INSET), 1.0 - _A_INSET), max(kappa_hat, _KAPPA_GRID_FLOOR)
    )
    info = fisher_matrix(point, data.schedule())
    beta: float | None
    try:
        beta = anomality(point, data.schedule())
        anomalous = beta > ANOMALY_THRESHOLD
    except DegenerateScheduleError:
        beta = None
        anomalous = False
    return EstimateResult(
        a_hat=a_hat,
        kappa_hat=kappa_hat if kappa_identifiable else kappa_mid,
        log_likelihood_at_max=best_ll,
        fisher_at_estimate=info,
        likelihood_evaluations=evaluations,
        stage_trace=tuple(trace),
        anomalous=anomalous,
        anomality=beta,
        kappa_identifiable=kappa_identifiable,
    )


def mle_profile_1d(
    data: ExperimentData, kappa_fixed: float, config: MleConfig | None = None
) -> float:
    """One-dimensional grid-search MLE of a with kappa held fixed."""
    if kappa_fixed < 0.0:
        raise ConfigError(f"kappa_fixed={kappa_fixed} must be >= 0")
    config = config or MleConfig()
    div = config.divisions_per_stage
    k_grid = np.asarray([float(kappa_fixed)])
    a_hat = None
    for stage in range(len(data.stages)):
        if stage == 0:
            a_lo, a_hi = config.a_init_range
        else:
            point = amplitude_point(
                min(max(a_hat, _A_INSET), 1.0 - _A_INSET), kappa_fixed
            )
            sched = explicit_schedule((m, n) for m, n, _ in data.stages[:stage])
            info = fisher_matrix(point, sched)
            if info.i11 <= 0.0:
                a_lo, a_hi = config.a_init_range
            else:
                eps_a = 1.0 / math.sqrt(info.i11)
                c_box = _chebyshev_factor(min(eps_a, 0.5), config.chebyshev_factor_scale)
                a_lo = max(0.0, a_hat - c_box * eps_a)
                a_hi = min(1.0, a_hat + c_box * eps_a)
        a_grid = np.linspace(a_lo, a_hi, div)
        if stage > 0:
            a_grid = _snap(a_grid, a_hat)
        ll = _ll_grid(data, stage, a_grid, k_grid)
        a_hat = float(a_grid[int(np.argmax(ll[:, 0]))])
    return a_hat
