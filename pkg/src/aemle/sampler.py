"""Simulated experiments: seeded sampling from the depolarized hit model.

Hit counts are drawn as sums of Bernoulli draws from a counter-based
generator (Philox), so identical seeds give identical data on any platform.
Each trial of a batch derives its own stream from (seed, M, trial index),
making results independent of execution order and worker count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import AemleError, ConfigError
from .estimator import EstimateResult, ExperimentData, MleConfig, mle_grid_adaptive
from .fisher import cr_lower_bound
from .model import (
    AmplitudePoint,
    Schedule,
    ScheduleKind,
    make_schedule,
    noisy_good_prob,
    total_queries,
)


@dataclass(frozen=True)
class TrialRecord:
    """Summary of one M value of a trial batch."""

    M: int
    n_queries: int
    rmse: float
    stderr: float
    mean_kappa_hat: float
    failed_trials: int
    epsilon_min: float


@dataclass(frozen=True)
class TrialBatchResult:
    records: tuple[TrialRecord, ...]
    trials: int
    seed: int


def _rng_for(seed: int, *stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((seed, *stream))))


def _binomial(rng: np.random.Generator, n: int, p: float) -> int:
    # sum of Bernoulli draws: exact, and stable across numpy versions
    if n == 0:
        return 0
    return int(np.count_nonzero(rng.random(n) < p))


def sample_counts(point: AmplitudePoint, schedule: Schedule, seed: int) -> ExperimentData:
    """Draw h_k ~ Binomial(N_k, P(m_k; a, kappa)) for every stage."""
    rng = _rng_for(seed)
    stages = []
    for m, n in schedule.stages:
        p = noisy_good_prob(m, point)
        stages.append((m, n, _binomial(rng, n, p)))
    return ExperimentData(stages=tuple(stages))


def _sample_with_rng(
    point: AmplitudePoint, schedule: Schedule, rng: np.random.Generator
) -> ExperimentData:
    stages = []
    for m, n in schedule.stages:
        p = noisy_good_prob(m, point)
        stages.append((m, n, _binomial(rng, n, p)))
    return ExperimentData(stages=tuple(stages))


def _jackknife_rmse_stderr(sq_errors: np.ndarray) -> float:
    """Standard error of the RMSE estimate by leave-one-out jackknife."""
    n = sq_errors.size
    if n < 2:
        return float("nan")
    total = float(np.sum(sq_errors))
    loo = np.sqrt(np.maximum(total - sq_errors, 0.0) / (n - 1))
    return float(math.sqrt((n - 1) / n * float(np.sum((loo - loo.mean()) ** 2))))


def _run_one_trial(
    point: AmplitudePoint,
    schedule: Schedule,
    config: MleConfig,
    seed: int,
    M: int,
    trial: int,
) -> EstimateResult | None:
    rng = _rng_for(seed, M, trial)
    data = _sample_with_rng(point, schedule, rng)
    try:
        return mle_grid_adaptive(data, config)
    except AemleError:
        return None


def run_trials(
    point: AmplitudePoint,
    kind: ScheduleKind | str,
    M_max: int,
    shots: int,
    trials: int,
    seed: int,
    config: MleConfig | None = None,
    r: float | None = None,
    workers: int = 1,
) -> TrialBatchResult:
    """Estimate over seeded repetitions for each M = 1..M_max.

    Per M: builds the schedule, samples `trials` independent datasets,
    estimates (a, kappa) on each, and records the RMSE of a-hat against the
    true a with a jackknife standard error.  Trials whose estimation raises
    are excluded and counted.
    """
    if trials < 1:
        raise ConfigError(f"trials={trials} must be >= 1")
    config = config or MleConfig()
    records = []
    for M in range(1, M_max + 1):
        schedule = make_schedule(kind, M, shots, r)
        args = [(point, schedule, config, seed, M, t) for t in range(trials)]
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(lambda a: _run_one_trial(*a), args))
        else:
            results = [_run_one_trial(*a) for a in args]
        good = [res for res in results if res is not None]
        failed = trials - len(good)
        sq_errors = np.asarray([(res.a_hat - point.a) ** 2 for res in good])
        rmse = float(np.sqrt(np.mean(sq_errors))) if good else float("nan")
        stderr = _jackknife_rmse_stderr(sq_errors) if good else float("nan")
        mean_kappa = float(np.mean([res.kappa_hat for res in good])) if good else float("nan")
        records.append(
            TrialRecord(
                M=M,
                n_queries=total_queries(schedule),
                rmse=rmse,
                stderr=stderr,
                mean_kappa_hat=mean_kappa,
                failed_trials=failed,
                epsilon_min=cr_lower_bound(point, schedule).epsilon_min,
            )
        )
    records.sort(key=lambda rec: rec.n_queries)
    return TrialBatchResult(records=tuple(records), trials=trials, seed=seed)


def hit_rate_curve(
    point: AmplitudePoint, depths: list[int], shots: int, seed: int
) -> list[tuple[int, float]]:
    """Sampled hit rate h/shots per amplification depth."""
    if shots < 1:
        raise ConfigError(f"shots={shots} must be >= 1")
    rng = _rng_for(seed)
    out = []
    for m in depths:
        p = noisy_good_prob(m, point)
        out.append((m, _binomial(rng, shots, p) / shots))
    return out
