"""Hardware-requirement calculator for an amplitude-estimation integrator.

Given a target accuracy and circuit-size assumptions, derives the register
widths, gate counts per amplification round, the tolerable noise level
kappa-bar, the per-gate error budget that achieves it, and wall-clock
execution times.  Pure arithmetic end to end; the only iterative pieces are
the kappa-bar scan (delegated to fisher.required_noise_for_error) and a
bisection for the gate-error budget.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

from .errors import ConfigError, DomainError
from .fisher import max_grover_depth, required_noise_for_error

# Reference target amplitude for the kappa-bar scan when no override is given.
_REFERENCE_AMPLITUDE = 0.375

_BISECT_STEPS = 200


class TimeInterpretation(Enum):
    """Reading of the between-shot interval t_i in the total-time sum.

    PER_SHOT scales the interval with each stage's own execution time
    (t_i = factor * (t_AA m_k + t_m)); PER_MBAR uses the deepest stage's
    time for every shot (t_i = factor * t_mbar).
    """

    PER_SHOT = "per_shot"
    PER_MBAR = "per_mbar"


@dataclass(frozen=True)
class HardwareAssumptions:
    """Inputs of the requirement calculation."""

    epsilon_target: float
    N_int: int
    N_k: int = 100
    t_s: float = 7.1e-8
    t_d: float = 2.8e-7
    t_m: float = 3.5e-6
    interval_factor: float = 10.0
    error_ratio: float = 10.0
    reference_amplitude: float = _REFERENCE_AMPLITUDE
    kappa_bar_override: float | None = None

    def __post_init__(self) -> None:
        if not (0.0 < self.epsilon_target < 1.0):
            raise ConfigError(f"epsilon_target={self.epsilon_target} outside (0, 1)")
        if self.N_int < 1:
            raise ConfigError(f"N_int={self.N_int} must be >= 1")
        if self.N_k < 1:
            raise ConfigError(f"N_k={self.N_k} must be >= 1")
        for name in ("t_s", "t_d", "t_m", "error_ratio"):
            if getattr(self, name) <= 0.0:
                raise ConfigError(f"{name}={getattr(self, name)} must be positive")
        if self.interval_factor < 0.0:
            raise ConfigError(f"interval_factor={self.interval_factor} must be >= 0")
        if not (0.0 < self.reference_amplitude < 1.0):
            raise ConfigError(f"reference_amplitude={self.reference_amplitude} outside (0, 1)")
        if self.kappa_bar_override is not None and self.kappa_bar_override <= 0.0:
            raise ConfigError(f"kappa_bar_override={self.kappa_bar_override} must be positive")


@dataclass(frozen=True)
class HardwareReport:
    """Derived requirements, one field per quantity."""

    N_nq: int
    N_tnq: int
    N_y: int
    N_s: int
    N_d: int
    kappa_bar: float
    m_bar: int
    eps_s: float
    eps_d: float
    t_AA: float
    t_mbar: float
    t_total: float
    interpretation: TimeInterpretation


def _gate_error_budget(kappa_bar: float, N_s: int, N_d: int, ratio: float) -> float:
    """Solve -N_s ln(1 - e/ratio) - N_d ln(1 - e) = kappa_bar for e by bisection.

    The left side is 0 at e = 0 and strictly increasing, so the root is
    unique; the bracket is grown until it straddles.
    """

    def decay(e: float) -> float:
        return -N_s * math.log1p(-e / ratio) - N_d * math.log1p(-e)

    lo, hi = 0.0, min(0.5, kappa_bar / (N_s / ratio + N_d) * 4.0)
    while decay(hi) < kappa_bar:
        hi = min(hi * 2.0, 0.999999)
        if hi >= 0.999999:
            break
    for _ in range(_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        if decay(mid) < kappa_bar:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _time_ladder(m_bar: int) -> list[int]:
    """Doubling depth ladder 1, 2, 4, ... with the last stage capped at m_bar."""
    if m_bar < 1:
        return [0]
    depths = []
    d = 1
    while d < m_bar:
        depths.append(d)
        d *= 2
    depths.append(m_bar)
    return depths


def total_execution_time(
    assumptions: HardwareAssumptions,
    t_AA: float,
    t_mbar: float,
    m_bar: int,
    interpretation: TimeInterpretation = TimeInterpretation.PER_SHOT,
) -> float:
    """Wall-clock time of the full run: sum over stages of (run + readout +
    interval) per shot, on the doubling ladder capped at m_bar."""
    depths = _time_ladder(m_bar)
    total = 0.0
    for m in depths:
        shot = t_AA * m + assumptions.t_m
        if interpretation is TimeInterpretation.PER_SHOT:
            interval = assumptions.interval_factor * shot
        else:
            interval = assumptions.interval_factor * t_mbar
        total += assumptions.N_k * (shot + interval)
    return total


def compute_spec(
    assumptions: HardwareAssumptions,
    interpretation: TimeInterpretation = TimeInterpretation.PER_SHOT,
) -> HardwareReport:
    """Derive every requirement row from the assumptions.

    Register widths and gate counts follow closed-form circuit-size formulas;
    kappa-bar comes from the override if given, else from the noise-versus-
    error scan at the reference amplitude; the gate-error budget splits
    kappa-bar across single and two-qubit gates at the assumed ratio.
    """
    eps = assumptions.epsilon_target
    n_int = assumptions.N_int
    N_nq = math.ceil(math.log2(1.0 / eps))
    N_tnq = 2 * N_nq * n_int - 1
    N_y = n_int * (n_int - 1) * N_nq**2 // 2
    N_s = 2 * (N_nq * n_int + 1 + 6 * N_y) + 12 * N_nq * n_int - 15
    N_d = 8 * N_y * 2 + 6 * N_nq * n_int - 5
    if assumptions.kappa_bar_override is not None:
        kappa_bar = assumptions.kappa_bar_override
    else:
        kappa_bar = required_noise_for_error(
            assumptions.reference_amplitude, eps, assumptions.N_k
        )
    m_bar = max_grover_depth(kappa_bar)
    eps_d = _gate_error_budget(kappa_bar, N_s, N_d, assumptions.error_ratio)
    eps_s = eps_d / assumptions.error_ratio
    t_AA = assumptions.t_s * N_s + assumptions.t_d * N_d
    t_mbar = t_AA * m_bar + assumptions.t_m
    t_total = total_execution_time(assumptions, t_AA, t_mbar, m_bar, interpretation)
    return HardwareReport(
        N_nq=N_nq,
        N_tnq=N_tnq,
        N_y=N_y,
        N_s=N_s,
        N_d=N_d,
        kappa_bar=kappa_bar,
        m_bar=m_bar,
        eps_s=eps_s,
        eps_d=eps_d,
        t_AA=t_AA,
        t_mbar=t_mbar,
        t_total=t_total,
        interpretation=interpretation,
    )


def kappa_from_gate_errors(gates: list[tuple[float, int]]) -> float:
    """Noise level implied by per-gate error rates: -sum count * ln(1 - error)."""
    if not gates:
        raise ConfigError("at least one (error, count) pair is required")
    total = 0.0
    for error, count in gates:
        if not (0.0 <= error < 1.0):
            raise DomainError(f"gate error {error} outside [0, 1)")
        if count < 0:
            raise DomainError(f"gate count {count} must be >= 0")
        total -= count * math.log1p(-error)
    return total


@dataclass(frozen=True)
class GateErrorGap:
    """Required versus available gate errors, as improvement factors."""

    required_eps_s: float
    required_eps_d: float
    device_eps_s: float
    device_eps_d: float
    gap_s: float
    gap_d: float


def gate_error_gap(
    report: HardwareReport, device_eps_s: float = 1.0e-3, device_eps_d: float = 1.0e-2
) -> GateErrorGap:
    """Factor by which device gate errors must improve to meet the budget."""
    if device_eps_s <= 0.0 or device_eps_d <= 0.0:
        raise DomainError("device gate errors must be positive")
    return GateErrorGap(
        required_eps_s=report.eps_s,
        required_eps_d=report.eps_d,
        device_eps_s=device_eps_s,
        device_eps_d=device_eps_d,
        gap_s=device_eps_s / report.eps_s,
        gap_d=device_eps_d / report.eps_d,
    )


def report_rows(report: HardwareReport) -> list[tuple[str, str, object]]:
    """Ordered (symbol, description, value) rows for table emission."""
    return [
        ("N_nq", "qubits per integration variable", report.N_nq),
        ("N_tnq", "total data qubits", report.N_tnq),
        ("N_y", "multiplier partial products", report.N_y),
        ("N_s", "single-qubit gates per round", report.N_s),
        ("N_d", "two-qubit gates per round", report.N_d),
        ("kappa_bar", "tolerable noise level", report.kappa_bar),
        ("m_bar", "maximum amplification depth", report.m_bar),
        ("eps_s", "single-qubit gate error budget", report.eps_s),
        ("eps_d", "two-qubit gate error budget", report.eps_d),
        ("t_AA", "time per amplification round (s)", report.t_AA),
        ("t_mbar", "time of the deepest circuit (s)", report.t_mbar),
        ("t_total", "total executing time (s)", report.t_total),
        ("t_i_rule", "interval-time interpretation", report.interpretation.value),
    ]


def with_interpretation(
    assumptions: HardwareAssumptions, report: HardwareReport, interpretation: TimeInterpretation
) -> HardwareReport:
    """Same report with t_total recomputed under the other interval rule."""
    t_total = total_execution_time(
        assumptions, report.t_AA, report.t_mbar, report.m_bar, interpretation
    )
    return replace(report, t_total=t_total, interpretation=interpretation)
