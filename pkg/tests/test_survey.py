"""Density of anomalous targets, query-error curves, and the noise contour."""
import math

import numpy as np
import pytest

from aemle import (
    ConfigError,
    DomainError,
    amplitude_point,
    anomality_trace,
    anomalous_segment_count,
    anomaly_density,
    classical_bound,
    cr_lower_bound,
    default_density_schedule,
    error_vs_kappa_contour,
    error_vs_queries,
    make_schedule,
    max_grover_depth,
)

A_ANOMALOUS = math.sin(math.pi / 8) ** 2


def test_default_schedule_tracks_depth_limit():
    sched = default_density_schedule(1e-2)
    mbar = max_grover_depth(1e-2)
    assert max(sched.depths) <= mbar < 2 * max(sched.depths)
    # stage cap kicks in at tiny noise
    assert len(default_density_schedule(1e-9).depths) == 26


def test_density_seed_stable():
    first = anomaly_density(1e-2, 5000, seed=42)
    second = anomaly_density(1e-2, 5000, seed=42)
    assert first == second
    other = anomaly_density(1e-2, 5000, seed=43)
    combined = math.hypot(first.stderr_percent, other.stderr_percent)
    assert abs(first.density_percent - other.density_percent) <= 3.0 * max(combined, 0.3)


def test_density_high_noise_is_zero():
    result = anomaly_density(1e-1, 5000, seed=1)
    assert result.density_percent == 0.0
    assert result.stderr_percent == 0.0


def test_density_stderr_formula():
    result = anomaly_density(1e-2, 20_000, seed=1)
    rho = result.density_percent / 100.0
    expected = 100.0 * math.sqrt(rho * (1.0 - rho) / result.samples)
    assert result.stderr_percent == pytest.approx(expected, rel=1e-12)
    assert result.skipped == 0
    assert result.samples == 20_000


def test_density_validation():
    with pytest.raises(ConfigError):
        anomaly_density(1e-2, 500, seed=1)
    with pytest.raises(ConfigError):
        anomaly_density(1e-2, 5000, threshold=1.5, seed=1)
    with pytest.raises(DomainError):
        anomaly_density(0.0, 5000, seed=1)


def test_segment_counts_scale_inversely_with_noise():
    high = anomalous_segment_count(1e-2)
    low = anomalous_segment_count(1e-3)
    assert high == 4
    assert low == 64
    assert 5.0 <= low / high <= 20.0


def test_error_vs_queries_rows():
    rows = error_vs_queries(0.375, [0.0, 0.01], M_max=8, shots=100)
    eis = [r for r in rows if r.kind == "eis"]
    classical = [r for r in rows if r.kind == "classical"]
    assert len(eis) == len(classical) == 16
    for row in classical:
        assert row.epsilon_min == pytest.approx(
            classical_bound(0.375, row.n_queries), rel=1e-12
        )
        assert not row.beyond_max_depth
    # noiseless rows never exceed the depth limit
    assert not any(r.beyond_max_depth for r in eis if r.kappa == 0.0)
    # noisy rows flag exactly the schedules deeper than m-bar
    mbar = max_grover_depth(0.01)
    for row in eis:
        if row.kappa == 0.01:
            expected = max(make_schedule("eis", row.M, 100).depths) > mbar
            assert row.beyond_max_depth == expected


def test_error_vs_queries_quantum_beats_classical_under_low_noise():
    rows = error_vs_queries(0.375, [0.001], M_max=8, shots=100)
    eis = {r.M: r for r in rows if r.kind == "eis"}
    cls = {r.M: r for r in rows if r.kind == "classical"}
    for M in range(3, 9):
        assert eis[M].epsilon_min < cls[M].epsilon_min


def test_contour_grid_shape_and_values():
    sched = make_schedule("eis", 5, 100)
    a = np.linspace(0.1, 0.9, 5)
    k = np.geomspace(1e-4, 1e-1, 4)
    grid = error_vs_kappa_contour(a, k, sched)
    assert len(grid.a_values) == 5
    assert len(grid.kappa_values) == 4
    assert len(grid.epsilon_min) == 5 and len(grid.epsilon_min[0]) == 4
    for i, av in enumerate(grid.a_values):
        for j, kv in enumerate(grid.kappa_values):
            direct = cr_lower_bound(amplitude_point(av, kv), sched).epsilon_min
            assert grid.epsilon_min[i][j] == pytest.approx(direct, rel=1e-12)


def test_contour_rejects_bad_grids():
    sched = make_schedule("eis", 3, 10)
    with pytest.raises(DomainError):
        error_vs_kappa_contour(np.asarray([0.0, 0.5]), np.asarray([0.01]), sched)
    with pytest.raises(DomainError):
        error_vs_kappa_contour(np.asarray([0.5]), np.asarray([-0.1]), sched)


def test_anomalous_row_insensitive_to_noise():
    # with a depth-limit-matched schedule per kappa, the anomalous amplitude
    # stays pinned in the 1e-3..1e-2 error band while a normal amplitude
    # improves roughly 10x per noise decade
    eps_anom = []
    eps_norm = []
    for kappa in (1e-5, 1e-4, 1e-3):
        sched = default_density_schedule(kappa)
        grid = error_vs_kappa_contour(
            np.asarray([A_ANOMALOUS, 0.375]), np.asarray([kappa]), sched
        )
        eps_anom.append(grid.epsilon_min[0][0])
        eps_norm.append(grid.epsilon_min[1][0])
    assert all(1e-3 <= e <= 1e-2 for e in eps_anom)
    assert max(eps_anom) / min(eps_anom) < 1.5
    assert 5.0 <= eps_norm[1] / eps_norm[0] <= 20.0
    assert 5.0 <= eps_norm[2] / eps_norm[1] <= 20.0


def test_error_spikes_sit_on_anomalous_targets():
    # every strong local maximum of eps_min lies within one grid cell of a
    # point flagged anomalous (beta above threshold)
    kappa = 1e-2
    sched = default_density_schedule(kappa)
    a = np.linspace(0.005, 0.995, 2000)
    grid = error_vs_kappa_contour(a, np.asarray([kappa]), sched)
    eps = np.asarray([row[0] for row in grid.epsilon_min])
    beta = anomality_trace(a, kappa, sched)
    median = float(np.median(eps))
    spikes = [
        i
        for i in range(1, len(a) - 1)
        if eps[i] > eps[i - 1] and eps[i] > eps[i + 1] and eps[i] > 3.0 * median
    ]
    assert len(spikes) >= 2
    for i in spikes:
        assert np.nanmax(beta[max(0, i - 1) : i + 2]) > 0.9
    # the two strongest spikes are the conjugate anomalous pair
    tops = sorted(spikes, key=lambda i: eps[i], reverse=True)[:2]
    located = sorted(a[i] for i in tops)
    assert located[0] == pytest.approx(A_ANOMALOUS, abs=2e-3)
    assert located[1] == pytest.approx(math.sin(3 * math.pi / 8) ** 2, abs=2e-3)
