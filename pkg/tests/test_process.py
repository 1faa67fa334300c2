"""Tests of conditional intensity, thinning simulation, and serialization."""

import json
import math

import numpy as np
import pytest
from scipy import stats

from frachawkes import mlf
from frachawkes.process import (
    EventSequence,
    ModelParams,
    SimulationCapError,
    ThinningConfig,
    conditional_intensity,
    intensity_path,
    replicate_counts,
    simulate,
)

from _oracles import cluster_hawkes_counts

F_07_AT_15 = 0.130199803200785712
F_07_AT_08 = 0.266106586512536407


class TestModelParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            ModelParams(lam=0.0, alpha=0.5, beta=0.5)
        with pytest.raises(ValueError):
            ModelParams(lam=1.0, alpha=1.0, beta=0.5)
        with pytest.raises(ValueError):
            ModelParams(lam=1.0, alpha=-0.1, beta=0.5)
        with pytest.raises(ValueError):
            ModelParams(lam=1.0, alpha=0.5, beta=1.2)

    def test_dict_round_trip(self):
        p = ModelParams(lam=2.0, alpha=0.3, beta=0.8)
        assert ModelParams.from_dict(p.as_dict()) == p


class TestConditionalIntensity:
    def test_empty_history(self):
        p = ModelParams(lam=1.0, alpha=0.5, beta=0.7)
        assert conditional_intensity(p, [], 3.0) == 1.0

    def test_future_events_ignored(self):
        p = ModelParams(lam=1.0, alpha=0.5, beta=0.7)
        assert conditional_intensity(p, [5.0, 6.0], 3.0) == 1.0

    def test_exponential_kernel(self):
        p = ModelParams(lam=1.0, alpha=0.5, beta=1.0)
        want = 1.0 + 0.5 * math.exp(-2.0)
        assert conditional_intensity(p, [0.0], 2.0) == pytest.approx(want, rel=1e-14)

    def test_fractional_kernel_oracle(self):
        p = ModelParams(lam=1.0, alpha=0.9, beta=0.7)
        want = 1.0 + 0.9 * (F_07_AT_15 + F_07_AT_08)
        assert conditional_intensity(p, [0.5, 1.2], 2.0) == pytest.approx(want, rel=1e-10)

    def test_singularity_at_epoch(self):
        p = ModelParams(lam=1.0, alpha=0.5, beta=0.7)
        with pytest.raises(ValueError):
            conditional_intensity(p, [0.5, 2.0], 2.0)
        # beta = 1 is regular at zero lag
        p1 = ModelParams(lam=1.0, alpha=0.5, beta=1.0)
        assert conditional_intensity(p1, [2.0], 2.0) == 1.0


class TestThinningConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            ThinningConfig(epsilon=0.0)
        with pytest.raises(ValueError):
            ThinningConfig(max_events=0)
        with pytest.raises(ValueError):
            ThinningConfig(rng_algorithm="mt19937-custom")
        with pytest.raises(ValueError):
            ThinningConfig(markov_nodes=4)


class TestSimulate:
    def test_seed_determinism(self):
        p = ModelParams(lam=1.0, alpha=0.7, beta=0.6)
        a = simulate(p, 20.0, seed=123)
        b = simulate(p, 20.0, seed=123)
        assert np.array_equal(a.epochs, b.epochs)
        c = simulate(p, 20.0, seed=124)
        assert not np.array_equal(a.epochs, c.epochs)

    def test_epochs_within_horizon(self):
        p = ModelParams(lam=2.0, alpha=0.5, beta=0.5)
        seq = simulate(p, 15.0, seed=5)
        assert np.all(np.diff(seq.epochs) > 0.0)
        assert seq.epochs[0] >= 0.0 and seq.epochs[-1] <= 15.0

    def test_poisson_when_alpha_zero(self):
        p = ModelParams(lam=1.0, alpha=0.0, beta=0.5)
        counts = replicate_counts(p, 10.0, master_seed=11, n=2000)
        se = math.sqrt(10.0 / 2000)
        assert abs(counts.mean() - 10.0) <= 3.0 * se

    def test_cap_exceeded(self):
        p = ModelParams(lam=5.0, alpha=0.5, beta=0.5)
        with pytest.raises(SimulationCapError):
            simulate(p, 100.0, ThinningConfig(max_events=10), seed=0)

    def test_clamp_diagnostics_counted(self):
        p = ModelParams(lam=1.0, alpha=0.9, beta=0.5)
        seq = simulate(p, 20.0, seed=3)
        d = seq.diagnostics
        assert d.accepted == len(seq)
        assert d.candidates >= d.accepted
        assert d.clamped >= 0

    def test_exponential_vs_cluster_oracle(self):
        # distributional agreement with an independent branching construction
        p = ModelParams(lam=1.0, alpha=0.5, beta=1.0)
        thinned = replicate_counts(p, 5.0, master_seed=42, n=2000)
        clustered = cluster_hawkes_counts(1.0, 0.5, 5.0, n=2000, seed=43)
        _, pvalue = stats.ks_2samp(thinned, clustered)
        assert pvalue > 0.01

    def test_markov_mode_matches_exact_statistically(self):
        p = ModelParams(lam=1.0, alpha=0.5, beta=0.7)
        exact = replicate_counts(p, 5.0, ThinningConfig(), master_seed=7, n=1500)
        markov = replicate_counts(
            p, 5.0, ThinningConfig(markov_nodes=400), master_seed=8, n=1500
        )
        _, pvalue = stats.ks_2samp(exact, markov)
        assert pvalue > 0.01

    def test_markov_mode_rejects_beta_one(self):
        p = ModelParams(lam=1.0, alpha=0.5, beta=1.0)
        with pytest.raises(ValueError):
            simulate(p, 5.0, ThinningConfig(markov_nodes=100), seed=0)


class TestIntensityPath:
    def test_empty_sequence_constant(self):
        p = ModelParams(lam=1.5, alpha=0.5, beta=0.5)
        seq = EventSequence(epochs=np.array([]), horizon=10.0, seed=0, params=p)
        path = intensity_path(seq, np.linspace(0, 10, 11))
        assert np.all(path.values == 1.5)

    def test_single_event_exponential(self):
        p = ModelParams(lam=1.0, alpha=0.9, beta=1.0)
        seq = EventSequence(epochs=np.array([1.0]), horizon=5.0, seed=0, params=p)
        path = intensity_path(seq, np.array([2.0]))
        assert path.values[0] == pytest.approx(1.0 + 0.9 * math.exp(-1.0), rel=1e-12)

    def test_floor_and_decay(self):
        p = ModelParams(lam=1.0, alpha=0.9, beta=0.9)
        seq = simulate(p, 5.0, seed=17)
        assert len(seq) > 0
        path = intensity_path(seq, np.linspace(0.0, 5.0, 4001))
        assert np.all(path.values >= p.lam)
        # strictly decreasing between consecutive events (before the first
        # event the path is exactly constant, so start there)
        boundaries = np.concatenate([seq.epochs, [5.0]])
        for lo, hi in zip(boundaries[:-1], boundaries[1:]):
            inside = (path.grid > lo) & (path.grid < hi)
            if inside.sum() > 1:
                assert np.all(np.diff(path.values[inside]) < 0.0)

    def test_spike_decay_shape_after_event(self):
        # just after an event the increment decays like t^(beta-1)/Gamma(beta)
        p = ModelParams(lam=1.0, alpha=0.9, beta=0.9)
        seq = EventSequence(epochs=np.array([1.0]), horizon=2.0, seed=0, params=p)
        lags = np.array([1e-6, 1e-5, 1e-4])
        path = intensity_path(seq, 1.0 + lags)
        excess = path.values - 1.0
        lead = 0.9 * lags ** (0.9 - 1.0) / math.gamma(0.9)
        np.testing.assert_allclose(excess, lead, rtol=1e-3)

    def test_grid_collision_shifted(self):
        p = ModelParams(lam=1.0, alpha=0.5, beta=0.5)
        seq = EventSequence(epochs=np.array([1.0]), horizon=5.0, seed=0, params=p)
        path = intensity_path(seq, np.array([0.5, 1.0, 2.0]), epsilon=1e-10)
        assert np.isfinite(path.values).all()
        assert path.grid[1] == pytest.approx(1.0 + 1e-10)


class TestSerialization:
    def _seq(self):
        p = ModelParams(lam=1.0, alpha=0.5, beta=0.5)
        return simulate(p, 10.0, seed=99)

    def test_csv_round_trip(self, tmp_path):
        seq = self._seq()
        path = tmp_path / "events.csv"
        seq.to_csv(path)
        back = EventSequence.from_csv(path, seq.horizon, seq.seed, seq.params)
        assert np.array_equal(back.epochs, seq.epochs)
        assert path.read_text().splitlines()[0] == "t"

    def test_json_round_trip(self, tmp_path):
        seq = self._seq()
        path = tmp_path / "events.json"
        seq.to_json(path)
        back = EventSequence.from_json(path)
        assert np.array_equal(back.epochs, seq.epochs)
        assert back.params == seq.params
        assert back.horizon == seq.horizon
        assert back.seed == seq.seed
        doc = json.loads(path.read_text())
        assert set(doc) == {"params", "horizon", "seed", "epochs"}

    def test_invalid_epochs_rejected(self):
        p = ModelParams(lam=1.0, alpha=0.5, beta=0.5)
        with pytest.raises(ValueError):
            EventSequence(epochs=np.array([2.0, 1.0]), horizon=5.0, seed=0, params=p)
        with pytest.raises(ValueError):
            EventSequence(epochs=np.array([1.0, 6.0]), horizon=5.0, seed=0, params=p)
