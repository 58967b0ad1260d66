import numpy as np
import pytest

from jwa.composition import uniform
from jwa.errors import ConfigError, DimensionMismatch, NotPositiveSemiDefinite, TooFewParts, ZeroTotal
from jwa.simulation import (
    VALIDITY_TABLE,
    ExperimentConfig,
    ExperimentTable,
    ValiditySet,
    build_covariance,
    derive_lwa_weights,
    derive_owa_weights,
    factorize,
    inject_bias,
    inject_bias_batch,
    mse,
    replication_rng,
    run_experiment,
    run_replication,
    sample_trial,
    sample_trials,
    simulate_replication,
    standard_error,
    validity_sets,
)


def cfg_for(set_id=1, **kw):
    return ExperimentConfig(validity_set=ValiditySet.table(set_id), **kw)


def exact_lwa_mse(cfg):
    """E[(w.x - y)^2] for normalised-validity weights, bias included."""
    cov = build_covariance(cfg)
    k, m = cfg.k, cfg.n_biased_sources
    w = np.asarray(cfg.validity_set.validities) / sum(cfg.validity_set.validities)
    a = np.append(w, -1.0)
    base = a @ cov @ a
    s2 = float(w @ w)
    subset_sq = m / k * s2 + m * (m - 1) / (k * (k - 1)) * (1.0 - s2)
    return base + cfg.bias_prob * cfg.delta**2 * subset_sq


class TestValiditySets:
    def test_table_rows(self):
        assert len(VALIDITY_TABLE) == 7
        for vals in VALIDITY_TABLE.values():
            assert len(vals) == 10 and min(vals) >= 0
        assert VALIDITY_TABLE[7] == (0, 0, 0, 0, 0, 0, 0.03, 0.23, 1.52, 8.22)

    def test_variance_column(self):
        # last column of the table: sample variance of each row, reported to 2 decimals,
        # presumably from unrounded validities (set 7 computes to 6.659)
        reported = {1: 0.00, 2: 0.00, 3: 0.03, 4: 0.79, 5: 1.79, 6: 3.70, 7: 6.65}
        for i, var in reported.items():
            assert np.var(VALIDITY_TABLE[i], ddof=1) == pytest.approx(var, abs=0.01)

    def test_unknown_id(self):
        with pytest.raises(ConfigError):
            ValiditySet.table(8)


class TestCovariance:
    def test_set1(self):
        cov = build_covariance(cfg_for(1))
        assert cov.shape == (11, 11)
        np.testing.assert_array_equal(np.diag(cov), 10.0)
        assert np.all(cov[:10, :10][~np.eye(10, dtype=bool)] == 2.0)
        np.testing.assert_array_equal(cov[:10, 10], 1.0)
        np.testing.assert_array_equal(cov, cov.T)

    def test_zero_validity(self):
        cfg = ExperimentConfig(validity_set=ValiditySet(0, (0.0,) * 10))
        cov = build_covariance(cfg)
        np.testing.assert_array_equal(cov[:10, 10], 0.0)
        assert cov[10, 10] == 10.0

    @pytest.mark.parametrize("set_id", sorted(VALIDITY_TABLE))
    def test_every_set_factorises(self, set_id):
        cov = build_covariance(cfg_for(set_id))
        L = factorize(cov)
        np.testing.assert_allclose(L @ L.T, cov, rtol=0, atol=1e-8)
        assert np.all(np.linalg.eigvalsh(cov) > 0)

    def test_invalid_validity_rejected(self):
        cfg = ExperimentConfig(validity_set=ValiditySet(9, (0.0,) * 9 + (12.0,)))
        with pytest.raises(NotPositiveSemiDefinite):
            build_covariance(cfg)


class TestFactorize:
    def test_identity(self):
        np.testing.assert_array_equal(factorize(np.eye(4)), np.eye(4))

    def test_diagonal(self):
        np.testing.assert_allclose(factorize(np.array([[4.0, 0], [0, 9.0]])), [[2, 0], [0, 3]])

    def test_lower_triangular(self):
        L = factorize(build_covariance(cfg_for(4)))
        assert np.all(np.triu(L, 1) == 0)

    def test_rejects(self):
        with pytest.raises(NotPositiveSemiDefinite):
            factorize(np.array([[1.0, 2.0], [2.0, 1.0]]))
        with pytest.raises(NotPositiveSemiDefinite):
            factorize(np.array([[1.0, 0.5], [0.4, 1.0]]))
        with pytest.raises(DimensionMismatch):
            factorize(np.ones((2, 3)))


class TestSampling:
    def test_zero_factor_gives_means(self):
        cfg = cfg_for(1, delta=0.0)
        rec = sample_trial(replication_rng(0, 0), np.zeros((11, 11)), cfg)
        np.testing.assert_array_equal(rec.x, 10.0)
        assert rec.y == 10.0

    def test_deterministic(self):
        cfg = cfg_for(3, delta=6.0)
        L = factorize(build_covariance(cfg))
        a = [sample_trial(replication_rng(5, 2), L, cfg) for _ in range(2)]
        np.testing.assert_array_equal(a[0].x, a[1].x)
        assert a[0].y == a[1].y and a[0].biased_sources == a[1].biased_sources

    def test_law_of_large_numbers(self):
        cfg = cfg_for(4, delta=0.0)
        X, y, _ = sample_trials(replication_rng(1, 0), factorize(build_covariance(cfg)), cfg, 100_000)
        assert abs(X.mean() - 10.0) < 0.1
        assert abs(y.mean() - 10.0) < 0.1
        emp = np.cov(np.column_stack([X, y]), rowvar=False)
        np.testing.assert_allclose(emp, build_covariance(cfg), atol=0.3)

    def test_record_shape(self):
        cfg = cfg_for(1, delta=6.0, bias_prob=1.0)
        rec = sample_trial(replication_rng(0, 1), factorize(build_covariance(cfg)), cfg)
        assert rec.x.shape == (10,) and len(rec.biased_sources) == 2


class TestBias:
    def test_zero_delta(self):
        cfg = cfg_for(1, delta=0.0, bias_prob=1.0)
        x = np.arange(10.0)
        xb, _ = inject_bias(replication_rng(0, 0), x, cfg)
        np.testing.assert_array_equal(xb, x)

    def test_two_sources_shifted(self):
        cfg = cfg_for(1, delta=6.0, bias_prob=1.0)
        x = np.arange(10.0)
        xb, idx = inject_bias(replication_rng(0, 0), x, cfg)
        assert len(idx) == 2 and len(set(idx)) == 2
        diff = xb - x
        assert sorted(np.flatnonzero(diff).tolist()) == list(idx)
        np.testing.assert_array_equal(diff[list(idx)], 6.0)

    def test_biased_fraction(self):
        cfg = cfg_for(1, delta=1.0)
        _, mask = inject_bias_batch(replication_rng(3, 0), np.zeros((10_000, 10)), cfg)
        frac = mask.any(axis=1).mean()
        assert 0.47 <= frac <= 0.53
        assert set(mask.sum(axis=1).tolist()) == {0, 2}

    def test_sources_uniform(self):
        cfg = cfg_for(1, delta=1.0, bias_prob=1.0)
        _, mask = inject_bias_batch(replication_rng(4, 0), np.zeros((20_000, 10)), cfg)
        counts = mask.sum(axis=0) / 20_000
        np.testing.assert_allclose(counts, 0.2, atol=0.015)

    def test_criterion_untouched(self):
        a = cfg_for(2, delta=0.0)
        b = cfg_for(2, delta=18.0)
        L = factorize(build_covariance(a))
        Xa, ya, _ = sample_trials(replication_rng(9, 0), L, a, 200)
        Xb, yb, mb = sample_trials(replication_rng(9, 0), L, b, 200)
        np.testing.assert_array_equal(ya, yb)
        np.testing.assert_allclose(Xb - Xa, 18.0 * mb)


class TestWeights:
    def test_set1_uniform(self):
        np.testing.assert_allclose(derive_lwa_weights(ValiditySet.table(1)).parts, uniform(10).parts, atol=1e-15)

    def test_set7_top_source(self):
        assert sum(VALIDITY_TABLE[7]) == pytest.approx(10.0, abs=1e-12)
        assert derive_lwa_weights(ValiditySet.table(7))[9] == pytest.approx(0.822, abs=1e-12)

    def test_all_sets_close(self):
        for vs in validity_sets():
            assert derive_lwa_weights(vs).parts.sum() == pytest.approx(1.0, abs=1e-12)

    def test_zero_validities(self):
        with pytest.raises(ZeroTotal):
            derive_lwa_weights(ValiditySet(0, (0.0,) * 10))

    def test_owa_weights(self):
        assert derive_owa_weights(10).parts.tolist() == [0, 0] + [0.125] * 8
        assert derive_owa_weights(3).parts.tolist() == [0, 0, 1]
        assert derive_owa_weights(7).parts.sum() == pytest.approx(1.0, abs=1e-15)
        with pytest.raises(TooFewParts):
            derive_owa_weights(2)


class TestMSE:
    def test_identical(self):
        assert mse([1, 2, 3], [1, 2, 3]) == 0.0

    def test_hand(self):
        assert mse([1, 2], [3, 2]) == 2.0

    def test_constant_predictor(self):
        y = np.random.default_rng(0).normal(10, np.sqrt(10), 100_000)
        assert mse(np.full_like(y, 10.0), y) == pytest.approx(10.0, abs=0.5)

    def test_mismatch(self):
        with pytest.raises(DimensionMismatch):
            mse([1, 2], [1, 2, 3])
        with pytest.raises(DimensionMismatch):
            mse([], [])


class TestReplication:
    def test_deterministic(self):
        cfg = cfg_for(5, delta=6.0, trials=300)
        assert run_replication(cfg, 3) == run_replication(cfg, 3)
        assert run_replication(cfg, 3) != run_replication(cfg, 4)

    def test_set1_jwa_equals_owa(self):
        cfg = cfg_for(1, delta=6.0, trials=500)
        X, y, preds = simulate_replication(cfg, 0)
        np.testing.assert_allclose(preds["jwa"], preds["owa"], rtol=0, atol=1e-9)
        np.testing.assert_allclose(preds["owawa"], 0.5 * (preds["lwa"] + preds["owa"]), rtol=0, atol=1e-9)

    @pytest.mark.parametrize("set_id", sorted(VALIDITY_TABLE))
    def test_owawa_between_at_zero_bias(self, set_id):
        _, _, p = simulate_replication(cfg_for(set_id, delta=0.0, trials=300), 1)
        lo = np.minimum(p["lwa"], p["owa"])
        hi = np.maximum(p["lwa"], p["owa"])
        assert np.all((p["owawa"] >= lo - 1e-12) & (p["owawa"] <= hi + 1e-12))

    def test_jwa_can_leave_the_lwa_owa_interval(self):
        _, _, p = simulate_replication(cfg_for(7, delta=0.0, trials=500), 0)
        lo = np.minimum(p["lwa"], p["owa"])
        hi = np.maximum(p["lwa"], p["owa"])
        assert np.any((p["jwa"] < lo - 1e-9) | (p["jwa"] > hi + 1e-9))

    def test_sdowa_optional(self):
        cfg = cfg_for(4, delta=2.0, trials=100, roster=("lwa", "owa", "jwa", "owawa", "sdowa"))
        assert set(run_replication(cfg, 0)) == {"lwa", "owa", "jwa", "owawa", "sdowa"}

    @pytest.mark.parametrize("set_id", sorted(VALIDITY_TABLE))
    @pytest.mark.parametrize("delta", [0.0, 6.0])
    def test_lwa_mse_matches_exact_expectation(self, set_id, delta):
        cfg = cfg_for(set_id, delta=delta, trials=500, replications=60, roster=("lwa",))
        vals = np.array([run_replication(cfg, r)["lwa"] for r in range(cfg.replications)])
        se = vals.std(ddof=1) / np.sqrt(vals.size)
        assert abs(vals.mean() - exact_lwa_mse(cfg)) < 4 * se


class TestConfig:
    @pytest.mark.parametrize(
        "kw",
        [
            {"k": 2},
            {"trials": 0},
            {"replications": 0},
            {"bias_prob": 1.5},
            {"n_biased_sources": 10},
            {"delta": -1.0},
            {"alpha": 2.0},
            {"roster": ("lwa", "median")},
        ],
    )
    def test_rejects(self, kw):
        with pytest.raises(ConfigError):
            cfg_for(1, **kw)

    def test_k_must_match_validities(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(validity_set=ValiditySet(1, (1.0,) * 5))


class TestExperiment:
    def test_cardinality_and_order(self):
        base = ExperimentConfig(trials=20, replications=3, seed=1)
        table = run_experiment(base)
        assert len(table) == 84
        assert table.sets == list(range(1, 8))
        assert table.deltas == [2.0, 6.0, 18.0]
        keys = [(r.set, r.delta, r.operator) for r in table]
        assert len(set(keys)) == 84
        assert all(r.mean_mse >= 0 and np.isfinite(r.mean_mse) and r.replications == 3 for r in table)

    def test_parallel_matches_sequential(self):
        base = ExperimentConfig(trials=50, replications=4, seed=7)
        sets = validity_sets([1, 6])
        a = run_experiment(base, sets, (2.0, 18.0), workers=1)
        b = run_experiment(base, sets, (2.0, 18.0), workers=2)
        assert a.to_csv() == b.to_csv()

    def test_csv_round_trip(self):
        table = run_experiment(ExperimentConfig(trials=30, replications=3), validity_sets([2]), (6.0,))
        text = table.to_csv()
        assert text.splitlines()[0] == "set,delta,operator,mean_mse,sd_mse,replications"
        back = ExperimentTable.from_csv(text)
        assert back == table

    def test_single_replication_sd(self):
        table = run_experiment(ExperimentConfig(trials=30, replications=1), validity_sets([2]), (6.0,))
        assert all(r.sd_mse == 0.0 for r in table)

    def test_lwa_worsens_with_bias_for_skewed_sets(self):
        base = ExperimentConfig(trials=300, replications=20, seed=11)
        table = run_experiment(base, validity_sets([5, 6, 7]), (2.0, 6.0, 18.0))
        for s in (5, 6, 7):
            rows = [table.get(s, d, "lwa") for d in (2.0, 6.0, 18.0)]
            for a, b in zip(rows, rows[1:]):
                assert b.mean_mse >= a.mean_mse - 2 * np.hypot(standard_error(a), standard_error(b))

    def test_get_missing(self):
        table = run_experiment(ExperimentConfig(trials=10, replications=1), validity_sets([1]), (2.0,))
        with pytest.raises(KeyError):
            table.get(2, 2.0, "lwa")
