import numpy as np
import pytest

from advkit.attacks import default_config, feature_adversaries, spsa_attack, spsa_gradient
from advkit.errors import ArgumentError, EvaluationError
from advkit.numcore import forward
from advkit.rng import make_generator

from conftest import binary_linear, random_model


class TestFeatureAdversaries:
    def test_guide_equals_input_is_noop(self, rng):
        model = random_model(rng, 3, 2, (6,))
        x = rng.uniform(0.2, 0.8, 3)
        cfg = default_config("feature_adversaries", iterations=10,
                             guide_layer=0, delta_bound=0.2)
        res = feature_adversaries(model, x, x.copy(), cfg)
        assert np.array_equal(res.adversarial, x)
        assert res.extra["initial_feature_distance_sq"] == 0.0
        assert not res.success

    def test_delta_bound_respected_per_coordinate(self, rng):
        model = random_model(rng, 4, 3, (8,))
        x = rng.uniform(0.3, 0.7, 4)
        guide = rng.uniform(0.0, 1.0, 4)
        cfg = default_config("feature_adversaries", iterations=40,
                             step_size=0.03, delta_bound=0.15, guide_layer=0)
        res = feature_adversaries(model, x, guide, cfg)
        assert np.all(np.abs(res.adversarial - x) <= 0.15 + 1e-12)
        assert np.all(res.adversarial >= 0.0)
        assert np.all(res.adversarial <= 1.0)

    def test_descent_reduces_feature_distance(self, rng):
        model = random_model(rng, 2, 2, (8, 8))
        x = np.array([0.2, 0.8])
        guide = np.array([0.7, 0.3])
        cfg = default_config("feature_adversaries", iterations=10,
                             step_size=0.02, delta_bound=0.3, guide_layer=1)
        res = feature_adversaries(model, x, guide, cfg)
        assert res.extra["final_feature_distance_sq"] < \
            res.extra["initial_feature_distance_sq"]
        assert res.success

    def test_matches_distance_between_hidden_activations(self, rng):
        model = random_model(rng, 3, 2, (5,))
        x = rng.uniform(0.2, 0.8, 3)
        guide = rng.uniform(0.2, 0.8, 3)
        cfg = default_config("feature_adversaries", iterations=0, guide_layer=0)
        res = feature_adversaries(model, x, guide, cfg)
        _, hx = forward(model, x)
        _, hg = forward(model, guide)
        expected = float(np.sum((hx[0] - hg[0]) ** 2))
        assert abs(res.extra["initial_feature_distance_sq"] - expected) < 1e-12

    def test_guide_layer_out_of_range(self, rng):
        model = random_model(rng, 3, 2, (5,))
        cfg = default_config("feature_adversaries", guide_layer=7)
        with pytest.raises(ArgumentError):
            feature_adversaries(model, np.full(3, 0.5), np.full(3, 0.4), cfg)


class TestSpsaGradient:
    def test_constant_score_gives_zero(self):
        est = spsa_gradient(lambda p: 3.5, np.zeros(4), 0.01, 16, seed=0)
        assert np.array_equal(est, np.zeros(4))

    def test_linear_score_estimate_within_five_percent(self):
        a = np.array([1.5, -2.0, 0.7])
        est = spsa_gradient(lambda p: float(a @ p), np.zeros(3), 0.01, 2000,
                            seed=42)
        assert np.all(np.abs(est - a) <= 0.05 * np.abs(a))

    def test_single_sample_exact_on_1d_quadratic(self):
        # central differences are exact through degree two in one dimension
        for seed in range(5):
            x = np.array([0.37])
            est = spsa_gradient(lambda p: float(2.0 * p[0] ** 2 - p[0] + 3.0),
                                x, 0.05, 1, seed=seed)
            exact = 4.0 * x[0] - 1.0
            assert abs(est[0] - exact) < 1e-10

    def test_deterministic_given_seed(self):
        a = np.array([0.3, -0.9])
        one = spsa_gradient(lambda p: float(a @ p), np.zeros(2), 0.01, 64, seed=7)
        two = spsa_gradient(lambda p: float(a @ p), np.zeros(2), 0.01, 64, seed=7)
        assert one.tobytes() == two.tobytes()

    def test_non_finite_score_raises(self):
        with pytest.raises(EvaluationError):
            spsa_gradient(lambda p: float("inf"), np.zeros(2), 0.01, 4, seed=1)

    def test_argument_validation(self):
        with pytest.raises(ArgumentError):
            spsa_gradient(lambda p: 0.0, np.zeros(2), 0.01, 0, seed=1)
        with pytest.raises(ArgumentError):
            spsa_gradient(lambda p: 0.0, np.zeros(2), -1.0, 4, seed=1)

    def test_unbiased_on_linear_scores(self):
        # mean of single-sample estimates within 3 standard errors per coord
        a = np.array([1.0, -0.4, 0.8, 0.1])
        n = 2000
        estimates = np.empty((n, 4))
        for seed in range(n):
            estimates[seed] = spsa_gradient(lambda p: float(a @ p),
                                            np.zeros(4), 0.01, 1, seed=seed)
        mean = estimates.mean(axis=0)
        stderr = estimates.std(axis=0, ddof=1) / np.sqrt(n)
        assert np.all(np.abs(mean - a) <= 3.0 * stderr)


class TestSpsaAttack:
    def test_eps_zero_identity(self):
        model = binary_linear([1.0, -0.5], 0.1)
        x = np.array([0.4, 0.6])
        cfg = default_config("spsa_attack", eps=0.0, iterations=3,
                             spsa_samples=4, seed=0)
        res = spsa_attack(model, x, int(model.predict(x)), cfg)
        assert np.array_equal(res.adversarial, x)

    def test_query_accounting_exact(self, rng):
        model = random_model(rng, 3, 2, (5,))
        x = rng.uniform(0.3, 0.7, 3)
        label = int(model.predict(x))
        cfg = default_config("spsa_attack", eps=0.2, iterations=7,
                             spsa_samples=5, seed=1)
        res = spsa_attack(model, x, label, cfg)
        assert res.queries == 7 * 5 * 2

    def test_budget_and_box(self, rng):
        model = random_model(rng, 4, 3, (6,))
        x = rng.uniform(0.2, 0.8, 4)
        cfg = default_config("spsa_attack", eps=0.15, iterations=10,
                             spsa_samples=8, step_size=0.03, seed=3)
        res = spsa_attack(model, x, int(model.predict(x)), cfg)
        assert np.all(np.abs(res.adversarial - x) <= 0.15 + 1e-12)
        assert np.all(res.adversarial >= 0.0)
        assert np.all(res.adversarial <= 1.0)

    def test_margin_nonpositive_when_successful(self, rng):
        from advkit.numcore.losses import cw_margin_at_logits
        model = binary_linear([1.2, -0.8], -0.1)
        rng2 = make_generator(11)
        found = 0
        for trial in range(10):
            x = rng2.uniform(0.2, 0.8, 2)
            label = int(model.predict(x))
            cfg = default_config("spsa_attack", eps=0.3, iterations=30,
                                 spsa_samples=16, step_size=0.05, seed=trial)
            res = spsa_attack(model, x, label, cfg)
            if res.success:
                found += 1
                value, _ = cw_margin_at_logits(model.logits(res.adversarial),
                                               label, cfg.confidence,
                                               targeted=False)
                assert value <= 0.0
        assert found >= 5

    def test_deterministic(self, rng):
        model = random_model(rng, 3, 2, (4,))
        x = rng.uniform(0.3, 0.7, 3)
        cfg = default_config("spsa_attack", eps=0.2, iterations=5,
                             spsa_samples=6, seed=13)
        label = int(model.predict(x))
        a = spsa_attack(model, x, label, cfg)
        b = spsa_attack(model, x, label, cfg)
        assert a.adversarial.tobytes() == b.adversarial.tobytes()
        assert a.queries == b.queries
