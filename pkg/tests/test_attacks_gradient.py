import numpy as np
import pytest
from dataclasses import replace

from advkit.attacks import AttackConfig, bim, fgsm, mim, pgd
from advkit.numcore import Classifier, Layer, LossKind, loss_grad_input
from advkit.numcore.losses import softmax
from advkit.rng import make_generator

from conftest import logistic_model, random_model, results_equal


class TestFgsm:
    def test_eps_zero_identity(self):
        model = logistic_model()
        cfg = AttackConfig(eps=0.0)
        res = fgsm(model, np.array([0.4]), 1, cfg)
        assert np.array_equal(res.adversarial, [0.4])
        assert not res.success  # 0.4 classified as 1 == label

    def test_eps_zero_already_misclassified(self):
        model = logistic_model()
        cfg = AttackConfig(eps=0.0)
        res = fgsm(model, np.array([0.4]), 0, cfg)  # model predicts 1
        assert res.success
        assert res.iterations_used == 0
        assert np.array_equal(res.adversarial, [0.4])

    def test_logistic_example_descends(self):
        # gradient of the true-label loss is negative, so the step is -eps
        model = logistic_model()
        cfg = AttackConfig(eps=0.3)
        res = fgsm(model, np.array([0.4]), 1, cfg)
        assert abs(res.adversarial[0] - 0.1) < 1e-15
        assert res.norms.linf <= 0.3
        assert res.queries == 1

    def test_positive_gradient_clips_at_box_face(self):
        # bias keeps the point classified as its label while the loss gradient
        # pushes up: 0.95 + 0.3 clips to 1.0
        model = Classifier([
            Layer(np.array([[0.0], [2.0]]), np.array([0.0, -1.9]), "id")
        ])
        x = np.array([0.95])
        assert model.predict(x) == 0
        _, grad = loss_grad_input(model, x, 0, LossKind.cross_entropy())
        assert grad[0] > 0
        res = fgsm(model, x, 0, AttackConfig(eps=0.3))
        assert res.adversarial[0] == 1.0

    def test_targeted_descends_target_loss(self):
        model = logistic_model()
        cfg = AttackConfig(eps=0.3, target=0)
        res = fgsm(model, np.array([0.4]), 1, cfg)
        # moving toward class 0 means decreasing x through the logit slope
        assert res.adversarial[0] < 0.4

    def test_budget_and_box(self, rng):
        for _ in range(25):
            model = random_model(rng, 3, 3, (5,))
            x = rng.uniform(0, 1, 3)
            eps = float(rng.uniform(0, 0.5))
            res = fgsm(model, x, int(rng.integers(0, 3)), AttackConfig(eps=eps))
            assert res.norms.linf <= eps + 1e-12
            assert np.all(res.adversarial >= 0.0)
            assert np.all(res.adversarial <= 1.0)


class TestBim:
    def test_single_step_equals_fgsm_bit_exact(self, rng):
        for trial in range(20):
            model = random_model(rng, 4, 3, (6,))
            x = rng.uniform(0, 1, 4)
            label = int(rng.integers(0, 3))
            eps = float(rng.uniform(0.01, 0.4))
            cfg = AttackConfig(eps=eps, step_size=eps, iterations=1, seed=trial)
            assert results_equal(bim(model, x, label, cfg),
                                 fgsm(model, x, label, cfg))

    def test_eps_zero_identity(self):
        model = logistic_model()
        cfg = AttackConfig(eps=0.0, iterations=5, step_size=0.1)
        res = bim(model, np.array([0.4]), 1, cfg)
        assert np.array_equal(res.adversarial, [0.4])

    def test_iterates_stay_in_ball_per_coordinate(self, rng):
        model = random_model(rng, 5, 2, (8,))
        x = rng.uniform(0.2, 0.8, 5)
        eps = 0.15
        cfg = AttackConfig(eps=eps, step_size=2.5 * eps / 10, iterations=10)
        res = bim(model, x, int(rng.integers(0, 2)), cfg)
        assert np.all(np.abs(res.adversarial - x) <= eps + 1e-12)
        assert np.all(res.adversarial >= 0.0) and np.all(res.adversarial <= 1.0)


class TestPgd:
    def test_no_random_start_equals_bim(self, rng):
        for trial in range(20):
            model = random_model(rng, 3, 4, (5,))
            x = rng.uniform(0, 1, 3)
            label = int(rng.integers(0, 4))
            cfg = AttackConfig(eps=0.2, step_size=0.05, iterations=4,
                               rand_init=False, seed=trial)
            assert results_equal(pgd(model, x, label, cfg),
                                 bim(model, x, label, cfg))

    def test_init_only_case(self):
        # iterations=0 with a random start returns clip(x + u)
        model = logistic_model()
        x = np.array([0.4])
        cfg = AttackConfig(eps=0.25, iterations=0, rand_init=True, seed=99)
        res = pgd(model, x, 1, cfg)
        assert abs(res.adversarial[0] - 0.4) <= 0.25
        noise = make_generator(99).uniform(-0.25, 0.25, (1,))
        assert res.adversarial[0] == np.clip(0.4 + noise[0], 0.0, 1.0)

    def test_eps_zero_with_random_init_is_identity(self):
        model = logistic_model()
        cfg = AttackConfig(eps=0.0, iterations=3, rand_init=True, seed=5)
        res = pgd(model, np.array([0.4]), 1, cfg)
        assert np.array_equal(res.adversarial, [0.4])

    def test_random_start_within_ball(self, rng):
        model = random_model(rng, 4, 2, (6,))
        x = rng.uniform(0.3, 0.7, 4)
        cfg = AttackConfig(eps=0.2, step_size=0.05, iterations=5,
                           rand_init=True, seed=3)
        res = pgd(model, x, int(model.predict(x)), cfg)
        assert np.all(np.abs(res.adversarial - x) <= 0.2 + 1e-12)


class TestMim:
    def test_one_step_no_decay_equals_fgsm(self, rng):
        for trial in range(20):
            model = random_model(rng, 4, 3, (5,))
            x = rng.uniform(0, 1, 4)
            label = int(rng.integers(0, 3))
            eps = float(rng.uniform(0.05, 0.3))
            cfg = AttackConfig(eps=eps, step_size=eps, iterations=1,
                               decay=0.0, seed=trial)
            assert results_equal(mim(model, x, label, cfg),
                                 fgsm(model, x, label, cfg))

    def test_two_step_velocity_hand_trace(self):
        # fixed 2-class linear model; velocity after step two must equal
        # decay * g1/||g1||_1 + g2/||g2||_1 with gradients taken at the
        # successive iterates
        w = np.array([[0.0, 0.0], [1.5, -0.8]])
        b = np.array([0.0, 0.1])
        model = Classifier([Layer(w, b, "id")])
        x = np.array([0.45, 0.55])
        label = 1
        decay, step, eps = 0.7, 0.08, 0.3
        cfg = AttackConfig(eps=eps, step_size=step, iterations=2, decay=decay)
        assert model.predict(x) == label

        def ce_grad(point):
            z = model.logits(point)
            p = softmax(z)
            onehot = np.array([0.0, 1.0])
            return (p - onehot) @ w

        g1 = ce_grad(x)
        v1 = g1 / np.sum(np.abs(g1))
        x1 = np.clip(np.clip(x + step * np.sign(v1), x - eps, x + eps), 0, 1)
        g2 = ce_grad(x1)
        v2 = decay * v1 + g2 / np.sum(np.abs(g2))
        x2 = np.clip(np.clip(x1 + step * np.sign(v2), x - eps, x + eps), 0, 1)

        res = mim(model, x, label, cfg)
        assert res.adversarial.tobytes() == x2.tobytes()

    def test_eps_zero_identity(self):
        model = logistic_model()
        cfg = AttackConfig(eps=0.0, iterations=4, decay=0.5)
        res = mim(model, np.array([0.4]), 1, cfg)
        assert np.array_equal(res.adversarial, [0.4])

    def test_zero_gradient_step_keeps_iterate(self):
        # zero-weight network: gradient is identically zero and the iterate
        # must not move (no division by the zero norm either)
        model = Classifier([Layer(np.zeros((2, 2)), np.zeros(2), "id")])
        x = np.array([0.4, 0.6])
        cfg = AttackConfig(eps=0.2, step_size=0.1, iterations=3, decay=0.9)
        res = mim(model, x, 1, cfg)
        assert np.array_equal(res.adversarial, x)


class TestDeterminism:
    @pytest.mark.parametrize("attack", [fgsm, bim, pgd, mim])
    def test_bit_identical_reruns(self, attack, rng):
        model = random_model(rng, 4, 3, (6,))
        x = rng.uniform(0, 1, 4)
        cfg = AttackConfig(eps=0.2, step_size=0.05, iterations=4, seed=1234)
        first = attack(model, x, 1, cfg)
        second = attack(model, x, 1, cfg)
        assert results_equal(first, second)

    def test_norms_recompute_exactly(self, rng):
        model = random_model(rng, 5, 3, (7,))
        x = rng.uniform(0, 1, 5)
        cfg = AttackConfig(eps=0.25, step_size=0.07, iterations=6, seed=8)
        res = pgd(model, x, 0, cfg)
        delta = res.adversarial - x
        assert res.norms.l0 == int(np.count_nonzero(delta))
        assert res.norms.l1 == float(np.sum(np.abs(delta)))
        assert res.norms.l2 == float(np.sqrt(np.sum(delta * delta)))
        assert res.norms.linf == float(np.max(np.abs(delta)))
