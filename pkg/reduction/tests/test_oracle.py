import numpy as np
from django.test import SimpleTestCase

from reduction.correction import compute_c
from reduction.exceptions import DomainError, PreconditionError
from reduction.oracle import (
    CheckResult,
    check_continuity,
    check_contraction,
    check_dephasing_lemma,
    check_lemma3,
    check_purification_identity,
    check_trace_distance_bound,
    check_ucdup,
    eve_conditional_state,
    purification,
)
from reduction.sampling import (
    random_block_diagonal_povm,
    random_cq_pair,
    random_cq_state,
    random_density,
    random_povm,
    random_povm_element,
    random_projector,
    random_psd,
)
from reduction.states import CqState, DensityOperator, KeyLabel, Projector


def state_inside(pi: Projector, rank: int, seed) -> DensityOperator:
    """Normalized state supported on range Π."""
    m = pi.matrix @ random_psd(pi.dim, rank, seed) @ pi.matrix
    m = (m + m.conj().T) / 2
    return DensityOperator(m / np.trace(m).real)


def weight_outside(rho, pi):
    return float(np.trace(rho.matrix @ pi.complement().matrix).real)


class ResultRecordTests(SimpleTestCase):
    def test_pass_means_margin_above_slack(self):
        rho = random_density(3, 3, 0)
        pi = random_projector(3, 1, 1)
        result = check_lemma3(rho, random_povm_element(3, 2), pi)
        self.assertEqual(result.passed, result.margin >= -1e-9)
        self.assertAlmostEqual(result.margin, result.rhs - result.lhs, places=14)

    def test_serializes_pass_alias(self):
        result = check_contraction(np.eye(2) / 2, Projector.from_indices(2, [0]))
        dumped = result.model_dump(by_alias=True)
        self.assertIn("pass", dumped)
        self.assertNotIn("passed", dumped)
        self.assertIsInstance(result, CheckResult)


class Lemma3Tests(SimpleTestCase):
    def test_state_inside_projector(self):
        pi = random_projector(4, 2, 4)
        result = check_lemma3(state_inside(pi, 2, 5), random_povm_element(4, 6), pi)
        self.assertEqual(result.rhs, 0.0)
        self.assertLess(result.lhs, 1e-12)
        self.assertEqual((result.witness["s"], result.witness["weight_bound"]), (0.0, 0.0))
        self.assertTrue(result.passed)

    def test_states_inside_random_projectors(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            dim = int(rng.integers(2, 7))
            pi = random_projector(dim, int(rng.integers(1, dim)), rng)
            rho = state_inside(pi, int(rng.integers(1, pi.rank + 1)), rng)
            result = check_lemma3(rho, random_povm_element(dim, rng), pi)
            self.assertLess(result.lhs, 1e-12)
            self.assertEqual(result.witness["s"], 0.0)
            self.assertTrue(result.passed, result)

    def test_block_diagonal_element(self):
        pi = Projector.from_indices(3, [0])
        result = check_lemma3(random_density(3, 3, 1), np.diag([0.3, 0.8, 0.1]), pi)
        self.assertLess(result.lhs, 1e-12)
        self.assertTrue(result.passed)

    def test_larger_weight_bound(self):
        rho = random_density(4, 2, 7)
        pi = random_projector(4, 2, 8)
        p = random_povm_element(4, 9)
        exact = check_lemma3(rho, p, pi)
        loose = check_lemma3(rho, p, pi, weight_bound=min(1.0, weight_outside(rho, pi) + 0.2))
        self.assertTrue(loose.passed)
        self.assertGreaterEqual(loose.rhs, exact.rhs)
        self.assertEqual(loose.witness["weight_bound"], min(1.0, weight_outside(rho, pi) + 0.2))

    def test_weight_bound_below_actual(self):
        rho = random_density(4, 4, 1)
        pi = random_projector(4, 2, 2)
        with self.assertRaises(PreconditionError):
            check_lemma3(rho, random_povm_element(4, 3), pi, weight_bound=0.0)

    def test_rejects_element_above_identity(self):
        with self.assertRaisesMessage(DomainError, "norm"):
            check_lemma3(random_density(2, 2, 0), 2 * np.eye(2), Projector.from_indices(2, [0]))

    def test_random_instances(self):
        rng = np.random.default_rng(3)
        for _ in range(1000):
            dim = int(rng.integers(2, 9))
            rho = random_density(dim, int(rng.integers(1, dim + 1)), rng)
            pi = random_projector(dim, int(rng.integers(1, dim)), rng)
            result = check_lemma3(rho, random_povm_element(dim, rng), pi)
            self.assertTrue(result.passed, result)


class ContinuityTests(SimpleTestCase):
    def test_identical_states(self):
        state = random_cq_state(2, 1, 3, seed=1)
        result = check_continuity(state, state, 2)
        self.assertEqual(result.witness["epsilon"], 0.0)
        self.assertEqual(result.rhs, 0.0)
        self.assertAlmostEqual(result.lhs, 0.0, places=14)
        self.assertTrue(result.passed)

    def test_uniform_product_against_correlated(self):
        m = np.eye(2) / 2
        uniform = CqState(((KeyLabel(0, 0), m / 2), (KeyLabel(1, 0), m / 2)))
        k0 = np.diag([1.0, 0.0]).astype(complex)
        k1 = np.diag([0.0, 1.0]).astype(complex)
        correlated = CqState(((KeyLabel(0, 0), k0 / 2), (KeyLabel(1, 0), k1 / 2)))
        result = check_continuity(correlated, uniform, 2)
        self.assertAlmostEqual(result.lhs, 1.0, places=10)
        self.assertTrue(result.passed)

    def test_scaled_uniform_product(self):
        eve = random_density(3, 3, 8).matrix
        uniform = CqState(tuple((KeyLabel(z, 0), eve / 4) for z in range(4)))
        result = check_continuity(uniform, uniform.scaled(0.8), 4)
        self.assertAlmostEqual(result.witness["epsilon"], 0.1, places=12)
        self.assertAlmostEqual(result.lhs, -0.2 * 2.0, places=10)
        self.assertTrue(result.passed)

    def test_argument_order_does_not_matter(self):
        rho = random_cq_state(4, 1, 3, trace=0.9, seed=3)
        sigma = random_cq_state(4, 1, 3, trace=0.6, seed=4)
        self.assertEqual(
            check_continuity(rho, sigma, 4).model_dump(), check_continuity(sigma, rho, 4).model_dump()
        )

    def test_label_mismatch(self):
        a = CqState(((KeyLabel(0, 0), np.eye(2) / 4), (KeyLabel(1, 0), np.eye(2) / 4)))
        b = CqState(((KeyLabel(0, 0), np.eye(2) / 4), (KeyLabel(1, 1), np.eye(2) / 4)))
        with self.assertRaises(DomainError):
            check_continuity(a, b, 2)

    def test_random_pairs(self):
        rng = np.random.default_rng(5)
        for trial in range(1000):
            z_size = (2, 4)[trial % 2]
            rho, sigma = random_cq_pair(z_size, 4, rng)
            self.assertTrue(check_continuity(rho, sigma, z_size).passed)


class DephasingLemmaTests(SimpleTestCase):
    def test_state_inside_projector_is_tight(self):
        pi = random_projector(4, 2, 1)
        result = check_dephasing_lemma(state_inside(pi, 2, 2), random_povm(4, 2, 2, 1, 3), pi)
        self.assertAlmostEqual(result.lhs, result.rhs, delta=1e-8)
        self.assertTrue(result.passed)

    def test_block_diagonal_povm(self):
        pi = random_projector(4, 2, 4)
        povm = random_block_diagonal_povm(pi, 2, 1, 5)
        self.assertTrue(check_dephasing_lemma(random_density(4, 3, 6), povm, pi).passed)

    def test_random_instances(self):
        rng = np.random.default_rng(7)
        for trial in range(500):
            dim = int(rng.integers(4, 7))
            z_size = (2, 4)[trial % 2]
            rho = random_density(dim, int(rng.integers(1, dim + 1)), rng)
            povm = random_povm(dim, z_size, z_size, 1, rng)
            pi = random_projector(dim, int(rng.integers(1, dim)), rng)
            self.assertTrue(check_dephasing_lemma(rho, povm, pi).passed)


class TraceDistanceTests(SimpleTestCase):
    def test_block_diagonal_povm(self):
        pi = random_projector(4, 2, 1)
        result = check_trace_distance_bound(random_density(4, 4, 2), random_block_diagonal_povm(pi, 2, 1, 3), pi)
        self.assertLess(result.lhs, 1e-8)
        self.assertTrue(result.passed)

    def test_state_inside_projector(self):
        pi = random_projector(4, 2, 4)
        result = check_trace_distance_bound(state_inside(pi, 1, 5), random_povm(4, 2, 2, 1, 6), pi)
        self.assertLess(result.lhs, 1e-12)
        self.assertEqual((result.witness["weight"], result.rhs), (0.0, 0.0))
        self.assertEqual(result.witness["weighted_bound"], 0.0)
        self.assertTrue(result.passed)

    def test_states_inside_random_projectors(self):
        rng = np.random.default_rng(13)
        for trial in range(300):
            dim = int(rng.integers(2, 7))
            z_size = (2, 4)[trial % 2]
            pi = random_projector(dim, int(rng.integers(1, dim)), rng)
            rho = state_inside(pi, int(rng.integers(1, pi.rank + 1)), rng)
            result = check_trace_distance_bound(rho, random_povm(dim, z_size, z_size, 1, rng), pi)
            self.assertLess(result.lhs, 1e-12)
            self.assertTrue(result.passed, result)

    def test_random_instances(self):
        rng = np.random.default_rng(9)
        for trial in range(1000):
            dim = int(rng.integers(2, 7))
            z_size = (2, 4)[trial % 2]
            rho = random_density(dim, int(rng.integers(1, dim + 1)), rng)
            povm = random_povm(dim, z_size, z_size, 1, rng)
            pi = random_projector(dim, int(rng.integers(1, dim)), rng)
            result = check_trace_distance_bound(rho, povm, pi)
            self.assertTrue(result.passed, result)
            self.assertLessEqual(result.lhs, result.witness["weighted_bound"] + 1e-9)
            self.assertLessEqual(result.witness["weighted_bound"], result.rhs + 1e-9)


class UcdupTests(SimpleTestCase):
    def test_block_diagonal_povm(self):
        pi = random_projector(4, 2, 1)
        povm = random_block_diagonal_povm(pi, 2, 1, 2)
        rho = random_density(4, 4, 3)
        result = check_ucdup(rho, povm, pi, weight_outside(rho, pi))
        self.assertLess(result.rhs, 1e-5)
        self.assertTrue(result.passed)

    def test_state_inside_projector(self):
        pi = random_projector(5, 3, 4)
        rho = state_inside(pi, 2, 5)
        result = check_ucdup(rho, random_povm(5, 4, 4, 1, 6), pi, 0.0)
        self.assertAlmostEqual(result.lhs, 0.0, delta=1e-7)
        self.assertEqual(result.rhs, 0.0)
        self.assertTrue(result.passed)

    def test_weight_bound_below_actual(self):
        rho = random_density(4, 4, 7)
        pi = random_projector(4, 2, 8)
        with self.assertRaises(PreconditionError):
            check_ucdup(rho, random_povm(4, 2, 2, 1, 9), pi, weight_outside(rho, pi) / 2)

    def test_margin_shrinks_with_weight_bound(self):
        rho = random_density(5, 3, 10)
        pi = random_projector(5, 2, 11)
        povm = random_povm(5, 4, 2, 2, 12)
        w = weight_outside(rho, pi)
        margins = [check_ucdup(rho, povm, pi, min(1.0, w + extra)).margin for extra in (0.3, 0.1, 0.0)]
        self.assertTrue(margins[0] >= margins[1] >= margins[2])

    def test_uses_compute_c(self):
        rho = random_density(4, 2, 13)
        pi = random_projector(4, 1, 14)
        povm = random_povm(4, 2, 2, 1, 15)
        result = check_ucdup(rho, povm, pi, weight_outside(rho, pi))
        self.assertEqual(result.witness["c"], compute_c(povm, pi).c)

    def test_random_instances(self):
        rng = np.random.default_rng(11)
        for trial in range(1000):
            dim = int(rng.integers(4, 9))
            z_size = (2, 4)[trial % 2]
            c_size = int(rng.integers(1, 3))
            rho = random_density(dim, int(rng.integers(1, dim + 1)), rng)
            povm = random_povm(dim, z_size * c_size, z_size, c_size, rng)
            pi = random_projector(dim, int(rng.integers(1, dim)), rng)
            self.assertTrue(check_ucdup(rho, povm, pi, weight_outside(rho, pi)).passed)


class PurificationTests(SimpleTestCase):
    def test_purification_reproduces_state(self):
        rho = random_density(3, 2, 1)
        psi = purification(rho)
        self.assertAlmostEqual(np.vdot(psi, psi).real, 1.0, places=12)
        joint = np.outer(psi, psi.conj()).reshape(3, 3, 3, 3)
        np.testing.assert_allclose(np.einsum("aibi->ab", joint), rho.matrix, atol=1e-12)

    def test_identity_measurement_gives_eve_marginal(self):
        rho = random_density(3, 3, 2)
        eve = eve_conditional_state(purification(rho), np.eye(3))
        np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(eve)), np.sort(np.linalg.eigvalsh(rho.matrix)), atol=1e-12)

    def test_special_states(self):
        p = random_povm_element(3, 3)
        self.assertTrue(check_purification_identity(np.eye(3) / 3, p).passed)
        pure = random_density(3, 1, 4)
        self.assertTrue(check_purification_identity(pure, p).passed)

    def test_random_instances(self):
        rng = np.random.default_rng(13)
        for _ in range(500):
            dim = int(rng.integers(3, 7))
            rho = random_density(dim, int(rng.integers(1, dim + 1)), rng)
            result = check_purification_identity(rho, random_povm_element(dim, rng))
            self.assertEqual(result.rhs, 0.0)
            self.assertTrue(result.passed, result)


class ContractionCheckTests(SimpleTestCase):
    def test_random_psd_operators(self):
        rng = np.random.default_rng(17)
        for _ in range(1000):
            dim = int(rng.integers(2, 11))
            p = random_psd(dim, int(rng.integers(1, dim + 1)), rng)
            pi = random_projector(dim, int(rng.integers(1, dim)), rng)
            self.assertTrue(check_contraction(p, pi).passed)
