import math
from fractions import Fraction
from itertools import islice, permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entropic.classical import (
    check_classical_subadditivity,
    conditional_entropy_q,
    conditional_entropy_shannon,
    conditional_given_B,
    flatten_joint,
    marginal_A,
    marginal_B,
    probability_vector,
    reshape_joint,
    shannon_entropy,
    subadditivity_margin,
    tsallis_entropy,
)
from entropic.errors import InvalidQ, NotNormalized, ShapeMismatch, ZeroConditioningEvent
from entropic.shapes import factorizations

P = (0.1, 0.2, 0.3, 0.4)


def brute_shannon(p):
    return -sum(x * math.log(x) for x in p if x > 0)


def brute_tsallis(p, q):
    if q == 1:
        return brute_shannon(p)
    return -sum(x * (x ** (q - 1) - 1) / (q - 1) for x in p if x > 0)


def brute_table(p, n, m):
    # P(j, k) = p_s with s = (j - 1) m + k, 1-based
    return {(j, k): p[(j - 1) * m + k - 1] for j in range(1, n + 1) for k in range(1, m + 1)}


def simplex_vectors(rng, length, count):
    return rng.dirichlet(np.ones(length), size=count)


probs = st.integers(2, 16).flatmap(
    lambda n: st.lists(st.floats(0, 1), min_size=n, max_size=n).filter(lambda v: sum(v) > 1e-3)
).map(lambda v: np.array(v) / sum(v))


class TestProbabilityVector:
    def test_clips_tiny_negative(self):
        p = probability_vector([0.5, 0.5 + 5e-13, -5e-13])
        assert p[2] == 0.0

    def test_rejects_unnormalized(self):
        with pytest.raises(NotNormalized):
            probability_vector([0.5, 0.6])


class TestReshape:
    def test_four_vector(self):
        t = reshape_joint(P, (2, 2))
        assert t[0, 0] == 0.1 and t[0, 1] == 0.2 and t[1, 0] == 0.3 and t[1, 1] == 0.4

    def test_single_row(self):
        assert np.array_equal(reshape_joint(P, (1, 4))[0], P)

    def test_two_by_three_vs_three_by_two(self):
        p = np.array([0.05, 0.1, 0.15, 0.2, 0.22, 0.28])
        a, b = reshape_joint(p, (2, 3)), reshape_joint(p, (3, 2))
        oa, ob = brute_table(p, 2, 3), brute_table(p, 3, 2)
        assert all(a[j - 1, k - 1] == v for (j, k), v in oa.items())
        assert all(b[j - 1, k - 1] == v for (j, k), v in ob.items())
        assert a.shape != b.shape
        assert np.array_equal(flatten_joint(a), p) and np.array_equal(flatten_joint(b), p)

    def test_mismatch(self):
        with pytest.raises(ShapeMismatch):
            reshape_joint(P, (3, 2))

    @settings(max_examples=100, deadline=None)
    @given(probs)
    def test_flatten_inverse(self, p):
        for shape in factorizations(len(p), 1):
            assert np.array_equal(flatten_joint(reshape_joint(p, shape)), probability_vector(p))


class TestMarginals:
    def test_symbolic_four_vector(self):
        # sums of p1..p4 in the layout P(1,1)=p1, P(1,2)=p2, P(2,1)=p3, P(2,2)=p4
        p = np.array([1.0, 2.0, 4.0, 8.0]) / 15
        t = reshape_joint(p, (2, 2))
        assert np.allclose(marginal_A(t), [p[0] + p[1], p[2] + p[3]])
        assert np.allclose(marginal_B(t), [p[0] + p[2], p[1] + p[3]])

    def test_numeric(self):
        t = reshape_joint(P, (2, 2))
        assert np.allclose(marginal_A(t), [0.3, 0.7])
        assert np.allclose(marginal_B(t), [0.4, 0.6])

    def test_uniform(self):
        assert np.allclose(marginal_A(np.full((2, 2), 0.25)), [0.5, 0.5])
        assert np.allclose(marginal_B(np.full((2, 3), 1 / 6)), [1 / 3] * 3)

    @settings(max_examples=100, deadline=None)
    @given(probs)
    def test_marginals_sum_to_total(self, p):
        for shape in factorizations(len(p), 1):
            t = reshape_joint(p, shape)
            assert abs(marginal_A(t).sum() - t.sum()) <= 1e-12
            assert abs(marginal_B(t).sum() - t.sum()) <= 1e-12


class TestConditional:
    def test_bayes_column_one(self):
        p = np.array([1.0, 2.0, 4.0, 8.0]) / 15
        c = conditional_given_B(reshape_joint(p, (2, 2)), 0)
        assert np.allclose(c, [p[0] / (p[0] + p[2]), p[2] / (p[0] + p[2])])

    def test_numeric_column_two(self):
        assert np.allclose(conditional_given_B(reshape_joint(P, (2, 2)), 1), [1 / 3, 2 / 3])

    def test_product_table(self, rng):
        a, b = rng.dirichlet(np.ones(3)), rng.dirichlet(np.ones(4))
        t = np.outer(a, b)
        for k in range(4):
            assert np.allclose(conditional_given_B(t, k), marginal_A(t))

    def test_zero_column(self):
        with pytest.raises(ZeroConditioningEvent):
            conditional_given_B(reshape_joint([0.5, 0, 0.5, 0], (2, 2)), 1)


class TestEntropies:
    def test_shannon(self):
        assert shannon_entropy([1, 0, 0]) == 0.0
        assert shannon_entropy([0.25] * 4) == pytest.approx(math.log(4), abs=1e-15)
        assert shannon_entropy(P) == pytest.approx(brute_shannon(P), abs=1e-15)
        assert shannon_entropy(P) == pytest.approx(1.2798542, abs=5e-8)

    def test_tsallis_uniform_q2_exact(self):
        # (1 - 4 * (1/16)) / (2 - 1)
        assert float(1 - 4 * Fraction(1, 16) ** 1) == 0.75
        assert tsallis_entropy([0.25] * 4, 2) == 0.75

    def test_tsallis_deterministic(self):
        for q in (0.5, 1, 2, 3.7):
            assert tsallis_entropy([1, 0, 0, 0], q) == 0.0

    def test_tsallis_q1_branch(self):
        assert tsallis_entropy(P, 1) == shannon_entropy(P)

    @pytest.mark.parametrize("q", [0.3, 0.999, 1.0005, 1.5, 2, 3, 7.5])
    def test_tsallis_against_brute(self, rng, q):
        for p in simplex_vectors(rng, 7, 20):
            assert tsallis_entropy(p, q) == pytest.approx(brute_tsallis(p, q), rel=1e-9, abs=1e-12)

    def test_invalid_q(self):
        for q in (0, -1, float("nan")):
            with pytest.raises(InvalidQ):
                tsallis_entropy(P, q)

    def test_q_to_one_limit(self, rng):
        for length in range(2, 17):
            for p in simplex_vectors(rng, length, 10):
                h1 = shannon_entropy(p)
                for q in (1 - 1e-5, 1 + 1e-5):
                    assert abs(tsallis_entropy(p, q) - h1) <= 1e-4

    @settings(max_examples=100, deadline=None)
    @given(probs, st.sampled_from([0.5, 1.0, 1.5, 2.0, 3.0]))
    def test_permutation_invariance(self, p, q):
        ref = tsallis_entropy(p, q)
        for perm in islice(permutations(range(len(p))), 24):
            assert tsallis_entropy(p[list(perm)], q) == pytest.approx(ref, abs=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(probs)
    def test_shannon_bounds(self, p):
        h = shannon_entropy(p)
        assert 0 <= h <= math.log(len(p)) + 1e-12


class TestConditionalEntropy:
    def test_product_table(self, rng):
        a, b = rng.dirichlet(np.ones(3)), rng.dirichlet(np.ones(2))
        t = np.outer(a, b)
        assert conditional_entropy_shannon(t) == pytest.approx(shannon_entropy(a), abs=1e-12)

    def test_deterministic_conditionals(self):
        assert conditional_entropy_shannon(reshape_joint([0.5, 0, 0, 0.5], (2, 2))) == 0.0

    def test_worked_example(self):
        # average form: (p1+p3) H^A(1) + (p2+p4) H^A(2)
        oracle = (0.4 * brute_shannon([0.1 / 0.4, 0.3 / 0.4])
                  + 0.6 * brute_shannon([0.2 / 0.6, 0.4 / 0.6]))
        val = conditional_entropy_shannon(reshape_joint(P, (2, 2)))
        assert val == pytest.approx(oracle, abs=1e-14)
        assert abs(val - 0.6068) <= 1e-4

    def test_chain_relation(self, rng):
        for length, shape in [(4, (2, 2)), (6, (2, 3)), (6, (3, 2)), (12, (3, 4))]:
            for p in simplex_vectors(rng, length, 50):
                t = reshape_joint(p, shape)
                diff = shannon_entropy(p) - shannon_entropy(marginal_B(t))
                assert abs(conditional_entropy_shannon(t) - diff) <= 1e-10

    def test_zero_column_skipped(self):
        t = reshape_joint([0.3, 0, 0.7, 0], (2, 2))
        assert conditional_entropy_shannon(t) == pytest.approx(brute_shannon([0.3, 0.7]))

    def test_q_one_matches_shannon(self, rng):
        for p in simplex_vectors(rng, 6, 20):
            t = reshape_joint(p, (3, 2))
            assert conditional_entropy_q(t, 1) == pytest.approx(conditional_entropy_shannon(t), abs=1e-10)

    def test_q_deterministic(self):
        t = reshape_joint([0, 0, 1, 0], (2, 2))
        for q in (0.5, 1, 2, 3):
            assert conditional_entropy_q(t, q) == 0.0

    def test_q2_worked_example(self):
        # H_2(A,B) = 1 - sum p^2 = 0.70, H_2(B) = 1 - (0.4^2 + 0.6^2) = 0.48
        assert conditional_entropy_q(reshape_joint(P, (2, 2)), 2) == pytest.approx(0.22, abs=1e-10)

    def test_deformed_chain_identity(self, rng):
        for q in (0.5, 1, 1.5, 2, 3):
            for p in simplex_vectors(rng, 8, 20):
                t = reshape_joint(p, (2, 4))
                hb = tsallis_entropy(marginal_B(t), q)
                assert abs(tsallis_entropy(p, q) - (conditional_entropy_q(t, q) + hb)) <= 1e-12


class TestSubadditivity:
    def test_product_q1_additive(self, rng):
        t = np.outer(rng.dirichlet(np.ones(2)), rng.dirichlet(np.ones(3)))
        r = check_classical_subadditivity(t, 1)
        assert abs(r.margin) <= 1e-12 and r.satisfied

    def test_product_q_gt_one_strict(self, rng):
        # pseudo-additivity: H_q(AB) = H_q(A) + H_q(B) + (1 - q) H_q(A) H_q(B)
        a, b = rng.dirichlet(np.ones(2)), rng.dirichlet(np.ones(3))
        q = 2.0
        r = check_classical_subadditivity(np.outer(a, b), q)
        ha, hb = brute_tsallis(a, q), brute_tsallis(b, q)
        assert r.margin == pytest.approx((q - 1) * ha * hb, abs=1e-12)

    def test_perfectly_correlated(self):
        r = check_classical_subadditivity(reshape_joint([0.5, 0, 0, 0.5], (2, 2)), 1)
        assert r.lhs == pytest.approx(math.log(2))
        assert r.rhs == pytest.approx(2 * math.log(2))
        assert r.margin == pytest.approx(math.log(2))
        assert r.name == "classical_subadditivity" and tuple(r.shape) == (2, 2)

    def test_monte_carlo(self, rng):
        vecs = simplex_vectors(rng, 4, 10_000)
        for q in (1, 1.5, 2, 3):
            worst = min(check_classical_subadditivity(reshape_joint(p, (2, 2)), q).margin for p in vecs)
            assert worst >= -1e-9

    def test_guard(self):
        with pytest.raises(InvalidQ):
            check_classical_subadditivity(reshape_joint(P, (2, 2)), 0.5)

    def test_unguarded_margin_below_one(self):
        # q < 1 is outside the guaranteed regime and can violate subadditivity
        t = reshape_joint([0.5, 0.0, 0.0, 0.5], (2, 2))
        assert subadditivity_margin(t, 1.0) == pytest.approx(math.log(2))
        vals = [subadditivity_margin(reshape_joint(p, (2, 2)), 0.2)
                for p in np.random.default_rng(1).dirichlet(np.ones(4) * 0.3, size=2000)]
        assert min(vals) < 0
