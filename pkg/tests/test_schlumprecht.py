import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from banachlab import (
    Interval,
    LOG2P1,
    ONE,
    SeqVector,
    best_partition,
    fixed_point_check,
    lp_norm,
    reference_norm,
    s_norm,
    s_norm_value,
    summing_norm_table,
)
from banachlab.errors import SizeCapError, ValidationError
from banachlab.schlumprecht import iterate_defining_map, s_norm_weights

F = LOG2P1


def vec(*values):
    return SeqVector.from_values(values)


def rand_vector(rng, max_dim=8):
    d = int(rng.integers(1, max_dim + 1))
    vals = rng.uniform(0.1, 2.0, d) * rng.choice([-1.0, 1.0], d)
    return SeqVector.from_values(vals)


class TestSummingIdentity:
    @pytest.mark.parametrize("n,expected", [(2, 2 / math.log2(3)), (7, 7 / 3), (1, 1.0)])
    def test_hand_values(self, n, expected):
        value, _ = s_norm(SeqVector.from_values([1.0] * n), F)
        assert value == pytest.approx(expected, abs=1e-12)

    def test_scaled_singleton(self):
        assert s_norm_value(SeqVector.basis(1, 2.0), F) == 2.0

    def test_table(self):
        report = summing_norm_table(8, F)
        assert report.rows[2][1] == pytest.approx(1.5, abs=1e-12)
        assert report.rows[7][1] == pytest.approx(8 / math.log2(9), abs=1e-12)
        assert max(row[3] for row in report.rows) <= 1e-12


class TestBruteForceAgreement:
    def test_mixed_vector(self):
        x = vec(1, 1, 1, 0.5)
        assert s_norm_value(x, F) == pytest.approx(1.5073679532568758, abs=1e-12)
        assert s_norm_value(x, F) == pytest.approx(reference_norm(x, F), abs=1e-12)

    def test_random_suite(self):
        for k in range(40):
            rng = np.random.default_rng(np.random.SeedSequence([41, k]))
            x = rand_vector(rng, max_dim=8)
            dp = s_norm_value(x, F)
            bf = reference_norm(x, F)
            assert abs(dp - bf) <= 1e-12 * max(1.0, bf)

    def test_degenerate_gauge_is_l1(self):
        for k in range(20):
            rng = np.random.default_rng(np.random.SeedSequence([42, k]))
            x = rand_vector(rng)
            assert s_norm_value(x, ONE) == pytest.approx(lp_norm(x, 1), rel=1e-14)


class TestCertificates:
    def test_certificate_attains_value(self):
        for k in range(25):
            rng = np.random.default_rng(np.random.SeedSequence([43, k]))
            x = rand_vector(rng)
            value, cert = s_norm(x, F)
            assert cert.evaluate(x) == pytest.approx(value, abs=1e-9)

    def test_certificate_dual_feasible(self):
        # the certificate of x never exceeds the norm of any other y
        rng = np.random.default_rng(7)
        x = vec(1, 1, 1, 0.5)
        _, cert = s_norm(x, F)
        for _ in range(50):
            y = rand_vector(rng, max_dim=4)
            assert cert.evaluate(y) <= s_norm_value(y, F) + 1e-9

    def test_weights_fast_path_matches(self):
        for k in range(25):
            rng = np.random.default_rng(np.random.SeedSequence([44, k]))
            vals = list(rng.uniform(0.05, 2.0, int(rng.integers(1, 9))))
            value, weights = s_norm_weights(vals, F)
            x = SeqVector.from_values(vals)
            ref, cert = s_norm(x, F)
            assert value == pytest.approx(ref, abs=1e-12)
            func = cert.functional()
            assert weights == pytest.approx(
                [func[i] for i in x.support], abs=1e-12
            )

    def test_render_mentions_split(self):
        _, cert = s_norm(vec(1, 1, 1), F)
        text = cert.render()
        assert "split n=3" in text and "leaf" in text


class TestTies:
    def test_leaf_preferred_on_singleton(self):
        _, cert = s_norm(SeqVector.basis(3, 5.0), F)
        assert cert.render().startswith("leaf [3]")

    def test_determinism(self):
        x = vec(0.3, 1.2, 0.3, 0.9, 0.5)
        r1 = s_norm(x, F)[1].render()
        r2 = s_norm(x, F)[1].render()
        assert r1 == r2


class TestBestPartition:
    def test_three_singletons(self):
        value, blocks = best_partition(vec(1, 1, 1), F, Interval(1, 3), 3)
        assert value == pytest.approx(1.5, abs=1e-12)
        assert blocks == [Interval(1, 1), Interval(2, 2), Interval(3, 3)]

    def test_two_blocks(self):
        value, _ = best_partition(vec(1, 1, 1), F, Interval(1, 3), 2)
        expected = (1 + 2 / math.log2(3)) / math.log2(3)
        assert value == pytest.approx(expected, abs=1e-12)

    def test_spike_with_trailing_zeros(self):
        value, blocks = best_partition(SeqVector.basis(1, 5.0), F, Interval(1, 3), 2)
        assert value == pytest.approx(5 / math.log2(3), abs=1e-12)
        assert blocks[0] == Interval(1, 1)

    def test_too_many_blocks_rejected(self):
        with pytest.raises(ValidationError):
            best_partition(vec(1, 1), F, Interval(1, 2), 3)


class TestFixedPoint:
    def test_engine_self_consistent(self):
        x = vec(1, 1, 1, 0.5)
        residual = fixed_point_check(x, F, lambda y: s_norm_value(y, F) if y else 0.0)
        assert residual <= 1e-12

    def test_sup_norm_seed_improves(self):
        residual = fixed_point_check(vec(1, 1), F, lambda y: lp_norm(y, math.inf))
        assert residual == pytest.approx(2 / math.log2(3) - 1, abs=1e-12)

    def test_singleton_has_no_split(self):
        residual = fixed_point_check(
            SeqVector.basis(1), F, lambda y: s_norm_value(y, F) if y else 0.0
        )
        assert residual == 0.0


class TestMonotoneImprovement:
    def test_iteration_from_sup_seed(self):
        for k in range(10):
            rng = np.random.default_rng(np.random.SeedSequence([45, k]))
            x = rand_vector(rng, max_dim=7)
            history = iterate_defining_map(x, F)
            assert all(b >= a - 1e-15 for a, b in zip(history, history[1:]))
            assert len(history) <= len(x) + 1
            assert history[-1] == pytest.approx(s_norm_value(x, F), abs=1e-12)


class TestAnalyticFastPath:
    def test_matches_dp_on_constant_vectors(self):
        for n in (8, 16, 32):
            x = SeqVector.from_values([0.7] * n)
            dp = s_norm(x, F, cap=64)[0]
            fast_value, fast_cert = s_norm(x, F, cap=4)
            assert fast_cert.analytic
            assert abs(dp - fast_value) <= 1e-9

    def test_nonconstant_overflow_rejected(self):
        x = SeqVector.from_values([1.0] * 9 + [0.5])
        with pytest.raises(SizeCapError):
            s_norm(x, F, cap=8)

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            s_norm(SeqVector(), F)


class TestLatticeProperties:
    def test_squeeze_between_sup_and_l1(self):
        for k in range(60):
            rng = np.random.default_rng(np.random.SeedSequence([46, k]))
            x = rand_vector(rng)
            v = s_norm_value(x, F)
            assert lp_norm(x, math.inf) <= v + 1e-12
            assert v <= lp_norm(x, 1) + 1e-12

    def test_spreading_invariance(self):
        # the norm depends only on the ordered value sequence
        rng = np.random.default_rng(11)
        for _ in range(20):
            vals = rng.uniform(0.1, 2.0, 5)
            base = SeqVector.from_values(vals)
            gaps = np.cumsum(rng.integers(1, 9, 5))
            spread = SeqVector(zip(gaps, vals))
            assert s_norm_value(base, F) == pytest.approx(
                s_norm_value(spread, F), abs=1e-12
            )


values_strategy = st.floats(min_value=0.05, max_value=5.0)


@settings(max_examples=40, deadline=None)
@given(
    st.lists(values_strategy, min_size=1, max_size=6),
    st.lists(values_strategy, min_size=1, max_size=6),
)
def test_triangle_inequality_property(a, b):
    pad = max(len(a), len(b))
    x = SeqVector.from_values(a + [0.0] * (pad - len(a)))
    y = SeqVector.from_values(b + [0.0] * (pad - len(b)))
    assert s_norm_value(x + y, F) <= s_norm_value(x, F) + s_norm_value(y, F) + 1e-10


@settings(max_examples=40, deadline=None)
@given(st.lists(values_strategy, min_size=1, max_size=6), st.floats(0.1, 4.0))
def test_homogeneity_property(a, scale):
    x = SeqVector.from_values(a)
    assert s_norm_value(scale * x, F) == pytest.approx(
        scale * s_norm_value(x, F), rel=1e-12
    )


@settings(max_examples=40, deadline=None)
@given(st.lists(values_strategy, min_size=1, max_size=6), st.data())
def test_lattice_monotonicity_property(a, data):
    x = SeqVector.from_values(a)
    shrink = [data.draw(st.floats(0.0, 1.0)) for _ in a]
    y = SeqVector.from_values([v * s for v, s in zip(a, shrink)])
    assert s_norm_value(y, F) <= s_norm_value(x, F) + 1e-10 if y else True
