import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from stealthq.encoding import encode_state, fit_normalizer, to_angles
from stealthq.qfeatures import (
    COLUMNS,
    FeatureMode,
    as_vector,
    base_from_state,
    extract_base,
    extract_hybrid,
    features_from_state,
)

import oracles

SUBSETS = ((0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2))
angle_vectors = hnp.arrays(float, (3,), elements=st.floats(-np.pi / 2, np.pi / 2))


def oracle_correlations(angles):
    psi = oracles.encoding_unitary(angles) @ oracles.zero_state(3)
    return np.array([oracles.expectation(psi, oracles.zstring_full(3, s)) for s in SUBSETS])


@pytest.fixture(scope="module")
def stats():
    rng = np.random.default_rng(11)
    X = np.column_stack([rng.uniform(0, 0.3, 50), rng.normal(0, 0.05, 50), rng.normal(1, 0.01, 50)])
    return fit_normalizer(X)


def midpoint_row(stats):
    # raw features whose angles are all zero
    return (stats.z_min + stats.z_max) / 2 * stats.std + stats.mean


def test_column_order():
    assert COLUMNS == ("z1", "z2", "z3", "w12", "w13", "w23", "w123")


class TestBase:
    def test_ground_state_sample(self, stats):
        np.testing.assert_allclose(extract_base(midpoint_row(stats), stats), [1, 1, 1], atol=1e-12)

    def test_entangled_quarter_turn(self):
        z = base_from_state(encode_state([np.pi / 2, 0, 0]))
        np.testing.assert_allclose(z, oracle_correlations([np.pi / 2, 0, 0])[:3], atol=1e-12)
        np.testing.assert_allclose(z, [0, 0, 0], atol=1e-12)

    def test_bounded(self, stats):
        X = np.random.default_rng(2).normal(size=(30, 3))
        z = extract_base(X, stats)
        assert np.all(np.abs(z) <= 1 + 1e-12)


class TestHybrid:
    @pytest.mark.parametrize("mode", list(FeatureMode))
    def test_ground_state_all_ones(self, stats, mode):
        np.testing.assert_allclose(extract_hybrid(midpoint_row(stats), stats, mode), np.ones(7),
                                   atol=1e-12)

    def test_modes_differ_on_entangled_state(self):
        state = encode_state([np.pi / 2, 0, 0])
        corr = features_from_state(state, FeatureMode.CORRELATION)
        prod = features_from_state(state, FeatureMode.PRODUCT)
        ref = oracle_correlations([np.pi / 2, 0, 0])
        np.testing.assert_allclose(corr, ref, atol=1e-12)
        assert abs(corr[3] - 1.0) < 1e-12  # <Z0 Z1>
        assert abs(prod[3]) < 1e-12  # z1 * z2
        assert np.abs(corr - prod).max() > 0.5

    @given(angle_vectors)
    def test_modes_agree_on_product_states(self, a):
        state = encode_state(a, entangled=False)
        np.testing.assert_allclose(features_from_state(state, "correlation"),
                                   features_from_state(state, "product"), atol=1e-10)

    @given(angle_vectors)
    def test_product_form_is_exact_products(self, a):
        f = features_from_state(encode_state(a), FeatureMode.PRODUCT)
        z1, z2, z3 = f[:3]
        assert f[3] == z1 * z2 and f[4] == z1 * z3 and f[5] == z2 * z3
        assert f[6] == z1 * z2 * z3

    @given(angle_vectors)
    def test_correlation_form_matches_oracle(self, a):
        f = features_from_state(encode_state(a), FeatureMode.CORRELATION)
        np.testing.assert_allclose(f, oracle_correlations(a), atol=1e-10)
        assert np.all(np.abs(f) <= 1 + 1e-12)

    @given(angle_vectors)
    def test_ladder_gives_cosine_monomials(self, a):
        # under the 0->1->2 CNOT ladder each Z-string reduces to a product of cosines
        c0, c1, c2 = np.cos(a)
        f = features_from_state(encode_state(a))
        np.testing.assert_allclose(f, [c0, c0 * c1, c0 * c1 * c2, c1, c1 * c2, c2, c0 * c2],
                                   atol=1e-12)

    def test_batch_matches_single(self, stats):
        X = np.random.default_rng(4).normal(size=(6, 3)) * stats.std + stats.mean
        H = extract_hybrid(X, stats)
        assert H.shape == (6, 7)
        for x, h in zip(X, H):
            np.testing.assert_allclose(extract_hybrid(x, stats), h, atol=1e-15)

    def test_deterministic(self, stats):
        x = midpoint_row(stats) * 1.1
        assert np.array_equal(extract_hybrid(x, stats), extract_hybrid(x, stats))

    def test_as_vector(self, stats):
        v = as_vector(extract_hybrid(midpoint_row(stats), stats))
        assert v._fields == COLUMNS
        assert v.w123 == pytest.approx(1.0)

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            features_from_state(encode_state([0, 0, 0]), "tensor")

    def test_row_uses_angles(self, stats):
        x = np.array([0.1, 0.02, 1.0])
        np.testing.assert_allclose(extract_hybrid(x, stats),
                                   oracle_correlations(to_angles(x, stats)), atol=1e-12)
