import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hdproto import hdvec
from hdproto.errors import DimensionMismatch, EmptyInput, NonFiniteValue, ZeroVector

from oracles import brute_circ_convolve, brute_circ_correlate, cosine_oracle

CFG = hdvec.SharpenConfig()

finite_entries = st.floats(-50.0, 50.0, allow_nan=False)


def vectors(min_dim=1, max_dim=24):
    return st.lists(finite_entries, min_size=min_dim, max_size=max_dim).map(np.array)


# --- cosine ---------------------------------------------------------------

def test_cosine_self_similarity():
    v = np.array([0.3, -1.2, 4.0])
    assert hdvec.cosine(v, v) == pytest.approx(1.0, abs=1e-12)


def test_cosine_orthogonal_pair():
    assert hdvec.cosine([1.0, 1.0], [1.0, -1.0]) == pytest.approx(0.0, abs=1e-12)


def test_cosine_hand_value():
    # 24 / (5 * 5)
    assert hdvec.cosine([3.0, 4.0], [4.0, 3.0]) == pytest.approx(0.96, abs=1e-12)


def test_cosine_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        hdvec.cosine([1.0, 2.0], [1.0, 2.0, 3.0])


def test_cosine_zero_vector():
    with pytest.raises(ZeroVector):
        hdvec.cosine([0.0, 0.0], [1.0, 2.0])
    with pytest.raises(ZeroVector):
        hdvec.cosine([1.0, 0.0], [1e-13, 0.0])


def test_cosine_rejects_nan():
    with pytest.raises(NonFiniteValue):
        hdvec.cosine([np.nan, 1.0], [1.0, 1.0])


@settings(deadline=None)
@given(vectors(min_dim=2), st.floats(1e-3, 1e3), st.floats(1e-3, 1e3))
def test_cosine_scale_invariance(v, lam, mu):
    u = v + 1.0  # shift so u and v are not parallel by construction
    if np.linalg.norm(v) < 1e-6 or np.linalg.norm(u) < 1e-6:
        return
    base = hdvec.cosine(u, v)
    scaled = hdvec.cosine(lam * u, mu * v)
    assert scaled == pytest.approx(base, abs=1e-12)


def test_cosine_agrees_with_plain_dot_oracle():
    rng = np.random.default_rng(5)
    for _ in range(20):
        u = rng.normal(size=9)
        v = rng.normal(size=9)
        assert hdvec.cosine(u, v) == pytest.approx(cosine_oracle(u, v), abs=1e-12)


# --- tanh and bipolarize ----------------------------------------------------

def test_tanh_elem_zero_and_saturation():
    np.testing.assert_array_equal(hdvec.tanh_elem([0.0, 0.0]), [0.0, 0.0])
    assert hdvec.tanh_elem([10.0])[0] == pytest.approx(1.0, abs=1e-8)


def test_tanh_elem_hand_value():
    out = hdvec.tanh_elem([0.5, -0.5])
    np.testing.assert_allclose(out, [0.46211715726000974, -0.46211715726000974], atol=1e-12)


def test_tanh_elem_output_open_interval():
    # float64 tanh saturates to exactly +-1.0 beyond |x| ~ 19.06
    out = hdvec.tanh_elem(np.linspace(-18, 18, 101))
    assert np.all(out > -1.0) and np.all(out < 1.0)


def test_bipolarize_basic_and_zero_rule():
    np.testing.assert_array_equal(hdvec.bipolarize([0.3, -0.2]), [1.0, -1.0])
    np.testing.assert_array_equal(hdvec.bipolarize([0.0, -0.0]), [1.0, 1.0])


def test_bipolarize_matrix_shape_preserved():
    out = hdvec.bipolarize(np.array([[0.5, -0.5], [-0.0, 2.0]]))
    np.testing.assert_array_equal(out, [[1.0, -1.0], [1.0, 1.0]])


@settings(deadline=None)
@given(vectors())
def test_bipolarize_idempotent(v):
    once = hdvec.bipolarize(v)
    np.testing.assert_array_equal(hdvec.bipolarize(once), once)


# --- sharpening -------------------------------------------------------------

def test_softabs_sharpen_frozen_values():
    # direct evaluation: eps(0) = 2 / (1 + e^5), eps(1) = 1/(1+e^-5) + 1/(1+e^15)
    assert hdvec.softabs_sharpen(0.0, CFG) == pytest.approx(0.013385701848569711, abs=1e-12)
    assert hdvec.softabs_sharpen(1.0, CFG) == pytest.approx(0.9933074549779422, abs=1e-12)
    assert hdvec.softabs_sharpen(0.0, CFG) == pytest.approx(2.0 / (1.0 + np.exp(5.0)), abs=1e-15)


def test_softabs_sharpen_symmetry_and_minimum_at_zero():
    cs = np.linspace(-1.0, 1.0, 41)
    vals = hdvec.softabs_sharpen(cs, CFG)
    np.testing.assert_allclose(vals, vals[::-1], atol=1e-12)
    eps0 = hdvec.softabs_sharpen(0.0, CFG)
    assert all(eps0 < v for c, v in zip(cs, vals) if c != 0.0)


def test_softabs_sharpen_strictly_increasing_on_upper_half():
    cs = np.linspace(0.5, 1.0, 26)
    vals = hdvec.softabs_sharpen(cs, CFG)
    assert np.all(np.diff(vals) > 0)


def test_softabs_attention_uniform_on_equal_scores():
    np.testing.assert_allclose(hdvec.softabs_attention([0.5, 0.5, 0.5], CFG), np.full(3, 1 / 3), atol=1e-12)


def test_softabs_attention_frozen_two_score_case():
    # eps(1) and eps(0) normalized
    out = hdvec.softabs_attention([1.0, 0.0], CFG)
    np.testing.assert_allclose(out, [0.9867032950827176, 0.013296704917282487], atol=1e-12)


def test_softabs_attention_permutation_equivariance():
    rng = np.random.default_rng(0)
    scores = rng.uniform(-1, 1, size=7)
    perm = rng.permutation(7)
    np.testing.assert_allclose(
        hdvec.softabs_attention(scores[perm], CFG),
        hdvec.softabs_attention(scores, CFG)[perm],
        atol=1e-12,
    )


def test_softmax_attention_uniform_and_frozen_values():
    np.testing.assert_allclose(hdvec.softmax_attention([0.2, 0.2], CFG), [0.5, 0.5], atol=1e-12)
    e10 = np.exp(10.0)
    np.testing.assert_allclose(
        hdvec.softmax_attention([1.0, 0.0], CFG), [e10 / (e10 + 1), 1 / (e10 + 1)], atol=1e-12
    )


def test_softmax_attention_shift_invariance():
    scores = np.array([0.1, -0.4, 0.9])
    np.testing.assert_allclose(
        hdvec.softmax_attention(scores + 3.7, CFG), hdvec.softmax_attention(scores, CFG), atol=1e-12
    )


def test_softmax_attention_stable_for_large_scores():
    out = hdvec.softmax_attention([1000.0, 999.0], CFG)
    assert np.all(np.isfinite(out))
    assert np.sum(out) == pytest.approx(1.0, abs=1e-12)


@settings(deadline=None)
@given(st.lists(st.floats(-1.0, 1.0), min_size=1, max_size=16).map(np.array))
def test_attention_outputs_are_probability_vectors(scores):
    for fn in (hdvec.softabs_attention, hdvec.softmax_attention):
        out = fn(scores, CFG)
        assert np.all(out >= 0)
        assert np.sum(out) == pytest.approx(1.0, abs=1e-9)


def test_attention_empty_input():
    with pytest.raises(EmptyInput):
        hdvec.softabs_attention(np.array([]), CFG)
    with pytest.raises(EmptyInput):
        hdvec.softmax_attention(np.array([]), CFG)


# --- nudge activations --------------------------------------------------------

def test_nudge_activation_zero():
    assert hdvec.nudge_activation(0.0, CFG) == 0.0
    assert hdvec.nudge_activation_anticorr(0.0, CFG) == 0.0


def test_nudge_activation_frozen_value():
    # e^4 + e^-4 - 2
    assert hdvec.nudge_activation(1.0, CFG) == pytest.approx(52.61646567203297, abs=1e-3)
    assert hdvec.nudge_activation(1.0, CFG) == pytest.approx(
        np.exp(4.0) + np.exp(-4.0) - 2.0, abs=1e-12
    )


def test_nudge_activation_symmetry_and_nonnegativity():
    cs = np.linspace(-1, 1, 21)
    vals = hdvec.nudge_activation(cs, CFG)
    np.testing.assert_allclose(vals, vals[::-1], atol=1e-10)
    assert np.all(vals >= 0)


def test_nudge_activation_anticorr_is_one_sided():
    assert hdvec.nudge_activation_anticorr(0.5, CFG) > 0
    assert hdvec.nudge_activation_anticorr(-0.5, CFG) < 0


# --- binding ----------------------------------------------------------------

def test_circ_convolve_identity_element():
    rng = np.random.default_rng(1)
    v = rng.normal(size=8)
    delta = np.zeros(8)
    delta[0] = 1.0
    np.testing.assert_allclose(hdvec.circ_convolve(v, delta), v, atol=1e-12)


def test_circ_convolve_hand_value():
    np.testing.assert_allclose(
        hdvec.circ_convolve([1.0, 2.0, 3.0, 4.0], [1.0, 0.0, 0.0, 1.0]),
        [3.0, 5.0, 7.0, 5.0],
        atol=1e-12,
    )


@pytest.mark.parametrize("dim", [3, 4, 8, 17])
def test_circ_ops_match_bruteforce_oracle(dim):
    rng = np.random.default_rng(dim)
    a = rng.normal(size=dim)
    b = rng.normal(size=dim)
    np.testing.assert_allclose(hdvec.circ_convolve(a, b), brute_circ_convolve(a, b), atol=1e-10)
    np.testing.assert_allclose(hdvec.circ_correlate(a, b), brute_circ_correlate(a, b), atol=1e-10)


def test_circ_convolve_distributes_over_superposition():
    rng = np.random.default_rng(2)
    a, b, c = rng.normal(size=(3, 32))
    np.testing.assert_allclose(
        hdvec.circ_convolve(a + b, c),
        hdvec.circ_convolve(a, c) + hdvec.circ_convolve(b, c),
        atol=1e-9,
    )


def test_circ_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        hdvec.circ_convolve([1.0, 2.0], [1.0, 2.0, 3.0])
    with pytest.raises(DimensionMismatch):
        hdvec.circ_correlate([1.0, 2.0], [1.0, 2.0, 3.0])


def test_bind_unbind_roundtrip_statistics():
    # Correlating the bound vector with its own key recovers the payload up
    # to superposition noise whose similarity concentrates near 1/sqrt(2).
    d = 512
    cosines = []
    for trial in range(100):
        rng = np.random.default_rng(10_000 + trial)
        payload = rng.normal(size=d)
        key = hdvec.key_from_seed(20_000 + trial, d)
        recovered = hdvec.circ_correlate(hdvec.circ_convolve(payload, key), key)
        cosines.append(hdvec.cosine(recovered, payload))
    cosines = np.array(cosines)
    assert np.all(cosines > 0.5)
    assert 0.65 < np.mean(cosines) < 0.78


# --- keys ---------------------------------------------------------------------

def test_key_from_seed_deterministic():
    a = hdvec.key_from_seed(1234, 256)
    b = hdvec.key_from_seed(1234, 256)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, hdvec.key_from_seed(1235, 256))


def test_key_norm_law_of_large_numbers():
    d = 512
    sq_norms = [np.sum(hdvec.key_from_seed(s, d) ** 2) for s in range(1000)]
    assert np.mean(sq_norms) == pytest.approx(1.0, abs=0.05)


def test_keys_quasi_orthogonal():
    d = 512
    violations = 0
    for i in range(1000):
        a = hdvec.key_from_seed(2 * i, d)
        b = hdvec.key_from_seed(2 * i + 1, d)
        if abs(hdvec.cosine(a, b)) >= 0.2:
            violations += 1
    assert violations <= 10  # >= 99% of pairs below 0.2
