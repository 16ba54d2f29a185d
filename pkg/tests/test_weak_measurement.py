import numpy as np
import pytest
import hypothesis as hyp
import hypothesis.strategies as st

from weakspin.pointer import WmConfig, amplitude, f_ratio, integrate_pointer, outcome_density
from weakspin.spin_core import BlochDirection, SpinState, direction_from_ket, ket_from_direction
from weakspin.weak_measurement import (
    WmOutcome,
    apply_f,
    apply_wm,
    delta_theta,
    nm_limit_classify,
    nm_limit_classify_many,
    post_theta,
    sample_outcome,
    sample_outcomes,
)

unit = WmConfig(1.0, 1.0)
thetas = st.floats(min_value=0.0, max_value=np.pi)
phis = st.floats(min_value=0.0, max_value=2 * np.pi, exclude_max=True)
lengths = st.floats(min_value=0.1, max_value=5.0)


def test_apply_wm_examples():
    up = SpinState(1.0, 0.0)
    for q in (-3.0, 0.0, 2.5):
        np.testing.assert_allclose(apply_wm(up, unit, q).array(), [1.0, 0.0], atol=1e-15)
    eq = ket_from_direction(BlochDirection(np.pi / 2, 0.0))
    np.testing.assert_allclose(apply_wm(eq, unit, 0.0).array(), eq.array(), atol=1e-15)
    d = direction_from_ket(apply_wm(eq, unit, 1.0))
    assert d.theta == pytest.approx(2 * np.arctan(np.exp(-1.0)), abs=1e-14)
    assert d.theta == pytest.approx(0.705026843555238, abs=1e-12)
    assert d.phi == 0.0


def test_apply_wm_matches_literal_branch_weights():
    # unnormalized amplitudes (psi(q - a) c+, psi(q + a) c-) from the pointer wavefunction
    cfg = WmConfig(0.7, 1.3)
    prior = ket_from_direction(BlochDirection(1.1, 2.3))
    for q in (-2.0, -0.4, 0.9, 3.1):
        raw = np.array([amplitude(cfg, q - 0.7) * prior.amp_plus, amplitude(cfg, q + 0.7) * prior.amp_minus])
        raw /= np.linalg.norm(raw)
        np.testing.assert_allclose(apply_wm(prior, cfg, q).array(), raw, atol=1e-14)


def test_delta_theta_examples():
    assert delta_theta(np.pi / 2, unit, 0.0) == pytest.approx(0.0, abs=1e-15)
    expected = 2 * np.arctan(np.exp(-1.0)) - np.pi / 2
    assert delta_theta(np.pi / 2, unit, 1.0) == pytest.approx(expected, abs=1e-15)
    assert np.degrees(expected) == pytest.approx(-49.6049374208547, abs=1e-9)
    for q in (-4.0, 0.3, 10.0):
        assert delta_theta(0.0, unit, q) == 0.0
        assert delta_theta(np.pi, unit, q) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ValueError):
        delta_theta(-0.1, unit, 0.0)


def test_delta_theta_vectorized_and_clamped():
    q = np.array([-1e5, -1.0, 0.0, 1.0, 1e5])
    out = delta_theta(np.pi / 2, unit, q)
    assert out.shape == (5,)
    assert out[0] == pytest.approx(np.pi / 2) and out[-1] == pytest.approx(-np.pi / 2)


@hyp.given(theta=thetas, phi=phis, a=lengths, w=lengths, q=st.floats(-10, 10))
def test_norm_and_rotation_law(theta, phi, a, w, q):
    cfg = WmConfig(a, w)
    prior = ket_from_direction(BlochDirection(theta, phi))
    post = apply_wm(prior, cfg, q)
    assert post.norm() == pytest.approx(1.0, abs=1e-12)
    d = direction_from_ket(post)
    f = f_ratio(cfg, q)
    # compare tan(theta_q/2) = f tan(theta_p/2) in the bounded form sin(theta_q/2 - atan(...))
    target = np.arctan2(f * np.sin(theta / 2), np.cos(theta / 2))
    assert abs(np.sin(d.theta / 2 - target)) < 1e-12
    if 1e-6 < d.theta < np.pi - 1e-6:
        assert d.phi == pytest.approx(BlochDirection(theta, phi).phi, abs=1e-12)


@hyp.given(theta=thetas, phi=phis, a=lengths, w=lengths, q1=st.floats(-5, 5), q2=st.floats(-5, 5))
def test_composition_multiplies_f(theta, phi, a, w, q1, q2):
    cfg = WmConfig(a, w)
    s = ket_from_direction(BlochDirection(theta, phi))
    twice = apply_wm(apply_wm(s, cfg, q1), cfg, q2)
    once = apply_f(s, f_ratio(cfg, q1) * f_ratio(cfg, q2))
    assert abs(abs(np.vdot(twice.array(), once.array())) - 1.0) < 1e-12
    np.testing.assert_allclose(twice.array(), once.array(), atol=1e-12)


def test_monotone_limits():
    prior = ket_from_direction(BlochDirection(1.0, 0.5))
    assert direction_from_ket(apply_wm(prior, unit, 1e4)).theta == pytest.approx(0.0, abs=1e-12)
    assert direction_from_ket(apply_wm(prior, unit, -1e4)).theta == pytest.approx(np.pi, abs=1e-12)
    q = np.linspace(-20, 20, 401)
    assert np.all(np.diff(post_theta(1.0, unit, q)) <= 0)


def test_clamped_regime_gives_pole_states():
    prior = ket_from_direction(BlochDirection(2.0, 0.0))
    np.testing.assert_allclose(np.abs(apply_wm(prior, unit, 5e3).array()), [1.0, 0.0], atol=1e-12)
    np.testing.assert_allclose(np.abs(apply_wm(prior, unit, -5e3).array()), [0.0, 1.0], atol=1e-12)
    assert WmOutcome.from_reading(unit, 5e3).saturated == -1
    down = SpinState(0.0, 1.0)
    np.testing.assert_allclose(np.abs(apply_wm(down, unit, 5e3).array()), [0.0, 1.0])


@hyp.settings(max_examples=40)
@hyp.given(theta=thetas, a=st.floats(0.1, 3.0), w=st.floats(0.2, 3.0))
def test_non_selective_average_of_sigma_z(theta, a, w):
    cfg = WmConfig(a, w)
    val = integrate_pointer(
        cfg, lambda q: np.cos(post_theta(theta, cfg, q)) * outcome_density(cfg, theta, q))
    assert val == pytest.approx(np.cos(theta), abs=1e-9)


def test_sample_outcome_is_seeded():
    prior = ket_from_direction(BlochDirection(1.0))
    a = [sample_outcome(prior, unit, np.random.default_rng(3)) for _ in range(2)]
    assert a[0] == a[1]
    assert a[0].f == pytest.approx(f_ratio(unit, a[0].q1), rel=1e-12)
    x = sample_outcomes(prior, unit, np.random.default_rng(11), 1000)
    y = sample_outcomes(prior, unit, np.random.default_rng(11), 1000)
    np.testing.assert_array_equal(x, y)


@pytest.mark.parametrize("theta, mean", [(0.0, 1.0), (np.pi / 2, 0.0), (2.0, np.cos(2.0))])
def test_sample_mean(theta, mean):
    n = 100_000
    q = sample_outcomes(ket_from_direction(BlochDirection(theta)), unit, np.random.default_rng(2024), n)
    # std of the mixture: sqrt(w^2 + a^2 sin^2 theta)
    sigma = np.sqrt(1.0 + np.sin(theta) ** 2)
    assert abs(q.mean() - mean) < 4 * sigma / np.sqrt(n)


def test_samples_follow_outcome_density():
    cfg = WmConfig(1.0, 0.8)
    theta = 1.2
    q = sample_outcomes(ket_from_direction(BlochDirection(theta)), cfg, np.random.default_rng(5), 200_000)
    edges = np.linspace(-4, 4, 17)
    counts, _ = np.histogram(q, edges)
    from scipy.integrate import quad
    probs = np.array([quad(lambda x: outcome_density(cfg, theta, x), lo, hi)[0]
                      for lo, hi in zip(edges[:-1], edges[1:])])
    expected = probs * len(q)
    assert np.all(np.abs(counts - expected) < 5 * np.sqrt(expected) + 5)


def test_nm_limit_classify():
    a = 50.0
    assert nm_limit_classify(WmOutcome(3 * a, 0.0)) == 1
    assert nm_limit_classify(WmOutcome(0.0, 1.0)) == 1
    assert nm_limit_classify(-0.5) == -1


@pytest.mark.parametrize("theta_deg", [30, 60, 90, 120])
def test_nm_limit_born_rule(theta_deg):
    cfg = WmConfig(50.0, 1.0)
    n = 100_000
    theta = np.radians(theta_deg)
    q = sample_outcomes(ket_from_direction(BlochDirection(theta)), cfg, np.random.default_rng(theta_deg), n)
    frac = np.mean(nm_limit_classify_many(q) == 1)
    p = np.cos(theta / 2) ** 2
    assert abs(frac - p) < 3 * np.sqrt(p * (1 - p) / n)
