import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aris_isac.config import NoiseModel
from aris_isac.metrics import effective_channels, ris_power, sinr_all, wsr
from aris_isac.risfp import (QuadraticForm, assemble_quadratic, ris_pass,
                             solve_psi_qcqp, split_psi, update_alpha,
                             update_epsilon)
from conftest import random_state, tiny_config

NOISE = NoiseModel(user_noise_w=1e-5, ris_noise_w=1e-7)


def state(seed=0):
    cfg = tiny_config(seed=seed)
    _, _, g, h_direct, h_ris, t, psi, h_eff = random_state(cfg, seed=seed)
    weights = cfg.user_weights()
    return cfg, g, h_direct, h_ris, t, psi, h_eff, weights


def random_qcqp(rng, n=5):
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    u = b @ b.conj().T + 1e-3 * np.eye(n)
    pi = np.diag(rng.uniform(0.5, 2.0, size=n)) + 1e-2 * np.eye(n)
    return QuadraticForm(v=v, u_mat=u, pi_mat=pi.astype(complex),
                         budget=float(rng.uniform(0.1, 5.0)))


def qcqp_objective(q, psi):
    return float(2.0 * np.real(q.v.conj() @ psi)
                 - np.real(psi.conj() @ q.u_mat @ psi))


def test_alpha_equals_sinr():
    gamma = np.array([0.0, 0.3, 2.5])
    assert np.array_equal(update_alpha(gamma), gamma)
    with pytest.raises(ValueError):
        update_alpha(np.array([-0.1]))


def test_dual_transform_plugin_identity():
    # at alpha* = gamma the detached objective equals the weighted sum-rate:
    # sum_k mu_k [log2(1+a_k) - a_k + (1+a_k) gamma_k / (1+gamma_k)] with the
    # last two terms cancelling at a_k = gamma_k
    cfg, g, h_direct, h_ris, t, psi, h_eff, weights = state(1)
    gamma = sinr_all(t, h_eff, h_ris, psi, NOISE)
    alpha = update_alpha(gamma)
    detached = np.sum(weights * (np.log2(1.0 + alpha)
                                 - alpha / np.log(2.0)
                                 + (1.0 + alpha) * gamma / ((1.0 + gamma) * np.log(2.0))))
    assert detached == pytest.approx(wsr(t, h_eff, h_ris, psi, NOISE, weights),
                                     abs=1e-12)


def test_epsilon_closed_form():
    cfg, g, h_direct, h_ris, t, psi, h_eff, weights = state(2)
    gamma = sinr_all(t, h_eff, h_ris, psi, NOISE)
    alpha = update_alpha(gamma)
    eps = update_epsilon(t, h_eff, h_ris, psi, NOISE, weights, alpha)
    for k in range(len(eps)):
        num = np.sqrt(weights[k] * (1.0 + alpha[k])) * np.vdot(h_eff[k], t[:, k])
        den = sum(abs(np.vdot(h_eff[k], t[:, i])) ** 2 for i in range(t.shape[1]))
        den += NOISE.ris_noise_w * np.linalg.norm(psi * h_ris[k]) ** 2 + NOISE.user_noise_w
        assert eps[k] == pytest.approx(num / den, rel=1e-12)


def test_quadratic_transform_plugin_identity():
    # at the closed-form epsilon* each transformed ratio term equals the
    # original ratio mu_k (1+a_k) gamma_k / (1+gamma_k)
    cfg, g, h_direct, h_ris, t, psi, h_eff, weights = state(3)
    gamma = sinr_all(t, h_eff, h_ris, psi, NOISE)
    alpha = update_alpha(gamma)
    eps = update_epsilon(t, h_eff, h_ris, psi, NOISE, weights, alpha)
    for k in range(len(eps)):
        sig = np.sqrt(weights[k] * (1.0 + alpha[k])) * np.vdot(h_eff[k], t[:, k])
        den = sum(abs(np.vdot(h_eff[k], t[:, i])) ** 2 for i in range(t.shape[1]))
        den += NOISE.ris_noise_w * np.linalg.norm(psi * h_ris[k]) ** 2 + NOISE.user_noise_w
        transformed = 2.0 * np.real(np.conj(eps[k]) * sig) - abs(eps[k]) ** 2 * den
        ratio = weights[k] * (1.0 + alpha[k]) * gamma[k] / (1.0 + gamma[k])
        assert transformed == pytest.approx(ratio, rel=1e-10, abs=1e-18)


def test_separation_identity():
    # the psi-space quadratic form reproduces the transformed objective for
    # random psi: 50 draws, equality to 1e-9 relative
    cfg, g, h_direct, h_ris, t, psi0, h_eff0, weights = state(4)
    gamma = sinr_all(t, h_eff0, h_ris, psi0, NOISE)
    alpha = update_alpha(gamma)
    eps = update_epsilon(t, h_eff0, h_ris, psi0, NOISE, weights, alpha)
    q = assemble_quadratic(t, g, h_direct, h_ris, eps, alpha, weights,
                           NOISE.ris_noise_w, budget=1.0)
    rng = np.random.default_rng(7)
    n = psi0.shape[0]
    for _ in range(50):
        psi = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        h_eff = effective_channels(h_direct, g, psi, h_ris)
        direct = 0.0
        for k in range(len(eps)):
            sig = np.sqrt(weights[k] * (1.0 + alpha[k])) * np.vdot(h_eff[k], t[:, k])
            den = sum(abs(np.vdot(h_eff[k], t[:, i])) ** 2 for i in range(t.shape[1]))
            den += NOISE.ris_noise_w * np.linalg.norm(psi * h_ris[k]) ** 2
            den += NOISE.user_noise_w
            direct += 2.0 * np.real(np.conj(eps[k]) * sig) - abs(eps[k]) ** 2 * den
        # the quadratic form omits the psi-independent direct-link terms
        const = 0.0
        for k in range(len(eps)):
            sig0 = np.sqrt(weights[k] * (1.0 + alpha[k])) * np.vdot(h_direct[k], t[:, k])
            hd_gain = sum(abs(np.vdot(h_direct[k], t[:, i])) ** 2
                          for i in range(t.shape[1]))
            const += 2.0 * np.real(np.conj(eps[k]) * sig0)
            const -= abs(eps[k]) ** 2 * (hd_gain + NOISE.user_noise_w)
        quad = qcqp_objective(q, psi)
        assert direct == pytest.approx(quad + const, rel=1e-9, abs=1e-15)


def test_ris_power_equals_pi_quadratic_form():
    cfg, g, h_direct, h_ris, t, psi, h_eff, weights = state(5)
    gamma = sinr_all(t, h_eff, h_ris, psi, NOISE)
    alpha = update_alpha(gamma)
    eps = update_epsilon(t, h_eff, h_ris, psi, NOISE, weights, alpha)
    q = assemble_quadratic(t, g, h_direct, h_ris, eps, alpha, weights,
                           NOISE.ris_noise_w, budget=1.0)
    rng = np.random.default_rng(8)
    for _ in range(20):
        probe = rng.standard_normal(len(psi)) + 1j * rng.standard_normal(len(psi))
        quad = float(np.real(probe.conj() @ q.pi_mat @ probe))
        assert ris_power(t, g, probe, NOISE.ris_noise_w) == pytest.approx(
            quad, rel=1e-9)


def test_qcqp_isotropic_closed_form():
    # U = I, Pi = I: unconstrained optimum psi = v, used when ||v||^2 <= budget,
    # otherwise the scaled point psi = v sqrt(budget)/||v||
    rng = np.random.default_rng(9)
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    big = QuadraticForm(v=v, u_mat=np.eye(4, dtype=complex),
                        pi_mat=np.eye(4, dtype=complex),
                        budget=float(np.linalg.norm(v) ** 2 * 4.0))
    assert np.allclose(solve_psi_qcqp(big), v, atol=1e-8)
    small = QuadraticForm(v=v, u_mat=np.eye(4, dtype=complex),
                          pi_mat=np.eye(4, dtype=complex),
                          budget=float(np.linalg.norm(v) ** 2 / 4.0))
    psi = solve_psi_qcqp(small)
    assert np.linalg.norm(psi) ** 2 == pytest.approx(small.budget, rel=1e-6)
    assert np.allclose(psi / np.linalg.norm(psi), v / np.linalg.norm(v), atol=1e-6)


def test_qcqp_degenerate_inputs():
    q = QuadraticForm(v=np.zeros(3, dtype=complex), u_mat=np.eye(3, dtype=complex),
                      pi_mat=np.eye(3, dtype=complex), budget=1.0)
    assert np.array_equal(solve_psi_qcqp(q), np.zeros(3))
    q = QuadraticForm(v=np.ones(3, dtype=complex), u_mat=np.eye(3, dtype=complex),
                      pi_mat=np.eye(3, dtype=complex), budget=0.0)
    assert np.array_equal(solve_psi_qcqp(q), np.zeros(3))
    with pytest.raises(ValueError):
        solve_psi_qcqp(QuadraticForm(v=np.array([np.nan + 0j]),
                                     u_mat=np.eye(1, dtype=complex),
                                     pi_mat=np.eye(1, dtype=complex), budget=1.0))


def test_qcqp_matches_gradient_oracle():
    from oracles import pga_qcqp

    rng = np.random.default_rng(10)
    for _ in range(10):
        q = random_qcqp(rng, n=5)
        psi = solve_psi_qcqp(q)
        assert float(np.real(psi.conj() @ q.pi_mat @ psi)) <= q.budget * (1 + 1e-9)
        ref_obj, _ = pga_qcqp(q.v, q.u_mat, q.pi_mat, q.budget)
        assert qcqp_objective(q, psi) == pytest.approx(ref_obj, rel=1e-5, abs=1e-10)


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_qcqp_never_exceeds_budget(seed):
    rng = np.random.default_rng(seed)
    q = random_qcqp(rng, n=4)
    psi = solve_psi_qcqp(q)
    assert float(np.real(psi.conj() @ q.pi_mat @ psi)) <= q.budget * (1 + 1e-9)


def test_split_psi_roundtrip():
    psi = np.array([1 + 1j, 0.0, -2.0], dtype=complex)
    amp, phase = split_psi(psi)
    assert np.allclose(amp * np.exp(1j * phase), psi)
    assert phase[1] == 0.0
    with pytest.raises(ValueError):
        split_psi(np.array([np.inf + 0j]))


def test_ris_pass_never_decreases_wsr():
    for seed in range(5):
        cfg, g, h_direct, h_ris, t, psi, h_eff, weights = state(seed)
        budget = cfg.power.ris_budget
        # start from a budget-feasible point
        raw = ris_power(t, g, psi, NOISE.ris_noise_w)
        psi = psi * np.sqrt(budget / raw)
        before = wsr(t, effective_channels(h_direct, g, psi, h_ris), h_ris,
                     psi, NOISE, weights)
        psi_new = ris_pass(t, g, h_direct, h_ris, psi, NOISE, weights, budget)
        after = wsr(t, effective_channels(h_direct, g, psi_new, h_ris), h_ris,
                    psi_new, NOISE, weights)
        assert after >= before - 1e-12
        assert ris_power(t, g, psi_new, NOISE.ris_noise_w) <= budget * (1 + 1e-9)
