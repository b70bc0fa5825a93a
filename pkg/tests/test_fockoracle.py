import numpy as np
import pytest

from udwcoherence import catalysis
from udwcoherence.fockoracle import (FockOracleConfig, OracleInconsistencyError, TruncationError, build_operators,
                                     catalysis_check, coherence_of_qubit, coherent_state, delta_channel,
                                     delta_energy_cost, ground_projector, matrix_function, perturbative_update,
                                     second_order_energy_change, validate_field_state, validate_qubit_state)
from udwcoherence.verify import _random_hermitian_configs


def test_operators_structure():
    cfg = FockOracleConfig(truncation=16, amp_annihilate=0.3, amp_create=0.1)
    phi, H, sigma = build_operators(cfg)
    a = (phi - 0.1 * np.diag(np.sqrt(np.arange(1, 16)), -1)) / 0.3
    assert np.allclose(np.diag(a, 1), np.sqrt(np.arange(1, 16)))
    assert np.allclose(np.diag(H), np.arange(16))
    comm = phi @ phi.conj().T - phi.conj().T @ phi
    assert np.allclose(np.diag(comm)[:-2], cfg.commutator)
    assert np.trace(sigma).real == pytest.approx(1.0)


def test_vacuum_and_real_expectation():
    _, _, vac = build_operators(FockOracleConfig(coherent_alpha=0))
    phi, _, _ = build_operators(FockOracleConfig(coherent_alpha=0))
    assert np.trace(phi @ vac) == 0
    phi, _, sigma = build_operators(FockOracleConfig(amp_annihilate=0.25, amp_create=0.25, coherent_alpha=1.3))
    assert np.trace(phi @ sigma).real == pytest.approx(2 * 0.25 * 1.3, rel=1e-12)


def test_truncation_leakage_rejected():
    with pytest.raises(TruncationError):
        coherent_state(3.0, 10)
    with pytest.warns(RuntimeWarning):
        FockOracleConfig(truncation=8, coherent_alpha=1.6)


def test_config_validation():
    with pytest.raises(ValueError):
        FockOracleConfig(truncation=4)
    with pytest.raises(ValueError):
        FockOracleConfig(mode_frequency=0.0)


def test_identity_channel_at_zero_coupling():
    phi, _, sigma = build_operators(FockOracleConfig())
    rho, out = delta_channel(0.0, phi, sigma)
    assert np.allclose(rho, ground_projector())
    assert np.allclose(out, sigma)


def test_non_hermitian_phi_rejected():
    phi, _, sigma = build_operators(FockOracleConfig(amp_annihilate=0.3, amp_create=0.1))
    with pytest.raises(ValueError):
        delta_channel(0.1, phi, sigma)


def test_vacuum_gives_no_coherence():
    phi, _, vac = build_operators(FockOracleConfig(amp_annihilate=0.3, amp_create=0.3, coherent_alpha=0))
    rho, _ = delta_channel(0.1, phi, vac)
    assert coherence_of_qubit(rho) < 1e-15


def test_generic_channel_matches_perturbative_value():
    cfg = FockOracleConfig(40, 1.0, 0.3, 0.3, 1.2, 0.05)
    phi, _, sigma = build_operators(cfg)
    rho, _ = delta_channel(0.05, phi, sigma)
    s2 = matrix_function(phi, lambda w: np.sin(0.1 * w))
    assert coherence_of_qubit(rho) == pytest.approx(abs(np.trace(s2 @ sigma)), rel=1e-14)
    assert abs(coherence_of_qubit(rho) - 2 * 0.05 * abs(np.trace(phi @ sigma))) < 0.05 ** 3


def test_channel_outputs_are_valid_states():
    for cfg in _random_hermitian_configs(10, seed=7):
        phi, _, sigma = build_operators(cfg)
        c = matrix_function(phi, lambda w: np.cos(cfg.coupling * w))
        s = matrix_function(phi, lambda w: np.sin(cfg.coupling * w))
        assert np.allclose(c @ c + s @ s, np.eye(cfg.truncation), atol=1e-12)
        rho, out = delta_channel(cfg.coupling, phi, sigma)
        validate_qubit_state(rho)
        validate_field_state(out)


def test_coherence_of_qubit():
    assert coherence_of_qubit(np.diag([0.7, 0.3])) == 0
    assert coherence_of_qubit(0.5 * np.ones((2, 2))) == pytest.approx(1.0)
    assert coherence_of_qubit(np.array([[0.5, -0.2j], [0.2j, 0.5]])) == pytest.approx(0.4)
    with pytest.raises(ValueError):
        coherence_of_qubit(np.eye(3) / 3)


def test_state_validation_rejects_bad_matrices():
    with pytest.raises(ValueError):
        validate_qubit_state(np.diag([0.6, 0.6]))
    with pytest.raises(ValueError):
        validate_qubit_state(np.diag([1.2, -0.2]))
    with pytest.raises(ValueError):
        validate_field_state(np.array([[0.5, 0.1], [0.0, 0.5]]))


def test_exact_catalysis():
    values = catalysis_check(FockOracleConfig(48, 1.0, 0.2, 0.2, 1.0, 0.1), 5)
    assert len(values) == 5
    assert max(values) - min(values) < 1e-12
    assert catalysis_check(FockOracleConfig(coupling=0.0), 3) == [0.0, 0.0, 0.0]


def test_catalysis_truncation_convergence():
    a = catalysis_check(FockOracleConfig(32, 1.0, 0.2, 0.2, 1.0, 0.1), 1)[0]
    b = catalysis_check(FockOracleConfig(64, 1.0, 0.2, 0.2, 1.0, 0.1), 1)[0]
    assert abs(a - b) < 1e-10


def test_catalysis_needs_hermitian_phi():
    with pytest.raises(ValueError):
        catalysis_check(FockOracleConfig(amp_annihilate=0.3, amp_create=0.1), 2)


def test_catalysis_edge_growth_detected():
    # a strong coupling pushes population to the cutoff of a small space
    with pytest.raises(TruncationError):
        catalysis_check(FockOracleConfig(truncation=10, amp_annihilate=2.0, amp_create=2.0,
                                         coherent_alpha=0.5, coupling=1.0), 20)


def test_energy_cost_vacuum_case():
    cfg = FockOracleConfig(48, 1.0, 0.3, 0.3, 0.0, 0.1)
    phi, _, vac = build_operators(cfg)
    s = matrix_function(phi, lambda w: np.sin(0.1 * w))
    expected = np.trace(s @ s @ vac).real + 0.09 * 0.01
    assert delta_energy_cost(cfg) == pytest.approx(expected, abs=1e-10)


def test_energy_cost_zero_coupling():
    assert delta_energy_cost(FockOracleConfig(coupling=0.0)) == pytest.approx(0.0, abs=1e-15)


def test_energy_cost_random_sample_positive():
    costs = [delta_energy_cost(cfg) for cfg in _random_hermitian_configs(50)]
    assert min(costs) > 0


def test_energy_cost_inconsistency_raises():
    with pytest.raises(OracleInconsistencyError):
        # the closed form assumes the truncation holds the dynamics; a tiny space breaks that
        delta_energy_cost(FockOracleConfig(truncation=8, amp_annihilate=3.0, amp_create=3.0,
                                           coherent_alpha=0.2, coupling=1.0))


def test_cubic_residual_scaling():
    residuals = []
    for lam in (0.04, 0.02, 0.01):
        cfg = FockOracleConfig(40, 1.0, 0.3, 0.3, 1.2, lam)
        phi, _, sigma = build_operators(cfg)
        rho, _ = delta_channel(lam, phi, sigma)
        residuals.append(abs(coherence_of_qubit(rho) - 2 * lam * abs(np.trace(phi @ sigma))))
    for big, small in zip(residuals, residuals[1:]):
        assert big / small == pytest.approx(8.0, abs=1.0)


def test_perturbative_ratio():
    cfg = FockOracleConfig(48, 1.0, 0.3, 0.1, 1.0, 0.01)
    series = perturbative_update(cfg, 10)
    for a, b in zip(series, series[1:]):
        assert b / a == pytest.approx(1.000004, abs=1e-12)
    expected = catalysis.repeated_harvest_series(series[0], cfg.commutator, cfg.coupling, 10)
    assert np.allclose(series, expected, rtol=1e-12, atol=0)


def test_perturbative_constant_for_balanced_amplitudes():
    series = perturbative_update(FockOracleConfig(48, 1.0, 0.2, 0.2j, 1.0, 0.05), 6)
    assert max(series) - min(series) < 1e-15


def test_second_order_energy_identity():
    direct, predicted = second_order_energy_change(FockOracleConfig(60, 1.3, 0.3 + 0.1j, 0.2 - 0.05j,
                                                                    0.7 + 0.4j, 0.1))
    assert direct == pytest.approx(predicted, rel=1e-12)
    # a coherent-term weight of four instead of one would be far off
    phi, H, sigma = build_operators(FockOracleConfig(60, 1.3, 0.3 + 0.1j, 0.2 - 0.05j, 0.7 + 0.4j, 0.1))
    coherent = (np.trace((phi @ H - H @ phi) @ sigma) * np.conj(np.trace(phi @ sigma))).real * 0.01
    assert abs(direct - (predicted + 3 * coherent)) > 0.1 * abs(direct)
