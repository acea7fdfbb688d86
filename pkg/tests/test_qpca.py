import numpy as np
import pytest
from scipy.linalg import expm

from vqsd.qpca import (
    NoiseModel,
    QpcaConfig,
    controlled_exp_swap,
    exp_swap,
    ideal_one_bit_estimate,
    qpca_one_bit,
    sequence_unitary,
    swap_approximation_error,
)
from vqsd.states import QuantumState

SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)


def plus_state():
    return QuantumState.from_vector(np.array([1, 1]) / np.sqrt(2))


def test_exp_swap_matches_matrix_exponential():
    for dt in (0.0, 0.3, 1.0, np.pi / 2, 2.5):
        assert np.allclose(exp_swap(dt), expm(-1j * SWAP * dt), atol=1e-12)


def test_compiled_sequence_equals_analytic():
    rng = np.random.default_rng(0)
    cnots = 0
    for dt in rng.uniform(0, 2 * np.pi, size=20):
        analytic, seq = controlled_exp_swap(dt)
        compiled = sequence_unitary(seq, n=3)
        assert np.max(np.abs(compiled - analytic)) < 1e-9
    _, seq = controlled_exp_swap(0.7)
    cnots = sum(1 for op in seq if op[0] == "cnot")
    assert cnots == 8


def test_control_zero_leaves_targets_alone():
    analytic, _ = controlled_exp_swap(1.1)
    # the block with control = |0> must be the identity
    assert np.allclose(analytic[:4, :4], np.eye(4), atol=1e-12)
    assert np.allclose(analytic[:4, 4:], 0)


def test_zero_time_is_identity():
    analytic, seq = controlled_exp_swap(0.0)
    assert np.allclose(analytic, np.eye(8), atol=1e-12)
    assert np.allclose(sequence_unitary(seq, n=3), np.eye(8), atol=1e-10)


def test_config_validation():
    with pytest.raises(ValueError):
        QpcaConfig(t=-1.0)
    with pytest.raises(ValueError):
        QpcaConfig(t=1.0, k=0)
    with pytest.raises(ValueError):
        NoiseModel(p_depol=1.5)
    assert QpcaConfig(t=1.0, k=4).delta_t == 0.25


def test_noiseless_pure_state_estimate():
    # a pure state has top eigenvalue 1; the noiseless estimate recovers it
    for t in (0.3, 0.6, 1.0):
        est = qpca_one_bit(plus_state(), QpcaConfig(t=t, k=1))
        assert abs(est - 1.0) < 1e-8


def test_ideal_estimate_handles_degenerate_spectrum():
    # the one-ancilla statistic cannot separate I/2 at k=1, but the ideal
    # time-series estimator inverts sum_i p_i cos(p_i t) correctly
    mixed = QuantumState.maximally_mixed(1)
    est = ideal_one_bit_estimate(mixed, t=1.0)
    assert abs(est - 0.5) < 1e-8
    skew = QuantumState.from_matrix(np.diag([0.8, 0.2]))
    assert abs(ideal_one_bit_estimate(skew, t=1.0) - 0.8) < 1e-8
    assert abs(ideal_one_bit_estimate(plus_state(), t=0.8) - 1.0) < 1e-8


def test_noise_degrades_estimate_monotonically():
    noise = NoiseModel(p_depol=0.01, p_readout=0.02)
    for t in (0.5, 1.0):
        clean = qpca_one_bit(plus_state(), QpcaConfig(t=t, k=1))
        noisy1 = qpca_one_bit(plus_state(), QpcaConfig(t=t, k=1, noise=noise))
        noisy2 = qpca_one_bit(plus_state(), QpcaConfig(t=t, k=2, noise=noise))
        assert clean > noisy1 > noisy2
        assert noisy1 > 0.75  # mild noise leaves a recognizably large eigenvalue


def test_swap_approximation_error_decreases_with_k():
    rng = np.random.default_rng(1)
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    m = a @ a.conj().T
    rho = QuantumState.from_matrix(m / np.trace(m).real)
    sigma = plus_state()
    errs = [swap_approximation_error(sigma, rho, t=0.5, k=k) for k in (1, 2, 4, 8)]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[-1] < errs[0] / 4


def test_qpca_estimate_within_unit_interval():
    rng = np.random.default_rng(2)
    for _ in range(5):
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        m = a @ a.conj().T
        rho = QuantumState.from_matrix(m / np.trace(m).real)
        est = qpca_one_bit(rho, QpcaConfig(t=0.8, k=2))
        assert 0.5 - 1e-9 <= est <= 1.0 + 1e-9
