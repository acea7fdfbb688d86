import numpy as np
import pytest

from vqsd.states import (
    Observable,
    QuantumState,
    apply_unitary,
    dephase_global,
    dephase_local,
    exact_eigendecomposition,
    hs_distance,
    numerical_rank,
    partial_trace,
    purity,
    renyi2_entropy,
    von_neumann_entropy,
)


def random_density(n, rng, rank=None):
    d = 2**n
    r = rank or d
    a = rng.normal(size=(d, r)) + 1j * rng.normal(size=(d, r))
    m = a @ a.conj().T
    return QuantumState.from_matrix(m / np.trace(m).real)


def random_unitary(d, rng):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_from_vector_normalization():
    with pytest.raises(ValueError):
        QuantumState.from_vector([1.0, 1.0])
    s = QuantumState.from_vector(np.array([1, 1]) / np.sqrt(2))
    assert s.n_qubits == 1 and s.is_pure_form


def test_from_matrix_validation():
    with pytest.raises(ValueError):
        QuantumState.from_matrix(np.array([[0.5, 0.5j], [0.5j, 0.5]]))  # not Hermitian
    with pytest.raises(ValueError):
        QuantumState.from_matrix(np.eye(2))  # trace 2
    with pytest.raises(ValueError):
        QuantumState.from_matrix(np.diag([1.5, -0.5]))  # negative eigenvalue


def test_pure_matrix_promotion():
    s = QuantumState.from_vector(np.array([1, 1j]) / np.sqrt(2))
    m = s.matrix
    assert np.allclose(m, np.array([[0.5, -0.5j], [0.5j, 0.5]]))
    assert np.allclose(s.diagonal, [0.5, 0.5])


def test_purity():
    assert purity(QuantumState.basis_state(2, 3)) == 1.0
    assert abs(purity(QuantumState.maximally_mixed(3)) - 1 / 8) < 1e-12


def test_apply_unitary_rejects_nonunitary():
    s = QuantumState.basis_state(1)
    with pytest.raises(ValueError):
        apply_unitary(s, np.array([[1, 1], [0, 1]], dtype=complex))


def test_dephase_global():
    rng = np.random.default_rng(1)
    rho = random_density(2, rng)
    z = dephase_global(rho)
    assert np.allclose(z.matrix, np.diag(np.diag(rho.matrix)))
    # idempotent
    assert np.allclose(dephase_global(z).matrix, z.matrix)


def test_dephase_local_structure():
    rng = np.random.default_rng(2)
    rho = random_density(2, rng)
    z1 = dephase_local(rho, 1)
    m = z1.matrix
    # qubit 1 is the MSB: blocks connecting indices {0,1} to {2,3} vanish
    assert np.allclose(m[:2, 2:], 0) and np.allclose(m[2:, :2], 0)
    assert np.allclose(m[:2, :2], rho.matrix[:2, :2])
    # applying all local dephasings in sequence is not global dephasing in
    # general, but diagonals always survive every dephasing
    assert np.allclose(z1.diagonal, rho.diagonal)


def test_dephase_trace_and_purity_ordering():
    rng = np.random.default_rng(3)
    for _ in range(10):
        rho = random_density(3, rng)
        zg = dephase_global(rho)
        assert abs(np.trace(zg.matrix).real - 1) < 1e-12
        for j in (1, 2, 3):
            zj = dephase_local(rho, j)
            assert purity(zg) <= purity(zj) + 1e-12 <= purity(rho) + 1e-12


def test_partial_trace_product_state():
    a = QuantumState.from_vector([1, 0])
    b = QuantumState.from_vector(np.array([1, 1]) / np.sqrt(2))
    joint = QuantumState.from_vector(np.kron(a.vector, b.vector))
    r1 = partial_trace(joint, [1])
    r2 = partial_trace(joint, [2])
    assert np.allclose(r1.matrix, a.matrix)
    assert np.allclose(r2.matrix, b.matrix)


def test_partial_trace_bell_state():
    bell = QuantumState.from_vector(np.array([1, 0, 0, 1]) / np.sqrt(2))
    for q in (1, 2):
        red = partial_trace(bell, [q])
        assert np.allclose(red.matrix, np.eye(2) / 2)


def test_partial_trace_matches_matrix_form():
    rng = np.random.default_rng(4)
    rho = random_density(4, rng)
    for keep in ([1], [2, 3], [1, 4], [3, 1]):
        red = partial_trace(rho, keep)
        assert abs(np.trace(red.matrix).real - 1) < 1e-10
        evals = np.linalg.eigvalsh(red.matrix)
        assert evals.min() > -1e-10


def test_partial_trace_entanglement_spectrum_symmetry():
    rng = np.random.default_rng(5)
    v = rng.normal(size=16) + 1j * rng.normal(size=16)
    psi = QuantumState.from_vector(v / np.linalg.norm(v))
    sa = exact_eigendecomposition(partial_trace(psi, [1, 2])).eigenvalues
    sb = exact_eigendecomposition(partial_trace(psi, [3, 4])).eigenvalues
    assert np.allclose(sa, sb, atol=1e-9)


def test_exact_eigendecomposition_roundtrip():
    rng = np.random.default_rng(6)
    rho = random_density(3, rng)
    dec = exact_eigendecomposition(rho)
    assert np.all(np.diff(dec.eigenvalues) <= 1e-12)
    assert np.allclose(dec.reconstruct(), rho.matrix, atol=1e-10)


def test_entropies():
    assert abs(von_neumann_entropy(QuantumState.maximally_mixed(3)) - 3) < 1e-9
    assert von_neumann_entropy(QuantumState.basis_state(2)) < 1e-9
    assert abs(renyi2_entropy(QuantumState.maximally_mixed(2)) - 2) < 1e-12


def test_numerical_rank():
    rng = np.random.default_rng(7)
    rho = random_density(3, rng, rank=3)
    assert numerical_rank(rho) == 3


def test_hs_distance():
    a = QuantumState.basis_state(1, 0)
    b = QuantumState.basis_state(1, 1)
    assert abs(hs_distance(a, b) - 2.0) < 1e-12
    assert hs_distance(a, a) == 0.0


def test_observable_hermiticity():
    with pytest.raises(ValueError):
        Observable(np.array([[0, 1], [0, 0]], dtype=complex))
    obs = Observable(np.diag([1.0, -1.0]).astype(complex))
    assert obs.n_qubits == 1
