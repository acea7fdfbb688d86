import numpy as np
import pytest

from vqsd.circuits import CircuitEstimate, ShotPlan, destructive_swap_test, dip_test, pdip_test
from vqsd.states import QuantumState, apply_unitary, dephase_global, dephase_local


def random_pure(n, rng):
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return QuantumState.from_vector(v / np.linalg.norm(v))


def random_mixed(n, rng, rank=None):
    d = 2**n
    a = rng.normal(size=(d, rank or d)) + 1j * rng.normal(size=(d, rank or d))
    m = a @ a.conj().T
    return QuantumState.from_matrix(m / np.trace(m).real)


def overlap_oracle(sigma, tau):
    return float(np.real(np.trace(sigma.matrix @ tau.matrix)))


def test_shot_plan_validation():
    with pytest.raises(ValueError):
        ShotPlan(mode="noisy")
    with pytest.raises(ValueError):
        ShotPlan.sampled(0)
    assert ShotPlan.exact().mode == "exact"


def test_swap_test_exact_pure():
    rng = np.random.default_rng(0)
    for n in (1, 2, 3):
        a, b = random_pure(n, rng), random_pure(n, rng)
        est = destructive_swap_test(a, b, ShotPlan.exact())
        assert abs(est.value - abs(np.vdot(a.vector, b.vector)) ** 2) < 1e-12
        assert est.std_error == 0.0
    same = random_pure(2, rng)
    assert abs(destructive_swap_test(same, same, ShotPlan.exact()).value - 1) < 1e-12


def test_swap_test_exact_mixed():
    rng = np.random.default_rng(1)
    for n in (1, 2):
        a, b = random_mixed(n, rng), random_mixed(n, rng)
        est = destructive_swap_test(a, b, ShotPlan.exact())
        assert abs(est.value - overlap_oracle(a, b)) < 1e-12
    # orthogonal basis states -> 0
    z = destructive_swap_test(
        QuantumState.basis_state(2, 0), QuantumState.basis_state(2, 3), ShotPlan.exact()
    )
    assert z.value == 0.0


def test_dip_test_exact_is_diagonal_overlap():
    rng = np.random.default_rng(2)
    for n in (1, 2, 3):
        a, b = random_mixed(n, rng), random_mixed(n, rng)
        za = dephase_global(a)
        zb = dephase_global(b)
        est = dip_test(a, b, ShotPlan.exact())
        assert abs(est.value - overlap_oracle(za, zb)) < 1e-12


def test_pdip_exact_limits_match():
    rng = np.random.default_rng(3)
    n = 3
    a, b = random_mixed(n, rng), random_mixed(n, rng)
    swap = destructive_swap_test(a, b, ShotPlan.exact()).value
    dip = dip_test(a, b, ShotPlan.exact()).value
    assert abs(pdip_test(a, b, set(), ShotPlan.exact()).value - swap) < 1e-12
    assert abs(pdip_test(a, b, {1, 2, 3}, ShotPlan.exact()).value - dip) < 1e-12


def test_pdip_exact_is_local_dephased_overlap():
    rng = np.random.default_rng(4)
    n = 3
    a, b = random_mixed(n, rng), random_mixed(n, rng)
    for js in ({1}, {2}, {1, 3}):
        za, zb = a, b
        for j in js:
            za = dephase_local(za, j)
            zb = dephase_local(zb, j)
        est = pdip_test(a, b, js, ShotPlan.exact())
        assert abs(est.value - overlap_oracle(za, zb)) < 1e-12


def test_pdip_invalid_qubits():
    rng = np.random.default_rng(5)
    a = random_pure(2, rng)
    with pytest.raises(ValueError):
        pdip_test(a, a, {3}, ShotPlan.exact())


def test_register_size_mismatch():
    rng = np.random.default_rng(6)
    with pytest.raises(ValueError):
        dip_test(random_pure(1, rng), random_pure(2, rng), ShotPlan.exact())


def test_sampled_matches_exact_pure():
    rng = np.random.default_rng(7)
    plan = ShotPlan.sampled(100000, seed=11)
    for n in (1, 2, 3):
        a, b = random_pure(n, rng), random_pure(n, rng)
        for fn in (
            destructive_swap_test,
            dip_test,
            lambda s, t, p: pdip_test(s, t, {1}, p),
        ):
            ex = fn(a, b, ShotPlan.exact()).value
            est = fn(a, b, plan)
            assert est.shots_used == plan.shots
            tol = 5 * max(est.std_error, 2e-3)
            assert abs(est.value - ex) < tol, (n, ex, est.value)


def test_sampled_matches_exact_mixed_dense_path():
    rng = np.random.default_rng(8)
    plan = ShotPlan.sampled(100000, seed=12)
    a, b = random_mixed(2, rng), random_mixed(2, rng)
    for js in (set(), {2}, {1, 2}):
        ex = pdip_test(a, b, js, ShotPlan.exact()).value
        est = pdip_test(a, b, js, plan)
        assert abs(est.value - ex) < 5 * max(est.std_error, 2e-3)


def test_sampled_mixed_eigenvector_path():
    # registers wider than the dense-mixed limit exercise per-shot sampling
    rng = np.random.default_rng(9)
    a = random_mixed(6, rng, rank=3)
    b = random_mixed(6, rng, rank=3)
    plan = ShotPlan.sampled(40000, seed=13)
    for js, fn in ((None, destructive_swap_test), ({2, 4}, None)):
        if fn is None:
            ex = pdip_test(a, b, js, ShotPlan.exact()).value
            est = pdip_test(a, b, js, plan)
        else:
            ex = fn(a, b, ShotPlan.exact()).value
            est = fn(a, b, plan)
        assert abs(est.value - ex) < 5 * max(est.std_error, 4e-3), (js, ex, est.value)


def test_sampled_determinism():
    rng = np.random.default_rng(10)
    a, b = random_pure(2, rng), random_pure(2, rng)
    e1 = destructive_swap_test(a, b, ShotPlan.sampled(1000, seed=5))
    e2 = destructive_swap_test(a, b, ShotPlan.sampled(1000, seed=5))
    assert e1 == e2
    e3 = destructive_swap_test(a, b, ShotPlan.sampled(1000, seed=6))
    assert isinstance(e3, CircuitEstimate)


def test_swap_test_unitarily_invariant_overlap():
    # Tr(sigma tau) is invariant under joint conjugation
    rng = np.random.default_rng(11)
    a, b = random_mixed(2, rng), random_mixed(2, rng)
    u, _ = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
    av, bv = apply_unitary(a, u), apply_unitary(b, u)
    x = destructive_swap_test(a, b, ShotPlan.exact()).value
    y = destructive_swap_test(av, bv, ShotPlan.exact()).value
    assert abs(x - y) < 1e-10
