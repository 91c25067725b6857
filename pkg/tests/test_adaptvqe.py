import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from elmlab.adaptvqe import (
    AdaptConfig,
    apply_ansatz,
    build_pool,
    energy_and_gradient,
    gradient,
    pool_gradients,
    reference_state,
    relative_error,
    run,
)
from elmlab.hamiltonians import ModelParams, elm_qubit
from elmlab.spectra import ground_energy
from elmlab.spin import QubitSpace, normalize, pauli_string


@pytest.mark.parametrize("N, count", [(1, 3), (2, 13), (6, 123)])
def test_pool_size(N, count):
    assert len(build_pool(N)) == count


def test_pool_operators_hermitian_and_involutive_terms():
    for A in build_pool(3):
        M = A.matrix()
        assert np.allclose(M, M.conj().T)


def test_expi_matches_expm(rng):
    pool = build_pool(3)
    psi = normalize(rng.normal(size=8) + 1j * rng.normal(size=8))
    for A in pool[::5]:
        assert np.allclose(A.expi(0.37, psi), expm(0.37j * A.matrix()) @ psi)


def test_reference_at_lambda0():
    p = ModelParams(6, 0.0, 0.7)
    ref = reference_state(p)
    assert ref[0] == 1  # all spins down
    H = elm_qubit(p)
    assert np.vdot(ref, H @ ref).real == pytest.approx(0.0)


def test_reference_is_diagonal_argmin():
    p = ModelParams(6, 0.5, 1 / np.sqrt(2))
    H = elm_qubit(p)
    ref = reference_state(p, H)
    assert np.vdot(ref, H @ ref).real == pytest.approx(np.diag(H).min())


def test_reference_tie_at_lipkin_end():
    # every basis state has the same expectation -lambda; the lowest index wins
    p = ModelParams(6, 1.0, 0.0)
    H = elm_qubit(p)
    assert np.allclose(np.diag(H), -1.0)
    assert reference_state(p, H)[0] == 1


def test_gradient_commuting_vanishes():
    N = 3
    H = sum(pauli_string([i], "z", N) for i in range(1, N + 1))
    pool = build_pool(N)
    psi = normalize(np.random.default_rng(0).normal(size=8) + 0j)
    g0 = [A for A in pool if A.kind == "G0"]
    for A in g0:
        assert gradient(psi, H, A) == pytest.approx(0.0, abs=1e-14)


@given(st.integers(0, 10_000), st.floats(0, 1), st.floats(0, 1))
@settings(max_examples=15, deadline=None)
def test_gradient_finite_difference(seed, lam, alpha):
    N = 3
    rng = np.random.default_rng(seed)
    H = elm_qubit(ModelParams(N, lam, alpha))
    psi = normalize(rng.normal(size=2**N) + 1j * rng.normal(size=2**N))
    pool = build_pool(N)
    A = pool[rng.integers(len(pool))]
    h = 1e-5

    def E(theta):
        phi = A.expi(theta, psi)
        return np.vdot(phi, H @ phi).real

    fd = (E(h) - E(-h)) / (2 * h)
    assert abs(gradient(psi, H, A) - fd) <= 1e-6


def test_pool_gradients_match_single():
    N = 3
    H = elm_qubit(ModelParams(N, 0.6, 0.4))
    psi = normalize(np.random.default_rng(2).normal(size=8) + 0j)
    pool = build_pool(N)
    assert np.allclose(pool_gradients(psi, H, pool), [gradient(psi, H, A) for A in pool])


def test_gradient_rejects_unnormalised():
    with pytest.raises(ValueError):
        gradient(np.ones(2, complex), np.eye(2), build_pool(1)[0])


def test_lambda0_gradients_vanish():
    p = ModelParams(6, 0.0, 0.3)
    H = elm_qubit(p)
    assert np.max(np.abs(pool_gradients(reference_state(p, H), H, build_pool(6)))) < 1e-14


def test_ansatz_identity_and_flip():
    pool = build_pool(2)
    ref = QubitSpace(2).basis_state("dd")
    assert np.allclose(apply_ansatz(ref, [(0, 0.0), (5, 0.0)], pool), ref)
    # pool[0] is G+ on qubit 1: exp(i pi/2 sigma_x) = i sigma_x
    out = apply_ansatz(ref, [(0, np.pi / 2)], pool)
    assert pool[0].label.startswith("G+(1")
    assert np.allclose(out, 1j * QubitSpace(2).basis_state("ud"))


def test_ansatz_norm_preserved(rng):
    pool = build_pool(4)
    ref = reference_state(ModelParams(4, 0.3, 0.2))
    for _ in range(100):
        k = rng.integers(1, 8)
        steps = list(zip(rng.integers(len(pool), size=k), rng.normal(size=k)))
        assert abs(np.linalg.norm(apply_ansatz(ref, steps, pool)) - 1) <= 1e-12


def test_energy_gradient_finite_difference(rng):
    N = 3
    H = elm_qubit(ModelParams(N, 0.7, 0.5))
    pool = build_pool(N)
    ops = [pool[i] for i in rng.integers(len(pool), size=4)]
    ref = reference_state(ModelParams(N, 0.7, 0.5), H)
    th = rng.normal(size=4)
    _, g = energy_and_gradient(th, ops, ref, H)
    h = 1e-5
    for k in range(4):
        e = np.eye(4)[k] * h
        fd = (energy_and_gradient(th + e, ops, ref, H)[0] - energy_and_gradient(th - e, ops, ref, H)[0]) / (2 * h)
        assert abs(g[k] - fd) <= 1e-6


def test_relative_error_zero_exact():
    assert relative_error(1e-7, 0.0) == pytest.approx(1e-7)
    assert relative_error(-1.1, -1.0) == pytest.approx(0.1)


def test_run_lambda0_stops_immediately():
    trace = run(ModelParams(6, 0.0, 0.0), exact_energy=0.0)
    assert trace.iterations == 0
    assert trace.energy == 0.0


def test_run_lipkin_half():
    p = ModelParams(6, 0.5, 0.0)
    exact = ground_energy(p) * 6
    trace = run(p, exact_energy=exact)
    assert trace.stop_reason == "relative_energy"
    assert relative_error(trace.energy, exact) < 1e-5
    assert trace.energy_per_particle == pytest.approx(-0.2881459, rel=1e-5)


def test_broken_phase_converges_faster():
    def iters(lam):
        p = ModelParams(6, lam, 1 / np.sqrt(2))
        return run(p, exact_energy=ground_energy(p) * 6).iterations

    assert iters(0.9) < iters(0.2)


def test_run_energy_nonincreasing():
    p = ModelParams(4, 0.6, 0.3)
    trace = run(p, AdaptConfig(max_iterations=10))
    energies = [r.energy for r in trace.records]
    assert np.all(np.diff(energies) <= 1e-10)
    assert len(trace.to_dict()["records"]) == len(trace.records)


def test_config_validation():
    with pytest.raises(ValueError):
        AdaptConfig(gradient_stop=0)
