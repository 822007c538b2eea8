import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from xylab.errors import DomainError, SingularParameterError
from xylab.linalg import SX, SY, SZ, kron_all
from xylab.model import (ModelParams, alphas, build_hamiltonian, closed_form_eigensystem,
                         closed_form_energies, four_qubit_coefficients, literal_omega, omegas,
                         six_qubit_coefficients, six_qubit_ground_gap, six_qubit_ground_state,
                         six_qubit_unnormalized_norm)

gammas = st.one_of(st.floats(-1, 1), st.sampled_from([0.0, 1e-9, -1e-9, 1e-59, 1e-61, -1e-300, 1.0, -1.0]))
etas = st.one_of(st.floats(-50, 50), st.sampled_from([0.0, 1e-9, 1000.0, -1000.0]))


def pauli_hamiltonian(n, gamma, eta, J=1.0):
    # textbook sum over bonds with explicit Kronecker products
    def op(o, j):
        return kron_all([o if k == j else np.eye(2) for k in range(n)])
    bonds = [(0, 1)] if n == 2 else [(j, (j + 1) % n) for j in range(n)]
    h = sum((1 + gamma) * op(SX, a) @ op(SX, b) + (1 - gamma) * op(SY, a) @ op(SY, b)
            for a, b in bonds)
    h = h + eta * sum(op(SZ, j) for j in range(n))
    return J / 2 * h


@pytest.mark.parametrize("n", [2, 4, 6])
def test_hamiltonian_matches_pauli_sum(n):
    for gamma, eta, J in [(0.3, 0.7, 1.0), (-0.8, -2.0, 2.5), (1.0, 0.0, 0.5)]:
        h = build_hamiltonian(ModelParams(n, gamma, eta, J))
        assert np.allclose(h, pauli_hamiltonian(n, gamma, eta, J), atol=1e-13)


def test_hamiltonian_conserves_parity():
    h = build_hamiltonian(ModelParams(4, 0.4, 1.3))
    z = kron_all([SZ] * 4)
    assert np.allclose(h @ z, z @ h)


def test_params_validation():
    for bad in [dict(n_qubits=3, gamma=0, eta=0), dict(n_qubits=0, gamma=0, eta=0),
                dict(n_qubits=4, gamma=1.5, eta=0), dict(n_qubits=4, gamma=0, eta=math.nan),
                dict(n_qubits=4, gamma=0, eta=0, coupling=0.0)]:
        with pytest.raises(DomainError):
            ModelParams(**bad)
    assert ModelParams(4, 0.5, 2.0, 3.0).field == 6.0


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([2, 4]), gammas, etas, st.floats(0.1, 5))
def test_closed_energies_match_numeric(n, gamma, eta, J):
    p = ModelParams(n, gamma, eta, J)
    numeric = np.linalg.eigvalsh(build_hamiltonian(p))
    scale = max(1.0, abs(eta) * J, J)
    assert np.allclose(np.sort(closed_form_energies(p)), numeric, atol=1e-10 * scale)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([2, 4]), gammas, etas)
def test_closed_eigenvectors(n, gamma, eta):
    p = ModelParams(n, gamma, eta)
    h = build_hamiltonian(p)
    pairs = closed_form_eigensystem(p)
    v = np.array([e.state for e in pairs]).T
    e = np.array([e.energy for e in pairs])
    assert np.allclose(v.conj().T @ v, np.eye(2**n), atol=1e-12)
    assert np.linalg.norm(h @ v - v * e) < 1e-11 * max(1.0, abs(eta))


def test_labels_are_distinct():
    for n in (2, 4):
        labels = [e.label for e in closed_form_eigensystem(ModelParams(n, 0.5, 1.0))]
        assert len(set(labels)) == 2**n


def test_two_qubit_limits():
    pairs = {e.label: e for e in closed_form_eigensystem(ModelParams(2, 0.0, 1.0))}
    assert np.allclose(abs(pairs["Phi3"].state[3]), 1)  # |11> when gamma = 0
    pairs = {e.label: e for e in closed_form_eigensystem(ModelParams(2, 0.4, 0.0))}
    assert np.allclose(np.abs(pairs["Phi0"].state[[0, 3]]), 2**-0.5)


def test_stable_forms_match_literal():
    for gamma, eta in [(0.3, 0.5), (0.5, 1.0), (0.9, 3.0), (0.2, -1.5)]:
        co = four_qubit_coefficients(ModelParams(4, gamma, eta))
        w_plus, w_minus = omegas(gamma, eta)
        assert np.allclose(co.Omega_plus, literal_omega(gamma, eta, w_plus, +1), rtol=1e-9)
        assert np.allclose(co.Omega_minus, literal_omega(gamma, eta, w_plus, -1), rtol=1e-9)


def test_literal_forms_lose_precision_at_large_field():
    # the stable rearrangement keeps accuracy where the textbook one cancels
    co = four_qubit_coefficients(ModelParams(4, 0.3, 1000.0))
    w_plus, _ = omegas(0.3, 1000.0)
    lit = literal_omega(0.3, 1000.0, w_plus, -1)
    assert abs(lit[0] / co.Omega_minus[0] - 1) > 1e-4


def test_alpha_relations():
    for gamma, eta in [(0.5, 1.0), (0.2, -3.0), (1.0, 0.0)]:
        ap, am = alphas(gamma, eta)
        assert np.isclose(ap * am, 1)
        assert np.isclose((ap + am) * gamma, math.hypot(eta, 2 * gamma))
    with pytest.raises(SingularParameterError):
        alphas(0.0, 1.0)
    with pytest.raises(SingularParameterError):
        four_qubit_coefficients(ModelParams(4, 0.0, 1.0))


@pytest.mark.parametrize("gamma,eta", [(0.3, 2), (0.3, 5), (0.5, 2), (0.5, 100), (0.9, 3)])
def test_six_qubit_ground_state(gamma, eta):
    p = ModelParams(6, gamma, eta)
    e, psi, _ = six_qubit_ground_state(p)
    h = build_hamiltonian(p)
    assert np.linalg.norm(h @ psi - e * psi) < 1e-9 * max(1, eta)
    assert abs(six_qubit_ground_gap(p)) < 1e-9 * max(1, eta)
    assert abs(six_qubit_unnormalized_norm(p) - 1) < 1e-12


def test_six_qubit_small_field_is_not_ground():
    p = ModelParams(6, 0.3, 0.5)
    _, psi, _ = six_qubit_ground_state(p)
    e = six_qubit_ground_state(p)[0]
    assert np.linalg.norm(build_hamiltonian(p) @ psi - e * psi) < 1e-10
    assert six_qubit_ground_gap(p) > 1e-3


def test_six_qubit_coupling_scales_energy():
    e1 = six_qubit_ground_state(ModelParams(6, 0.5, 3.0))[0]
    e2 = six_qubit_ground_state(ModelParams(6, 0.5, 3.0, 2.0))[0]
    assert np.isclose(e2, 2 * e1)
    assert six_qubit_coefficients(0.5, 3.0).lambda6 > 0
