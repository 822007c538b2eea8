import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from xylab.concurrence import (approx_lower, build_A, build_projectors, convex_roof_upper,
                               decompose, lower_bound, pure_cn, pure_spinflip, pure_twocopy,
                               tau_matrices, wootters)
from xylab.errors import (ContractError, DegenerateApproximationError, DimensionError,
                          DomainError)
from xylab.linalg import SY, kron_all, ket
from xylab.model import ModelParams
from xylab.thermal import thermal_ensemble

from _states import numpy_wootters, random_mixed, random_pure


def ghz(n):
    return (ket("0" * n) + ket("1" * n)) / np.sqrt(2)


def w_state(n):
    v = sum(ket("0" * k + "1" + "0" * (n - k - 1)) for k in range(n))
    return v / np.sqrt(n)


def random_local_unitary(n, rng):
    us = []
    for _ in range(n):
        q, r = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
        us.append(q * (np.diag(r) / abs(np.diag(r))))
    return kron_all(us)


def test_projectors():
    pp, pm = build_projectors()
    assert np.allclose(pp + pm, np.eye(4))
    assert np.allclose(pm @ pm, pm)
    assert np.isclose(np.trace(pm).real, 1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_full_A_is_four_times_complement(n):
    pp, _ = build_projectors()
    a = build_A(n, "full").matrix()
    assert np.allclose(a, 4 * (np.eye(4**n) - kron_all([pp] * n)), atol=1e-12)


def test_multipartite_A():
    _, pm = build_projectors()
    assert np.allclose(build_A(2, "multipartite").matrix(), 4 * np.kron(pm, pm))
    assert build_A(4, "multipartite").rank == 1
    with pytest.raises(DomainError):
        build_A(3, "multipartite")


@pytest.mark.parametrize("kind,n", [("full", 2), ("full", 3), ("multipartite", 2)])
def test_apply_matches_dense_matrix(kind, n):
    a = build_A(n, kind)
    rng = np.random.default_rng(2)
    v = rng.normal(size=4**n) + 1j * rng.normal(size=4**n)
    assert np.allclose(a.apply(v), a.matrix(order="copy") @ v)
    psi = random_pure(n, rng)
    pp = np.kron(psi, psi)
    assert np.isclose(a.expectation_product(psi), np.vdot(pp, a.matrix(order="copy") @ pp).real)


def test_custom_A_validation():
    a = build_A(2, "custom", {"--": 1.0})
    assert a.rank == 1
    for bad in [{"+-": 1.0}, {"++": 1.0}, {"--": -1.0}, {"-x": 1.0}, {"---": 1.0}]:
        with pytest.raises(DomainError):
            build_A(2, "custom", bad)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 4]), st.integers(0, 2**31 - 1))
def test_twocopy_equals_purity_formula(n, seed):
    psi = random_pure(n, np.random.default_rng(seed))
    assert abs(pure_twocopy(psi, build_A(n, "full")).value - pure_cn(psi).value) < 1e-10


@pytest.mark.parametrize("n", [2, 4, 6])
def test_spinflip_equals_multipartite_twocopy(n):
    rng = np.random.default_rng(n)
    yn = kron_all([SY] * n)
    for _ in range(5):
        psi = random_pure(n, rng)
        direct = abs(psi @ yn @ psi)  # <psi*| Y^n |psi>
        assert np.isclose(pure_spinflip(psi).value, direct, atol=1e-12)
        assert np.isclose(pure_twocopy(psi, build_A(n, "multipartite")).value, direct, atol=1e-10)


def test_reference_states():
    assert np.isclose(pure_spinflip(ghz(4)).value, 1)
    assert np.isclose(pure_spinflip(w_state(4)).value, 0, atol=1e-15)
    assert np.isclose(pure_spinflip(ket("0110")).value, 0)
    assert pure_cn(w_state(4)).value > 0
    assert np.isclose(pure_cn(ket("0000")).value, 0, atol=1e-7)
    with pytest.raises(DomainError):
        pure_spinflip(ghz(3))
    with pytest.raises(ContractError):
        pure_spinflip(2 * ghz(2))


def test_wootters_against_numpy_oracle():
    rng = np.random.default_rng(11)
    for k in range(200):
        rho = random_mixed(2, rng, rank=1 + k % 4)
        assert abs(wootters(rho).value - numpy_wootters(rho)) < 1e-7


def test_wootters_werner_family():
    bell = ghz(2)
    for p in np.linspace(0, 1, 11):
        rho = p * np.outer(bell, bell) + (1 - p) * np.eye(4) / 4
        assert np.isclose(wootters(rho).value, max(0.0, (3 * p - 1) / 2), atol=1e-10)
    with pytest.raises(DimensionError):
        wootters(np.eye(8) / 8)
    with pytest.raises(ContractError):
        wootters(np.eye(4))


def test_lower_bound_exact_for_rank_one_A():
    rng = np.random.default_rng(12)
    a2 = build_A(2, "multipartite")
    for k in range(100):
        rho = random_mixed(2, rng, rank=1 + k % 4)
        assert abs(lower_bound(rho, a2).value - wootters(rho).value) < 1e-10
    psi = random_pure(4, rng)
    rho = np.outer(psi, psi.conj())
    assert np.isclose(lower_bound(rho, build_A(4, "multipartite")).value, pure_spinflip(psi).value)


def test_lower_bound_invariant_under_local_unitaries():
    rng = np.random.default_rng(13)
    a = build_A(4, "multipartite")
    for _ in range(5):
        rho = random_mixed(4, rng, rank=2)
        u = random_local_unitary(4, rng)
        assert np.isclose(lower_bound(rho, a).value, lower_bound(u @ rho @ u.conj().T, a).value,
                          atol=1e-10)


def test_lower_bound_full_kind_and_search():
    rng = np.random.default_rng(14)
    a = build_A(3, "full")
    psi = random_pure(3, rng)
    rho = np.outer(psi, psi.conj())
    lb = lower_bound(rho, a).value
    assert lb <= pure_twocopy(psi, a).value + 1e-10
    assert lower_bound(rho, a, z="search", samples=50).value >= lb
    m = tau_matrices(rho, a).matrices.shape[0]
    with pytest.raises(ContractError):
        lower_bound(rho, a, z=np.ones(m))
    with pytest.raises(DimensionError):
        lower_bound(rho, build_A(2, "full"))


def test_decompose_truncates_matrices_only():
    rho = np.diag([0.5, 0.5 - 1e-11, 1e-11, 0.0]).astype(complex)
    w, v = decompose(rho)
    assert w.size == 3 and np.all(np.diff(w) <= 0)
    w, _ = decompose(np.diag([1.0, 1e-20, 0, 0]))
    assert w.size == 1
    # Gibbs ensembles keep every positive weight, however small
    ens = thermal_ensemble(ModelParams(2, 0.3, 20.0), 1.0)
    w, _ = decompose(ens)
    assert w.size == 4 and w[-1] < 1e-12


def test_approx_lower():
    rng = np.random.default_rng(15)
    a = build_A(4, "multipartite")
    psi = random_pure(4, rng)
    rho = np.outer(psi, psi.conj())
    assert np.isclose(approx_lower(rho, a).value, pure_spinflip(psi).value)
    noisy = 0.999 * rho + 0.001 * random_mixed(4, rng)
    assert abs(approx_lower(noisy, a).value - lower_bound(noisy, a).value) < 1e-2
    with pytest.raises(DegenerateApproximationError):
        approx_lower(np.eye(16) / 16, a)


def test_convex_roof_sandwich_two_qubits():
    rng = np.random.default_rng(16)
    a = build_A(2, "multipartite")
    for k in range(20):
        rho = random_mixed(2, rng, rank=1 + k % 4)
        up = convex_roof_upper(rho, a, trials=20, seed=k).value
        assert wootters(rho).value - 1e-10 <= up < wootters(rho).value + 1e-6


def test_convex_roof_four_qubits_and_pure():
    rng = np.random.default_rng(17)
    a = build_A(4, "multipartite")
    for rank in (1, 2, 5):
        rho = random_mixed(4, rng, rank=rank)
        assert convex_roof_upper(rho, a, trials=30).value >= lower_bound(rho, a).value - 1e-9
    psi = random_pure(4, rng)
    up = convex_roof_upper(np.outer(psi, psi.conj()), a).value
    assert np.isclose(up, pure_spinflip(psi).value)
    with pytest.raises(DomainError):
        convex_roof_upper(np.outer(psi, psi.conj()), a, trials=0)


def test_convex_roof_is_seed_deterministic():
    rho = random_mixed(4, np.random.default_rng(18), rank=3)
    a = build_A(4, "multipartite")
    assert convex_roof_upper(rho, a, seed=5).value == convex_roof_upper(rho, a, seed=5).value
