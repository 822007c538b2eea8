import math

import numpy as np
import pytest

from xylab import analysis as an
from xylab.concurrence import build_A, lower_bound, pure_spinflip, pure_twocopy, wootters
from xylab.errors import DomainError
from xylab.linalg import SpectralDecomposition
from xylab.model import ModelParams, alphas, closed_form_eigensystem, six_qubit_ground_state
from xylab.thermal import ground_labels, model_spectrum, thermal_ensemble, thermal_state


def states(gamma, eta):
    return {e.label: e.state for e in closed_form_eigensystem(ModelParams(4, gamma, eta))}


@pytest.mark.parametrize("gamma,eta", [(0.3, 0.2), (0.5, 1.0), (0.9, 3.0), (0.2, 50.0)])
def test_closed_concurrences_match_states(gamma, eta):
    st = states(gamma, eta)
    full = build_A(4, "full")
    assert np.isclose(an.c4_multi_phi15_closed(gamma, eta), pure_spinflip(st["Phi15"]).value)
    assert np.isclose(an.c4_full_phi15_closed(gamma, eta), pure_twocopy(st["Phi15"], full).value)
    am = alphas(gamma, eta)[1]
    assert np.isclose(an.c4_multi_phi14_closed(am), pure_spinflip(st["Phi14"]).value)
    assert np.isclose(an.c4_full_phi14_closed(am), pure_twocopy(st["Phi14"], full).value)


@pytest.mark.parametrize("gamma,eta", [(0.5, 2.0), (0.3, 10.0), (0.5, 100.0)])
def test_c6_closed_matches_state(gamma, eta):
    _, psi, _ = six_qubit_ground_state(ModelParams(6, gamma, eta))
    assert np.isclose(an.c6_closed(gamma, eta), pure_spinflip(psi).value, rtol=1e-9)


def test_asymptotic_values():
    assert np.isclose(an.asymptotic("c4_multi", 0.3, 100), 1.8000688e-5, rtol=1e-7)
    assert np.isclose(an.asymptotic("c2", 0.3, 100), 3e-3)
    assert np.isclose(an.asymptotic("c6", 0.5, 100), 2.5e-7)
    with pytest.raises(DomainError):
        an.asymptotic("c2", 0.3, 0.0)
    with pytest.raises(DomainError):
        an.asymptotic("c8", 0.3, 1.0)


@pytest.mark.parametrize("kind,tol", [("c2", 1e-4), ("c4_multi", 1e-6), ("c4_full", 1e-5)])
def test_expansions_converge(kind, tol):
    for g in (0.1, 0.3, 0.9):
        exact = an.exact_large_field(kind, g, 100.0)
        assert abs(an.asymptotic(kind, g, 100.0) / exact - 1) <= tol
        # the error shrinks as the field grows
        assert (abs(an.asymptotic(kind, g, 400.0) / an.exact_large_field(kind, g, 400.0) - 1)
                < abs(an.asymptotic(kind, g, 100.0) / exact - 1))


def test_transition_fields_match_parity_switch():
    tf = an.transition_fields(0.5)
    assert 0 < tf.eta1 < tf.eta2
    sw = an.numeric_switch_fields(0.5)
    assert np.allclose(sw, [tf.eta1, tf.eta2], atol=1e-8)
    # the ground label flips across each field
    for eta, below, above in [(tf.eta1, "Phi15", "Phi14"), (tf.eta2, "Phi14", "Phi15")]:
        assert ground_labels(ModelParams(4, 0.5, eta - 1e-6)) == (below,)
        assert ground_labels(ModelParams(4, 0.5, eta + 1e-6)) == (above,)


def test_upper_transition_field_closed_form():
    # derived: the Phi14/Phi15 crossing above the dip sits at 2 sqrt(1 - gamma^2)
    for g in (0.2, 0.5, 0.8):
        assert np.isclose(an.transition_fields(g).eta2, 2 * math.sqrt(1 - g * g), atol=1e-10)


def test_transition_fields_shrink_with_gamma():
    lo, hi = an.transition_fields(0.2), an.transition_fields(0.9)
    assert hi.eta1 < lo.eta1 and hi.eta2 < lo.eta2
    assert an.transition_fields(1.0) == an.TransitionFields(1.0, 0.0, 0.0)
    with pytest.raises(DomainError):
        an.transition_fields(0.0)


def test_zero_t_curves():
    tf = an.transition_fields(0.5)
    rows = an.zero_t_curves(0.5, [0.2, tf.eta1, 1.0, 3.0, 50.0])
    assert rows[0]["ground"] == "Phi15"
    assert np.isclose(rows[0]["c4_multi"], an.c4_multi_phi15_closed(0.5, 0.2))
    assert rows[1]["ground"] == "Phi14+Phi15"
    ens = thermal_ensemble(ModelParams(4, 0.5, tf.eta1), 0.0)
    assert np.isclose(rows[1]["c4_multi"], lower_bound(ens, build_A(4, "multipartite")).value)
    assert rows[2]["ground"] == "Phi14"
    assert 0 < rows[4]["c4_multi"] < rows[3]["c4_multi"]
    with pytest.raises(DomainError):
        an.zero_t_curves(0.5, [1.0, 0.5])


def test_two_qubit_symmetries():
    # eta -> -eta, gamma -> -gamma and J -> -J leave the thermal concurrence unchanged
    for gamma, eta, t in [(0.3, 0.7, 0.4), (0.8, 2.0, 1.5), (0.5, 0.1, 0.05)]:
        base = an.thermal_wootters(ModelParams(2, gamma, eta), t)
        assert abs(an.thermal_wootters(ModelParams(2, gamma, -eta), t) - base) < 1e-10
        assert abs(an.thermal_wootters(ModelParams(2, -gamma, eta), t) - base) < 1e-10
        spectrum, _ = model_spectrum(ModelParams(2, gamma, eta))
        flipped = SpectralDecomposition(-spectrum.eigenvalues, spectrum.eigenvectors)
        assert abs(wootters(thermal_state(flipped, t).chi).value - base) < 1e-10


def test_critical_branch_switch_two_qubits():
    for g in np.arange(0.2, 0.95, 0.1):
        ec = math.sqrt(1 - g * g)
        assert np.isclose(an.two_qubit_zero_t(g, ec - 1e-6), 1.0)
        assert np.isclose(an.two_qubit_zero_t(g, ec + 1e-6), g / math.hypot(ec + 1e-6, g))


def test_thermal_c4_matches_direct_route():
    c = an.ThermalC4(0.5, 1.3)
    a = build_A(4, "multipartite")
    for t in (0.05, 0.3, 0.6):
        direct = lower_bound(thermal_ensemble(ModelParams(4, 0.5, 1.3), t), a).value
        assert abs(c(t) - direct) < 1e-12


def test_critical_temperature():
    tf = an.transition_fields(0.5)
    eta = 0.5 * (tf.eta1 + tf.eta2)
    tc = an.critical_temperature(0.5, eta)
    assert tc > 0
    c = an.ThermalC4(0.5, eta)
    assert c(0.999 * tc) > an.ZERO_THRESHOLD >= c(1.001 * tc)
    assert an.critical_temperature(0.0, 10.0) is None
    curve = an.critical_curve(0.5, [0.5, 1.0])
    assert [p[0] for p in curve.points] == [0.5, 1.0]


def test_critical_curve_has_a_cusp():
    # slope changes abruptly between the two transition fields
    e = np.linspace(1.0, 1.1, 11)
    t = np.array([an.critical_temperature(0.5, x) for x in e])
    slopes = np.diff(t) / np.diff(e)
    assert slopes.min() < -1.0 and slopes.max() > 0.3


def test_revival_field():
    eta1 = an.revival_field(0.3, 1.0)
    assert eta1 is not None
    assert an.thermal_c4(0.3, eta1, 1.0) > an.ZERO_THRESHOLD
    assert an.thermal_c4(0.3, 0.99 * eta1, 1.0) <= an.ZERO_THRESHOLD
    assert an.revival_field(0.3, 100.0) > eta1
    assert an.revival_field(0.0, 5.0) is None
    with pytest.raises(DomainError):
        an.revival_field(0.3, 0.0)


def test_table1_layout_and_values():
    rows = an.table1_compare(t_list=(1.0, 50.0), eta_list=(0.0, 100.0))
    assert [(r["T"], r["eta"]) for r in rows] == [(1, 0), (1, 100), (50, 0), (50, 100)]
    assert rows[0]["chi4"] <= 1e-9 and abs(rows[0]["phi15"] - 1) < 1e-9
    assert np.isclose(rows[1]["chi4"], 1.80069e-5, rtol=1e-5)
    assert rows[3]["chi4"] <= 1e-9 and np.isclose(rows[3]["phi15"], 1.80069e-5, rtol=1e-5)


def test_infer_gamma():
    assert abs(an.infer_gamma_from_phi15(1.80069e-5, 100.0) - 0.3) < 1e-4
    # the tabulated eta = 1000 entry points to a slightly different anisotropy
    assert abs(an.infer_gamma_from_phi15(1.79177e-7, 1000.0) - 0.2993) < 1e-4
    with pytest.raises(DomainError):
        an.infer_gamma_from_phi15(0.5, 100.0)


def test_approximation_valid_when_ground_dominates():
    a = build_A(4, "multipartite")
    checked = 0
    for eta in (5.0, 20.0, 100.0):
        for t in (0.5, 1.0, 3.0):
            p = ModelParams(4, 0.3, eta)
            if an.ground_weight_at(0.3, eta, t) <= 0.999:
                continue
            ens = thermal_ensemble(p, t)
            lb = lower_bound(ens, a).value
            assert abs(an.approx_lower(ens, a).value - lb) <= 1e-3 * lb
            checked += 1
    assert checked >= 4
