"""Phase structure and thermal entanglement of the four-qubit ring (plus n = 2, 6 helpers).

Every "is the concurrence zero" decision uses ZERO_THRESHOLD.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .concurrence import (build_A, lower_bound, pure_cn, pure_spinflip, pure_twocopy,
                          approx_lower, wootters, _algebraic_bound)
from .errors import ConvergenceError, DegenerateApproximationError, DomainError
from .linalg import hermitian_eig
from .model import (ModelParams, alphas, build_hamiltonian, four_qubit_coefficients,
                    four_qubit_eigensystem, omegas, six_qubit_coefficients)
from .thermal import ground_weight, model_spectrum, thermal_ensemble, thermal_state

ZERO_THRESHOLD = 1e-9
TABLE1_GAMMA = 0.3
TABLE1_T = (1.0, 5.0, 10.0, 50.0, 100.0)
TABLE1_ETA = (0.0, 100.0, 1000.0)
# (T, eta) -> reference (chi_4 column, Phi15 column) for the Gibbs-state comparison
TABLE1_REFERENCE = {
    (1.0, 0.0): (0.0, 1.0), (5.0, 0.0): (0.0, 1.0), (10.0, 0.0): (0.0, 1.0),
    (50.0, 0.0): (0.0, 1.0), (100.0, 0.0): (0.0, 1.0),
    (1.0, 100.0): (1.80069e-5, 1.80069e-5), (5.0, 100.0): (1.80068e-5, 1.80069e-5),
    (10.0, 100.0): (1.74316e-5, 1.80069e-5), (50.0, 100.0): (0.0, 1.80069e-5),
    (100.0, 100.0): (0.0, 1.80069e-5),
    (1.0, 1000.0): (1.79177e-7, 1.79177e-7), (5.0, 1000.0): (1.79177e-7, 1.79177e-7),
    (10.0, 1000.0): (1.79177e-7, 1.79177e-7), (50.0, 1000.0): (1.79175e-7, 1.79177e-7),
    (100.0, 1000.0): (1.07513e-7, 1.79177e-7),
}


# --- closed-form pure-state concurrences -------------------------------------

def c4_multi_phi15_closed(gamma: float, eta: float) -> float:
    """C^(4)[Phi15] = 2|O1 + 2 O2^2 + O3^2| / (1 + O1^2 + 4 O2^2 + 2 O3^2)."""
    o1, o2, o3 = four_qubit_coefficients(ModelParams(4, gamma, eta)).Omega_minus
    return 2 * abs(o1 + 2 * o2 * o2 + o3 * o3) / (1 + o1 * o1 + 4 * o2 * o2 + 2 * o3 * o3)


def c4_full_phi15_closed(gamma: float, eta: float) -> float:
    o1, o2, o3 = four_qubit_coefficients(ModelParams(4, gamma, eta)).Omega_minus
    q = 2 * o2 * o2 + o3 * o3
    return math.sqrt(7 * q * q + 2 * (4 * o1 * o1 - o1 + 4) * q + 7 * o1 * o1) / (
        1 + o1 * o1 + 4 * o2 * o2 + 2 * o3 * o3)


def c4_multi_phi14_closed(alpha_minus: float) -> float:
    return 2 * alpha_minus / (1 + alpha_minus**2)


def c4_full_phi14_closed(alpha_minus: float) -> float:
    a2 = alpha_minus**2
    return math.sqrt((3 + 8 * a2 + 3 * a2 * a2) / 2) / (1 + a2)


def c6_closed(gamma: float, eta: float) -> float:
    """2 N^2 |T1 T8 + 6 T2 T5 + 6 T3 T6 + 3 T4 T7| for the large-field ground state."""
    co = six_qubit_coefficients(gamma, eta)
    t = co.theta
    return 2 * co.norm6**2 * abs(t[0] * t[7] + 6 * t[1] * t[4] + 6 * t[2] * t[5] + 3 * t[3] * t[6])


def asymptotic(kind: str, gamma: float, eta: float) -> float:
    """Large-field expansions: c2 (C_W), c4_multi (C^(4)), c4_full (C_4), c6 (C^(6))."""
    if not eta > 0:
        raise DomainError("asymptotic expansions need eta > 0")
    g = gamma
    if kind == "c2":
        return g / eta
    if kind == "c4_multi":
        return 2 * g * g / eta**2 + (8 * g * g - 4 * g**4) / eta**4
    if kind == "c4_full":
        return 2 * g / eta + (24 * g - 9 * g**3) / (4 * eta**3)
    if kind == "c6":
        return 2 * g**3 / eta**3
    raise DomainError(f"unknown expansion {kind!r}")


def exact_large_field(kind: str, gamma: float, eta: float) -> float:
    """The exact pure ground-state value each expansion approximates."""
    if kind == "c2":
        return abs(gamma) / math.hypot(eta, gamma)
    if kind == "c4_multi":
        return c4_multi_phi15_closed(gamma, eta)
    if kind == "c4_full":
        return c4_full_phi15_closed(gamma, eta)
    if kind == "c6":
        return c6_closed(gamma, eta)
    raise DomainError(f"unknown expansion {kind!r}")


# --- transition fields --------------------------------------------------------

@dataclass(frozen=True)
class TransitionFields:
    gamma: float
    eta1: float
    eta2: float


def level_gap(gamma: float, eta: float) -> float:
    """E(Phi15) - E(Phi14) in units of J: [(a+ + a-) g + 2] - omega_plus."""
    return math.hypot(eta, 2 * gamma) + 2 - omegas(gamma, eta)[0]


def _scan_grid(eta_max: float, points: int) -> np.ndarray:
    # geometric points resolve the close pair of roots near gamma = 1
    lin = np.linspace(0.0, eta_max, points)
    geo = np.geomspace(1e-7, eta_max, points)
    return np.unique(np.concatenate([lin, geo]))


def _roots(f, grid: np.ndarray, tol: float) -> list[float]:
    vals = [f(x) for x in grid]
    out = []
    for k in range(len(grid) - 1):
        fa, fb = vals[k], vals[k + 1]
        if fa == 0.0:
            out.append(float(grid[k]))
            continue
        if fa * fb < 0:
            a, b = float(grid[k]), float(grid[k + 1])
            while b - a > tol:
                m = 0.5 * (a + b)
                fm = f(m)
                if fm == 0.0:
                    a = b = m
                    break
                if (fm < 0) == (fa < 0):
                    a, fa = m, fm
                else:
                    b = m
            out.append(0.5 * (a + b))
    return out


def transition_fields(gamma: float, tol: float = 1e-12, points: int = 200) -> TransitionFields:
    """Fields where Phi14 and Phi15 cross, from bracketing plus bisection."""
    if gamma == 1.0:
        return TransitionFields(1.0, 0.0, 0.0)
    if not 0.0 < gamma < 1.0:
        raise DomainError("transition fields are defined for 0 < gamma < 1")
    roots = _roots(lambda e: level_gap(gamma, e), _scan_grid(4.0, points), tol)
    if len(roots) != 2:
        raise ConvergenceError(f"expected two crossings, found {len(roots)}")
    return TransitionFields(gamma, roots[0], roots[1])


def _parity_gap(gamma: float, eta: float) -> float:
    """Lowest odd-parity minus lowest even-parity energy of H_4, numerically."""
    h = build_hamiltonian(ModelParams(4, gamma, eta)).real
    parity = np.array([bin(i).count("1") % 2 for i in range(16)])
    even, odd = np.flatnonzero(parity == 0), np.flatnonzero(parity == 1)
    e_even = hermitian_eig(h[np.ix_(even, even)]).eigenvalues[0]
    e_odd = hermitian_eig(h[np.ix_(odd, odd)]).eigenvalues[0]
    return float(e_odd - e_even)


def numeric_switch_fields(gamma: float, tol: float = 1e-12, points: int = 200) -> list[float]:
    """Fields where the numerically found ground state changes parity sector."""
    return _roots(lambda e: _parity_gap(gamma, e), _scan_grid(4.0, points), tol)


# --- zero temperature --------------------------------------------------------

def zero_t_curves(gamma: float, eta_grid, coupling: float = 1.0) -> list[dict]:
    """(eta, C^(4), C_4, ground labels) of the four-qubit ground state along eta_grid."""
    etas = np.asarray(eta_grid, dtype=float)
    if np.any(np.diff(etas) < 0):
        raise DomainError("eta grid must be sorted")
    a_multi, a_full = build_A(4, "multipartite"), build_A(4, "full")
    rows = []
    for eta in etas:
        ens = thermal_ensemble(ModelParams(4, gamma, float(eta), coupling), 0.0)
        ground = [l for l, w in zip(ens.labels, ens.weights) if w > 0]
        if len(ground) == 1:
            psi = ens.eigenvectors[:, ens.labels.index(ground[0])]
            cm, cf = pure_spinflip(psi).value, pure_twocopy(psi, a_full).value
        else:
            cm = lower_bound(ens, a_multi).value
            cf = lower_bound(ens, a_full).value
        rows.append({"eta": float(eta), "c4_multi": cm, "c4_full": cf, "ground": "+".join(ground)})
    return rows


def two_qubit_zero_t(gamma: float, eta: float, coupling: float = 1.0) -> float:
    """Wootters concurrence of the two-qubit ground state (mixture on ties)."""
    return wootters(thermal_ensemble(ModelParams(2, gamma, eta, coupling), 0.0).chi).value


def thermal_wootters(p: ModelParams, temperature: float) -> float:
    if p.n_qubits != 2:
        raise DomainError("thermal_wootters needs n = 2")
    return wootters(thermal_ensemble(p, temperature).chi).value


# --- finite temperature ------------------------------------------------------

class ThermalC4:
    """C^(4) of the Gibbs state at fixed (gamma, eta) for many temperatures.

    The spectrum is computed once; with K = V^H E V* the tau matrix at
    weights w is sqrt(w_j) K_jk sqrt(w_k).
    """

    def __init__(self, gamma: float, eta: float, coupling: float = 1.0, n: int = 4):
        self.params = ModelParams(n, gamma, eta, coupling)
        self.spectrum, self.labels = model_spectrum(self.params)
        a = build_A(n, "multipartite")
        (_, e), = a.twocopy_factors
        v = np.asarray(self.spectrum.eigenvectors)
        self._k = v.conj().T @ e @ v.conj()

    def __call__(self, temperature: float) -> float:
        ens = thermal_state(self.spectrum, temperature, self.labels)
        r = np.sqrt(ens.weights)
        return _algebraic_bound(r[:, None] * self._k * r[None, :])

    def ensemble(self, temperature: float):
        return thermal_state(self.spectrum, temperature, self.labels)


def thermal_c4(gamma: float, eta: float, temperature: float, coupling: float = 1.0) -> float:
    return ThermalC4(gamma, eta, coupling)(temperature)


def critical_temperature(gamma: float, eta: float, coupling: float = 1.0, t_min: float = 1e-4,
                         rel_tol: float = 1e-6, per_decade: int = 12) -> float | None:
    """Largest T with C^(4)[chi_4(T)] > ZERO_THRESHOLD, or None if zero already at t_min.

    A log-spaced scan upward from ``t_min`` (extended until two decades in a
    row are zero) brackets the last sign change, which is then bisected.
    """
    if not 0.0 <= gamma <= 1.0:
        raise DomainError("critical_temperature needs 0 <= gamma <= 1")
    c = ThermalC4(gamma, eta, coupling)
    if c(t_min) <= ZERO_THRESHOLD:
        return None
    ratio = 10.0 ** (1.0 / per_decade)
    t, last_pos, zeros = t_min, t_min, 0
    while zeros < 2 * per_decade:
        t *= ratio
        if c(t) > ZERO_THRESHOLD:
            last_pos, zeros = t, 0
        else:
            zeros += 1
        if t > 1e12:
            raise ConvergenceError("concurrence did not vanish below T = 1e12")
    lo, hi = last_pos, last_pos * ratio
    while hi - lo > rel_tol * lo:
        mid = math.sqrt(lo * hi)
        lo, hi = (mid, hi) if c(mid) > ZERO_THRESHOLD else (lo, mid)
    return lo


@dataclass(frozen=True)
class CriticalCurve:
    gamma: float
    points: tuple[tuple[float, float | None], ...]


def critical_curve(gamma: float, eta_grid, coupling: float = 1.0) -> CriticalCurve:
    pts = tuple((float(e), critical_temperature(gamma, float(e), coupling)) for e in eta_grid)
    return CriticalCurve(gamma, pts)


def revival_field(gamma: float, temperature: float, coupling: float = 1.0,
                  eta_max: float = 1e6, rel_tol: float = 1e-6) -> float | None:
    """Smallest eta with C^(4)[chi_4] > ZERO_THRESHOLD on a doubling scan, then bisected.

    The scan visits 0, 2^-4, 2^-3, ... up to ``eta_max``.  Returns None if no
    point is entangled, which is the outcome for gamma = 0: there the
    large-field ground state is the product state |1111>.
    """
    if not (math.isfinite(temperature) and temperature > 0):
        raise DomainError("revival_field needs a finite T > 0")
    if not -1.0 <= gamma <= 1.0:
        raise DomainError("|gamma| must be <= 1")

    def c(eta):
        return thermal_c4(gamma, eta, temperature, coupling)

    prev, eta = None, 0.0
    while eta <= eta_max:
        if c(eta) > ZERO_THRESHOLD:
            break
        prev, eta = eta, (2.0**-4 if eta == 0.0 else 2.0 * eta)
    else:
        return None
    if prev is None:
        return 0.0
    lo, hi = prev, eta
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        lo, hi = (lo, mid) if c(mid) > ZERO_THRESHOLD else (mid, hi)
    return hi


# --- Gibbs state versus Phi15 table ---------------------------------------------

def table1_compare(gamma: float = TABLE1_GAMMA, coupling: float = 1.0, t_list=TABLE1_T,
                   eta_list=TABLE1_ETA) -> list[dict]:
    """C^(4) of chi_4 (exact rank-1 bound) and of Phi15, plus the quasi-pure estimate."""
    a = build_A(4, "multipartite")
    rows = []
    for t in t_list:
        for eta in eta_list:
            p = ModelParams(4, gamma, float(eta), coupling)
            ens = thermal_ensemble(p, float(t))
            phi15 = ens.eigenvectors[:, ens.labels.index("Phi15")]
            try:
                approx = approx_lower(ens, a).value
            except DegenerateApproximationError:
                approx = math.nan
            rows.append({"T": float(t), "eta": float(eta), "chi4": lower_bound(ens, a).value,
                         "phi15": pure_spinflip(phi15).value, "approx": approx,
                         "w15": ens.weight_of("Phi15")})
    return rows


def infer_gamma_from_phi15(value: float, eta: float, tol: float = 1e-12) -> float:
    """Anisotropy whose Phi15 has C^(4) = value at field eta (bisection on (0, 1]).

    C^(4)[Phi15] grows monotonically with gamma once eta exceeds the
    transition fields, which holds for the tabulated eta = 100, 1000.
    """
    f = lambda g: c4_multi_phi15_closed(g, eta) - value
    lo, hi = 1e-9, 1.0
    if f(lo) > 0 or f(hi) < 0:
        raise DomainError("value is not attained for gamma in (0, 1]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if f(mid) < 0 else (lo, mid)
    return 0.5 * (lo + hi)


def ground_weight_at(gamma: float, eta: float, temperature: float, coupling: float = 1.0) -> float:
    return ground_weight(ModelParams(4, gamma, eta, coupling), temperature)
