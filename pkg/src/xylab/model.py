"""Anisotropic XY ring in a transverse field and its closed-form eigensystems.

``H = (J/2) sum_j [(1+g) X_j X_{j+1} + (1-g) Y_j Y_{j+1} + eta Z_j]`` with
periodic boundary.  For two qubits the single bond is counted once.

Closed-form coefficients are evaluated in rearranged but algebraically
identical forms.  The textbook forms subtract nearly equal numbers
at large field (``2 eta - omega_plus`` is ``O(g^2/eta)``), which costs about
``log10(eta^2)`` digits; the rearrangements below avoid every such
subtraction.  ``literal_omega`` keeps the textbook expressions for
cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, SingularParameterError
from .linalg import DIM_CAP, hermitian_eig, ket, normalize

FAMILIES = ("GHZ-like", "W-like", "product", "generic")
# below this |gamma| the even-sector ratios overflow (c0 grows like 1/gamma^2);
# the gamma = 0 eigenvectors are then exact to far below machine precision
GAMMA_FLOOR = 1e-60


@dataclass(frozen=True)
class ModelParams:
    n_qubits: int
    gamma: float
    eta: float
    coupling: float = 1.0

    def __post_init__(self):
        n = self.n_qubits
        if int(n) != n or n < 2 or n % 2:
            raise DomainError(f"n_qubits must be an even integer >= 2, got {n}")
        for name in ("gamma", "eta", "coupling"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if abs(self.gamma) > 1:
            raise DomainError(f"|gamma| must be <= 1, got {self.gamma}")
        if self.coupling <= 0:
            raise DomainError(f"coupling J must be positive, got {self.coupling}")

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    @property
    def field(self) -> float:
        """Magnetic field B_m = eta * J."""
        return self.eta * self.coupling


@dataclass(frozen=True)
class LabeledEigenpair:
    label: str
    energy: float
    state: np.ndarray
    family: str
    index_label: str = ""

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}")


def build_hamiltonian(p: ModelParams, cap: int = DIM_CAP) -> np.ndarray:
    n = p.n_qubits
    dim = 2**n
    if dim > cap:
        raise DimensionError(f"2^{n} exceeds dimension cap {cap}")
    J, g, eta = p.coupling, p.gamma, p.eta
    idx = np.arange(dim)
    bits = (idx[:, None] >> (n - 1 - np.arange(n))[None, :]) & 1
    h = np.zeros((dim, dim))
    h[idx, idx] = 0.5 * J * eta * (n - 2 * bits.sum(axis=1))
    bonds = [(0, 1)] if n == 2 else [(j, (j + 1) % n) for j in range(n)]
    for a, b in bonds:
        flipped = idx ^ ((1 << (n - 1 - a)) | (1 << (n - 1 - b)))
        same = bits[:, a] == bits[:, b]
        # XX+YY hops an excitation; XX-YY creates or removes a pair
        h[flipped, idx] += np.where(same, J * g, J)
    return h.astype(complex)


# --- two qubits -------------------------------------------------------------

def two_qubit_eigensystem(p: ModelParams) -> list[LabeledEigenpair]:
    """Phi0..Phi3 with energies (B, J, -J, -B), B = sqrt(eta^2 + g^2) J."""
    if p.n_qubits != 2:
        raise DomainError("two_qubit_eigensystem needs n_qubits = 2")
    J, g, bm = p.coupling, p.gamma, p.field
    gj = g * J
    big_b = math.hypot(bm, gj)
    if big_b == 0.0:
        up = normalize(ket("00") + ket("11"))
        down = normalize(ket("00") - ket("11"))
    else:
        # each ket is scaled so its large entry is B + |B_m|, which never cancels
        big = big_b + abs(bm)
        if bm >= 0:
            up = normalize(big * ket("00") + gj * ket("11"))
            down = normalize(gj * ket("00") - big * ket("11"))
        else:
            up = normalize(gj * ket("00") + big * ket("11"))
            down = normalize(big * ket("00") - gj * ket("11"))
    outer = "GHZ-like" if g != 0 else "product"
    return [
        LabeledEigenpair("Phi0", big_b, up, outer, "Phi0"),
        LabeledEigenpair("Phi1", J, normalize(ket("01") + ket("10")), "W-like", "Phi1"),
        LabeledEigenpair("Phi2", -J, normalize(ket("01") - ket("10")), "W-like", "Phi2"),
        LabeledEigenpair("Phi3", -big_b, down, outer, "Phi3"),
    ]


# --- four qubits ------------------------------------------------------------

def _sector_terms(gamma: float, eta: float):
    """Cancellation-free pieces of omega_plus/minus.

    Returns (omega_plus, omega_minus, q_plus, q_minus, rho, two_minus_rho)
    where ``q = omega^2 - 4 eta^2`` and ``rho = omega_minus / |eta|`` (finite
    at eta = 0).
    """
    c = 2.0 + 2.0 * gamma * gamma
    e2 = eta * eta
    a = e2 + c
    s = math.sqrt((e2 - c) ** 2 + 8.0 * gamma * gamma * e2)
    w_plus = math.sqrt(2.0 * (a + s))
    rho = 4.0 / math.sqrt(a + s)
    w_minus = rho * abs(eta)
    g2e2 = 16.0 * gamma * gamma * e2
    q_plus = 2.0 * (c - e2 + s) if e2 <= c else g2e2 / (s + e2 - c)
    q_minus = 2.0 * (c - e2 - s) if e2 >= c else -g2e2 / (s + c - e2)
    # a + s - 4, then 2 - rho = 4 (a + s - 4) / ((a + s)(2 + rho))
    excess = e2 - c + 4.0 * gamma * gamma + s if e2 >= c else \
        4.0 * gamma * gamma + 0.5 * g2e2 / (s + c - e2)
    two_minus_rho = 4.0 * excess / ((a + s) * (2.0 + rho))
    return w_plus, w_minus, q_plus, q_minus, rho, two_minus_rho


def omegas(gamma: float, eta: float) -> tuple[float, float]:
    w_plus, w_minus, *_ = _sector_terms(gamma, eta)
    return w_plus, w_minus


def alphas(gamma: float, eta: float) -> tuple[float, float]:
    """(alpha_plus, alpha_minus); requires gamma != 0."""
    if gamma == 0:
        raise SingularParameterError("alpha_plus diverges at gamma = 0")
    root = math.hypot(eta, 2.0 * gamma)
    a_minus = 2.0 * gamma / (root + eta) if eta >= 0 else (root - eta) / (2.0 * gamma)
    return 1.0 / a_minus, a_minus


def literal_omega(gamma: float, eta: float, w: float, sign: int):
    """Omega (or Delta, with w = omega_minus) coefficients in their textbook (cancellation-prone) form."""
    o1 = ((2 * eta + sign * w) * (w * w - 8) - 8 * gamma**2 * (eta + sign * w)) / (8 * gamma**2 * eta)
    o2 = (2 * eta + sign * w) / (4 * gamma)
    o3 = sign * (2 * eta + sign * w) / (gamma * w)
    return o1, o2, o3


@dataclass(frozen=True)
class FourQubitCoefficients:
    omega_plus: float
    omega_minus: float
    alpha_plus: float
    alpha_minus: float
    Omega_plus: tuple[float, float, float]
    Omega_minus: tuple[float, float, float]
    Delta_plus: tuple[float, float, float]
    Delta_minus: tuple[float, float, float]
    N_Omega_plus: float
    N_Omega_minus: float
    N_Delta_plus: float
    N_Delta_minus: float


def _even_coefficients(gamma, eta, branch, sign, terms):
    """(c0, c1, c2) relative to the |1111> amplitude for energy sign*omega.

    The eigen-equations of the translation- and reflection-symmetric even
    sector give ``(E+2eta) c3 = 4 g c1``, ``(E-2eta) c0 = 4 g c1`` and
    ``E c2 = 4 c1``; each ratio is written so no near-equal terms subtract.
    """
    w_plus, _, q_plus, _, rho, two_minus_rho = terms
    if branch == "delta":
        # E = sign*rho*|eta| = r*eta, so eta factors out of every ratio
        r = sign * rho if eta >= 0 else -sign * rho
        r_plus, r_minus = (2.0 + rho, -two_minus_rho) if r > 0 else (two_minus_rho, -(2.0 + rho))
        return r_plus / r_minus, eta * r_plus / (4.0 * gamma), r_plus / (gamma * r)
    w = w_plus
    energy = sign * w
    far = w + 2.0 * abs(eta)
    near = q_plus / far  # w - 2|eta|
    if eta >= 0:
        e_plus, e_minus = (far, near) if sign > 0 else (-near, -far)
    else:
        e_plus, e_minus = (near, far) if sign > 0 else (-far, -near)
    return e_plus / e_minus, e_plus / (4.0 * gamma), e_plus / (gamma * energy)


def _norm_even(c) -> float:
    c0, c1, c2 = c
    return 1.0 / math.sqrt(1.0 + c0 * c0 + 4.0 * c1 * c1 + 2.0 * c2 * c2)


def four_qubit_coefficients(p: ModelParams) -> FourQubitCoefficients:
    if p.n_qubits != 4:
        raise DomainError("four_qubit_coefficients needs n_qubits = 4")
    g, eta = p.gamma, p.eta
    if abs(g) < GAMMA_FLOOR:
        raise SingularParameterError(
            "Omega and Delta coefficients contain 1/gamma; use four_qubit_eigensystem near gamma = 0")
    terms = _sector_terms(g, eta)
    a_plus, a_minus = alphas(g, eta)
    om_p = _even_coefficients(g, eta, "omega", +1, terms)
    om_m = _even_coefficients(g, eta, "omega", -1, terms)
    de_p = _even_coefficients(g, eta, "delta", +1, terms)
    de_m = _even_coefficients(g, eta, "delta", -1, terms)
    return FourQubitCoefficients(
        omega_plus=terms[0], omega_minus=terms[1],
        alpha_plus=a_plus, alpha_minus=a_minus,
        Omega_plus=om_p, Omega_minus=om_m, Delta_plus=de_p, Delta_minus=de_m,
        N_Omega_plus=_norm_even(om_p), N_Omega_minus=_norm_even(om_m),
        N_Delta_plus=_norm_even(de_p), N_Delta_minus=_norm_even(de_m),
    )


_ADJ = ("0011", "0110", "1001", "1100")
_ALT = ("0101", "1010")


def even_sector_state(c0: float, c1: float, c2: float, c3: float = 1.0) -> np.ndarray:
    """c0|0000> + c1 (adjacent pairs) + c2 (|0101>+|1010>) + c3|1111>, normalized."""
    v = c0 * ket("0000") + c3 * ket("1111")
    for b in _ADJ:
        v = v + c1 * ket(b)
    for b in _ALT:
        v = v + c2 * ket(b)
    return normalize(v)


def _xx_even_states(eta: float) -> dict[str, np.ndarray]:
    """Even-sector states at gamma = 0, where particle number is conserved."""
    pair_lo = even_sector_state(0.0, 1.0, -math.sqrt(2.0), 0.0)  # -2 sqrt(2)
    pair_hi = even_sector_state(0.0, 1.0, math.sqrt(2.0), 0.0)  # +2 sqrt(2)
    full, empty = ket("1111"), ket("0000")
    if eta < 0:
        full, empty = empty, full
    if eta * eta > 2.0:
        return {"Phi15": full, "Phi0": empty, "PhiDeltaMinus": pair_lo, "PhiDeltaPlus": pair_hi}
    return {"Phi15": pair_lo, "Phi0": pair_hi, "PhiDeltaMinus": full, "PhiDeltaPlus": empty}


_ONE_EXC = ("0001", "0010", "0100", "1000")
_THREE_EXC = ("0111", "1011", "1101", "1110")


def _alpha_minus_ratio(gamma: float, eta: float) -> tuple[float, float]:
    """alpha_minus as a (num, den) pair that stays finite as gamma -> 0."""
    root = math.hypot(eta, 2.0 * gamma)
    if root == 0.0:
        return 1.0, 1.0
    return (2.0 * gamma, root + eta) if eta >= 0 else (root - eta, 2.0 * gamma)


def _odd_state(signs, low: float, high: float) -> np.ndarray:
    """low * sum(sign |one excitation>) + high * sum(sign' |three excitations>)."""
    lo, hi = signs
    v = np.zeros(16, dtype=complex)
    for s, b in zip(lo, _ONE_EXC):
        v += low * s * ket(b)
    for s, b in zip(hi, _THREE_EXC):
        v += high * s * ket(b)
    return normalize(v)


def four_qubit_eigensystem(p: ModelParams) -> list[LabeledEigenpair]:
    """All sixteen labeled eigenpairs of H_4, including the gamma = 0 limit.

    The omega_minus pair is labeled ``PhiDeltaPlus``/``PhiDeltaMinus``
    (``index_label`` Phi10/Phi11), since Phi11 also names a W-type state.
    ``Phi1``/``Phi2`` carry the energies of their kets: the ket obtained from
    Phi14 has energy ``[(a+ + a-) g - 2] J`` and the one from Phi13 ``+2``.
    """
    if p.n_qubits != 4:
        raise DomainError("four_qubit_eigensystem needs n_qubits = 4")
    J, g, eta = p.coupling, p.gamma, p.eta
    terms = _sector_terms(g, eta)
    w_plus, w_minus = terms[0], terms[1]
    s = math.hypot(eta, 2.0 * g)  # (alpha_plus + alpha_minus) gamma

    if abs(g) < GAMMA_FLOOR:
        even = _xx_even_states(eta)
    else:
        even = {
            "Phi15": even_sector_state(*_even_coefficients(g, eta, "omega", -1, terms)),
            "Phi0": even_sector_state(*_even_coefficients(g, eta, "omega", +1, terms)),
            "PhiDeltaPlus": even_sector_state(*_even_coefficients(g, eta, "delta", +1, terms)),
            "PhiDeltaMinus": even_sector_state(*_even_coefficients(g, eta, "delta", -1, terms)),
        }

    num, den = _alpha_minus_ratio(g, eta)
    alt, same = (1, -1, 1, -1), (1, 1, 1, 1)
    # Phi14/Phi13: alpha_minus on the one-excitation part.  Phi1/Phi2 follow
    # from -alpha_minus -> alpha_plus, rescaled by alpha_minus.
    phi14 = _odd_state(((-1, 1, -1, 1), alt), num, den)
    phi13 = _odd_state(((-1, -1, -1, -1), same), num, den)
    phi1 = _odd_state((alt, alt), den, num)
    phi2 = _odd_state((same, same), den, num)

    def w_state(bits, sign):
        return normalize(ket(bits[0]) + sign * ket(bits[1]) - ket(bits[2]) - sign * ket(bits[3]))

    r2 = 1.0 / math.sqrt(2.0)
    gen = "generic"
    return [
        LabeledEigenpair("Phi0", w_plus * J, even["Phi0"], gen, "Phi0"),
        LabeledEigenpair("Phi1", (s - 2.0) * J, phi1, gen, "Phi1"),
        LabeledEigenpair("Phi2", (s + 2.0) * J, phi2, gen, "Phi2"),
        LabeledEigenpair("Phi3", eta * J, w_state(_ONE_EXC, +1), "W-like", "Phi3"),
        LabeledEigenpair("Phi4", eta * J, w_state(_ONE_EXC, -1), "W-like", "Phi4"),
        LabeledEigenpair("PhiDeltaPlus", w_minus * J, even["PhiDeltaPlus"], gen, "Phi10"),
        LabeledEigenpair("Phi6", 0.0, r2 * (ket("0011") - ket("1100")), "GHZ-like", "Phi6"),
        LabeledEigenpair("Phi7", 0.0, r2 * (ket("0101") - ket("1010")), "GHZ-like", "Phi7"),
        LabeledEigenpair("Phi8", 0.0, r2 * (ket("0110") - ket("1001")), "GHZ-like", "Phi8"),
        LabeledEigenpair("Phi9", 0.0, 0.5 * (ket("0011") - ket("0110") - ket("1001") + ket("1100")),
                         "product", "Phi9"),
        LabeledEigenpair("PhiDeltaMinus", -w_minus * J, even["PhiDeltaMinus"], gen, "Phi11"),
        LabeledEigenpair("Phi11", -eta * J, w_state(_THREE_EXC, +1), "W-like", "Phi11"),
        LabeledEigenpair("Phi12", -eta * J, w_state(_THREE_EXC, -1), "W-like", "Phi12"),
        LabeledEigenpair("Phi13", -(s - 2.0) * J, phi13, gen, "Phi13"),
        LabeledEigenpair("Phi14", -(s + 2.0) * J, phi14, gen, "Phi14"),
        LabeledEigenpair("Phi15", -w_plus * J, even["Phi15"], gen, "Phi15"),
    ]


def four_qubit_energies(p: ModelParams) -> np.ndarray:
    """The sixteen closed-form energies (units of J included), unsorted."""
    J, g, eta = p.coupling, p.gamma, p.eta
    w_plus, w_minus = omegas(g, eta)
    s = math.hypot(eta, 2.0 * g)
    e = [w_plus, s - 2, s + 2, eta, eta, w_minus, 0, 0, 0, 0, -w_minus, -eta, -eta,
         -(s - 2), -(s + 2), -w_plus]
    return J * np.array(e, dtype=float)


def two_qubit_energies(p: ModelParams) -> np.ndarray:
    J = p.coupling
    big_b = math.hypot(p.eta, p.gamma) * J
    return np.array([big_b, J, -J, -big_b])


def closed_form_energies(p: ModelParams) -> np.ndarray:
    if p.n_qubits == 2:
        return two_qubit_energies(p)
    if p.n_qubits == 4:
        return four_qubit_energies(p)
    raise DomainError("closed-form spectra exist for n = 2 and n = 4 only")


def closed_form_eigensystem(p: ModelParams) -> list[LabeledEigenpair]:
    if p.n_qubits == 2:
        return two_qubit_eigensystem(p)
    if p.n_qubits == 4:
        return four_qubit_eigensystem(p)
    raise DomainError("closed-form eigensystems exist for n = 2 and n = 4 only")


# --- six qubits -------------------------------------------------------------

@dataclass(frozen=True)
class SixQubitCoefficients:
    lambda6: float
    kappa: float
    theta: tuple[float, ...]  # Theta_1..Theta_8
    tau6: float
    zeta6: float
    norm6: float


# basis label -> Theta index; the ring's translation orbits fix the pattern
_SIX_TERMS = (
    ("000000", 1), ("000011", 2), ("000101", 3), ("000110", 2), ("001001", 4), ("001010", 3),
    ("001100", 2), ("001111", 5), ("010001", 3), ("010010", 4), ("010100", 3), ("010111", 6),
    ("011000", 2), ("011011", 7), ("011101", 6), ("011110", 5), ("100001", 2), ("100010", 3),
    ("100100", 4), ("100111", 5), ("101000", 3), ("101011", 6), ("101101", 7), ("101110", 6),
    ("110000", 2), ("110011", 5), ("110101", 6), ("110110", 7), ("111001", 5), ("111010", 6),
    ("111100", 5), ("111111", 8),
)


def six_qubit_coefficients(gamma: float, eta: float) -> SixQubitCoefficients:
    """lambda, kappa, Theta_1..8, tau, zeta and N in units where J = 1.

    The eigenvector does not depend on J, so J is set to one here.
    """
    if gamma == 0:
        raise SingularParameterError("Theta coefficients divide by gamma; gamma = 0 is singular")
    g2, e2 = gamma * gamma, eta * eta
    kappa = math.sqrt(g2 * g2 + (e2 - 3.0) ** 2 + 2.0 * g2 * (3.0 + e2))
    lam = math.sqrt(3.0 * (2.0 + 2.0 * g2 + e2) + 2.0 * kappa
                    + 2.0 * math.sqrt(2.0) * math.sqrt((4.0 * g2 + e2) * ((3.0 + g2 + e2) + kappa)))
    lm, lp, l3 = lam - eta, lam + 3.0 * eta, lam - 3.0 * eta
    t8 = lam**4 - 2.0 * lam**2 * (2.0 + 2.0 * g2 + e2) + (e2 * (e2 - 12.0) + 4.0 * g2 * (e2 + 4.0))
    tau = -8.0 * lam * eta * (lam**2 - (6.0 - 2.0 * g2 + e2))
    zeta = 4.0 * lam * (lam**2 * (g2 - 1.0) - (4.0 * g2 * g2 - 9.0 * e2 - 4.0 * g2 + g2 * e2))
    t1 = ((24.0 - l3 * lm) * t8 + 2.0 * lm * zeta + 8.0 * tau) / (2.0 * gamma * lp)
    t2 = -lp * t1 / (6.0 * gamma)
    t3 = -(lp * t8 + lm * tau + 2.0 * zeta) / (6.0 * g2)
    t4 = (3.0 * (2.0 - g2) * t8 + lm * zeta + 2.0 * tau) / (3.0 * g2)
    t5 = -l3 * t8 / (6.0 * gamma)
    t6 = (3.0 * t8 + tau) / (3.0 * gamma)
    t7 = -(l3 * t8 - 2.0 * zeta) / (6.0 * gamma)
    theta = (t1, t2, t3, t4, t5, t6, t7, t8)
    norm = 1.0 / math.sqrt(t1 * t1 + t8 * t8 + 3.0 * (2 * t2 * t2 + 2 * t3 * t3 + t4 * t4
                                                      + 2 * t5 * t5 + 2 * t6 * t6 + t7 * t7))
    return SixQubitCoefficients(lam, kappa, theta, tau, zeta, norm)


def six_qubit_ground_state(p: ModelParams):
    """(E_g, state, coefficients) for the large-field ground state of H_6.

    E_g = -lambda J is the true minimum only once the field is large enough;
    ``six_qubit_ground_gap`` reports the difference for any parameters.
    """
    if p.n_qubits != 6:
        raise DomainError("six_qubit_ground_state needs n_qubits = 6")
    co = six_qubit_coefficients(p.gamma, p.eta)
    v = np.zeros(64, dtype=complex)
    for bits, k in _SIX_TERMS:
        v[int(bits, 2)] = co.theta[k - 1]
    v = co.norm6 * v
    # the N constant is validated in tests, then the state is renormalized anyway
    return -co.lambda6 * p.coupling, normalize(v), co


def six_qubit_unnormalized_norm(p: ModelParams) -> float:
    """Norm of N * sum(Theta |basis>) before renormalization (should be 1)."""
    co = six_qubit_coefficients(p.gamma, p.eta)
    v = np.array([co.theta[k - 1] for _, k in _SIX_TERMS])
    return float(co.norm6 * np.linalg.norm(v))


def six_qubit_ground_gap(p: ModelParams) -> float:
    """-lambda J minus the numerically exact ground energy of H_6 (>= 0)."""
    e_closed, _, _ = six_qubit_ground_state(p)
    return float(e_closed - hermitian_eig(build_hamiltonian(p)).eigenvalues[0])
