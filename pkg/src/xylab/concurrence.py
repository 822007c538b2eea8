"""Wootters and MKB concurrences: pure forms, tau matrices and mixed-state bounds.

Two-copy vectors live in "copy order": index ``a * 2**n + b`` holds
``|a>|b>`` with ``a`` the first copy.  Operators A built from the
single-qubit pair projectors are diagonal in the per-qubit pair basis

    k = 0: |00>,  k = 1: |11>,  k = 2: (|01> + |10>)/sqrt2,  k = 3: singlet,

so A is applied by a basis change, a diagonal scaling and the inverse change.
For a sign string ``s`` the projector P_s = P_{s_1} x ... x P_{s_n} picks
pair states with ``k_j = 3`` exactly where ``s_j = '-'``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

import numpy as np

from .errors import (ContractError, DegenerateApproximationError, DimensionError,
                     DomainError)
from .linalg import (DIM_CAP, SY, as_matrix, hermitian_eig, kron_all, num_qubits,
                     orthonormalize_columns, partial_trace, singular_values, sqrtm_psd,
                     takagi)
from .thermal import ThermalEnsemble

METHODS = ("wootters", "pure-closed", "pure-twocopy", "lower-bound", "approx-lower",
           "sampled-upper")


@dataclass(frozen=True)
class ConcurrenceEstimate:
    value: float
    method: str

    def __post_init__(self):
        if self.method not in METHODS:
            raise DomainError(f"unknown method {self.method!r}")
        if not (math.isfinite(self.value) and self.value >= 0):
            raise ContractError(f"concurrence must be finite and >= 0, got {self.value}")

    def __float__(self):
        return float(self.value)


# --- density matrix helpers -------------------------------------------------

def _check_density(rho, tol: float = 1e-10) -> np.ndarray:
    rho = as_matrix(rho)
    if rho.shape[0] != rho.shape[1]:
        raise DimensionError("density matrix must be square")
    if np.linalg.norm(rho - rho.conj().T) > tol * max(1.0, np.linalg.norm(rho)):
        raise ContractError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise ContractError(f"density matrix trace {np.trace(rho).real!r} is not 1")
    return 0.5 * (rho + rho.conj().T)


def _yy() -> np.ndarray:
    return np.real(kron_all([SY, SY]))


def wootters(rho, tol: float = 1e-10) -> ConcurrenceEstimate:
    """max(0, l1 - l2 - l3 - l4), l_k = sqrt(eig R) with R = rho YY rho* YY."""
    rho = _check_density(rho, tol)
    if rho.shape != (4, 4):
        raise DimensionError("Wootters concurrence needs a 4x4 density matrix")
    root = sqrtm_psd(rho, tol)
    # R is similar to (root YY root*)(root YY root*)^H, so l_k are singular values
    lam = singular_values(root @ _yy() @ root.conj())
    return ConcurrenceEstimate(max(0.0, lam[0] - lam[1:].sum()), "wootters")


# --- A operators ------------------------------------------------------------

_PAIR_BASIS = np.array([
    [1, 0, 0, 0],
    [0, 0, 0, 1],
    [0, 1 / math.sqrt(2), 1 / math.sqrt(2), 0],
    [0, 1 / math.sqrt(2), -1 / math.sqrt(2), 0],
])  # rows are the pair states in the |copy1 copy2> basis

# the same states as 2x2 arrays M[a, b] = <a b|k>
_PAIR_MATS = [row.reshape(2, 2) for row in _PAIR_BASIS]


def build_projectors() -> tuple[np.ndarray, np.ndarray]:
    """(P_plus, P_minus) on the two copies of one qubit; P_minus is the singlet."""
    s = _PAIR_BASIS[3].astype(complex)
    p_minus = np.outer(s, s.conj())
    return np.eye(4, dtype=complex) - p_minus, p_minus


def _is_even(s: str) -> bool:
    return s.count("-") % 2 == 0


@dataclass(frozen=True)
class AOperator:
    """A = sum_s p_s P_{s_1} x ... x P_{s_n} over sign strings s in {+,-}^n."""

    n_qubits: int
    kind: str
    weights: Mapping[str, float] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return 4**self.n_qubits

    @cached_property
    def rank(self) -> int:
        return sum(3 ** s.count("+") for s, p in self.weights.items() if p > 0)

    @cached_property
    def _diag(self) -> np.ndarray:
        """Eigenvalues of A on the pair-basis product states, shape (4,)*n."""
        n = self.n_qubits
        minus = np.indices((4,) * n) == 3
        d = np.zeros((4,) * n)
        for s, p in self.weights.items():
            mask = np.ones((4,) * n, dtype=bool)
            for j, c in enumerate(s):
                mask &= minus[j] if c == "-" else ~minus[j]
            d[mask] = p
        return d

    def _to_pairs(self, v: np.ndarray) -> np.ndarray:
        n = self.n_qubits
        t = v.reshape((2,) * (2 * n))
        perm = [x for j in range(n) for x in (j, n + j)]
        t = t.transpose(perm).reshape((4,) * n)
        for j in range(n):
            t = np.moveaxis(np.tensordot(_PAIR_BASIS, t, axes=([1], [j])), 0, j)
        return t

    def _from_pairs(self, t: np.ndarray) -> np.ndarray:
        n = self.n_qubits
        for j in range(n):
            t = np.moveaxis(np.tensordot(_PAIR_BASIS.T, t, axes=([1], [j])), 0, j)
        t = t.reshape((2,) * (2 * n))
        inv = np.argsort([x for j in range(n) for x in (j, n + j)])
        return t.transpose(inv).reshape(-1)

    def apply(self, v) -> np.ndarray:
        """A acting on a copy-ordered two-copy vector."""
        v = np.asarray(v, dtype=complex).ravel()
        if v.size != self.dim:
            raise DimensionError(f"two-copy vector needs length {self.dim}")
        return self._from_pairs(self._diag * self._to_pairs(v))

    def expectation_product(self, psi) -> float:
        """<psi psi|A|psi psi> from the pair-state probabilities."""
        psi = np.asarray(psi, dtype=complex).ravel()
        c = self._to_pairs(np.multiply.outer(psi, psi).ravel())
        return float(np.sum(self._diag * np.abs(c) ** 2))

    def matrix(self, order: str = "pair", cap: int = DIM_CAP) -> np.ndarray:
        """Dense A; ``pair`` orders each qubit's copies together, ``copy`` stacks registers."""
        n = self.n_qubits
        if self.dim > cap:
            raise DimensionError(f"A matrix of dimension {self.dim} exceeds cap {cap}")
        p_plus, p_minus = build_projectors()
        m = np.zeros((self.dim, self.dim), dtype=complex)
        for s, p in self.weights.items():
            if p:
                m += p * kron_all([p_minus if c == "-" else p_plus for c in s], cap)
        if order == "pair":
            return m
        if order != "copy":
            raise DomainError(f"unknown order {order!r}")
        perm = [x for j in range(n) for x in (j, n + j)]  # pair axis -> copy axis
        t = m.reshape((2,) * (4 * n))
        inv = list(np.argsort(perm))
        t = t.transpose(inv + [2 * n + i for i in inv])
        return t.reshape(self.dim, self.dim)

    @cached_property
    def twocopy_factors(self) -> tuple[tuple[tuple[int, ...], np.ndarray], ...]:
        """(pair-state tuple, E_alpha) with |chi_alpha> = vec(E_alpha), even strings only.

        Strings with an odd number of minus signs give antisymmetric
        E_alpha; they vanish on every symmetric two-copy vector and are
        left out.
        """
        out = []
        for s, p in sorted(self.weights.items()):
            if p <= 0 or not _is_even(s):
                continue
            choices = [(3,) if c == "-" else (0, 1, 2) for c in s]
            for ks in itertools.product(*choices):
                e = math.sqrt(p) * kron_all([_PAIR_MATS[k] for k in ks])
                out.append((ks, e))
        return tuple(out)


def _all_strings(n: int):
    return ("".join(t) for t in itertools.product("+-", repeat=n))


def build_A(n: int, kind: str = "multipartite", weights: Mapping[str, float] | None = None) -> AOperator:
    """A_n (``full``), A^(n) (``multipartite``) or a ``custom`` weighting.

    ``full`` is 4 (I - P_plus^{x n}), i.e. weight 4 on every string but
    the all-plus one.  Only the even-minus strings reach the expectation
    values of symmetric states |psi>|psi>.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    if kind == "full":
        w = {s: 4.0 for s in _all_strings(n) if "-" in s}
    elif kind == "multipartite":
        if n % 2:
            raise DomainError("A^(n) needs even n; the multipartite concurrence vanishes for odd n")
        w = {"-" * n: float(2**n)}
    elif kind == "custom":
        if not weights:
            raise DomainError("custom A needs weights")
        w = {}
        for s, p in weights.items():
            if len(s) != n or set(s) - {"+", "-"}:
                raise DomainError(f"bad sign string {s!r}")
            if "-" not in s or not _is_even(s):
                raise DomainError(f"weights must be on even-minus strings other than all-plus: {s!r}")
            if not (math.isfinite(p) and p >= 0):
                raise DomainError(f"weight for {s!r} must be finite and >= 0")
            w[s] = float(p)
    else:
        raise DomainError(f"unknown kind {kind!r}")
    return AOperator(int(n), kind, w)


# --- pure states ------------------------------------------------------------

def _pure(psi, tol: float = 1e-10) -> np.ndarray:
    v = np.asarray(psi, dtype=complex).ravel()
    num_qubits(v.size)
    if abs(np.linalg.norm(v) - 1.0) > tol:
        raise ContractError("state is not normalized")
    return v


def pure_twocopy(psi, a: AOperator) -> ConcurrenceEstimate:
    """sqrt(<psi|<psi| A |psi>|psi>) without forming the 4^n matrix."""
    v = _pure(psi)
    if v.size != 2**a.n_qubits:
        raise DimensionError("state and A act on different numbers of qubits")
    return ConcurrenceEstimate(math.sqrt(max(a.expectation_product(v), 0.0)), "pure-twocopy")


def pure_cn(psi) -> ConcurrenceEstimate:
    """2^(1 - n/2) sqrt((2^n - 2) - sum of marginal purities over proper subsets)."""
    v = _pure(psi)
    n = num_qubits(v.size)
    rho = np.outer(v, v.conj())
    total = 0.0
    for k in range(1, n):
        for keep in itertools.combinations(range(1, n + 1), k):
            r = partial_trace(rho, keep)
            total += float(np.real(np.vdot(r, r)))
    return ConcurrenceEstimate(2.0 ** (1 - n / 2) * math.sqrt(max(2**n - 2 - total, 0.0)),
                               "pure-closed")


def spinflip_overlap(psi) -> complex:
    """<psi*| Y x ... x Y |psi> = i^n sum_x (-1)^popcount(x) psi[~x] psi[x]."""
    v = np.asarray(psi, dtype=complex).ravel()
    n = num_qubits(v.size)
    idx = np.arange(v.size)
    parity = np.array([bin(x).count("1") & 1 for x in idx])
    sign = 1.0 - 2.0 * parity
    return (1j) ** n * np.sum(sign * v[idx ^ (v.size - 1)] * v)


def pure_spinflip(psi) -> ConcurrenceEstimate:
    """|<psi*| sigma_y^{x n} |psi>| for even n."""
    v = _pure(psi)
    if num_qubits(v.size) % 2:
        raise DomainError("the spin-flip concurrence needs an even number of qubits")
    return ConcurrenceEstimate(float(abs(spinflip_overlap(v))), "pure-closed")


# --- mixed states -----------------------------------------------------------

@dataclass(frozen=True)
class TauSet:
    """Symmetric T^alpha matrices and the subnormalized states they came from."""

    matrices: np.ndarray  # (m, r, r)
    vectors: np.ndarray  # (d, r), columns sqrt(w_i) |phi_i>, weights descending
    weights: np.ndarray

    @property
    def rank(self) -> int:
        return self.matrices.shape[1]

    def combine(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex).ravel()
        if z.size != self.matrices.shape[0]:
            raise DimensionError(f"z needs {self.matrices.shape[0]} entries")
        return np.tensordot(z, self.matrices, axes=1)

    def quasi_pure_z(self) -> np.ndarray | None:
        """z_alpha = conj(T^alpha_11) / |T_11|, or None if every T^alpha_11 vanishes."""
        t11 = self.matrices[:, 0, 0]
        nrm = np.linalg.norm(t11)
        if nrm == 0:
            return None
        return np.conj(t11) / nrm


def decompose(rho, rank_tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """(weights, eigenvectors) with weights descending.

    A ThermalEnsemble is used as is, keeping every positive weight: small
    Gibbs weights are physical and dropping them biases the bound.  A plain
    matrix is diagonalized and eigenvalues at or below ``rank_tol * max``
    are discarded as numerical noise.
    """
    if isinstance(rho, ThermalEnsemble):
        w = np.asarray(rho.weights, dtype=float)
        v = np.asarray(rho.eigenvectors)
        keep = w > 0
    else:
        rho = _check_density(rho)
        w, v = hermitian_eig(rho)
        if w[0] < -1e-10:
            raise ContractError("density matrix is not positive semidefinite")
        keep = w > rank_tol * max(w[-1], 0.0)
    w, v = w[keep], v[:, keep]
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def tau_matrices(rho, a: AOperator, rank_tol: float = 1e-12) -> TauSet:
    """T^alpha_jk = <phi~_j|<phi~_k|chi~^alpha> for the subnormalized phi~_j."""
    w, v = decompose(rho, rank_tol)
    if v.shape[0] != 2**a.n_qubits:
        raise DimensionError("density matrix and A act on different numbers of qubits")
    phi = v * np.sqrt(w)
    g = phi.conj()
    mats = [g.T @ e @ g for _, e in a.twocopy_factors]
    if not mats:
        mats = [np.zeros((phi.shape[1],) * 2, dtype=complex)]
    return TauSet(np.array(mats), phi, w)


def _algebraic_bound(tau: np.ndarray) -> float:
    s = singular_values(tau)
    return max(0.0, float(s[0] - s[1:].sum()))


def lower_bound(rho, a: AOperator, z=None, samples: int = 200, seed: int = 0,
                rank_tol: float = 1e-12) -> ConcurrenceEstimate:
    """max(0, s_1 - sum_{j>1} s_j) over singular values of tau = sum_alpha z_alpha T^alpha.

    ``z=None`` uses the quasi-pure choice (the only choice for rank-1 A,
    where the bound is exact).  ``z="search"`` also tries ``samples``
    seeded random unit vectors and keeps the best bound.
    """
    ts = tau_matrices(rho, a, rank_tol)
    m = ts.matrices.shape[0]
    if isinstance(z, str):
        if z != "search":
            raise DomainError(f"unknown z option {z!r}")
        best = lower_bound(rho, a, None, rank_tol=rank_tol).value
        rng = np.random.default_rng(seed)
        for _ in range(samples):
            zz = rng.normal(size=m) + 1j * rng.normal(size=m)
            best = max(best, _algebraic_bound(ts.combine(zz / np.linalg.norm(zz))))
        return ConcurrenceEstimate(best, "lower-bound")
    if z is None:
        zq = ts.quasi_pure_z()
        if zq is None:
            # no preferred direction: every unit vector e_alpha still gives a bound
            best = max(_algebraic_bound(t) for t in ts.matrices)
            return ConcurrenceEstimate(best, "lower-bound")
        z = zq
    z = np.asarray(z, dtype=complex).ravel()
    if abs(np.linalg.norm(z) - 1.0) > 1e-10:
        raise ContractError("z must be a unit vector")
    return ConcurrenceEstimate(_algebraic_bound(ts.combine(z)), "lower-bound")


def approx_lower(rho, a: AOperator, gap_tol: float = 1e-10,
                 rank_tol: float = 1e-12) -> ConcurrenceEstimate:
    """Quasi-pure approximation built around the dominant eigenstate of rho.

    tau_ij = <phi~_1 phi~_1|A|phi~_i phi~_j> / sqrt(<phi~_1 phi~_1|A|phi~_1 phi~_1>),
    evaluated with A's action on the two-copy space.
    """
    w, v = decompose(rho, rank_tol)
    if v.shape[0] != 2**a.n_qubits:
        raise DimensionError("density matrix and A act on different numbers of qubits")
    if w.size > 1 and w[0] - w[1] <= gap_tol:
        raise DegenerateApproximationError(
            f"largest eigenvalue is degenerate (gap {w[0] - w[1]:.3e}); the approximation is undefined")
    phi = v * np.sqrt(w)
    d = phi.shape[0]
    top = np.multiply.outer(phi[:, 0], phi[:, 0]).ravel()
    x = a.apply(top).reshape(d, d)
    denom = float(np.real(np.vdot(top, x.ravel())))
    if denom < 1e-14:
        raise DegenerateApproximationError(
            "dominant eigenstate has zero two-copy expectation of A; the approximation is undefined")
    tau = phi.T @ x.conj() @ phi / math.sqrt(denom)
    return ConcurrenceEstimate(_algebraic_bound(tau), "approx-lower")


# --- sampled convex roof ----------------------------------------------------

def _roof_value(v: np.ndarray, mats: np.ndarray) -> float:
    diag = np.einsum("ij,ajk,ik->ai", v, mats, v)
    return float(np.sum(np.sqrt(np.sum(np.abs(diag) ** 2, axis=0))))


def _random_left_unitary(rng, k: int, r: int) -> np.ndarray:
    g = rng.normal(size=(k, r)) + 1j * rng.normal(size=(k, r))
    return orthonormalize_columns(g)


_GRID_T, _GRID_P = np.meshgrid(np.linspace(0, np.pi / 2, 16), np.linspace(-np.pi, np.pi, 32, endpoint=False),
                               indexing="ij")
_GRID_T, _GRID_P = _GRID_T.ravel(), _GRID_P.ravel()


def _pair_terms(theta, phi, a, b, d):
    c, s = np.cos(theta), np.sin(theta)
    e = np.exp(1j * phi)
    x = np.multiply.outer(a, c * c) - 2 * np.multiply.outer(b, c * s * e) + np.multiply.outer(d, s * s * e * e)
    y = (np.multiply.outer(a, s * s / (e * e)) + 2 * np.multiply.outer(b, c * s / e)
         + np.multiply.outer(d, c * c))
    return np.sqrt(np.sum(np.abs(x) ** 2, axis=0)) + np.sqrt(np.sum(np.abs(y) ** 2, axis=0))


_ZOOM = np.linspace(-1.0, 1.0, 7)
_ZT, _ZP = (g.ravel() for g in np.meshgrid(_ZOOM, _ZOOM, indexing="ij"))


def _best_rotation(a, b, d, rounds: int = 14):
    """Coarse (theta, phi) grid, then repeated 7x7 zooms around the best point."""
    vals = _pair_terms(_GRID_T, _GRID_P, a, b, d)
    k = int(np.argmin(vals))
    theta, phi, best = _GRID_T[k], _GRID_P[k], vals[k]
    step_t, step_p = np.pi / 30, np.pi / 16
    for _ in range(rounds):
        tt, pp = theta + step_t * _ZT, phi + step_p * _ZP
        vals = _pair_terms(tt, pp, a, b, d)
        k = int(np.argmin(vals))
        if vals[k] < best:
            theta, phi, best = tt[k], pp[k], vals[k]
        step_t /= 3.0
        step_p /= 3.0
    return theta, phi, float(best)


def _sweep(v: np.ndarray, mats: np.ndarray) -> np.ndarray:
    """One pass of pairwise Givens rotations over all row pairs of v."""
    k = v.shape[0]
    for i in range(k - 1):
        for j in range(i + 1, k):
            u, w = v[i], v[j]
            tu, tw = mats @ u, mats @ w
            a, b, d = tu @ u, tw @ u, tw @ w
            current = float(np.sqrt(np.sum(np.abs(a) ** 2)) + np.sqrt(np.sum(np.abs(d) ** 2)))
            theta, phi, val = _best_rotation(a, b, d)
            if val >= current:
                continue
            c, s, e = math.cos(theta), math.sin(theta), complex(math.cos(phi), math.sin(phi))
            v[i], v[j] = c * u - e * s * w, s * u / e + c * w
    return v


def _takagi_starts(ts: TauSet) -> list[np.ndarray]:
    """Decompositions that diagonalize tau = sum z_alpha T^alpha.

    With tau = U diag(s) U^T, V = U^H gives V tau V^T = diag(s); multiplying
    rows 2..r by i flips the signs of s_2..s_r, which is the starting point
    of the optimal two-qubit construction.
    """
    z = ts.quasi_pure_z()
    if z is None:
        z = np.eye(ts.matrices.shape[0])[0]
    tau = ts.combine(z)
    if not np.any(tau):
        return []
    s, u = takagi(0.5 * (tau + tau.T))
    v = u.conj().T
    phased = v.copy()
    phased[1:] *= 1j
    out = [v, phased]
    if s.size > 1 and s[0] <= s[1:].sum():
        out.append(_closing_start(s, v))
    elif s.size > 1:
        out.append(_equalizing_rotation(np.concatenate([s[:1], -s[1:]])) @ phased)
    return out


def _equalizing_rotation(d: np.ndarray) -> np.ndarray:
    """Real orthogonal O with every diagonal entry of O diag(d) O^T equal to mean(d).

    Each plane rotation fixes one entry at the mean, pairing an entry above
    it with one below, so r - 1 rotations suffice.
    """
    r = d.size
    t = d.mean()
    m = np.diag(d).astype(float)
    o = np.eye(r)
    tol = 1e-15 * max(1.0, np.abs(d).max())
    for _ in range(r - 1):
        diag = np.diag(m)
        hi, lo = int(np.argmax(diag)), int(np.argmin(diag))
        if diag[hi] - t <= tol or t - diag[lo] <= tol:
            break
        p, q, s = m[hi, hi], m[hi, lo], m[lo, lo]

        def entry(th):
            c, sn = math.cos(th), math.sin(th)
            return c * c * p - 2 * c * sn * q + sn * sn * s

        a, b = 0.0, math.pi / 2  # entry(a) = p > t > s = entry(b)
        for _ in range(80):
            mid = 0.5 * (a + b)
            a, b = (mid, b) if entry(mid) > t else (a, mid)
        c, sn = math.cos(a), math.sin(a)
        g = np.eye(r)
        g[hi, hi], g[hi, lo], g[lo, hi], g[lo, lo] = c, -sn, sn, c
        m = g @ m @ g.T
        o = g @ o
    return o


def _closing_phases(s: np.ndarray) -> np.ndarray:
    """Angles with sum_j s_j exp(i theta_j) = 0, given s_0 = max <= sum of the rest.

    The rest are split greedily into two groups so that s_0 and the two
    group sums form a triangle; each group shares one angle.
    """
    groups = ([], [])
    sums = [0.0, 0.0]
    for j in range(1, s.size):
        g = 0 if sums[0] <= sums[1] else 1
        groups[g].append(j)
        sums[g] += s[j]
    a, b, c = s[0], sums[0], sums[1]
    theta = np.zeros(s.size)
    if c == 0.0:
        theta[groups[0]] = np.pi
        return theta
    gamma = math.acos(min(1.0, max(-1.0, (b * b - a * a - c * c) / (2 * a * c))))
    beta = np.angle(-(a + c * np.exp(1j * gamma)))
    theta[groups[0]] = beta
    theta[groups[1]] = gamma
    return theta


def _closing_start(s: np.ndarray, v: np.ndarray) -> np.ndarray:
    """k x r left-unitary whose states all have zero concurrence for this tau.

    Rows are normalized-Hadamard mixtures of the phased Takagi states, so
    every diagonal entry of V tau V^T equals sum_j s_j exp(i theta_j) / k = 0.
    """
    r = s.size
    k = 1 << (r - 1).bit_length()
    h = np.ones((1, 1))
    while h.shape[0] < k:
        h = np.block([[h, h], [h, -h]])
    h = h / math.sqrt(k)
    phases = np.exp(0.5j * _closing_phases(s))
    return h[:, :r] @ (phases[:, None] * v)


def convex_roof_upper(rho, a: AOperator, trials: int = 20, seed: int = 0, refine: int = 1,
                      max_sweeps: int = 30, tol: float = 1e-10,
                      rank_tol: float = 1e-12) -> ConcurrenceEstimate:
    """Upper bound on the convex roof from sampled decompositions.

    Each trial draws a left-unitary V (k x r, r <= k <= 2r) giving states
    psi_i = sum_j V_ij phi~_j; the cost is sum_i sqrt(sum_alpha |(V T^alpha V^T)_ii|^2).
    The ``refine`` best trials, the eigen-decomposition V = I and the
    Takagi starts of tau are improved by sweeps of pairwise Givens
    rotations until a sweep gains less than ``tol``.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    ts = tau_matrices(rho, a, rank_tol)
    mats, r = ts.matrices, ts.rank
    rng = np.random.default_rng(seed)
    starts = [np.eye(r, dtype=complex)] + _takagi_starts(ts)
    n_fixed = len(starts)
    for _ in range(trials):
        starts.append(_random_left_unitary(rng, int(rng.integers(r, 2 * r + 1)), r))
    scored = sorted(((_roof_value(v, mats), idx) for idx, v in enumerate(starts)))
    best = scored[0][0]
    zq = ts.quasi_pure_z()
    floor = _algebraic_bound(ts.combine(zq)) if zq is not None else 0.0
    # the roof never drops below the algebraic bound, so reaching it ends the search
    if r > 1 and best - floor > tol:
        chosen = sorted({idx for _, idx in scored[:max(refine, 0)]} | set(range(n_fixed)))
        for idx in chosen:
            v = starts[idx].copy()
            val = _roof_value(v, mats)
            for _ in range(max_sweeps):
                v = _sweep(v, mats)
                new = _roof_value(v, mats)
                if val - new < tol:
                    val = min(val, new)
                    break
                val = new
            best = min(best, val)
            if best - floor <= tol:
                break
    return ConcurrenceEstimate(best, "sampled-upper")
