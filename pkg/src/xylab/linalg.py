"""Dense complex linear algebra for small qubit registers.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; states are 1-D
arrays of length ``2**n``.  Qubit 1 is the most significant bit of a basis
index, so ``|0011>`` is index 3 and kets read left to right.

The eigensolver is a Householder reduction to a real tridiagonal matrix
followed by implicit-shift QL.  Singular values come from the Hermitian
eigenvalues of the Jordan-Wielandt embedding ``[[0, m], [m^H, 0]]``, which
keeps absolute accuracy for small singular values (the route through
``m^H m`` would square the condition number).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable

import numpy as np

from .errors import ContractError, ConvergenceError, DimensionError, DomainError

DIM_CAP = 2**12

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues with column-orthonormal eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __iter__(self):
        yield self.eigenvalues
        yield self.eigenvectors

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.size == 0:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ContractError("matrix has non-finite entries")
    return a


def num_qubits(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 2 or 2**n != dim:
        raise DimensionError(f"dimension {dim} is not a power of two")
    return n


def kron(a, b, cap: int = DIM_CAP) -> np.ndarray:
    """Kronecker product with the qubit-1-most-significant ordering."""
    a = as_matrix(a)
    b = as_matrix(b)
    rows, cols = a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]
    if max(rows, cols) > cap:
        raise DimensionError(f"kron result {rows}x{cols} exceeds cap {cap}")
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(rows, cols)


def kron_all(factors: Iterable, cap: int = DIM_CAP) -> np.ndarray:
    return reduce(lambda x, y: kron(x, y, cap), factors)


def site_operator(op, site: int, n: int) -> np.ndarray:
    """Embed a single-qubit operator at 1-based ``site`` of an n-qubit register."""
    if not 1 <= site <= n:
        raise DomainError(f"site {site} outside 1..{n}")
    return kron_all([op if k == site else I2 for k in range(1, n + 1)])


def ket(bits: str) -> np.ndarray:
    """Computational basis state from a bit string such as ``"0110"``."""
    if not bits or set(bits) - {"0", "1"}:
        raise DomainError(f"not a bit string: {bits!r}")
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def normalize(psi) -> np.ndarray:
    v = np.asarray(psi, dtype=complex).ravel()
    peak = np.abs(v).max() if v.size else 0.0
    if peak == 0 or not np.isfinite(peak):
        raise ContractError("cannot normalize a zero or non-finite vector")
    # exact power-of-two rescale keeps the squared norm clear of under/overflow
    e = -math.frexp(float(peak))[1]
    v = np.ldexp(v.real, e) + 1j * np.ldexp(v.imag, e)
    return v / np.linalg.norm(v)


def as_state(psi, tol: float = 1e-12) -> np.ndarray:
    """Validate a normalized n-qubit state vector and return it as complex."""
    v = np.asarray(psi, dtype=complex).ravel()
    num_qubits(v.size)
    if not np.all(np.isfinite(v)):
        raise ContractError("state has non-finite amplitudes")
    if abs(np.linalg.norm(v) - 1.0) > tol:
        raise ContractError(f"state norm {np.linalg.norm(v)!r} is not 1")
    return v


def conjugate_state(psi) -> np.ndarray:
    """Entrywise complex conjugate in the computational basis."""
    return np.conj(np.asarray(psi, dtype=complex))


def partial_trace(rho, keep: Iterable[int]) -> np.ndarray:
    """Reduced density matrix on the 1-based qubits in ``keep``.

    Kept qubits appear in ascending order in the result.
    """
    rho = as_matrix(rho)
    if rho.shape[0] != rho.shape[1]:
        raise DimensionError("partial_trace needs a square matrix")
    n = num_qubits(rho.shape[0])
    keep = sorted(set(int(k) for k in keep))
    if not keep or len(keep) == n:
        raise DomainError("keep must be a nonempty proper subset of the qubits")
    if keep[0] < 1 or keep[-1] > n:
        raise DomainError(f"qubit index outside 1..{n}")
    kept = [k - 1 for k in keep]
    traced = [k for k in range(n) if k not in kept]
    t = rho.reshape([2] * (2 * n))
    perm = kept + traced + [n + k for k in kept] + [n + k for k in traced]
    dk, dt = 2 ** len(kept), 2 ** len(traced)
    t = t.transpose(perm).reshape(dk, dt, dk, dt)
    return np.einsum("ajbj->ab", t)


def orthonormalize_columns(m) -> np.ndarray:
    """Modified Gram-Schmidt on the columns of ``m`` (two passes)."""
    q = np.array(m, dtype=complex)
    scale = np.linalg.norm(q, axis=0)
    for p in range(2):
        for j in range(q.shape[1]):
            for i in range(j):
                q[:, j] -= np.vdot(q[:, i], q[:, j]) * q[:, i]
            nrm = np.linalg.norm(q[:, j])
            if nrm == 0 or (p == 0 and nrm <= 1e-10 * scale[j]):
                raise ContractError("columns are linearly dependent")
            q[:, j] /= nrm
    return q


def _tridiagonalize(a: np.ndarray, want_q: bool = True):
    """Householder reduction: returns (diag, offdiag, q) with a = q T q^H, T real."""
    a = a.copy()
    n = a.shape[0]
    q = np.eye(n, dtype=complex)
    for k in range(n - 2):
        x = a[k + 1 :, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        phase = np.exp(1j * np.angle(x[0])) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        a[k + 1 :, :] -= 2.0 * np.outer(v, v.conj() @ a[k + 1 :, :])
        a[:, k + 1 :] -= 2.0 * np.outer(a[:, k + 1 :] @ v, v.conj())
        if want_q:
            q[:, k + 1 :] -= 2.0 * np.outer(q[:, k + 1 :] @ v, v.conj())
    sub = np.array([a[k + 1, k] for k in range(n - 1)])
    # diagonal phase similarity makes the subdiagonal real and nonnegative
    d = np.ones(n, dtype=complex)
    for k in range(n - 1):
        mag = abs(sub[k])
        d[k + 1] = d[k] * np.exp(1j * np.angle(sub[k])) if mag > 0 else d[k]
    return np.real(np.diag(a)).copy(), np.abs(sub), q * d


def _tql(d: np.ndarray, e: np.ndarray, zt, max_iter: int = 60) -> None:
    """Implicit-shift QL on a real symmetric tridiagonal matrix, in place.

    ``e[i]`` couples ``d[i]`` and ``d[i+1]``; rows of ``zt`` are the
    accumulated eigenvectors (pass None for eigenvalues only).
    """
    n = d.size
    out = d
    # plain floats: scalar arithmetic on numpy elements is several times slower
    d = d.tolist()
    e = e.tolist() + [0.0]
    # absolute floor: couplings below eps^2 * ||T|| move eigenvalues by less
    # than that, and strongly graded inputs otherwise converge very slowly
    floor = _EPS * _EPS * max(max(map(abs, d)), max(map(abs, e)))
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd or abs(e[m]) <= floor:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_iter:
                raise ConvergenceError("QL iteration did not converge")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            restart = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    restart = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if zt is None:
                    i -= 1
                    continue
                row = zt[i + 1].copy()
                zt[i + 1] = s * zt[i] + c * row
                zt[i] = c * zt[i] - s * row
                i -= 1
            if restart:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    out[:] = d


def hermitian_eig(m, herm_tol: float = 1e-10) -> SpectralDecomposition:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues ascending."""
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise DimensionError("hermitian_eig needs a square matrix")
    scale = np.linalg.norm(a)
    if np.linalg.norm(a - a.conj().T) > herm_tol * max(scale, np.finfo(float).tiny):
        raise ContractError("matrix is not Hermitian")
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    if n == 1:
        return SpectralDecomposition(np.real(a[0]).copy(), np.ones((1, 1), dtype=complex))
    # power-of-two scaling is exact; subnormal entries would upset the rotations
    peak = float(np.abs(a).max())
    if peak == 0.0:
        return SpectralDecomposition(np.zeros(n), np.eye(n, dtype=complex))
    s2 = 2.0 ** -math.frexp(peak)[1]
    a = a * s2
    a[np.abs(a) < 1e-290] = 0.0
    d, e, q = _tridiagonalize(a)
    zt = np.eye(n)
    _tql(d, e, zt)
    order = np.argsort(d, kind="stable")
    vals = d[order] / s2
    vecs = q @ zt[order].T
    # clusters of nearly equal eigenvalues get re-orthonormalized together
    gap_tol = 1e-9 * max(scale, 1.0)
    start = 0
    for k in range(1, n + 1):
        if k == n or vals[k] - vals[k - 1] >= gap_tol:
            if k - start > 1:
                vecs[:, start:k] = orthonormalize_columns(vecs[:, start:k])
            start = k
    return SpectralDecomposition(vals, vecs)


def hermitian_eigvals(m) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix, without eigenvectors."""
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise DimensionError("hermitian_eigvals needs a square matrix")
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    peak = float(np.abs(a).max()) if a.size else 0.0
    if peak == 0.0:
        return np.zeros(n)
    s2 = 2.0 ** -math.frexp(peak)[1]
    a = a * s2
    a[np.abs(a) < 1e-290] = 0.0
    if n == 1:
        return np.real(a[0]) / s2
    d, e, _ = _tridiagonalize(a, want_q=False)
    _tql(d, e, None)
    return np.sort(d) / s2


def singular_values(m) -> np.ndarray:
    """Singular values in descending order."""
    a = as_matrix(m)
    r, c = a.shape
    k = min(r, c)
    if not np.any(a):
        return np.zeros(k)
    w = np.zeros((r + c, r + c), dtype=complex)
    w[:r, r:] = a
    w[r:, :r] = a.conj().T
    vals = hermitian_eigvals(w)
    return np.clip(vals[::-1][:k], 0.0, None)


def sqrtm_psd(m, tol: float = 1e-10) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix."""
    vals, vecs = hermitian_eig(m)
    if vals[0] < -tol * max(1.0, abs(vals[-1])):
        raise ContractError("matrix is not positive semidefinite")
    return (vecs * np.sqrt(np.clip(vals, 0.0, None))) @ vecs.conj().T


def takagi(m, tol: float = 1e-13):
    """Takagi factorization of a complex symmetric matrix: m = U diag(s) U^T.

    With m = A + iB and u = x + iy, ``m conj(u) = s u`` is the real symmetric
    eigenproblem [[A, B], [B, -A]] [x; y] = s [x; y], whose spectrum is
    {+s_k, -s_k}.  Vectors for zero singular values span ker(conj(m)) and are
    completed by Gram-Schmidt.  Returns (s descending, U unitary).
    """
    m = as_matrix(m)
    r = m.shape[0]
    if m.shape != (r, r) or np.linalg.norm(m - m.T) > 1e-10 * max(1.0, np.linalg.norm(m)):
        raise ContractError("takagi needs a square complex symmetric matrix")
    a, b = m.real, m.imag
    vals, vecs = hermitian_eig(np.block([[a, b], [b, -a]]))
    scale = max(vals[-1], np.finfo(float).tiny)
    top = [k for k in range(2 * r - 1, -1, -1) if vals[k] > tol * scale][:r]
    u = vecs[:r, top].real + 1j * vecs[r:, top].real
    s = vals[top]
    if len(top) < r:
        # complete with an orthonormal basis of the orthogonal complement
        cols = [u[:, j] for j in range(u.shape[1])]
        for e in np.eye(r, dtype=complex):
            w = e - sum(np.vdot(c, e) * c for c in cols)
            if np.linalg.norm(w) > 1e-6:
                cols.append(w / np.linalg.norm(w))
            if len(cols) == r:
                break
        u = orthonormalize_columns(np.array(cols).T)
        s = np.concatenate([s, np.zeros(r - len(top))])
    return np.clip(s, 0.0, None), u
