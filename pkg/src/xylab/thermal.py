"""Gibbs states of the XY ring, partition functions and zero-temperature limits.

Boltzmann factors are always taken relative to the lowest energy,
``exp(-beta (E_i - E_min))``, so beta * eta * J of order 1e5 is harmless.
The true partition function is ``partition * exp(-beta * energy_shift)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError
from .linalg import SpectralDecomposition, hermitian_eig
from .model import (ModelParams, build_hamiltonian, closed_form_eigensystem,
                    closed_form_energies, omegas)

DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class ThermalEnsemble:
    """Weights and eigenvectors of ``chi = sum_i w_i |phi_i><phi_i|``."""

    beta: float
    energies: np.ndarray
    weights: np.ndarray
    eigenvectors: np.ndarray
    partition: float
    energy_shift: float
    labels: tuple = ()

    @property
    def temperature(self) -> float:
        if self.beta == math.inf:
            return 0.0
        return math.inf if self.beta == 0 else 1.0 / self.beta

    @property
    def log_partition(self) -> float:
        if self.beta == math.inf:
            return math.nan
        return math.log(self.partition) - self.beta * self.energy_shift

    @cached_property
    def chi(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.weights) @ v.conj().T

    def ground_weight(self) -> float:
        return float(self.weights[int(np.argmin(self.energies))])

    def weight_of(self, label: str) -> float:
        return float(self.weights[self.labels.index(label)])


def _ground_mask(energies: np.ndarray, tol: float) -> np.ndarray:
    e_min = energies.min()
    return energies - e_min <= tol * max(1.0, abs(e_min))


def thermal_state(spectrum: SpectralDecomposition, temperature: float, labels=(),
                  tol: float = DEGENERACY_TOL) -> ThermalEnsemble:
    """Gibbs ensemble at temperature T (k = 1).

    ``T = 0`` gives the equal mixture of the ground manifold (energies within
    ``tol * max(1, |E_min|)`` of the minimum); ``T = inf`` the maximally
    mixed state.
    """
    energies = np.asarray(spectrum.eigenvalues, dtype=float)
    vecs = np.asarray(spectrum.eigenvectors)
    if not temperature >= 0:
        raise DomainError(f"temperature must be >= 0, got {temperature}")
    shift = float(energies.min())
    if temperature == 0:
        mask = _ground_mask(energies, tol)
        factors = mask.astype(float)
        beta = math.inf
    else:
        beta = 1.0 / temperature
        factors = np.exp(-beta * (energies - shift))
    z = float(factors.sum())
    return ThermalEnsemble(beta, energies, factors / z, vecs, z, shift, tuple(labels))


def model_spectrum(p: ModelParams, closed: bool | None = None):
    """(SpectralDecomposition, labels), from closed forms when available."""
    if closed is None:
        closed = p.n_qubits in (2, 4)
    if closed:
        pairs = closed_form_eigensystem(p)
        spectrum = SpectralDecomposition(np.array([e.energy for e in pairs]),
                                     np.array([e.state for e in pairs]).T)
        return spectrum, tuple(e.label for e in pairs)
    spectrum = hermitian_eig(build_hamiltonian(p))
    return spectrum, ()


def thermal_ensemble(p: ModelParams, temperature: float, closed: bool | None = None) -> ThermalEnsemble:
    spectrum, labels = model_spectrum(p, closed)
    return thermal_state(spectrum, temperature, labels)


def _cosh(x: float) -> float:
    with np.errstate(over="ignore"):
        return float(np.cosh(x))


def partition_function_closed(p: ModelParams, temperature: float) -> float:
    """Z_2 or Z_4 from the closed forms (may overflow to inf at large beta*eta)."""
    if not temperature > 0:
        raise DomainError("closed-form partition functions need T > 0")
    b, J, g, eta = 1.0 / temperature, p.coupling, p.gamma, p.eta
    if p.n_qubits == 2:
        return 2.0 * _cosh(b * math.hypot(eta, g) * J) + 2.0 * _cosh(b * J)
    if p.n_qubits == 4:
        w_plus, w_minus = omegas(g, eta)
        s = math.hypot(eta, 2.0 * g)
        return (4.0 + 4.0 * _cosh(b * eta * J) + 2.0 * _cosh(b * (s + 2.0) * J)
                + 2.0 * _cosh(b * (s - 2.0) * J) + 2.0 * _cosh(b * w_plus * J)
                + 2.0 * _cosh(b * w_minus * J))
    raise DomainError("closed-form partition functions exist for n = 2 and n = 4")


def _exp_cosh(a: float, x: float) -> float:
    """exp(-a) cosh(x) without forming cosh(x) on its own."""
    return 0.5 * (math.exp(abs(x) - a) + math.exp(-abs(x) - a))


def w3_closed(p: ModelParams, temperature: float) -> float:
    """Weight of |Phi3> (energy -B) in the two-qubit Gibbs state."""
    if p.n_qubits != 2:
        raise DomainError("w3 is defined for n = 2")
    b, J = 1.0 / temperature, p.coupling
    big_b = math.hypot(p.eta, p.gamma) * J
    return 1.0 / (1.0 + math.exp(-2 * b * big_b) + math.exp(-b * (big_b - J))
                  + math.exp(-b * (big_b + J)))


def xi_closed(p: ModelParams, temperature: float) -> float:
    """xi = 1 / w15, term by term; each exp(-b w) cosh(b x) is fused."""
    if p.n_qubits != 4:
        raise DomainError("xi is defined for n = 4")
    b, J, g, eta = 1.0 / temperature, p.coupling, p.gamma, p.eta
    w_plus, w_minus = omegas(g, eta)
    s = math.hypot(eta, 2.0 * g)
    a = b * w_plus * J
    return (1.0 + math.exp(-2 * a) + 4 * math.exp(-a) + 4 * _exp_cosh(a, b * eta * J)
            + 2 * _exp_cosh(a, b * (s + 2) * J) + 2 * _exp_cosh(a, b * (s - 2) * J)
            + 2 * _exp_cosh(a, b * w_minus * J))


def ground_weight(p: ModelParams, temperature: float) -> float:
    """Gibbs weight of the lowest-energy eigenstate, 1 / sum exp(-b (E_i - E_g))."""
    if not temperature > 0:
        raise DomainError("ground_weight needs T > 0")
    if p.n_qubits in (2, 4):
        energies = closed_form_energies(p)
    elif p.n_qubits == 6:
        energies = hermitian_eig(build_hamiltonian(p)).eigenvalues
    else:
        raise DomainError("ground_weight supports n = 2, 4, 6")
    e = np.sort(energies)
    return float(1.0 / np.exp(-(e - e[0]) / temperature).sum())


def zero_temperature_state(p: ModelParams, tol: float = DEGENERACY_TOL) -> np.ndarray:
    """Density matrix of the beta -> inf limit (equal mixture on exact ties)."""
    if p.n_qubits not in (2, 4):
        raise DomainError("zero_temperature_state supports n = 2 and n = 4")
    spectrum, labels = model_spectrum(p, closed=True)
    return thermal_state(spectrum, 0.0, labels, tol).chi


def ground_labels(p: ModelParams, tol: float = DEGENERACY_TOL) -> tuple[str, ...]:
    """Labels of the closed-form states in the ground manifold."""
    spectrum, labels = model_spectrum(p, closed=True)
    mask = _ground_mask(np.asarray(spectrum.eigenvalues), tol)
    return tuple(l for l, m in zip(labels, mask) if m)
