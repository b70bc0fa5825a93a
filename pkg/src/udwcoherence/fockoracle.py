"""Exact single-mode oracle on a truncated Fock space.

The continuum smeared-field operator is replaced by ``Phi = p a + q a^dagger`` on one
bosonic mode of frequency omega. Delta coupling makes Phi Hermitian (q = conj(p)),
and the qubit-field unitary ``I cos(lambda Phi) - i sigma_x sin(lambda Phi)`` can then
be applied exactly. These identities hold for any Hermitian Phi and any field state,
so one mode suffices to check them.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import List, Tuple

import numpy as np

__all__ = [
    "TruncationError",
    "OracleInconsistencyError",
    "FockOracleConfig",
    "build_operators",
    "coherent_state",
    "matrix_function",
    "delta_channel",
    "coherence_of_qubit",
    "catalysis_check",
    "delta_energy_cost",
    "perturbative_update",
    "second_order_energy_change",
    "ground_projector",
    "validate_qubit_state",
    "validate_field_state",
]

LEAKAGE_LIMIT = 1e-10
GROWTH_LIMIT = 1e-8


class TruncationError(RuntimeError):
    pass


class OracleInconsistencyError(AssertionError):
    pass


@dataclass(frozen=True)
class FockOracleConfig:
    truncation: int = 48
    mode_frequency: float = 1.0
    amp_annihilate: complex = 0.2
    amp_create: complex = 0.2
    coherent_alpha: complex = 1.0
    coupling: float = 0.1
    detector_gap: float = 1.0

    def __post_init__(self):
        if int(self.truncation) != self.truncation or self.truncation < 8:
            raise ValueError("truncation must be an integer >= 8")
        if not self.mode_frequency > 0:
            raise ValueError("mode_frequency must be positive")
        if self.coupling < 0:
            raise ValueError("coupling must be non-negative")
        if abs(self.coherent_alpha) ** 2 > self.truncation / 4:
            warnings.warn("|alpha|^2 exceeds truncation/4; the coherent state may be poorly captured",
                          RuntimeWarning, stacklevel=3)

    @property
    def hermitian(self) -> bool:
        return abs(self.amp_create - np.conj(self.amp_annihilate)) < 1e-15

    @property
    def commutator(self) -> float:
        """``[Phi, Phi^dagger] = |p|^2 - |q|^2`` on the untruncated space."""
        return abs(self.amp_annihilate) ** 2 - abs(self.amp_create) ** 2

    def with_(self, **changes) -> "FockOracleConfig":
        return replace(self, **changes)


def annihilation(N: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, N, dtype=float)), k=1).astype(complex)


def _poisson_tail(mean: float, N: int) -> float:
    """``P(X >= N)`` for a Poisson variable, summed upward to avoid cancellation."""
    if mean == 0:
        return 0.0
    log_mean = math.log(mean)
    terms = [math.exp(j * log_mean - mean - math.lgamma(j + 1)) for j in range(N, N + 400)]
    return math.fsum(terms)


def coherent_state(alpha: complex, N: int) -> np.ndarray:
    """Truncated coherent state vector, renormalised; raises if the lost tail is too heavy."""
    tail = _poisson_tail(abs(alpha) ** 2, N)
    if tail > LEAKAGE_LIMIT:
        raise TruncationError(f"coherent state alpha={alpha} loses {tail:.3e} probability at N={N}")
    k = np.arange(N)
    log_fact = np.array([math.lgamma(j + 1) for j in k])
    if alpha == 0:
        vec = np.zeros(N, dtype=complex)
        vec[0] = 1.0
        return vec
    vec = np.exp(k * np.log(complex(alpha)) - 0.5 * log_fact)
    return vec / np.linalg.norm(vec)


def build_operators(config: FockOracleConfig) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (Phi, H_field, sigma) for the configuration; sigma is the coherent-state density matrix."""
    N = config.truncation
    a = annihilation(N)
    phi = config.amp_annihilate * a + config.amp_create * a.conj().T
    H = config.mode_frequency * (a.conj().T @ a)
    psi = coherent_state(config.coherent_alpha, N)
    return phi, H, np.outer(psi, psi.conj())


def matrix_function(hermitian: np.ndarray, fn) -> np.ndarray:
    w, V = np.linalg.eigh(hermitian)
    return (V * fn(w)) @ V.conj().T


def ground_projector() -> np.ndarray:
    return np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)


def _validate_density(rho: np.ndarray, trace_tol: float, what: str) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"{what} must be a square matrix")
    if not np.allclose(rho, rho.conj().T, atol=1e-12, rtol=0):
        raise ValueError(f"{what} is not Hermitian")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"{what} has trace {tr!r}")
    low = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()
    if low < -1e-12:
        raise ValueError(f"{what} has negative eigenvalue {low!r}")
    return rho


def validate_qubit_state(rho: np.ndarray) -> np.ndarray:
    """Check a 2x2 density matrix: Hermitian, unit trace within 1e-12, eigenvalues >= -1e-12."""
    rho = np.asarray(rho)
    if rho.shape != (2, 2):
        raise ValueError("expected a 2x2 density matrix")
    return _validate_density(rho, 1e-12, "qubit state")


def validate_field_state(sigma: np.ndarray) -> np.ndarray:
    """Check a Fock-basis density matrix: unit trace within 1e-10."""
    return _validate_density(sigma, 1e-10, "field state")


def _check_hermitian(phi: np.ndarray):
    if not np.allclose(phi, phi.conj().T, atol=1e-14, rtol=0):
        raise ValueError("delta coupling requires a Hermitian Phi")


def delta_channel(coupling: float, phi: np.ndarray, sigma: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Apply the instantaneous interaction to |g><g| (x) sigma.

    Returns the qubit state in the (g, e) basis and the post-harvest field state.
    """
    _check_hermitian(phi)
    c = matrix_function(phi, lambda w: np.cos(coupling * w))
    s = matrix_function(phi, lambda w: np.sin(coupling * w))
    s2 = matrix_function(phi, lambda w: np.sin(2.0 * coupling * w))
    off = 0.5j * np.trace(s2 @ sigma)
    rho = np.array([[np.trace(c @ c @ sigma), off],
                    [np.conj(off), np.trace(s @ s @ sigma)]], dtype=complex)
    sigma_out = c @ sigma @ c + s @ sigma @ s
    return rho, sigma_out


def coherence_of_qubit(rho: np.ndarray) -> float:
    """l1-norm of coherence of a qubit, ``2 |rho_eg|``."""
    rho = np.asarray(rho)
    if rho.shape != (2, 2):
        raise ValueError("expected a 2x2 density matrix")
    return 2.0 * abs(rho[1, 0])


def _edge_population(sigma: np.ndarray, levels: int = 2) -> float:
    return float(np.real(np.trace(sigma[-levels:, -levels:])))


def catalysis_check(config: FockOracleConfig, repetitions: int, tolerance: float = 1e-12) -> List[float]:
    """Harvest onto ``repetitions`` fresh ground-state qubits from one evolving field.

    Raises OracleInconsistencyError if any harvest differs from the first by more
    than ``tolerance``, and TruncationError if population reaches the Fock cutoff.
    """
    if not config.hermitian:
        raise ValueError("catalysis requires a Hermitian Phi (amp_create = conj(amp_annihilate))")
    phi, _, sigma = build_operators(config)
    edge0 = _edge_population(sigma)
    values = []
    for _ in range(repetitions):
        rho, sigma = delta_channel(config.coupling, phi, sigma)
        values.append(coherence_of_qubit(rho))
        if _edge_population(sigma) - edge0 > GROWTH_LIMIT:
            raise TruncationError("field population reached the truncation edge")
    spread = max(abs(v - values[0]) for v in values)
    if spread > tolerance:
        raise OracleInconsistencyError(f"harvested coherence drifted by {spread:.3e}")
    return values


def delta_energy_cost(config: FockOracleConfig, tolerance: float = 1e-9) -> float:
    """Energy supplied by one delta-coupled harvest, computed directly.

    Checked against ``gap tr(sin^2(lambda Phi) sigma) + c^2 lambda^2 / 2`` with
    ``c^2 = 2 omega |p|^2`` for ``Phi = p a + conj(p) a^dagger``.
    """
    if not config.hermitian:
        raise ValueError("the delta channel requires a Hermitian Phi")
    phi, H, sigma = build_operators(config)
    lam = config.coupling
    rho, sigma_out = delta_channel(lam, phi, sigma)
    H_det = 0.5 * config.detector_gap * np.diag([-1.0, 1.0])
    direct = (np.trace(H_det @ (rho - ground_projector())) + np.trace(H @ (sigma_out - sigma))).real
    s = matrix_function(phi, lambda w: np.sin(lam * w))
    c_squared = 2.0 * config.mode_frequency * abs(config.amp_annihilate) ** 2
    formula = (config.detector_gap * np.trace(s @ s @ sigma)).real + 0.5 * c_squared * lam * lam
    if abs(direct - formula) > tolerance:
        raise OracleInconsistencyError(f"energy cost mismatch: direct={direct!r}, formula={formula!r}")
    if lam > 0 and not direct > 0:
        raise OracleInconsistencyError(f"energy cost is not positive: {direct!r}")
    return float(direct)


def perturbative_update(config: FockOracleConfig, steps: int) -> List[float]:
    """Coherence of successive harvests under the second-order field update.

    ``sigma <- sigma + lambda^2 (Phi^dag sigma Phi - {Phi Phi^dag, sigma}/2)`` and
    ``C = 2 lambda |tr(Phi sigma)|``. Phi need not be Hermitian.
    """
    phi, _, sigma = build_operators(config)
    lam = config.coupling
    phid = phi.conj().T
    outer = phi @ phid
    trace0 = np.trace(sigma).real
    series = []
    for _ in range(steps):
        series.append(2.0 * lam * abs(np.trace(phi @ sigma)))
        sigma = sigma + lam ** 2 * (phid @ sigma @ phi - 0.5 * (outer @ sigma + sigma @ outer))
    drift = abs(np.trace(sigma).real - trace0)
    if drift > max(lam ** 4, 1e-12):
        warnings.warn(f"trace drifted by {drift:.3e} over {steps} updates", RuntimeWarning, stacklevel=2)
    return series


def second_order_energy_change(config: FockOracleConfig) -> Tuple[float, float]:
    """Field energy change at order lambda^2 under the perturbative update, two ways.

    Returns ``(direct, predicted)`` where ``direct = lambda^2 tr(H D[sigma])`` with the
    Lindblad-like increment ``D``, and ``predicted = lambda^2 (Re(<[Phi,H]> <Phi>^*) +
    omega |p|^2)``: a coherent-amplitude term plus the vacuum term.
    """
    phi, H, sigma = build_operators(config)
    lam = config.coupling
    phid = phi.conj().T
    increment = phid @ sigma @ phi - 0.5 * (phi @ phid @ sigma + sigma @ phi @ phid)
    direct = lam ** 2 * np.trace(H @ increment).real
    mean_phi = np.trace(phi @ sigma)
    mean_comm = np.trace((phi @ H - H @ phi) @ sigma)
    predicted = lam ** 2 * ((mean_comm * np.conj(mean_phi)).real
                            + config.mode_frequency * abs(config.amp_annihilate) ** 2)
    return float(direct), float(predicted)
