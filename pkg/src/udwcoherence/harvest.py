"""Coherence harvested by a static detector and the energy it costs.

Every quantity has two evaluators: a closed form built from parabolic cylinder
functions and a quadrature of the defining mode integral. Outputs are coupling
stripped: coherence in units of the dimensionless coupling, energies in units of
Omega times the coupling squared.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import model
from .model import FieldConfig, SwitchingProfile, check_dimension, effective_scale
from .quadrature import DEFAULT_SPEC, IntegralResult, QuadratureSpec, integrate_polar, \
    integrate_semi_infinite
from .specfun import gamma, pcf, unit_sphere_area

__all__ = [
    "EvaluationPath",
    "HarvestResult",
    "UndefinedRatioError",
    "QuadratureFailure",
    "gaussian_parameters",
    "coherence_static_closed",
    "coherence_static_quadrature",
    "coherence_static",
    "energy_cost_coherent",
    "energy_cost_vacuum",
    "commutator_term",
    "coherence_upper_bound",
    "harvest",
]


class EvaluationPath(str, enum.Enum):
    CLOSED_FORM = "closed-form"
    QUADRATURE = "quadrature"


class UndefinedRatioError(ArithmeticError):
    """The coherent energy cost is a ratio with the harvested coherence in the denominator."""


class QuadratureFailure(ArithmeticError):
    pass


@dataclass(frozen=True)
class HarvestResult:
    coherence: float
    delta_e_coh: float
    delta_e_vac: float
    commutator_term: float
    path: EvaluationPath

    @property
    def total_energy_cost(self) -> float:
        return self.delta_e_coh + self.delta_e_vac


def _checked(result: IntegralResult, what: str) -> float:
    if not result.converged:
        raise QuadratureFailure(f"{what}: quadrature did not converge "
                                f"(value={result.value!r}, error={result.error_estimate!r})")
    return result.value


def gaussian_parameters(n: int, energy: float, duration: float, radius: float):
    """Return the Gaussian exponent ``a`` and linear rate ``b`` of the radial integrand."""
    En = effective_scale(n, energy)
    Rn = effective_scale(n, radius)
    En2 = En * En
    if En2 == 0.0:
        return math.inf, math.pi * duration * duration / 2.0
    a = 1.0 / (2.0 * math.pi * En2) + math.pi * (Rn * Rn + duration * duration) / 4.0
    b = math.pi * duration * duration / 2.0
    return a, b


def _log_prefactor(n: int, En: float) -> float:
    return math.log(4.0 * unit_sphere_area(n)) - 0.5 * (math.log(2.0) + n * math.log(2.0 * math.pi ** 2 * En))


# ---------------------------------------------------------------------------
# closed forms

def coherence_static_closed(n: int, field: FieldConfig, switching: SwitchingProfile,
                            R: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Harvested coherence C/lambda for a static detector, via parabolic cylinder functions."""
    check_dimension(n)
    if field.mean_energy == 0:
        return 0.0
    T = switching.mean_duration
    En = effective_scale(n, field.mean_energy)
    a, b = gaussian_parameters(n, field.mean_energy, T, R)
    if math.isinf(a):
        return 0.0  # below the double-precision range
    # logarithms keep a^(-power) finite for very weak fields
    log_pref = _log_prefactor(n, En) - math.pi * T * T / 4.0
    if switching.is_delta:
        if field.phase_r == 0:
            return 0.0
        # b -> 0 limit: a plain Gaussian moment
        return math.exp(log_pref + math.lgamma(n / 2 + 0.25) - math.log(2.0) - (n / 2 + 0.25) * math.log(a))
    nu = n + 0.5
    z = b / math.sqrt(2.0 * a)
    sign = -1.0 if field.phase_r == 0 else 1.0
    bracket = pcf(-nu, -z, spec) + sign * pcf(-nu, z, spec)
    log_integral = math.lgamma(nu) - math.log(2.0) - nu / 2 * math.log(2.0 * a) + b * b / (8.0 * a)
    return math.exp(log_pref + log_integral) * abs(bracket)


def _energy_ratio_closed(n: int, field: FieldConfig, switching: SwitchingProfile, R: float,
                         spec: QuadratureSpec) -> float:
    """Re <[Phi, H]> / <Phi> for the Gaussian protocol."""
    if switching.is_delta:
        return 0.0
    a, b = gaussian_parameters(n, field.mean_energy, switching.mean_duration, R)
    z = b / math.sqrt(2.0 * a)
    sign = 1.0 if field.phase_r == 0 else -1.0
    num = pcf(-n - 1.5, -z, spec) + sign * pcf(-n - 1.5, z, spec)
    den = pcf(-n - 0.5, -z, spec) - sign * pcf(-n - 0.5, z, spec)
    return -(n + 0.5) / math.sqrt(2.0 * a) * num / den


def _vacuum_parameters(n: int, switching: SwitchingProfile, R: float):
    T = switching.mean_duration
    Rn = effective_scale(n, R)
    a_prime = math.pi * (Rn * Rn + T * T) / 2.0
    if a_prime == 0:
        raise ValueError("a pointlike detector with instantaneous switching has a UV-divergent vacuum cost")
    b = math.pi * T * T / 2.0
    z = 2.0 * b / math.sqrt(2.0 * a_prime)
    common = (unit_sphere_area(n) * gamma(n + 1) / (2.0 * (2.0 * math.pi) ** n * (2.0 * a_prime) ** ((n + 1) / 2))
              * math.exp(-math.pi * T * T / 2.0 + b * b / (2.0 * a_prime)))
    return a_prime, z, common


def _energy_cost_vacuum_closed(n: int, switching: SwitchingProfile, R: float,
                               spec: QuadratureSpec) -> float:
    a_prime, z, common = _vacuum_parameters(n, switching, R)
    return common * ((n + 1) / math.sqrt(2.0 * a_prime) * pcf(-n - 2, z, spec) + pcf(-n - 1, z, spec))


def _commutator_closed(n: int, switching: SwitchingProfile, R: float, spec: QuadratureSpec) -> float:
    if switching.is_delta:
        return 0.0
    _, z, common = _vacuum_parameters(n, switching, R)
    return -common * (pcf(-n - 1, -z, spec) - pcf(-n - 1, z, spec))


# ---------------------------------------------------------------------------
# quadrature of the mode integrals

def _radial_scale(n: int, energy: float, switching: SwitchingProfile, R: float) -> float:
    widths = [math.sqrt(math.pi) * effective_scale(n, energy)] if energy > 0 else []
    Rn = effective_scale(n, R)
    if Rn > 0:
        widths.append(math.sqrt(2.0 / math.pi) / Rn)
    if not switching.is_delta:
        widths.append(math.sqrt(2.0 / math.pi) / switching.mean_duration)
    return 1.0 + 6.0 * min(widths) if widths else 10.0


def _complex_radial(fn, spec: QuadratureSpec, scale: float, what: str) -> complex:
    re = integrate_semi_infinite(lambda k: fn(k).real, spec, scale=scale)
    im = integrate_semi_infinite(lambda k: fn(k).imag, spec, scale=scale)
    return complex(_checked(re, what + " (real part)"), _checked(im, what + " (imaginary part)"))


def _mode_brackets(n: int, amplitude, switching: SwitchingProfile, R: float, spec: QuadratureSpec,
                   scale: float):
    """Radial integrals proportional to <Phi> and <[Phi, H]> for a given amplitude a(k)."""

    def bracket(k, sign):
        k = np.asarray(k, dtype=float)
        a_k = amplitude(k)
        up = np.conj(model.switching_fourier(switching, 1.0 + k))
        down = np.conj(model.switching_fourier(switching, 1.0 - k))
        return model.smearing_fourier(n, R, k) * (a_k * up + sign * np.conj(a_k) * down)

    phi = _complex_radial(lambda k: k ** (n - 0.5) * bracket(k, -1.0), spec, scale, "<Phi>")
    return phi, lambda: _complex_radial(lambda k: k ** (n + 0.5) * bracket(k, +1.0), spec, scale,
                                        "<[Phi,H]>")


def _coherence_prefactor(n: int) -> float:
    return 2.0 * unit_sphere_area(n) / math.sqrt(2.0 * (2.0 * math.pi) ** n)


def coherence_from_amplitude(n: int, amplitude, switching: SwitchingProfile, R: float,
                             spec: QuadratureSpec = DEFAULT_SPEC, scale: float = None) -> float:
    """Static-detector coherence for an arbitrary isotropic amplitude ``a(|k|)`` by quadrature."""
    check_dimension(n, closed_form=False)
    scale = scale if scale is not None else _radial_scale(n, 0.0, switching, R)
    phi, _ = _mode_brackets(n, amplitude, switching, R, spec, scale)
    return _coherence_prefactor(n) * abs(phi)


def coherence_static_quadrature(n: int, field: FieldConfig, switching: SwitchingProfile, R: float,
                                spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Harvested coherence C/lambda by direct quadrature of the mode integral."""
    check_dimension(n, closed_form=False)
    if field.mean_energy == 0:
        return 0.0
    return coherence_from_amplitude(
        n, lambda k: model.coherent_amplitude(n, field, k), switching, R, spec,
        scale=_radial_scale(n, field.mean_energy, switching, R))


def _energy_cost_coherent_quadrature(n, field, switching, R, spec):
    if field.mean_energy == 0:
        raise UndefinedRatioError("no coherence is harvested from a field with zero mean energy")
    phi, commutator = _mode_brackets(n, lambda k: model.coherent_amplitude(n, field, k), switching, R,
                                     spec, _radial_scale(n, field.mean_energy, switching, R))
    if phi == 0:
        raise UndefinedRatioError("harvested coherence vanishes; the coherent cost ratio is undefined")
    C = _coherence_prefactor(n) * abs(phi)
    ratio = (commutator() / phi).real
    return C * C / 4.0 * (1.0 + ratio)


def _radial_real(n, fn, switching, R, spec, what):
    scale = _radial_scale(n, 0.0, switching, R)
    return _checked(integrate_semi_infinite(fn, spec, scale=scale), what)


def _energy_cost_vacuum_quadrature(n, switching, R, spec):
    if R == 0 and switching.is_delta:
        raise ValueError("a pointlike detector with instantaneous switching has a UV-divergent vacuum cost")
    pref = unit_sphere_area(n) / (2.0 * (2.0 * math.pi) ** n)

    def integrand(k):
        F_minus_sq = (k * model.smearing_fourier(n, R, k)
                      * np.abs(model.switching_fourier(switching, 1.0 + k))) ** 2
        return k ** (n - 1) * (1.0 + 1.0 / np.where(k > 0, k, np.inf)) * F_minus_sq

    return pref * _radial_real(n, integrand, switching, R, spec, "vacuum energy")


def _commutator_quadrature(n, switching, R, spec):
    pref = unit_sphere_area(n) / (2.0 * (2.0 * math.pi) ** n)

    def integrand(k):
        F2 = model.smearing_fourier(n, R, k) ** 2
        up = np.abs(model.switching_fourier(switching, 1.0 + k)) ** 2
        down = np.abs(model.switching_fourier(switching, 1.0 - k)) ** 2
        return k ** n * F2 * (up - down)

    return pref * _radial_real(n, integrand, switching, R, spec, "commutator")


# ---------------------------------------------------------------------------
# public dual-path interface

def coherence_static(n: int, field: FieldConfig, switching: SwitchingProfile, R: float,
                     path: EvaluationPath = EvaluationPath.CLOSED_FORM,
                     spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    if EvaluationPath(path) is EvaluationPath.CLOSED_FORM:
        return coherence_static_closed(n, field, switching, R, spec)
    return coherence_static_quadrature(n, field, switching, R, spec)


def energy_cost_coherent(n: int, field: FieldConfig, switching: SwitchingProfile, R: float,
                         path: EvaluationPath = EvaluationPath.CLOSED_FORM,
                         spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Coherent part of the energy cost, ``(C^2/4) (Omega + Re <[Phi,H]>/<Phi>)``.

    Raises UndefinedRatioError when no coherence is harvested.
    """
    check_dimension(n)
    if EvaluationPath(path) is EvaluationPath.QUADRATURE:
        return _energy_cost_coherent_quadrature(n, field, switching, R, spec)
    C = coherence_static_closed(n, field, switching, R, spec)
    if C == 0:
        raise UndefinedRatioError("harvested coherence vanishes; the coherent cost ratio is undefined")
    return C * C / 4.0 * (1.0 + _energy_ratio_closed(n, field, switching, R, spec))


def energy_cost_vacuum(n: int, switching: SwitchingProfile, R: float,
                       path: EvaluationPath = EvaluationPath.CLOSED_FORM,
                       spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Field-state independent cost of switching the interaction on in the vacuum."""
    check_dimension(n)
    if EvaluationPath(path) is EvaluationPath.QUADRATURE:
        return _energy_cost_vacuum_quadrature(n, switching, R, spec)
    return _energy_cost_vacuum_closed(n, switching, R, spec)


def commutator_term(n: int, switching: SwitchingProfile, R: float,
                    path: EvaluationPath = EvaluationPath.CLOSED_FORM,
                    spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """The c-number ``lambda^2 [Phi, Phi^dagger]`` in units of the squared coupling."""
    check_dimension(n)
    if switching.is_delta:
        return 0.0
    if EvaluationPath(path) is EvaluationPath.QUADRATURE:
        return _commutator_quadrature(n, switching, R, spec)
    return _commutator_closed(n, switching, R, spec)


def coherence_upper_bound(n: int, field: FieldConfig, R: float, velocity: float = 0.0,
                          spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Largest coherence any switching can harvest from ``field`` at this speed.

    Integrates ``4 kappa F(kappa) |a(k)| / sqrt((2 pi)^n 2|k|)`` over all modes,
    where ``kappa = |k| gamma (1 - v cos theta)`` is the detector-frame frequency.
    """
    check_dimension(n)
    if field.mean_energy == 0:
        return 0.0
    g = model.lorentz_factor(velocity)
    pref = 4.0 / math.sqrt(2.0 * (2.0 * math.pi) ** n)
    E = field.mean_energy

    def radial(doppler):
        def integrand(k):
            kappa = k * doppler
            return (k ** (n - 0.5) * doppler * model.smearing_fourier(n, R, kappa)
                    * model.coherent_amplitude_modulus(n, E, k))
        scale = _radial_scale(n, E, SwitchingProfile.delta(), R * doppler)
        return _checked(integrate_semi_infinite(integrand, spec, scale=scale), "upper bound")

    if velocity == 0:
        return pref * unit_sphere_area(n) * radial(1.0)
    if n == 1:
        return pref * (radial(g * (1.0 - velocity)) + radial(g * (1.0 + velocity)))
    polar = integrate_polar(lambda mu: np.array([radial(g * (1.0 - velocity * m)) for m in mu]), spec)
    return pref * 2.0 * math.pi * _checked(polar, "upper bound (polar)")


def harvest(n: int, field: FieldConfig, switching: SwitchingProfile, R: float,
            path: EvaluationPath = EvaluationPath.CLOSED_FORM,
            spec: QuadratureSpec = DEFAULT_SPEC) -> HarvestResult:
    """All static-detector outputs on one evaluation path.

    When nothing is harvested the coherent cost is reported as 0, its value in the
    limit of vanishing amplitude.
    """
    path = EvaluationPath(path)
    C = coherence_static(n, field, switching, R, path, spec)
    try:
        cost_coh = energy_cost_coherent(n, field, switching, R, path, spec) if C > 0 else 0.0
    except UndefinedRatioError:
        cost_coh = 0.0
    return HarvestResult(
        coherence=C,
        delta_e_coh=cost_coh,
        delta_e_vac=energy_cost_vacuum(n, switching, R, path, spec),
        commutator_term=commutator_term(n, switching, R, path, spec),
        path=path,
    )
