"""Coherence harvested by a detector moving at constant velocity.

Two independent representations are provided. The angular average weights the
static closed form evaluated at each Doppler-shifted energy ``E gamma (1 - v mu)``
by ``[gamma (1 - v mu)]^(-(n-1)/2)``. The mixture representation rewrites the field
as a static amplitude ``a_v(k)``, an average of ``a(k / D)`` weighted by
``D^(-(n - 1/2))`` with ``D = gamma (1 - v mu)``. The two weights differ because
one form is written in terms of the Doppler-shifted energy and the other in terms
of the rescaled argument; for the Gaussian amplitude
``a_E(k / D) = D^(n/2) a_{E D}(k)`` reconciles them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence

import numpy as np

from . import harvest, model
from .model import FieldConfig, SwitchingProfile, check_dimension, lorentz_factor
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate_polar, integrate_semi_infinite

__all__ = [
    "VelocityError",
    "MotionSweepPoint",
    "doppler_energy",
    "doppler_factor",
    "angular_average",
    "coherence_moving",
    "doppler_mixed_amplitude",
    "coherence_moving_mixture",
    "coherence_moving_labframe",
    "swelling_scan",
]

VELOCITY_GUARD = model.VELOCITY_GUARD


class VelocityError(ValueError):
    pass


def _check_velocity(v: float) -> float:
    if not 0 <= v <= VELOCITY_GUARD:
        raise VelocityError(f"velocity must lie in [0, {VELOCITY_GUARD}], got {v}")
    return float(v)


def doppler_factor(velocity: float, mu):
    """``gamma (1 - v mu)`` for the cosine ``mu`` between the mode and the velocity."""
    return lorentz_factor(velocity) * (1.0 - velocity * np.asarray(mu, dtype=float))


def doppler_energy(E: float, velocity: float, mu):
    return E * doppler_factor(velocity, mu)


def angular_average(g, n: int, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``(1/s_n) * integral of g(mu) over directions`` for n in {1, 3}.

    In one dimension the direction sphere is the pair mu = +-1; in three the
    azimuth integrates out and leaves ``(1/2) * int_{-1}^{1} g(mu) dmu``.
    """
    if n == 1:
        return 0.5 * (float(g(np.array([-1.0]))[0]) + float(g(np.array([1.0]))[0]))
    result = integrate_polar(g, spec)
    if not result.converged:
        raise harvest.QuadratureFailure(f"angular average did not converge ({result})")
    return 0.5 * result.value


def coherence_moving(n: int, field: FieldConfig, switching: SwitchingProfile, R: float,
                     velocity: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Coherence harvested at speed ``velocity`` as a Doppler average of static closed forms."""
    check_dimension(n)
    velocity = _check_velocity(velocity)
    if velocity == 0 or field.mean_energy == 0:
        return harvest.coherence_static_closed(n, field, switching, R, spec)
    exponent = (n - 1) / 2.0

    def g(mu):
        out = np.empty(len(mu))
        for i, m in enumerate(mu):
            D = float(doppler_factor(velocity, m))
            C = harvest.coherence_static_closed(n, field.with_energy(field.mean_energy * D),
                                                switching, R, spec)
            out[i] = C / D ** exponent
        return out

    return angular_average(g, n, spec)


def doppler_mixed_amplitude(n: int, field: FieldConfig, velocity: float, k,
                            spec: QuadratureSpec = DEFAULT_SPEC):
    """Isotropic amplitude seen by the moving detector, at radial momenta ``k``."""
    check_dimension(n)
    velocity = _check_velocity(velocity)
    k = np.atleast_1d(np.asarray(k, dtype=float))
    phase = 1j if field.phase_r == 1 else 1.0
    E = field.mean_energy
    if velocity == 0:
        return phase * model.coherent_amplitude_modulus(n, E, k)
    weight = n - 0.5

    def modulus_at(kk):
        def g(mu):
            D = doppler_factor(velocity, mu)
            return model.coherent_amplitude_modulus(n, E, kk / D) / D ** weight
        return angular_average(g, n, spec)

    return phase * np.array([modulus_at(kk) for kk in k])


def coherence_moving_mixture(n: int, field: FieldConfig, switching: SwitchingProfile, R: float,
                             velocity: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Coherence at speed ``velocity`` from static quadrature with the mixed amplitude."""
    check_dimension(n)
    velocity = _check_velocity(velocity)
    if field.mean_energy == 0:
        return 0.0
    E_max = field.mean_energy * lorentz_factor(velocity) * (1.0 + velocity)
    scale = harvest._radial_scale(n, E_max, switching, R)
    return harvest.coherence_from_amplitude(
        n, lambda k: doppler_mixed_amplitude(n, field, velocity, k, spec), switching, R, spec,
        scale=scale)


def coherence_moving_labframe(n: int, field: FieldConfig, switching: SwitchingProfile, R: float,
                              velocity: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Coherence at speed ``velocity`` integrated directly over lab-frame modes.

    Each mode of momentum k is seen at detector-frame frequency
    ``kappa = |k| gamma (1 - v mu)``; no change of variables is made.
    """
    check_dimension(n)
    velocity = _check_velocity(velocity)
    if field.mean_energy == 0:
        return 0.0
    E = field.mean_energy

    def radial(D: float) -> complex:
        def bracket(k):
            kappa = k * D
            a_k = model.coherent_amplitude(n, field, k)
            up = np.conj(model.switching_fourier(switching, 1.0 + kappa))
            down = np.conj(model.switching_fourier(switching, 1.0 - kappa))
            return (k ** (n - 1) * kappa / np.sqrt(k) * model.smearing_fourier(n, R, kappa)
                    * (a_k * up - np.conj(a_k) * down))
        scale = max(harvest._radial_scale(n, E, switching, R) / D,
                    harvest._radial_scale(n, E, switching, R))
        re = integrate_semi_infinite(lambda k: bracket(k).real, spec, scale=scale)
        im = integrate_semi_infinite(lambda k: bracket(k).imag, spec, scale=scale)
        return complex(harvest._checked(re, "lab-frame coherence"), harvest._checked(im, "lab-frame coherence"))

    pref = 2.0 / math.sqrt(2.0 * (2.0 * math.pi) ** n)
    if n == 1:
        total = radial(float(doppler_factor(velocity, -1.0))) + radial(float(doppler_factor(velocity, 1.0)))
        return pref * abs(total)
    # n = 3: the common phase of every mode lets real and imaginary parts be averaged separately
    parts = []
    for take in (np.real, np.imag):
        res = integrate_polar(lambda mu: np.array([take(radial(float(doppler_factor(velocity, m))))
                                                   for m in mu]), spec)
        parts.append(harvest._checked(res, "lab-frame coherence (polar)"))
    return pref * 2.0 * math.pi * abs(complex(*parts))


@dataclass(frozen=True)
class MotionSweepPoint:
    velocity: float
    energy: float
    duration: float
    coherence_static: float
    coherence_moving: float
    swelling_ratio: float
    phase_r: int = 1

    @property
    def ratio_defined(self) -> bool:
        return self.coherence_static > 0

    @property
    def swelling(self) -> bool:
        return self.ratio_defined and self.swelling_ratio > 1.0


def swelling_point(n: int, field: FieldConfig, duration: float, R: float, velocity: float,
                   spec: QuadratureSpec = DEFAULT_SPEC) -> MotionSweepPoint:
    switching = SwitchingProfile.from_duration(duration)
    static = harvest.coherence_static_closed(n, field, switching, R, spec)
    moving = coherence_moving(n, field, switching, R, velocity, spec)
    ratio = moving / static if static > 0 else math.nan
    return MotionSweepPoint(velocity, field.mean_energy, duration, static, moving, ratio, field.phase_r)


def swelling_scan(n: int, fields: Iterable[FieldConfig], durations: Sequence[float], R: float,
                  velocity: float, spec: QuadratureSpec = DEFAULT_SPEC) -> List[MotionSweepPoint]:
    """Static and moving coherence over a (field, duration) grid, field-major."""
    fields = list(fields)
    durations = list(durations)
    if not fields or not durations:
        raise ValueError("swelling_scan needs non-empty grids")
    return [swelling_point(n, f, T, R, velocity, spec) for f in fields for T in durations]
