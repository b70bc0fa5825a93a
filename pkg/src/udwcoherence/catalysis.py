"""Repeated harvesting with instantaneous (delta) coupling at R = 1/Omega.

The closed forms here assume the detector radius equals its transition
wavelength; general radii go through :mod:`udwcoherence.harvest`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from . import harvest, motion
from .model import FieldConfig, SwitchingProfile, check_dimension, lorentz_factor
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate_polar, integrate_semi_infinite
from .specfun import gamma

__all__ = [
    "SMALL_VELOCITY",
    "CatalysisReport",
    "catalytic_coherence",
    "catalysis_vacuum_cost",
    "catalysis_vacuum_cost_quadrature",
    "catalysis_energy_cost",
    "repeated_harvest_series",
    "harvest_time_estimate",
    "catalysis_report",
]

# below this speed the n=3 closed form is 0/0 and the angular average is used instead
SMALL_VELOCITY = 1e-3
RADIUS = 1.0


def _doppler_pair(E: float, velocity: float):
    g = lorentz_factor(velocity)
    return E * g * (1.0 + velocity), E * g * (1.0 - velocity)


def catalytic_coherence(n: int, E: float, velocity: float) -> float:
    """Coherence per harvest (units of the coupling) for phase pi/2 and delta coupling."""
    check_dimension(n)
    motion._check_velocity(velocity)
    if E < 0:
        raise ValueError("energy must be non-negative")
    if E == 0:
        return 0.0
    e_plus, e_minus = _doppler_pair(E, velocity)
    if n == 1:
        pref = 2.0 * gamma(0.75) / (2.0 * math.pi) ** 0.25

        def term(e):
            return e / (1.0 + math.pi ** 2 * e * e / 2.0) ** 0.75

        return pref * (term(e_plus) + term(e_minus))
    if velocity < SMALL_VELOCITY:
        return motion.coherence_moving(3, FieldConfig(E, 1), SwitchingProfile.delta(), RADIUS, velocity)
    g = lorentz_factor(velocity)
    pref = 16.0 * gamma(0.75) / ((2.0 * math.pi ** 9) ** 0.25 * g * velocity)

    def term(e):
        return (1.0 + math.pi ** 2 * e * e / 32.0) ** -0.75

    return pref * (term(e_minus) - term(e_plus))


def catalysis_vacuum_cost(n: int, velocity: float) -> float:
    """Vacuum part of the per-extraction cost, units Omega * coupling^2."""
    check_dimension(n)
    g = lorentz_factor(motion._check_velocity(velocity))
    if n == 1:
        return (1.0 + g / math.sqrt(2.0)) / (2.0 * math.pi ** 2)
    return 8.0 / math.pi ** 4 * (1.0 + 3.0 * g / math.sqrt(2.0))


def catalysis_vacuum_cost_quadrature(n: int, velocity: float,
                                     spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Lab-frame quadrature of ``(1 + Omega/|k|) |F_-(k)|^2`` for the moving delta-coupled detector."""
    check_dimension(n)
    velocity = motion._check_velocity(velocity)
    from .model import smearing_fourier

    def radial(D: float) -> float:
        def integrand(k):
            kappa = k * D
            return k ** (n - 1) * (1.0 + 1.0 / np.where(k > 0, k, np.inf)) * (kappa * smearing_fourier(n, RADIUS, kappa)) ** 2
        res = integrate_semi_infinite(integrand, spec, scale=8.0 / D)
        return harvest._checked(res, "moving vacuum cost")

    pref = 1.0 / (2.0 * (2.0 * math.pi) ** n)
    if n == 1:
        return pref * (radial(float(motion.doppler_factor(velocity, -1.0)))
                       + radial(float(motion.doppler_factor(velocity, 1.0))))
    res = integrate_polar(lambda mu: np.array([radial(float(motion.doppler_factor(velocity, m))) for m in mu]),
                          spec)
    return pref * 2.0 * math.pi * harvest._checked(res, "moving vacuum cost (polar)")


def catalysis_energy_cost(n: int, E: float, velocity: float, coupling: Optional[float] = None) -> float:
    """Energy consumed by one catalytic extraction.

    Returned in units of Omega * coupling^2, or in units of Omega when the
    dimensionless ``coupling`` is given.
    """
    C = catalytic_coherence(n, E, velocity)
    cost = C * C / 4.0 + catalysis_vacuum_cost(n, velocity)
    if coupling is not None:
        if not coupling > 0:
            raise ValueError("coupling must be positive")
        cost *= coupling * coupling
    return cost


def repeated_harvest_series(first_coherence: float, commutator_term: float, coupling: float,
                            m: int) -> List[float]:
    """Coherence of harvests 1..m, each scaled by ``|1 + (coupling^2 / 2) * commutator_term|``."""
    if int(m) != m or m < 1:
        raise ValueError("m must be a positive integer")
    factor = abs(1.0 + 0.5 * coupling * coupling * commutator_term)
    series = [float(first_coherence)]
    for _ in range(int(m) - 1):
        series.append(series[-1] * factor)
    return series


def harvest_time_estimate(coupling: float, omega_hz: float) -> float:
    """Order-of-magnitude time (s) to collect one unit of coherence, ``1/(coupling * omega)``."""
    if not coupling > 0 or not omega_hz > 0:
        raise ValueError("coupling and omega must be positive")
    return 1.0 / (coupling * omega_hz)


@dataclass(frozen=True)
class CatalysisReport:
    """Per-harvest figures with the coupling reattached.

    ``per_harvest_coherence`` is absolute (coupling times C/coupling), so that
    ``harvests_for_unit_coherence`` is the smallest count reaching one unit.
    ``estimated_total_time`` counts one interaction of duration 1/Omega per harvest;
    ``estimated_total_seconds`` is set when a physical gap frequency is given.
    """
    per_harvest_coherence: float
    per_extraction_cost: float
    harvests_for_unit_coherence: int
    estimated_total_time: float
    estimated_total_seconds: Optional[float] = None


def catalysis_report(n: int, E: float, velocity: float, coupling: float,
                     omega_hz: Optional[float] = None) -> CatalysisReport:
    per_harvest = catalytic_coherence(n, E, velocity) * coupling
    if not per_harvest > 0:
        raise ValueError("no coherence is harvested at these parameters")
    count = math.ceil(1.0 / per_harvest)
    # guard the ceiling against rounding on exact multiples
    while per_harvest * (count - 1) >= 1.0:
        count -= 1
    while per_harvest * count < 1.0:
        count += 1
    seconds = count / omega_hz if omega_hz else None
    return CatalysisReport(per_harvest, catalysis_energy_cost(n, E, velocity) * coupling * coupling,
                           count, float(count), seconds)
