"""Special functions used by the closed-form harvesting formulas."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate_semi_infinite

__all__ = [
    "SpecFunResult",
    "DomainError",
    "gamma",
    "erfc",
    "unit_sphere_area",
    "parabolic_cylinder_D",
    "pcf",
]

# exp() overflows just above this argument
_EXP_LIMIT = 709.0


class DomainError(ValueError):
    """Argument outside the domain supported by a special function."""


@dataclass(frozen=True)
class SpecFunResult:
    value: float
    abs_error_estimate: float

    def __float__(self):
        return self.value


def gamma(x: float) -> float:
    """Euler Gamma function; raises DomainError at the poles."""
    if x <= 0 and float(x).is_integer():
        raise DomainError(f"Gamma has a pole at x={x}")
    return math.gamma(x)


def erfc(x: float) -> float:
    return math.erfc(x)


def unit_sphere_area(n: int) -> float:
    """Surface area of the unit sphere in R^n, ``2 pi^(n/2) / Gamma(n/2)``."""
    if int(n) != n or n < 1:
        raise DomainError(f"unit_sphere_area needs an integer n >= 1, got {n}")
    return 2.0 * math.pi ** (n / 2) / math.gamma(n / 2)


def parabolic_cylinder_D(p: float, z: float, spec: QuadratureSpec = DEFAULT_SPEC) -> SpecFunResult:
    """Parabolic cylinder function D_p(z) for negative order p and real z.

    Evaluated from the integral representation

        D_p(z) = exp(-z^2/4) / Gamma(-p) * int_0^inf t^(-p-1) exp(-t^2/2 - z t) dt,

    with the substitution t = u^(1/|p|) when -1 < p < 0 so that the weak
    singularity at the origin disappears.
    """
    if not p < 0:
        raise DomainError(f"parabolic_cylinder_D requires p < 0, got p={p}")
    if not math.isfinite(z):
        raise DomainError(f"parabolic_cylinder_D requires finite z, got z={z}")
    s = -p - 1.0
    log_norm = -math.lgamma(-p)
    # integrate exp(exponent - shift) with shift the peak exponent, so the
    # integrand is O(1) and the relative tolerance governs the result
    if s > -1e-15:
        s = max(s, 0.0)
        t_peak = 0.5 * (-z + math.sqrt(z * z + 4.0 * s))
        if s > 0:
            shift = s * math.log(t_peak) - 0.5 * (t_peak + z) ** 2 + 0.25 * z * z
        else:
            t_peak = max(-z, 0.0)
            shift = 0.25 * z * z if z < 0 else -0.25 * z * z
    else:
        t_peak = max(-z, 0.0)
        shift = 0.25 * z * z if z < 0 else -0.25 * z * z
    if shift + log_norm > _EXP_LIMIT:
        raise OverflowError(f"D_{p}({z}) exceeds the double-precision range")
    factor = math.exp(shift + log_norm)

    if s >= 0:
        def integrand(t):
            with np.errstate(divide="ignore"):
                log_t = np.log(t)
            expo = -0.5 * (t + z) ** 2 + 0.25 * z * z - shift
            if s:
                expo = expo + s * np.where(t > 0, log_t, -np.inf)
            return np.exp(expo)

        res = integrate_semi_infinite(integrand, spec, scale=t_peak + 8.0)
        return SpecFunResult(factor * res.value, factor * res.error_estimate)

    # -1 < p < 0: t = u^(1/|p|) turns t^(-p-1) dt into du/|p|
    q = -p
    inv = 1.0 / q

    def integrand_u(u):
        t = u ** inv
        return np.exp(-0.5 * (t + z) ** 2 + 0.25 * z * z - shift) * inv

    scale = (max(-z, 0.0) + 8.0) ** q
    res = integrate_semi_infinite(integrand_u, spec, scale=scale)
    return SpecFunResult(factor * res.value, factor * res.error_estimate)


def pcf(p: float, z: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Value-only shorthand for :func:`parabolic_cylinder_D`."""
    return parabolic_cylinder_D(p, z, spec).value
