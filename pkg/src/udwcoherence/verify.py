"""Self-verification suite: every closed form against an independent evaluation.

Each check measures one non-negative discrepancy and passes when it does not
exceed its tolerance. Tolerances can be overridden globally, which is how a
deliberately tightened run exposes the quadrature-limited checks.
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional

import numpy as np

from . import catalysis, fockoracle, harvest, motion
from .harvest import EvaluationPath
from .model import FieldConfig, SwitchingProfile, effective_scale
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate_polar, integrate_semi_infinite
from .specfun import erfc, gamma, pcf, unit_sphere_area

__all__ = ["GROUPS", "CheckResult", "VerifyReport", "registered_checks", "run_verify",
           "STANDARD_GRID", "relative_discrepancy"]

GROUPS = ("specfun", "quadrature", "harvest", "motion", "catalysis", "fockoracle")

# the standard closed-form/quadrature comparison grid: (n, r, E, T, R)
STANDARD_GRID = tuple(itertools.product((1, 3), (0, 1), (0.1, 0.5, 1.0, 2.0, 5.0),
                                        (0.0, 0.25, 1.0, 2.0), (0.5, 1.0, 2.0)))

# relative agreement is required above this magnitude, absolute agreement below it
ZERO_FLOOR = 1e-2


def relative_discrepancy(value: float, reference: float, floor: float = ZERO_FLOOR) -> float:
    """``|value - reference| / max(|reference|, floor)``."""
    return abs(value - reference) / max(abs(reference), floor)


@dataclass(frozen=True)
class CheckResult:
    group: str
    name: str
    passed: bool
    discrepancy: float
    tolerance: float
    seconds: float
    detail: str = ""

    @property
    def margin(self) -> float:
        return self.tolerance - self.discrepancy

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  {self.detail}" if self.detail else ""
        return (f"{status} {self.group}/{self.name}: discrepancy={self.discrepancy:.3e} "
                f"tolerance={self.tolerance:.1e} ({self.seconds:.2f}s){extra}")


@dataclass(frozen=True)
class VerifyReport:
    results: List[CheckResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def lines(self) -> List[str]:
        out = [r.line() for r in self.results]
        failed = sum(not r.passed for r in self.results)
        out.append(f"{len(self.results) - failed}/{len(self.results)} checks passed")
        return out


@dataclass(frozen=True)
class _Check:
    group: str
    name: str
    tolerance: float
    fn: Callable[[QuadratureSpec], float]


_REGISTRY: List[_Check] = []


def _check(group: str, name: str, tolerance: float):
    def wrap(fn):
        _REGISTRY.append(_Check(group, name, tolerance, fn))
        return fn
    return wrap


def registered_checks(only: Optional[Iterable[str]] = None) -> List[_Check]:
    if only is None:
        return list(_REGISTRY)
    only = set(only)
    unknown = only - set(GROUPS)
    if unknown:
        raise ValueError(f"unknown check group(s): {', '.join(sorted(unknown))}")
    return [c for c in _REGISTRY if c.group in only]


# ---------------------------------------------------------------------------
# specfun

RECURRENCE_ORDERS = (-3.5, -3.0, -2.5, -2.0, -1.5, -1.0)
RECURRENCE_POINTS = (-6.0, -2.5, -1.0, 0.0, 0.7, 2.0, 5.0)


def _pcf_any(p: float, z: float, spec: QuadratureSpec) -> float:
    # D_0 is elementary and anchors the recurrence at its top
    return math.exp(-z * z / 4.0) if p == 0 else pcf(p, z, spec)


@_check("specfun", "pcf_recurrence", 1e-9)
def _pcf_recurrence(spec):
    """D_{p+1}(z) - z D_p(z) + p D_{p-1}(z) = 0, relative to the largest term."""
    worst = 0.0
    for p, z in itertools.product(RECURRENCE_ORDERS, RECURRENCE_POINTS):
        terms = (_pcf_any(p + 1, z, spec), -z * pcf(p, z, spec), p * pcf(p - 1, z, spec))
        worst = max(worst, abs(math.fsum(terms)) / max(abs(t) for t in terms))
    return worst


@_check("specfun", "pcf_order_minus_one", 1e-10)
def _pcf_minus_one(spec):
    """D_{-1}(z) = exp(z^2/4) sqrt(pi/2) erfc(z/sqrt 2), including D_{-1}(0) = sqrt(pi/2)."""
    worst = abs(pcf(-1.0, 0.0, spec) - math.sqrt(math.pi / 2))
    for z in (-3.0, -1.0, 0.5, 2.0, 6.0):
        exact = math.exp(z * z / 4.0) * math.sqrt(math.pi / 2) * erfc(z / math.sqrt(2.0))
        worst = max(worst, abs(pcf(-1.0, z, spec) - exact) / exact)
    return worst


@_check("specfun", "sphere_areas", 1e-14)
def _sphere_areas(spec):
    return max(abs(unit_sphere_area(1) - 2.0), abs(unit_sphere_area(3) - 4.0 * math.pi) / (4 * math.pi))


# ---------------------------------------------------------------------------
# quadrature

@_check("quadrature", "gaussian_moment", 1e-12)
def _gaussian_moment(spec):
    res = integrate_semi_infinite(lambda k: k ** 1.5 * np.exp(-k * k), spec)
    return abs(res.value - gamma(1.25) / 2.0) / (gamma(1.25) / 2.0)


@_check("quadrature", "polar_doppler", 1e-12)
def _polar_doppler(spec):
    worst = 0.0
    for v in (0.3, 0.8, 0.99):
        g = 1.0 / math.sqrt(1.0 - v * v)
        res = integrate_polar(lambda mu: 1.0 / (g * (1.0 - v * mu)), spec)
        exact = math.log((1.0 + v) / (1.0 - v)) / (g * v)
        worst = max(worst, abs(res.value - exact) / exact)
    return worst


# ---------------------------------------------------------------------------
# harvest

def _grid_disagreement(quantity: str, spec: QuadratureSpec) -> float:
    worst = 0.0
    for n, r, E, T, R in STANDARD_GRID:
        field, sw = FieldConfig(E, r), SwitchingProfile.from_duration(T)
        if quantity == "coherence":
            pair = [harvest.coherence_static(n, field, sw, R, p, spec) for p in EvaluationPath]
        elif quantity == "delta_e_coh":
            if harvest.coherence_static_closed(n, field, sw, R, spec) == 0:
                continue
            pair = [harvest.energy_cost_coherent(n, field, sw, R, p, spec) for p in EvaluationPath]
        elif quantity == "delta_e_vac":
            if r or E != 0.1:
                continue  # field independent
            pair = [harvest.energy_cost_vacuum(n, sw, R, p, spec) for p in EvaluationPath]
        else:
            if r or E != 0.1:
                continue
            pair = [harvest.commutator_term(n, sw, R, p, spec) for p in EvaluationPath]
        worst = max(worst, relative_discrepancy(pair[0], pair[1]))
    return worst


for _q in ("coherence", "delta_e_coh", "delta_e_vac", "commutator_term"):
    _check("harvest", f"closed_vs_quadrature_{_q}", 1e-7)(
        lambda spec, _q=_q: _grid_disagreement(_q, spec))


@_check("harvest", "instantaneous_bound", 1e-8)
def _instantaneous_bound(spec):
    """C(T) <= C(T=0) = upper bound for phase pi/2; reports the largest violation or gap."""
    worst = 0.0
    for n, E, R in itertools.product((1, 3), (0.1, 0.5, 1.0, 2.0, 5.0), (0.5, 1.0, 2.0)):
        field = FieldConfig(E, 1)
        bound = harvest.coherence_upper_bound(n, field, R, 0.0, spec)
        delta = harvest.coherence_static_closed(n, field, SwitchingProfile.delta(), R, spec)
        worst = max(worst, abs(delta - bound) / bound)
        for T in (0.25, 1.0, 2.0):
            C = harvest.coherence_static_closed(n, field, SwitchingProfile.gaussian(T), R, spec)
            worst = max(worst, (C - delta) / bound)
    return max(worst, 0.0)


@_check("harvest", "vanishing_limits", 1e-15)
def _vanishing(spec):
    values = [harvest.coherence_static_closed(n, FieldConfig(0.0, 1), SwitchingProfile.gaussian(1.0), 1.0, spec)
              for n in (1, 3)]
    values += [harvest.coherence_static(n, FieldConfig(E, 0), SwitchingProfile.delta(), 1.0, p, spec)
               for n in (1, 3) for E in (0.5, 2.0) for p in EvaluationPath]
    return max(abs(v) for v in values)


# ---------------------------------------------------------------------------
# motion

MOTION_CASES = tuple(itertools.product((1, 3), (0.3, 0.8), ((0.2, 1.0, 1), (1.0, 0.5, 0), (2.0, 0.0, 1))))


@_check("motion", "doppler_equivalence", 1e-6)
def _doppler_equivalence(spec):
    worst = 0.0
    for n, v, (E, T, r) in MOTION_CASES:
        field, sw = FieldConfig(E, r), SwitchingProfile.from_duration(T)
        avg = motion.coherence_moving(n, field, sw, 1.0, v, spec)
        mix = motion.coherence_moving_mixture(n, field, sw, 1.0, v, spec)
        worst = max(worst, relative_discrepancy(avg, mix))
    return worst


@_check("motion", "lab_frame_oracle", 1e-6)
def _lab_frame(spec):
    worst = 0.0
    for n, v, (E, T, r) in MOTION_CASES[::2]:
        field, sw = FieldConfig(E, r), SwitchingProfile.from_duration(T)
        avg = motion.coherence_moving(n, field, sw, 1.0, v, spec)
        lab = motion.coherence_moving_labframe(n, field, sw, 1.0, v, spec)
        worst = max(worst, relative_discrepancy(avg, lab))
    return worst


@_check("motion", "rest_limit", 1e-14)
def _rest_limit(spec):
    worst = 0.0
    for n in (1, 3):
        field, sw = FieldConfig(0.7, 1), SwitchingProfile.gaussian(0.5)
        worst = max(worst, relative_discrepancy(motion.coherence_moving(n, field, sw, 1.0, 0.0, spec),
                                                harvest.coherence_static_closed(n, field, sw, 1.0, spec)))
    return worst


# ---------------------------------------------------------------------------
# catalysis

@_check("catalysis", "closed_vs_moving", 1e-6)
def _catalysis_moving(spec):
    worst = 0.0
    for n, v, E in itertools.product((1, 3), (0.6, 0.8), (0.2, 1.0, 3.0)):
        closed = catalysis.catalytic_coherence(n, E, v)
        avg = motion.coherence_moving(n, FieldConfig(E, 1), SwitchingProfile.delta(), catalysis.RADIUS, v, spec)
        worst = max(worst, relative_discrepancy(closed, avg))
    return worst


@_check("catalysis", "rest_limit_1d", 1e-10)
def _catalysis_rest(spec):
    worst = 0.0
    for E in (0.1, 0.64, 1.0, 4.0):
        static = harvest.coherence_static_closed(1, FieldConfig(E, 1), SwitchingProfile.delta(),
                                                 catalysis.RADIUS, spec)
        worst = max(worst, relative_discrepancy(catalysis.catalytic_coherence(1, E, 0.0), static))
    return worst


@_check("catalysis", "small_velocity_continuity", 1e-8)
def _catalysis_continuity(spec):
    below = catalysis.catalytic_coherence(3, 1.0, catalysis.SMALL_VELOCITY * (1 - 1e-3))
    above = catalysis.catalytic_coherence(3, 1.0, catalysis.SMALL_VELOCITY * (1 + 1e-3))
    return relative_discrepancy(below, above)


@_check("catalysis", "vacuum_cost", 1e-7)
def _catalysis_vacuum(spec):
    worst = 0.0
    for n in (1, 3):
        rest = harvest.energy_cost_vacuum(n, SwitchingProfile.delta(), catalysis.RADIUS, spec=spec)
        worst = max(worst, relative_discrepancy(catalysis.catalysis_vacuum_cost(n, 0.0), rest))
        for v in (0.6, 0.8):
            worst = max(worst, relative_discrepancy(catalysis.catalysis_vacuum_cost(n, v),
                                                    catalysis.catalysis_vacuum_cost_quadrature(n, v, spec)))
    return worst


# ---------------------------------------------------------------------------
# fockoracle

def _random_hermitian_configs(count: int, seed: int = 20240611):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        g = complex(rng.uniform(0.05, 0.5), rng.uniform(-0.3, 0.3))
        alpha = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        yield fockoracle.FockOracleConfig(
            truncation=48, mode_frequency=float(rng.uniform(0.3, 3.0)), amp_annihilate=g,
            amp_create=g.conjugate(), coherent_alpha=alpha, coupling=float(rng.uniform(0.01, 0.3)),
            detector_gap=float(rng.uniform(0.3, 3.0)))


@_check("fockoracle", "exact_catalysis", 1e-12)
def _fock_catalysis(spec):
    config = fockoracle.FockOracleConfig(48, 1.0, 0.2, 0.2, 1.0, 0.1)
    values = fockoracle.catalysis_check(config, 5, tolerance=math.inf)
    return max(abs(v - values[0]) for v in values)


@_check("fockoracle", "truncation_convergence", 1e-10)
def _fock_truncation(spec):
    values = [fockoracle.catalysis_check(fockoracle.FockOracleConfig(N, 1.0, 0.2, 0.2, 1.0, 0.1), 1)[0]
              for N in (32, 64)]
    return abs(values[0] - values[1])


@_check("fockoracle", "energy_cost_dual_path", 1e-9)
def _fock_energy(spec):
    worst = 0.0
    for config in _random_hermitian_configs(50):
        # raises on disagreement beyond the tolerance or a non-positive cost
        cost = fockoracle.delta_energy_cost(config, tolerance=math.inf)
        phi, H, sigma = fockoracle.build_operators(config)
        s = fockoracle.matrix_function(phi, lambda w: np.sin(config.coupling * w))
        formula = (config.detector_gap * np.trace(s @ s @ sigma)).real \
            + config.mode_frequency * abs(config.amp_annihilate) ** 2 * config.coupling ** 2
        worst = max(worst, abs(cost - formula))
        if not cost > 0:
            return math.inf
    return worst


@_check("fockoracle", "cubic_residual_scaling", 1.0)
def _fock_cubic(spec):
    """|ratio - 8| for the exact-vs-perturbative residual under coupling halving."""
    residuals = []
    for lam in (0.04, 0.02, 0.01):
        config = fockoracle.FockOracleConfig(40, 1.0, 0.3, 0.3, 1.2, lam)
        phi, _, sigma = fockoracle.build_operators(config)
        rho, _ = fockoracle.delta_channel(lam, phi, sigma)
        residuals.append(abs(fockoracle.coherence_of_qubit(rho) - 2 * lam * abs(np.trace(phi @ sigma))))
    return max(abs(residuals[i] / residuals[i + 1] - 8.0) for i in range(2))


@_check("fockoracle", "perturbative_ratio", 1e-12)
def _fock_ratio(spec):
    config = fockoracle.FockOracleConfig(48, 1.0, 0.3, 0.1, 1.0, 0.01)
    series = fockoracle.perturbative_update(config, 10)
    expected = catalysis.repeated_harvest_series(series[0], config.commutator, config.coupling, 10)
    return max(relative_discrepancy(a, b, floor=1e-300) for a, b in zip(series, expected))


@_check("fockoracle", "second_order_energy", 1e-12)
def _fock_second_order(spec):
    config = fockoracle.FockOracleConfig(60, 1.3, 0.3 + 0.1j, 0.2 - 0.05j, 0.7 + 0.4j, 0.1)
    direct, predicted = fockoracle.second_order_energy_change(config)
    return abs(direct - predicted) / abs(direct)


# ---------------------------------------------------------------------------

def _config_check(point: Dict[str, float]) -> _Check:
    n = int(point.get("dimension", 1))
    field = FieldConfig(float(point.get("energy", 1.0)), int(point.get("phase_r", 1)))
    T = float(point.get("duration", 1.0))
    if point.get("switching_kind") == "delta":
        T = 0.0
    R = float(point.get("radius", 1.0))

    def fn(spec):
        pair = [harvest.harvest(n, field, SwitchingProfile.from_duration(T), R, p, spec) for p in EvaluationPath]
        return max(relative_discrepancy(getattr(pair[0], q), getattr(pair[1], q))
                   for q in ("coherence", "delta_e_coh", "delta_e_vac", "commutator_term"))

    return _Check("harvest", "configured_point", 1e-7, fn)


def run_verify(only: Optional[Iterable[str]] = None, tolerance: Optional[float] = None,
               spec: QuadratureSpec = DEFAULT_SPEC, config_point: Optional[Dict[str, float]] = None,
               progress: Optional[Callable[[CheckResult], None]] = None) -> VerifyReport:
    """Run the registered checks.

    Parameters
    ----------
    only : group names to run (default all).
    tolerance : replaces every check's own tolerance when given.
    spec : quadrature tolerances used by every evaluation.
    config_point : scalar parameters from a configuration file, checked on both paths.
    progress : called with each result as soon as it is available.
    """
    checks = registered_checks(only)
    if config_point is not None and (only is None or "harvest" in set(only)):
        checks.append(_config_check(config_point))
    results = []
    for check in checks:
        tol = check.tolerance if tolerance is None else tolerance
        start = time.perf_counter()
        detail = ""
        try:
            discrepancy = float(check.fn(spec))
        except Exception as exc:  # reported as a failure, never skipped
            discrepancy = math.inf
            detail = f"{type(exc).__name__}: {exc}"
        passed = bool(discrepancy <= tol)
        result = CheckResult(check.group, check.name, passed, discrepancy, tol,
                             time.perf_counter() - start, detail)
        results.append(result)
        if progress is not None:
            progress(result)
    return VerifyReport(results)
