import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from udwcoherence.harvest import (EvaluationPath, UndefinedRatioError, coherence_static,
                                  coherence_upper_bound, commutator_term, energy_cost_coherent,
                                  energy_cost_vacuum, gaussian_parameters, harvest)
from udwcoherence.model import FieldConfig, SwitchingProfile

CLOSED, QUAD = EvaluationPath.CLOSED_FORM, EvaluationPath.QUADRATURE

# (n, r, E, T, R) -> (C, coherent energy cost), from extended-precision quadrature
# of the defining mode integrals
REFERENCE = {
    (1, 1, 1.0, 1.0, 1.0): (0.39193601894301048, 0.01466000269280258),
    (1, 0, 0.5, 0.25, 2.0): (0.014256403176588803, -0.00046729105812470957),
    (3, 1, 2.0, 1.0, 0.5): (0.41976715401643798, -0.027033996817991116),
    (3, 0, 1.0, 2.0, 1.0): (0.20096299198614713, -0.0010492528321940352),
    (3, 1, 0.5, 0.0, 1.0): (0.25486935300955374, 0.01623959677587713),
    (1, 1, 5.0, 2.0, 1.0): (0.11749774724229577, 0.00039645598791811089),
}

# (n, T, R) -> (vacuum cost, commutator term)
VACUUM_REFERENCE = {
    (1, 1.0, 1.0): (0.0019403481418504886, -0.036282403389011218),
    (3, 1.0, 1.0): (9.4825077535727897e-5, -0.02628465656360533),
    (1, 0.0, 1.0): (0.086483039836841152, 0.0),
    (3, 0.0, 2.0): (0.01057735037821321, 0.0),
    (3, 2.0, 0.5): (7.812730376509473e-9, -0.019136430962215791),
}


def _args(n, r, E, T, R):
    return n, FieldConfig(E, r), SwitchingProfile.from_duration(T), R


@pytest.mark.parametrize("path", list(EvaluationPath))
@pytest.mark.parametrize("point", sorted(REFERENCE))
def test_coherence_and_cost_reference(point, path):
    C_ref, cost_ref = REFERENCE[point]
    assert coherence_static(*_args(*point), path=path) == pytest.approx(C_ref, rel=1e-10)
    assert energy_cost_coherent(*_args(*point), path=path) == pytest.approx(cost_ref, rel=1e-9)


@pytest.mark.parametrize("path", list(EvaluationPath))
@pytest.mark.parametrize("point", sorted(VACUUM_REFERENCE))
def test_vacuum_and_commutator_reference(point, path):
    n, T, R = point
    vac, comm = VACUUM_REFERENCE[point]
    sw = SwitchingProfile.from_duration(T)
    assert energy_cost_vacuum(n, sw, R, path) == pytest.approx(vac, rel=1e-10)
    assert commutator_term(n, sw, R, path) == pytest.approx(comm, rel=1e-10, abs=1e-15)


def test_gaussian_parameters():
    a, b = gaussian_parameters(1, 1.0, 1.0, 1.0)
    assert a == pytest.approx((1 + math.pi ** 2) / (2 * math.pi))
    assert b == pytest.approx(math.pi / 2)


def test_zero_energy_field_harvests_nothing():
    for n, path in itertools.product((1, 3), EvaluationPath):
        res = harvest(n, FieldConfig(0.0, 1), SwitchingProfile.gaussian(1.0), 1.0, path)
        assert res.coherence == 0.0 and res.delta_e_coh == 0.0
        assert res.delta_e_vac > 0


def test_real_amplitude_with_instantaneous_coupling_gives_nothing():
    for n, path in itertools.product((1, 3), EvaluationPath):
        assert coherence_static(n, FieldConfig(1.3, 0), SwitchingProfile.delta(), 1.0, path) == 0.0


def test_coherent_cost_ratio_undefined_without_coherence():
    with pytest.raises(UndefinedRatioError):
        energy_cost_coherent(1, FieldConfig(1.0, 0), SwitchingProfile.delta(), 1.0)


def test_pointlike_instantaneous_vacuum_cost_rejected():
    with pytest.raises(ValueError):
        energy_cost_vacuum(3, SwitchingProfile.delta(), 0.0)


def test_commutator_vanishes_for_instantaneous_coupling():
    for n, path in itertools.product((1, 3), EvaluationPath):
        assert commutator_term(n, SwitchingProfile.delta(), 1.0, path) == 0.0


@pytest.mark.parametrize("n", [1, 3])
def test_commutator_is_negative_for_gaussian_switching(n):
    for T in (0.1, 0.5, 1.0, 3.0):
        assert commutator_term(n, SwitchingProfile.gaussian(T), 1.0) < 0


@pytest.mark.parametrize("n", [1, 3])
@pytest.mark.parametrize("T", [0.0, 0.5, 1.0, 2.0])
def test_vacuum_cost_decreases_with_radius(n, T):
    costs = [energy_cost_vacuum(n, SwitchingProfile.from_duration(T), R) for R in (0.25, 0.5, 1.0, 2.0, 4.0)]
    assert all(a > b for a, b in zip(costs, costs[1:]))


@pytest.mark.parametrize("n", [1, 3])
@pytest.mark.parametrize("E", [0.1, 1.0, 5.0])
def test_instantaneous_total_cost_positive(n, E):
    res = harvest(n, FieldConfig(E, 1), SwitchingProfile.delta(), 1.0)
    assert res.delta_e_coh > 0 and res.total_energy_cost > 0


@pytest.mark.parametrize("n", [1, 3])
@pytest.mark.parametrize("R", [0.5, 1.0, 2.0])
def test_upper_bound_attained_instantaneously(n, R):
    for E in (0.2, 1.0, 3.0):
        field = FieldConfig(E, 1)
        bound = coherence_upper_bound(n, field, R)
        assert coherence_static(n, field, SwitchingProfile.delta(), R) == pytest.approx(bound, rel=1e-10)
        for T in (0.3, 1.0, 2.5):
            assert coherence_static(n, field, SwitchingProfile.gaussian(T), R) <= bound * (1 + 1e-12)
            assert coherence_static(n, FieldConfig(E, 0), SwitchingProfile.gaussian(T), R) <= bound * (1 + 1e-12)


@settings(max_examples=25, deadline=None)
@given(n=st.sampled_from([1, 3]), r=st.sampled_from([0, 1]), E=st.floats(0.02, 8.0),
       T=st.floats(0.05, 3.0), R=st.floats(0.2, 3.0))
def test_paths_agree_property(n, r, E, T, R):
    args = _args(n, r, E, T, R)
    closed = harvest(*args, path=CLOSED)
    quad = harvest(*args, path=QUAD)
    for name in ("coherence", "delta_e_coh", "delta_e_vac", "commutator_term"):
        a, b = getattr(closed, name), getattr(quad, name)
        assert abs(a - b) <= 1e-7 * max(abs(b), 1e-2)


@settings(max_examples=25, deadline=None)
@given(n=st.sampled_from([1, 3]), r=st.sampled_from([0, 1]), E=st.floats(0.02, 8.0),
       T=st.floats(0.0, 3.0), R=st.floats(0.2, 3.0))
def test_coherence_is_a_valid_l1_value(n, r, E, T, R):
    C = coherence_static(*_args(n, r, E, T, R))
    assert 0.0 <= C < 10.0 and math.isfinite(C)
