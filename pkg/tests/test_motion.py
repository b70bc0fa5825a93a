import math

import numpy as np
import pytest

from udwcoherence import harvest, motion
from udwcoherence.model import FieldConfig, SwitchingProfile
from udwcoherence.motion import (VelocityError, angular_average, coherence_moving, coherence_moving_labframe,
                                 coherence_moving_mixture, doppler_factor, swelling_point, swelling_scan)

# (n, r, E, T, R, v) -> C_v, from extended-precision quadrature over lab-frame modes
MOVING_REFERENCE = {
    (1, 1, 0.1, 1.0, 1.0, 0.8): 0.19555838151662128,
    (1, 0, 1.0, 0.5, 1.0, 0.3): 0.15783139229214365,
    (3, 1, 0.2, 1.0, 1.0, 0.8): 0.034880336738189752,
}


@pytest.mark.parametrize("point", sorted(MOVING_REFERENCE))
def test_moving_reference(point):
    n, r, E, T, R, v = point
    C = coherence_moving(n, FieldConfig(E, r), SwitchingProfile.from_duration(T), R, v)
    assert C == pytest.approx(MOVING_REFERENCE[point], rel=1e-10)


@pytest.mark.parametrize("n", [1, 3])
@pytest.mark.parametrize("v", [0.3, 0.8])
@pytest.mark.parametrize("E, T, r", [(0.1, 1.0, 1), (1.0, 0.5, 0), (2.0, 0.0, 1), (0.5, 2.0, 0)])
def test_three_routes_agree(n, v, E, T, r):
    field, sw = FieldConfig(E, r), SwitchingProfile.from_duration(T)
    avg = coherence_moving(n, field, sw, 1.0, v)
    mix = coherence_moving_mixture(n, field, sw, 1.0, v)
    assert mix == pytest.approx(avg, rel=1e-8)
    if (E, T) == (0.1, 1.0):
        lab = coherence_moving_labframe(n, field, sw, 1.0, v)
        assert lab == pytest.approx(avg, rel=1e-8)


@pytest.mark.parametrize("n", [1, 3])
def test_rest_reduces_to_static(n):
    field, sw = FieldConfig(0.7, 1), SwitchingProfile.gaussian(0.8)
    static = harvest.coherence_static(n, field, sw, 1.0)
    assert coherence_moving(n, field, sw, 1.0, 0.0) == static
    assert coherence_moving_mixture(n, field, sw, 1.0, 0.0) == pytest.approx(static, rel=1e-10)


def test_doppler_factor_endpoints():
    g = 1 / math.sqrt(1 - 0.64)
    assert doppler_factor(0.8, 1.0) == pytest.approx(g * 0.2)
    assert doppler_factor(0.8, -1.0) == pytest.approx(g * 1.8)


def test_angular_average_uniform():
    assert angular_average(lambda mu: np.ones_like(mu), 3) == pytest.approx(1.0, rel=1e-15)
    assert angular_average(lambda mu: mu, 1) == 0.0


@pytest.mark.parametrize("v", [-0.1, 0.9995, 1.0])
def test_velocity_guard(v):
    with pytest.raises(VelocityError):
        coherence_moving(1, FieldConfig(1.0, 1), SwitchingProfile.gaussian(1.0), 1.0, v)


def test_mixed_amplitude_keeps_phase():
    amp = motion.doppler_mixed_amplitude(1, FieldConfig(1.0, 1), 0.5, [0.5, 1.0])
    assert np.all(amp.real == 0) and np.all(amp.imag > 0)


def test_swelling_scan_order_and_ratio():
    fields = [FieldConfig(0.1, 1), FieldConfig(1.0, 1)]
    points = swelling_scan(1, fields, [0.0, 2.0], 1.0, 0.8)
    assert [(p.energy, p.duration) for p in points] == [(0.1, 0.0), (0.1, 2.0), (1.0, 0.0), (1.0, 2.0)]
    assert points[1].swelling and points[1].swelling_ratio > 1
    assert not points[2].swelling
    for p in points:
        assert p.swelling_ratio == pytest.approx(p.coherence_moving / p.coherence_static)


def test_undefined_ratio_is_nan():
    p = swelling_point(1, FieldConfig(1.0, 0), 0.0, 1.0, 0.5)
    assert not p.ratio_defined and math.isnan(p.swelling_ratio) and not p.swelling


def test_empty_scan_rejected():
    with pytest.raises(ValueError):
        swelling_scan(1, [], [1.0], 1.0, 0.5)
