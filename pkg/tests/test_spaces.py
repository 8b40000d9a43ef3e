import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from models.exceptions import ConfigurationError, DomainError
from models.spaces import (
    TWO_PI,
    Cylinder,
    EuclidBall,
    EuclidRect,
    Sphere,
    Torus,
    distance,
    incomplete_beta,
    lonlat_to_unit,
    points_at_distance,
    sample_uniform_point,
    sphere_surface_total,
)

angles = st.floats(min_value=0.0, max_value=TWO_PI, exclude_max=True)


@pytest.mark.parametrize("d, total", [(1, 2 * math.pi), (2, 4 * math.pi), (3, 2 * math.pi ** 2)])
def test_sphere_surface_total(d, total):
    assert sphere_surface_total(d) == pytest.approx(total, rel=1e-14)


def test_incomplete_beta_regular_cases():
    assert incomplete_beta(0.5, 1.0, 1.0) == pytest.approx(0.5, abs=1e-15)
    assert incomplete_beta(1.0, 1.5, 0.5) == pytest.approx(math.pi / 2.0, rel=1e-12)
    assert incomplete_beta(0.0, 2.0, 3.0) == 0.0


def test_incomplete_beta_negative_b():
    # int_0^x t^(1/2) (1-t)^(-2) dt = s / (1 - s^2) - artanh(s), s = sqrt(x)
    x = 0.75
    s = math.sqrt(x)
    expected = s / (1.0 - s * s) - math.atanh(s)
    assert incomplete_beta(x, 1.5, -1.0) == pytest.approx(expected, rel=1e-9)


def test_incomplete_beta_zero_b():
    # int_0^x (1-t)^(-1) dt = -log(1 - x)
    assert incomplete_beta(0.6, 1.0, 0.0) == pytest.approx(-math.log(0.4), rel=1e-9)


def test_incomplete_beta_domain():
    with pytest.raises(DomainError):
        incomplete_beta(1.0, 1.5, -0.5)
    with pytest.raises(DomainError):
        incomplete_beta(1.2, 1.0, 1.0)
    with pytest.raises(DomainError):
        incomplete_beta(0.5, 0.0, 1.0)


def test_space_parameters_are_validated():
    with pytest.raises(ConfigurationError):
        EuclidBall(0, 1.0)
    with pytest.raises(ConfigurationError):
        EuclidBall(2, -1.0)
    with pytest.raises(ConfigurationError):
        EuclidRect((1.0, 0.0))
    with pytest.raises(ConfigurationError):
        Cylinder(0.0)


def test_check_rejects_points_outside():
    with pytest.raises(DomainError):
        EuclidBall(2, 1.0).check([1.0, 1.0])
    with pytest.raises(DomainError):
        Sphere(2).check([1.0, 1.0, 0.0])
    with pytest.raises(DomainError):
        Torus().check([TWO_PI, 0.0])
    with pytest.raises(DomainError):
        Cylinder(1.0).check([0.5, 1.5])
    with pytest.raises(DomainError):
        EuclidRect((1.0, 2.0)).check([0.0, 2.5])
    with pytest.raises(DomainError):
        EuclidBall(2, 1.0).check([0.1, 0.2, 0.3])


def test_distances():
    assert distance(EuclidBall(2, 1.0), [0.0, 0.0], [0.6, 0.8]) == pytest.approx(1.0)
    assert distance(Sphere(2), [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]) == pytest.approx(math.pi / 2.0)
    # the circle wraps around
    assert distance(Cylinder(1.0), [0.1, 0.0], [TWO_PI - 0.1, 0.0]) == pytest.approx(0.2)
    assert distance(Torus(), [0.1, 0.1], [TWO_PI - 0.2, TWO_PI - 0.3]) == pytest.approx(math.hypot(0.3, 0.4))


@given(angles, angles, angles, angles, angles, angles)
def test_torus_metric(a0, a1, b0, b1, c0, c1):
    torus = Torus()
    x, y, z = [a0, a1], [b0, b1], [c0, c1]
    assert distance(torus, x, y) == pytest.approx(distance(torus, y, x), abs=1e-12)
    assert distance(torus, x, z) <= distance(torus, x, y) + distance(torus, y, z) + 1e-9
    assert distance(torus, x, y) <= torus.diameter + 1e-12


def test_uniform_points_lie_in_space():
    rng = np.random.default_rng(0)
    for space in (EuclidBall(3, 2.0), EuclidRect((1.0, 0.5)), Sphere(2), Cylinder(2.0), Torus()):
        pts = sample_uniform_point(space, rng, 1000)
        assert pts.shape == (1000, space.width)
        space.check(pts)
    single = sample_uniform_point(Sphere(3), rng)
    assert single.shape == (4,)


def test_ball_sampling_is_uniform_in_volume():
    pts = sample_uniform_point(EuclidBall(2, 1.0), np.random.default_rng(1), 200_000)
    r2 = np.sum(pts ** 2, axis=1)
    # E |x|^2 = 1/2 and Var |x|^2 = 1/12 in the unit disc
    assert abs(r2.mean() - 0.5) < 5 * math.sqrt(1.0 / 12.0 / r2.size)


def test_sphere_sampling_is_isotropic():
    pts = sample_uniform_point(Sphere(2), np.random.default_rng(2), 200_000)
    # each coordinate has mean 0 and variance 1/3
    assert np.all(np.abs(pts.mean(axis=0)) < 5 * math.sqrt(1.0 / 3.0 / pts.shape[0]))


@pytest.mark.parametrize(
    "space, delta",
    [
        (EuclidBall(2, 1.0), 1.3),
        (EuclidBall(3, 2.0), 4.0),
        (EuclidRect((1.0, 1.0)), 1.5),
        (Sphere(2), 2.0),
        (Sphere(3), math.pi),
        (Cylinder(1.0), 3.0),
        (Torus(), 0.4),
    ],
    ids=lambda v: getattr(v, "kind", str(v)),
)
def test_points_at_distance(space, delta):
    x, y = points_at_distance(space, delta)
    assert distance(space, x, y) == pytest.approx(delta, abs=1e-12)


def test_points_at_distance_range():
    with pytest.raises(DomainError):
        points_at_distance(EuclidBall(2, 1.0), 2.5)
    with pytest.raises(DomainError):
        points_at_distance(Torus(), 4.0)
    with pytest.raises(DomainError):
        points_at_distance(Sphere(2), -0.1)


def test_lonlat_to_unit():
    pts = lonlat_to_unit(np.array([0.0, math.pi / 2.0]), np.array([0.0, math.pi / 4.0]))
    assert np.allclose(np.linalg.norm(pts, axis=1), 1.0)
    assert np.allclose(pts[0], [1.0, 0.0, 0.0])
