import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from models.distributions import (
    CosinePolynomial,
    DeterministicRadius,
    Gaussian,
    Hemisphere,
    Sironvalle,
    UniformDiameter,
)
from models.estimation import PairDesign, estimate_hit_probs
from models.exceptions import ConfigurationError, InconsistentProbabilitiesError, UnsupportedError
from models.random_sets import (
    CylinderBall,
    EuclidBallSets,
    HalfSpace,
    Hyperrect,
    SetBatch,
    SphereCap,
    TorusBall,
    _FlatBallSets,
    cap_fraction,
    cap_intersection_area,
    cap_pair_probability,
    check_hit_probabilities,
    contains,
    cos_polynomial_pair_probability,
    hit_prob_pair,
    hit_prob_single,
    lens_area,
    mean_lens_area_uniform,
    sample_set,
    spherical_correlation,
)
from models.spaces import Cylinder, EuclidBall, Sphere, Torus, points_at_distance, sphere_surface_total


def mc_hits(family, x, y, n=200_000, seed=0):
    """Frequencies of x in B and of x, y in B, with their binomial standard errors."""
    member = family.sample(np.random.default_rng(seed), n).membership(np.vstack([x, y]))
    p_x = member[:, 0].mean()
    p_xy = (member[:, 0] & member[:, 1]).mean()
    return p_x, p_xy, math.sqrt(max(p_x * (1 - p_x), 1e-12) / n), math.sqrt(max(p_xy * (1 - p_xy), 1e-12) / n)


def test_halfspace_hit_probabilities():
    space = EuclidBall(2, 1.0)
    fam = HalfSpace(space)
    x, y = points_at_distance(space, 1.2)
    assert hit_prob_single(fam, x) == 0.5
    assert hit_prob_pair(fam, x, y) == pytest.approx(0.5 - 1.2 / (2 * math.pi))
    p_x, p_xy, se_x, se_xy = mc_hits(fam, x, y)
    assert abs(p_x - 0.5) < 4 * se_x
    assert abs(p_xy - fam.p_xy(x, y)) < 4 * se_xy


def test_halfspace_needs_euclidean_space():
    with pytest.raises(ConfigurationError):
        HalfSpace(Sphere(2))


def test_euclid_ball_uniform_diameter_single_hit():
    space = EuclidBall(2, 1.0)
    fam = EuclidBallSets(space, 1.0, UniformDiameter(1.0))
    assert fam.p_x([0.0, 0.0]) == pytest.approx(1.0 / 27.0, rel=1e-12)


def test_euclid_ball_uniform_diameter_pair_matches_sampling():
    space = EuclidBall(2, 1.0)
    fam = EuclidBallSets(space, 1.0, UniformDiameter(1.0))
    x, y = points_at_distance(space, 0.5)
    p_x, p_xy, se_x, se_xy = mc_hits(fam, x, y, n=1_000_000, seed=3)
    assert abs(p_x - fam.p_x(x)) < 4 * se_x
    assert abs(p_xy - fam.p_xy(x, y)) < 4 * se_xy


@pytest.mark.parametrize("delta", [0.0, 0.2, 0.55, 0.9, 1.2])
def test_euclid_ball_deterministic_diameter_is_lens_area(delta):
    C, a, t = 1.0, 1.0, 0.9
    space = EuclidBall(2, C)
    fam = EuclidBallSets(space, a, DeterministicRadius(t))
    x, y = points_at_distance(space, delta)
    expected = lens_area(t, delta) / (math.pi * (C + a / 2.0) ** 2)
    assert fam.p_xy(x, y) == pytest.approx(expected, rel=1e-9, abs=1e-15)


def test_euclid_ball_sironvalle_is_spherical_model():
    space = EuclidBall(2, 1.0)
    fam = EuclidBallSets(space, 1.0, Sironvalle(1.0))
    x, y = points_at_distance(space, 0.4)
    assert fam.p_xy(x, y) / fam.p_x(x) == pytest.approx(spherical_correlation(1.0, 0.4), rel=1e-12)


def test_euclid_ball_sironvalle_needs_the_plane():
    fam = EuclidBallSets(EuclidBall(3, 1.0), 1.0, Sironvalle(1.0))
    with pytest.raises(UnsupportedError):
        fam.p_xy([0.0, 0.0, 0.0], [0.1, 0.0, 0.0])


def test_euclid_ball_diameter_must_fit():
    with pytest.raises(ConfigurationError):
        EuclidBallSets(EuclidBall(2, 1.0), 1.0, UniformDiameter(2.0))
    with pytest.raises(ConfigurationError):
        EuclidBallSets(EuclidBall(2, 1.0), 1.0, Hemisphere())


def test_mean_lens_area_uniform_integrates_lens():
    a, delta = 1.0, 0.3
    t = np.linspace(0.0, a, 200_001)
    numeric = integrate.trapezoid(lens_area(t, delta), t) / a
    assert mean_lens_area_uniform(a, delta) == pytest.approx(numeric, rel=1e-6)


def test_hyperrect_probabilities():
    space = EuclidBall(2, 1.0)
    fam = Hyperrect(space, (0.5, 0.25))
    assert fam.R == (1.0, 1.0)
    assert fam.p_x([0.0, 0.0]) == pytest.approx((0.5 / 1.5) * (0.25 / 1.25))
    x, y = np.array([-0.2, 0.0]), np.array([0.2, 0.1])
    expected = (1.0 - 0.4) / 3.0 * (0.5 - 0.1) / 2.5
    assert fam.p_xy(x, y) == pytest.approx(expected)
    assert fam.pair_from_offset(y - x) == pytest.approx(expected)
    p_x, p_xy, se_x, se_xy = mc_hits(fam, x, y, seed=4)
    assert abs(p_xy - expected) < 4 * se_xy


def test_hemisphere_caps():
    space = Sphere(2)
    fam = SphereCap(space, Hemisphere())
    x, y = points_at_distance(space, math.pi)
    assert fam.p_x(x) == 0.5
    assert fam.p_xy(x, y) == pytest.approx(0.0, abs=1e-15)
    x, y = points_at_distance(space, 1.0)
    assert fam.p_xy(x, y) == pytest.approx(0.5 - 1.0 / (2 * math.pi))


def test_cap_fraction_on_two_sphere():
    for r in (0.0, 0.3, 1.0, math.pi / 2.0, 2.5, math.pi):
        assert cap_fraction(2, r) == pytest.approx((1.0 - math.cos(r)) / 2.0, abs=1e-14)


def test_hemisphere_cap_overlap_area():
    assert cap_intersection_area(2, math.pi / 2.0, 0.6) == pytest.approx(2 * math.pi - 2 * 0.6, rel=1e-8)


@pytest.mark.parametrize("r", [0.4, 1.2, 2.2])
def test_cap_pair_matches_sampling(r):
    space = Sphere(2)
    fam = SphereCap(space, DeterministicRadius(r))
    x, y = points_at_distance(space, 0.7)
    p_x, p_xy, se_x, se_xy = mc_hits(fam, x, y, seed=5)
    assert abs(p_x - fam.p_x(x)) < 4 * se_x
    assert abs(p_xy - fam.p_xy(x, y)) < 4 * se_xy


def test_cap_complement_identity():
    r, delta = 2.0, 1.1
    expected = 2 * cap_fraction(2, r) - 1 + cap_pair_probability(2, math.pi - r, delta)
    assert cap_pair_probability(2, r, delta) == pytest.approx(expected)


def test_three_sphere_caps_match_sampling():
    space = Sphere(3)
    fam = SphereCap(space, DeterministicRadius(1.0))
    x, y = points_at_distance(space, 0.6)
    p_x, p_xy, se_x, se_xy = mc_hits(fam, x, y, seed=6)
    assert abs(p_xy - fam.p_xy(x, y)) < 4 * se_xy


def test_uniform_cosine_caps():
    space = Sphere(2)
    fam = SphereCap(space, CosinePolynomial((0.5,)))
    x, y = points_at_distance(space, 1.4)
    assert fam.p_xy(x, y) == pytest.approx(0.5 - 0.25 * math.sin(0.7), rel=1e-12)
    p_x, p_xy, se_x, se_xy = mc_hits(fam, x, y, seed=7)
    assert abs(p_xy - fam.p_xy(x, y)) < 4 * se_xy


def test_torus_ball():
    fam = TorusBall(Torus(), 1.0, DeterministicRadius(1.0))
    x, y = points_at_distance(Torus(), 0.3)
    assert fam.p_x(x) == pytest.approx(1.0 / (16.0 * math.pi))
    p_x, p_xy, se_x, se_xy = mc_hits(fam, x, y, seed=8)
    assert abs(p_xy - fam.p_xy(x, y)) < 4 * se_xy


def test_cylinder_ball_near_the_rim():
    space = Cylinder(1.0)
    fam = CylinderBall(space, 1.0, UniformDiameter(1.0))
    x = np.array([0.0, 0.0])
    y = np.array([0.4, 0.0])
    p_x, p_xy, se_x, se_xy = mc_hits(fam, x, y, seed=9)
    assert abs(p_x - fam.p_x(x)) < 4 * se_x
    assert abs(p_xy - fam.p_xy(x, y)) < 4 * se_xy


def test_flat_balls_cannot_wrap():
    with pytest.raises(ConfigurationError):
        TorusBall(Torus(), 4.0, DeterministicRadius(1.0))
    with pytest.raises(ConfigurationError):
        CylinderBall(Torus(), 1.0, DeterministicRadius(1.0))


def test_closed_sets_include_their_boundary():
    space = Sphere(2)
    fam = SphereCap(space, DeterministicRadius(math.pi / 2.0))
    cap = sample_set(fam, np.random.default_rng(1))
    centre = cap.params["X"]
    assert contains(cap, centre)
    assert not contains(cap, -centre)


def test_empty_batch_membership():
    fam = HalfSpace(EuclidBall(2, 1.0))
    batch = fam.sample(np.random.default_rng(0), 0)
    assert batch.membership(np.zeros((3, 2))).shape == (0, 3)


def test_check_hit_probabilities():
    check_hit_probabilities(0.5, 0.5, 0.25)
    with pytest.raises(InconsistentProbabilitiesError):
        check_hit_probabilities(0.5, 0.3, 0.4)
    with pytest.raises(InconsistentProbabilitiesError):
        check_hit_probabilities(0.9, 0.9, 0.7)


@given(st.floats(min_value=0.0, max_value=math.pi), st.floats(min_value=0.05, max_value=math.pi / 2.0))
def test_cap_pair_probability_respects_bounds(delta, r):
    p_x = cap_fraction(2, r)
    check_hit_probabilities(p_x, p_x, cap_pair_probability(2, r, delta), tol=1e-9)


def test_value_law_is_not_a_radius_law():
    with pytest.raises((ConfigurationError, AttributeError)):
        SphereCap(Sphere(2), Gaussian(0.0, 1.0))


@pytest.mark.parametrize("r", [0.3, 0.7, 1.2, math.pi / 2.0])
@pytest.mark.parametrize("step", range(8))
def test_cap_slices_match_two_sphere_closed_form(r, step):
    dist = 2.0 * r * step / 7.0
    sliced = cap_intersection_area(2, r, dist) / sphere_surface_total(2)
    assert sliced == pytest.approx(cap_pair_probability(2, r, dist), abs=1e-9)


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("dist", [0.0, 0.4, 1.0, 1.9, 2.6, math.pi])
def test_hemisphere_slices_in_every_dimension(d, dist):
    expected = sphere_surface_total(d) * (0.5 - dist / (2.0 * math.pi))
    assert cap_intersection_area(d, math.pi / 2.0, dist) == pytest.approx(expected, rel=1e-8, abs=1e-10)


@pytest.mark.parametrize("p", [(0.5,), (0.0, 0.5), (0.25, 0.25)], ids=["uniform", "cubic", "blend"])
@pytest.mark.parametrize("delta", [0.0, 0.3, 1.0, 1.7, 2.5, math.pi])
def test_cosine_polynomial_caps_match_radius_quadrature(p, delta):
    law = CosinePolynomial(p)

    def integrand(t):
        return cap_pair_probability(2, math.acos(t), delta) * float(law.density(t))

    # the overlap vanishes once 2R <= delta, and its complement form once 2(pi - R) <= delta
    kink = math.cos(delta / 2.0)
    breaks = [v for v in (-kink, kink) if 1e-9 < abs(v) < 1.0 - 1e-9] or [0.0]
    numeric, _ = integrate.quad(integrand, -1.0, 1.0, points=breaks, epsabs=1e-12, epsrel=1e-11, limit=400)
    assert cos_polynomial_pair_probability(law, 2, delta) == pytest.approx(numeric, abs=1e-7)


def test_uniform_diameter_pair_matches_planar_closed_form():
    C, a = 1.0, 1.0
    fam = EuclidBallSets(EuclidBall(2, C), a, UniformDiameter(a))
    delta = np.linspace(0.0, a, 50)
    closed = np.asarray(mean_lens_area_uniform(a, delta)) / (math.pi * (C + a / 2.0) ** 2)
    assert np.asarray(fam.pair_from_distance(delta)) == pytest.approx(closed, rel=1e-9, abs=1e-10)


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("C, a", [(1.0, 1.0), (0.5, 0.8)])
def test_uniform_diameter_single_hit_is_volume_ratio(d, C, a):
    fam = EuclidBallSets(EuclidBall(d, C), a, UniformDiameter(a))
    assert fam.p_x(np.zeros(d)) == pytest.approx(a ** d / ((d + 1) * (2.0 * C + a) ** d), rel=1e-10)
    assert fam.p_xy(np.zeros(d), np.zeros(d)) == pytest.approx(fam.p_x(np.zeros(d)), rel=1e-10)


HIT_FAMILIES = {
    "halfspace": (lambda: HalfSpace(EuclidBall(2, 1.0)), 1.8),
    "halfspace-3d": (lambda: HalfSpace(EuclidBall(3, 1.0)), 1.8),
    "ball-fixed": (lambda: EuclidBallSets(EuclidBall(2, 1.0), 1.0, DeterministicRadius(0.8)), 0.9),
    "ball-uniform": (lambda: EuclidBallSets(EuclidBall(2, 1.0), 1.0, UniformDiameter(1.0)), 0.9),
    "ball-sironvalle": (lambda: EuclidBallSets(EuclidBall(2, 1.0), 1.0, Sironvalle(1.0)), 0.9),
    "ball-uniform-3d": (lambda: EuclidBallSets(EuclidBall(3, 1.0), 1.0, UniformDiameter(1.0)), 0.9),
    "hyperrect": (lambda: Hyperrect(EuclidBall(2, 1.0), (0.5, 0.25)), 0.9),
    "cap-fixed": (lambda: SphereCap(Sphere(2), DeterministicRadius(1.0)), 2.4),
    "cap-large": (lambda: SphereCap(Sphere(2), DeterministicRadius(2.2)), 3.0),
    "cap-fixed-3d": (lambda: SphereCap(Sphere(3), DeterministicRadius(1.0)), 2.4),
    "cap-hemisphere": (lambda: SphereCap(Sphere(2), Hemisphere()), 3.0),
    "cap-cosine": (lambda: SphereCap(Sphere(2), CosinePolynomial((0.25, 0.25))), 3.0),
    "cylinder-fixed": (lambda: CylinderBall(Cylinder(1.0), 1.0, DeterministicRadius(1.0)), 0.9),
    "cylinder-uniform": (lambda: CylinderBall(Cylinder(1.0), 1.0, UniformDiameter(1.0)), 0.9),
    "cylinder-sironvalle": (lambda: CylinderBall(Cylinder(1.0), 1.0, Sironvalle(1.0)), 0.9),
    "torus-fixed": (lambda: TorusBall(Torus(), 1.0, DeterministicRadius(1.0)), 0.9),
    "torus-uniform": (lambda: TorusBall(Torus(), 1.0, UniformDiameter(1.0)), 0.9),
    "torus-sironvalle": (lambda: TorusBall(Torus(), 1.0, Sironvalle(1.0)), 0.9),
}


@pytest.mark.slow
@pytest.mark.parametrize("name", sorted(HIT_FAMILIES))
def test_hit_frequencies_bracket_closed_forms(root, name):
    build, reach = HIT_FAMILIES[name]
    family = build()
    design = PairDesign.along_axis(family.space, np.linspace(0.1, reach, 5))
    pairs = [(design.anchor, probe) for probe in design.probes]
    estimates = estimate_hit_probs(family, pairs, 1_000_000, root.derive("hits", name))
    for (x, y), est in zip(pairs, estimates):
        assert abs(est.p_x_hat - family.p_x(x)) <= 4 * est.se_x
        assert abs(est.p_y_hat - family.p_x(y)) <= 4 * est.se_y
        assert abs(est.p_xy_hat - family.p_xy(x, y)) <= 4 * est.se_xy


def test_flat_ball_family_needs_an_area():
    class Strip(_FlatBallSets):
        def sample(self, rng, size):
            return SetBatch(self, {})

    with pytest.raises(TypeError):
        Strip()
