import math

import numpy as np
import pytest

from components.sums import draw_sums
from models.catalog import catalog
from models.distributions import DeterministicCount, Gaussian, Hemisphere, Poisson, UniformValue
from models.estimation import (
    CHUNK_REPLICATES,
    EstimateRow,
    PairDesign,
    calibration_status,
    compare_report,
    estimate_correlation,
    estimate_hit_probs,
    normality_summary,
)
from models.exceptions import DegenerateModelError, DomainError
from models.fields import FieldModel, GeneralLinear, Mixture, RandomToken, SimpleMosaic
from models.random_sets import HalfSpace, SphereCap
from models.spaces import Cylinder, EuclidBall, Sphere, Torus


def hemisphere_model(submodel=RandomToken(), count=Poisson(10.0)):
    space = Sphere(2)
    return FieldModel(space, SphereCap(space, Hemisphere()), count, Gaussian(1.0, 1.0), submodel)


@pytest.mark.parametrize("space", [EuclidBall(2, 1.0), Sphere(2), Cylinder(1.0), Torus()], ids=lambda s: s.kind)
def test_pair_design_realises_distances(space):
    d = [0.0, 0.5, 1.0, 2.0] if space.kind in ("euclid-ball", "sphere") else [0.0, 0.5, 3.0]
    design = PairDesign.along_axis(space, d)
    assert np.allclose(space.distances(design.probes, design.anchor), d)
    assert design.points.shape == (len(d) + 1, space.width)


def test_pair_design_rejects_bad_distances():
    with pytest.raises(DomainError):
        PairDesign.along_axis(Sphere(2), [])
    with pytest.raises(DomainError):
        PairDesign.along_axis(Sphere(2), [-0.1, 0.2])
    with pytest.raises(DomainError):
        PairDesign.along_axis(Sphere(2), [[0.1, 0.2]])
    with pytest.raises(DomainError):
        PairDesign.along_axis(Torus(), [0.5, 3.5])
    with pytest.raises(DomainError):
        PairDesign.along_axis(EuclidBall(2, 1.0), [2.5])


def test_too_few_replicates(root):
    design = PairDesign.along_axis(Sphere(2), [0.5])
    with pytest.raises(DomainError):
        estimate_correlation(hemisphere_model(), design, 99, root)


def test_token_correlation_is_calibrated(root):
    model = hemisphere_model()
    design = PairDesign.along_axis(model.space, [0.0, 0.5, 1.5, math.pi])
    rows = estimate_correlation(model, design, 2000, root)
    assert rows[0].rho_hat == pytest.approx(1.0, abs=1e-12)
    assert rows[0].rho_analytic == pytest.approx(1.0)
    # token on hemispheres with Poisson N: rho = 1 - d / pi
    assert [r.rho_analytic for r in rows] == pytest.approx([1.0, 1.0 - 0.5 / math.pi, 1.0 - 1.5 / math.pi, 0.0], abs=1e-12)
    assert all(abs(r.z) < 5.0 for r in rows)
    assert calibration_status(rows) in ("pass", "flagged")


def test_estimates_are_reproducible(root):
    model = hemisphere_model(SimpleMosaic(), Poisson(3.0))
    design = PairDesign.along_axis(model.space, [0.2, 1.0])
    first = estimate_correlation(model, design, 300, root)
    again = estimate_correlation(model, design, 300, root)
    assert first == again


def test_supplied_correlation_function_is_used(root):
    model = hemisphere_model()
    design = PairDesign.along_axis(model.space, [0.5])
    rows = estimate_correlation(model, design, 200, root, rho=lambda d: np.full_like(d, 0.25))
    assert rows[0].rho_analytic == 0.25


def test_constant_field_gives_undefined_estimate(root):
    model = hemisphere_model(Mixture(), DeterministicCount(0))
    design = PairDesign.along_axis(model.space, [0.5])
    rows = estimate_correlation(model, design, 100, root, rho=lambda d: np.ones_like(d))
    assert rows[0].degenerate
    assert calibration_status(rows) == "pass"


@pytest.mark.slow
def test_results_do_not_depend_on_thread_count(root):
    model = hemisphere_model(SimpleMosaic(), Poisson(3.0))
    design = PairDesign.along_axis(model.space, [0.4, 1.2])
    m = 2 * CHUNK_REPLICATES + 10
    serial = estimate_correlation(model, design, m, root, threads=1)
    parallel = estimate_correlation(model, design, m, root, threads=3)
    assert serial == parallel


@pytest.mark.slow
@pytest.mark.parametrize(
    "row_id",
    ["t1r1", "t1r4", "t1r6", "t1r7", "t1r8", "t2r1", "t2r5", "t2r7", "t2r10", "t2r4", "t1r9"],
)
def test_catalog_rows_are_calibrated(root, row_id):
    entry = catalog(row_id)
    design = PairDesign.along_axis(entry.model.space, np.linspace(0.1, 0.9 * entry.max_distance / 2.0, 10))
    rows = estimate_correlation(entry.model, design, 20_000, root.derive("calibration", row_id), rho=entry, threads=2)
    assert calibration_status(rows) != "fail"


@pytest.mark.slow
def test_general_linear_model_is_calibrated(root):
    model = hemisphere_model(GeneralLinear(2, 1, 5, "max_index"), Poisson(4.0))
    design = PairDesign.along_axis(model.space, [0.3, 1.0, 2.0])
    rows = estimate_correlation(model, design, 20_000, root, threads=2)
    assert calibration_status(rows) != "fail"


def test_hit_probabilities_match_closed_form(root):
    space = EuclidBall(2, 1.0)
    family = HalfSpace(space)
    x, y = np.array([-0.4, 0.0]), np.array([0.4, 0.0])
    (est,) = estimate_hit_probs(family, [(x, y)], 200_000, root)
    assert abs(est.p_x_hat - 0.5) < 4 * est.se_x
    assert abs(est.p_y_hat - 0.5) < 4 * est.se_y
    assert abs(est.p_xy_hat - family.p_xy(x, y)) < 4 * est.se_xy


def test_hit_probabilities_need_enough_sets(root):
    with pytest.raises(DomainError):
        estimate_hit_probs(HalfSpace(EuclidBall(2, 1.0)), [(np.zeros(2), np.zeros(2))], 999, root)


def test_compare_report_layout():
    rows = [EstimateRow(0.5, 0.25, 0.01, 0.26, -1.0), EstimateRow(1.0, math.nan, math.nan, 0.1, math.nan)]
    text = compare_report(rows)
    lines = text.splitlines()
    assert lines[0] == "d,rho_hat,se,rho_analytic,z"
    assert lines[1] == "0.5,0.25,0.01,0.26000000000000001,-1"
    assert lines[2] == "1,nan,nan,0.10000000000000001,nan"
    assert text.endswith("\n")


def test_calibration_status():
    def row(z):
        return EstimateRow(0.0, 0.0, 1.0, 0.0, z)

    assert calibration_status([row(0.5), row(-3.9)]) == "pass"
    assert calibration_status([row(4.5), row(1.0)]) == "flagged"
    assert calibration_status([row(4.5), row(-6.0)]) == "fail"
    assert calibration_status([row(math.nan)]) == "pass"


def test_normality_summary(rng):
    frame = normality_summary(rng.standard_normal((2000, 2)))
    assert list(frame.columns) == ["point", "mean", "variance", "ks_pvalue"]
    assert frame["mean"].abs().max() < 4.0 / math.sqrt(2000)
    assert frame["ks_pvalue"].min() > 1e-3
    skewed = normality_summary(rng.exponential(size=(2000, 1)))
    assert skewed["ks_pvalue"].item() < 1e-6
    with pytest.raises(DegenerateModelError):
        normality_summary(np.zeros((1, 3)))


@pytest.mark.slow
def test_normalised_sums_of_hemisphere_mosaics_are_normal(root):
    space = Sphere(2)
    model = FieldModel(space, SphereCap(space, Hemisphere()), Poisson(3.0), UniformValue(0.0, 1.0), SimpleMosaic())
    design = PairDesign.along_axis(space, [0.0, 1.0])
    sums = draw_sums(model, 200, design.probes, 10_000, root.derive("clt"), threads=4)
    assert sums.shape == (10_000, 2)
    summary = normality_summary(sums)
    assert summary["ks_pvalue"].min() > 1e-3
    assert summary["mean"].abs().max() < 4.0 / math.sqrt(10_000)
    assert (summary["variance"] - 1.0).abs().max() < 4.0 * math.sqrt(2.0 / 10_000)
