"""
Soliton identities, the Killing field J grad f, rectifiability and transnormal fits.

Reference values:

    Gaussian (flat R^4, f = lam |x|^2 / 2):  S = 0, S + |grad f|^2 - 2 lam f = 0
    cigar (lam = 0):  S = 4/(1 + r^2), |grad f|^2 = 4 r^2/(1 + r^2), so the
                      conserved quantity is 4 and b(f) = 4 (1 - e^f)
    Fubini-Study tube (B = 0):  Kahler-Einstein, S = 4 lam
"""

from __future__ import annotations

import dataclasses

import numpy as np
import pytest

from soliton_forge.core.errors import NotASolitonError, UnsupportedInputError
from soliton_forge.core.identity_suite import (
    SolitonSample,
    fd_soliton_residual,
    hess_f_multiplicity,
    killing_passes,
    killing_residual,
    rectifiability_report,
    soliton_identities,
    transnormal_fit,
)
from soliton_forge.core.soliton import (
    SolitonProblem,
    analytic_profile,
    calabi_to_tube,
    solve_alpha,
)
from soliton_forge.core.zoo import (
    cigar_soliton,
    gaussian_soliton,
    product_cigar_plane,
    quadratic_soliton,
    stereographic_sphere_chart,
)

from .golden.reference_tubes import gaussian_tube, scale_reeb_profile

# ── Helpers ──────────────────────────────────────────────────────────────────

PLANE_POINTS = np.array([[0.3, 0.2], [0.8, -0.4], [-1.0, 0.5], [0.1, 1.2], [-0.6, -0.7]])
SPACE_POINTS = np.array(
    [
        [0.3, 0.2, -0.1, 0.5],
        [0.8, -0.4, 0.2, 0.0],
        [-1.0, 0.5, 0.3, 0.2],
        [0.1, 1.2, -0.6, 0.4],
    ]
)


def gaussian_sample(lam: float = 1.0, points: np.ndarray = SPACE_POINTS) -> SolitonSample:
    chart, f = gaussian_soliton(4, lam)
    return SolitonSample.from_chart(chart, lam, points, potential=f)


def cigar_sample(points: np.ndarray = PLANE_POINTS) -> SolitonSample:
    chart, f = cigar_soliton()
    return SolitonSample.from_chart(chart, 0.0, points, potential=f)


def radial_cigar_sample(size: int = 40) -> SolitonSample:
    """Points at distinct radii in [0.3, 1.5] and scattered angles."""
    radius = np.linspace(0.3, 1.5, size)
    angle = np.linspace(0.0, 5.0 * np.pi, size)
    points = radius[:, None] * np.stack([np.cos(angle), np.sin(angle)], axis=1)
    return cigar_sample(points)


def fubini_study_tube(lam: float = 1.0):
    p = SolitonProblem(lam=lam, k=4.0, n=1, A=0.0, B=0.0, C=0.0, s_min=0.0, s_max=2.0)
    return calabi_to_tube(solve_alpha(p, alpha_init=None, grid_size=101)), p


def shrinking_tube():
    """Non-Einstein shrinking soliton over the Hopf sphere with f = 0.3 s."""
    p = SolitonProblem(lam=1.0, k=4.0, n=1, A=0.0, B=0.3, C=0.0, s_min=0.0, s_max=1.5)
    return calabi_to_tube(solve_alpha(p, alpha_init=None, grid_size=101)), p


def cubic_potential_tube(c: float, derivatives_follow: bool = True):
    """Flat tube with f = t^2 / 2 + c t^3; optionally keep the Gaussian derivatives."""
    tube, _ = gaussian_tube(lam=1.0)

    def value(t):
        return 0.5 * t * t + c * t**3

    if derivatives_follow:
        f = analytic_profile(value, lambda t: t + 3.0 * c * t * t, lambda t: 1.0 + 6.0 * c * t)
    else:
        f = analytic_profile(value, lambda t: t, lambda t: 1.0 + 0.0 * t)
    return dataclasses.replace(tube, f=f)


# ── Samples ──────────────────────────────────────────────────────────────────


def test_chart_sample_takes_potential_and_complex_structure_from_chart():
    chart, _ = cigar_soliton()
    sample = SolitonSample.from_chart(chart, 0.0, PLANE_POINTS)
    assert sample.potential is not None
    assert sample.complex_structure is not None
    assert sample.name == "cigar"
    np.testing.assert_array_equal(sample.components, np.zeros(len(PLANE_POINTS), dtype=int))


def test_sample_validation():
    chart, f = cigar_soliton()
    with pytest.raises(ValueError, match="dimension"):
        SolitonSample.from_chart(chart, 0.0, SPACE_POINTS, potential=f)
    with pytest.raises(ValueError, match="component labels"):
        SolitonSample.from_chart(chart, 0.0, PLANE_POINTS, potential=f, components=[0, 1])
    with pytest.raises(ValueError, match="not finite"):
        SolitonSample.from_chart(
            chart, 0.0, PLANE_POINTS, potential=lambda x: np.full(len(x), np.nan)
        )
    tube, _ = gaussian_tube()
    with pytest.raises(ValueError, match="inside"):
        SolitonSample.from_tube(tube, 1.0, params=np.array([0.5, 2.0]))


# ── Soliton identities ───────────────────────────────────────────────────────


@pytest.mark.parametrize("lam", [1.0, -0.5])
def test_gaussian_identities(lam):
    report = soliton_identities(gaussian_sample(lam))
    assert report.passed, report.residuals
    assert report.precondition < 1e-8
    assert report.constants[0] == pytest.approx(0.0, abs=1e-6)


def test_cigar_identities_and_conserved_quantity():
    report = soliton_identities(cigar_sample())
    assert report.passed, report.residuals
    assert report.constants[0] == pytest.approx(4.0, abs=1e-6)
    assert report.to_dict()["conservation_constants"]["0"] == report.constants[0]


def test_conservation_constants_are_per_component():
    points = np.vstack([PLANE_POINTS, -PLANE_POINTS])
    labels = [0] * len(PLANE_POINTS) + [1] * len(PLANE_POINTS)
    chart, f = cigar_soliton()
    sample = SolitonSample.from_chart(chart, 0.0, points, potential=f, components=labels)
    report = soliton_identities(sample)
    assert set(report.constants) == {0, 1}
    assert report.constants[1] == pytest.approx(4.0, abs=1e-6)


def test_product_cigar_plane_soliton_passes():
    chart, f = product_cigar_plane(0.0)
    points = np.hstack([PLANE_POINTS[:3], PLANE_POINTS[2:5]])
    report = soliton_identities(SolitonSample.from_chart(chart, 0.0, points, potential=f))
    assert report.passed, report.residuals


def test_perturbed_potential_is_rejected():
    chart, f = product_cigar_plane(0.5)
    points = np.hstack([PLANE_POINTS[:3], PLANE_POINTS[2:5]])
    sample = SolitonSample.from_chart(chart, 0.0, points, potential=f)
    assert fd_soliton_residual(sample) > 0.1
    with pytest.raises(NotASolitonError):
        soliton_identities(sample)


def test_gaussian_tube_identities():
    tube, problem = gaussian_tube(lam=1.0)
    report = soliton_identities(SolitonSample.from_tube(tube, problem.lam, size=24))
    assert report.passed, report.residuals


def test_fubini_study_tube_identities():
    tube, p = fubini_study_tube(1.0)
    report = soliton_identities(SolitonSample.from_tube(tube, p.lam, size=24))
    assert report.passed, report.residuals
    # f is constant, so the conserved quantity is S = 4 lam
    assert report.constants[0] == pytest.approx(4.0, abs=1e-6)


def test_tube_residual_detects_scaled_reeb_profile():
    tube, problem = gaussian_tube()
    sample = SolitonSample.from_tube(scale_reeb_profile(tube, 1.01), problem.lam, size=12)
    assert fd_soliton_residual(sample) > 1e-3


# ── Killing field ────────────────────────────────────────────────────────────


def test_gaussian_gradient_rotation_is_killing():
    value = killing_residual(gaussian_sample())
    assert value < 1e-8
    assert killing_passes(value)


def test_unequal_weights_break_killing():
    chart, f = quadratic_soliton(np.array([1.0, 3.0, 1.0, 1.0]))
    sample = SolitonSample.from_chart(chart, 1.0, SPACE_POINTS, potential=f)
    assert killing_residual(sample) > 1e-2


def test_killing_needs_complex_structure():
    chart = stereographic_sphere_chart(1.0)
    sample = SolitonSample.from_chart(
        chart, 1.0, PLANE_POINTS, potential=lambda x: np.sum(x * x, axis=-1)
    )
    with pytest.raises(UnsupportedInputError):
        killing_residual(sample)


# ── Rectifiability ───────────────────────────────────────────────────────────


@pytest.mark.parametrize("make_sample", [gaussian_sample, cigar_sample])
def test_radial_solitons_are_rectifiable(make_sample):
    report = rectifiability_report(make_sample())
    assert report.all_pass, report.residuals
    assert report.consistent
    assert report.skipped == 0


def test_critical_points_are_skipped():
    points = np.vstack([SPACE_POINTS, np.zeros((1, 4))])
    report = rectifiability_report(gaussian_sample(points=points))
    assert report.skipped == 1
    assert report.all_pass


def test_tube_rectifiability_is_measured_on_the_chart():
    tube, problem = shrinking_tube()
    sample = SolitonSample.from_tube(tube, problem.lam, size=12)
    report = rectifiability_report(sample, max_slices=4)
    assert report.all_pass, report.residuals
    assert report.to_dict()["skipped_points"] == 0
    assert report.residuals["eigenvector"] > 0.0


def test_tilted_potential_on_tube_chart_fails_every_condition():
    tube, problem = shrinking_tube()
    sample = SolitonSample.from_tube(tube, problem.lam, size=4, via_chart=True)
    chart = sample.geometry
    tilted = dataclasses.replace(sample, potential=lambda x: chart.potential(x) + 0.5 * x[..., 0])
    report = rectifiability_report(tilted)
    assert not any(report.passes.values()), report.residuals
    assert report.consistent


def test_tube_rectifiability_needs_hopf_chart():
    tube = dataclasses.replace(gaussian_tube()[0], n=2, k=6.0)
    with pytest.raises(UnsupportedInputError):
        rectifiability_report(SolitonSample.from_tube(tube, 1.0, size=4))


# ── Transnormal fit ──────────────────────────────────────────────────────────


def test_cigar_is_transnormal_and_isoparametric():
    sample = radial_cigar_sample()
    fit = transnormal_fit(sample)
    assert fit.transnormal
    assert fit.isoparametric
    assert fit.global_functional
    assert fit.critical_values == []

    rows = fit.table()
    assert len(rows) == len(sample.points)
    for row in rows:
        assert row["b"] == pytest.approx(4.0 * (1.0 - np.exp(row["f"])), abs=1e-8)
        assert row["b_fit"] == pytest.approx(row["b"], abs=1e-12)
    assert fit.segment is not None
    assert fit.segment["relative_error"] < 1e-4


def test_critical_values_are_recorded():
    points = np.vstack([SPACE_POINTS, np.zeros((1, 4))])
    fit = transnormal_fit(gaussian_sample(points=points))
    assert fit.critical_values == [0.0]
    assert fit.to_dict()["critical_values"] == [0.0]


def test_tube_transnormal_fit():
    tube, problem = gaussian_tube()
    fit = transnormal_fit(SolitonSample.from_tube(tube, problem.lam, size=30))
    assert fit.transnormal
    assert fit.isoparametric


# ── Hess f multiplicities ────────────────────────────────────────────────────


def test_hess_f_multiplicity_on_gaussian_tube():
    tube, _ = gaussian_tube(lam=1.0)
    report = hess_f_multiplicity(tube, np.array([0.5, 1.0, 1.5]))
    assert report.multiplicities == (2, 2)
    assert report.pair_gap < 1e-12
    assert report.slice_deviation is not None
    assert report.ok


def test_hess_f_multiplicity_without_hopf_chart():
    tube = dataclasses.replace(gaussian_tube()[0], n=2, k=6.0)
    report = hess_f_multiplicity(tube, np.array([0.5, 1.0]))
    assert report.multiplicities == (2, 4)
    assert report.slice_deviation is None
    assert report.chart_error is None
    assert report.ok


def test_hess_f_multiplicity_detects_split_normal_pair():
    report = hess_f_multiplicity(cubic_potential_tube(0.1), np.array([0.5, 1.0, 1.5]))
    # f'' - f' H'/H = 3 c t
    assert report.pair_gap == pytest.approx(0.45, abs=1e-10)
    assert report.chart_error is not None and report.chart_error < 1e-6
    assert not report.ok


def test_hess_f_multiplicity_fails_when_chart_disagrees():
    tube = cubic_potential_tube(0.1, derivatives_follow=False)
    report = hess_f_multiplicity(tube, np.array([0.5, 1.0, 1.5]))
    assert report.pair_gap < 1e-12
    assert report.slice_deviation < 1e-7
    assert report.chart_error > 0.1
    assert not report.ok
