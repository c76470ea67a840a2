"""
Model registry, YAML loading and the closed-form reference geometries.

Normalized three-dimensional models satisfy K(X, Phi X) = 2 nu' - 3 with
nu' = 2 nu / kappa: sphere3 (kappa 1, nu 1) gives 1, sl2r (nu -1/4) gives -4,
nil3 (nu 0) gives -3.  Over a Kahler-Einstein curve with Rc_N = k g_N the
Phi-sectional curvature is k - 3.
"""

from __future__ import annotations

import numpy as np
import pytest

from soliton_forge.core.almost_contact import (
    DEFORMED_SASAKIAN,
    classify,
    horizontal_basis,
    phi_sectional,
    validate,
)
from soliton_forge.core.frame_geometry import curvature_chart, curvature_frame
from soliton_forge.core.zoo import (
    MODEL_REGISTRY,
    ModelId,
    build_soliton,
    build_structure,
    calabi_base,
    gaussian_soliton,
    get_model,
    heisenberg_coframe,
    model_names,
    parse_model_id,
    product_cigar_plane,
    quadratic_soliton,
    round_sphere_hypersurface,
    standard_complex_structure,
    stereographic_sphere_chart,
    tanno_model,
)
from soliton_forge.core.zoo.loader import load_models_from_yaml, model_from_dict

# ── Helpers ──────────────────────────────────────────────────────────────────


def raw_definition(**overrides) -> dict:
    d = {
        "model_id": "custom",
        "display_name": "Custom",
        "kind": "Sphere3",
        "brackets": {"kappa": 2.0, "nu": 1.0},
        "reeb_index": 2,
        "transverse_einstein": 2.0,
        "phi_sectional": -1.0,
    }
    d.update(overrides)
    return d


# ── Registry ─────────────────────────────────────────────────────────────────


def test_registry_holds_the_three_bundled_models():
    assert {"sphere3", "sl2r", "nil3"} <= set(MODEL_REGISTRY)


@pytest.mark.parametrize(
    "name,model_id",
    [
        ("sphere3", "sphere3"),
        ("SU2", "sphere3"),
        ("s3", "sphere3"),
        ("psl2r", "sl2r"),
        ("SL2RCover", "sl2r"),
        ("heisenberg", "nil3"),
        (" Nil ", "nil3"),
    ],
)
def test_get_model_resolves_ids_kinds_and_aliases(name, model_id):
    assert get_model(name).model_id == model_id


def test_get_model_unknown_lists_valid_ids():
    with pytest.raises(ValueError, match="Valid IDs"):
        get_model("torus")


def test_model_names_include_chart_models():
    names = model_names()
    assert "gaussian" in names and "cigar" in names and "hopf-hypersurface" in names


def test_parse_model_id_variants():
    assert parse_model_id("nil3") == ModelId(kind="Nil3")
    assert parse_model_id("gaussian") == ModelId(kind="GaussianSoliton", dim=4, lam=1.0)
    assert parse_model_id("gaussian:6:-1") == ModelId(kind="GaussianSoliton", dim=6, lam=-1.0)
    assert parse_model_id("cigar").kind == "Cigar"
    assert parse_model_id("hopf-hypersurface:2").radius == 2.0


@pytest.mark.parametrize(
    "text", ["nil3:2", "gaussian:3", "gaussian:x", "hopf-hypersurface:-1", "torus"]
)
def test_parse_model_id_rejects_bad_input(text):
    with pytest.raises(ValueError):
        parse_model_id(text)


def test_model_id_labels():
    assert ModelId(kind="GaussianSoliton", dim=2, lam=0.5).label == "gaussian:2:0.5"
    assert ModelId(kind="RoundSphereHypersurface", radius=2.0).label == "hopf-hypersurface:2"
    assert ModelId(kind="Nil3").label == "Nil3"
    assert ModelId(kind="Cigar").is_almost_contact is False


def test_build_structure_and_soliton_reject_wrong_kind():
    with pytest.raises(ValueError, match="not an almost-contact model"):
        build_structure(ModelId(kind="Cigar"))
    with pytest.raises(ValueError, match="not a chart soliton"):
        build_soliton(ModelId(kind="Nil3"))


# ── YAML loading ─────────────────────────────────────────────────────────────


def test_model_from_dict_reads_brackets():
    model = model_from_dict(raw_definition(aliases=["c1"]))
    assert (model.kappa, model.nu, model.reeb_index) == (2.0, 1.0, 2)
    assert model.aliases == ["c1"]


@pytest.mark.parametrize(
    "overrides,match",
    [
        ({"kind": "Torus"}, "unknown kind"),
        ({"kind": "Cigar"}, "not a homogeneous"),
        ({"brackets": {"kappa": 1.0}}, "kappa and nu"),
        ({"brackets": {"kappa": 0.0, "nu": 1.0}}, "non-zero"),
        ({"reeb_index": 3}, "reeb_index"),
    ],
)
def test_model_from_dict_rejects_malformed(overrides, match):
    with pytest.raises(ValueError, match=match):
        model_from_dict(raw_definition(**overrides))


def test_model_from_dict_requires_fields():
    d = raw_definition()
    del d["brackets"]
    with pytest.raises(ValueError, match="missing fields"):
        model_from_dict(d)


def test_user_model_file_is_merged_over_bundled(tmp_path, monkeypatch):
    models = tmp_path / ".soliton-forge" / "models"
    models.mkdir(parents=True)
    (models / "nil3.yaml").write_text('display_name: "My Heisenberg"\n', encoding="utf-8")
    monkeypatch.setenv("HOME", str(tmp_path))
    loaded = load_models_from_yaml()
    assert loaded["nil3"].display_name == "My Heisenberg"
    assert loaded["nil3"].nu == 0.0


def test_broken_user_model_is_skipped_with_warning(tmp_path, monkeypatch):
    models = tmp_path / ".soliton-forge" / "models"
    models.mkdir(parents=True)
    (models / "broken.yaml").write_text("model_id: broken\nkind: Nil3\n", encoding="utf-8")
    monkeypatch.setenv("HOME", str(tmp_path))
    with pytest.warns(UserWarning, match="skipping model 'broken'"):
        loaded = load_models_from_yaml()
    assert "broken" not in loaded
    assert "sphere3" in loaded


# ── Homogeneous models ───────────────────────────────────────────────────────


@pytest.mark.parametrize("model_id", ["sphere3", "sl2r", "nil3"])
def test_yaml_acceptance_values_match_built_frames(model_id):
    definition = get_model(model_id)
    acs = tanno_model(model_id)
    x = horizontal_basis(acs)[:, 0]
    assert phi_sectional(acs, x) == pytest.approx(definition.phi_sectional, abs=1e-10)
    assert acs.contact_scale == 1.0


def test_tanno_model_accepts_model_id():
    acs = tanno_model(ModelId(kind="SL2RCover"))
    assert acs.name == "sl2r"


@pytest.mark.parametrize("k", [4.0, 1.0, 0.0, -1.0, -2.5])
def test_calabi_base_curve_phi_sectional(k):
    acs = calabi_base(1, k)
    assert validate(acs).ok
    x = horizontal_basis(acs)[:, 0]
    assert phi_sectional(acs, x) == pytest.approx(k - 3.0, abs=1e-10)


def test_calabi_base_flat_heisenberg_in_five_dimensions():
    acs = calabi_base(2, 0.0)
    assert acs.dim == 5
    assert validate(acs).ok
    result = classify(acs)
    assert result.tag == DEFORMED_SASAKIAN
    assert result.b == pytest.approx(1.0, abs=1e-8)


def test_calabi_base_without_frame_returns_none():
    assert calabi_base(2, 1.0) is None


def test_calabi_base_rejects_non_positive_dimension():
    with pytest.raises(ValueError):
        calabi_base(0, 1.0)


def test_round_sphere_hypersurface_rejects_bad_radius():
    with pytest.raises(ValueError):
        round_sphere_hypersurface(0.0)


def test_round_sphere_hypersurface_is_scaled_unit_sphere():
    """Radius-r sphere: constant curvature 1/r^2, so S = 6/r^2."""
    acs, shape = round_sphere_hypersurface(2.0)
    assert curvature_frame(acs.frame).scalar == pytest.approx(1.5, abs=1e-10)
    np.testing.assert_allclose(shape, 0.5 * np.eye(3), atol=1e-12)


# ── Chart models ─────────────────────────────────────────────────────────────


def test_standard_complex_structure_squares_to_minus_identity():
    j = standard_complex_structure(4)
    np.testing.assert_allclose(j @ j, -np.eye(4))
    with pytest.raises(ValueError):
        standard_complex_structure(3)


def test_gaussian_soliton_is_flat_with_quadratic_potential():
    chart, f = gaussian_soliton(4, 2.0)
    points = np.array([[0.5, -0.2, 0.1, 1.0], [0.0, 0.0, 0.0, 0.0]])
    np.testing.assert_allclose(f(points), [1.3, 0.0])
    _, ricci, scalar, _ = curvature_chart(chart, points)
    assert np.max(np.abs(ricci)) < 1e-9
    assert np.max(np.abs(scalar)) < 1e-9
    with pytest.raises(ValueError):
        gaussian_soliton(3, 1.0)


def test_quadratic_soliton_potential_is_weighted():
    _, f = quadratic_soliton(np.array([1.0, 3.0]))
    assert f(np.array([2.0, 1.0])) == pytest.approx(0.5 * (4.0 + 3.0))


def test_product_cigar_plane_metric_is_block_diagonal():
    chart, f = product_cigar_plane(0.5)
    point = np.array([[1.0, 0.0, 2.0, 0.0]])
    g = chart.metric(point)[0]
    np.testing.assert_allclose(np.diag(g), [0.5, 0.5, 1.0, 1.0])
    assert f(point)[0] == pytest.approx(-np.log(2.0) + 1.0)


def test_stereographic_chart_rejects_bad_radius():
    with pytest.raises(ValueError):
        stereographic_sphere_chart(-1.0)


def test_heisenberg_coframe_is_unimodular():
    x = np.array([[0.3, -1.2, 0.5], [2.0, 1.0, -1.0]])
    np.testing.assert_allclose(np.linalg.det(heisenberg_coframe(x)), 1.0)
