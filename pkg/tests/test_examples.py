import pytest

import superbv
from superbv.examples import CONIC_QUADRIC, NORMALIZING_MATRIX, NORMAL_FORM, QUADRIC_TABLE


def by_name(results):
    return {result.name: result for result in results}


def test_affine_names():
    atlas = superbv.build_affine(2, 3)
    assert atlas.name == "affine2|3"
    assert atlas.chart("U0").coords == ("z1", "z2", "theta1", "theta2", "theta3")
    assert atlas.pairs() == []


def test_projective_line_transition():
    cp = superbv.build_projective(1, 1)
    image = cp.transition("U0", "U1").images["psi1"]
    assert image == superbv.parse_scalar("theta1*z^-1", cp.chart("U0").table)
    assert len(superbv.build_projective(2, 1).charts) == 3


def test_unsupported_dimensions():
    with pytest.raises(superbv.Unsupported):
        superbv.build_projective(3, 0)
    with pytest.raises(ValueError):
        superbv.build_projective(1, -1)
    with pytest.raises(ValueError):
        superbv.build_affine(-1, 0)
    with pytest.raises(ValueError):
        superbv.example_atlas("torus")
    with pytest.raises(ValueError):
        superbv.example_atlas("conic", (1, 1))
    with pytest.raises(ValueError):
        superbv.build_super_conic(lam=0)


def test_default_dimensions():
    assert superbv.example_atlas("affine").dims == (1, 1)
    assert superbv.example_atlas("cp").dims == (1, 0)
    assert superbv.example_atlas("conic").dims == (1, 2)


def test_rescaled_conic_is_an_atlas():
    conic = superbv.build_super_conic(lam=2)
    assert all(result.passed for result in superbv.verify_atlas(conic))
    at = superbv.atiyah_cocycle(superbv.tangent_sheaf(conic))
    assert not superbv.dw_decompose(at, conic).omega.is_zero()


def test_conic_sections_are_global():
    bundle, sections = superbv.conic_line_bundle_sections()
    assert [section.name for section in sections] == ["X0", "X1", "X2", "Theta1", "Theta2"]
    assert all(section.check(bundle).passed for section in sections)
    assert sections[3].parity is superbv.Parity.ODD


def test_non_global_section_is_reported():
    bundle = superbv.conic_line_bundle()
    u0, u1 = bundle.atlas.chart("U0"), bundle.atlas.chart("U1")
    fake = superbv.GlobalSection("fake", {"U0": superbv.parse_scalar("z^3", u0.table),
                                          "U1": superbv.parse_scalar("w^-1", u1.table)})
    result = fake.check(bundle)
    assert not result.passed
    assert result.residual


def test_section_space_dimension():
    assert superbv.section_space_dims(superbv.conic_line_bundle()) == (3, 2)


def test_conic_equation():
    results = by_name(superbv.conic_equation_check())
    assert all(result.passed for result in results.values())
    for chart in ("U0", "U1"):
        data = results["conic.equation.{}".format(chart)].data
        assert data["printed_form_value"] != "0"
    assert results["conic.h0"].data["h0"] == [3, 2]


def test_normalizing_matrix():
    quadric = superbv.parse_scalar(CONIC_QUADRIC, QUADRIC_TABLE)
    image = superbv.pgl_transform(quadric, NORMALIZING_MATRIX)
    assert image == superbv.parse_scalar(NORMAL_FORM, QUADRIC_TABLE)
    with pytest.raises(ValueError):
        superbv.pgl_transform(quadric, [[1, 0], [0, 1]])


@pytest.mark.parametrize("twists, degree, dim, structure", [
    ((-2, -2), -2, 1, "non-projected"),
    ((-3, -3), -4, 3, "non-projected"),
    ((-1, -1), 0, 0, "split"),
    ((0, -3), -1, 0, "split"),
])
def test_classification(twists, degree, dim, structure):
    classification = superbv.classify_1_2_over_p1(*twists)
    assert classification.obstruction_degree == degree
    assert classification.obstruction_dim == dim
    assert classification.structure == structure
    assert classification.to_dict()["twists"] == list(twists)


def test_classification_without_obstruction_request():
    assert superbv.classify_1_2_over_p1(-2, -2, omega_nonzero=False).structure == "split"


@pytest.mark.parametrize("m", range(-4, 5))
@pytest.mark.parametrize("n", range(-4, 5))
def test_classification_agrees_with_window_count(m, n):
    classification = superbv.classify_1_2_over_p1(m, n)
    assert classification.obstruction_dim == len(superbv.h1_window(2 + m + n))
    assert classification.non_projected_exists == (m + n <= -4)
