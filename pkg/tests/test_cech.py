import pytest

import superbv


def hom_cochain(sheaf, text):
    table = sheaf.atlas.chart("U0").table
    value = superbv.SuperMatrix.from_strings([[text]], table, [0], [0])
    return superbv.CechCochain({("U1", "U0"): value}, system=superbv.HomCoefficients(sheaf), name="phi")


@pytest.mark.parametrize("k", range(-6, 7))
def test_line_bundle_cohomology(k):
    assert superbv.h_dims(k) == (max(0, k + 1), max(0, -k - 1))
    assert superbv.h_dims_census(k) == superbv.h_dims(k)
    assert len(superbv.h1_window(k)) == superbv.h_dims(k)[1]


def test_window_of_o_minus_two_is_not_a_coboundary():
    sheaf = superbv.line_bundle_sheaf(-2)
    split, cls = superbv.is_coboundary(hom_cochain(sheaf, "z^-1"))
    assert not split
    assert cls.to_dict() == {"[0,0] z^-1": "1"}


def test_coboundary_comes_with_witness():
    sheaf = superbv.line_bundle_sheaf(-2)
    cochain = hom_cochain(sheaf, "z^-3 + 5*z^2")
    split, witness = superbv.is_coboundary(cochain)
    assert split
    assert witness.degree == 0
    assert superbv.check_witness(cochain, witness).passed


def test_constant_cocycle_of_trivial_bundle_splits():
    sheaf = superbv.line_bundle_sheaf(0)
    cochain = hom_cochain(sheaf, "1")
    split, witness = superbv.is_coboundary(cochain)
    assert split
    assert superbv.check_witness(cochain, witness).passed
    split, _ = superbv.is_coboundary(hom_cochain(sheaf, "0"))
    assert split


def test_class_is_normal_form_modulo_coboundaries():
    sheaf = superbv.line_bundle_sheaf(-3)
    split, cls = superbv.is_coboundary(hom_cochain(sheaf, "2*z^-1 - z^-2 + z^4 + z^-7"))
    assert not split
    assert cls.to_dict() == {"[0,0] z^-1": "2", "[0,0] z^-2": "-1"}


def test_atiyah_class_of_line_bundles():
    at = superbv.atiyah_cocycle(superbv.line_bundle_sheaf(3))
    assert all(result.passed for result in superbv.check_atiyah_cocycle(at))
    split, cls = superbv.is_coboundary(at)
    assert not split
    assert cls.to_dict() == {"z[0,0] z^-1": "3"}
    assert superbv.chern_degree(cls) == 3


@pytest.mark.parametrize("k", range(-4, 5))
def test_atiyah_class_of_line_bundle_vanishes_only_for_trivial_bundle(k):
    at = superbv.atiyah_cocycle(superbv.line_bundle_sheaf(k))
    assert at.is_zero() == (k == 0)
    split, cls = superbv.is_coboundary(at)
    assert split == (k == 0)
    if k:
        assert superbv.chern_degree(cls) == k


def test_tangent_bundle_of_projective_line_has_degree_two():
    at = superbv.atiyah_cocycle(superbv.tangent_sheaf(superbv.build_projective(1, 0)))
    split, cls = superbv.is_coboundary(at)
    assert not split
    assert superbv.chern_degree(cls) == 2


def test_atiyah_cocycle_on_triple_overlaps():
    at = superbv.atiyah_cocycle(superbv.tangent_sheaf(superbv.build_projective(2, 0)))
    results = superbv.check_atiyah_cocycle(at)
    assert len(results) == 6
    assert all(result.passed for result in results)


def test_three_chart_classes_are_unsupported():
    at = superbv.atiyah_cocycle(superbv.tangent_sheaf(superbv.build_projective(2, 0)))
    with pytest.raises(superbv.Unsupported):
        superbv.is_coboundary(at)


def test_direct_sum_is_block_diagonal():
    total = superbv.direct_sum([superbv.line_bundle_sheaf(-1), superbv.line_bundle_sheaf(2)])
    g = total.transition("U1", "U0")
    assert g.block([0], [1]).is_zero() and g.block([1], [0]).is_zero()
    assert g[1, 1] == superbv.parse_scalar("z^2", total.atlas.chart("U0").table)


@pytest.mark.parametrize("n, m", [(1, 0), (1, 3), (2, 2), (3, 0), (3, 3)])
def test_extension_class_of_affine_space_splits(n, m):
    m_sheaf = superbv.cotangent_transitions(superbv.bv_total_space(superbv.build_affine(n, m)))
    cochain, _ = superbv.ext_class_omega1(m_sheaf)
    split, witness = superbv.is_coboundary(cochain)
    assert split
    assert superbv.check_ext_witness(m_sheaf, witness).passed
    _, reduction = superbv.reduce_structure_group(m_sheaf, witness)
    assert reduction.passed


@pytest.mark.parametrize("name, dims", [("cp", (1, 0)), ("cp", (1, 1)), ("cp", (1, 2)), ("conic", (1, 2))])
def test_extension_class_of_curved_bases_does_not_split(name, dims):
    m_sheaf = superbv.cotangent_transitions(superbv.bv_total_space(superbv.example_atlas(name, dims)))
    cochain, reduced = superbv.ext_class_omega1(m_sheaf)
    assert set(reduced) == set(m_sheaf.pairs())
    split, cls = superbv.is_coboundary(cochain)
    assert not split
    assert not cls.is_zero()


def test_extension_cocycle_is_linear_in_the_fiber():
    m_sheaf = superbv.cotangent_transitions(superbv.bv_total_space(superbv.build_projective(1, 0)))
    _, reduced = superbv.ext_class_omega1(m_sheaf)
    assert set(reduced[("U1", "U0")]) == {"p_z"}


def test_fermionic_twists():
    assert superbv.fermionic_twists(superbv.build_super_conic()) == (-2, -2)
    assert superbv.fermionic_twists(superbv.build_projective(1, 2)) == (-1, -1)
    with pytest.raises(superbv.Unsupported):
        superbv.fermionic_twists(superbv.build_projective(2, 1))


def test_conic_decomposition_has_three_nonzero_components():
    conic = superbv.build_super_conic()
    at = superbv.atiyah_cocycle(superbv.tangent_sheaf(conic))
    decomposition = superbv.dw_decompose(at, conic)
    red, omega, ferm = decomposition
    assert not red.is_zero()
    assert not omega.is_zero()
    assert not ferm.is_zero()
    assert omega.to_dict() == {"omega[theta1,theta2] z^-1": "1"}
    assert superbv.check_dw_components(at, decomposition).passed
    assert set(decomposition.to_dict()) == {"red", "omega", "ferm"}


def test_projected_line_has_no_odd_component():
    cp = superbv.build_projective(1, 2)
    at = superbv.atiyah_cocycle(superbv.tangent_sheaf(cp))
    decomposition = superbv.dw_decompose(at, cp)
    assert decomposition.omega.is_zero()
    assert not decomposition.red.is_zero()
    assert superbv.check_dw_components(at, decomposition).passed


def test_decomposition_needs_projective_line():
    cp2 = superbv.build_projective(2, 0)
    at = superbv.atiyah_cocycle(superbv.tangent_sheaf(cp2))
    with pytest.raises(superbv.Unsupported):
        superbv.dw_decompose(at, cp2)


def test_components_check_rejects_wrong_classes():
    conic = superbv.build_super_conic()
    at = superbv.atiyah_cocycle(superbv.tangent_sheaf(conic))
    decomposition = superbv.dw_decompose(at, conic)
    empty = superbv.CohomologyClass({})
    hollow = superbv.DonagiWittenDecomposition(empty, empty, empty, decomposition.blocks, empty)
    result = superbv.check_dw_components(at, hollow)
    assert not result.passed
    assert "red:" in result.residual and "ferm:" in result.residual
    doubled = superbv.DonagiWittenDecomposition(decomposition.red, decomposition.omega.scaled(2), decomposition.ferm,
                                                decomposition.blocks, decomposition.symmetric_part)
    result = superbv.check_dw_components(at, doubled)
    assert not result.passed
    assert "theta" in result.residual
