import numpy as np
import pytest
from hypothesis import given, strategies as st

import superbv

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)
small_dims = st.sampled_from([(1, 0), (0, 1), (1, 1), (2, 1)])


def results_by_name(results):
    return {result.name: result for result in results}


@pytest.mark.parametrize("n, m", [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)])
def test_primitive_of_symplectic_form(n, m):
    assert superbv.d(superbv.primitive_form(n, m)) == superbv.symplectic_form(n, m)


def test_form_algebra_rejects_empty_base():
    with pytest.raises(ValueError):
        superbv.FormAlgebra(0, 0)


@given(seed=seeds, dims=small_dims)
def test_differentials_square_to_zero(seed, dims):
    algebra = superbv.form_algebra(*dims)
    form = superbv.random_form(algebra, np.random.default_rng(seed))
    assert not superbv.d(superbv.d(form))
    assert not superbv.s(superbv.s(form))
    assert not superbv.d(superbv.s(form)) + superbv.s(superbv.d(form))


@given(seed=seeds, dims=small_dims)
def test_laplacian_squares_to_zero(seed, dims):
    algebra = superbv.form_algebra(*dims)
    section = superbv.random_section(algebra, np.random.default_rng(seed))
    assert not superbv.bv_laplacian(superbv.bv_laplacian(section))


def test_laplacian_examples():
    algebra = superbv.form_algebra(1, 1)
    assert superbv.bv_laplacian(superbv.BerSection(algebra, "z^2*p_z")) == superbv.BerSection(algebra, "2*z")
    assert not superbv.bv_laplacian(superbv.BerSection(algebra, "theta*p_z"))


def test_ber_section_rejects_form_symbols():
    with pytest.raises(ValueError):
        superbv.BerSection(superbv.form_algebra(1, 0), "dz")


def test_lambda_values():
    algebra = superbv.form_algebra(1, 1)
    assert superbv.lambda_value(superbv.MixedForm(algebra, "dz*dp_theta")) == 0
    assert superbv.lambda_value(superbv.MixedForm(algebra, "dz*dp_z")) == 2
    assert superbv.MixedForm(algebra, "dtheta^2*dp_z").profile().bidegree == (2, 1)


@pytest.mark.parametrize("n, m", [(1, 0), (0, 1), (1, 1)])
def test_contraction_is_inverse_to_symplectic_form(n, m):
    assert superbv.check_lambda_formula(n, m, form_degree=2).passed


def test_s_exact_preimage():
    algebra = superbv.form_algebra(1, 0)
    omega = superbv.symplectic_form(1, 0)
    assert superbv.s_exact_preimage(omega) == superbv.MixedForm(algebra, 1)
    assert superbv.s_exact_preimage(superbv.MixedForm(algebra, "dz")) is None


def test_lambda_census_matches_homology():
    census = superbv.lambda_census(1, 2)
    assert (census["homology"] == census["lambda_zero"]).all()
    nonzero = census[census["homology"] > 0]
    assert list(zip(nonzero["deg_eta"], nonzero["deg_F"], nonzero["homology"])) == [(1, 2, 1)]


def test_s_homology_basis():
    algebra = superbv.form_algebra(1, 2)
    basis = superbv.s_homology_basis(1, 2, x_max=0, p_max=0)
    assert basis == [superbv.MixedForm(algebra, "dz*dp_theta1*dp_theta2")]
    assert len(superbv.s_homology_basis(1, 0, x_max=1, p_max=0)) == 2
    with pytest.raises(ValueError):
        superbv.s_homology_basis(0, 2, form_degree=1)


def test_s_homology_basis_default_truncation():
    assert len(superbv.s_homology_basis(1, 0)) == 10
    assert superbv.s_homology_basis(1, 0) == superbv.s_homology_basis(1, 0, x_max=4, p_max=4)


def test_lambda_formula_covers_higher_function_degrees():
    small = superbv.check_lambda_formula(1, 1, form_degree=1, x_max=0, p_max=0)
    large = superbv.check_lambda_formula(1, 1, form_degree=1, x_max=3, p_max=2)
    assert small.passed and large.passed
    assert large.data["monomials"] > small.data["monomials"]


def test_homotopy_of_laplacian():
    assert superbv.check_bv_homotopy(1, 1, x_max=2, p_max=2).passed
    assert superbv.check_bv_homotopy(2, 1, x_max=2, p_max=2).passed


def test_homotopy_examples():
    line = superbv.form_algebra(1, 0)
    assert superbv.bv_homotopy_K(superbv.BerSection(line, 1)) == superbv.BerSection(line, "z*p_z")
    algebra = superbv.form_algebra(1, 1)
    failure = superbv.BerSection(algebra, algebra.failure_monomial)
    assert not superbv.bv_homotopy_K(failure)
    assert superbv.projection_P(failure) == failure
    assert not superbv.projection_P(superbv.BerSection(algebra, "z*p_z"))


def test_delta3_is_the_laplacian():
    algebra = superbv.form_algebra(1, 1)
    section = superbv.BerSection(algebra, "z*p_z + theta*p_theta")
    assert superbv.delta3(section) == superbv.bv_laplacian(section)
    assert superbv.check_delta3(section).passed


@given(seed=seeds, dims=st.sampled_from([(1, 0), (1, 1), (0, 2)]))
def test_delta3_on_random_sections(seed, dims):
    algebra = superbv.form_algebra(*dims)
    section = superbv.random_section(algebra, np.random.default_rng(seed))
    assert superbv.check_delta3(section).passed


def test_page3_homology_has_one_class():
    frame = superbv.page3_homology(2, 1, x_max=2, p_max=3)
    assert int(frame["homology"].sum()) == 1
    row = frame[frame["homology"] > 0].iloc[0]
    assert (row["x_degree"], row["p_degree"]) == (1, 2)


def test_de_rham_primitive():
    omega = superbv.symplectic_form(1, 1)
    assert superbv.d(superbv.deRham_homotopy(omega)) == omega


def test_de_rham_errors():
    algebra = superbv.form_algebra(1, 0)
    with pytest.raises(superbv.Unsupported):
        superbv.deRham_homotopy(superbv.symplectic_form(1, 0), basepoint={"z": 1})
    with pytest.raises(ValueError):
        superbv.deRham_homotopy(superbv.MixedForm(algebra, "p_z*dz"))
    with pytest.raises(ValueError):
        superbv.deRham_homotopy(superbv.MixedForm(algebra, "z"))


@given(seed=seeds, dims=small_dims)
def test_exact_forms_have_primitives(seed, dims):
    algebra = superbv.form_algebra(*dims)
    exact = superbv.d(superbv.random_form(algebra, np.random.default_rng(seed)))
    assert superbv.d(superbv.deRham_homotopy(exact)) == exact


def test_full_suite_passes():
    results = superbv.run_bv_checks(1, 1, trials=20, x_max=2, p_max=2, form_degree=2)
    assert all(result.passed for result in results), [r.name for r in results if not r.passed]
    named = results_by_name(results)
    assert named["bv.1|1.census"].data["homology"] == {"1,1": 1}
    assert named["bv.1|1.page3"].data["dimension"] == 1
    assert named["bv.1|1.delta3"].data == {"trials": 20}
