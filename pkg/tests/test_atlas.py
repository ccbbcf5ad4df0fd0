import os

import numpy as np
import pytest
from hypothesis import given, strategies as st

import superbv

DATA = os.path.join(os.path.dirname(__file__), "data", "v1")
seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


def names_of(results):
    return {result.name: result for result in results}


@pytest.mark.parametrize("name, dims", [
    ("conic", (1, 2)),
    ("cp", (1, 0)),
    ("cp", (1, 1)),
    ("cp", (1, 2)),
    ("cp", (2, 0)),
    ("cp", (2, 1)),
    ("affine", (2, 2)),
])
def test_examples_verify(name, dims):
    atlas = superbv.example_atlas(name, dims)
    results = superbv.verify_atlas(atlas)
    assert all(result.passed for result in results), [r.residual for r in results if not r.passed]


def test_projective_plane_checks_triple_overlaps():
    results = names_of(superbv.verify_atlas(superbv.build_projective(2, 0)))
    cocycles = [name for name in results if ".cocycle." in name]
    assert len(cocycles) == 6
    assert all(results[name].passed for name in cocycles)


@pytest.mark.parametrize("name, dims", [("conic", (1, 2)), ("cp", (1, 1)), ("cp", (2, 0))])
def test_bv_total_space_verifies(name, dims):
    base = superbv.example_atlas(name, dims)
    m = superbv.bv_total_space(base)
    assert m.dims == (sum(base.dims), sum(base.dims))
    assert m.base is base
    assert all(result.passed for result in superbv.verify_atlas(m))


def test_bv_total_space_fiber_transition():
    cp1 = superbv.build_projective(1, 0)
    m = superbv.bv_total_space(cp1)
    q_w = m.transition("U0", "U1").images["p_w"]
    assert q_w == superbv.parse_scalar("-z^2*p_z", m.chart("U0").table)


def test_jacobian_and_berezinian_transition():
    cp1 = superbv.build_projective(1, 0)
    t = cp1.transition("U1", "U0")
    table = cp1.chart("U1").table
    assert superbv.jacobian(t)[0, 0] == superbv.parse_scalar("-w^-2", table)
    assert superbv.ber_transition(t) == superbv.parse_scalar("-w^-2", table)


def test_compose_inverse_is_identity():
    conic = superbv.build_super_conic()
    there, back = conic.transition("U0", "U1"), conic.transition("U1", "U0")
    assert superbv.compose(there, back) == superbv.identity_transition(conic.chart("U0"))
    assert superbv.compose(back, there) == superbv.identity_transition(conic.chart("U1"))


def test_newton_inversion_of_conic():
    conic = superbv.build_super_conic()
    there = conic.transition("U0", "U1")
    table = conic.chart("U0").table
    assert there.images["w"] == superbv.parse_scalar("z^-1 + z^-3*theta1*theta2", table)
    assert there.images["psi1"] == superbv.parse_scalar("z^-2*theta1", table)
    assert superbv.invert_transition(there) == conic.transition("U1", "U0")


@pytest.mark.parametrize("name, dims", [("conic", (1, 2)), ("cp", (1, 2)), ("cp", (2, 1))])
def test_berezinian_of_total_space_is_square(name, dims):
    results = superbv.semidensity_check(superbv.example_atlas(name, dims))
    assert results
    assert all(result.passed for result in results)


@pytest.mark.parametrize("build", [superbv.tangent_sheaf, superbv.cotangent_sheaf])
def test_sheaf_frame_changes_are_consistent(build):
    for atlas in (superbv.build_projective(1, 1), superbv.build_projective(2, 0), superbv.build_super_conic()):
        assert all(result.passed for result in superbv.check_sheaf(build(atlas)))


def test_cotangent_transitions_are_block_triangular():
    m = superbv.bv_total_space(superbv.build_super_conic())
    sheaf = superbv.cotangent_transitions(m)
    assert sheaf.rank == (3, 3)
    assert all(result.passed for result in superbv.check_sheaf(sheaf))
    for pair in sheaf.pairs():
        assert sheaf.transition(*pair).block([3, 4, 5], [0, 1, 2]).is_zero()


def test_cotangent_transitions_need_total_space():
    with pytest.raises(superbv.AtlasError):
        superbv.cotangent_transitions(superbv.build_projective(1, 0))


def test_corrupted_atlas_fails_with_residual():
    atlas = superbv.load_atlas(os.path.join(DATA, "conic_corrupted.json"))
    failed = [result for result in superbv.verify_atlas(atlas) if not result.passed]
    assert failed
    assert all(result.residual for result in failed)


def test_non_unit_chart_map_is_reported_not_raised():
    atlas = superbv.load_atlas(os.path.join(DATA, "shifted_chart.json"))
    results = names_of(superbv.verify_atlas(atlas))
    assert not results["atlas.shifted.units.U0-U1"].passed
    assert results["atlas.shifted.units.U0-U1"].residual == "w"
    assert results["atlas.shifted.units.U1-U0"].passed
    for label in ("U0-U1", "U1-U0"):
        inverse = results["atlas.shifted.inverse.{}".format(label)]
        assert not inverse.passed
        assert "U0-U1" in inverse.residual


def test_transition_needs_every_image():
    chart = superbv.Chart("U0", superbv.VarTable(even=["z"], odd=["theta"]))
    with pytest.raises(superbv.AtlasError):
        superbv.TransitionMap(chart, chart, {"z": chart.var("z")})


def test_atlas_rejects_mixed_dimensions():
    u0 = superbv.Chart("U0", superbv.VarTable(even=["z"]))
    u1 = superbv.Chart("U1", superbv.VarTable(even=["w"], odd=["psi"]))
    with pytest.raises(superbv.AtlasError):
        superbv.Atlas([u0, u1])
    with pytest.raises(superbv.AtlasError):
        superbv.Atlas([u0]).transition("U0", "U1")


def random_chart_map(source, target, rng):
    images = {}
    for name in target.coords:
        if target.table.parity(name) is superbv.Parity.ODD:
            images[name] = superbv.random_scalar(source.table, rng, parity=superbv.Parity.ODD, exponent_range=(-1, 1))
            continue
        nilpotent = superbv.random_scalar(source.table, rng, parity=superbv.Parity.EVEN, exponent_range=(-1, 1))
        leading = source.var(source.table.even[0]) ** int(rng.integers(-2, 3))
        images[name] = leading * (superbv.SuperScalar.one(source.table) * int(rng.choice([1, -2]))
                                  + nilpotent - nilpotent.reduced())
    return superbv.TransitionMap(source, target, images)


def charts(count):
    return [superbv.Chart("U{}".format(k), superbv.VarTable(even=["x{}".format(k)],
                                                            odd=["a{}".format(k), "b{}".format(k)]))
            for k in range(count)]


@given(seed=seeds)
def test_jacobian_chain_rule(seed):
    rng = np.random.default_rng(seed)
    u, v, w = charts(3)
    f, g = random_chart_map(u, v, rng), random_chart_map(v, w, rng)
    composite = superbv.jacobian(superbv.compose(f, g))
    assert composite == superbv.jacobian(f) @ superbv.pullback(superbv.jacobian(g), f)


@given(seed=seeds)
def test_compose_is_associative(seed):
    rng = np.random.default_rng(seed)
    u, v, w, x = charts(4)
    f, g, h = random_chart_map(u, v, rng), random_chart_map(v, w, rng), random_chart_map(w, x, rng)
    assert superbv.compose(superbv.compose(f, g), h) == superbv.compose(f, superbv.compose(g, h))
