import numpy as np
import pytest
from hypothesis import given, strategies as st
from sympy.polys.domains import QQ_I

import superbv
from superbv.algebra import linalg

TABLE = superbv.VarTable(even=["z"], odd=["theta1", "theta2"])
seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)
parities = st.sampled_from([superbv.Parity.EVEN, superbv.Parity.ODD])


def scalar(text, table=TABLE):
    return superbv.parse_scalar(text, table)


def test_parse_format_round_trip():
    table = superbv.VarTable(even=["z", "w"], odd=["theta1", "theta2"])
    a = superbv.parse_scalar("3/2*z^-2*theta1*theta2 + i*w", table)
    assert superbv.parse_scalar(superbv.format_scalar(a), table) == a
    assert superbv.parse_scalar("theta2*theta1", table) == -superbv.parse_scalar("theta1*theta2", table)


def test_parse_rejects_unknown_variables():
    with pytest.raises(ValueError):
        scalar("x + 1")
    with pytest.raises(ValueError):
        scalar("z^(1/2)")


def test_odd_variables_anticommute():
    t1, t2 = scalar("theta1"), scalar("theta2")
    assert t2 * t1 == -(t1 * t2)
    assert not t1 * t1
    assert (t1 * t2).parity is superbv.Parity.EVEN


def test_mixed_parity_is_reported():
    with pytest.raises(superbv.MixedParity):
        _ = scalar("z + theta1").parity
    assert not scalar("z + theta1").is_homogeneous()


def test_tables_must_match():
    other = superbv.VarTable(even=["w"])
    with pytest.raises(superbv.VarTableMismatch):
        _ = scalar("z") + superbv.parse_scalar("w", other)


def test_invert_unit():
    table = superbv.VarTable(even=["w"], odd=["psi1", "psi2"])
    g = superbv.parse_scalar("w^2 - psi1*psi2", table)
    inverse = superbv.invert(g)
    assert inverse == superbv.parse_scalar("w^-2 + w^-4*psi1*psi2", table)
    assert g * inverse == 1
    assert superbv.parse_scalar("1/(w^2 - psi1*psi2)", table) == inverse


def test_invert_rejects_non_units():
    with pytest.raises(superbv.NotInvertible):
        superbv.invert(scalar("1 + z"))
    with pytest.raises(superbv.NotInvertible):
        superbv.invert(scalar("theta1*theta2"))


def test_left_derivative_signs():
    product = scalar("theta1*theta2")
    assert superbv.derive(product, "theta1") == scalar("theta2")
    assert superbv.derive(product, "theta2") == -scalar("theta1")
    assert superbv.derive(scalar("z^3*theta1"), "z") == scalar("3*z^2*theta1")


def test_substitute_checks_parity():
    with pytest.raises(superbv.ParityViolation):
        superbv.substitute(scalar("z"), {"z": scalar("theta1")}, table=TABLE)


def test_change_table_applies_reorder_sign():
    reordered = superbv.VarTable(even=["z"], odd=["theta2", "theta1"])
    moved = superbv.change_table(scalar("theta1*theta2"), reordered)
    assert moved == -superbv.parse_scalar("theta2*theta1", reordered)
    assert moved == superbv.parse_scalar("theta1*theta2", reordered)


@given(seed=seeds, parity_a=parities, parity_b=parities)
def test_supercommutativity(seed, parity_a, parity_b):
    rng = np.random.default_rng(seed)
    a = superbv.random_scalar(TABLE, rng, parity=parity_a, exponent_range=(-2, 2), gaussian=True)
    b = superbv.random_scalar(TABLE, rng, parity=parity_b, exponent_range=(-2, 2), gaussian=True)
    sign = -1 if int(parity_a) * int(parity_b) else 1
    assert a * b == (b * a) * sign


@given(seed=seeds, parity_a=parities)
def test_odd_derivative_is_graded_leibniz(seed, parity_a):
    rng = np.random.default_rng(seed)
    a = superbv.random_scalar(TABLE, rng, parity=parity_a)
    b = superbv.random_scalar(TABLE, rng)
    for name in ("theta1", "theta2"):
        second = a * superbv.derive(b, name)
        expected = superbv.derive(a, name) * b + (-second if int(parity_a) else second)
        assert superbv.derive(a * b, name) == expected


@given(seed=seeds)
def test_associativity(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (superbv.random_scalar(TABLE, rng, exponent_range=(-1, 2)) for _ in range(3))
    assert (a * b) * c == a * (b * c)


def test_berezinian_of_graded_matrix():
    g = superbv.SuperMatrix.from_strings([["z", "theta1"], ["theta1", "1"]], TABLE, [0, 1], [0, 1])
    assert g.berezinian() == scalar("z")
    line = superbv.SuperMatrix.from_strings([["z^2 - theta1*theta2"]], TABLE, [0], [0])
    assert superbv.berezinian(line) == scalar("z^2 - theta1*theta2")


def test_supermatrix_inverse():
    g = superbv.SuperMatrix.from_strings([["z", "theta1"], ["theta2", "1 + theta1*theta2"]], TABLE, [0, 1], [0, 1])
    assert (g @ g.inverse()).is_identity()
    assert (g.inverse() @ g).is_identity()


def test_supermatrix_rejects_wrong_parity():
    with pytest.raises(superbv.ParityViolation):
        superbv.SuperMatrix.from_strings([["theta1"]], TABLE, [0], [0])


def test_supertrace():
    g = superbv.SuperMatrix.from_strings([["z", "theta1"], ["theta2", "3"]], TABLE, [0, 1], [0, 1])
    assert g.supertrace() == scalar("z - 3")


def test_exact_linear_algebra():
    rows = [{0: 1, 1: 1}, {0: 2, 1: 2}, {2: 1}]
    assert linalg.rank(rows, 3) == 2
    kernel = linalg.nullspace(rows, 3)
    assert len(kernel) == 1
    solution = linalg.solve([{"a": 1}, {"b": 1}], {"a": 2, "b": 3})
    assert {k: QQ_I.to_sympy(v) for k, v in solution.items()} == {0: 2, 1: 3}
    assert linalg.solve([{"a": 1}], {"b": 1}) is None


def test_errors_subclass_builtins():
    assert issubclass(superbv.Unsupported, NotImplementedError)
    assert issubclass(superbv.AtlasError, ValueError)
    assert issubclass(superbv.NotInvertible, ArithmeticError)
    assert issubclass(superbv.ConventionViolation, ArithmeticError)


WIDE = superbv.VarTable(even=["z"], odd=["theta1", "theta2", "theta3", "theta4"])
TARGET = superbv.VarTable(even=["w"], odd=["psi1", "psi2"])


def random_unit(table, rng):
    nilpotent = superbv.random_scalar(table, rng, parity=superbv.Parity.EVEN, exponent_range=(-1, 1))
    nilpotent = nilpotent - nilpotent.reduced()
    leading = superbv.SuperScalar.var(table, table.even[0]) ** int(rng.integers(-2, 3))
    return leading * (superbv.SuperScalar.one(table) * int(rng.choice([1, 2, -3])) + nilpotent)


def random_graded_matrix(table, rng):
    entries = [[random_unit(table, rng), superbv.random_scalar(table, rng, parity=superbv.Parity.ODD)],
               [superbv.random_scalar(table, rng, parity=superbv.Parity.ODD), random_unit(table, rng)]]
    return superbv.SuperMatrix(entries, [0, 1], [0, 1], table=table)


@given(seed=seeds)
def test_berezinian_is_multiplicative(seed):
    rng = np.random.default_rng(seed)
    g, h = random_graded_matrix(WIDE, rng), random_graded_matrix(WIDE, rng)
    assert (g @ h).berezinian() == g.berezinian() * h.berezinian()


@given(seed=seeds, parity_a=parities, parity_b=parities)
def test_substitute_is_a_ring_homomorphism(seed, parity_a, parity_b):
    rng = np.random.default_rng(seed)
    assignment = {"z": random_unit(TARGET, rng),
                  "theta1": superbv.random_scalar(TARGET, rng, parity=superbv.Parity.ODD),
                  "theta2": superbv.random_scalar(TARGET, rng, parity=superbv.Parity.ODD)}
    a = superbv.random_scalar(TABLE, rng, parity=parity_a, exponent_range=(-2, 2))
    b = superbv.random_scalar(TABLE, rng, parity=parity_b, exponent_range=(-2, 2))
    image_a = superbv.substitute(a, assignment, table=TARGET)
    image_b = superbv.substitute(b, assignment, table=TARGET)
    assert superbv.substitute(a * b, assignment, table=TARGET) == image_a * image_b
    assert superbv.substitute(a + b, assignment, table=TARGET) == image_a + image_b
    assert image_a.has_parity(parity_a)
