from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from src.engine.errors import (
    CharacteristicTooSmall,
    DivisionByZero,
    FieldMismatch,
    ParseError,
    ShapeError,
)
from src.engine.exactlin import Field, Matrix, kernel_basis, rank, solve


# -----------------------
# Field
# -----------------------
@pytest.mark.parametrize(
    "field, text, expected",
    [
        (Field.rational(), "-6/4", "-3/2"),
        (Field.rational(), " 7 ", "7"),
        (Field.rational(), "0/9", "0"),
        (Field.prime(5), "3/2", "4"),
        (Field.prime(5), "-1", "4"),
        (Field.prime(7), "12", "5"),
    ],
)
def test_parse_and_format_are_canonical(field, text, expected):
    assert field.format(field.parse(text)) == expected


@pytest.mark.parametrize("text", ["abc", "1.5", "2/", "1/0", ""])
def test_parse_rejects_malformed_scalars(text):
    with pytest.raises(ParseError):
        Field.rational().parse(text)


def test_denominator_divisible_by_p_is_division_by_zero():
    with pytest.raises(DivisionByZero, match="GF\\(5\\)"):
        Field.prime(5).parse("1/5")


def test_prime_field_needs_a_prime():
    with pytest.raises(ValueError, match="must be prime"):
        Field.prime(4)


@pytest.mark.parametrize(
    "flag, expected",
    [("rational", Field.rational()), ("prime:7", Field.prime(7))],
)
def test_field_flags(flag, expected):
    assert Field.from_flag(flag) == expected


@pytest.mark.parametrize("flag", ["prime", "prime:x", "prime:9", "real"])
def test_bad_field_flags(flag):
    with pytest.raises(ParseError):
        Field.from_flag(flag)


def test_descriptor_round_trip():
    for field in (Field.rational(), Field.prime(3)):
        assert Field.from_descriptor(field.descriptor()) == field


def test_descriptor_errors_carry_a_path():
    with pytest.raises(ParseError) as info:
        Field.from_descriptor({"kind": "prime", "p": 6})
    assert info.value.path == "field.p"


def test_convert_rejects_foreign_scalars():
    gf5, gf7 = Field.prime(5), Field.prime(7)
    with pytest.raises(FieldMismatch):
        gf5.convert(gf7.one)
    with pytest.raises(FieldMismatch):
        gf5.convert(True)


def test_characteristic_requirement():
    Field.rational().require_characteristic_above(6, "test")
    Field.prime(5).require_characteristic_above(4, "test")
    with pytest.raises(CharacteristicTooSmall, match="needs characteristic 0 or > 3"):
        Field.prime(3).require_characteristic_above(3, "twisting")


def test_elements_of_a_prime_field():
    gf3 = Field.prime(3)
    assert [gf3.format(x) for x in gf3.elements()] == ["0", "1", "2"]
    with pytest.raises(FieldMismatch):
        Field.rational().elements()


# -----------------------
# Matrix
# -----------------------
def test_rank_depends_on_the_field():
    rows = [[1, 2], [3, 1]]
    assert rank(Matrix.from_rows(Field.rational(), rows)) == 2
    # det = -5
    assert rank(Matrix.from_rows(Field.prime(5), rows)) == 1


def test_kernel_basis_has_one_vector_per_free_column():
    qq = Field.rational()
    basis = kernel_basis(Matrix.from_rows(qq, [[1, 2, 3]]))
    assert basis == [
        (qq.convert(-2), qq.one, qq.zero),
        (qq.convert(-3), qq.zero, qq.one),
    ]


def test_solve_consistent_and_inconsistent_systems():
    qq = Field.rational()
    m = Matrix.from_rows(qq, [[1, 1], [1, -1]])
    assert solve(m, [3, 1]) == (qq.convert(2), qq.one)

    singular = Matrix.from_rows(qq, [[1, 1], [1, 1]])
    assert solve(singular, [1, 2]) is None


def test_solve_checks_the_right_hand_side():
    with pytest.raises(ShapeError):
        solve(Matrix.identity(Field.rational(), 2), [1, 2, 3])


def test_ragged_rows_are_a_shape_error():
    with pytest.raises(ShapeError, match="row 1"):
        Matrix.from_rows(Field.rational(), [[1, 2], [3]])


def test_from_columns_matches_from_rows():
    qq = Field.rational()
    by_columns = Matrix.from_columns(qq, 2, [[1, 3], [2, 4]])
    assert by_columns.to_lists() == Matrix.from_rows(qq, [[1, 2], [3, 4]]).to_lists()


def test_empty_matrix_has_rank_zero():
    assert rank(Matrix.zeros(Field.rational(), 0, 3)) == 0
    assert len(kernel_basis(Matrix.zeros(Field.rational(), 0, 3))) == 3


matrices = st.integers(1, 4).flatmap(
    lambda cols: st.lists(st.lists(st.integers(-6, 6), min_size=cols, max_size=cols), min_size=1, max_size=4)
)


@settings(max_examples=60, deadline=None)
@given(rows=matrices, p=st.sampled_from([2, 3, 5, 7]))
def test_rank_nullity_and_kernel_vectors(rows, p):
    field = Field.prime(p)
    m = Matrix.from_rows(field, rows)
    basis = kernel_basis(m)

    assert rank(m) + len(basis) == m.cols
    for v in basis:
        assert all(x == field.zero for x in m.matvec(v))


@settings(max_examples=60, deadline=None)
@given(rows=matrices, x=st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_solve_recovers_a_solution_of_a_consistent_system(rows, x):
    qq = Field.rational()
    m = Matrix.from_rows(qq, rows)
    x = [qq.convert(v) for v in x[: m.cols]]
    b = m.matvec(x)

    found = solve(m, b)

    assert found is not None
    assert m.matvec(found) == b
