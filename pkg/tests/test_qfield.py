from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from rgdlin.qfield import (
    INF,
    ONE,
    SQRT2,
    SQRT3,
    SQRT6,
    ZERO,
    FieldElem,
    UnsupportedLabelError,
    cos_value,
    field_arith,
    field_sign,
)

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=30)
elems = st.builds(FieldElem, rationals, rationals, rationals, rationals)
nonzero = elems.filter(lambda x: not x.is_zero())


def numeric(x: FieldElem, dps=100):
    with mpmath.workdps(dps):
        a, b, c, d = (mpmath.mpf(q.numerator) / q.denominator for q in x.components)
        return a + b * mpmath.sqrt(2) + c * mpmath.sqrt(3) + d * mpmath.sqrt(6)


def test_basis_products():
    assert SQRT2 * SQRT3 == SQRT6
    assert (SQRT2 * SQRT3).components == (0, 0, 0, 1)
    assert SQRT2 * SQRT2 == 2
    assert SQRT6 * SQRT6 == 6


def test_inverse_of_one_plus_sqrt2():
    x = (1 + SQRT2).inverse()
    assert x == FieldElem(-1, 1)
    assert (1 + SQRT2) * FieldElem(-1, 1) == ONE


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO
    with pytest.raises(ZeroDivisionError):
        field_arith(ONE, ZERO, "div")


def test_field_arith_ops():
    x, y = FieldElem(1, 2), FieldElem(0, 0, 3)
    assert field_arith(x, y, "add") == x + y
    assert field_arith(x, y, "sub") == x - y
    assert field_arith(x, y, "mul") == x * y
    assert field_arith(x, y, "div") * y == x
    with pytest.raises(ValueError):
        field_arith(x, y, "pow")


@pytest.mark.parametrize(
    "x, expected",
    [
        (ZERO, 0),
        (1 - SQRT2 * (SQRT3 - 1), -1),
        (3 - 2 * SQRT2, 1),
        (FieldElem(0, 0, -1), -1),
        (SQRT6 - SQRT2 - SQRT3, -1),
        (FieldElem(5, -2, -1, 0), 1),
    ],
)
def test_sign_examples(x, expected):
    assert field_sign(x) == expected
    assert mpmath.sign(numeric(x)) == expected


def test_sign_near_cancellation():
    # 2 + sqrt3 - (1 + sqrt2)^2 / ... : pick values whose float evaluation is close to zero
    x = FieldElem(Fraction(-1, 10**12)) + SQRT2 * SQRT2 - 2
    assert x.sign() == -1
    y = (SQRT2 + SQRT3) ** 8 - FieldElem(0, 0, 0, 0)
    assert y.sign() == 1


@pytest.mark.parametrize("m, value", [(2, ZERO), (3, FieldElem(Fraction(1, 2))), (4, SQRT2 / 2), (6, SQRT3 / 2), (INF, ONE)])
def test_cos_value(m, value):
    assert cos_value(m) == value


@pytest.mark.parametrize("m", [5, 7, 0, "x"])
def test_cos_value_unsupported(m):
    with pytest.raises(UnsupportedLabelError):
        cos_value(m)


@given(elems, elems, elems)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x and x * y == y * x
    assert x - x == ZERO


@given(nonzero)
def test_inverse(x):
    assert x * x.inverse() == ONE
    assert x / x == ONE


@given(elems, elems)
def test_sign_multiplicative(x, y):
    assert (x * y).sign() == x.sign() * y.sign()


@given(nonzero)
def test_sign_matches_high_precision(x):
    assert x.sign() == mpmath.sign(numeric(x))
    assert x.sign() != 0


@given(elems)
def test_text_roundtrip(x):
    text = str(x)
    assert FieldElem.parse(text) == x
    assert str(FieldElem.parse(text)) == text


@given(elems, elems)
def test_equality_is_component_equality(x, y):
    assert (x == y) == (x.components == y.components)
    if x == y:
        assert hash(x) == hash(y)


@pytest.mark.parametrize(
    "text, value",
    [
        ("0", ZERO),
        ("r2", SQRT2),
        ("-r3", -SQRT3),
        ("1/2 + 1/2*r2", FieldElem(Fraction(1, 2), Fraction(1, 2))),
        ("1 + -1/2*r6", FieldElem(1, 0, 0, Fraction(-1, 2))),
        ("3*r2 - 2", FieldElem(-2, 3)),
        ("2r2", 2 * SQRT2),
    ],
)
def test_parse(text, value):
    assert FieldElem.parse(text) == value


@pytest.mark.parametrize("text", ["", "r5", "1/", "abc", "r2r3"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        FieldElem.parse(text)


def test_mixed_operands():
    assert 1 + SQRT2 == FieldElem(1, 1)
    assert Fraction(1, 2) * SQRT2 == SQRT2 / 2
    assert 2 - SQRT2 == FieldElem(2, -1)
    assert 1 / SQRT2 == SQRT2 / 2
    assert SQRT2 > 1 and SQRT3 > SQRT2 and -SQRT6 < -2
    assert float(SQRT6) == pytest.approx(6 ** 0.5)
