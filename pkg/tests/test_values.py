import math
import re

import pytest
from hypothesis import given, settings, strategies as st

from dagforge import MISSING, Tensor, csv_cell, parse_cell, type_name, values_equal
from dagforge.errors import DomainError


def test_type_name_tags():
    assert type_name(True) == "bool"
    assert type_name(3) == "int"
    assert type_name(0.5) == "float"
    assert type_name("x") == "str"
    assert type_name([1, "a"]) == "list"
    assert type_name(Tensor((2, 2), (0, 0, 0, 0))) == "tensor"
    assert type_name(MISSING) == "missing"


def test_values_equal_numeric_promotion():
    assert values_equal(1, 1.0)
    assert values_equal(1.0, 1)
    assert not values_equal(1, 1.5)


def test_values_equal_bool_is_not_a_number():
    assert not values_equal(True, 1)
    assert not values_equal(False, 0.0)
    assert values_equal(True, True)


def test_values_equal_lists_and_missing():
    assert not values_equal([1], [2])
    assert values_equal([1, [2, "a"]], [1, [2, "a"]])
    assert not values_equal(MISSING, 0.0)
    assert values_equal(MISSING, MISSING)
    assert not values_equal([MISSING], [0.0])


def test_values_equal_tensor():
    a = Tensor((2,), (1.0, 2.0))
    assert values_equal(a, Tensor((2,), (1.0, 2.0)))
    assert not values_equal(a, Tensor((2, 1), (1.0, 2.0)))
    assert not values_equal(a, [1.0, 2.0])


def test_csv_cell_scalars():
    assert csv_cell(0.5) == "0.5"
    assert csv_cell(MISSING) == ""
    assert csv_cell([1, 2]) == "[1,2]"
    assert csv_cell(True) == "true"
    assert csv_cell(False) == "false"
    assert csv_cell(-7) == "-7"
    assert csv_cell("hello, world") == "hello, world"


def test_csv_cell_tensor_and_nested():
    t = Tensor((2, 2), (0.0, 1.0, 2.0, 3.0))
    assert csv_cell(t) == '{"shape":[2,2],"data":[0.0,1.0,2.0,3.0]}'
    assert csv_cell([1, MISSING, "a\"b"]) == '[1,null,"a\\"b"]'


def test_parse_cell_round_trip_examples():
    assert parse_cell("") is MISSING
    assert parse_cell("true") is True
    assert parse_cell("-3") == -3
    assert parse_cell("0.5") == 0.5
    assert values_equal(parse_cell("[1,2]"), [1, 2])
    t = Tensor((2, 2), (0.0, 0.0, 0.0, 0.0))
    assert values_equal(parse_cell(csv_cell(t)), t)


def test_tensor_invariant_enforced():
    with pytest.raises(DomainError):
        Tensor((2, 2), (0.0,))
    with pytest.raises(DomainError):
        Tensor((0,), ())
    t = Tensor((2, 3), tuple(range(6)))
    assert len(t.data) == math.prod(t.shape)


_AMBIGUOUS = re.compile(r"-?[0-9]+(\.[0-9]+)?([eE][+-]?[0-9]+)?\Z")


def _str_is_ambiguous(s: str) -> bool:
    return s == "" or s in ("true", "false") or bool(_AMBIGUOUS.match(s)) or s[0] in "[{"


_scalars = st.one_of(
    st.booleans(),
    st.integers(-(2**63), 2**63 - 1),
    st.floats(allow_nan=False, allow_infinity=False),
    st.text(max_size=20),
    st.just(MISSING),
)


@st.composite
def _tensors(draw):
    shape = tuple(draw(st.lists(st.integers(1, 3), min_size=1, max_size=3)))
    n = math.prod(shape)
    data = tuple(draw(st.lists(st.floats(allow_nan=False, allow_infinity=False), min_size=n, max_size=n)))
    return Tensor(shape, data)


_values = st.recursive(_scalars | _tensors(), lambda inner: st.lists(inner, max_size=4), max_leaves=12)


@settings(deadline=None)
@given(_values)
def test_cell_round_trip(v):
    if isinstance(v, str) and _str_is_ambiguous(v):
        # documented lossy corner: raw text that collides with another form
        return
    assert values_equal(parse_cell(csv_cell(v)), v)
