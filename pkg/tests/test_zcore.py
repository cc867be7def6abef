"""Value ordering, set canonicalization and rendering."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ztc.zcore import (
    Basic,
    BasicV,
    EnumV,
    Free,
    Int,
    IntV,
    InternalError,
    Power,
    Product,
    SetV,
    TupleV,
    canonical_order,
    format_type,
    format_value,
    sort_values,
    value_eq,
)

# ---------------------------------------------------------------------------
# random same-typed value trees, depth <= 3
# ---------------------------------------------------------------------------

_ENUM = ("red", "amber", "green")

_SCALAR_DESCRS = ("int", "enum", "basic")

type_descrs = st.recursive(
    st.sampled_from(_SCALAR_DESCRS),
    lambda inner: st.one_of(
        st.tuples(st.just("pair"), inner, inner),
        st.tuples(st.just("set"), inner),
    ),
    max_leaves=3,
)


def value_strategy(descr):
    if descr == "int":
        return st.builds(IntV, st.integers(-9, 9))
    if descr == "enum":
        return st.sampled_from([EnumV(n, i) for i, n in enumerate(_ENUM)])
    if descr == "basic":
        return st.sampled_from([BasicV(f"S{i}") for i in range(1, 4)])
    if descr[0] == "pair":
        return st.tuples(value_strategy(descr[1]), value_strategy(descr[2])).map(TupleV)
    return st.lists(value_strategy(descr[1]), max_size=4).map(
        lambda xs: SetV(tuple(xs))
    )


@st.composite
def same_typed(draw, n):
    descr = draw(type_descrs)
    s = value_strategy(descr)
    return tuple(draw(s) for _ in range(n))


@given(same_typed(2))
def test_canonical_order_antisymmetric(pair):
    a, b = pair
    assert canonical_order(a, b) == -canonical_order(b, a)
    assert canonical_order(a, b) in (-1, 0, 1)


@given(same_typed(3))
@settings(max_examples=300)
def test_canonical_order_transitive(triple):
    a, b, c = triple
    if canonical_order(a, b) <= 0 and canonical_order(b, c) <= 0:
        assert canonical_order(a, c) <= 0


@given(same_typed(2))
def test_value_eq_iff_order_equal(pair):
    a, b = pair
    assert value_eq(a, b) == (canonical_order(a, b) == 0)


@pytest.mark.parametrize(
    "a,b",
    [
        (IntV(1), EnumV("red", 0)),
        (BasicV("S1"), IntV(0)),
        (SetV(()), TupleV((IntV(0), IntV(0)))),
        (SetV((IntV(1),)), SetV((BasicV("S1"),))),
    ],
)
def test_order_rejects_mixed_kinds(a, b):
    with pytest.raises(InternalError):
        canonical_order(a, b)


# ---------------------------------------------------------------------------
# set canonicalization
# ---------------------------------------------------------------------------


@given(st.lists(st.builds(IntV, st.integers(-9, 9)), max_size=5))
def test_set_double_insert_is_noop(elems):
    base = SetV(tuple(elems))
    for x in elems:
        assert value_eq(SetV(base.elems + (x,)), base)


@given(st.lists(st.builds(IntV, st.integers(-9, 9)), max_size=6))
def test_set_ignores_input_order(elems):
    assert value_eq(SetV(tuple(elems)), SetV(tuple(reversed(elems))))


def test_set_contains_and_len():
    s = SetV((IntV(2), IntV(1), IntV(2)))
    assert len(s) == 2
    assert IntV(1) in s and IntV(3) not in s


def test_enum_orders_by_declaration_not_name():
    first, last = EnumV("zz", 0), EnumV("aa", 1)
    assert canonical_order(first, last) == -1


def test_basic_orders_by_name():
    assert canonical_order(BasicV("A1"), BasicV("B1")) == -1


def test_sets_order_length_first():
    small = SetV((IntV(9),))
    large = SetV((IntV(0), IntV(1)))
    assert canonical_order(small, large) == -1


@given(st.permutations([IntV(3), IntV(-1), IntV(0), IntV(7)]))
def test_sort_values_is_permutation_invariant(vals):
    assert sort_values(vals) == [IntV(-1), IntV(0), IntV(3), IntV(7)]


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def test_format_value_scalars():
    assert format_value(IntV(-4)) == "-4"
    assert format_value(EnumV("amber", 1)) == "amber"
    assert format_value(BasicV("TASK2")) == "TASK2"


def test_format_value_sets_and_maplets():
    pair = TupleV((EnumV("red", 0), IntV(3)))
    assert format_value(pair) == "red |-> 3"
    assert format_value(SetV((pair,))) == "{ red |-> 3 }"
    assert format_value(SetV(())) == "{}"


def test_format_value_orders_elements():
    s = SetV((IntV(5), IntV(1), IntV(3)))
    assert format_value(s) == "{ 1, 3, 5 }"


def test_format_type_spelling():
    t = Power(Product(Basic("TASK"), Int()))
    assert format_type(t) == "P (TASK x INT)"
    assert format_type(Free("PRIO", ("low", "mid", "high"))) == "PRIO"
