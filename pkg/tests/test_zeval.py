"""Ground evaluation: set algebra laws, application semantics, verdicts."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ztc.zcore import (
    Add,
    Apply,
    Card,
    Diff,
    Dom,
    EmptySet,
    Equal,
    Int,
    IntLit,
    IntV,
    Inter,
    MemberOf,
    Mul,
    Ran,
    Range,
    SetV,
    Sub,
    SubsetEq,
    TupleV,
    Union,
    Var,
    value_eq,
)
from ztc.zeval import (
    ApplyNonFunctional,
    ApplyOutsideDomain,
    UnboundVariable,
    check_spec,
    eval_expr,
    eval_pred,
)
from ztc.zparse import parse_text, resolve_includes
from ztc.ztype import typecheck

A, B = Var("A"), Var("B")

int_sets = st.frozensets(st.integers(-6, 6), max_size=5).map(
    lambda xs: SetV(tuple(IntV(x) for x in xs))
)


def as_ints(s: SetV) -> frozenset[int]:
    return frozenset(v.value for v in s.elems)


def typecheck_one(body: str, prelude: str = ""):
    src = parse_text(f"{prelude}\nspec T {{ {body} }}")
    return typecheck(resolve_includes(src, src.spec_named("T")), src.ctx)


# ---------------------------------------------------------------------------
# algebra laws
# ---------------------------------------------------------------------------


@given(int_sets, int_sets)
def test_intersection_below_union(a, b):
    env = {"A": a, "B": b}
    assert eval_pred(SubsetEq(Inter(A, B), A), env)
    assert eval_pred(SubsetEq(A, Union(A, B)), env)


@given(int_sets, int_sets)
def test_inclusion_exclusion(a, b):
    env = {"A": a, "B": b}
    union = eval_expr(Card(Union(A, B)), env).value
    inter = eval_expr(Card(Inter(A, B)), env).value
    assert union == len(a) + len(b) - inter


@given(int_sets, int_sets)
def test_difference_disjoint_from_subtrahend(a, b):
    env = {"A": a, "B": b}
    left = eval_expr(Inter(Diff(A, B), B), env)
    assert value_eq(left, SetV(()))


@given(int_sets, int_sets)
def test_set_ops_agree_with_python_sets(a, b):
    env = {"A": a, "B": b}
    assert as_ints(eval_expr(Union(A, B), env)) == as_ints(a) | as_ints(b)
    assert as_ints(eval_expr(Inter(A, B), env)) == as_ints(a) & as_ints(b)
    assert as_ints(eval_expr(Diff(A, B), env)) == as_ints(a) - as_ints(b)


@given(int_sets, int_sets)
def test_extensionality(a, b):
    env = {"A": a, "B": b}
    assert eval_pred(Equal(A, B), env) == value_eq(a, b)


@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4))
def test_range_membership_is_inclusive(lo, hi, x):
    env: dict = {}
    e = MemberOf(IntLit(x), Range(IntLit(lo), IntLit(hi)))
    assert eval_pred(e, env) == (lo <= x <= hi)


def test_range_cardinality():
    assert eval_expr(Card(Range(IntLit(2), IntLit(5))), {}).value == 4
    assert eval_expr(Card(Range(IntLit(5), IntLit(2))), {}).value == 0


def test_arithmetic():
    env = {"A": IntV(7)}
    assert eval_expr(Add(A, IntLit(-2)), env) == IntV(5)
    assert eval_expr(Sub(A, IntLit(9)), env) == IntV(-2)
    assert eval_expr(Mul(A, IntLit(3)), env) == IntV(21)


def test_empty_set_literal():
    assert eval_expr(EmptySet(Int()), {}) == SetV(())


# ---------------------------------------------------------------------------
# application
# ---------------------------------------------------------------------------


def maplets(*xy):
    return SetV(tuple(TupleV((IntV(a), IntV(b))) for a, b in xy))


functional_maps = st.dictionaries(
    st.integers(0, 5), st.integers(-5, 5), max_size=5
).map(lambda d: (d, maplets(*d.items())))


@given(functional_maps, st.integers(0, 5))
def test_functional_apply_never_ambiguous(fm, x):
    d, f = fm
    env = {"A": f}
    e = Apply(A, IntLit(x))
    if x in d:
        assert eval_expr(e, env) == IntV(d[x])
    else:
        with pytest.raises(ApplyOutsideDomain):
            eval_expr(e, env)


def test_nonfunctional_apply_is_distinct_error():
    env = {"A": maplets((1, 2), (1, 3))}
    with pytest.raises(ApplyNonFunctional):
        eval_expr(Apply(A, IntLit(1)), env)


def test_dom_and_ran():
    env = {"A": maplets((1, 10), (2, 10), (3, 30))}
    assert as_ints(eval_expr(Dom(A), env)) == {1, 2, 3}
    assert as_ints(eval_expr(Ran(A), env)) == {10, 30}


def test_unbound_variable():
    with pytest.raises(UnboundVariable):
        eval_expr(Var("nope"), {})


# ---------------------------------------------------------------------------
# whole-binding verdicts
# ---------------------------------------------------------------------------


def test_check_spec_satisfied_and_deterministic():
    ts = typecheck_one("a : NAT; s : P NAT | a in s; a <= 2")
    env = {"a": IntV(1), "s": SetV((IntV(1), IntV(4)))}
    v1, v2 = check_spec(ts, env), check_spec(ts, env)
    assert v1.ok and v1 == v2
    assert v1.describe() == "satisfied"


def test_check_spec_reports_failing_predicate_index():
    ts = typecheck_one("a : NAT | a <= 9; a = 5")
    verdict = check_spec(ts, {"a": IntV(1)})
    assert not verdict.ok
    assert verdict.status == "failed" and verdict.index == 1
    assert "predicate 1" in verdict.describe()


def test_check_spec_reports_carrier_violation_first():
    ts = typecheck_one("a : NAT | a = a")
    verdict = check_spec(ts, {"a": IntV(-2)})
    assert verdict.status == "failed"
    assert verdict.carrier == ("a", "non-negative")
    assert "non-negative" in verdict.describe()


def test_check_spec_apply_error_verdict():
    # application outside the domain is an error outcome, not plain false
    ts = typecheck_one("f : NAT pfun NAT | f @ 1 = 2")
    verdict = check_spec(ts, {"f": maplets((0, 0))})
    assert verdict.status == "error" and verdict.index == 0
    assert "error" in verdict.describe()


def test_check_spec_requires_complete_binding():
    ts = typecheck_one("a : NAT; b : NAT | a = b")
    with pytest.raises(UnboundVariable):
        check_spec(ts, {"a": IntV(0)})
