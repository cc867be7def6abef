"""Type inference, synonym expansion and carrier constraints."""

import pytest

from ztc.zcore import (
    BasicV,
    EnumV,
    Int,
    IntV,
    Nat,
    Power,
    Product,
    SetV,
    Synonym,
    TupleV,
)
from ztc.zparse import parse_text, resolve_includes
from ztc.ztype import (
    ZTypeError,
    carrier_constraints,
    normalize,
    satisfies_carrier,
    synonym_kind,
    typecheck,
)

from conftest import SEARCH_CAPPED, SEARCH_EXHAUSTED

PRELUDE = "basic TASK;\nfree PRIO ::= low | mid | high;\n"


def typecheck_one(body: str):
    src = parse_text(f"{PRELUDE}spec T {{ {body} }}")
    return typecheck(resolve_includes(src, src.spec_named("T")), src.ctx)


def pairs(*xy):
    return SetV(tuple(TupleV((a, b)) for a, b in xy))


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------


def synonym_free(t):
    if isinstance(t, Synonym):
        return False
    if isinstance(t, Product):
        return synonym_free(t.left) and synonym_free(t.right)
    if isinstance(t, Power):
        return synonym_free(t.elem)
    return True


def test_normalize_idempotent_on_corpus(typed_specs):
    for ts in typed_specs.values():
        for _, declared in ts.spec.decls:
            once = normalize(declared)
            assert normalize(once) == once
            assert synonym_free(once)


def test_normalize_spellings():
    ts = typecheck_one("f : TASK pfun NAT; s : seq PRIO; v : fset TASK | f = f")
    f, s, v = (dict(ts.spec.decls)[n] for n in ("f", "s", "v"))
    task = ts.ctx.basics[0]
    assert normalize(f) == Power(Product(task, Int()))
    assert normalize(s) == Power(Product(Int(), ts.ctx.free_named("PRIO")))
    assert normalize(v) == Power(task)


def test_nat_widens_to_int():
    # the nonnegativity of NAT lives in the carrier, not the type
    assert normalize(Nat()) == Int()
    assert normalize(normalize(Nat())) == normalize(Nat())


# ---------------------------------------------------------------------------
# carrier constraints
# ---------------------------------------------------------------------------


def test_carrier_constraint_labels():
    ts = typecheck_one(
        "r : TASK rel NAT; p : TASK pfun NAT; f : PRIO fun NAT; "
        "g : TASK ffun NAT; q : seq PRIO; v : fset TASK | r = r"
    )
    d = dict(ts.spec.decls)
    assert carrier_constraints(d["r"]) == ()
    assert carrier_constraints(d["p"]) == ("functional",)
    assert carrier_constraints(d["f"]) == ("functional", "total-dom")
    assert carrier_constraints(d["g"]) == ("functional", "finite-dom")
    assert carrier_constraints(d["q"]) == (
        "functional",
        "finite-dom",
        "contiguous-dom",
    )
    assert carrier_constraints(d["v"]) == ("finite",)
    assert synonym_kind(d["p"]) == "pfun" and synonym_kind(Nat()) is None


def test_satisfies_carrier_scalars():
    ts = typecheck_one("n : NAT; z : INT | n = 0")
    ctx = ts.ctx
    assert satisfies_carrier(IntV(0), Nat(), ctx) is None
    assert satisfies_carrier(IntV(-1), Nat(), ctx) == "non-negative"
    assert satisfies_carrier(IntV(-1), Int(), ctx) is None
    assert satisfies_carrier(SetV(()), Nat(), ctx) == "shape"


def test_satisfies_carrier_functions():
    ts = typecheck_one("p : PRIO pfun NAT; f : PRIO fun NAT | p = p")
    ctx = ts.ctx
    d = dict(ts.spec.decls)
    low, mid, high = (EnumV(n, i) for i, n in enumerate(("low", "mid", "high")))
    funcnl = pairs((low, IntV(1)), (mid, IntV(2)))
    clash = pairs((low, IntV(1)), (low, IntV(2)))
    assert satisfies_carrier(funcnl, d["p"], ctx) is None
    assert satisfies_carrier(clash, d["p"], ctx) == "functional"
    total = pairs((low, IntV(0)), (mid, IntV(0)), (high, IntV(0)))
    assert satisfies_carrier(total, d["f"], ctx) is None
    assert satisfies_carrier(funcnl, d["f"], ctx) == "total-dom"
    # a pfun over NAT rejects negative range values through the element type
    neg = pairs((low, IntV(-3)))
    assert satisfies_carrier(neg, d["p"], ctx) == "non-negative"


def test_satisfies_carrier_sequences():
    ts = typecheck_one("q : seq PRIO | q = q")
    ctx, q = ts.ctx, dict(ts.spec.decls)["q"]
    low = EnumV("low", 0)
    assert satisfies_carrier(pairs((IntV(1), low), (IntV(2), low)), q, ctx) is None
    assert satisfies_carrier(pairs((IntV(2), low)), q, ctx) == "contiguous-dom"
    assert (
        satisfies_carrier(pairs((IntV(1), low), (IntV(1), EnumV("mid", 1))), q, ctx)
        == "functional"
    )
    assert satisfies_carrier(SetV(()), q, ctx) is None


def test_witness_values_satisfy_their_carriers(typed_specs, witnesses):
    # cross-module: every searched value inhabits its declared type
    for name, env in witnesses.items():
        ts = typed_specs[name]
        for var, declared in ts.spec.decls:
            assert satisfies_carrier(env[var], declared, ts.ctx) is None, (name, var)


# ---------------------------------------------------------------------------
# whole-spec checking
# ---------------------------------------------------------------------------


def test_corpus_typechecks(typed_specs):
    assert len(typed_specs) == 24
    for name in SEARCH_CAPPED | SEARCH_EXHAUSTED:
        assert name in typed_specs


def test_typecheck_is_deterministic(sources):
    src = sources["launch_vehicle.ztc"]
    flat = resolve_includes(src, src.spec_named("DetectReferenceEvent18"))
    a = typecheck(flat, src.ctx)
    b = typecheck(flat, src.ctx)
    assert a.warnings == b.warnings
    assert [a.declared_type(v) for v, _ in a.spec.decls] == [
        b.declared_type(v) for v, _ in b.spec.decls
    ]


def test_partial_application_warning(typed_specs):
    warnings = typed_specs["DetectReferenceEvent18"].warnings
    assert any("tls" in w and "domain guard" in w for w in warnings)


def test_guarded_application_is_quiet():
    ts = typecheck_one("f : TASK pfun NAT; t : TASK | t in dom f; f @ t = 1")
    assert ts.warnings == ()


def test_total_application_needs_no_guard():
    ts = typecheck_one("f : PRIO fun NAT | f @ low = 1")
    assert ts.warnings == ()


def test_unguarded_partial_application_warns():
    ts = typecheck_one("f : TASK pfun NAT; t : TASK | f @ t = 1")
    assert len(ts.warnings) == 1
    assert "f" in ts.warnings[0]


ERROR_CASES = [
    ("a : NAT | a = low", "mismatch"),
    ("a : NAT; p : PRIO | a = p", "mismatch"),
    ("a : NAT | a in 1 .. low", "mismatch"),
    ("a : NAT | a @ 1 = 2", "apply-on-non-function"),
    ("s : P NAT | s @ 1 = 2", "apply-on-non-function"),
    ("f : PRIO fun NAT | f @ 3 = 1", "mismatch"),
    ("a : NAT | # a = 1", "card-on-non-finset"),
    ("s : P NAT | # s = 1", "card-on-non-finset"),
    ("s : P NAT | 1 in s cup {}TASK", "mismatch"),
    ("s : P NAT | low in s", "mismatch"),
    ("a : NAT | a subseteq a", "mismatch"),
    ("r : NAT rel NAT | 1 in r", "mismatch"),
]


@pytest.mark.parametrize("body,code", ERROR_CASES)
def test_type_errors_are_located(body, code):
    with pytest.raises(ZTypeError) as err:
        typecheck_one(body)
    assert err.value.code == code
    assert err.value.spec == "T"


def test_error_carries_predicate_index():
    with pytest.raises(ZTypeError) as err:
        typecheck_one("a : NAT | a = 1; a = low")
    assert err.value.pred_index == 1


def test_undeclared_variable_in_raw_ast():
    # the parser catches unknown names first; the checker still guards
    # against hand-built predicates
    from ztc.zcore import Equal, IntLit, TestSpec, TypeContext, Var

    spec = TestSpec("H", (), (("a", Nat()),), (Equal(Var("ghost"), IntLit(1)),))
    with pytest.raises(ZTypeError) as err:
        typecheck(spec, TypeContext())
    assert err.value.code == "undeclared-variable"


def test_cardinality_of_finitary_combinations():
    ts = typecheck_one(
        "v : fset TASK; s : P TASK | # (v cap s) = 1; # (v setminus s) = 0"
    )
    assert ts.warnings == ()
    with pytest.raises(ZTypeError):
        typecheck_one("v : fset TASK; s : P TASK | # (s cup v) = 1")


def test_type_of_inferred_expressions():
    ts = typecheck_one("f : TASK pfun NAT; t : TASK | t in dom f; f @ t = 0")
    dom_expr = ts.spec.preds[0].rhs
    assert ts.type_of(dom_expr) == Power(ts.ctx.basics[0])
    apply_expr = ts.spec.preds[1].lhs
    assert ts.type_of(apply_expr) == Int()
