"""Type checking for test specifications.

Types are checked against the maximal-type discipline: the relational
synonyms (rel, pfun, fun, ffun, seq, fset) and NAT all normalize to plain
power-set types over INT, products and given types, while the properties
the synonyms promise (functionality, totality, finiteness, contiguous
sequence domains, non-negativity) become carrier constraints that ground
values are checked against separately.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .zcore import (
    FFUN,
    FINSET,
    FUN,
    FUNCTION_KINDS,
    INT,
    PFUN,
    REL,
    SEQ,
    Add,
    Apply,
    Basic,
    BasicLit,
    BasicV,
    Card,
    Diff,
    Dom,
    EmptySet,
    EnumLit,
    EnumV,
    Equal,
    Expr,
    Free,
    Geq,
    Gt,
    Int,
    IntLit,
    IntV,
    Inter,
    Leq,
    Lt,
    MemberOf,
    Mul,
    Nat,
    NotEqual,
    NotMemberOf,
    NotSubsetEq,
    Power,
    Pred,
    Product,
    Ran,
    Range,
    SetExt,
    SetV,
    Sub,
    SubsetEq,
    Synonym,
    TestSpec,
    Tuple,
    TupleV,
    TypeContext,
    TypeExpr,
    Union,
    Value,
    Var,
    ZtcError,
    format_type,
    value_eq,
)

# Carrier constraint labels.
FUNCTIONAL = "functional"
TOTAL_DOM = "total-dom"
FINITE_DOM = "finite-dom"
CONTIGUOUS_DOM = "contiguous-dom"
FINITE = "finite"
NON_NEGATIVE = "non-negative"
WRONG_SHAPE = "shape"

_SYNONYM_CARRIERS = {
    REL: (),
    PFUN: (FUNCTIONAL,),
    FUN: (FUNCTIONAL, TOTAL_DOM),
    FFUN: (FUNCTIONAL, FINITE_DOM),
    SEQ: (FUNCTIONAL, FINITE_DOM, CONTIGUOUS_DOM),
    FINSET: (FINITE,),
}


class ZTypeError(ZtcError):
    """A specification failed to type-check."""

    def __init__(
        self,
        code: str,
        message: str,
        *,
        spec: str | None = None,
        pred_index: int | None = None,
    ) -> None:
        self.code = code
        self.spec = spec
        self.pred_index = pred_index
        where = ""
        if spec is not None:
            where = f"{spec}: "
            if pred_index is not None:
                where = f"{spec}, predicate {pred_index}: "
        super().__init__(f"{where}{message}")


def normalize(t: TypeExpr) -> TypeExpr:
    """Rewrite a type to its maximal form: no synonyms, NAT widened to INT."""
    if isinstance(t, (Int, Nat)):
        return INT
    if isinstance(t, (Basic, Free)):
        return t
    if isinstance(t, Product):
        return Product(normalize(t.left), normalize(t.right))
    if isinstance(t, Power):
        return Power(normalize(t.elem))
    if isinstance(t, Synonym):
        if t.kind in (REL, PFUN, FUN, FFUN):
            return Power(Product(normalize(t.args[0]), normalize(t.args[1])))
        if t.kind == SEQ:
            return Power(Product(INT, normalize(t.args[0])))
        return Power(normalize(t.args[0]))
    raise ZTypeError("unknown-type", f"unknown type expression {t!r}")


def carrier_constraints(t: TypeExpr) -> tuple[str, ...]:
    """The semantic constraints a declaration at this type imposes."""
    if isinstance(t, Synonym):
        return _SYNONYM_CARRIERS[t.kind]
    return ()


def synonym_kind(t: TypeExpr) -> str | None:
    return t.kind if isinstance(t, Synonym) else None


def satisfies_carrier(v: Value, t: TypeExpr, ctx: TypeContext) -> str | None:
    """Check a ground value against a declared type.

    Returns None when the value inhabits the type, otherwise the label of
    the violated constraint.  A value of the wrong shape entirely (say an
    integer where a set was declared) reports WRONG_SHAPE.
    """
    if isinstance(t, Int):
        return None if isinstance(v, IntV) else WRONG_SHAPE
    if isinstance(t, Nat):
        if not isinstance(v, IntV):
            return WRONG_SHAPE
        return None if v.value >= 0 else NON_NEGATIVE
    if isinstance(t, Basic):
        return None if isinstance(v, BasicV) else WRONG_SHAPE
    if isinstance(t, Free):
        if (
            isinstance(v, EnumV)
            and v.name in t.constants
            and t.constants.index(v.name) == v.index
        ):
            return None
        return WRONG_SHAPE
    if isinstance(t, Product):
        if not isinstance(v, TupleV):
            return WRONG_SHAPE
        return satisfies_carrier(v.items[0], t.left, ctx) or satisfies_carrier(
            v.items[1], t.right, ctx
        )
    if isinstance(t, Power):
        if not isinstance(v, SetV):
            return WRONG_SHAPE
        for e in v.elems:
            bad = satisfies_carrier(e, t.elem, ctx)
            if bad:
                return bad
        return None
    if isinstance(t, Synonym):
        return _satisfies_synonym(v, t, ctx)
    return WRONG_SHAPE


def _satisfies_synonym(v: Value, t: Synonym, ctx: TypeContext) -> str | None:
    if t.kind == FINSET:
        return satisfies_carrier(v, Power(t.args[0]), ctx)
    if t.kind == SEQ:
        elem = Product(Int(), t.args[0])
    else:
        elem = Product(t.args[0], t.args[1])
    bad = satisfies_carrier(v, Power(elem), ctx)
    if bad:
        return bad
    assert isinstance(v, SetV)
    if t.kind == REL:
        return None
    firsts = [p.items[0] for p in v.elems]
    for i, x in enumerate(firsts):
        for y in firsts[i + 1 :]:
            if value_eq(x, y):
                return FUNCTIONAL
    if t.kind == FUN:
        dom_t = t.args[0]
        if isinstance(dom_t, Free):
            have = {x.name for x in firsts if isinstance(x, EnumV)}
            if have != set(dom_t.constants):
                return TOTAL_DOM
        return None
    if t.kind == SEQ:
        indices = sorted(x.value for x in firsts)
        if indices != list(range(1, len(indices) + 1)):
            return CONTIGUOUS_DOM
    return None


@dataclass(frozen=True, eq=False)
class TypedSpec:
    """A specification together with everything typing established."""

    spec: TestSpec
    ctx: TypeContext
    types: Mapping[Expr, TypeExpr]
    carriers: Mapping[str, tuple[str, ...]]
    warnings: tuple[str, ...]

    @property
    def name(self) -> str:
        return self.spec.name

    def declared_type(self, var: str) -> TypeExpr:
        return self.spec.declared()[var]

    def type_of(self, e: Expr) -> TypeExpr:
        return self.types[e]


def typecheck(spec: TestSpec, ctx: TypeContext) -> TypedSpec:
    """Type-check a specification whose includes are already resolved."""
    if spec.includes:
        raise ValueError(f"resolve includes of {spec.name} before type checking")
    checker = _Checker(spec, ctx)
    return checker.run()


class _Checker:
    def __init__(self, spec: TestSpec, ctx: TypeContext) -> None:
        self.spec = spec
        self.ctx = ctx
        self.types: dict[Expr, TypeExpr] = {}
        self.warnings: list[str] = []
        self.declared = spec.declared()
        self.pred_index = 0

    def fail(self, code: str, message: str) -> ZTypeError:
        return ZTypeError(code, message, spec=self.spec.name, pred_index=self.pred_index)

    def run(self) -> TypedSpec:
        for name, t in self.spec.decls:
            self.check_wellformed(t, name)
        for i, p in enumerate(self.spec.preds):
            self.pred_index = i
            self.check_pred(p)
        carriers = {
            name: carrier_constraints(t) for name, t in self.spec.decls
        }
        return TypedSpec(
            spec=self.spec,
            ctx=self.ctx,
            types=self.types,
            carriers=carriers,
            warnings=tuple(self.warnings),
        )

    def check_wellformed(self, t: TypeExpr, var: str) -> None:
        if isinstance(t, Basic):
            if not self.ctx.has_basic(t.name):
                raise self.fail("unknown-type", f"{var}: basic type {t.name} not declared")
        elif isinstance(t, Free):
            known = self.ctx.free_named(t.name)
            if known != t:
                raise self.fail("unknown-type", f"{var}: free type {t.name} not declared")
        elif isinstance(t, Product):
            self.check_wellformed(t.left, var)
            self.check_wellformed(t.right, var)
        elif isinstance(t, Power):
            self.check_wellformed(t.elem, var)
        elif isinstance(t, Synonym):
            for a in t.args:
                self.check_wellformed(a, var)

    # -- predicates --

    def check_pred(self, p: Pred) -> None:
        tl = self.infer(p.lhs)
        tr = self.infer(p.rhs)
        if isinstance(p, (MemberOf, NotMemberOf)):
            if not isinstance(tr, Power):
                raise self.fail(
                    "mismatch",
                    f"right side of membership must be a set, found {format_type(tr)}",
                )
            if tl != tr.elem:
                raise self.fail(
                    "mismatch",
                    f"membership mixes {format_type(tl)} with a set of {format_type(tr.elem)}",
                )
        elif isinstance(p, (Equal, NotEqual)):
            if tl != tr:
                raise self.fail(
                    "mismatch",
                    f"equality mixes {format_type(tl)} and {format_type(tr)}",
                )
        elif isinstance(p, (SubsetEq, NotSubsetEq)):
            if not isinstance(tl, Power) or tl != tr:
                raise self.fail(
                    "mismatch",
                    f"subset needs two sets of one type, found {format_type(tl)} and {format_type(tr)}",
                )
        elif isinstance(p, (Lt, Leq, Gt, Geq)):
            for side, t in (("left", tl), ("right", tr)):
                if not isinstance(t, Int):
                    raise self.fail(
                        "mismatch",
                        f"{side} side of an order predicate must be integer, found {format_type(t)}",
                    )
        else:
            raise self.fail("mismatch", f"unknown predicate {p!r}")

    # -- expressions --

    def infer(self, e: Expr) -> TypeExpr:
        cached = self.types.get(e)
        if cached is not None:
            return cached
        t = self._infer(e)
        self.types[e] = t
        return t

    def _infer(self, e: Expr) -> TypeExpr:
        if isinstance(e, Var):
            declared = self.declared.get(e.name)
            if declared is None:
                raise self.fail("undeclared-variable", f"variable {e.name} not declared")
            return normalize(declared)
        if isinstance(e, IntLit):
            return INT
        if isinstance(e, EnumLit):
            owner = self.ctx.free_named(e.type_name)
            if owner is None or e.name not in owner.constants:
                raise self.fail("unknown-type", f"constant {e.name} has no free type")
            return owner
        if isinstance(e, BasicLit):
            if not self.ctx.has_basic(e.type_name):
                raise self.fail("unknown-type", f"element {e.name} has no basic type")
            return Basic(e.type_name)
        if isinstance(e, Tuple):
            return Product(self.infer(e.items[0]), self.infer(e.items[1]))
        if isinstance(e, SetExt):
            ts = [self.infer(x) for x in e.items]
            for t in ts[1:]:
                if t != ts[0]:
                    raise self.fail(
                        "mismatch",
                        f"set extension mixes {format_type(ts[0])} and {format_type(t)}",
                    )
            return Power(ts[0])
        if isinstance(e, EmptySet):
            return Power(normalize(e.elem_type))
        if isinstance(e, Range):
            self.expect_int(e.lo, "range bound")
            self.expect_int(e.hi, "range bound")
            return Power(INT)
        if isinstance(e, Apply):
            return self.infer_apply(e)
        if isinstance(e, (Dom, Ran)):
            t = self.infer(e.arg)
            if not (isinstance(t, Power) and isinstance(t.elem, Product)):
                op = "dom" if isinstance(e, Dom) else "ran"
                raise self.fail(
                    "mismatch", f"{op} needs a relation, found {format_type(t)}"
                )
            return Power(t.elem.left if isinstance(e, Dom) else t.elem.right)
        if isinstance(e, Card):
            return self.infer_card(e)
        if isinstance(e, (Union, Inter, Diff)):
            tl, tr = self.infer(e.left), self.infer(e.right)
            if not isinstance(tl, Power) or tl != tr:
                raise self.fail(
                    "mismatch",
                    f"set operation needs two sets of one type, found {format_type(tl)} and {format_type(tr)}",
                )
            return tl
        if isinstance(e, (Add, Sub, Mul)):
            self.expect_int(e.left, "arithmetic operand")
            self.expect_int(e.right, "arithmetic operand")
            return INT
        raise self.fail("mismatch", f"unknown expression {e!r}")

    def expect_int(self, e: Expr, what: str) -> None:
        t = self.infer(e)
        if not isinstance(t, Int):
            raise self.fail("mismatch", f"{what} must be integer, found {format_type(t)}")

    def infer_apply(self, e: Apply) -> TypeExpr:
        if not isinstance(e.fn, Var):
            raise self.fail(
                "apply-on-non-function",
                "application target must be a declared function variable",
            )
        declared = self.declared.get(e.fn.name)
        if declared is None:
            raise self.fail("undeclared-variable", f"variable {e.fn.name} not declared")
        kind = synonym_kind(declared)
        if kind not in FUNCTION_KINDS:
            raise self.fail(
                "apply-on-non-function",
                f"{e.fn.name} : {format_type(declared)} is not a function",
            )
        self.infer(e.fn)
        targ = self.infer(e.arg)
        if kind == SEQ:
            expected: TypeExpr = INT
            result = normalize(declared.args[0])
        else:
            expected = normalize(declared.args[0])
            result = normalize(declared.args[1])
        if targ != expected:
            raise self.fail(
                "mismatch",
                f"{e.fn.name} applies to {format_type(expected)}, found {format_type(targ)}",
            )
        if kind != FUN and not self.has_domain_guard(e):
            self.warnings.append(
                f"{self.spec.name}: predicate {self.pred_index} applies partial "
                f"function {e.fn.name} without an earlier domain guard"
            )
        return result

    def has_domain_guard(self, e: Apply) -> bool:
        """An earlier atom of the form `arg in dom fn` covers this apply."""
        guard = MemberOf(e.arg, Dom(e.fn))
        return any(p == guard for p in self.spec.preds[: self.pred_index])

    def infer_card(self, e: Card) -> TypeExpr:
        t = self.infer(e.arg)
        if not isinstance(t, Power):
            raise self.fail(
                "card-on-non-finset", f"# needs a finite set, found {format_type(t)}"
            )
        if not self.finitary(e.arg):
            raise self.fail(
                "card-on-non-finset",
                "# applies only to expressions that are finite by construction "
                "(finite-set, ffun or seq variables, extensions, ranges and "
                "combinations that preserve finiteness)",
            )
        return INT

    def finitary(self, e: Expr) -> bool:
        if isinstance(e, (SetExt, Range, EmptySet)):
            return True
        if isinstance(e, Var):
            kind = synonym_kind(self.declared.get(e.name))
            return kind in (FINSET, FFUN, SEQ)
        if isinstance(e, (Dom, Ran)):
            return self.finitary(e.arg)
        if isinstance(e, Inter):
            return self.finitary(e.left) or self.finitary(e.right)
        if isinstance(e, Union):
            return self.finitary(e.left) and self.finitary(e.right)
        if isinstance(e, Diff):
            return self.finitary(e.left)
        return False
