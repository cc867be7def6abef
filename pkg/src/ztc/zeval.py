"""Ground evaluation of expressions and predicates.

Bindings map variable names to values from zcore.  Evaluation is total
except for the two partial spots of the language: applying a function
outside its domain and applying a non-functional relation, both of which
raise EvalError.  check_spec folds those errors into a verdict instead of
letting them escape.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from . import ztype
from .zcore import (
    Add,
    Apply,
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
    Geq,
    Gt,
    IntLit,
    IntV,
    Inter,
    Leq,
    Lt,
    MemberOf,
    Mul,
    NotEqual,
    NotMemberOf,
    NotSubsetEq,
    Pred,
    Ran,
    Range,
    SetExt,
    SetV,
    Sub,
    SubsetEq,
    Tuple,
    TupleV,
    TypeContext,
    Union,
    Value,
    Var,
    ZtcError,
    value_eq,
)
from .ztype import TypedSpec

_RANGE_SPAN_LIMIT = 100_000

Env = Mapping[str, Value]


class EvalError(ZtcError):
    """Evaluation hit a partial spot of the language."""


class ApplyOutsideDomain(EvalError):
    pass


class ApplyNonFunctional(EvalError):
    pass


class UnboundVariable(EvalError):
    pass


def eval_expr(e: Expr, env: Env, ctx: TypeContext | None = None) -> Value:
    if isinstance(e, Var):
        try:
            return env[e.name]
        except KeyError:
            raise UnboundVariable(f"no binding for {e.name}") from None
    if isinstance(e, IntLit):
        return IntV(e.value)
    if isinstance(e, EnumLit):
        free = ctx.free_named(e.type_name) if ctx is not None else None
        if free is None:
            raise EvalError(f"constant {e.name} needs a type context to evaluate")
        return EnumV(e.name, free.constants.index(e.name))
    if isinstance(e, BasicLit):
        return BasicV(e.name)
    if isinstance(e, Tuple):
        return TupleV(tuple(eval_expr(x, env, ctx) for x in e.items))
    if isinstance(e, SetExt):
        return SetV(tuple(eval_expr(x, env, ctx) for x in e.items))
    if isinstance(e, EmptySet):
        return SetV(())
    if isinstance(e, Range):
        lo = _int(eval_expr(e.lo, env, ctx), "range bound")
        hi = _int(eval_expr(e.hi, env, ctx), "range bound")
        if hi - lo > _RANGE_SPAN_LIMIT:
            raise EvalError(f"range {lo}..{hi} too large to enumerate")
        return SetV(tuple(IntV(i) for i in range(lo, hi + 1)))
    if isinstance(e, Apply):
        return _apply(e, env, ctx)
    if isinstance(e, Dom):
        pairs = _pairs(eval_expr(e.arg, env, ctx), "dom")
        return SetV(tuple(p.items[0] for p in pairs))
    if isinstance(e, Ran):
        pairs = _pairs(eval_expr(e.arg, env, ctx), "ran")
        return SetV(tuple(p.items[1] for p in pairs))
    if isinstance(e, Card):
        return IntV(len(_set(eval_expr(e.arg, env, ctx), "#")))
    if isinstance(e, Union):
        a = _set(eval_expr(e.left, env, ctx), "cup")
        b = _set(eval_expr(e.right, env, ctx), "cup")
        return SetV(a.elems + b.elems)
    if isinstance(e, Inter):
        a = _set(eval_expr(e.left, env, ctx), "cap")
        b = _set(eval_expr(e.right, env, ctx), "cap")
        return SetV(tuple(x for x in a.elems if x in b))
    if isinstance(e, Diff):
        a = _set(eval_expr(e.left, env, ctx), "setminus")
        b = _set(eval_expr(e.right, env, ctx), "setminus")
        return SetV(tuple(x for x in a.elems if x not in b))
    if isinstance(e, (Add, Sub, Mul)):
        a = _int(eval_expr(e.left, env, ctx), "arithmetic operand")
        b = _int(eval_expr(e.right, env, ctx), "arithmetic operand")
        if isinstance(e, Add):
            return IntV(a + b)
        if isinstance(e, Sub):
            return IntV(a - b)
        return IntV(a * b)
    raise EvalError(f"unknown expression node {e!r}")


def _int(v: Value, what: str) -> int:
    if not isinstance(v, IntV):
        raise EvalError(f"{what} evaluated to a non-integer {v!r}")
    return v.value


def _set(v: Value, what: str) -> SetV:
    if not isinstance(v, SetV):
        raise EvalError(f"{what} evaluated to a non-set {v!r}")
    return v


def _pairs(v: Value, what: str) -> tuple[TupleV, ...]:
    s = _set(v, what)
    for x in s.elems:
        if not isinstance(x, TupleV):
            raise EvalError(f"{what} needs a set of pairs, found {x!r}")
    return s.elems  # type: ignore[return-value]


def _apply(e: Apply, env: Env, ctx: TypeContext | None) -> Value:
    fn = eval_expr(e.fn, env, ctx)
    arg = eval_expr(e.arg, env, ctx)
    pairs = _pairs(fn, "@")
    hits = [p.items[1] for p in pairs if value_eq(p.items[0], arg)]
    if not hits:
        raise ApplyOutsideDomain(f"application outside domain at argument {arg!r}")
    distinct = SetV(tuple(hits))
    if len(distinct) > 1:
        raise ApplyNonFunctional(
            f"relation maps argument {arg!r} to {len(distinct)} values"
        )
    return hits[0]


def eval_pred(p: Pred, env: Env, ctx: TypeContext | None = None) -> bool:
    if isinstance(p, (MemberOf, NotMemberOf)):
        inside = _member(p.lhs, p.rhs, env, ctx)
        return inside if isinstance(p, MemberOf) else not inside
    if isinstance(p, (Equal, NotEqual)):
        same = value_eq(eval_expr(p.lhs, env, ctx), eval_expr(p.rhs, env, ctx))
        return same if isinstance(p, Equal) else not same
    if isinstance(p, (SubsetEq, NotSubsetEq)):
        a = _set(eval_expr(p.lhs, env, ctx), "subseteq")
        b = _set(eval_expr(p.rhs, env, ctx), "subseteq")
        inside = all(x in b for x in a.elems)
        return inside if isinstance(p, SubsetEq) else not inside
    if isinstance(p, (Lt, Leq, Gt, Geq)):
        a = _int(eval_expr(p.lhs, env, ctx), "order operand")
        b = _int(eval_expr(p.rhs, env, ctx), "order operand")
        if isinstance(p, Lt):
            return a < b
        if isinstance(p, Leq):
            return a <= b
        if isinstance(p, Gt):
            return a > b
        return a >= b
    raise EvalError(f"unknown predicate node {p!r}")


def _member(lhs: Expr, rhs: Expr, env: Env, ctx: TypeContext | None) -> bool:
    # Bounds-check ranges without materializing them.
    if isinstance(rhs, Range):
        v = _int(eval_expr(lhs, env, ctx), "range member")
        lo = _int(eval_expr(rhs.lo, env, ctx), "range bound")
        hi = _int(eval_expr(rhs.hi, env, ctx), "range bound")
        return lo <= v <= hi
    v = eval_expr(lhs, env, ctx)
    s = _set(eval_expr(rhs, env, ctx), "in")
    return v in s


# ---------------------------------------------------------------------------
# Whole-specification checking
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    """Outcome of checking one binding against one specification.

    status is "satisfied", "failed" or "error".  For a failed carrier
    constraint, `carrier` holds (variable, constraint label) and `index`
    is None; for a failed or erroring predicate, `index` is its position.
    """

    status: str
    index: int | None = None
    carrier: tuple[str, str] | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.status == "satisfied"

    def describe(self) -> str:
        if self.status == "satisfied":
            return "satisfied"
        if self.carrier is not None:
            var, label = self.carrier
            return f"failed: {var} violates its {label} constraint"
        if self.status == "failed":
            return f"failed: predicate {self.index} is false"
        return f"error: predicate {self.index}: {self.error}"


def check_spec(tspec: TypedSpec, env: Env) -> Verdict:
    """Verify a full binding: carrier constraints first, then every atom."""
    for name, declared in tspec.spec.decls:
        if name not in env:
            raise UnboundVariable(f"binding for {name} missing")
        bad = ztype.satisfies_carrier(env[name], declared, tspec.ctx)
        if bad:
            return Verdict(status="failed", carrier=(name, bad))
    for i, p in enumerate(tspec.spec.preds):
        try:
            ok = eval_pred(p, env, tspec.ctx)
        except EvalError as err:
            return Verdict(status="error", index=i, error=str(err))
        if not ok:
            return Verdict(status="failed", index=i)
    return Verdict(status="satisfied")
