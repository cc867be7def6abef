"""Core abstract syntax for test specifications over ZF set theory.

Three layers live here: type expressions (with the usual relational
synonyms), the expression/predicate language that specification bodies are
written in, and the ground values that evaluation and search produce.
Every node is a frozen dataclass, so trees hash and compare structurally
and can be shared freely.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field


class ZtcError(Exception):
    """Base class for all errors raised by this package."""


class InternalError(ZtcError):
    """A broken internal invariant; callers should never trigger this."""


# ---------------------------------------------------------------------------
# Type expressions
# ---------------------------------------------------------------------------

REL = "rel"
PFUN = "pfun"
FUN = "fun"
FFUN = "ffun"
SEQ = "seq"
FINSET = "fset"

_SYNONYM_ARITY = {REL: 2, PFUN: 2, FUN: 2, FFUN: 2, SEQ: 1, FINSET: 1}

# Synonyms whose values are functional relations.
FUNCTION_KINDS = frozenset({PFUN, FUN, FFUN, SEQ})


class TypeExpr:
    """Base class for type expressions."""

    __slots__ = ()


@dataclass(frozen=True)
class Int(TypeExpr):
    """The integers."""


@dataclass(frozen=True)
class Nat(TypeExpr):
    """The naturals; the integers restricted to values >= 0."""


@dataclass(frozen=True)
class Basic(TypeExpr):
    """A declared given type with no further structure."""

    name: str


@dataclass(frozen=True)
class Free(TypeExpr):
    """A free type: a fixed, ordered enumeration of constants."""

    name: str
    constants: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.constants:
            raise ValueError(f"free type {self.name} has no constants")
        if len(set(self.constants)) != len(self.constants):
            raise ValueError(f"free type {self.name} repeats a constant")


@dataclass(frozen=True)
class Product(TypeExpr):
    """A binary cartesian product."""

    left: TypeExpr
    right: TypeExpr


@dataclass(frozen=True)
class Power(TypeExpr):
    """The power set of a type."""

    elem: TypeExpr


@dataclass(frozen=True)
class Synonym(TypeExpr):
    """A relational synonym: rel, pfun, fun, ffun, seq or fset."""

    kind: str
    args: tuple[TypeExpr, ...]

    def __post_init__(self) -> None:
        arity = _SYNONYM_ARITY.get(self.kind)
        if arity is None:
            raise ValueError(f"unknown type synonym {self.kind!r}")
        if len(self.args) != arity:
            raise ValueError(
                f"{self.kind} takes {arity} argument(s), got {len(self.args)}"
            )


INT = Int()
NAT = Nat()

# Precedence levels for rendering types: infix synonyms bind loosest,
# then product, then the prefix forms (P, seq, fset).
_TYPE_INFIX = 1
_TYPE_PRODUCT = 2
_TYPE_PREFIX = 3
_TYPE_ATOM = 4


def format_type(t: TypeExpr) -> str:
    """Render a type expression in the concrete surface syntax."""
    return _format_type(t, 0)


def _format_type(t: TypeExpr, ctx: int) -> str:
    if isinstance(t, Int):
        return "INT"
    if isinstance(t, Nat):
        return "NAT"
    if isinstance(t, (Basic, Free)):
        return t.name
    if isinstance(t, Product):
        text = f"{_format_type(t.left, _TYPE_PRODUCT + 1)} x {_format_type(t.right, _TYPE_PRODUCT + 1)}"
        return f"({text})" if ctx > _TYPE_PRODUCT else text
    if isinstance(t, Power):
        text = f"P {_format_type(t.elem, _TYPE_ATOM)}"
        return f"({text})" if ctx > _TYPE_PREFIX else text
    if isinstance(t, Synonym):
        if t.kind in (SEQ, FINSET):
            text = f"{t.kind} {_format_type(t.args[0], _TYPE_ATOM)}"
            return f"({text})" if ctx > _TYPE_PREFIX else text
        left = _format_type(t.args[0], _TYPE_INFIX + 1)
        right = _format_type(t.args[1], _TYPE_INFIX + 1)
        text = f"{left} {t.kind} {right}"
        return f"({text})" if ctx > _TYPE_INFIX else text
    raise InternalError(f"unknown type node {t!r}")


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------


class Expr:
    """Base class for value-level expressions."""

    __slots__ = ()


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class IntLit(Expr):
    value: int


@dataclass(frozen=True)
class EnumLit(Expr):
    """A constant of a free type."""

    name: str
    type_name: str


@dataclass(frozen=True)
class BasicLit(Expr):
    """A named element of a basic type, as produced by model search."""

    name: str
    type_name: str


@dataclass(frozen=True)
class Tuple(Expr):
    """An ordered pair, written `a |-> b`."""

    items: tuple[Expr, ...]

    def __post_init__(self) -> None:
        if len(self.items) != 2:
            raise ValueError("tuples are pairs; nest maplets for wider ones")


@dataclass(frozen=True)
class SetExt(Expr):
    """A set written in extension; never empty (see EmptySet)."""

    items: tuple[Expr, ...]

    def __post_init__(self) -> None:
        if not self.items:
            raise ValueError("set extension needs elements; use EmptySet")


@dataclass(frozen=True)
class EmptySet(Expr):
    """The empty set at a stated element type."""

    elem_type: TypeExpr


@dataclass(frozen=True)
class Range(Expr):
    """The contiguous integer interval lo .. hi (empty when lo > hi)."""

    lo: Expr
    hi: Expr


@dataclass(frozen=True)
class Apply(Expr):
    """Function application, written `f @ x`."""

    fn: Expr
    arg: Expr


@dataclass(frozen=True)
class Dom(Expr):
    arg: Expr


@dataclass(frozen=True)
class Ran(Expr):
    arg: Expr


@dataclass(frozen=True)
class Card(Expr):
    """Cardinality of a finite set, written `# e`."""

    arg: Expr


@dataclass(frozen=True)
class Union(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Inter(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Diff(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


def iter_exprs(root: Expr):
    """Yield root and every subexpression, in left-to-right preorder."""
    stack = [root]
    while stack:
        e = stack.pop()
        yield e
        stack.extend(reversed(_children(e)))


def _children(e: Expr) -> list[Expr]:
    if isinstance(e, (Var, IntLit, EnumLit, BasicLit, EmptySet)):
        return []
    if isinstance(e, (Tuple, SetExt)):
        return list(e.items)
    if isinstance(e, Range):
        return [e.lo, e.hi]
    if isinstance(e, Apply):
        return [e.fn, e.arg]
    if isinstance(e, (Dom, Ran, Card)):
        return [e.arg]
    if isinstance(e, (Union, Inter, Diff, Add, Sub, Mul)):
        return [e.left, e.right]
    raise InternalError(f"unknown expression node {e!r}")


# ---------------------------------------------------------------------------
# Predicates
# ---------------------------------------------------------------------------


class Pred:
    """Base class for atomic predicates."""

    __slots__ = ()


@dataclass(frozen=True)
class MemberOf(Pred):
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class NotMemberOf(Pred):
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Equal(Pred):
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class NotEqual(Pred):
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class SubsetEq(Pred):
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class NotSubsetEq(Pred):
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Lt(Pred):
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Leq(Pred):
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Gt(Pred):
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Geq(Pred):
    lhs: Expr
    rhs: Expr


def pred_exprs(p: Pred) -> tuple[Expr, Expr]:
    """The two operand expressions of an atomic predicate."""
    return (p.lhs, p.rhs)


# ---------------------------------------------------------------------------
# Specifications
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TestSpec:
    """One named specification: declarations plus a conjunction of atoms.

    `decls` and `preds` hold only what the block itself wrote; `includes`
    names earlier blocks whose parts get prepended by resolve_includes.
    """

    name: str
    includes: tuple[str, ...]
    decls: tuple[tuple[str, TypeExpr], ...]
    preds: tuple[Pred, ...]

    def __post_init__(self) -> None:
        names = [n for n, _ in self.decls]
        if len(set(names)) != len(names):
            dup = next(n for n in names if names.count(n) > 1)
            raise ValueError(f"variable {dup!r} declared twice in {self.name}")

    def declared(self) -> dict[str, TypeExpr]:
        return dict(self.decls)


@dataclass(frozen=True)
class TypeContext:
    """The free and basic types a specification can mention."""

    frees: tuple[Free, ...] = ()
    basics: tuple[Basic, ...] = ()

    def free_named(self, name: str) -> Free | None:
        for f in self.frees:
            if f.name == name:
                return f
        return None

    def constant_owner(self, constant: str) -> Free | None:
        for f in self.frees:
            if constant in f.constants:
                return f
        return None

    def has_basic(self, name: str) -> bool:
        return any(b.name == name for b in self.basics)


# ---------------------------------------------------------------------------
# Ground values
# ---------------------------------------------------------------------------


class Value:
    """Base class for ground values."""

    __slots__ = ()


@dataclass(frozen=True)
class IntV(Value):
    value: int


@dataclass(frozen=True)
class EnumV(Value):
    """A free-type constant; `index` is its declaration position."""

    name: str
    index: int


@dataclass(frozen=True)
class BasicV(Value):
    """A synthesized element of a basic type, e.g. SENSOR2."""

    name: str


@dataclass(frozen=True)
class TupleV(Value):
    items: tuple[Value, ...]

    def __post_init__(self) -> None:
        if len(self.items) != 2:
            raise ValueError("tuple values are pairs")


@dataclass(frozen=True)
class SetV(Value):
    """A finite set.  Elements are stored deduplicated in canonical order,
    so structural equality coincides with set equality."""

    elems: tuple[Value, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "elems", _canonical_elems(self.elems))

    def __contains__(self, v: Value) -> bool:
        return any(value_eq(v, e) for e in self.elems)

    def __len__(self) -> int:
        return len(self.elems)


_KIND_RANK = {IntV: 0, EnumV: 1, BasicV: 2, TupleV: 3, SetV: 4}


def canonical_order(a: Value, b: Value) -> int:
    """Total order on same-kind values: -1, 0 or 1.

    Integers by magnitude, enum constants by declaration position, basic
    elements by name, tuples and sets length-first then elementwise.
    Comparing values of different kinds is a programming error.
    """
    if type(a) is not type(b):
        raise InternalError(
            f"cannot order {type(a).__name__} against {type(b).__name__}"
        )
    if isinstance(a, IntV):
        return _cmp(a.value, b.value)
    if isinstance(a, EnumV):
        return _cmp((a.index, a.name), (b.index, b.name))
    if isinstance(a, BasicV):
        return _cmp(a.name, b.name)
    if isinstance(a, (TupleV, SetV)):
        xs = a.items if isinstance(a, TupleV) else a.elems
        ys = b.items if isinstance(b, TupleV) else b.elems
        if len(xs) != len(ys):
            return _cmp(len(xs), len(ys))
        for x, y in zip(xs, ys):
            c = canonical_order(x, y)
            if c:
                return c
        return 0
    raise InternalError(f"unknown value node {a!r}")


def _cmp(a, b) -> int:
    return (a > b) - (a < b)


canonical_key = functools.cmp_to_key(canonical_order)


def _canonical_elems(elems: tuple[Value, ...]) -> tuple[Value, ...]:
    ordered = sorted(elems, key=canonical_key)
    out: list[Value] = []
    for v in ordered:
        if not out or canonical_order(out[-1], v) != 0:
            out.append(v)
    return tuple(out)


def value_eq(a: Value, b: Value) -> bool:
    """Structural equality; SetV storage makes it order-insensitive."""
    return a == b


def sort_values(values) -> list[Value]:
    return sorted(values, key=canonical_key)


def format_value(v: Value) -> str:
    """Render a value in the concrete syntax (maplets for pairs)."""
    if isinstance(v, IntV):
        return str(v.value)
    if isinstance(v, (EnumV, BasicV)):
        return v.name
    if isinstance(v, TupleV):
        return f"{format_value(v.items[0])} |-> {format_value(v.items[1])}"
    if isinstance(v, SetV):
        return "{ " + ", ".join(format_value(e) for e in v.elems) + " }" if v.elems else "{}"
    raise InternalError(f"unknown value node {v!r}")
