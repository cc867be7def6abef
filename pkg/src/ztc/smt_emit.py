"""Solver script emission.

Specifications translate into two SMT dialect grammars.  The encoding is
the same shallow one in both: sets become characteristic maps (boolean
functions in the first dialect, arrays of BITVECTOR(1) in the second),
partial functions become dom/law records, finite sets and sequences
become records carrying an explicit bijection or length plus axioms that
pin the extra fields down, and each set operator is defined once per
element type it is used at.  Every atomic predicate of the specification
becomes exactly one assert.

Scripts carry, next to their text, a small term IR for every definition
and assert.  The IR is what witness.interpret_script evaluates, which
keeps "what the script means" testable without a solver installed.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import __version__
from .zcore import (
    FFUN,
    FINSET,
    FUN,
    FUNCTION_KINDS,
    PFUN,
    REL,
    SEQ,
    Add,
    Apply,
    Basic,
    BasicLit,
    Card,
    Diff,
    Dom,
    EmptySet,
    EnumLit,
    Equal,
    Expr,
    Free,
    Geq,
    Gt,
    Int,
    IntLit,
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
    Sub,
    SubsetEq,
    Synonym,
    Tuple,
    TypeExpr,
    Union,
    Var,
    ZtcError,
    iter_exprs,
)
from .ztype import TypedSpec, normalize, synonym_kind

YICES = "yices"
CVC3 = "cvc3"
DIALECTS = (YICES, CVC3)

# Number of fresh constants a basic type contributes to the candidate
# universe, and to the datatype replacing it under the scalar variant.
BASIC_UNIVERSE_SIZE = 3


class EmitError(ZtcError):
    """The specification uses constructs the dialects cannot express."""

    def __init__(self, spec: str, problems: list[str]) -> None:
        self.problems = problems
        super().__init__(f"{spec}: " + "; ".join(problems))


class UnsupportedExpr(ZtcError):
    pass


def mangle(name: str) -> str:
    """Solver-safe identifier: the decoration `?` becomes `_q`."""
    return name.replace("?", "_q")


def type_path(t: TypeExpr) -> str:
    """Element-type tag used to monomorphize operator names."""
    t = normalize(t)
    if isinstance(t, Int):
        return "INT"
    if isinstance(t, (Basic, Free)):
        return t.name
    if isinstance(t, Product):
        return f"{type_path(t.left)}x{type_path(t.right)}"
    if isinstance(t, Power):
        return f"P{type_path(t.elem)}"
    raise UnsupportedExpr(f"no name path for type {t!r}")


def script_filename(spec_name: str, dialect: str) -> str:
    ext = "ys" if dialect == YICES else "cvc"
    return f"{spec_name}.{dialect}.{ext}"


# ---------------------------------------------------------------------------
# Term IR
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class IntC:
    value: int


@dataclass(frozen=True)
class BoolC:
    value: bool


@dataclass(frozen=True)
class Bv1:
    bit: int


@dataclass(frozen=True)
class TupleC:
    items: tuple


@dataclass(frozen=True)
class App:
    fn: object
    args: tuple


@dataclass(frozen=True)
class ARead:
    arr: object
    args: tuple


@dataclass(frozen=True)
class Field:
    rec: object
    name: str


@dataclass(frozen=True)
class TSel:
    tup: object
    index: int  # 1-based


@dataclass(frozen=True)
class Lam:
    params: tuple  # of (name, Sort)
    body: object


@dataclass(frozen=True)
class Forall:
    params: tuple
    body: object


@dataclass(frozen=True)
class Exists:
    params: tuple
    body: object


@dataclass(frozen=True)
class Not:
    arg: object


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class Or:
    args: tuple


@dataclass(frozen=True)
class Implies:
    lhs: object
    rhs: object


@dataclass(frozen=True)
class Iff:
    lhs: object
    rhs: object


@dataclass(frozen=True)
class Eq:
    lhs: object
    rhs: object


@dataclass(frozen=True)
class Le:
    lhs: object
    rhs: object


@dataclass(frozen=True)
class LtT:
    lhs: object
    rhs: object


@dataclass(frozen=True)
class AddT:
    lhs: object
    rhs: object


@dataclass(frozen=True)
class SubT:
    lhs: object
    rhs: object


@dataclass(frozen=True)
class MulT:
    lhs: object
    rhs: object


@dataclass(frozen=True)
class Ite:
    cond: object
    then: object
    other: object


# Sorts


@dataclass(frozen=True)
class SName:
    name: str


@dataclass(frozen=True)
class SMap:
    args: tuple
    ret: object


@dataclass(frozen=True)
class SFunSig:
    args: tuple
    ret: object


@dataclass(frozen=True)
class SRec:
    fields: tuple  # of (name, Sort)


@dataclass(frozen=True)
class STup:
    items: tuple


# ---------------------------------------------------------------------------
# Script containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Sentence:
    """One line of a script plus enough structure to re-interpret it."""

    text: str
    kind: str  # comment | prelude | type-decl | var-decl | aux-def | op-decl
    #          | opdef-assert | carrier-assert | pred-assert | check | model-request
    name: str | None = None
    sort: object | None = None
    definition: object | None = None
    formula: object | None = None
    pred_index: int | None = None


@dataclass(frozen=True)
class SymbolInfo:
    z_name: str
    emitted: str
    declared: TypeExpr
    kind: str  # int nat enum basic tuple set finset pfun fun ffun seq
    fset: str | None = None


@dataclass(frozen=True)
class SmtScript:
    dialect: str
    variant: bool
    spec_name: str
    items: tuple[Sentence, ...]
    symbols: dict[str, SymbolInfo]
    universes: dict[str, tuple[str, ...]]
    int_literals: tuple[int, ...]
    decl_order: tuple[str, ...]

    @property
    def sentences(self) -> list[str]:
        return [s.text for s in self.items]

    @property
    def text(self) -> str:
        return "\n".join(self.sentences) + "\n"

    def asserts(self) -> list[Sentence]:
        return [s for s in self.items if s.kind.endswith("assert")]

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for s in self.items:
            out[s.kind] = out.get(s.kind, 0) + 1
        return out


def _var_kind(t: TypeExpr) -> str:
    if isinstance(t, Nat):
        return "nat"
    if isinstance(t, Int):
        return "int"
    if isinstance(t, Free):
        return "enum"
    if isinstance(t, Basic):
        return "basic"
    if isinstance(t, Product):
        return "tuple"
    if isinstance(t, Power):
        return "set"
    kind = synonym_kind(t)
    if kind == REL:
        return "set"
    if kind == FINSET:
        return "finset"
    if kind in (PFUN, FUN, FFUN, SEQ):
        return kind
    raise UnsupportedExpr(f"cannot declare a variable at type {t!r}")


def _flatten_elem(t: TypeExpr) -> list[TypeExpr]:
    """Characteristic-map argument types: products flatten, sets stay."""
    t = normalize(t)
    if isinstance(t, Product):
        return _flatten_elem(t.left) + _flatten_elem(t.right)
    return [t]


def _mentions_nat(t: TypeExpr) -> bool:
    if isinstance(t, Nat):
        return True
    if isinstance(t, Product):
        return _mentions_nat(t.left) or _mentions_nat(t.right)
    if isinstance(t, Power):
        return _mentions_nat(t.elem)
    if isinstance(t, Synonym):
        return any(_mentions_nat(a) for a in t.args)
    return False


_PARAM_POOLS = {
    "elem": ("x", "a", "b", "c", "d"),
    "left": ("x", "a", "b"),
    "right": ("y", "c", "d"),
}


def _param_names(n: int, pool: str, avoid: set[str] | None = None) -> list[str]:
    names = _PARAM_POOLS[pool]
    base = [names[0]] if n == 1 else list(names[1 : n + 1])
    if not avoid:
        return base
    out = []
    for name in base:
        fresh = name
        i = 2
        while fresh in avoid:
            fresh = f"{name}{i}"
            i += 1
        avoid.add(fresh)
        out.append(fresh)
    return out


def _free_syms(term) -> set[str]:
    """Symbols a term mentions, minus any it binds itself."""
    if isinstance(term, Sym):
        return {term.name}
    if isinstance(term, (Lam, Forall, Exists)):
        bound = {n for n, _ in term.params}
        return _free_syms(term.body) - bound
    out: set[str] = set()
    for f in term.__dataclass_fields__:
        child = getattr(term, f)
        if isinstance(child, tuple):
            for c in child:
                if hasattr(c, "__dataclass_fields__"):
                    out |= _free_syms(c)
        elif hasattr(child, "__dataclass_fields__"):
            out |= _free_syms(child)
    return out


# ---------------------------------------------------------------------------
# Shared builder
# ---------------------------------------------------------------------------


class _Builder:
    dialect = ""

    def __init__(self, tspec: TypedSpec, variant: bool) -> None:
        self.tspec = tspec
        self.variant = variant
        self.symbols: dict[str, SymbolInfo] = {}
        self.aux: dict[str, list[Sentence]] = {}
        self.problems: list[str] = []
        self._current_pred = 0
        for name, t in tspec.spec.decls:
            self.symbols[name] = SymbolInfo(
                z_name=name,
                emitted=mangle(name),
                declared=t,
                kind=_var_kind(t),
            )

    # ---- hooks each dialect provides ----

    def bool_term(self, value: bool):
        raise NotImplementedError

    def mem_read(self, set_term, args: list):
        raise NotImplementedError

    def char_lambda(self, params: list[tuple[str, object]], body):
        raise NotImplementedError

    def apply_map(self, fn, args: list):
        raise NotImplementedError

    def render_term(self, term) -> str:
        raise NotImplementedError

    def render_sort(self, sort) -> str:
        raise NotImplementedError

    def decl_sort(self, t: TypeExpr):
        raise NotImplementedError

    def scalar_sort(self, t: TypeExpr):
        raise NotImplementedError

    def char_map_sort(self, elem: TypeExpr):
        raise NotImplementedError

    def comment(self, text: str) -> Sentence:
        raise NotImplementedError

    def type_decl_sentences(self, t: Basic | Free) -> list[Sentence]:
        raise NotImplementedError

    def var_decl_sentence(self, info: SymbolInfo) -> Sentence:
        raise NotImplementedError

    def def_sentence(self, name: str, sort, body, kind: str = "aux-def") -> Sentence:
        raise NotImplementedError

    def op_sentences(self, op: str, elem: TypeExpr) -> list[Sentence]:
        raise NotImplementedError

    def assert_sentence(self, formula, kind: str, pred_index: int | None = None) -> Sentence:
        raise NotImplementedError

    def check_tail(self) -> list[Sentence]:
        raise NotImplementedError

    def prelude(self) -> list[Sentence]:
        return []

    # ---- shared machinery ----

    def fail(self, message: str):
        raise UnsupportedExpr(f"predicate {self._current_pred}: {message}")

    def norm(self, e: Expr) -> TypeExpr:
        return self.tspec.type_of(e)

    def elem_of(self, e: Expr) -> TypeExpr:
        t = self.norm(e)
        if not isinstance(t, Power):
            raise self.fail(f"expected a set expression, found type {t!r}")
        return t.elem

    def ensure_op(self, op: str, elem: TypeExpr) -> str:
        name = f"{op}{type_path(elem)}"
        if name not in self.aux:
            self.aux[name] = self.op_sentences(op, elem)
        return name

    def ensure_fset(self, var: str) -> str:
        info = self.symbols[var]
        name = f"{info.emitted}Set"
        if name not in self.aux:
            self.aux[name] = self.fset_sentences(info, name)
        if info.fset is None:
            self.symbols[var] = SymbolInfo(
                info.z_name, info.emitted, info.declared, info.kind, fset=name
            )
        return name

    def fset_sentences(self, info: SymbolInfo, name: str) -> list[Sentence]:
        """Coerce a function-shaped record (or total map) to a plain set."""
        declared = info.declared
        kind = synonym_kind(declared)
        if kind == SEQ:
            dom_ts, ran_t = [Int()], declared.args[0]
        else:
            dom_ts, ran_t = [declared.args[0]], declared.args[1]
        avoid = {info.emitted}
        xs = _param_names(sum(len(_flatten_elem(t)) for t in dom_ts), "left", avoid)
        x_sorts = [self.scalar_sort(t) for dt in dom_ts for t in _flatten_elem(dt)]
        y = _param_names(1, "right", avoid)[0]
        y_sort = self.scalar_sort(normalize(ran_t))
        params = list(zip(xs, x_sorts)) + [(y, y_sort)]
        x_syms = [Sym(x) for x in xs]
        base = Sym(info.emitted)
        if kind == FUN:
            inside = Eq(self.apply_map(base, x_syms), Sym(y))
        else:
            clauses = [
                self.mem_read(Field(base, "dom"), x_syms),
                Eq(self.apply_map(Field(base, "law"), x_syms), Sym(y)),
            ]
            if kind == SEQ:
                # Guard the index so the set is empty off the 1..card window.
                clauses.insert(0, Le(IntC(1), x_syms[0]))
            inside = And(tuple(clauses))
        sort = self.char_map_sort(self._coercion_elem(declared))
        return [self.def_sentence(name, sort, self.char_lambda(params, inside))]

    def _coercion_elem(self, declared: TypeExpr) -> TypeExpr:
        t = normalize(declared)
        assert isinstance(t, Power)
        return t.elem

    # -- expression translation --

    def set_term(self, e: Expr):
        if isinstance(e, Var):
            info = self.symbols[e.name]
            if info.kind == "set":
                return Sym(info.emitted)
            if info.kind == "finset":
                return Field(Sym(info.emitted), "set")
            if info.kind in ("pfun", "fun", "ffun", "seq"):
                return Sym(self.ensure_fset(e.name))
            raise self.fail(f"{e.name} is not set-valued")
        if isinstance(e, EmptySet):
            return Sym(self.ensure_op("emptyset", self.elem_of(e)))
        if isinstance(e, SetExt):
            return self._setext_lambda(e)
        if isinstance(e, Range):
            lo, hi = self.scalar_term(e.lo), self.scalar_term(e.hi)
            avoid = _free_syms(lo) | _free_syms(hi)
            name = "i"
            while name in avoid:
                name += "i"
            i = Sym(name)
            body = And((Le(lo, i), Le(i, hi)))
            return self.char_lambda([(name, self.scalar_sort(Int()))], body)
        if isinstance(e, (Union, Inter, Diff)):
            op = {Union: "cup", Inter: "cap", Diff: "setminus"}[type(e)]
            name = self.ensure_op(op, self.elem_of(e))
            return App(Sym(name), (self.set_term(e.left), self.set_term(e.right)))
        if isinstance(e, Dom):
            return self._dom_term(e.arg)
        if isinstance(e, Ran):
            return self._ran_term(e.arg)
        raise self.fail(f"cannot translate {type(e).__name__} as a set")

    def _setext_lambda(self, e: SetExt):
        elem = self.elem_of(e)
        args = _flatten_elem(elem)
        item_parts = [self.flatten_member(item, elem) for item in e.items]
        avoid = set()
        for parts in item_parts:
            for p in parts:
                avoid |= _free_syms(p)
        names = _param_names(len(args), "elem", avoid)
        params = [(n, self.scalar_sort(t)) for n, t in zip(names, args)]
        syms = [Sym(n) for n in names]
        clauses = []
        for parts in item_parts:
            clauses.append(
                And(tuple(Eq(s, p) for s, p in zip(syms, parts)))
                if len(parts) > 1
                else Eq(syms[0], parts[0])
            )
        body = Or(tuple(clauses)) if len(clauses) > 1 else clauses[0]
        return self.char_lambda(params, body)

    def _dom_term(self, arg: Expr):
        if isinstance(arg, Var):
            info = self.symbols[arg.name]
            if info.kind in ("pfun", "ffun", "seq"):
                return Field(Sym(info.emitted), "dom")
            if info.kind == "fun":
                t = normalize(info.declared)
                args = _flatten_elem(t.elem.left)
                names = _param_names(len(args), "left")
                params = [(n, self.scalar_sort(x)) for n, x in zip(names, args)]
                return self.char_lambda(params, self.bool_term(True))
        return self._projection(arg, project_dom=True)

    def _ran_term(self, arg: Expr):
        if isinstance(arg, Var) and self.symbols[arg.name].kind == "fun":
            info = self.symbols[arg.name]
            t = normalize(info.declared)
            xs = _flatten_elem(t.elem.left)
            avoid = {info.emitted}
            x_names = _param_names(len(xs), "left", avoid)
            y = _param_names(1, "right", avoid)[0]
            y_sort = self.scalar_sort(t.elem.right)
            body = Exists(
                tuple((n, self.scalar_sort(x)) for n, x in zip(x_names, xs)),
                Eq(self.apply_map(Sym(info.emitted), [Sym(n) for n in x_names]), Sym(y)),
            )
            return self.char_lambda([(y, y_sort)], body)
        return self._projection(arg, project_dom=False)

    def _projection(self, arg: Expr, project_dom: bool):
        """dom/ran of a general relation term, via an embedded exists."""
        rel = self.set_term(arg)
        t = self.elem_of(arg)
        assert isinstance(t, Product)
        xs, ys = _flatten_elem(t.left), _flatten_elem(t.right)
        avoid = _free_syms(rel)
        x_names = _param_names(len(xs), "left", avoid)
        y_names = _param_names(len(ys), "right", avoid)
        x_params = tuple((n, self.scalar_sort(x)) for n, x in zip(x_names, xs))
        y_params = tuple((n, self.scalar_sort(y)) for n, y in zip(y_names, ys))
        read = self.mem_read(rel, [Sym(n) for n in x_names + y_names])
        if project_dom:
            return self.char_lambda(list(x_params), Exists(y_params, read))
        return self.char_lambda(list(y_params), Exists(x_params, read))

    def flatten_member(self, e: Expr, elem: TypeExpr) -> list:
        """Translate a member expression into flattened component terms."""
        elem = normalize(elem)
        if isinstance(elem, Product):
            if isinstance(e, Tuple):
                return self.flatten_member(e.items[0], elem.left) + self.flatten_member(
                    e.items[1], elem.right
                )
            if len(_flatten_elem(elem)) != 2:
                raise self.fail("nested pair components need explicit maplets")
            base = self.scalar_term(e)
            return [TSel(base, 1), TSel(base, 2)]
        if isinstance(elem, Power):
            return [self.set_term(e)]
        return [self.scalar_term(e)]

    def scalar_term(self, e: Expr):
        if isinstance(e, Var):
            return Sym(self.symbols[e.name].emitted)
        if isinstance(e, IntLit):
            return IntC(e.value)
        if isinstance(e, (EnumLit, BasicLit)):
            return Sym(e.name)
        if isinstance(e, Tuple):
            return TupleC(tuple(self.scalar_term(x) for x in e.items))
        if isinstance(e, Apply):
            return self._apply_term(e)
        if isinstance(e, Card):
            return self._card_term(e)
        if isinstance(e, (Add, Sub, Mul)):
            node = {Add: AddT, Sub: SubT, Mul: MulT}[type(e)]
            return node(self.scalar_term(e.left), self.scalar_term(e.right))
        raise self.fail(f"cannot translate {type(e).__name__} as a scalar")

    def _apply_term(self, e: Apply):
        assert isinstance(e.fn, Var)
        info = self.symbols[e.fn.name]
        declared = info.declared
        kind = synonym_kind(declared)
        arg_t = Int() if kind == SEQ else declared.args[0]
        args = self.flatten_member(e.arg, arg_t)
        if kind == FUN:
            return self.apply_map(Sym(info.emitted), args)
        return self.apply_map(Field(Sym(info.emitted), "law"), args)

    def _card_term(self, e: Card):
        arg = e.arg
        if isinstance(arg, Var):
            info = self.symbols[arg.name]
            if info.kind in ("finset", "ffun", "seq"):
                return Field(Sym(info.emitted), "card")
            raise self.fail(f"# of {arg.name} needs a finite-set-shaped variable")
        if isinstance(arg, Range):
            lo, hi = self.scalar_term(arg.lo), self.scalar_term(arg.hi)
            return Ite(Le(lo, hi), AddT(SubT(hi, lo), IntC(1)), IntC(0))
        if isinstance(arg, SetExt):
            values = set()
            for item in arg.items:
                if not isinstance(item, IntLit):
                    raise self.fail("# of a set extension needs integer literals")
                values.add(item.value)
            if len(values) != len(arg.items):
                raise self.fail("# of a set extension needs distinct literals")
            return IntC(len(values))
        raise self.fail(f"cannot translate # of {type(arg).__name__}")

    # -- predicate translation --

    def pred_formula(self, p: Pred):
        if isinstance(p, (MemberOf, NotMemberOf)):
            inside = self._membership(p.lhs, p.rhs)
            return inside if isinstance(p, MemberOf) else Not(inside)
        if isinstance(p, (Equal, NotEqual)):
            t = self.norm(p.lhs)
            if isinstance(t, Power):
                eq = Eq(self.set_term(p.lhs), self.set_term(p.rhs))
            else:
                eq = Eq(self.scalar_term(p.lhs), self.scalar_term(p.rhs))
            return eq if isinstance(p, Equal) else Not(eq)
        if isinstance(p, (SubsetEq, NotSubsetEq)):
            name = self.ensure_op("subseteq", self.elem_of(p.lhs))
            term = App(Sym(name), (self.set_term(p.lhs), self.set_term(p.rhs)))
            return term if isinstance(p, SubsetEq) else Not(term)
        if isinstance(p, (Lt, Leq, Gt, Geq)):
            a, b = self.scalar_term(p.lhs), self.scalar_term(p.rhs)
            if isinstance(p, Lt):
                return LtT(a, b)
            if isinstance(p, Leq):
                return Le(a, b)
            if isinstance(p, Gt):
                return LtT(b, a)
            return Le(b, a)
        raise self.fail(f"unknown predicate {p!r}")

    def _membership(self, lhs: Expr, rhs: Expr):
        if isinstance(rhs, Range):
            v = self.scalar_term(lhs)
            return And(
                (Le(self.scalar_term(rhs.lo), v), Le(v, self.scalar_term(rhs.hi)))
            )
        if isinstance(rhs, SetExt):
            elem = self.elem_of(rhs)
            member = self.flatten_member(lhs, elem)
            clauses = []
            for item in rhs.items:
                parts = self.flatten_member(item, elem)
                pair_eqs = tuple(Eq(m, p) for m, p in zip(member, parts))
                clauses.append(pair_eqs[0] if len(pair_eqs) == 1 else And(pair_eqs))
            return Or(tuple(clauses)) if len(clauses) > 1 else clauses[0]
        elem = self.elem_of(rhs)
        return self.mem_read(self.set_term(rhs), self.flatten_member(lhs, elem))

    # -- carrier axioms --

    def carrier_sentences(self, info: SymbolInfo) -> list[Sentence]:
        kind = synonym_kind(info.declared)
        if kind in (FINSET, FFUN):
            set_field = "set" if kind == FINSET else "dom"
            return self._finiteness_axioms(info, set_field, info.declared.args[0])
        if kind == SEQ:
            return [self._seq_axiom(info)]
        return []

    def _finiteness_axioms(self, info: SymbolInfo, set_field: str, elem: TypeExpr) -> list[Sentence]:
        a = Sym(info.emitted)
        args = _flatten_elem(elem)
        n_name = "n" if info.emitted != "n" else "n0"
        taken = {info.emitted, n_name}
        xs = []
        for x in _param_names(len(args), "left", set(taken)):
            while x in taken or f"{x}1" == info.emitted or f"{x}2" == info.emitted:
                x += "x"
            taken.add(x)
            xs.append(x)
        params = tuple((n, self.scalar_sort(t)) for n, t in zip(xs, args))
        x_syms = [Sym(n) for n in xs]
        member = self.mem_read(Field(a, set_field), x_syms)
        below = Le(self.apply_map(Field(a, "bij"), x_syms), Field(a, "card"))
        first = Forall(params, Iff(member, below))

        nat1 = self.scalar_sort_nat1()
        xs1 = [f"{n}1" for n in xs]
        xs2 = [f"{n}2" for n in xs]
        params2 = ((n_name, nat1),) + tuple(
            (n, self.scalar_sort(t)) for n, t in zip(xs1 + xs2, list(args) * 2)
        )
        s1, s2 = [Sym(n) for n in xs1], [Sym(n) for n in xs2]
        same = [Eq(u, v) for u, v in zip(s1, s2)]
        body = Implies(
            And(
                (
                    Le(Sym(n_name), Field(a, "card")),
                    self.mem_read(Field(a, set_field), s1),
                    self.mem_read(Field(a, set_field), s2),
                    Eq(self.apply_map(Field(a, "bij"), s1), Sym(n_name)),
                    Eq(self.apply_map(Field(a, "bij"), s2), Sym(n_name)),
                )
            ),
            same[0] if len(same) == 1 else And(tuple(same)),
        )
        second = Forall(params2, body)
        return [
            self.assert_sentence(first, "carrier-assert"),
            self.assert_sentence(second, "carrier-assert"),
        ]

    def _seq_axiom(self, info: SymbolInfo) -> Sentence:
        s = Sym(info.emitted)
        n = "n" if info.emitted != "n" else "n0"
        nat1 = self.scalar_sort_nat1()
        body = Iff(
            Le(Sym(n), Field(s, "card")),
            self.mem_read(Field(s, "dom"), [Sym(n)]),
        )
        return self.assert_sentence(Forall(((n, nat1),), body), "carrier-assert")

    def scalar_sort_nat1(self):
        raise NotImplementedError

    # -- orchestration --

    def used_scalar_types(self) -> list[Basic | Free]:
        used: set[str] = set()

        def visit_type(t: TypeExpr) -> None:
            if isinstance(t, (Basic, Free)):
                used.add(t.name)
            elif isinstance(t, Product):
                visit_type(t.left)
                visit_type(t.right)
            elif isinstance(t, Power):
                visit_type(t.elem)
            elif isinstance(t, Synonym):
                for a in t.args:
                    visit_type(a)

        for _, t in self.tspec.spec.decls:
            visit_type(t)
        for p in self.tspec.spec.preds:
            for side in (p.lhs, p.rhs):
                for e in iter_exprs(side):
                    if isinstance(e, EmptySet):
                        visit_type(e.elem_type)
                    elif isinstance(e, EnumLit):
                        used.add(e.type_name)
                    elif isinstance(e, BasicLit):
                        used.add(e.type_name)
        ordered: list[Basic | Free] = []
        for f in self.tspec.ctx.frees:
            if f.name in used:
                ordered.append(f)
        for b in self.tspec.ctx.basics:
            if b.name in used:
                ordered.append(b)
        return ordered

    def build(self) -> SmtScript:
        spec = self.tspec.spec
        pred_sentences: list[Sentence] = []
        for i, p in enumerate(spec.preds):
            self._current_pred = i
            try:
                formula = self.pred_formula(p)
                pred_sentences.append(
                    self.assert_sentence(formula, "pred-assert", pred_index=i)
                )
            except UnsupportedExpr as err:
                self.problems.append(str(err))
        if self.problems:
            raise EmitError(spec.name, self.problems)

        carrier_sentences: list[Sentence] = []
        for name, _ in spec.decls:
            carrier_sentences.extend(self.carrier_sentences(self.symbols[name]))

        scalars = self.used_scalar_types()
        universes: dict[str, tuple[str, ...]] = {}
        for t in scalars:
            if isinstance(t, Free):
                universes[t.name] = t.constants
            else:
                universes[t.name] = tuple(
                    f"{t.name}{i}" for i in range(1, BASIC_UNIVERSE_SIZE + 1)
                )

        items: list[Sentence] = []
        items.append(self.comment(f"ztc {__version__}"))
        items.append(self.comment(f"spec {spec.name}"))
        variant_tag = "basic-types-as-datatypes" if self.variant else "standard"
        items.append(self.comment(f"dialect {self.dialect} ({variant_tag})"))
        for name, consts in universes.items():
            items.append(self.comment(f"universe {name} = {' '.join(consts)}"))
        items.extend(self.prelude())
        for t in scalars:
            items.extend(self.type_decl_sentences(t))
        for name, _ in spec.decls:
            items.append(self.var_decl_sentence(self.symbols[name]))
        for sentences in self.aux.values():
            items.extend(sentences)
        items.extend(carrier_sentences)
        items.extend(pred_sentences)
        items.extend(self.check_tail())

        lits: list[int] = []
        for p in spec.preds:
            for side in (p.lhs, p.rhs):
                for e in iter_exprs(side):
                    if isinstance(e, IntLit) and e.value not in lits:
                        lits.append(e.value)

        return SmtScript(
            dialect=self.dialect,
            variant=self.variant,
            spec_name=spec.name,
            items=tuple(items),
            symbols=dict(self.symbols),
            universes=universes,
            int_literals=tuple(lits),
            decl_order=tuple(n for n, _ in spec.decls),
        )


# ---------------------------------------------------------------------------
# Dialect one: s-expressions, boolean characteristic functions
# ---------------------------------------------------------------------------


class _YicesBuilder(_Builder):
    dialect = YICES

    # sorts

    def scalar_sort(self, t: TypeExpr):
        if isinstance(t, Nat):
            return SName("nat")
        if isinstance(t, Int):
            return SName("int")
        if isinstance(t, (Basic, Free)):
            return SName(t.name)
        if isinstance(t, Power):
            return self.char_map_sort(t.elem)
        if isinstance(t, Product):
            return STup(tuple(self.scalar_sort(x) for x in (t.left, t.right)))
        if isinstance(t, Synonym):
            return self.scalar_sort(normalize(t))
        raise UnsupportedExpr(f"no scalar sort for {t!r}")

    def scalar_sort_nat1(self):
        return SName("nat1")

    def char_map_sort(self, elem: TypeExpr):
        args = tuple(self.scalar_sort(t) for t in _flatten_elem(elem))
        return SMap(args, SName("bool"))

    def decl_sort(self, t: TypeExpr):
        kind = synonym_kind(t)
        if kind in (PFUN, FFUN):
            x, y = t.args
            fields = [
                ("dom", self.char_map_sort(x)),
                ("law", SMap(tuple(self.scalar_sort(a) for a in _flatten_elem(x)), self.scalar_sort(y))),
            ]
            if kind == FFUN:
                fields.append(("bij", SMap(tuple(self.scalar_sort(a) for a in _flatten_elem(x)), SName("nat1"))))
                fields.append(("card", SName("nat")))
            return SRec(tuple(fields))
        if kind == FUN:
            x, y = t.args
            return SMap(tuple(self.scalar_sort(a) for a in _flatten_elem(x)), self.scalar_sort(y))
        if kind == SEQ:
            elem = t.args[0]
            return SRec(
                (
                    ("dom", SMap((SName("nat1"),), SName("bool"))),
                    ("law", SMap((SName("nat1"),), self.scalar_sort(elem))),
                    ("card", SName("nat")),
                )
            )
        if kind == FINSET:
            elem = t.args[0]
            args = tuple(self.scalar_sort(a) for a in _flatten_elem(elem))
            return SRec(
                (
                    ("set", SMap(args, SName("bool"))),
                    ("bij", SMap(args, SName("nat1"))),
                    ("card", SName("nat")),
                )
            )
        if kind == REL or isinstance(t, Power):
            return self.char_map_sort(t.elem if isinstance(t, Power) else Product(*t.args))
        return self.scalar_sort(t)

    # terms

    def bool_term(self, value: bool):
        return BoolC(value)

    def mem_read(self, set_term, args: list):
        return App(set_term, tuple(args))

    def char_lambda(self, params, body):
        return Lam(tuple(params), body)

    def apply_map(self, fn, args: list):
        return App(fn, tuple(args))

    # rendering

    def render_sort(self, s) -> str:
        if isinstance(s, SName):
            return s.name
        if isinstance(s, SMap):
            parts = " ".join(self.render_sort(a) for a in s.args)
            return f"(-> {parts} {self.render_sort(s.ret)})"
        if isinstance(s, SRec):
            parts = " ".join(f"{n}::{self.render_sort(t)}" for n, t in s.fields)
            return f"(record {parts})"
        if isinstance(s, STup):
            return "(tuple " + " ".join(self.render_sort(t) for t in s.items) + ")"
        raise UnsupportedExpr(f"cannot render sort {s!r}")

    def render_term(self, t) -> str:
        r = self.render_term
        if isinstance(t, Sym):
            return t.name
        if isinstance(t, IntC):
            return str(t.value)
        if isinstance(t, BoolC):
            return "true" if t.value else "false"
        if isinstance(t, TupleC):
            return "(mk-tuple " + " ".join(r(x) for x in t.items) + ")"
        if isinstance(t, App):
            return "(" + " ".join([r(t.fn), *(r(a) for a in t.args)]) + ")"
        if isinstance(t, Field):
            return f"(select {r(t.rec)} {t.name})"
        if isinstance(t, TSel):
            return f"(select {r(t.tup)} {t.index})"
        if isinstance(t, (Lam, Forall, Exists)):
            word = {Lam: "lambda", Forall: "forall", Exists: "exists"}[type(t)]
            params = " ".join(f"{n}::{self.render_sort(s)}" for n, s in t.params)
            return f"({word} ({params}) {r(t.body)})"
        if isinstance(t, Not):
            return f"(not {r(t.arg)})"
        if isinstance(t, And):
            return "(and " + " ".join(r(a) for a in t.args) + ")"
        if isinstance(t, Or):
            return "(or " + " ".join(r(a) for a in t.args) + ")"
        if isinstance(t, Implies):
            return f"(=> {r(t.lhs)} {r(t.rhs)})"
        if isinstance(t, Iff):
            return f"(<=> {r(t.lhs)} {r(t.rhs)})"
        if isinstance(t, Eq):
            return f"(= {r(t.lhs)} {r(t.rhs)})"
        if isinstance(t, Le):
            return f"(<= {r(t.lhs)} {r(t.rhs)})"
        if isinstance(t, LtT):
            return f"(< {r(t.lhs)} {r(t.rhs)})"
        if isinstance(t, AddT):
            return f"(+ {r(t.lhs)} {r(t.rhs)})"
        if isinstance(t, SubT):
            return f"(- {r(t.lhs)} {r(t.rhs)})"
        if isinstance(t, MulT):
            return f"(* {r(t.lhs)} {r(t.rhs)})"
        if isinstance(t, Ite):
            return f"(ite {r(t.cond)} {r(t.then)} {r(t.other)})"
        raise UnsupportedExpr(f"cannot render term {t!r}")

    # sentences

    def comment(self, text: str) -> Sentence:
        return Sentence(text=f";; {text}", kind="comment")

    def type_decl_sentences(self, t) -> list[Sentence]:
        if isinstance(t, Free):
            consts = " ".join(t.constants)
            text = f"(define-type {t.name} (scalar {consts}))"
        elif self.variant:
            consts = " ".join(
                f"{t.name}{i}" for i in range(1, BASIC_UNIVERSE_SIZE + 1)
            )
            text = f"(define-type {t.name} (scalar {consts}))"
        else:
            # an abstract type plus named constants; without the datatype
            # variant nothing keeps the constants distinct
            out = [
                Sentence(
                    text=f"(define-type {t.name})", kind="type-decl", name=t.name
                )
            ]
            out.extend(
                Sentence(
                    text=f"(define {t.name}{i}::{t.name})",
                    kind="type-decl",
                    name=f"{t.name}{i}",
                )
                for i in range(1, BASIC_UNIVERSE_SIZE + 1)
            )
            return out
        return [Sentence(text=text, kind="type-decl", name=t.name)]

    def var_decl_sentence(self, info: SymbolInfo) -> Sentence:
        sort = self.decl_sort(info.declared)
        text = f"(define {info.emitted}::{self.render_sort(sort)})"
        return Sentence(text=text, kind="var-decl", name=info.emitted, sort=sort)

    def def_sentence(self, name, sort, body, kind="aux-def") -> Sentence:
        text = f"(define {name}::{self.render_sort(sort)} {self.render_term(body)})"
        return Sentence(text=text, kind=kind, name=name, sort=sort, definition=body)

    def op_sentences(self, op: str, elem: TypeExpr) -> list[Sentence]:
        name = f"{op}{type_path(elem)}"
        set_sort = self.char_map_sort(elem)
        args = _flatten_elem(elem)
        xs = _param_names(len(args), "elem")
        params = [(n, self.scalar_sort(t)) for n, t in zip(xs, args)]
        x_syms = [Sym(n) for n in xs]
        if op == "emptyset":
            return [self.def_sentence(name, set_sort, Lam(tuple(params), BoolC(False)))]
        a, b = Sym("A"), Sym("B")
        reads = (App(a, tuple(x_syms)), App(b, tuple(x_syms)))
        if op == "subseteq":
            body = Lam(
                (("A", set_sort), ("B", set_sort)),
                Forall(tuple(params), Implies(reads[0], reads[1])),
            )
            return [self.def_sentence(name, SMap((set_sort, set_sort), SName("bool")), body)]
        inner = {
            "cap": And(reads),
            "cup": Or(reads),
            "setminus": And((reads[0], Not(reads[1]))),
        }[op]
        body = Lam((("A", set_sort), ("B", set_sort)), Lam(tuple(params), inner))
        return [self.def_sentence(name, SMap((set_sort, set_sort), set_sort), body)]

    def assert_sentence(self, formula, kind, pred_index=None) -> Sentence:
        return Sentence(
            text=f"(assert {self.render_term(formula)})",
            kind=kind,
            formula=formula,
            pred_index=pred_index,
        )

    def check_tail(self) -> list[Sentence]:
        return [
            Sentence(text="(set-evidence! true)", kind="model-request"),
            Sentence(text="(check)", kind="check"),
        ]


# ---------------------------------------------------------------------------
# Dialect two: typed commands, BITVECTOR(1) characteristic arrays
# ---------------------------------------------------------------------------

_BV1 = 'BITVECTOR(1)'


class _Cvc3Builder(_Builder):
    dialect = CVC3

    def scalar_sort(self, t: TypeExpr):
        if isinstance(t, Nat):
            return SName("NAT")
        if isinstance(t, Int):
            return SName("INT")
        if isinstance(t, (Basic, Free)):
            return SName(t.name)
        if isinstance(t, Power):
            return self.char_map_sort(t.elem)
        if isinstance(t, Product):
            return STup(tuple(self.scalar_sort(x) for x in (t.left, t.right)))
        if isinstance(t, Synonym):
            return self.scalar_sort(normalize(t))
        raise UnsupportedExpr(f"no scalar sort for {t!r}")

    def scalar_sort_nat1(self):
        return SName("NAT1")

    def char_map_sort(self, elem: TypeExpr):
        args = tuple(self.scalar_sort(t) for t in _flatten_elem(elem))
        return SMap(args, SName(_BV1))

    def decl_sort(self, t: TypeExpr):
        kind = synonym_kind(t)
        if kind in (PFUN, FFUN):
            x, y = t.args
            xargs = tuple(self.scalar_sort(a) for a in _flatten_elem(x))
            fields = [
                ("dom", SMap(xargs, SName(_BV1))),
                ("law", SMap(xargs, self.scalar_sort(y))),
            ]
            if kind == FFUN:
                fields.append(("bij", SMap(xargs, SName("NAT1"))))
                fields.append(("card", SName("NAT")))
            return SRec(tuple(fields))
        if kind == FUN:
            x, y = t.args
            return SMap(
                tuple(self.scalar_sort(a) for a in _flatten_elem(x)),
                self.scalar_sort(y),
            )
        if kind == SEQ:
            elem = t.args[0]
            return SRec(
                (
                    ("dom", SMap((SName("NAT1"),), SName(_BV1))),
                    ("law", SMap((SName("NAT1"),), self.scalar_sort(elem))),
                    ("card", SName("NAT")),
                )
            )
        if kind == FINSET:
            elem = t.args[0]
            args = tuple(self.scalar_sort(a) for a in _flatten_elem(elem))
            return SRec(
                (
                    ("set", SMap(args, SName(_BV1))),
                    ("bij", SMap(args, SName("NAT1"))),
                    ("card", SName("NAT")),
                )
            )
        if kind == REL or isinstance(t, Power):
            return self.char_map_sort(t.elem if isinstance(t, Power) else Product(*t.args))
        return self.scalar_sort(t)

    # terms

    def bool_term(self, value: bool):
        return BoolC(value)

    def mem_read(self, set_term, args: list):
        return Eq(ARead(set_term, tuple(args)), Bv1(1))

    def char_lambda(self, params, body):
        return Lam(tuple(params), Ite(body, Bv1(1), Bv1(0)))

    def apply_map(self, fn, args: list):
        return ARead(fn, tuple(args))

    # rendering

    def render_sort(self, s) -> str:
        if isinstance(s, SName):
            return s.name
        if isinstance(s, SMap):
            if len(s.args) == 1:
                index = self.render_sort(s.args[0])
            else:
                index = "[" + ", ".join(self.render_sort(a) for a in s.args) + "]"
            return f"ARRAY {index} OF {self.render_sort(s.ret)}"
        if isinstance(s, SFunSig):
            args = ", ".join(self.render_sort(a) for a in s.args)
            return f"({args}) -> {self.render_sort(s.ret)}"
        if isinstance(s, SRec):
            parts = ", ".join(f"{n}: {self.render_sort(t)}" for n, t in s.fields)
            return f"[# {parts} #]"
        if isinstance(s, STup):
            return "[" + ", ".join(self.render_sort(t) for t in s.items) + "]"
        raise UnsupportedExpr(f"cannot render sort {s!r}")

    # precedence levels for infix rendering
    _IFF, _IMPLIES, _OR, _AND, _NOT, _CMP, _ADD, _MUL, _ATOM = range(1, 10)

    def render_term(self, t) -> str:
        return self._render(t, 0)

    def _params_text(self, params) -> str:
        # Group consecutive parameters sharing a sort: (n: NAT1, x1, x2: X).
        groups: list[tuple[list[str], object]] = []
        for name, sort in params:
            if groups and groups[-1][1] == sort:
                groups[-1][0].append(name)
            else:
                groups.append(([name], sort))
        return ", ".join(
            f"{', '.join(names)}: {self.render_sort(sort)}" for names, sort in groups
        )

    def _render(self, t, ctx: int) -> str:
        def wrap(text: str, level: int) -> str:
            return f"({text})" if level < ctx else text

        if isinstance(t, Sym):
            return t.name
        if isinstance(t, IntC):
            return str(t.value) if t.value >= 0 else wrap(str(t.value), 1)
        if isinstance(t, BoolC):
            return "TRUE" if t.value else "FALSE"
        if isinstance(t, Bv1):
            return f"0bin{t.bit}"
        if isinstance(t, TupleC):
            return "(" + ", ".join(self._render(x, 0) for x in t.items) + ")"
        if isinstance(t, App):
            args = ", ".join(self._render(a, 0) for a in t.args)
            return f"{self._render(t.fn, self._ATOM)}({args})"
        if isinstance(t, ARead):
            args = ", ".join(self._render(a, 0) for a in t.args)
            return f"{self._render(t.arr, self._ATOM)}[{args}]"
        if isinstance(t, Field):
            return f"{self._render(t.rec, self._ATOM)}.{t.name}"
        if isinstance(t, TSel):
            return f"{self._render(t.tup, self._ATOM)}.{t.index - 1}"
        if isinstance(t, Lam):
            body = self._render(t.body, 0)
            return f"(ARRAY ({self._params_text(t.params)}): {body})"
        if isinstance(t, (Forall, Exists)):
            word = "FORALL" if isinstance(t, Forall) else "EXISTS"
            body = self._render(t.body, 0)
            return wrap(f"{word} ({self._params_text(t.params)}): {body}", 0)
        if isinstance(t, Not):
            return wrap(f"NOT {self._render(t.arg, self._ATOM)}", self._NOT)
        if isinstance(t, And):
            text = " AND ".join(self._render(a, self._AND + 1) for a in t.args)
            return wrap(text, self._AND)
        if isinstance(t, Or):
            text = " OR ".join(self._render(a, self._OR + 1) for a in t.args)
            return wrap(text, self._OR)
        if isinstance(t, Implies):
            text = f"{self._render(t.lhs, self._IMPLIES + 1)} => {self._render(t.rhs, self._IMPLIES)}"
            return wrap(text, self._IMPLIES)
        if isinstance(t, Iff):
            text = f"{self._render(t.lhs, self._IFF + 1)} <=> {self._render(t.rhs, self._IFF + 1)}"
            return wrap(text, self._IFF)
        if isinstance(t, (Eq, Le, LtT)):
            op = {Eq: "=", Le: "<=", LtT: "<"}[type(t)]
            text = f"{self._render(t.lhs, self._CMP + 1)} {op} {self._render(t.rhs, self._CMP + 1)}"
            return wrap(text, self._CMP)
        if isinstance(t, (AddT, SubT)):
            op = "+" if isinstance(t, AddT) else "-"
            text = f"{self._render(t.lhs, self._ADD)} {op} {self._render(t.rhs, self._ADD + 1)}"
            return wrap(text, self._ADD)
        if isinstance(t, MulT):
            text = f"{self._render(t.lhs, self._MUL)} * {self._render(t.rhs, self._MUL + 1)}"
            return wrap(text, self._MUL)
        if isinstance(t, Ite):
            c = self._render(t.cond, 0)
            a = self._render(t.then, 0)
            b = self._render(t.other, 0)
            return f"IF {c} THEN {a} ELSE {b} ENDIF"
        raise UnsupportedExpr(f"cannot render term {t!r}")

    # sentences

    def comment(self, text: str) -> Sentence:
        return Sentence(text=f"% {text}", kind="comment")

    def prelude(self) -> list[Sentence]:
        need_nat = any(
            _mentions_nat(t) or synonym_kind(t) in (FINSET, FFUN, SEQ)
            for _, t in self.tspec.spec.decls
        )
        need_nat1 = any(
            synonym_kind(t) in (FINSET, FFUN, SEQ) for _, t in self.tspec.spec.decls
        )
        out = []
        if need_nat:
            out.append(
                Sentence(
                    text="NAT: TYPE = SUBTYPE(LAMBDA (x: INT): 0 <= x);",
                    kind="prelude",
                    name="NAT",
                )
            )
        if need_nat1:
            out.append(
                Sentence(
                    text="NAT1: TYPE = SUBTYPE(LAMBDA (x: INT): 1 <= x);",
                    kind="prelude",
                    name="NAT1",
                )
            )
        return out

    def type_decl_sentences(self, t) -> list[Sentence]:
        if isinstance(t, Free):
            consts = " | ".join(t.constants)
            text = f"DATATYPE {t.name} = {consts} END;"
        elif self.variant:
            consts = " | ".join(
                f"{t.name}{i}" for i in range(1, BASIC_UNIVERSE_SIZE + 1)
            )
            text = f"DATATYPE {t.name} = {consts} END;"
        else:
            # an abstract type plus named constants; without the datatype
            # variant nothing keeps the constants distinct
            names = ", ".join(
                f"{t.name}{i}" for i in range(1, BASIC_UNIVERSE_SIZE + 1)
            )
            return [
                Sentence(text=f"{t.name}: TYPE;", kind="type-decl", name=t.name),
                Sentence(text=f"{names}: {t.name};", kind="type-decl", name=names),
            ]
        return [Sentence(text=text, kind="type-decl", name=t.name)]

    def var_decl_sentence(self, info: SymbolInfo) -> Sentence:
        sort = self.decl_sort(info.declared)
        text = f"{info.emitted}: {self.render_sort(sort)};"
        return Sentence(text=text, kind="var-decl", name=info.emitted, sort=sort)

    def def_sentence(self, name, sort, body, kind="aux-def") -> Sentence:
        text = f"{name}: {self.render_sort(sort)} = {self.render_term(body)};"
        return Sentence(text=text, kind=kind, name=name, sort=sort, definition=body)

    def op_sentences(self, op: str, elem: TypeExpr) -> list[Sentence]:
        name = f"{op}{type_path(elem)}"
        set_sort = self.char_map_sort(elem)
        args = _flatten_elem(elem)
        xs = _param_names(len(args), "elem")
        params = tuple((n, self.scalar_sort(t)) for n, t in zip(xs, args))
        x_syms = [Sym(n) for n in xs]
        if op == "emptyset":
            body = Lam(params, Bv1(0))
            return [self.def_sentence(name, set_sort, body)]

        a, b = Sym("A"), Sym("B")
        reads = (
            Eq(ARead(a, tuple(x_syms)), Bv1(1)),
            Eq(ARead(b, tuple(x_syms)), Bv1(1)),
        )
        decl_params = (("A", set_sort), ("B", set_sort))
        if op == "subseteq":
            sig = SFunSig((set_sort, set_sort), SName("BOOLEAN"))
            decl = Sentence(
                text=f"{name}: {self.render_sort(sig)};",
                kind="op-decl",
                name=name,
                sort=sig,
                definition=Lam(decl_params, Forall(params, Implies(reads[0], reads[1]))),
            )
            formula = Forall(
                decl_params,
                Iff(
                    App(Sym(name), (a, b)),
                    Forall(params, Implies(reads[0], reads[1])),
                ),
            )
            return [decl, self.assert_sentence(formula, "opdef-assert")]
        inner = {
            "cap": And(reads),
            "cup": Or(reads),
            "setminus": And((reads[0], Not(reads[1]))),
        }[op]
        sig = SFunSig((set_sort, set_sort), set_sort)
        rhs = Lam(params, Ite(inner, Bv1(1), Bv1(0)))
        decl = Sentence(
            text=f"{name}: {self.render_sort(sig)};",
            kind="op-decl",
            name=name,
            sort=sig,
            definition=Lam(decl_params, rhs),
        )
        formula = Forall(decl_params, Eq(App(Sym(name), (a, b)), rhs))
        return [decl, self.assert_sentence(formula, "opdef-assert")]

    def assert_sentence(self, formula, kind, pred_index=None) -> Sentence:
        return Sentence(
            text=f"ASSERT {self.render_term(formula)};",
            kind=kind,
            formula=formula,
            pred_index=pred_index,
        )

    def check_tail(self) -> list[Sentence]:
        return [
            Sentence(text="CHECKSAT;", kind="check"),
            Sentence(text="COUNTERMODEL;", kind="model-request"),
        ]


_BUILDERS = {YICES: _YicesBuilder, CVC3: _Cvc3Builder}


# ---------------------------------------------------------------------------
# Public entry points
# ---------------------------------------------------------------------------


def emit_script(tspec: TypedSpec, dialect: str, variant: bool = False) -> SmtScript:
    """Translate one type-checked specification into a solver script."""
    if dialect not in _BUILDERS:
        raise ValueError(f"unknown dialect {dialect!r}; pick one of {DIALECTS}")
    return _BUILDERS[dialect](tspec, variant).build()


def emit_pred(tspec: TypedSpec, index: int, dialect: str, variant: bool = False) -> str:
    """The assert sentence one predicate translates to."""
    script = emit_script(tspec, dialect, variant)
    for s in script.items:
        if s.kind == "pred-assert" and s.pred_index == index:
            return s.text
    raise IndexError(f"spec {tspec.name} has no predicate {index}")


def emit_type_decl(t: Basic | Free, dialect: str, variant: bool = False) -> list[str]:
    """Declaration sentences for one given or free type."""
    builder = _BUILDERS[dialect].__new__(_BUILDERS[dialect])
    builder.variant = variant
    return [s.text for s in builder.type_decl_sentences(t)]


def emit_operator(op: str, elem_type: TypeExpr, dialect: str) -> list[str]:
    """Definition sentences for one monomorphized set operator."""
    builder = _BUILDERS[dialect].__new__(_BUILDERS[dialect])
    builder.variant = False
    return [s.text for s in builder.op_sentences(op, elem_type)]


def emit_fset_coercion(name: str, declared: TypeExpr, dialect: str) -> list[str]:
    """Definition sentences coercing a function variable to a plain set."""
    if synonym_kind(declared) not in FUNCTION_KINDS:
        raise UnsupportedExpr(f"{name} : {declared!r} is not function-shaped")
    builder = _BUILDERS[dialect].__new__(_BUILDERS[dialect])
    builder.variant = False
    info = SymbolInfo(
        z_name=name, emitted=mangle(name), declared=declared, kind=_var_kind(declared)
    )
    return [s.text for s in builder.fset_sentences(info, f"{info.emitted}Set")]
