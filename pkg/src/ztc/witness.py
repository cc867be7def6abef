"""Solver model handling: parse, reconstruct, verify.

The two script dialects come with matching model grammars, defined here
(solver builds differ in what they print, so the accepted form is pinned
down by this module and documented in the README):

dialect one::

    sat
    (= now 2)
    (= (tli dom LiftOff) true)
    (= (tli law LiftOff) 2)
    (= (live LiftOff 2) true)
    (= p (mk-tuple SENSOR1 2))

The first non-blank line is ``sat``, ``unsat`` or ``unknown``.  Every
following line is an equation.  A compound left-hand side names a
variable, then record fields, then index values.  ``;;`` comments and
blank lines are skipped.

dialect two::

    Satisfiable.
    ASSERT (now = 2);
    ASSERT (tli.dom[LiftOff] = 0bin1);
    ASSERT (tli.law[LiftOff] = 2);
    ASSERT (live[LiftOff, 2] = 0bin1);
    ASSERT (p.0 = SENSOR1);

Status lines are ``Satisfiable.``, ``Unsatisfiable.`` or ``Unknown.``;
``%`` comments and blank lines are skipped.

Anything outside the grammar makes the whole output a parse failure;
nothing is guessed.  Reconstruction turns parsed equations back into
specification-level values, restricted to the universes the script
records, and verification replays the original predicates over them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .zcore import (
    FFUN,
    Basic,
    BasicV,
    EmptySet,
    EnumV,
    Free,
    Int,
    IntV,
    Nat,
    Power,
    Product,
    SetV,
    TupleV,
    TypeExpr,
    Value,
    ZtcError,
    format_value,
    sort_values,
)
from .zparse import format_expr
from .ztype import TypedSpec, normalize, synonym_kind
from .zeval import Env, check_spec
from .smt_emit import (
    CVC3,
    YICES,
    ARead,
    AddT,
    And,
    App,
    BoolC,
    Bv1,
    Eq,
    Exists,
    Field,
    Forall,
    Iff,
    Implies,
    IntC,
    Ite,
    Lam,
    Le,
    LtT,
    MulT,
    Not,
    Or,
    SName,
    SmtScript,
    SubT,
    Sym,
    SymbolInfo,
    TSel,
    TupleC,
    UnsupportedExpr,
)

SAT = "sat"
UNSAT = "unsat"
UNKNOWN = "unknown"
PARSE_FAILURE = "parse-failure"

_RECORD_KINDS = ("pfun", "ffun", "seq", "finset")
_FIELD_NAMES = frozenset({"dom", "law", "bij", "card", "set"})

# Span limit when filling the integer universe between its extremes.
_INT_SPAN = 256


class InterpretError(ZtcError):
    pass


# ---------------------------------------------------------------------------
# Solver-side values
# ---------------------------------------------------------------------------


@dataclass
class FuncV:
    """A finite map with a default, standing in for array/function terms."""

    points: dict
    default: object = None

    def get(self, args: tuple):
        if args in self.points:
            return self.points[args]
        if self.default is None:
            raise InterpretError(f"no value recorded at {args!r}")
        return self.default


@dataclass
class RecV:
    fields: dict


class Closure:
    def __init__(self, params, body, env):
        self.params = params
        self.body = body
        self.env = env


# Model terms, as parsed from solver output:
#   int | bool | ("bit", 0|1) | ("id", name) | ("tuple", (term, term))


def _term_text(t) -> str:
    if isinstance(t, tuple):
        if t[0] == "bit":
            return f"0bin{t[1]}"
        if t[0] == "id":
            return t[1]
        return "(" + ", ".join(_term_text(x) for x in t[1]) + ")"
    return str(t)


@dataclass(frozen=True)
class Assignment:
    var: str
    selectors: tuple  # raw model terms, in written order
    value: object


@dataclass(frozen=True)
class SolverOutput:
    status: str
    assignments: tuple[Assignment, ...] = ()
    message: str = ""


# ---------------------------------------------------------------------------
# Output parsing
# ---------------------------------------------------------------------------

_INT_RE = re.compile(r"-?\d+$")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


def _classify_atom(text: str):
    if _INT_RE.match(text):
        return int(text)
    if text in ("true", "TRUE"):
        return True
    if text in ("false", "FALSE"):
        return False
    if text in ("0bin0", "0bin1"):
        return ("bit", int(text[-1]))
    if _IDENT_RE.match(text):
        return ("id", text)
    raise ValueError(f"unrecognized model atom {text!r}")


def _sexprs(text: str):
    tokens = re.findall(r"[()]|[^\s()]+", text)
    pos = 0

    def parse():
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("unbalanced parenthesis in model output")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            items = []
            while pos < len(tokens) and tokens[pos] != ")":
                items.append(parse())
            if pos >= len(tokens):
                raise ValueError("unbalanced parenthesis in model output")
            pos += 1
            return items
        if tok == ")":
            raise ValueError("stray ')' in model output")
        return tok

    out = []
    while pos < len(tokens):
        out.append(parse())
    return out


def _yices_term(node):
    if isinstance(node, str):
        return _classify_atom(node)
    if node and node[0] == "mk-tuple":
        return ("tuple", tuple(_yices_term(x) for x in node[1:]))
    raise ValueError(f"unrecognized model term {node!r}")


def _parse_yices(text: str) -> SolverOutput:
    lines = []
    for raw in text.splitlines():
        line = raw.split(";;", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        return SolverOutput(PARSE_FAILURE, message="empty solver output")
    status = lines[0]
    if status not in (SAT, UNSAT, UNKNOWN):
        return SolverOutput(PARSE_FAILURE, message=f"unrecognized status line {status!r}")
    if status == UNSAT:
        return SolverOutput(UNSAT)
    body = "\n".join(lines[1:])
    try:
        nodes = _sexprs(body)
        assignments = []
        for node in nodes:
            if not (isinstance(node, list) and len(node) == 3 and node[0] == "="):
                raise ValueError(f"expected an equation, found {node!r}")
            lhs, rhs = node[1], node[2]
            value = _yices_term(rhs)
            if isinstance(lhs, str):
                assignments.append(Assignment(lhs, (), value))
            else:
                if not lhs or not isinstance(lhs[0], str):
                    raise ValueError(f"unrecognized equation target {lhs!r}")
                sels = tuple(_classify_atom(s) if isinstance(s, str) else _yices_term(s) for s in lhs[1:])
                assignments.append(Assignment(lhs[0], sels, value))
        return SolverOutput(status, tuple(assignments))
    except ValueError as err:
        return SolverOutput(PARSE_FAILURE, message=str(err))


_CVC3_STATUS = {"Satisfiable.": SAT, "Unsatisfiable.": UNSAT, "Unknown.": UNKNOWN}
_CVC3_ASSERT_RE = re.compile(r"ASSERT\s+(.*?);?$")


class _Cvc3LineParser:
    """Tiny recursive-descent reader for one `lhs = rhs` model equation."""

    def __init__(self, text: str) -> None:
        self.toks = re.findall(r"0bin[01]|-?\d+|[A-Za-z_][A-Za-z0-9_]*|[\[\](),.=]", text)
        stripped = re.sub(r"\s+", "", text)
        if "".join(self.toks) != stripped:
            raise ValueError(f"unrecognized characters in {text!r}")
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise ValueError("unexpected end of equation")
        self.pos += 1
        return tok

    def expect(self, tok: str):
        got = self.take()
        if got != tok:
            raise ValueError(f"expected {tok!r}, found {got!r}")

    def parse(self) -> Assignment:
        var = self.take()
        if not _IDENT_RE.match(var):
            raise ValueError(f"unrecognized equation target {var!r}")
        sels = []
        while self.peek() in (".", "["):
            if self.take() == ".":
                sels.append(_classify_atom(self.take()))
            else:
                sels.append(self.parse_term())
                while self.peek() == ",":
                    self.take()
                    sels.append(self.parse_term())
                self.expect("]")
        self.expect("=")
        value = self.parse_term()
        if self.peek() is not None:
            raise ValueError(f"trailing tokens after equation for {var}")
        return Assignment(var, tuple(sels), value)

    def parse_term(self):
        tok = self.take()
        if tok == "(":
            items = [self.parse_term()]
            while self.peek() == ",":
                self.take()
                items.append(self.parse_term())
            self.expect(")")
            if len(items) == 1:
                return items[0]
            return ("tuple", tuple(items))
        return _classify_atom(tok)


def _parse_cvc3(text: str) -> SolverOutput:
    lines = []
    for raw in text.splitlines():
        line = raw.split("%", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        return SolverOutput(PARSE_FAILURE, message="empty solver output")
    status = _CVC3_STATUS.get(lines[0])
    if status is None:
        return SolverOutput(PARSE_FAILURE, message=f"unrecognized status line {lines[0]!r}")
    if status == UNSAT:
        return SolverOutput(UNSAT)
    assignments = []
    for line in lines[1:]:
        m = _CVC3_ASSERT_RE.match(line)
        if not m:
            return SolverOutput(PARSE_FAILURE, message=f"expected an ASSERT line, found {line!r}")
        body = m.group(1).strip()
        if body.startswith("(") and body.endswith(")"):
            inner = body[1:-1]
            if "=" in inner:
                body = inner
        try:
            assignments.append(_Cvc3LineParser(body).parse())
        except ValueError as err:
            return SolverOutput(PARSE_FAILURE, message=str(err))
    return SolverOutput(status, tuple(assignments))


def parse_output(text: str, dialect: str) -> SolverOutput:
    """Parse raw solver output in the given dialect's model grammar."""
    if dialect == YICES:
        return _parse_yices(text)
    if dialect == CVC3:
        return _parse_cvc3(text)
    raise ValueError(f"unknown dialect {dialect!r}")


# ---------------------------------------------------------------------------
# Reconstruction: model terms back to specification values
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReconstructError:
    code: str  # missing-binding | card-mismatch | negative-nat | unknown-constant
    var: str
    message: str

    def __str__(self) -> str:
        return f"{self.var}: {self.message} [{self.code}]"


@dataclass(frozen=True)
class ReconstructResult:
    status: str
    env: dict | None
    errors: tuple[ReconstructError, ...] = ()

    @property
    def ok(self) -> bool:
        return self.env is not None


class _VarError(Exception):
    def __init__(self, code: str, message: str) -> None:
        self.code = code
        self.message = message


class _Reconstructor:
    def __init__(self, script: SmtScript) -> None:
        self.script = script

    def term_value(self, term, t: TypeExpr) -> Value:
        # matches the raw declared type: normalizing would widen NAT to INT
        # and lose the nonnegativity check
        if isinstance(t, (Int, Nat)):
            if not isinstance(term, int) or isinstance(term, bool):
                raise _VarError("missing-binding", f"expected an integer, found {_term_text(term)}")
            if isinstance(t, Nat) and term < 0:
                raise _VarError("negative-nat", f"natural bound to {term}")
            return IntV(term)
        if isinstance(t, Free):
            name = term[1] if isinstance(term, tuple) and term[0] == "id" else None
            if name is None or name not in t.constants:
                raise _VarError(
                    "unknown-constant",
                    f"{_term_text(term)} is not a constant of {t.name}",
                )
            return EnumV(name, t.constants.index(name))
        if isinstance(t, Basic):
            name = term[1] if isinstance(term, tuple) and term[0] == "id" else None
            allowed = self.script.universes.get(t.name, ())
            if name is None or name not in allowed:
                raise _VarError(
                    "unknown-constant",
                    f"{_term_text(term)} is not in the {t.name} universe",
                )
            return BasicV(name)
        if isinstance(t, Product):
            if not (isinstance(term, tuple) and term[0] == "tuple" and len(term[1]) == 2):
                raise _VarError("missing-binding", f"expected a pair, found {_term_text(term)}")
            return TupleV(
                (self.term_value(term[1][0], t.left), self.term_value(term[1][1], t.right))
            )
        raise _VarError("missing-binding", f"cannot read a {t!r} from {_term_text(term)}")

    def key_value(self, sels: tuple, elem: TypeExpr) -> Value:
        if isinstance(elem, Product):
            if len(sels) != 2:
                raise _VarError(
                    "missing-binding", f"expected a two-part index, found {len(sels)} parts"
                )
            return TupleV(
                (self.term_value(sels[0], elem.left), self.term_value(sels[1], elem.right))
            )
        if len(sels) != 1:
            raise _VarError(
                "missing-binding", f"expected a one-part index, found {len(sels)} parts"
            )
        return self.term_value(sels[0], elem)

    @staticmethod
    def truthy(value) -> bool:
        if value is True or value is False:
            return value
        if isinstance(value, tuple) and value[0] == "bit":
            return value[1] == 1
        raise _VarError(
            "missing-binding", f"expected a truth value, found {_term_text(value)}"
        )

    def build_var(self, info: SymbolInfo, rows: list[Assignment]) -> Value:
        kind = info.kind
        if kind in ("int", "nat", "enum", "basic"):
            direct = [r for r in rows if not r.selectors]
            if not direct:
                raise _VarError("missing-binding", "no value in the model")
            return self.term_value(direct[-1].value, info.declared)
        if kind == "tuple":
            return self.build_tuple(info, rows)
        if kind == "set":
            decl = info.declared
            if isinstance(decl, Power):
                elem = decl.elem
            else:  # a rel synonym
                elem = Product(decl.args[0], decl.args[1])
            return SetV(tuple(self.collect_members(rows, elem, ())))
        if kind == "fun":
            return self.build_fun(info, rows)
        if kind in ("pfun", "ffun"):
            return self.build_pfun(info, rows)
        if kind == "seq":
            return self.build_seq(info, rows)
        if kind == "finset":
            elem = info.declared.args[0]
            members = self.collect_members(rows, elem, (("id", "set"),))
            self.check_card(rows, len(members))
            return SetV(tuple(members))
        raise _VarError("missing-binding", f"cannot rebuild a {kind} variable")

    def build_tuple(self, info: SymbolInfo, rows: list[Assignment]) -> Value:
        t = info.declared
        whole = [r for r in rows if not r.selectors]
        if whole:
            return self.term_value(whole[-1].value, t)
        parts: dict[int, Value] = {}
        sides = (t.left, t.right)
        for r in rows:
            if len(r.selectors) == 1 and isinstance(r.selectors[0], int):
                index = r.selectors[0]
                slot = index if self.script.dialect == YICES else index + 1
                if slot in (1, 2):
                    parts[slot] = self.term_value(r.value, sides[slot - 1])
        if set(parts) != {1, 2}:
            raise _VarError("missing-binding", "pair components incomplete in the model")
        return TupleV((parts[1], parts[2]))

    def rows_under(self, rows: list[Assignment], field_name: str) -> list[Assignment]:
        out = []
        for r in rows:
            if r.selectors and r.selectors[0] == ("id", field_name):
                out.append(Assignment(r.var, r.selectors[1:], r.value))
        return out

    def collect_members(self, rows, elem: TypeExpr, prefix: tuple) -> list[Value]:
        matching = rows
        for p in prefix:
            matching = [
                Assignment(r.var, r.selectors[1:], r.value)
                for r in matching
                if r.selectors and r.selectors[0] == p
            ]
        members: dict[Value, bool] = {}
        for r in matching:
            key = self.key_value(r.selectors, elem)
            members[key] = self.truthy(r.value)
        return sort_values([k for k, v in members.items() if v])

    def point_map(self, rows, elem: TypeExpr, value_t: TypeExpr) -> dict[Value, Value]:
        out: dict[Value, Value] = {}
        for r in rows:
            key = self.key_value(r.selectors, elem)
            out[key] = self.term_value(r.value, value_t)
        return out

    def check_card(self, rows: list[Assignment], expected: int) -> None:
        card_rows = [r for r in rows if r.selectors == (("id", "card"),)]
        if not card_rows:
            raise _VarError("missing-binding", "no card value in the model")
        value = card_rows[-1].value
        if not isinstance(value, int) or isinstance(value, bool):
            raise _VarError("card-mismatch", f"card bound to {_term_text(value)}")
        if value != expected:
            raise _VarError(
                "card-mismatch", f"card says {value} but the extension has {expected} members"
            )

    def build_fun(self, info: SymbolInfo, rows: list[Assignment]) -> Value:
        x_t, y_t = info.declared.args
        points = self.point_map(rows, x_t, y_t)
        for missing in self.domain_universe(x_t, points):
            raise _VarError(
                "missing-binding", f"total function lacks a value at {format_value(missing)}"
            )
        return SetV(tuple(TupleV((k, v)) for k, v in points.items()))

    def domain_universe(self, t: TypeExpr, have) -> list[Value]:
        """Missing domain points, when the domain universe is enumerable."""
        t = normalize(t)
        if isinstance(t, Free):
            universe = [EnumV(c, i) for i, c in enumerate(t.constants)]
        elif isinstance(t, Basic):
            universe = [BasicV(c) for c in self.script.universes.get(t.name, ())]
        elif isinstance(t, Product):
            left = self.domain_universe_all(t.left)
            right = self.domain_universe_all(t.right)
            if left is None or right is None:
                return []
            universe = [TupleV((a, b)) for a in left for b in right]
        else:
            return []
        return [u for u in universe if u not in have]

    def domain_universe_all(self, t: TypeExpr):
        t = normalize(t)
        if isinstance(t, Free):
            return [EnumV(c, i) for i, c in enumerate(t.constants)]
        if isinstance(t, Basic):
            return [BasicV(c) for c in self.script.universes.get(t.name, ())]
        return None

    def build_pfun(self, info: SymbolInfo, rows: list[Assignment]) -> Value:
        x_t, y_t = info.declared.args
        members = self.collect_members(rows, x_t, (("id", "dom"),))
        law = self.point_map(self.rows_under(rows, "law"), x_t, y_t)
        pairs = []
        for x in members:
            if x not in law:
                raise _VarError(
                    "missing-binding", f"no law value at {format_value(x)}"
                )
            pairs.append(TupleV((x, law[x])))
        if synonym_kind(info.declared) == FFUN:
            self.check_card(rows, len(pairs))
        return SetV(tuple(pairs))

    def build_seq(self, info: SymbolInfo, rows: list[Assignment]) -> Value:
        elem_t = info.declared.args[0]
        dom = self.collect_members(rows, Int(), (("id", "dom"),))
        indices = sorted(v.value for v in dom)
        if indices != list(range(1, len(indices) + 1)):
            raise _VarError(
                "card-mismatch", f"sequence positions {indices} are not 1..{len(indices)}"
            )
        self.check_card(rows, len(indices))
        law = self.point_map(self.rows_under(rows, "law"), Int(), elem_t)
        pairs = []
        for i in indices:
            key = IntV(i)
            if key not in law:
                raise _VarError("missing-binding", f"no law value at position {i}")
            pairs.append(TupleV((key, law[key])))
        return SetV(tuple(pairs))


def reconstruct(script: SmtScript, output: SolverOutput) -> ReconstructResult:
    """Rebuild a specification-level binding from parsed solver output."""
    if output.status == PARSE_FAILURE:
        return ReconstructResult(
            PARSE_FAILURE,
            None,
            (ReconstructError("missing-binding", "<output>", output.message),),
        )
    if output.status == UNSAT:
        return ReconstructResult(UNSAT, None)
    worker = _Reconstructor(script)
    grouped: dict[str, list[Assignment]] = {}
    emitted_to_z = {info.emitted: name for name, info in script.symbols.items()}
    for a in output.assignments:
        z = emitted_to_z.get(a.var)
        if z is not None:
            grouped.setdefault(z, []).append(a)
    env: dict[str, Value] = {}
    errors: list[ReconstructError] = []
    for name in script.decl_order:
        info = script.symbols[name]
        try:
            env[name] = worker.build_var(info, grouped.get(name, []))
        except _VarError as err:
            errors.append(ReconstructError(err.code, name, err.message))
    if errors:
        return ReconstructResult(output.status, None, tuple(errors))
    return ReconstructResult(output.status, env)


# ---------------------------------------------------------------------------
# Translation: specification values to solver-side values
# ---------------------------------------------------------------------------


def _flatten_value(v: Value) -> tuple:
    if isinstance(v, TupleV):
        return _flatten_value(v.items[0]) + _flatten_value(v.items[1])
    return (_scalar(v),)


def _scalar(v: Value):
    if isinstance(v, IntV):
        return v.value
    if isinstance(v, (EnumV, BasicV)):
        return v.name
    if isinstance(v, TupleV):
        return tuple(_scalar(x) for x in v.items)
    raise UnsupportedExpr(f"no scalar translation for {v!r}")


def _sort_default(t: TypeExpr, script: SmtScript):
    t = normalize(t)
    if isinstance(t, (Int, Nat)):
        return 0
    if isinstance(t, Free):
        return t.constants[0]
    if isinstance(t, Basic):
        universe = script.universes.get(t.name)
        return universe[0] if universe else f"{t.name}1"
    if isinstance(t, Product):
        return (_sort_default(t.left, script), _sort_default(t.right, script))
    raise UnsupportedExpr(f"no default element for {t!r}")


def translate(env: Env, script: SmtScript) -> dict:
    """Solver-side image of a binding, in the script's own encoding."""
    true = True if script.dialect == YICES else 1
    false = False if script.dialect == YICES else 0

    def char_map(members) -> FuncV:
        return FuncV({_flatten_value(m): true for m in members}, false)

    out: dict[str, object] = {}
    for name in script.decl_order:
        info = script.symbols[name]
        v = env[name]
        kind = info.kind
        if kind in ("int", "nat", "enum", "basic", "tuple"):
            out[info.emitted] = _scalar(v)
        elif kind == "set":
            out[info.emitted] = char_map(v.elems)
        elif kind == "fun":
            y_t = info.declared.args[1]
            points = {_flatten_value(p.items[0]): _scalar(p.items[1]) for p in v.elems}
            out[info.emitted] = FuncV(points, _sort_default(y_t, script))
        elif kind in ("pfun", "ffun"):
            y_t = info.declared.args[1]
            members = [p.items[0] for p in v.elems]
            rec = {
                "dom": char_map(members),
                "law": FuncV(
                    {_flatten_value(p.items[0]): _scalar(p.items[1]) for p in v.elems},
                    _sort_default(y_t, script),
                ),
            }
            if kind == "ffun":
                ordered = sort_values(members)
                rec["bij"] = FuncV(
                    {_flatten_value(m): i for i, m in enumerate(ordered, start=1)},
                    len(ordered) + 1,
                )
                rec["card"] = len(ordered)
            out[info.emitted] = RecV(rec)
        elif kind == "seq":
            elem_t = info.declared.args[0]
            pairs = {p.items[0].value: p.items[1] for p in v.elems}
            rec = {
                "dom": FuncV({(i,): true for i in pairs}, false),
                "law": FuncV(
                    {(i,): _scalar(y) for i, y in pairs.items()},
                    _sort_default(elem_t, script),
                ),
                "card": len(pairs),
            }
            out[info.emitted] = RecV(rec)
        elif kind == "finset":
            members = sort_values(v.elems)
            rec = {
                "set": char_map(members),
                "bij": FuncV(
                    {_flatten_value(m): i for i, m in enumerate(members, start=1)},
                    len(members) + 1,
                ),
                "card": len(members),
            }
            out[info.emitted] = RecV(rec)
        else:
            raise UnsupportedExpr(f"cannot translate a {kind} variable")
    return out


# ---------------------------------------------------------------------------
# Script interpretation
# ---------------------------------------------------------------------------


class _Frame:
    __slots__ = ("parent", "locals")

    def __init__(self, parent, values) -> None:
        self.parent = parent
        self.locals = values

    def lookup(self, name: str):
        frame = self
        while frame is not None:
            if name in frame.locals:
                return frame.locals[name]
            frame = frame.parent
        raise InterpretError(f"unbound symbol {name}")


class _Interpreter:
    def __init__(self, script: SmtScript, bindings: dict) -> None:
        self.script = script
        self.ints = self._int_universe(bindings)
        base: dict[str, object] = {}
        for consts in script.universes.values():
            for c in consts:
                base[c] = c
        base.update(bindings)
        self.globals = _Frame(None, base)
        for s in script.items:
            if s.definition is not None and s.name is not None:
                base[s.name] = self.eval(s.definition, self.globals)

    def _int_universe(self, bindings) -> list[int]:
        seen = {0, 1}
        seen.update(self.script.int_literals)

        def walk(v) -> None:
            if isinstance(v, bool):
                return
            if isinstance(v, int):
                seen.add(v)
            elif isinstance(v, tuple):
                for x in v:
                    walk(x)
            elif isinstance(v, FuncV):
                for k, y in v.points.items():
                    walk(k)
                    walk(y)
                walk(v.default)
            elif isinstance(v, RecV):
                for y in v.fields.values():
                    walk(y)

        for v in bindings.values():
            walk(v)
        lo, hi = min(seen), max(seen)
        if hi - lo + 1 <= _INT_SPAN:
            return list(range(lo, hi + 1))
        return sorted(seen)

    def universe(self, sort) -> list:
        if isinstance(sort, SName):
            name = sort.name
            if name in ("int", "INT"):
                return list(self.ints)
            if name in ("nat", "NAT"):
                return [i for i in self.ints if i >= 0]
            if name in ("nat1", "NAT1"):
                return [i for i in self.ints if i >= 1]
            if name in ("bool", "BOOLEAN"):
                return [False, True]
            if name in self.script.universes:
                return list(self.script.universes[name])
        raise InterpretError(f"cannot enumerate sort {sort!r}")

    def call(self, fn, args: tuple):
        if isinstance(fn, FuncV):
            return fn.get(args)
        if isinstance(fn, Closure):
            frame = _Frame(fn.env, dict(zip((n for n, _ in fn.params), args)))
            return self.eval(fn.body, frame)
        raise InterpretError(f"cannot apply {fn!r}")

    def equal(self, a, b) -> bool:
        if isinstance(a, (FuncV, Closure)) or isinstance(b, (FuncV, Closure)):
            return self._equal_maps(a, b)
        if isinstance(a, RecV) and isinstance(b, RecV):
            return set(a.fields) == set(b.fields) and all(
                self.equal(a.fields[k], b.fields[k]) for k in a.fields
            )
        if isinstance(a, tuple) and isinstance(b, tuple):
            return len(a) == len(b) and all(self.equal(x, y) for x, y in zip(a, b))
        return a == b

    def _equal_maps(self, a, b) -> bool:
        sorts = None
        for side in (a, b):
            if isinstance(side, Closure):
                sorts = [s for _, s in side.params]
                break
        if sorts is None:
            # Two finite maps: same default, same off-default points.
            if not (isinstance(a, FuncV) and isinstance(b, FuncV)):
                raise InterpretError("cannot compare these function values")
            pa = {k: v for k, v in a.points.items() if not self.equal(v, a.default)}
            pb = {k: v for k, v in b.points.items() if not self.equal(v, b.default)}
            return self.equal(a.default, b.default) and pa == pb
        domains = [self.universe(s) for s in sorts]
        return all(
            self.equal(self.call(a, args), self.call(b, args))
            for args in _product(domains)
        )

    def eval(self, t, frame: _Frame):
        if isinstance(t, Sym):
            return frame.lookup(t.name)
        if isinstance(t, IntC):
            return t.value
        if isinstance(t, BoolC):
            return t.value
        if isinstance(t, Bv1):
            return t.bit
        if isinstance(t, TupleC):
            return tuple(self.eval(x, frame) for x in t.items)
        if isinstance(t, (App, ARead)):
            fn = self.eval(t.fn if isinstance(t, App) else t.arr, frame)
            args = tuple(self.eval(a, frame) for a in t.args)
            return self.call(fn, args)
        if isinstance(t, Field):
            rec = self.eval(t.rec, frame)
            if not isinstance(rec, RecV):
                raise InterpretError(f"field read on non-record {rec!r}")
            return rec.fields[t.name]
        if isinstance(t, TSel):
            tup = self.eval(t.tup, frame)
            return tup[t.index - 1]
        if isinstance(t, Lam):
            return Closure(t.params, t.body, frame)
        if isinstance(t, (Forall, Exists)):
            domains = [self.universe(s) for _, s in t.params]
            names = [n for n, _ in t.params]
            want = isinstance(t, Exists)
            for combo in _product(domains):
                inner = _Frame(frame, dict(zip(names, combo)))
                if bool(self.eval(t.body, inner)) == want:
                    return want
            return not want
        if isinstance(t, Not):
            return not self.eval(t.arg, frame)
        if isinstance(t, And):
            return all(bool(self.eval(a, frame)) for a in t.args)
        if isinstance(t, Or):
            return any(bool(self.eval(a, frame)) for a in t.args)
        if isinstance(t, Implies):
            return (not self.eval(t.lhs, frame)) or bool(self.eval(t.rhs, frame))
        if isinstance(t, Iff):
            return bool(self.eval(t.lhs, frame)) == bool(self.eval(t.rhs, frame))
        if isinstance(t, Eq):
            return self.equal(self.eval(t.lhs, frame), self.eval(t.rhs, frame))
        if isinstance(t, (Le, LtT)):
            a, b = self.eval(t.lhs, frame), self.eval(t.rhs, frame)
            return a <= b if isinstance(t, Le) else a < b
        if isinstance(t, (AddT, SubT, MulT)):
            a, b = self.eval(t.lhs, frame), self.eval(t.rhs, frame)
            if isinstance(t, AddT):
                return a + b
            if isinstance(t, SubT):
                return a - b
            return a * b
        if isinstance(t, Ite):
            return (
                self.eval(t.then, frame)
                if self.eval(t.cond, frame)
                else self.eval(t.other, frame)
            )
        raise InterpretError(f"cannot interpret term {t!r}")


def _product(domains):
    import itertools

    return itertools.product(*domains)


def interpret_script(script: SmtScript, bindings: dict) -> list[bool]:
    """Truth of every assert under the given solver-side binding.

    Operator-definition asserts hold by construction (the attached
    definition is what gets bound), so they report True directly.
    """
    interp = _Interpreter(script, bindings)
    out = []
    for s in script.asserts():
        if s.kind == "opdef-assert":
            out.append(True)
        else:
            out.append(bool(interp.eval(s.formula, interp.globals)))
    return out


# ---------------------------------------------------------------------------
# Model synthesis (round-trip and stub-solver support)
# ---------------------------------------------------------------------------


def synthesize_model(script: SmtScript, env: Env) -> str:
    """Render a binding as solver output in the script's model grammar."""
    solver = translate(env, script)
    yices = script.dialect == YICES
    lines = [SAT if yices else "Satisfiable."]

    def fmt(v) -> str:
        if v is True:
            return "true"
        if v is False:
            return "false"
        if isinstance(v, tuple):
            if yices:
                return "(mk-tuple " + " ".join(fmt(x) for x in v) + ")"
            return "(" + ", ".join(fmt(x) for x in v) + ")"
        return str(v)

    def bit(v) -> str:
        return f"0bin{v}"

    def emit(name: str, sels: tuple, value: str) -> None:
        if yices:
            lhs = name if not sels else "(" + " ".join([name, *sels]) + ")"
            lines.append(f"(= {lhs} {value})")
        else:
            lhs = name
            if sels:
                fields = [s for s in sels if s in _FIELD_NAMES]
                keys = [s for s in sels if s not in _FIELD_NAMES]
                for f in fields:
                    lhs += f".{f}"
                if keys:
                    lhs += "[" + ", ".join(keys) + "]"
            lines.append(f"ASSERT ({lhs} = {value});")

    for name in script.decl_order:
        info = script.symbols[name]
        v = solver[info.emitted]
        if isinstance(v, (int, str)) and not isinstance(v, bool):
            emit(info.emitted, (), fmt(v))
        elif isinstance(v, tuple):
            if yices:
                emit(info.emitted, (), fmt(v))
            else:
                for i, part in enumerate(v):
                    emit(f"{info.emitted}.{i}", (), fmt(part))
        elif isinstance(v, FuncV):
            char = _is_char_map(info)
            for key, val in sorted(v.points.items(), key=lambda kv: str(kv)):
                keys = tuple(fmt(k) for k in key)
                text = bit(val) if (char and not yices) else fmt(val)
                emit(info.emitted, keys, text)
        elif isinstance(v, RecV):
            for fname, fval in v.fields.items():
                if isinstance(fval, FuncV):
                    for key, val in sorted(fval.points.items(), key=lambda kv: str(kv)):
                        keys = (fname,) + tuple(fmt(k) for k in key)
                        if not yices and fname in ("dom", "set"):
                            emit(info.emitted, keys, bit(val))
                        else:
                            emit(info.emitted, keys, fmt(val))
                else:
                    emit(info.emitted, (fname,), fmt(fval))
    return "\n".join(lines) + "\n"


def _is_char_map(info: SymbolInfo) -> bool:
    return info.kind == "set"


# ---------------------------------------------------------------------------
# Witnesses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    spec_name: str
    env: dict
    origin: str  # "search" or "solver-potential"
    verified: bool = False

    @property
    def status(self) -> str:
        return "confirmed" if self.verified else "potential"

    def to_json_dict(self) -> dict:
        return {
            "spec": self.spec_name,
            "origin": self.origin,
            "status": self.status,
            "verified": self.verified,
            "bindings": {
                name: format_value(self.env[name]) for name in sorted(self.env)
            },
        }

    def as_test_case(self, tspec: TypedSpec, suffix: str = "TC") -> str:
        """Render the binding as a derived block: include plus equations."""
        lines = [f"spec {self.spec_name}{suffix} {{", f"  include {self.spec_name};"]
        lines.append("  |")
        eqs = []
        for name, _ in tspec.spec.decls:
            v = self.env[name]
            eqs.append(f"  {name} = {self._value_text(v, tspec.declared_type(name))}")
        lines.extend(f"{eq};" if i < len(eqs) - 1 else eq for i, eq in enumerate(eqs))
        lines.append("}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def _value_text(v: Value, declared: TypeExpr) -> str:
        if isinstance(v, SetV) and not v.elems:
            return format_expr(EmptySet(normalize(declared).elem))
        return format_value(v)


def verified_witness(
    tspec: TypedSpec, script: SmtScript, output: SolverOutput
) -> tuple[ReconstructResult, object]:
    """Reconstruct a model and replay the original spec over it."""
    result = reconstruct(script, output)
    if not result.ok:
        return result, None
    verdict = check_spec(tspec, result.env)
    return result, verdict
