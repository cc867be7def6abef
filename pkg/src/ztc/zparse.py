"""Reading and writing the `.ztc` surface syntax.

A source file declares basic and free types and then any number of spec
blocks:

    -- reference events a monitor reacts to
    free REVENT ::= LiftOff | ThrustDrop1E;
    basic SENSOR;

    spec Sample {
      now, fa : NAT;
      ot : REVENT pfun NAT
    |
      now in 1 .. fa;
      ot /= {}(REVENT x NAT)
    }

Predicates are a `;`-separated conjunction of atoms.  Chained order
comparisons (`1 < now < 3`) expand into separate atoms at parse time.
A block may start with `include Earlier;` lines, which prepend the named
block's declarations and predicates.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .zcore import (
    FFUN,
    FINSET,
    FUN,
    INT,
    NAT,
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
    IntLit,
    Inter,
    Leq,
    Lt,
    MemberOf,
    Mul,
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
    TestSpec,
    Tuple,
    TypeContext,
    TypeExpr,
    Union,
    Var,
    ZtcError,
    format_type,
)

KEYWORDS = {
    "spec", "include", "basic", "free",
    "in", "notin", "subseteq", "notsubseteq",
    "cup", "cap", "setminus", "dom", "ran",
    "P", "NAT", "INT", "rel", "pfun", "fun", "ffun", "seq", "fset",
}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>--[^\n]*)
  | (?P<sym>::=|\|->|\.\.|<=|>=|/=|\{\}|[{}(),;:|<>=+\-*@\#])
  | (?P<number>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*\??)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # one of: sym text, "number", "ident", keyword text, "eof"
    text: str
    line: int
    col: int


class ParseError(ZtcError):
    def __init__(self, message: str, line: int, col: int, path: str = "<input>") -> None:
        self.line = line
        self.col = col
        self.path = path
        super().__init__(f"{path}:{line}:{col}: {message}")


def _lex(text: str, path: str) -> list[Token]:
    tokens: list[Token] = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"stray character {text[pos]!r}", line, col, path)
        lexeme = m.group(0)
        if m.lastgroup == "number":
            tokens.append(Token("number", lexeme, line, col))
        elif m.lastgroup == "ident":
            kind = lexeme if lexeme in KEYWORDS else "ident"
            tokens.append(Token(kind, lexeme, line, col))
        elif m.lastgroup == "sym":
            tokens.append(Token(lexeme, lexeme, line, col))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


@dataclass(frozen=True)
class SourceFile:
    """A parsed `.ztc` file: its type declarations and spec blocks."""

    path: str
    ctx: TypeContext
    specs: tuple[TestSpec, ...]

    def spec_named(self, name: str) -> TestSpec:
        for s in self.specs:
            if s.name == name:
                return s
        raise KeyError(f"no spec named {name} in {self.path}")

    def spec_names(self) -> list[str]:
        return [s.name for s in self.specs]


def resolve_includes(source: SourceFile, spec: TestSpec) -> TestSpec:
    """Flatten a block's includes into one plain specification.

    Includes always name earlier blocks in the same file, so the recursion
    terminates.  Declarations and predicates of included blocks come first,
    in include order.
    """
    if not spec.includes:
        return spec
    decls: list[tuple[str, TypeExpr]] = []
    preds: list[Pred] = []
    for name in spec.includes:
        inner = resolve_includes(source, source.spec_named(name))
        decls.extend(inner.decls)
        preds.extend(inner.preds)
    decls.extend(spec.decls)
    preds.extend(spec.preds)
    return TestSpec(spec.name, (), tuple(decls), tuple(preds))


def parse_text(text: str, path: str = "<input>") -> SourceFile:
    return _Parser(_lex(text, path), path).parse_source()

def parse_file(path: str | Path) -> SourceFile:
    p = Path(path)
    return parse_text(p.read_text(encoding="utf-8"), str(p))


_CHAINABLE = {"<", "<=", ">", ">="}

_PRED_OPS = {
    "=": Equal, "/=": NotEqual,
    "in": MemberOf, "notin": NotMemberOf,
    "subseteq": SubsetEq, "notsubseteq": NotSubsetEq,
    "<": Lt, "<=": Leq, ">": Gt, ">=": Geq,
}


class _Parser:
    def __init__(self, tokens: list[Token], path: str) -> None:
        self.tokens = tokens
        self.pos = 0
        self.path = path
        self.frees: dict[str, Free] = {}
        self.basics: dict[str, Basic] = {}
        self.const_owner: dict[str, Free] = {}
        self.specs: list[TestSpec] = []
        self.flat: dict[str, TestSpec] = {}
        self.scope: dict[str, TypeExpr] = {}

    # -- token plumbing --

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def at(self, kind: str) -> bool:
        return self.peek().kind == kind

    def accept(self, kind: str) -> Token | None:
        if self.at(kind):
            return self.advance()
        return None

    def expect(self, kind: str, why: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            want = why or repr(kind)
            found = tok.text or "end of file"
            raise self.error(f"expected {want}, found {found!r}", tok)
        return self.advance()

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(message, tok.line, tok.col, self.path)

    # -- top level --

    def parse_source(self) -> SourceFile:
        while not self.at("eof"):
            if self.at("basic"):
                self.parse_basic()
            elif self.at("free"):
                self.parse_free()
            elif self.at("spec"):
                self.parse_spec()
            else:
                raise self.error(
                    f"expected 'basic', 'free' or 'spec', found {self.peek().text!r}"
                )
        ctx = TypeContext(frees=tuple(self.frees.values()), basics=tuple(self.basics.values()))
        return SourceFile(path=self.path, ctx=ctx, specs=tuple(self.specs))

    def check_fresh_type(self, tok: Token) -> None:
        if tok.text in self.frees or tok.text in self.basics:
            raise self.error(f"type {tok.text} declared twice", tok)

    def parse_basic(self) -> None:
        self.advance()
        name = self.expect("ident", "a type name")
        self.check_fresh_type(name)
        self.expect(";")
        self.basics[name.text] = Basic(name.text)

    def parse_free(self) -> None:
        self.advance()
        name = self.expect("ident", "a type name")
        self.check_fresh_type(name)
        self.expect("::=")
        constants = [self.expect("ident", "a constant name")]
        while self.accept("|"):
            constants.append(self.expect("ident", "a constant name"))
        self.expect(";")
        for c in constants:
            if c.text in self.const_owner:
                raise self.error(f"constant {c.text} declared twice", c)
        free = Free(name.text, tuple(c.text for c in constants))
        self.frees[name.text] = free
        for c in constants:
            self.const_owner[c.text] = free

    def parse_spec(self) -> None:
        self.advance()
        name = self.expect("ident", "a spec name")
        if any(s.name == name.text for s in self.specs):
            raise self.error(f"spec {name.text} declared twice", name)
        self.expect("{")
        includes: list[str] = []
        while self.at("include"):
            self.advance()
            inc = self.expect("ident", "a spec name")
            if inc.text not in self.flat:
                raise self.error(f"include of unknown spec {inc.text}", inc)
            includes.append(inc.text)
            self.expect(";")

        decls: list[tuple[str, TypeExpr]] = []
        while self.at("ident"):
            decls.extend(self.parse_decl())
            if not self.accept(";"):
                break

        self.scope = {}
        for inc in includes:
            self.scope.update(self.flat[inc].declared())
        for var, t in decls:
            if var in self.scope:
                raise self.error(f"variable {var} declared twice in {name.text}", name)
            self.scope[var] = t

        preds: list[Pred] = []
        if self.accept("|"):
            while not self.at("}"):
                preds.extend(self.parse_pred())
                if not self.accept(";"):
                    break
        self.expect("}")

        spec = TestSpec(name.text, tuple(includes), tuple(decls), tuple(preds))
        self.specs.append(spec)
        flat_decls = [
            (v, t) for inc in includes for v, t in self.flat[inc].decls
        ] + decls
        flat_preds = [
            p for inc in includes for p in self.flat[inc].preds
        ] + preds
        self.flat[name.text] = TestSpec(
            name.text, (), tuple(flat_decls), tuple(flat_preds)
        )

    def parse_decl(self) -> list[tuple[str, TypeExpr]]:
        names = [self.expect("ident", "a variable name")]
        while self.accept(","):
            names.append(self.expect("ident", "a variable name"))
        self.expect(":")
        t = self.parse_type()
        return [(n.text, t) for n in names]

    # -- types --

    def parse_type(self) -> TypeExpr:
        left = self.parse_type_product()
        for kind in (REL, PFUN, FUN, FFUN):
            if self.at(kind):
                self.advance()
                right = self.parse_type_product()
                return Synonym(kind, (left, right))
        return left

    def parse_type_product(self) -> TypeExpr:
        left = self.parse_type_prefix()
        if self.at("ident") and self.peek().text == "x":
            self.advance()
            right = self.parse_type_prefix()
            if self.at("ident") and self.peek().text == "x":
                raise self.error("nested products need parentheses")
            return Product(left, right)
        return left

    def parse_type_prefix(self) -> TypeExpr:
        if self.accept("P"):
            return Power(self.parse_type_atom())
        if self.accept(SEQ):
            return Synonym(SEQ, (self.parse_type_atom(),))
        if self.accept(FINSET):
            return Synonym(FINSET, (self.parse_type_atom(),))
        return self.parse_type_atom()

    def parse_type_atom(self) -> TypeExpr:
        if self.accept("NAT"):
            return NAT
        if self.accept("INT"):
            return INT
        if self.accept("("):
            t = self.parse_type()
            self.expect(")")
            return t
        tok = self.expect("ident", "a type")
        if tok.text in self.frees:
            return self.frees[tok.text]
        if tok.text in self.basics:
            return self.basics[tok.text]
        raise self.error(f"unknown type name {tok.text}", tok)

    # -- predicates --

    def parse_pred(self) -> list[Pred]:
        lhs = self.parse_expr()
        op = self.peek()
        if op.kind not in _PRED_OPS:
            raise self.error(f"expected a predicate operator, found {op.text!r}", op)
        self.advance()
        rhs = self.parse_expr()
        atoms = [_PRED_OPS[op.kind](lhs, rhs)]
        while op.kind in _CHAINABLE and self.peek().kind in _CHAINABLE:
            op = self.advance()
            nxt = self.parse_expr()
            atoms.append(_PRED_OPS[op.kind](rhs, nxt))
            rhs = nxt
        return atoms

    # -- expressions --

    def parse_expr(self) -> Expr:
        return self.parse_maplet()

    def parse_maplet(self) -> Expr:
        left = self.parse_setsum()
        if self.accept("|->"):
            right = self.parse_setsum()
            return Tuple((left, right))
        return left

    def parse_setsum(self) -> Expr:
        left = self.parse_setprod()
        while True:
            if self.accept("cup"):
                left = Union(left, self.parse_setprod())
            elif self.accept("setminus"):
                left = Diff(left, self.parse_setprod())
            else:
                return left

    def parse_setprod(self) -> Expr:
        left = self.parse_range()
        while self.accept("cap"):
            left = Inter(left, self.parse_range())
        return left

    def parse_range(self) -> Expr:
        left = self.parse_addsub()
        if self.accept(".."):
            return Range(left, self.parse_addsub())
        return left

    def parse_addsub(self) -> Expr:
        # After a left operand `-` is always subtraction; negative literals
        # only occur where an atom is expected.
        left = self.parse_mul()
        while True:
            if self.accept("+"):
                left = Add(left, self.parse_mul())
            elif self.accept("-"):
                left = Sub(left, self.parse_mul())
            else:
                return left

    def parse_mul(self) -> Expr:
        left = self.parse_prefix()
        while self.accept("*"):
            left = Mul(left, self.parse_prefix())
        return left

    def parse_prefix(self) -> Expr:
        if self.accept("dom"):
            return Dom(self.parse_prefix())
        if self.accept("ran"):
            return Ran(self.parse_prefix())
        if self.accept("#"):
            return Card(self.parse_prefix())
        return self.parse_apply()

    def parse_apply(self) -> Expr:
        left = self.parse_atom()
        while self.accept("@"):
            left = Apply(left, self.parse_atom())
        return left

    def parse_atom(self) -> Expr:
        if self.at("number"):
            return IntLit(int(self.advance().text))
        if self.at("-"):
            tok = self.advance()
            num = self.expect("number", "a number after unary '-'")
            return IntLit(-int(num.text))
        if self.accept("{}"):
            return EmptySet(self.parse_type_atom_for_empty())
        if self.accept("{"):
            items = [self.parse_expr()]
            while self.accept(","):
                items.append(self.parse_expr())
            self.expect("}")
            return SetExt(tuple(items))
        if self.accept("("):
            first = self.parse_expr()
            if self.accept(","):
                second = self.parse_expr()
                self.expect(")")
                return Tuple((first, second))
            self.expect(")")
            return first
        tok = self.expect("ident", "an expression")
        return self.resolve_name(tok)

    def parse_type_atom_for_empty(self) -> TypeExpr:
        # `{}` is followed by the element type: a name or a parenthesized type.
        if self.at("P") or self.at(SEQ) or self.at(FINSET):
            raise self.error("parenthesize the element type after {}")
        return self.parse_type_atom()

    def resolve_name(self, tok: Token) -> Expr:
        name = tok.text
        if name in self.scope:
            return Var(name)
        owner = self.const_owner.get(name)
        if owner is not None:
            return EnumLit(name, owner.name)
        m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*?)(\d+)", name)
        if m and m.group(1) in self.basics:
            return BasicLit(name, m.group(1))
        raise self.error(f"undeclared variable {name}", tok)


# ---------------------------------------------------------------------------
# Pretty printing
# ---------------------------------------------------------------------------

_MAPLET, _SETSUM, _SETPROD, _RANGE, _ADD, _MUL, _PREFIX, _APPLY, _ATOM = range(1, 10)


def format_expr(e: Expr, ctx: int = 0) -> str:
    text, level = _format_expr(e)
    return f"({text})" if level < ctx else text


def _format_expr(e: Expr) -> tuple[str, int]:
    if isinstance(e, Var):
        return e.name, _ATOM
    if isinstance(e, IntLit):
        return str(e.value), _ATOM
    if isinstance(e, (EnumLit, BasicLit)):
        return e.name, _ATOM
    if isinstance(e, Tuple):
        a = format_expr(e.items[0], _MAPLET + 1)
        b = format_expr(e.items[1], _MAPLET + 1)
        return f"{a} |-> {b}", _MAPLET
    if isinstance(e, (Union, Diff)):
        op = "cup" if isinstance(e, Union) else "setminus"
        return (
            f"{format_expr(e.left, _SETSUM)} {op} {format_expr(e.right, _SETSUM + 1)}",
            _SETSUM,
        )
    if isinstance(e, Inter):
        return (
            f"{format_expr(e.left, _SETPROD)} cap {format_expr(e.right, _SETPROD + 1)}",
            _SETPROD,
        )
    if isinstance(e, Range):
        return (
            f"{format_expr(e.lo, _RANGE + 1)} .. {format_expr(e.hi, _RANGE + 1)}",
            _RANGE,
        )
    if isinstance(e, (Add, Sub)):
        op = "+" if isinstance(e, Add) else "-"
        return (
            f"{format_expr(e.left, _ADD)} {op} {format_expr(e.right, _ADD + 1)}",
            _ADD,
        )
    if isinstance(e, Mul):
        return (
            f"{format_expr(e.left, _MUL)} * {format_expr(e.right, _MUL + 1)}",
            _MUL,
        )
    if isinstance(e, Dom):
        return f"dom {format_expr(e.arg, _PREFIX)}", _PREFIX
    if isinstance(e, Ran):
        return f"ran {format_expr(e.arg, _PREFIX)}", _PREFIX
    if isinstance(e, Card):
        return f"# {format_expr(e.arg, _PREFIX)}", _PREFIX
    if isinstance(e, Apply):
        return (
            f"{format_expr(e.fn, _APPLY)} @ {format_expr(e.arg, _APPLY + 1)}",
            _APPLY,
        )
    if isinstance(e, SetExt):
        return "{ " + ", ".join(format_expr(x) for x in e.items) + " }", _ATOM
    if isinstance(e, EmptySet):
        t = e.elem_type
        if isinstance(t, (Basic, Free)) or t in (INT, NAT):
            return f"{{}}{format_type(t)}", _ATOM
        return f"{{}}({format_type(t)})", _ATOM
    raise ValueError(f"unknown expression node {e!r}")


_PRED_SYMBOL = {
    Equal: "=", NotEqual: "/=",
    MemberOf: "in", NotMemberOf: "notin",
    SubsetEq: "subseteq", NotSubsetEq: "notsubseteq",
    Lt: "<", Leq: "<=", Gt: ">", Geq: ">=",
}


def format_pred(p: Pred) -> str:
    return f"{format_expr(p.lhs)} {_PRED_SYMBOL[type(p)]} {format_expr(p.rhs)}"


def pretty_print(spec: TestSpec) -> str:
    """Render one spec block; chained comparisons stay expanded."""
    lines = [f"spec {spec.name} {{"]
    for inc in spec.includes:
        lines.append(f"  include {inc};")
    decl_lines: list[str] = []
    i = 0
    while i < len(spec.decls):
        j = i
        while j + 1 < len(spec.decls) and spec.decls[j + 1][1] == spec.decls[i][1]:
            j += 1
        names = ", ".join(n for n, _ in spec.decls[i : j + 1])
        decl_lines.append(f"  {names} : {format_type(spec.decls[i][1])}")
        i = j + 1
    lines.extend(
        line + ";" if k < len(decl_lines) - 1 else line
        for k, line in enumerate(decl_lines)
    )
    if spec.preds:
        lines.append("|")
        for k, p in enumerate(spec.preds):
            tail = ";" if k < len(spec.preds) - 1 else ""
            lines.append(f"  {format_pred(p)}{tail}")
    lines.append("}")
    return "\n".join(lines)


def pretty_print_file(source: SourceFile) -> str:
    parts: list[str] = []
    for b in source.ctx.basics:
        parts.append(f"basic {b.name};")
    for f in source.ctx.frees:
        parts.append(f"free {f.name} ::= {' | '.join(f.constants)};")
    for s in source.specs:
        parts.append("")
        parts.append(pretty_print(s))
    return "\n".join(parts) + "\n"
