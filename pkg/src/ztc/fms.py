"""Witness search over finite models.

Each declared variable gets a finite, deterministically ordered candidate
list driven by its type and by the integer literals the specification
mentions.  The search walks the cartesian product of those lists one
atomic predicate at a time: predicate k filters the survivors of
predicate k-1, and the first element surviving the final predicate is the
witness.  Two knobs bound the work: `fss` sizes the per-sort universes
and `max_elements` caps how many product elements are ever drawn.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator

from .zcore import (
    FFUN,
    FINSET,
    FUN,
    PFUN,
    REL,
    SEQ,
    Basic,
    BasicLit,
    BasicV,
    EmptySet,
    EnumLit,
    EnumV,
    Equal,
    Expr,
    Free,
    Int,
    IntLit,
    IntV,
    Nat,
    Power,
    Product,
    SetExt,
    SetV,
    Synonym,
    TestSpec,
    Tuple,
    TupleV,
    TypeContext,
    TypeExpr,
    Value,
    Var,
    iter_exprs,
    sort_values,
)
from .zeval import Env, EvalError, eval_expr, eval_pred
from .ztype import TypedSpec, satisfies_carrier


@dataclass(frozen=True)
class SearchConfig:
    """Knobs for the finite-model search.

    fss sizes every per-sort candidate universe (integer seeds, elements of
    basic types, subset cardinalities, sequence lengths).  max_elements
    caps how many product elements the search may draw.  pad_numeric tops
    up literal-derived integer seeds with default values up to fss.
    """

    fss: int = 3
    max_elements: int = 10_000
    pad_numeric: bool = False

    def __post_init__(self) -> None:
        if self.fss < 1:
            raise ValueError("fss must be at least 1")
        if self.max_elements < 1:
            raise ValueError("max_elements must be at least 1")


@dataclass(frozen=True)
class NumericSeed:
    """Candidate integers for the two numeric sorts."""

    nat: tuple[int, ...]
    ints: tuple[int, ...]


def default_nat_seed(fss: int) -> tuple[int, ...]:
    return tuple(range(fss))


def default_int_seed(fss: int) -> tuple[int, ...]:
    low = -(fss // 2 + (fss % 2 - 1))
    high = fss // 2
    return tuple(range(low, high + 1))


def numeric_seed(spec: TestSpec, cfg: SearchConfig) -> NumericSeed:
    """Integer candidates: the first fss distinct literals of the predicate
    list, else the fss integers around zero (non-negative ones for NAT)."""
    lits: list[int] = []
    for p in spec.preds:
        for side in (p.lhs, p.rhs):
            for e in iter_exprs(side):
                if isinstance(e, IntLit) and e.value not in lits:
                    lits.append(e.value)
    nat = [v for v in lits if v >= 0][: cfg.fss]
    ints = lits[: cfg.fss]
    if not nat:
        nat = list(default_nat_seed(cfg.fss))
    elif cfg.pad_numeric:
        nat.extend(v for v in default_nat_seed(cfg.fss) if v not in nat)
        nat = nat[: cfg.fss]
    if not ints:
        ints = list(default_int_seed(cfg.fss))
    elif cfg.pad_numeric:
        ints.extend(v for v in default_int_seed(cfg.fss) if v not in ints)
        ints = ints[: cfg.fss]
    return NumericSeed(nat=tuple(nat), ints=tuple(ints))


@dataclass
class FiniteModel:
    """Per-variable candidate lists, in canonical order."""

    per_var: dict[str, list[Value]]
    estimated_size: int
    warnings: tuple[str, ...]


def basic_elements(name: str, fss: int) -> list[BasicV]:
    return [BasicV(f"{name}{i}") for i in range(1, fss + 1)]


def default_value(
    t: TypeExpr, ctx: TypeContext, cfg: SearchConfig, seed: NumericSeed
) -> Value:
    """The canonical inhabitant used for variables no predicate mentions."""
    if isinstance(t, (Int, Nat)):
        return IntV(0)
    if isinstance(t, Free):
        return EnumV(t.constants[0], 0)
    if isinstance(t, Basic):
        return BasicV(f"{t.name}1")
    if isinstance(t, Product):
        return TupleV(
            (default_value(t.left, ctx, cfg, seed), default_value(t.right, ctx, cfg, seed))
        )
    if isinstance(t, Synonym) and t.kind == FUN:
        # Total functions cannot default to the empty set.
        dom, _ = _materialize(t.args[0], ctx, cfg, seed, [], "default")
        y = default_value(t.args[1], ctx, cfg, seed)
        return SetV(tuple(TupleV((x, y)) for x in dom))
    if isinstance(t, (Power, Synonym)):
        return SetV(())
    raise ValueError(f"no default value for type {t!r}")


def _literal_value(e: Expr, ctx: TypeContext) -> Value | None:
    """Evaluate a closed literal expression, or None if it isn't one."""
    if isinstance(e, (IntLit, EnumLit, BasicLit, EmptySet)):
        return eval_expr(e, {}, ctx)
    if isinstance(e, (Tuple, SetExt)):
        parts = [_literal_value(x, ctx) for x in e.items]
        if any(v is None for v in parts):
            return None
        if isinstance(e, Tuple):
            return TupleV(tuple(parts))  # type: ignore[arg-type]
        return SetV(tuple(parts))  # type: ignore[arg-type]
    return None


def _equality_literal(name: str, spec: TestSpec, ctx: TypeContext) -> Value | None:
    """The value forced by the first `v = literal` (or `literal = v`) atom."""
    for p in spec.preds:
        if not isinstance(p, Equal):
            continue
        for var_side, lit_side in ((p.lhs, p.rhs), (p.rhs, p.lhs)):
            if isinstance(var_side, Var) and var_side.name == name:
                v = _literal_value(lit_side, ctx)
                if v is not None:
                    return v
    return None


def free_vars(spec: TestSpec) -> set[str]:
    names: set[str] = set()
    for p in spec.preds:
        for side in (p.lhs, p.rhs):
            for e in iter_exprs(side):
                if isinstance(e, Var):
                    names.add(e.name)
    return names


# -- enumeration ------------------------------------------------------------


def _count_subsets(n: int, max_card: int) -> int:
    return sum(math.comb(n, k) for k in range(min(n, max_card) + 1))


def _enumerate(
    t: TypeExpr,
    ctx: TypeContext,
    cfg: SearchConfig,
    seed: NumericSeed,
    warnings: list[str],
    var: str,
) -> tuple[int, Iterator[Value]]:
    """Candidate count and a deterministic generator for one type."""
    if isinstance(t, Nat):
        vals = seed.nat
        return len(vals), (IntV(v) for v in vals)
    if isinstance(t, Int):
        vals = seed.ints
        return len(vals), (IntV(v) for v in vals)
    if isinstance(t, Free):
        consts = t.constants
        return len(consts), (EnumV(c, i) for i, c in enumerate(consts))
    if isinstance(t, Basic):
        elems = basic_elements(t.name, cfg.fss)
        return len(elems), iter(elems)
    if isinstance(t, Product):
        left, _ = _materialize(t.left, ctx, cfg, seed, warnings, var)
        right, _ = _materialize(t.right, ctx, cfg, seed, warnings, var)
        count = len(left) * len(right)
        gen = (TupleV((a, b)) for a in left for b in right)
        return count, gen
    if isinstance(t, Power):
        return _enumerate_subsets(t.elem, ctx, cfg, seed, warnings, var)
    if isinstance(t, Synonym):
        if t.kind == FINSET:
            return _enumerate_subsets(t.args[0], ctx, cfg, seed, warnings, var)
        if t.kind == REL:
            return _enumerate_subsets(
                Product(t.args[0], t.args[1]), ctx, cfg, seed, warnings, var
            )
        if t.kind in (PFUN, FFUN, FUN):
            return _enumerate_maps(t, ctx, cfg, seed, warnings, var)
        if t.kind == SEQ:
            return _enumerate_seqs(t.args[0], ctx, cfg, seed, warnings, var)
    raise ValueError(f"cannot enumerate candidates for type {t!r}")


def _enumerate_subsets(
    elem: TypeExpr,
    ctx: TypeContext,
    cfg: SearchConfig,
    seed: NumericSeed,
    warnings: list[str],
    var: str,
) -> tuple[int, Iterator[Value]]:
    base, _ = _materialize(elem, ctx, cfg, seed, warnings, var)
    count = _count_subsets(len(base), cfg.fss)

    def gen() -> Iterator[Value]:
        for k in range(min(len(base), cfg.fss) + 1):
            for combo in itertools.combinations(base, k):
                yield SetV(combo)

    return count, gen()


def _enumerate_maps(
    t: Synonym,
    ctx: TypeContext,
    cfg: SearchConfig,
    seed: NumericSeed,
    warnings: list[str],
    var: str,
) -> tuple[int, Iterator[Value]]:
    """All (partial or total) functions between the candidate carriers."""
    xs, _ = _materialize(t.args[0], ctx, cfg, seed, warnings, var)
    ys, _ = _materialize(t.args[1], ctx, cfg, seed, warnings, var)
    total = t.kind == FUN
    options: list[list[Value | None]] = [
        list(ys) if total else [None, *ys] for _ in xs
    ]
    count = (len(ys) if total else len(ys) + 1) ** len(xs)

    def gen() -> Iterator[Value]:
        for choice in itertools.product(*options):
            yield SetV(
                tuple(
                    TupleV((x, y)) for x, y in zip(xs, choice) if y is not None
                )
            )

    return count, gen()


def _enumerate_seqs(
    elem: TypeExpr,
    ctx: TypeContext,
    cfg: SearchConfig,
    seed: NumericSeed,
    warnings: list[str],
    var: str,
) -> tuple[int, Iterator[Value]]:
    base, _ = _materialize(elem, ctx, cfg, seed, warnings, var)
    count = sum(len(base) ** k for k in range(cfg.fss + 1))

    def gen() -> Iterator[Value]:
        for k in range(cfg.fss + 1):
            for tup in itertools.product(base, repeat=k):
                yield SetV(tuple(TupleV((IntV(i + 1), x)) for i, x in enumerate(tup)))

    return count, gen()


def _materialize(
    t: TypeExpr,
    ctx: TypeContext,
    cfg: SearchConfig,
    seed: NumericSeed,
    warnings: list[str],
    var: str,
) -> tuple[list[Value], bool]:
    """Candidate list for a type, truncated at max_elements, in canonical
    order.  The flag reports whether truncation happened."""
    count, gen = _enumerate(t, ctx, cfg, seed, warnings, var)
    truncated = count > cfg.max_elements
    values = list(itertools.islice(gen, cfg.max_elements))
    if truncated:
        warnings.append(
            f"candidate explosion: {var} has {count} candidates at type level, "
            f"kept the first {cfg.max_elements}"
        )
    return sort_values(values), truncated


def build_candidates(
    name: str,
    t: TypeExpr,
    tspec: TypedSpec,
    cfg: SearchConfig,
    seed: NumericSeed,
    warnings: list[str] | None = None,
) -> list[Value]:
    """Candidate list for one declared variable.

    A variable pinned by a `v = literal` atom gets exactly that value (or
    nothing, when the literal breaks the variable's carrier constraints);
    a variable no predicate mentions gets a single default; anything else
    enumerates by type.
    """
    warnings = warnings if warnings is not None else []
    ctx = tspec.ctx
    pinned = _equality_literal(name, tspec.spec, ctx)
    if pinned is not None:
        if satisfies_carrier(pinned, t, ctx) is None:
            return [pinned]
        return []
    if name not in free_vars(tspec.spec):
        return [default_value(t, ctx, cfg, seed)]
    values, _ = _materialize(t, ctx, cfg, seed, warnings, name)
    return values


def build_model(tspec: TypedSpec, cfg: SearchConfig) -> FiniteModel:
    seed = numeric_seed(tspec.spec, cfg)
    warnings: list[str] = []
    per_var: dict[str, list[Value]] = {}
    for name, t in tspec.spec.decls:
        per_var[name] = build_candidates(name, t, tspec, cfg, seed, warnings)
    size = math.prod(len(v) for v in per_var.values())
    return FiniteModel(per_var=per_var, estimated_size=size, warnings=tuple(warnings))


# -- the search itself -------------------------------------------------------


@dataclass
class SearchResult:
    """Outcome of a search: a witness, an exhausted model or a capped run.

    kind is "witness", "exhausted" or "capped".  explored counts distinct
    product elements drawn.  failed_at is the predicate that emptied the
    survivor pool when the model is exhausted.
    """

    kind: str
    env: dict[str, Value] | None
    explored: int
    failed_at: int | None
    model: FiniteModel

    @property
    def found(self) -> bool:
        return self.kind == "witness"


class _Capped(Exception):
    pass


def search(tspec: TypedSpec, cfg: SearchConfig | None = None) -> SearchResult:
    """Filter the candidate product predicate by predicate.

    Elements are only counted (and the max_elements cap only applies) when
    they are first drawn from the product; later rounds re-examine
    survivors for free.  Within the final predicate the first survivor
    wins, so a witness can appear even when the product dwarfs the cap.
    """
    cfg = cfg or SearchConfig()
    model = build_model(tspec, cfg)
    names = [n for n, _ in tspec.spec.decls]
    lists = [model.per_var[n] for n in names]
    explored = 0

    def result(kind: str, env: Env | None = None, failed_at: int | None = None) -> SearchResult:
        return SearchResult(
            kind=kind,
            env=dict(env) if env is not None else None,
            explored=explored,
            failed_at=failed_at,
            model=model,
        )

    if any(not l for l in lists):
        return result("exhausted")

    def initial() -> Iterator[dict[str, Value]]:
        nonlocal explored
        for combo in itertools.product(*lists):
            if explored >= cfg.max_elements:
                raise _Capped()
            explored += 1
            yield dict(zip(names, combo))

    preds = tspec.spec.preds
    if not preds:
        env = next(initial())
        return result("witness", env)

    current: Iterator[dict[str, Value]] | list[dict[str, Value]] = initial()
    for k, pred in enumerate(preds):
        last = k == len(preds) - 1
        survivors: list[dict[str, Value]] = []
        try:
            for env in current:
                try:
                    ok = eval_pred(pred, env, tspec.ctx)
                except EvalError:
                    ok = False
                if ok:
                    if last:
                        return result("witness", env)
                    survivors.append(env)
        except _Capped:
            return result("capped")
        if not survivors:
            return result("exhausted", failed_at=k)
        current = survivors
    return result("exhausted", failed_at=len(preds) - 1)
