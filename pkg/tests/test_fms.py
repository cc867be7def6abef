"""Finite-model search: seeds, candidate spaces, filtering, the cap."""

import itertools

import pytest

from ztc.fms import (
    SearchConfig,
    basic_elements,
    build_candidates,
    build_model,
    default_int_seed,
    default_nat_seed,
    default_value,
    numeric_seed,
    search,
)
from ztc.zcore import IntV, SetV, TupleV, value_eq
from ztc.zeval import EvalError, check_spec, eval_pred
from ztc.zparse import parse_text, resolve_includes
from ztc.ztype import typecheck

from conftest import SEARCH_CAPPED, SEARCH_EXHAUSTED

PRELUDE = "basic TASK;\nfree PRIO ::= low | mid | high;\n"


def typecheck_one(body: str):
    src = parse_text(f"{PRELUDE}spec T {{ {body} }}")
    return typecheck(resolve_includes(src, src.spec_named("T")), src.ctx)


def brute_force(tspec, cfg):
    """Search the entire candidate product without incremental filtering."""
    model = build_model(tspec, cfg)
    names = [n for n, _ in tspec.spec.decls]
    for combo in itertools.product(*(model.per_var[n] for n in names)):
        env = dict(zip(names, combo))
        try:
            if all(eval_pred(p, env, tspec.ctx) for p in tspec.spec.preds):
                return env
        except EvalError:
            continue
    return None


# ---------------------------------------------------------------------------
# numeric seeds
# ---------------------------------------------------------------------------

# expected candidate tables, written out by hand
NAT_SEEDS = {
    1: (0,),
    2: (0, 1),
    3: (0, 1, 2),
    4: (0, 1, 2, 3),
    5: (0, 1, 2, 3, 4),
    6: (0, 1, 2, 3, 4, 5),
}
INT_SEEDS = {
    1: (0,),
    2: (0, 1),
    3: (-1, 0, 1),
    4: (-1, 0, 1, 2),
    5: (-2, -1, 0, 1, 2),
    6: (-2, -1, 0, 1, 2, 3),
}


@pytest.mark.parametrize("fss", range(1, 7))
def test_default_seeds_match_hand_written_tables(fss):
    assert default_nat_seed(fss) == NAT_SEEDS[fss]
    assert default_int_seed(fss) == INT_SEEDS[fss]
    # the one-line closed forms again, independently of the tables
    assert default_nat_seed(fss) == tuple(range(fss))
    lo = -(fss // 2 + fss % 2 - 1)
    assert default_int_seed(fss) == tuple(range(lo, fss // 2 + 1))


@pytest.mark.parametrize("fss", range(1, 7))
def test_literal_free_spec_uses_default_seeds(fss):
    ts = typecheck_one("a : NAT; z : INT | a = a; z = z")
    seed = numeric_seed(ts.spec, SearchConfig(fss=fss))
    assert seed.nat == NAT_SEEDS[fss]
    assert seed.ints == INT_SEEDS[fss]
    assert len(seed.nat) == fss and len(seed.ints) == fss


def test_literals_collected_left_to_right():
    ts = typecheck_one("z : INT | z = 5; z <= -2; 5 <= z + 7")
    seed = numeric_seed(ts.spec, SearchConfig(fss=3))
    assert seed.ints == (5, -2, 7)
    assert seed.nat == (5, 7)


def test_literal_collection_respects_fss_cut():
    ts = typecheck_one("z : INT | z in { 9, 8, 7, 6, 5 }")
    seed = numeric_seed(ts.spec, SearchConfig(fss=2))
    assert seed.ints == (9, 8)


def test_pad_numeric_tops_up_from_defaults():
    ts = typecheck_one("a : NAT | a = 7")
    plain = numeric_seed(ts.spec, SearchConfig(fss=3))
    padded = numeric_seed(ts.spec, SearchConfig(fss=3, pad_numeric=True))
    assert plain.nat == (7,)
    assert padded.nat == (7, 0, 1)


# ---------------------------------------------------------------------------
# candidate construction
# ---------------------------------------------------------------------------


def test_basic_type_gets_fss_fresh_elements():
    assert [b.name for b in basic_elements("TASK", 3)] == ["TASK1", "TASK2", "TASK3"]


def test_power_candidates_capped_by_subset_size():
    ts = typecheck_one("s : P TASK | s = s")
    cfg = SearchConfig(fss=2)
    model = build_model(ts, cfg)
    cands = model.per_var["s"]
    assert all(len(s) <= cfg.fss for s in cands)
    assert SetV(()) in cands


def test_seq_candidates_have_contiguous_domains():
    ts = typecheck_one("q : seq PRIO | q = q")
    model = build_model(ts, SearchConfig(fss=2))
    for q in model.per_var["q"]:
        indices = sorted(p.items[0].value for p in q.elems)
        assert indices == list(range(1, len(indices) + 1))


def test_equality_literal_pins_candidates():
    ts = typecheck_one("a : NAT; b : NAT | a = 7; b <= 1")
    model = build_model(ts, SearchConfig(fss=3))
    assert model.per_var["a"] == [IntV(7)]
    assert len(model.per_var["b"]) > 1


def test_unused_variable_gets_single_default():
    ts = typecheck_one("a : NAT; spare : P TASK | a = 1")
    model = build_model(ts, SearchConfig())
    assert model.per_var["spare"] == [SetV(())]


def test_default_values_by_type():
    ts = typecheck_one("f : PRIO fun NAT | f = f")
    cfg = SearchConfig()
    seed = numeric_seed(ts.spec, cfg)
    declared = dict(ts.spec.decls)["f"]
    v = default_value(declared, ts.ctx, cfg, seed)
    # a total map cannot default to {} - it covers every constant
    assert {p.items[0].name for p in v.elems} == {"low", "mid", "high"}


def test_estimated_size_is_product_of_candidates():
    ts = typecheck_one("a : NAT; p : PRIO | a <= 2")
    model = build_model(ts, SearchConfig(fss=3))
    assert model.estimated_size == len(model.per_var["a"]) * len(model.per_var["p"])


# ---------------------------------------------------------------------------
# search outcomes
# ---------------------------------------------------------------------------


def test_corpus_search_outcomes(search_results):
    for name, result in search_results.items():
        if name in SEARCH_CAPPED:
            assert result.kind == "capped"
        elif name in SEARCH_EXHAUSTED:
            assert result.kind == "exhausted"
        else:
            assert result.kind == "witness", name


def test_witnesses_satisfy_their_specs(typed_specs, search_results):
    # soundness: zeval verifies what the filter loop found
    for name, result in search_results.items():
        if result.found:
            assert check_spec(typed_specs[name], result.env).ok, name


def test_exhausted_search_reports_failing_predicate(typed_specs):
    result = search(typed_specs["NoFit"], SearchConfig())
    assert result.kind == "exhausted"
    assert result.failed_at == 1
    assert result.env is None


def test_cap_is_respected(typed_specs):
    flagship = typed_specs["DetectReferenceEvent18"]
    result = search(flagship, SearchConfig())
    assert result.kind == "capped"
    assert result.explored == SearchConfig().max_elements
    tiny = search(typed_specs["EventWindow"], SearchConfig(max_elements=2))
    assert tiny.kind == "capped" and tiny.explored <= 2


def test_search_is_deterministic(typed_specs):
    ts = typed_specs["RoundRobin"]
    r1, r2 = search(ts, SearchConfig()), search(ts, SearchConfig())
    assert r1.kind == r2.kind == "witness"
    assert r1.explored == r2.explored
    assert all(value_eq(r1.env[k], r2.env[k]) for k in r1.env)


def test_pinned_spec_explores_one_element(typed_specs, search_results):
    assert search_results["DetectReferenceEvent18TC"].explored == 1


# ---------------------------------------------------------------------------
# brute-force agreement
# ---------------------------------------------------------------------------

MINI_SPECS = [
    "a : NAT | a = 2",
    "a, b : NAT | a < b; b <= 2",
    "p : PRIO; a : NAT | p = mid; a in 1 .. 2",
    "s : fset TASK | # s = 2",
    "f : PRIO pfun NAT | mid in dom f; f @ mid = 1",
    "q : seq PRIO | # q = 2; q @ 1 = high",
    "a : NAT | a = 1; a = 2",
    "s : fset NAT | 9 in s; # s = 1; 3 in s",
    "t : TASK x INT | t = (TASK2, 1)",
]


@pytest.mark.parametrize("body", MINI_SPECS)
def test_search_agrees_with_brute_force(body):
    ts = typecheck_one(body)
    cfg = SearchConfig(fss=2)
    expected = brute_force(ts, cfg)
    result = search(ts, cfg)
    if expected is None:
        assert not result.found
    else:
        assert result.found
        assert all(value_eq(result.env[k], expected[k]) for k in expected)


def test_build_candidates_orders_canonically():
    ts = typecheck_one("a : INT | a in { 2, -1, 0 }")
    model = build_model(ts, SearchConfig(fss=3))
    vals = [v.value for v in model.per_var["a"]]
    assert vals == sorted(vals)


def test_truncation_warning_when_space_overflows():
    ts = typecheck_one("r : TASK rel NAT | r = r")
    model = build_model(ts, SearchConfig(fss=3, max_elements=10))
    assert any("candidate explosion" in w for w in model.warnings)
    assert all(len(model.per_var["r"]) <= 10 for _ in model.per_var)
