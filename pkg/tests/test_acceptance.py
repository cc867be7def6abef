"""Acceptance suite: one test per advertised guarantee.

Each test exercises a whole behavior end to end, with its time budget
asserted where the guarantee includes one.
"""

import csv
import itertools
import json
import random
import time

from conftest import CORPUS, CORPUS_FILES, GOLDEN

from ztc.cli import main
from ztc.fms import SearchConfig, build_model, numeric_seed, search
from ztc.smt_emit import DIALECTS, emit_script
from ztc.witness import (
    interpret_script,
    parse_output,
    reconstruct,
    synthesize_model,
    translate,
)
from ztc.zcore import (
    BasicV,
    Card,
    Diff,
    EnumV,
    Inter,
    IntV,
    SetV,
    SubsetEq,
    TupleV,
    TypeContext,
    Union,
    Var,
    value_eq,
)
from ztc.zeval import EvalError, check_spec, eval_expr, eval_pred
from ztc.zparse import parse_file, parse_text, resolve_includes
from ztc.ztype import satisfies_carrier, typecheck

PRELUDE = "free PRIO ::= low | mid | high;\n"


def typecheck_one(body: str):
    src = parse_text(f"{PRELUDE}spec T {{ {body} }}")
    return typecheck(resolve_includes(src, src.spec_named("T")), src.ctx)


# -- 1: the bundled reference fixture verifies, fast ---------------------------


def test_reference_event_fixture_verifies_quickly():
    started = time.perf_counter()
    src = parse_file(str(CORPUS / "launch_vehicle.ztc"))
    ts = typecheck(
        resolve_includes(src, src.spec_named("DetectReferenceEvent18")), src.ctx
    )
    assert len(ts.spec.decls) == 8 and len(ts.spec.preds) == 10
    tc = typecheck(
        resolve_includes(src, src.spec_named("DetectReferenceEvent18TC")), src.ctx
    )
    result = search(tc, SearchConfig())
    assert result.found and result.explored == 1
    assert check_spec(tc, result.env).ok
    assert check_spec(ts, result.env).ok
    assert time.perf_counter() - started < 1.0


# -- 2: literal-free numeric candidate pools match their closed forms ----------


def test_numeric_seed_sizes_match_closed_forms():
    ts = typecheck_one("a : NAT | ")
    for fss in range(1, 7):
        seed = numeric_seed(ts.spec, SearchConfig(fss=fss))
        assert seed.nat == tuple(range(fss))
        assert seed.ints == tuple(range(-(fss // 2 + fss % 2 - 1), fss // 2 + 1))
        assert len(seed.nat) == len(seed.ints) == fss


# -- 3: incremental search equals exhaustive enumeration ----------------------


def random_body(rng: random.Random) -> str:
    names = ["a", "b", "c"][: rng.randint(1, 3)]
    kinds = {n: rng.choice(("NAT", "PRIO", "PFUN")) for n in names}
    spell = {"NAT": "NAT", "PRIO": "PRIO", "PFUN": "PRIO pfun NAT"}
    decls = "; ".join(f"{n} : {spell[kinds[n]]}" for n in names)
    atoms = []
    for _ in range(rng.randint(1, 3)):
        n = rng.choice(names)
        k = rng.randint(0, 2)
        c = rng.choice(("low", "mid", "high"))
        if kinds[n] == "NAT":
            pool = [f"{n} = {k}", f"{n} < {k}", f"{k} <= {n}", f"{n} /= {k}"]
            peers = [m for m in names if m != n and kinds[m] == "NAT"]
            if peers:
                pool += [f"{n} < {rng.choice(peers)}", f"{n} = {rng.choice(peers)}"]
        elif kinds[n] == "PRIO":
            pool = [f"{n} = {c}", f"{n} /= {c}"]
        else:
            pool = [f"{c} in dom {n}", f"{c} |-> {k} in {n}", f"{n} @ {c} = {k}"]
        atoms.append(rng.choice(pool))
    return f"{decls} | " + "; ".join(atoms)


def witness_exists(tspec, model) -> bool:
    names = [n for n, _ in tspec.spec.decls]
    for combo in itertools.product(*(model.per_var[n] for n in names)):
        env = dict(zip(names, combo))
        try:
            if all(eval_pred(p, env, tspec.ctx) for p in tspec.spec.preds):
                return True
        except EvalError:
            continue
    return False


def test_search_matches_brute_force_on_random_specs():
    started = time.perf_counter()
    rng = random.Random(1808)
    cfg = SearchConfig(fss=2)
    accepted = 0
    while accepted < 200:
        body = random_body(rng)
        ts = typecheck_one(body)
        model = build_model(ts, cfg)
        if model.estimated_size > 512:
            continue
        accepted += 1
        result = search(ts, cfg)
        assert result.found == witness_exists(ts, model), body
        if result.found:
            assert check_spec(ts, result.env).ok, body
    assert time.perf_counter() - started < 30.0


# -- 4: emitted scripts agree with the evaluator ------------------------------


def perturbations(v, ctx):
    if isinstance(v, IntV):
        yield IntV(v.value + 1)
        yield IntV(v.value - 1)
    elif isinstance(v, EnumV):
        owner = ctx.constant_owner(v.name)
        for i, c in enumerate(owner.constants):
            if c != v.name:
                yield EnumV(c, i)
    elif isinstance(v, BasicV):
        stem = v.name.rstrip("0123456789")
        for i in (1, 2, 3):
            if f"{stem}{i}" != v.name:
                yield BasicV(f"{stem}{i}")
    elif isinstance(v, TupleV):
        left, right = v.items
        for m in perturbations(left, ctx):
            yield TupleV((m, right))
        for m in perturbations(right, ctx):
            yield TupleV((left, m))
    elif isinstance(v, SetV):
        for i, e in enumerate(v.elems):
            rest = v.elems[:i] + v.elems[i + 1 :]
            yield SetV(rest)
            for m in perturbations(e, ctx):
                yield SetV(rest + (m,))


def failing_mutation(ts, env, model):
    """A carrier-respecting one-variable change that falsifies an atom."""
    for var, declared in ts.spec.decls:
        pool = [c for c in model.per_var[var] if not value_eq(c, env[var])]
        for cand in itertools.chain(pool, perturbations(env[var], ts.ctx)):
            if satisfies_carrier(cand, declared, ts.ctx) is not None:
                continue
            mutated = {**env, var: cand}
            verdict = check_spec(ts, mutated)
            if verdict.status == "failed" and verdict.carrier is None:
                return mutated
    return None


def test_emitted_scripts_agree_with_the_evaluator(typed_specs, witnesses):
    for name, env in sorted(witnesses.items()):
        ts = typed_specs[name]
        mutated = failing_mutation(ts, env, build_model(ts, SearchConfig()))
        assert mutated is not None, name
        for dialect in DIALECTS:
            for variant in (False, True):
                script = emit_script(ts, dialect, variant)
                assert all(interpret_script(script, translate(env, script))), (
                    name,
                    dialect,
                    variant,
                )
                assert not all(interpret_script(script, translate(mutated, script))), (
                    name,
                    dialect,
                    variant,
                )


# -- 5: emitted scripts are frozen byte for byte ------------------------------


def test_emitted_scripts_match_frozen_goldens(typed_specs):
    layout = (
        ("yices", "yices", False),
        ("cvc3", "cvc3", False),
        ("yices_variant", "yices", True),
        ("cvc3_variant", "cvc3", True),
    )
    checked = 0
    for directory, dialect, variant in layout:
        for path in sorted((GOLDEN / directory).iterdir()):
            name = path.name.split(".")[0]
            script = emit_script(typed_specs[name], dialect, variant)
            assert script.text == path.read_text(), path
            checked += 1
    assert checked == 14


# -- 6: model output round-trips back to the original witness -----------------


def test_solver_round_trip_recovers_witnesses(typed_specs, witnesses):
    recovered = 0
    for name, env in sorted(witnesses.items()):
        ts = typed_specs[name]
        for dialect in DIALECTS:
            script = emit_script(ts, dialect)
            output = parse_output(synthesize_model(script, env), dialect)
            result = reconstruct(script, output)
            assert result.ok, (name, dialect)
            assert all(value_eq(result.env[v], env[v]) for v, _ in ts.spec.decls)
        recovered += 1
    assert recovered >= 20


# -- 7: repeated runs produce identical reports and artifacts ------------------


def scrubbed_payload(text: str) -> dict:
    data = json.loads(text)
    data["totals"]["elapsed_ms"] = 0.0
    for row in data["specs"]:
        row["elapsed_ms"] = 0.0
    return data


def scrubbed_csv(path) -> list[list[str]]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    for row in rows:
        row[5] = ""
    return rows


def test_repeated_runs_are_deterministic(tmp_path, capsys):
    runs = []
    for tag in ("one", "two"):
        run = {}
        for filename in CORPUS_FILES:
            stem = filename.split(".")[0]
            report_dir = tmp_path / tag / stem
            main(
                [
                    "solve",
                    str(CORPUS / filename),
                    "--json",
                    "--report-dir",
                    str(report_dir),
                ]
            )
            emit_dir = tmp_path / tag / f"{stem}-scripts"
            for dialect in DIALECTS:
                main(
                    [
                        "emit",
                        str(CORPUS / filename),
                        "--dialect",
                        dialect,
                        "--out",
                        str(emit_dir),
                    ]
                )
            run[stem] = {
                "payload": scrubbed_payload(capsys.readouterr().out.split("wrote")[0]),
                "csv": scrubbed_csv(report_dir / "run.csv"),
                "json": scrubbed_payload((report_dir / "run.json").read_text()),
                "png": (report_dir / "run.png").read_bytes(),
                "scripts": {
                    p.name: p.read_bytes() for p in sorted(emit_dir.iterdir())
                },
            }
        runs.append(run)
    assert runs[0] == runs[1]


# -- 8: the set algebra obeys the inclusion and cardinality laws ---------------


def test_set_algebra_laws_hold_on_random_instances():
    started = time.perf_counter()
    rng = random.Random(99)
    ctx = TypeContext()
    a, b = Var("A"), Var("B")
    for _ in range(1000):
        env = {
            name: SetV(
                tuple(IntV(rng.randint(-6, 6)) for _ in range(rng.randint(0, 8)))
            )
            for name in ("A", "B")
        }
        assert eval_pred(SubsetEq(Inter(a, b), a), env, ctx)
        assert eval_pred(SubsetEq(a, Union(a, b)), env, ctx)
        cards = {
            e: eval_expr(Card(e), env, ctx).value
            for e in (a, b, Union(a, b), Inter(a, b))
        }
        assert cards[Union(a, b)] == cards[a] + cards[b] - cards[Inter(a, b)]
        assert eval_expr(Inter(Diff(a, b), b), env, ctx) == SetV(())
    assert time.perf_counter() - started < 10.0
