"""Command line interface.

Subcommands:

- ``check``       parse and type-check specifications
- ``solve``       search finite candidate spaces for witnesses
- ``emit``        write solver scripts in either dialect
- ``reconstruct`` turn saved solver output back into a checked witness
- ``run-solver``  emit, invoke an external solver binary, reconstruct

Exit codes: 0 success, 1 negative outcome (type errors under ``check``,
missing witness, unsat or unverified model), 2 invalid input or usage.
"""

from __future__ import annotations

import argparse
import json
import os
import shlex
import subprocess
import sys
import tempfile
import time
from pathlib import Path

from .fms import SearchConfig, search
from .smt_emit import DIALECTS, EmitError, SmtScript, emit_script, script_filename
from .witness import (
    PARSE_FAILURE,
    UNSAT,
    Witness,
    parse_output,
    reconstruct,
)
from .zcore import ZtcError, format_value
from .zeval import check_spec
from .zparse import ParseError, SourceFile, parse_file, resolve_includes
from .ztype import TypedSpec, ZTypeError, typecheck


class _CliError(Exception):
    def __init__(self, message: str, code: int = 2) -> None:
        super().__init__(message)
        self.code = code


def _load(path: str) -> SourceFile:
    try:
        return parse_file(path)
    except OSError as err:
        raise _CliError(f"cannot read {path}: {err.strerror}")
    except ParseError as err:
        raise _CliError(str(err))


def _select(source: SourceFile, name: str | None) -> list[str]:
    if name is None:
        return source.spec_names()
    if name not in source.spec_names():
        raise _CliError(f"no spec named {name} in the file")
    return [name]


def _typed(source: SourceFile, name: str) -> TypedSpec:
    flat = resolve_includes(source, source.spec_named(name))
    return typecheck(flat, source.ctx)


def _print_bindings(tspec: TypedSpec, env, out) -> None:
    for var, _ in tspec.spec.decls:
        print(f"  {var} = {format_value(env[var])}", file=out)


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------


def _cmd_check(args) -> int:
    try:
        source = _load(args.file)
        names = _select(source, args.spec)
    except _CliError as err:
        if args.json:
            print(json.dumps({"error": str(err)}, sort_keys=True))
        else:
            print(f"error: {err}", file=sys.stderr)
        return err.code
    rows = []
    failed = False
    for name in names:
        try:
            tspec = _typed(source, name)
            rows.append(
                {
                    "spec": name,
                    "ok": True,
                    "variables": len(tspec.spec.decls),
                    "atoms": len(tspec.spec.preds),
                    "warnings": list(tspec.warnings),
                }
            )
        except ZTypeError as err:
            failed = True
            rows.append({"spec": name, "ok": False, "error": str(err)})
    if args.json:
        print(json.dumps({"specs": rows}, indent=2, sort_keys=True))
    else:
        for row in rows:
            if row["ok"]:
                line = f"ok   {row['spec']} (variables={row['variables']}, atoms={row['atoms']})"
                print(line)
                for w in row["warnings"]:
                    print(f"     warning: {w}")
            else:
                print(f"fail {row['spec']}: {row['error']}")
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------


def _cmd_solve(args) -> int:
    from .report import RunReport, RunRow, render_table, write_report_files

    source = _load(args.file)
    names = _select(source, args.spec)
    config = SearchConfig(
        fss=args.fss, max_elements=args.max, pad_numeric=args.pad_numeric
    )
    report = RunReport(fss=config.fss, max_elements=config.max_elements)
    for name in names:
        started = time.perf_counter()
        try:
            tspec = _typed(source, name)
        except ZTypeError as err:
            raise _CliError(str(err))
        result = search(tspec, config)
        elapsed = (time.perf_counter() - started) * 1000.0
        bindings = None
        detail = ""
        if result.found:
            bindings = {
                var: format_value(result.env[var]) for var, _ in tspec.spec.decls
            }
        elif result.failed_at is not None:
            detail = f"no candidate satisfies atom {result.failed_at}"
        warnings = result.model.warnings if result.model is not None else ()
        report.add(
            RunRow(
                spec=name,
                status=result.kind,
                explored=result.explored,
                variables=len(tspec.spec.decls),
                atoms=len(tspec.spec.preds),
                elapsed_ms=elapsed,
                bindings=bindings,
                warnings=warnings,
                detail=detail,
            )
        )
    if args.json:
        print(json.dumps(report.to_json_dict(), indent=2, sort_keys=True))
    else:
        print(render_table(report))
        for row in report.rows:
            if row.bindings:
                print(f"{row.spec}:")
                for var, value in row.bindings.items():
                    print(f"  {var} = {value}")
            elif row.detail:
                print(f"{row.spec}: {row.detail}")
            for w in row.warnings:
                print(f"{row.spec}: warning: {w}")
    if args.report_dir:
        paths = write_report_files(report, args.report_dir)
        if not args.json:
            for kind in ("csv", "json", "figure"):
                print(f"wrote {paths[kind]}")
    return 0 if report.all_witnessed else 1


# ---------------------------------------------------------------------------
# emit
# ---------------------------------------------------------------------------


def _emit_selected(args) -> list[tuple[TypedSpec, SmtScript]]:
    source = _load(args.file)
    names = _select(source, args.spec)
    out = []
    for name in names:
        try:
            tspec = _typed(source, name)
        except ZTypeError as err:
            raise _CliError(str(err))
        try:
            out.append((tspec, emit_script(tspec, args.dialect, args.variant)))
        except EmitError as err:
            raise _CliError(str(err), code=1)
    return out


def _cmd_emit(args) -> int:
    scripts = _emit_selected(args)
    if args.out:
        directory = Path(args.out)
        directory.mkdir(parents=True, exist_ok=True)
        for _, script in scripts:
            path = directory / script_filename(script.spec_name, script.dialect)
            path.write_text(script.text)
            print(f"wrote {path}")
    else:
        for i, (_, script) in enumerate(scripts):
            if i:
                print()
            print(script.text, end="")
    return 0


# ---------------------------------------------------------------------------
# reconstruct / run-solver
# ---------------------------------------------------------------------------


def _finish_from_output(tspec: TypedSpec, script: SmtScript, text: str, args) -> int:
    output = parse_output(text, script.dialect)
    payload: dict = {"spec": tspec.name, "solver_status": output.status}
    code = 1
    if output.status == PARSE_FAILURE:
        payload["error"] = output.message
    elif output.status == UNSAT:
        pass
    else:
        result = reconstruct(script, output)
        if not result.ok:
            payload["errors"] = [str(e) for e in result.errors]
        else:
            verdict = check_spec(tspec, result.env)
            witness = Witness(
                tspec.name, result.env, origin="solver-potential", verified=verdict.ok
            )
            payload.update(witness.to_json_dict())
            payload["bindings"] = {
                var: format_value(result.env[var]) for var, _ in tspec.spec.decls
            }
            if verdict.ok:
                code = 0
                if args.test_case:
                    payload["test_case"] = witness.as_test_case(tspec)
            else:
                payload["verdict"] = verdict.describe()
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
        return code
    print(f"solver: {payload['solver_status']}")
    if "error" in payload:
        print(f"error: {payload['error']}")
    for e in payload.get("errors", ()):
        print(f"error: {e}")
    if "verified" in payload:
        if payload["verified"]:
            print(f"witness for {tspec.name}:")
            for var, value in payload["bindings"].items():
                print(f"  {var} = {value}")
            if "test_case" in payload:
                print(payload["test_case"], end="")
        else:
            print(f"model rejected: {payload['verdict']}")
    return code


def _single_typed_script(args) -> tuple[TypedSpec, SmtScript]:
    source = _load(args.file)
    if args.spec is None:
        names = source.spec_names()
        if len(names) != 1:
            raise _CliError("the file has several specs; pick one with --spec")
        args.spec = names[0]
    names = _select(source, args.spec)
    try:
        tspec = _typed(source, names[0])
        return tspec, emit_script(tspec, args.dialect, args.variant)
    except ZTypeError as err:
        raise _CliError(str(err))
    except EmitError as err:
        raise _CliError(str(err), code=1)


def _cmd_reconstruct(args) -> int:
    tspec, script = _single_typed_script(args)
    if args.model == "-":
        text = sys.stdin.read()
    else:
        try:
            text = Path(args.model).read_text()
        except OSError as err:
            raise _CliError(f"cannot read {args.model}: {err.strerror}")
    return _finish_from_output(tspec, script, text, args)


def _cmd_run_solver(args) -> int:
    solver = args.solver_bin or os.environ.get("ZTC_SOLVER_BIN")
    if not solver:
        raise _CliError("no solver given; use --solver-bin or set ZTC_SOLVER_BIN")
    tspec, script = _single_typed_script(args)
    suffix = "." + script_filename("x", script.dialect).rsplit(".", 1)[1]
    with tempfile.NamedTemporaryFile(
        "w", suffix=suffix, prefix=f"{tspec.name}.", delete=False
    ) as fh:
        fh.write(script.text)
        script_path = fh.name
    try:
        proc = subprocess.run(
            [*shlex.split(solver), script_path],
            capture_output=True,
            text=True,
            timeout=args.timeout,
        )
    except FileNotFoundError:
        raise _CliError(f"solver binary not found: {solver}")
    except subprocess.TimeoutExpired:
        print(f"solver timed out after {args.timeout}s", file=sys.stderr)
        return 1
    finally:
        if args.keep_script:
            print(f"script kept at {script_path}", file=sys.stderr)
        else:
            os.unlink(script_path)
    return _finish_from_output(tspec, script, proc.stdout, args)


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ztc",
        description="Type-check Z test specifications, search witnesses, emit solver scripts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="parse and type-check")
    check.add_argument("file")
    check.add_argument("--spec", help="only this spec")
    check.add_argument("--json", action="store_true")
    check.set_defaults(func=_cmd_check)

    solve = sub.add_parser("solve", help="finite witness search")
    solve.add_argument("file")
    solve.add_argument("--spec", help="only this spec")
    solve.add_argument("--fss", type=int, default=3, help="finite sort size (default 3)")
    solve.add_argument(
        "--max", type=int, default=10_000, help="explored-binding cap (default 10000)"
    )
    solve.add_argument(
        "--pad-numeric",
        action="store_true",
        help="pad literal-derived numeric candidates up to fss values",
    )
    solve.add_argument("--json", action="store_true")
    solve.add_argument("--report-dir", help="write run.csv, run.json and run.png here")
    solve.set_defaults(func=_cmd_solve)

    emit = sub.add_parser("emit", help="write solver scripts")
    emit.add_argument("file")
    emit.add_argument("--spec", help="only this spec")
    emit.add_argument("--dialect", choices=DIALECTS, required=True)
    emit.add_argument(
        "--variant",
        action="store_true",
        help="declare given types as small constant datatypes",
    )
    emit.add_argument("--out", help="directory for script files (default: stdout)")
    emit.set_defaults(func=_cmd_emit)

    rec = sub.add_parser("reconstruct", help="rebuild a witness from solver output")
    rec.add_argument("file")
    rec.add_argument("model", help="solver output file, or - for stdin")
    rec.add_argument("--spec", help="spec the model belongs to")
    rec.add_argument("--dialect", choices=DIALECTS, required=True)
    rec.add_argument("--variant", action="store_true")
    rec.add_argument("--json", action="store_true")
    rec.add_argument(
        "--test-case",
        action="store_true",
        help="also print the witness as a derived spec block",
    )
    rec.set_defaults(func=_cmd_reconstruct)

    run = sub.add_parser("run-solver", help="emit, run a solver, reconstruct")
    run.add_argument("file")
    run.add_argument("--spec", help="spec to run")
    run.add_argument("--dialect", choices=DIALECTS, required=True)
    run.add_argument("--variant", action="store_true")
    run.add_argument(
        "--solver-bin", help="solver command line (default: $ZTC_SOLVER_BIN)"
    )
    run.add_argument("--timeout", type=float, default=60.0, help="seconds (default 60)")
    run.add_argument("--keep-script", action="store_true")
    run.add_argument("--json", action="store_true")
    run.add_argument("--test-case", action="store_true")
    run.set_defaults(func=_cmd_run_solver)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _CliError as err:
        print(f"error: {err}", file=sys.stderr)
        return err.code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
