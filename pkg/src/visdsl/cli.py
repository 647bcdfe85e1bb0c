"""Command-line entry point: check, compile, fmt, probe, session, score.

Exit codes: 0 success, 1 diagnostics or parse errors, 2 usage and I/O
errors.  Machine output (JSON, IR bytes, formatted source) goes to
stdout; human messages go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .ast import Program
from .emit import EmitOptions, emit_html, emit_ir_json
from .lexer import ParseError
from .metrics import MetricsError, result_from_dict, score_table
from .parser import detect_syntax, parse_brace, parse_indent
from .printer import print_brace, print_indent
from .probe import ProbeError, probe_bytes, probe_file
from .realize import realize
from .session import SessionError, replay_script
from .verify import verify

EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_USAGE = 2


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def _parse_source(text: str, syntax: str) -> Program:
    if syntax == "auto":
        syntax = detect_syntax(text)
    if syntax == "brace":
        return parse_brace(text)
    return parse_indent(text)


def _probe_sources(program: Program, data_dir: str) -> dict:
    metas = {}
    for name, decl in program.data.items():
        if decl.ctor == "func" or decl.path is None:
            continue
        fmt = decl.args.get("format")
        path = os.path.join(data_dir, decl.path)
        with open(path, "rb") as f:
            payload = f.read()
        if not isinstance(fmt, str):
            from .probe import format_for_name

            fmt = format_for_name(decl.path)
        metas[name] = probe_bytes(payload, fmt)
    return metas


def _print_parse_error(exc: ParseError, fmt: str) -> None:
    if fmt == "json":
        doc = {
            "code": "parse-error",
            "message": exc.message,
            "path": f"{exc.line}:{exc.col}",
        }
        print(json.dumps([doc], indent=2))
    else:
        print(f"parse error at {exc.line}:{exc.col}: {exc.message}", file=sys.stderr)


def _print_diagnostics(diags, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps([d.to_dict() for d in diags], indent=2))
    else:
        for d in diags:
            print(f"error[{d.code}] {d.path}: {d.message}", file=sys.stderr)


def _where_notes(program: Program) -> None:
    for view in program.views:
        for i, layer in enumerate(view.layers):
            if layer.where is not None:
                print(
                    f"note: view '{view.id}' layer #{i} has a 'where' clause; "
                    "filters are accepted but not evaluated",
                    file=sys.stderr,
                )


def cmd_check(args) -> int:
    text = _read_text(args.input)
    try:
        program = _parse_source(text, args.syntax)
    except ParseError as exc:
        _print_parse_error(exc, args.format)
        return EXIT_DIAGNOSTICS
    data_dir = args.data_dir or os.path.dirname(os.path.abspath(args.input))
    metas = _probe_sources(program, data_dir)
    _where_notes(program)
    spec, diags = verify(program, metas)
    if diags:
        _print_diagnostics(diags, args.format)
        return EXIT_DIAGNOSTICS
    if args.format == "json":
        print(json.dumps([]))
    else:
        print("ok", file=sys.stderr)
    return EXIT_OK


def cmd_compile(args) -> int:
    text = _read_text(args.input)
    try:
        program = _parse_source(text, args.syntax)
    except ParseError as exc:
        _print_parse_error(exc, args.format)
        return EXIT_DIAGNOSTICS
    data_dir = args.data_dir or os.path.dirname(os.path.abspath(args.input))
    metas = _probe_sources(program, data_dir)
    spec, diags = verify(program, metas)
    if diags:
        _print_diagnostics(diags, args.format)
        return EXIT_DIAGNOSTICS
    ir = realize(spec, metas)
    ir_bytes = emit_ir_json(ir)
    if args.ir_only:
        sys.stdout.buffer.write(ir_bytes)
        return EXIT_OK
    if args.ir_out:
        with open(args.ir_out, "wb") as f:
            f.write(ir_bytes)
    if args.output:
        data = {}
        if args.embed_data:
            for name, decl in program.data.items():
                if decl.ctor == "func" or decl.path is None:
                    continue
                with open(os.path.join(data_dir, decl.path), "rb") as f:
                    data[name] = f.read()
        runtime_js = None
        if args.runtime:
            runtime_js = _read_text(args.runtime)
        bundle = emit_html(
            ir,
            data,
            EmitOptions(
                embed_data=args.embed_data,
                title=os.path.basename(args.input),
                runtime_js=runtime_js,
            ),
        )
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(bundle.html)
    elif not args.ir_out:
        print("compile: provide -o/--output, --ir-out, or --ir-only", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def cmd_fmt(args) -> int:
    text = _read_text(args.input)
    try:
        detected = detect_syntax(text)
        program = _parse_source(text, "auto")
    except ParseError as exc:
        _print_parse_error(exc, "text")
        return EXIT_DIAGNOSTICS
    target = args.syntax if args.syntax != "auto" else detected
    out = print_brace(program) if target == "brace" else print_indent(program)
    if args.write:
        with open(args.input, "w", encoding="utf-8") as f:
            f.write(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK


def cmd_probe(args) -> int:
    try:
        meta = probe_file(args.input)
    except ProbeError as exc:
        print(json.dumps({"error": exc.code, "message": str(exc)}))
        return EXIT_DIAGNOSTICS
    print(json.dumps(meta.to_dict(), indent=2))
    return EXIT_OK


def cmd_session_replay(args) -> int:
    script = json.loads(_read_text(args.script))
    base_dir = os.path.dirname(os.path.abspath(args.script))
    try:
        session, program, records = replay_script(script, base_dir)
    except (SessionError, ProbeError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_DIAGNOSTICS
    for record in records:
        if not record.result.passed:
            print(
                f"[{record.node}] clarification: {record.result.clarification}",
                file=sys.stderr,
            )
    out = print_brace(program) if args.syntax == "brace" else print_indent(program)
    sys.stdout.write(out)
    return EXIT_OK


def cmd_score(args) -> int:
    doc = json.loads(_read_text(args.input))
    if isinstance(doc, dict):
        doc = [doc]
    try:
        results = [result_from_dict(entry) for entry in doc]
        table = score_table(results)
    except MetricsError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_DIAGNOSTICS
    if args.format == "json":
        print(json.dumps(table, indent=2))
    else:
        header = f"{'category':<10}{'n':>4}{'VMPC':>8}{'X':>7}" + "".join(
            f"{c.upper():>7}" for c in ("v", "m", "e", "h", "l")
        )
        print(header)
        for cat, row in table.items():
            crits = row["criteria"]
            print(
                f"{cat:<10}{row['prompts']:>4}{row['mean_vmpc']:>8.3f}"
                f"{row['mean_x']:>7.3f}"
                + "".join(f"{crits[c]:>7.3f}" for c in ("v", "m", "e", "h", "l"))
            )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="visdsl",
        description="Deterministic visualization DSL compiler toolchain",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p) -> None:
        p.add_argument("--syntax", choices=("auto", "brace", "indent"), default="auto")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--data-dir", default=None)

    p_check = sub.add_parser("check", help="verify a program, print diagnostics")
    p_check.add_argument("input")
    add_common(p_check)
    p_check.set_defaults(func=cmd_check)

    p_compile = sub.add_parser("compile", help="compile to HTML bundle and/or IR")
    p_compile.add_argument("input")
    p_compile.add_argument("-o", "--output", default=None)
    p_compile.add_argument("--ir-out", default=None)
    p_compile.add_argument("--ir-only", action="store_true")
    p_compile.add_argument("--embed-data", dest="embed_data", action="store_true", default=True)
    p_compile.add_argument("--no-embed", dest="embed_data", action="store_false")
    p_compile.add_argument("--runtime", default=None, help="runtime JS to inline")
    add_common(p_compile)
    p_compile.set_defaults(func=cmd_compile)

    p_fmt = sub.add_parser("fmt", help="reprint a program in either syntax")
    p_fmt.add_argument("input")
    p_fmt.add_argument("--syntax", choices=("auto", "brace", "indent"), default="auto")
    p_fmt.add_argument("--write", action="store_true", help="rewrite the file in place")
    p_fmt.set_defaults(func=cmd_fmt)

    p_probe = sub.add_parser("probe", help="print dataset metadata as JSON")
    p_probe.add_argument("input")
    p_probe.set_defaults(func=cmd_probe)

    p_session = sub.add_parser("session", help="session pipeline commands")
    session_sub = p_session.add_subparsers(dest="session_command", required=True)
    p_replay = session_sub.add_parser("replay", help="replay a scripted session")
    p_replay.add_argument("script")
    p_replay.add_argument(
        "--syntax", choices=("brace", "indent"), default="indent"
    )
    p_replay.set_defaults(func=cmd_session_replay)

    p_score = sub.add_parser("score", help="score grading records")
    p_score.add_argument("input")
    p_score.add_argument("--format", choices=("json", "text"), default="text")
    p_score.set_defaults(func=cmd_score)

    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"{parser.prog}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ProbeError as exc:
        print(f"{parser.prog}: {exc}", file=sys.stderr)
        return EXIT_DIAGNOSTICS


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
