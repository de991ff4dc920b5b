"""Command line front end: ``mpk check|gen|palette|simulate|selfcheck``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .codegen.java import generate
from .constraints.check import check_container
from .errors import MpkError, SyntaxProblem, UnmappableType
from .kernel.bootstrap import bootstrap
from .kernel.store import Store
from .selfcheck import selfcheck
from .syntax.registry import default_registry, parse
from .toolmodel.diagram import diagram_json
from .toolmodel.script import event_to_json, perform, read_script
from .toolmodel.sync import sync_check
from .toolmodel.tool import open_tool

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_PARSE = 2
EXIT_UNMAPPABLE = 3


class _LoadFailed(Exception):
    pass


def _err(msg: str):
    print(msg, file=sys.stderr)


def _load(store: Store, paths: list[str]) -> list[int]:
    registry = default_registry()
    out = []
    for path in paths:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            _err(f"{path}: {exc.strerror or exc}")
            raise _LoadFailed from None
        try:
            out.append(parse(store, registry, text))
        except SyntaxProblem as exc:
            where = f"{path}:{exc.span[0]}:{exc.span[1]}" if exc.span else path
            _err(f"{where}: {exc.message}")
            raise _LoadFailed from None
        except MpkError as exc:
            _err(f"{path}: {exc}")
            raise _LoadFailed from None
    return out


def cmd_check(args) -> int:
    store = bootstrap()
    try:
        pids = _load(store, args.files)
    except _LoadFailed:
        return EXIT_PARSE
    reports = [check_container(store, p) for p in pids]
    if args.format == "json":
        data = [r.to_json() for r in reports]
        print(json.dumps(data[0] if len(data) == 1 else data, indent=2, ensure_ascii=False))
    else:
        for path, r in zip(args.files, reports):
            if len(reports) > 1:
                print(f"{path}:")
            print(r.to_text())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def cmd_gen(args) -> int:
    store = bootstrap()
    try:
        pids = _load(store, args.files)
    except _LoadFailed:
        return EXIT_PARSE
    if args.strict:
        failing = [r for r in (check_container(store, p) for p in pids) if not r.passed]
        if failing:
            for r in failing:
                print(r.to_text())
            return EXIT_FAILED
    try:
        manifest = generate(store, pids, Path(args.out))
    except UnmappableType as exc:
        _err(f"error: {exc}")
        return EXIT_UNMAPPABLE
    except MpkError as exc:
        _err(f"error: {exc}")
        return EXIT_FAILED
    print(json.dumps(manifest, indent=2))
    return EXIT_OK


def cmd_palette(args) -> int:
    store = bootstrap()
    try:
        pid, = _load(store, [args.file])
    except _LoadFailed:
        return EXIT_PARSE
    tool = open_tool(store, pid)
    print(json.dumps({g.name: [b.name for b in g.buttons] for g in tool.palette}))
    return EXIT_OK


def cmd_simulate(args) -> int:
    store = bootstrap()
    try:
        pid, = _load(store, [args.file])
    except _LoadFailed:
        return EXIT_PARSE
    tool = open_tool(store, pid)
    try:
        with open(args.script, encoding="utf-8") as fh:
            events = list(read_script(fh))
    except OSError as exc:
        _err(f"{args.script}: {exc.strerror or exc}")
        return EXIT_PARSE
    except MpkError as exc:
        _err(f"{args.script}: {exc}")
        return EXIT_PARSE
    for i, ev in enumerate(events, 1):
        try:
            perform(tool, ev)
        except MpkError as exc:
            _err(f"{args.script}: event {i} ({json.dumps(event_to_json(ev))}): {exc}")
            return EXIT_FAILED
        if args.assert_sync:
            violations = sync_check(tool)
            print(json.dumps({"step": i, "violations": [v.to_json() for v in violations]}))
            if violations:
                return EXIT_FAILED
    print(json.dumps(diagram_json(tool.diagram), indent=2))
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    findings = selfcheck()
    for f in findings:
        print(f"✓ {f.name}" if f.passed else f"✗ {f.name}: {f.detail}")
    return EXIT_OK if all(f.passed for f in findings) else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mpk", description="Meta-package modelling workbench.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check model files against their constraints")
    p.add_argument("files", nargs="+", metavar="FILE")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("gen", help="generate Java entity classes")
    p.add_argument("files", nargs="+", metavar="FILE")
    p.add_argument("--out", required=True, metavar="DIR")
    p.add_argument("--strict", action="store_true",
                   help="refuse to generate when any constraint fails")
    p.set_defaults(run=cmd_gen)

    p = sub.add_parser("palette", help="print the tool palette for a model file")
    p.add_argument("file", metavar="FILE")
    p.set_defaults(run=cmd_palette)

    p = sub.add_parser("simulate", help="replay a JSON-lines event script against a tool")
    p.add_argument("file", metavar="FILE")
    p.add_argument("script", metavar="SCRIPT")
    p.add_argument("--assert-sync", action="store_true",
                   help="check synchronization after every event")
    p.set_defaults(run=cmd_simulate)

    p = sub.add_parser("selfcheck", help="verify the bootstrapped core")
    p.set_defaults(run=cmd_selfcheck)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.run(args)


if __name__ == "__main__":
    sys.exit(main())
