"""Command line front end: ``sysmod check|run|dump``.

Exit status is 0 on success, 1 when the model or script produced
diagnostics or store violations, and 2 for usage errors (bad arguments,
unreadable files).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .classes import World
from .datastore import check_store
from .errors import SysModError
from .modelio.interp import Interpreter, ModelError, ScriptError, load_model
from .modelio.snapshot import dump_snapshot, snapshot_dict
from .modelio.syntax import ModelSyntaxError, parse_script
from .universe import Loc

OK, DIAGNOSTICS, USAGE = 0, 1, 2


class _Usage(Exception):
    pass


def _read(path: str) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as e:
        raise _Usage(f"cannot read {path}: {e.strerror}") from None


def _diag(path: str, e: SysModError) -> str:
    if isinstance(e, ModelSyntaxError):
        return f"{path}:{e.line}:{e.col}: syntax error: {e}"
    if isinstance(e, ModelError):
        return f"{path}:{e.line}: {type(e.cause).__name__}: {e.cause}"
    if isinstance(e, ScriptError):
        return f"{path}:{e.line}: statement {e.index + 1}: {type(e.cause).__name__}: {e.cause}"
    return f"{path}: {type(e).__name__}: {e}"


def capsule_warnings(world: World) -> list[str]:
    """Mutable attributes whose content is itself a location."""
    out = []
    for cname in world.class_order:
        info = world.class_info(cname)
        for a in info.attrs:
            if a.mutable and isinstance(a.type, Loc) and info.origins[a.name] == cname:
                out.append(f"warning: {cname}.{a.name} stores a location (loc Loc ...); this exposes another object's state")
    return out


def cmd_check(args) -> int:
    world, store = load_model(_read(args.model), strict=args.strict_inheritance)
    for w in capsule_warnings(world):
        print(w)
    violations = check_store(world, store)
    for v in violations:
        print(f"violation: {v}")
    print(
        f"{args.model}: {len(world.class_order)} classes, {len(world.statics)} statics, "
        f"{len(world.assoc_order)} associations, {len(violations)} violations"
    )
    return DIAGNOSTICS if violations else OK


def _execute(args) -> tuple[Interpreter, Optional[ScriptError]]:
    world, store = load_model(_read(args.model), strict=args.strict_inheritance)
    interp = Interpreter(world, store)
    script = _read(args.script)
    try:
        interp.run(parse_script(script))
    except ModelSyntaxError as e:
        raise _ScriptSyntax(e) from None
    except ScriptError as e:
        return interp, e
    return interp, None


class _ScriptSyntax(Exception):
    def __init__(self, error: ModelSyntaxError):
        self.error = error


def cmd_run(args) -> int:
    interp, failure = _execute(args)
    for line in interp.transcript:
        print(line)
    if failure is not None:
        print(_diag(args.script, failure), file=sys.stderr)
    if args.json:
        doc = {
            "transcript": interp.transcript,
            "error": None if failure is None else _diag(args.script, failure),
            "violations": [str(v) for v in interp.violations],
            "snapshot": snapshot_dict(interp.world, interp.store),
        }
        try:
            with open(args.json, "w", encoding="utf-8") as fh:
                json.dump(doc, fh, indent=2, sort_keys=True)
                fh.write("\n")
        except OSError as e:
            raise _Usage(f"cannot write {args.json}: {e.strerror}") from None
    return DIAGNOSTICS if failure is not None or interp.violations else OK


def cmd_dump(args) -> int:
    interp, failure = _execute(args)
    if failure is not None:
        print(_diag(args.script, failure), file=sys.stderr)
        return DIAGNOSTICS
    sys.stdout.write(dump_snapshot(interp.world, interp.store))
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sysmod", description="Typed object system models: check, run, dump.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--strict-inheritance", action="store_true", help="reject redefinition of inherited attributes")
        sp.add_argument("--seed", type=int, default=None, help="accepted for reproducibility; no command is randomized")

    c = sub.add_parser("check", help="parse and declare a model, then report problems")
    c.add_argument("model")
    common(c)
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("run", help="run a script against a model and print the transcript")
    r.add_argument("model")
    r.add_argument("script")
    r.add_argument("--json", metavar="OUT", help="also write transcript and snapshot as JSON")
    common(r)
    r.set_defaults(func=cmd_run)

    d = sub.add_parser("dump", help="run a script, then print the snapshot document")
    d.add_argument("model")
    d.add_argument("script")
    common(d)
    d.set_defaults(func=cmd_dump)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    try:
        return args.func(args)
    except _Usage as e:
        print(f"sysmod: {e}", file=sys.stderr)
        return USAGE
    except _ScriptSyntax as e:
        print(_diag(args.script, e.error), file=sys.stderr)
        return DIAGNOSTICS
    except SysModError as e:
        print(_diag(args.model, e), file=sys.stderr)
        return DIAGNOSTICS


if __name__ == "__main__":
    sys.exit(main())
