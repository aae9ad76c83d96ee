"""Replaying model declarations and executing store scripts."""

from __future__ import annotations

from typing import Union

from ..associations import AssocDecl, assoc_decl, declare_assoc, link, rel_of
from ..classes import (
    ClassDecl,
    StaticDecl,
    World,
    declare_class,
    declare_static_attr,
    instantiate,
)
from ..datastore import EMPTY_STORE, Store, Violation, check_store, setval_attr, setval_loc
from ..errors import ArityMismatch, CarrierViolation, SysModError, UnknownClass
from ..universe import Oid, OidV, Value, in_carrier
from .render import format_tuple, format_type, format_value
from .snapshot import dump_snapshot
from .syntax import (
    AssertRelStmt,
    CheckStmt,
    LitVar,
    DumpStmt,
    LinkStmt,
    ModelSource,
    NewStmt,
    Script,
    SetStaticStmt,
    SetStmt,
    evaluate,
    parse_model,
    parse_script,
)


class ModelError(SysModError):
    """A declaration that parsed but could not be added to the world."""

    def __init__(self, line: int, cause: SysModError):
        self.line = line
        self.cause = cause
        super().__init__(f"line {line}: {type(cause).__name__}: {cause}")


class ScriptError(SysModError):
    """Execution stopped at statement ``index`` (0-based)."""

    def __init__(self, index, line, cause, transcript, world, store):
        self.index = index
        self.line = line
        self.cause = cause
        self.transcript = transcript
        self.world = world
        self.store = store
        super().__init__(f"statement {index + 1} (line {line}): {type(cause).__name__}: {cause}")


class ScriptAssertionFailed(SysModError):
    pass


def declare(world: World, store: Store, decl, forward=()) -> tuple[World, Store]:
    if isinstance(decl, ClassDecl):
        return declare_class(world, decl, forward), store
    if isinstance(decl, AssocDecl):
        return declare_assoc(world, decl), store
    if isinstance(decl, StaticDecl):
        return declare_static_attr(world, store, decl.name, decl.type, decl.init)
    raise TypeError(f"not a declaration: {decl!r}")


def load_model(
    source: Union[ModelSource, str, bytes], strict: bool = False
) -> tuple[World, Store]:
    """Replay declarations in order into a fresh world and store."""
    if not isinstance(source, ModelSource):
        source = parse_model(source)
    world, store = World(strict=strict), EMPTY_STORE
    # attribute types may refer to classes declared further down
    forward = frozenset(d.name for d in source.declarations if isinstance(d, ClassDecl))
    for decl, line in zip(source.declarations, source.lines):
        try:
            world, store = declare(world, store, decl, forward)
        except SysModError as e:
            raise ModelError(line, e) from e
    return world, store


class Interpreter:
    def __init__(self, world: World, store: Store):
        self.world = world
        self.store = store
        self.env: dict[str, Value] = {}
        self.transcript: list[str] = []
        self.violations: list[Violation] = []

    def run(self, script: Script) -> None:
        for index, stmt in enumerate(script.statements):
            try:
                self.execute(stmt)
            except SysModError as e:
                raise ScriptError(index, stmt.line, e, list(self.transcript), self.world, self.store) from e

    def _link_types(self, decl: AssocDecl) -> list:
        return [Oid(c) for c in decl.signature] + list(decl.extra_types or ())

    def _tuple(self, assoc: str, args) -> tuple:
        decl = assoc_decl(self.world, assoc)
        types = self._link_types(decl)
        if len(args) != len(types):
            raise ArityMismatch(f"{assoc} takes {len(types)} components, got {len(args)}")
        tup = tuple(evaluate(a, self.env, t) for a, t in zip(args, types))
        for v, t in zip(tup, types):
            if not in_carrier(v, t, self.world):
                raise CarrierViolation(f"{format_value(v)} is not a valid {format_type(t)} for {assoc}")
        return tup

    def execute(self, stmt) -> None:
        w = self.world
        if isinstance(stmt, NewStmt):
            if not w.has_class(stmt.cls):
                raise UnknownClass(f"class {stmt.cls!r} is not declared")
            types = {a.name: a.type for a in w.class_info(stmt.cls).attrs}
            init = {n: evaluate(lit, self.env, types.get(n)) for n, lit in stmt.inits}
            self.world, self.store, oid = instantiate(w, self.store, stmt.cls, init)
            self.env[stmt.var] = oid
            self.transcript.append(f"new {stmt.var} : {stmt.cls} = {oid}")
        elif isinstance(stmt, SetStmt):
            oid = evaluate(LitVar(stmt.var), self.env, None)
            if not isinstance(oid, OidV):
                raise CarrierViolation(f"{stmt.var} is bound to {format_value(oid)}, not an object")
            v = evaluate(stmt.value, self.env, w.attr_decl(oid.cls, stmt.attr).type)
            self.store = setval_attr(w, self.store, oid, stmt.attr, v)
            self.transcript.append(f"set {stmt.var}.{stmt.attr} = {format_value(v)}")
        elif isinstance(stmt, SetStaticStmt):
            if stmt.name not in w.statics:
                raise SysModError(f"no static attribute {stmt.name!r}")
            loc = w.statics[stmt.name]
            v = evaluate(stmt.value, self.env, w.loc_type(loc))
            self.store = setval_loc(w, self.store, loc, v)
            self.transcript.append(f"set static {stmt.name} = {format_value(v)}")
        elif isinstance(stmt, LinkStmt):
            tup = self._tuple(stmt.assoc, stmt.args)
            self.world, self.store = link(w, self.store, stmt.assoc, tup)
            self.transcript.append(f"link {stmt.assoc} {format_tuple(tup)}")
        elif isinstance(stmt, AssertRelStmt):
            tup = self._tuple(stmt.assoc, stmt.args)
            present = tup in rel_of(w, self.store, stmt.assoc)
            verb = "excludes" if stmt.negated else "contains"
            if present == stmt.negated:
                raise ScriptAssertionFailed(f"rel {stmt.assoc} does not {verb[:-1]} {format_tuple(tup)}")
            self.transcript.append(f"assert rel {stmt.assoc} {verb} {format_tuple(tup)}: ok")
        elif isinstance(stmt, CheckStmt):
            found = check_store(w, self.store)
            self.violations.extend(found)
            if found:
                self.transcript.append(f"check: {len(found)} violation(s)")
                self.transcript += [f"  - {v}" for v in found]
            else:
                self.transcript.append("check: OK, 0 violations")
        elif isinstance(stmt, DumpStmt):
            self.transcript += dump_snapshot(w, self.store).rstrip("\n").split("\n")
        else:
            raise TypeError(f"not a statement: {stmt!r}")


def run_script(
    world: World, store: Store, script: Union[Script, str, bytes]
) -> tuple[World, Store, list[str]]:
    """Execute ``script``; raises :class:`ScriptError` (with the partial transcript) on failure."""
    if not isinstance(script, Script):
        script = parse_script(script)
    interp = Interpreter(world, store)
    interp.run(script)
    return interp.world, interp.store, interp.transcript


def run(model_text, script_text, strict: bool = False) -> Interpreter:
    """Parse and load a model, then execute a script against it."""
    world, store = load_model(model_text, strict=strict)
    interp = Interpreter(world, store)
    interp.run(script_text if isinstance(script_text, Script) else parse_script(script_text))
    return interp
