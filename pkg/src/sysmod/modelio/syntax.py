"""Lexer and recursive-descent parser for model files and store scripts.

Model files declare classes, static attributes and associations::

    class B {}
    class A { simpR: loc B; label: Int }
    assoc SimpR (A, B) via attribute A.simpR
    static counter: Int = 0

Scripts drive a store::

    new a : A { simpR = nil, label = 1 }
    new b : B
    link SimpR (a, b)
    assert rel SimpR contains (a, b)
    check
    dump

Both parsers are total: any input either parses or raises
:class:`ModelSyntaxError` with a line, column and the set of tokens that
would have been accepted there.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from ..associations import AssocDecl, AttributeOwned, Mediator, Ordered, Qualified, RedundantHybrid
from ..classes import RESERVED_TYPE_WORDS, AttrDecl, ClassDecl, StaticDecl
from ..errors import SysModError
from ..universe import (
    FALSE,
    NIL,
    TRUE,
    VOID_V,
    Basic,
    ClassT,
    IntV,
    ListT,
    Loc,
    Oid,
    Prod,
    Rec,
    Ref,
    SetT,
    TypeName,
    Value,
)

MAX_DEPTH = 200

CLASS_KEYWORDS = RESERVED_TYPE_WORDS
LITERAL_KEYWORDS = frozenset({"true", "false", "void", "nil", "unknown"})


class ModelSyntaxError(SysModError):
    def __init__(self, message: str, line: int, col: int, expected: tuple[str, ...] = ()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = tuple(sorted(set(expected)))
        text = f"{line}:{col}: {message}"
        if self.expected:
            text += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(text)


# ---------------------------------------------------------------------------
# Lexer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<int>-?[0-9]+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[{}()\[\],.:=;])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "name", "int", "punct", "eof"
    text: str
    line: int
    col: int

    def describe(self) -> str:
        return "end of input" if self.kind == "eof" else repr(self.text)


def tokenize(text: Union[str, bytes]) -> list[Token]:
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as e:
            prefix = bytes(text)[: e.start].decode("utf-8", errors="replace")
            line = prefix.count("\n") + 1
            col = len(prefix) - (prefix.rfind("\n") + 1) + 1
            raise ModelSyntaxError("input is not valid UTF-8", line, col) from None
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ModelSyntaxError(
                f"unexpected character {text[pos]!r}", line, col, ("name", "integer", "punctuation")
            )
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    col = pos - line_start + 1
    tokens.append(Token("eof", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# Literals (shared by statics and scripts)


class Lit:
    """Unevaluated literal; ``unknown`` needs a target type to become a value."""


@dataclass(frozen=True)
class LitValue(Lit):
    value: Value


@dataclass(frozen=True)
class LitUnknown(Lit):
    pass


@dataclass(frozen=True)
class LitVar(Lit):
    name: str


@dataclass(frozen=True)
class LitList(Lit):
    items: tuple[Lit, ...]


@dataclass(frozen=True)
class LitSet(Lit):
    items: tuple[Lit, ...]


@dataclass(frozen=True)
class LitTuple(Lit):
    items: tuple[Lit, ...]


@dataclass(frozen=True)
class LitRec(Lit):
    fields: tuple[tuple[str, Lit], ...]


# ---------------------------------------------------------------------------
# Parsed artifacts


@dataclass(frozen=True)
class ModelSource:
    """Declarations in source order, with the line each one starts on."""

    declarations: tuple
    lines: tuple[int, ...]


@dataclass(frozen=True)
class NewStmt:
    var: str
    cls: str
    inits: tuple[tuple[str, Lit], ...]
    line: int = 0


@dataclass(frozen=True)
class SetStmt:
    var: str
    attr: str
    value: Lit
    line: int = 0


@dataclass(frozen=True)
class SetStaticStmt:
    name: str
    value: Lit
    line: int = 0


@dataclass(frozen=True)
class LinkStmt:
    assoc: str
    args: tuple[Lit, ...]
    line: int = 0


@dataclass(frozen=True)
class AssertRelStmt:
    assoc: str
    args: tuple[Lit, ...]
    negated: bool = False
    line: int = 0


@dataclass(frozen=True)
class CheckStmt:
    line: int = 0


@dataclass(frozen=True)
class DumpStmt:
    line: int = 0


@dataclass(frozen=True)
class Script:
    statements: tuple


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0
        self.depth = 0

    # -- token helpers -----------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, expected, what: Optional[str] = None):
        t = self.tok
        raise ModelSyntaxError(what or f"unexpected {t.describe()}", t.line, t.col, tuple(expected))

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("punct", "name") and t.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error([repr(text)])
        t = self.tok
        self.i += 1
        return t

    def name(self, what: str = "name") -> str:
        if self.tok.kind != "name":
            self.error([what])
        t = self.tok
        self.i += 1
        return t.text

    def names(self, what: str = "name") -> tuple[str, ...]:
        out = [self.name(what)]
        while self.accept(","):
            out.append(self.name(what))
        return tuple(out)

    def class_name(self) -> str:
        t = self.tok
        n = self.name("class name")
        if n in CLASS_KEYWORDS:
            raise ModelSyntaxError(f"{n!r} is reserved and cannot name a class", t.line, t.col, ("class name",))
        return n

    def nest(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            self.error([], "nesting too deep")

    # -- types -------------------------------------------------------------

    TYPE_START = ("Int", "Bool", "Boolean", "Void", "Ref", "Loc", "Set", "List", "Oid", "Rec", "Prod", "class name")

    def type(self) -> TypeName:
        self.nest()
        try:
            return self._type()
        finally:
            self.depth -= 1

    def _type(self) -> TypeName:
        t = self.tok
        if t.kind != "name":
            self.error(self.TYPE_START)
        w = t.text
        if w in ("Int", "Bool", "Boolean", "Void"):
            self.i += 1
            return Basic(w)
        if w in ("Ref", "Loc"):
            self.i += 1
            inner = self.type()
            return Ref(inner) if w == "Ref" else Loc(inner)
        if w in ("Set", "List"):
            self.i += 1
            self.expect("(")
            inner = self.type()
            self.expect(")")
            return SetT(inner) if w == "Set" else ListT(inner)
        if w == "Oid":
            self.i += 1
            self.expect("(")
            n = self.class_name()
            self.expect(")")
            return Oid(n)
        if w == "Rec":
            self.i += 1
            self.expect("{")
            fields = []
            if not self.at("}"):
                while True:
                    fname = self.name("field name")
                    self.expect(":")
                    fields.append((fname, self.type()))
                    if not self.accept(","):
                        break
            self.expect("}")
            names = [n for n, _ in fields]
            if len(set(names)) != len(names):
                raise ModelSyntaxError("duplicate field in record type", t.line, t.col)
            return Rec(tuple(fields))
        if w == "Prod":
            self.i += 1
            self.expect("{")
            items = []
            if not self.at("}"):
                items.append(self.type())
                while self.accept(","):
                    items.append(self.type())
            self.expect("}")
            return Prod(tuple(items))
        if w == "loc":
            self.error(self.TYPE_START, "'loc' may only prefix an attribute type")
        self.i += 1
        return ClassT(w)

    # -- literals ----------------------------------------------------------

    LIT_START = ("integer", "true", "false", "void", "nil", "unknown", "variable", "'['", "'{'", "'('")

    def literal(self) -> Lit:
        self.nest()
        try:
            return self._literal()
        finally:
            self.depth -= 1

    def _lits(self, close: str) -> tuple[Lit, ...]:
        items = []
        if not self.at(close):
            items.append(self.literal())
            while self.accept(","):
                items.append(self.literal())
        self.expect(close)
        return tuple(items)

    def _literal(self) -> Lit:
        t = self.tok
        if t.kind == "int":
            try:
                value = int(t.text)
            except ValueError:  # beyond the interpreter's digit limit
                self.error([], "integer literal too long")
            self.i += 1
            return LitValue(IntV(value))
        if t.kind == "name":
            self.i += 1
            consts = {"true": TRUE, "false": FALSE, "void": VOID_V, "nil": NIL}
            if t.text in consts:
                return LitValue(consts[t.text])
            if t.text == "unknown":
                return LitUnknown()
            return LitVar(t.text)
        if self.accept("("):
            return LitTuple(self._lits(")"))
        if self.accept("{"):
            return LitSet(self._lits("}"))
        if self.accept("["):
            if self.accept("="):
                self.expect("]")
                return LitRec(())
            if self.tok.kind == "name" and self.peek().text == "=" and self.peek().kind == "punct":
                fields = []
                while True:
                    fname = self.name("field name")
                    self.expect("=")
                    fields.append((fname, self.literal()))
                    if not self.accept(","):
                        break
                self.expect("]")
                names = [n for n, _ in fields]
                if len(set(names)) != len(names):
                    raise ModelSyntaxError("duplicate field in record literal", t.line, t.col)
                return LitRec(tuple(fields))
            return LitList(self._lits("]"))
        self.error(self.LIT_START)

    # -- model -------------------------------------------------------------

    def model(self) -> ModelSource:
        decls, lines = [], []
        while self.tok.kind != "eof":
            line = self.tok.line
            if self.accept("class"):
                decls.append(self.class_decl())
            elif self.accept("assoc"):
                decls.append(self.assoc_decl())
            elif self.accept("static"):
                decls.append(self.static_decl())
            else:
                self.error(["'class'", "'assoc'", "'static'", "end of input"])
            lines.append(line)
            self.accept(";")
        return ModelSource(tuple(decls), tuple(lines))

    def class_decl(self) -> ClassDecl:
        name = self.class_name()
        supers: tuple = ()
        sub_only: tuple = ()
        if self.accept("extends"):
            supers = self._class_list()
        if self.accept("subclassOf"):
            sub_only = self._class_list()
        if not self.at("{"):
            self.error(["'{'"] + ([] if supers else ["'extends'"]) + ([] if sub_only else ["'subclassOf'"]))
        self.expect("{")
        attrs = []
        while not self.accept("}"):
            if self.tok.kind != "name":
                self.error(["attribute name", "'}'"])
            aname = self.name("attribute name")
            self.expect(":")
            mutable = self.accept("loc")
            attrs.append(AttrDecl(aname, self.type(), mutable))
            self.accept(";")
        return ClassDecl(name, supers, tuple(attrs), sub_only)

    def _class_list(self) -> tuple[str, ...]:
        out = [self.class_name()]
        while self.accept(","):
            out.append(self.class_name())
        return tuple(out)

    def assoc_decl(self) -> AssocDecl:
        name = self.name("association name")
        self.expect("(")
        sig = [self.class_name()]
        self.expect(",")
        sig.append(self.class_name())
        while self.accept(","):
            sig.append(self.class_name())
        self.expect(")")
        self.expect("via")
        return AssocDecl(name, tuple(sig), self.strategy())

    def _dotted(self) -> tuple[str, str]:
        cls = self.class_name()
        self.expect(".")
        return cls, self.name("attribute name")

    def strategy(self):
        if self.accept("attribute"):
            return AttributeOwned(*self._dotted())
        if self.accept("ordered"):
            return Ordered(*self._dotted())
        if self.accept("redundant"):
            dc, da = self._dotted()
            self.expect(",")
            cc, ca = self._dotted()
            return RedundantHybrid(dc, da, cc, ca)
        if self.accept("mediator"):
            med = self.class_name()
            roles = None
            extras: tuple = ()
            if self.accept("("):
                roles = self.names("role attribute")
                self.expect(")")
            if self.accept("with"):
                self.expect("(")
                extras = self.names("attribute name")
                self.expect(")")
            return Mediator(med, roles, extras)
        if self.accept("qualified"):
            med = self.class_name()
            roles = None
            if self.accept("("):
                roles = self.names("role attribute")
                self.expect(")")
            self.expect("by")
            qt = self.type()
            qattr = self.name("attribute name") if self.accept("at") else None
            return Qualified(med, qt, roles, qattr)
        self.error(["'attribute'", "'mediator'", "'redundant'", "'ordered'", "'qualified'"])

    def static_decl(self) -> StaticDecl:
        name = self.name("static attribute name")
        self.expect(":")
        t = self.type()
        self.expect("=")
        start = self.tok
        lit = self.literal()
        try:
            value = evaluate(lit, {}, t)
        except SysModError as e:
            raise ModelSyntaxError(str(e), start.line, start.col) from None
        return StaticDecl(name, t, value)

    # -- scripts -----------------------------------------------------------

    def script(self) -> Script:
        stmts = []
        while self.tok.kind != "eof":
            stmts.append(self.statement())
            self.accept(";")
        return Script(tuple(stmts))

    def variable(self) -> str:
        t = self.tok
        n = self.name("variable")
        if n in LITERAL_KEYWORDS:
            raise ModelSyntaxError(f"{n!r} cannot be used as a variable", t.line, t.col, ("variable",))
        return n

    def statement(self):
        line = self.tok.line
        if self.accept("new"):
            var = self.variable()
            self.expect(":")
            cls = self.class_name()
            inits = []
            if self.accept("{"):
                while not self.accept("}"):
                    if self.tok.kind != "name":
                        self.error(["attribute name", "'}'"])
                    aname = self.name("attribute name")
                    self.expect("=")
                    inits.append((aname, self.literal()))
                    self.accept(",")
            return NewStmt(var, cls, tuple(inits), line)
        if self.accept("set"):
            if self.at("static") and self.peek().kind == "name":
                self.i += 1
                name = self.name("static attribute name")
                self.expect("=")
                return SetStaticStmt(name, self.literal(), line)
            var = self.variable()
            self.expect(".")
            attr = self.name("attribute name")
            self.expect("=")
            return SetStmt(var, attr, self.literal(), line)
        if self.accept("link"):
            assoc = self.name("association name")
            self.expect("(")
            return LinkStmt(assoc, self._lits(")"), line)
        if self.accept("assert"):
            self.expect("rel")
            assoc = self.name("association name")
            if self.accept("contains"):
                negated = False
            elif self.accept("excludes"):
                negated = True
            else:
                self.error(["'contains'", "'excludes'"])
            self.expect("(")
            return AssertRelStmt(assoc, self._lits(")"), negated, line)
        if self.accept("check"):
            return CheckStmt(line)
        if self.accept("dump"):
            return DumpStmt(line)
        self.error(["'new'", "'set'", "'link'", "'assert'", "'check'", "'dump'", "end of input"])


def parse_model(text: Union[str, bytes]) -> ModelSource:
    return _Parser(text).model()


def parse_script(text: Union[str, bytes]) -> Script:
    return _Parser(text).script()


def parse_type(text: str) -> TypeName:
    p = _Parser(text)
    t = p.type()
    if p.tok.kind != "eof":
        p.error(["end of input"])
    return t


# ---------------------------------------------------------------------------
# Literal evaluation


class UnboundVariable(SysModError):
    pass


def evaluate(lit: Lit, env: dict, expected: Optional[TypeName]) -> Value:
    """Turn a literal into a value; ``expected`` gives ``unknown`` its type."""
    from ..universe import ListV, RecV, SetV, TupleV, UnknownV

    if isinstance(lit, LitValue):
        return lit.value
    if isinstance(lit, LitUnknown):
        if expected is None:
            raise SysModError("cannot tell which type this 'unknown' belongs to")
        return UnknownV(expected)
    if isinstance(lit, LitVar):
        try:
            return env[lit.name]
        except KeyError:
            raise UnboundVariable(f"variable {lit.name!r} is not bound") from None
    if isinstance(lit, (LitList, LitSet)):
        elem = expected.elem if isinstance(expected, (ListT, SetT)) else None
        items = [evaluate(x, env, elem) for x in lit.items]
        return ListV(tuple(items)) if isinstance(lit, LitList) else SetV(frozenset(items))
    if isinstance(lit, LitTuple):
        types = expected.items if isinstance(expected, Prod) and len(expected.items) == len(lit.items) else None
        return TupleV(
            tuple(evaluate(x, env, types[i] if types else None) for i, x in enumerate(lit.items))
        )
    if isinstance(lit, LitRec):
        rt = expected if isinstance(expected, Rec) else None
        return RecV(tuple((n, evaluate(x, env, rt.field_type(n) if rt else None)) for n, x in lit.fields))
    raise SysModError(f"not a literal: {lit!r}")
