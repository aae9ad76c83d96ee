"""Text forms of types, values and declarations in the model language."""

from __future__ import annotations

from ..associations import AssocDecl, AttributeOwned, Mediator, Ordered, Qualified, RedundantHybrid
from ..classes import ClassDecl, StaticDecl, World
from ..universe import (
    Basic,
    BoolV,
    ClassT,
    IntV,
    ListT,
    ListV,
    Loc,
    LocV,
    NilV,
    Oid,
    OidV,
    Prod,
    Rec,
    RecV,
    Ref,
    SetT,
    SetV,
    TupleV,
    TypeName,
    UnknownV,
    Value,
    VoidV,
    canonicalize,
)

_BASIC = {"Int": "Int", "Boolean": "Bool", "Void": "Void"}


def format_type(t: TypeName) -> str:
    if isinstance(t, Basic):
        return _BASIC[canonicalize(t).name]
    if isinstance(t, ClassT):
        return t.name
    if isinstance(t, Oid):
        return f"Oid({t.name})"
    if isinstance(t, Ref):
        return f"Ref {format_type(t.target)}"
    if isinstance(t, Loc):
        return f"Loc {format_type(t.content)}"
    if isinstance(t, SetT):
        return f"Set({format_type(t.elem)})"
    if isinstance(t, ListT):
        return f"List({format_type(t.elem)})"
    if isinstance(t, Rec):
        return "Rec{" + ", ".join(f"{n}: {format_type(ft)}" for n, ft in t.fields) + "}"
    if isinstance(t, Prod):
        return "Prod{" + ", ".join(format_type(it) for it in t.items) + "}"
    raise TypeError(f"not a type name: {t!r}")


def format_value(v: Value) -> str:
    if isinstance(v, BoolV):
        return "true" if v.b else "false"
    if isinstance(v, IntV):
        return str(v.z)
    if isinstance(v, VoidV):
        return "void"
    if isinstance(v, NilV):
        return "nil"
    if isinstance(v, UnknownV):
        return "unknown"
    if isinstance(v, (OidV, LocV)):
        return str(v)
    if isinstance(v, ListV):
        return "[" + ", ".join(format_value(x) for x in v.items) + "]"
    if isinstance(v, SetV):
        return "{" + ", ".join(sorted(format_value(x) for x in v.items)) + "}"
    if isinstance(v, TupleV):
        return "(" + ", ".join(format_value(x) for x in v.items) + ")"
    if isinstance(v, RecV):
        if not v.fields:
            return "[=]"
        return "[" + ", ".join(f"{n} = {format_value(x)}" for n, x in v.fields) + "]"
    raise TypeError(f"not a value: {v!r}")


def format_tuple(tup) -> str:
    return "(" + ", ".join(format_value(x) for x in tup) + ")"


def format_class(decl: ClassDecl) -> str:
    head = f"class {decl.name}"
    if decl.supers:
        head += " extends " + ", ".join(decl.supers)
    if decl.subclass_of:
        head += " subclassOf " + ", ".join(decl.subclass_of)
    if not decl.attrs:
        return head + " {}"
    body = "; ".join(
        f"{a.name}: {'loc ' if a.mutable else ''}{format_type(a.type)}" for a in decl.attrs
    )
    return f"{head} {{ {body} }}"


def format_strategy(s) -> str:
    if isinstance(s, AttributeOwned):
        return f"attribute {s.owner}.{s.attr}"
    if isinstance(s, Ordered):
        return f"ordered {s.owner}.{s.attr}"
    if isinstance(s, RedundantHybrid):
        return f"redundant {s.direct_class}.{s.direct_attr}, {s.coll_class}.{s.coll_attr}"
    if isinstance(s, Mediator):
        out = f"mediator {s.mediator}"
        if s.roles is not None:
            out += " (" + ", ".join(s.roles) + ")"
        if s.extras:
            out += " with (" + ", ".join(s.extras) + ")"
        return out
    if isinstance(s, Qualified):
        out = f"qualified {s.mediator}"
        if s.roles is not None:
            out += " (" + ", ".join(s.roles) + ")"
        out += f" by {format_type(s.qualifier_type)}"
        if s.qualifier_attr is not None:
            out += f" at {s.qualifier_attr}"
        return out
    raise TypeError(f"not a strategy: {s!r}")


def format_assoc(decl: AssocDecl) -> str:
    return f"assoc {decl.name} ({', '.join(decl.signature)}) via {format_strategy(decl.strategy)}"


def format_static(decl: StaticDecl) -> str:
    return f"static {decl.name}: {format_type(decl.type)} = {format_value(decl.init)}"


def format_declaration(decl) -> str:
    if isinstance(decl, ClassDecl):
        return format_class(decl)
    if isinstance(decl, AssocDecl):
        return format_assoc(decl)
    if isinstance(decl, StaticDecl):
        return format_static(decl)
    raise TypeError(f"not a declaration: {decl!r}")


def world_declarations(world: World) -> list[str]:
    """Model text that replays to ``world``'s declarations: classes, statics, associations."""
    lines = [format_class(world.classes[c].decl) for c in world.class_order]
    lines += [format_static(d) for d in world.static_decls.values()]
    lines += [format_assoc(world.assocs[a]) for a in world.assoc_order]
    return lines
