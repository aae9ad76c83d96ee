"""Type names, values and the carrier-membership judgment.

Carrier sets are never enumerated (``Int`` alone is infinite); instead
:func:`in_carrier` decides whether a value belongs to the carrier of a type
name.  Anything that depends on allocated objects or locations is looked up in
a ``World`` (see :mod:`sysmod.classes`), which is passed in explicitly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Mapping, Optional, Union

from .errors import DuplicateField, MalformedType

if TYPE_CHECKING:
    from .classes import World

Name = str

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

SELF = "self"

# Alias table for basic type names; values are the canonical spelling.
BASIC_ALIASES = {"Int": "Int", "Boolean": "Boolean", "Bool": "Boolean", "Void": "Void"}


def is_name(token: object) -> bool:
    return isinstance(token, str) and _NAME_RE.match(token) is not None


def check_name(token: object, what: str = "name") -> Name:
    if not is_name(token):
        raise MalformedType(f"invalid {what}: {token!r}")
    return token  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# Type names


class TypeName:
    """Base of all type-name nodes.  Instances are immutable and hashable."""

    __slots__ = ()


@dataclass(frozen=True)
class Basic(TypeName):
    name: Name

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class ClassT(TypeName):
    """The class name itself: carrier holds the direct instances (and Nil)."""

    name: Name

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Ref(TypeName):
    target: TypeName

    def __str__(self) -> str:
        return f"Ref {self.target}"


@dataclass(frozen=True)
class Rec(TypeName):
    """Record type name.  Fields are kept sorted, so field order never matters."""

    fields: tuple[tuple[Name, TypeName], ...]

    def __post_init__(self):
        items = tuple(self.fields.items()) if isinstance(self.fields, Mapping) else tuple(self.fields)
        names = [n for n, _ in items]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise DuplicateField(f"duplicate record field(s): {', '.join(dup)}")
        object.__setattr__(self, "fields", tuple(sorted(items, key=lambda kv: kv[0])))

    def names(self) -> frozenset[Name]:
        return frozenset(n for n, _ in self.fields)

    def field_type(self, name: Name) -> Optional[TypeName]:
        for n, t in self.fields:
            if n == name:
                return t
        return None

    def __str__(self) -> str:
        return "Rec{" + ", ".join(f"{n}: {t}" for n, t in self.fields) + "}"


@dataclass(frozen=True)
class Prod(TypeName):
    items: tuple[TypeName, ...]

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))

    def __str__(self) -> str:
        return "Prod{" + ", ".join(str(t) for t in self.items) + "}"


@dataclass(frozen=True)
class Loc(TypeName):
    content: TypeName

    def __str__(self) -> str:
        return f"Loc {self.content}"


@dataclass(frozen=True)
class Oid(TypeName):
    """Identifiers of a class and all of its subclasses."""

    name: Name

    def __str__(self) -> str:
        return f"Oid({self.name})"


@dataclass(frozen=True)
class SetT(TypeName):
    elem: TypeName

    def __str__(self) -> str:
        return f"Set({self.elem})"


@dataclass(frozen=True)
class ListT(TypeName):
    elem: TypeName

    def __str__(self) -> str:
        return f"List({self.elem})"


INT = Basic("Int")
BOOLEAN = Basic("Boolean")
VOID = Basic("Void")


def class_names_in(t: TypeName) -> set[Name]:
    """All class names mentioned anywhere inside ``t``."""
    if isinstance(t, (ClassT, Oid)):
        return {t.name}
    if isinstance(t, (Ref,)):
        return class_names_in(t.target)
    if isinstance(t, Loc):
        return class_names_in(t.content)
    if isinstance(t, (SetT, ListT)):
        return class_names_in(t.elem)
    if isinstance(t, Rec):
        return set().union(*(class_names_in(ft) for _, ft in t.fields))
    if isinstance(t, Prod):
        return set().union(*(class_names_in(it) for it in t.items))
    return set()


def check_type(t: TypeName, world: Optional[World] = None) -> None:
    """Raise :class:`MalformedType` unless ``t`` is well formed.

    With a world, class names must be declared there.
    """
    if isinstance(t, Basic):
        if t.name not in BASIC_ALIASES:
            raise MalformedType(f"unknown basic type name {t.name!r}")
    elif isinstance(t, (ClassT, Oid)):
        check_name(t.name, "class name")
        if world is not None and not world.has_class(t.name):
            raise MalformedType(f"undeclared class {t.name!r} in type")
    elif isinstance(t, Ref):
        check_type(t.target, world)
    elif isinstance(t, Loc):
        check_type(t.content, world)
    elif isinstance(t, (SetT, ListT)):
        check_type(t.elem, world)
    elif isinstance(t, Rec):
        for n, ft in t.fields:
            check_name(n, "field name")
            check_type(ft, world)
    elif isinstance(t, Prod):
        for it in t.items:
            check_type(it, world)
    else:
        raise MalformedType(f"not a type name: {t!r}")


def canonicalize(t: TypeName) -> TypeName:
    if isinstance(t, Basic):
        return Basic(BASIC_ALIASES.get(t.name, t.name))
    if isinstance(t, Ref):
        return Ref(canonicalize(t.target))
    if isinstance(t, Loc):
        return Loc(canonicalize(t.content))
    if isinstance(t, SetT):
        return SetT(canonicalize(t.elem))
    if isinstance(t, ListT):
        return ListT(canonicalize(t.elem))
    if isinstance(t, Rec):
        return Rec(tuple((n, canonicalize(ft)) for n, ft in t.fields))
    if isinstance(t, Prod):
        return Prod(tuple(canonicalize(it) for it in t.items))
    return t


def types_equivalent(t1: TypeName, t2: TypeName) -> bool:
    return canonicalize(t1) == canonicalize(t2)


# ---------------------------------------------------------------------------
# Values


class Value:
    __slots__ = ()


@dataclass(frozen=True)
class BoolV(Value):
    b: bool

    def __post_init__(self):
        if not isinstance(self.b, bool):
            raise TypeError("BoolV carries exactly True or False")


@dataclass(frozen=True)
class IntV(Value):
    z: int

    def __post_init__(self):
        if isinstance(self.z, bool) or not isinstance(self.z, int):
            raise TypeError("IntV carries an int")


@dataclass(frozen=True)
class VoidV(Value):
    pass


@dataclass(frozen=True)
class NilV(Value):
    pass


@dataclass(frozen=True, order=True)
class OidV(Value):
    """Object identifier: the class it was created for plus a per-class serial."""

    cls: Name
    serial: int

    def __str__(self) -> str:
        return f"{self.cls}#{self.serial}"


@dataclass(frozen=True, order=True)
class LocV(Value):
    serial: int

    def __str__(self) -> str:
        return f"loc#{self.serial}"


@dataclass(frozen=True)
class RecV(Value):
    fields: tuple[tuple[Name, Value], ...] = ()

    def __post_init__(self):
        items = tuple(self.fields.items()) if isinstance(self.fields, Mapping) else tuple(self.fields)
        names = [n for n, _ in items]
        if len(set(names)) != len(names):
            raise DuplicateField("duplicate record field")
        object.__setattr__(self, "fields", tuple(sorted(items, key=lambda kv: kv[0])))

    def names(self) -> frozenset[Name]:
        return frozenset(n for n, _ in self.fields)

    def as_dict(self) -> dict[Name, Value]:
        return dict(self.fields)

    def get(self, name: Name) -> Optional[Value]:
        for n, v in self.fields:
            if n == name:
                return v
        return None


@dataclass(frozen=True)
class TupleV(Value):
    items: tuple[Value, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))


@dataclass(frozen=True)
class SetV(Value):
    items: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "items", frozenset(self.items))


@dataclass(frozen=True)
class ListV(Value):
    items: tuple[Value, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))


@dataclass(frozen=True)
class UnknownV(Value):
    """Some member of ``type``'s carrier; which one is not known."""

    type: TypeName


TRUE = BoolV(True)
FALSE = BoolV(False)
VOID_V = VoidV()
NIL = NilV()

Scalar = Union[BoolV, IntV, VoidV, NilV]


@dataclass(frozen=True)
class TypedElement:
    type: TypeName
    value: Value

    def check(self, world: World) -> None:
        from .errors import CarrierViolation

        if not in_carrier(self.value, self.type, world):
            raise CarrierViolation(f"{self.value!r} is not a member of {self.type}")


def oids_in(v: Value) -> Iterable[OidV]:
    """Every object identifier occurring inside ``v``."""
    if isinstance(v, OidV):
        yield v
    elif isinstance(v, RecV):
        for _, fv in v.fields:
            yield from oids_in(fv)
    elif isinstance(v, (TupleV, ListV, SetV)):
        for it in v.items:
            yield from oids_in(it)


# ---------------------------------------------------------------------------
# Carrier membership


def in_carrier(v: Value, t: TypeName, world: World) -> bool:
    """Decide ``v`` in CAR(``t``).

    Raises :class:`MalformedType` when ``t`` mentions an undeclared class.
    """
    check_type(t, world)
    return _member(v, canonicalize(t), world)


def _member(v: Value, t: TypeName, world: World) -> bool:
    if isinstance(v, UnknownV):
        return canonicalize(v.type) == t
    if isinstance(t, Basic):
        if t.name == "Int":
            return isinstance(v, IntV)
        if t.name == "Boolean":
            return isinstance(v, BoolV)
        return isinstance(v, VoidV)
    if isinstance(t, ClassT):
        # A class name is a reference type, so Nil belongs to it.
        if isinstance(v, NilV):
            return True
        return isinstance(v, OidV) and world.class_of(v) == t.name
    if isinstance(t, Oid):
        if isinstance(v, NilV):
            return True
        if not isinstance(v, OidV):
            return False
        c = world.class_of(v)
        return c is not None and world.is_subclass(c, t.name)
    if isinstance(t, Ref):
        # Non-Nil references only exist for class types.
        return isinstance(v, NilV)
    if isinstance(t, Loc):
        if not isinstance(v, LocV):
            return False
        content = world.loc_type(v)
        return content is not None and canonicalize(content) == t.content
    if isinstance(t, Rec):
        if not isinstance(v, RecV) or v.names() != t.names():
            return False
        vals = v.as_dict()
        return all(_member(vals[n], ft, world) for n, ft in t.fields)
    if isinstance(t, Prod):
        return (
            isinstance(v, TupleV)
            and len(v.items) == len(t.items)
            and all(_member(x, xt, world) for x, xt in zip(v.items, t.items))
        )
    if isinstance(t, SetT):
        return isinstance(v, SetV) and all(_member(x, t.elem, world) for x in v.items)
    if isinstance(t, ListT):
        return isinstance(v, ListV) and all(_member(x, t.elem, world) for x in v.items)
    return False


def type_of(v: Value, world: World) -> Optional[TypeName]:
    """Most specific type of ``v``, or None where no type is assigned (Nil)."""
    if isinstance(v, IntV):
        return INT
    if isinstance(v, BoolV):
        return BOOLEAN
    if isinstance(v, VoidV):
        return VOID
    if isinstance(v, UnknownV):
        return v.type
    if isinstance(v, OidV):
        c = world.class_of(v)
        return ClassT(c) if c is not None else None
    if isinstance(v, LocV):
        content = world.loc_type(v)
        return Loc(content) if content is not None else None
    if isinstance(v, RecV):
        parts = []
        for n, fv in v.fields:
            ft = type_of(fv, world)
            if ft is None:
                return None
            parts.append((n, ft))
        return Rec(tuple(parts))
    if isinstance(v, TupleV):
        items = [type_of(x, world) for x in v.items]
        if any(it is None for it in items):
            return None
        return Prod(tuple(items))
    if isinstance(v, (SetV, ListV)):
        elem_types = {type_of(x, world) for x in v.items}
        if len(elem_types) != 1 or None in elem_types:
            return None
        (et,) = elem_types
        return SetT(et) if isinstance(v, SetV) else ListT(et)
    return None
