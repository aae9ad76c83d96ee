"""Record and product construction, attribute sets, projection and deref."""

from __future__ import annotations

from typing import TYPE_CHECKING, Optional, Sequence

from .errors import (
    ArityMismatch,
    CarrierViolation,
    DuplicateField,
    FieldSetMismatch,
    NilDereference,
    NoSuchField,
    UnknownOid,
)
from .universe import (
    SELF,
    ClassT,
    Name,
    NilV,
    OidV,
    Rec,
    RecV,
    Ref,
    TupleV,
    TypeName,
    Value,
    check_name,
)

if TYPE_CHECKING:
    from .classes import World

FieldList = Sequence[tuple[Name, TypeName]]


def _check_distinct(names: Sequence[Name]) -> None:
    seen = set()
    for n in names:
        if n in seen:
            raise DuplicateField(f"field {n!r} given more than once")
        seen.add(n)


def mk_rec(fields: FieldList) -> Rec:
    """Build the record type name for ``fields``; declaration order is irrelevant."""
    fields = list(fields)
    for n, _ in fields:
        check_name(n, "field name")
    _check_distinct([n for n, _ in fields])
    return Rec(tuple(fields))


def attr_of(t: TypeName, world: Optional[World] = None) -> frozenset[Name]:
    """Attribute names of a record type, looking through ``Ref``.

    A class name is itself a reference to its instance record, so given a
    world ``attr_of(ClassT(C))`` is ``{self}`` plus the effective attributes.
    """
    while isinstance(t, Ref):
        t = t.target
    if isinstance(t, Rec):
        return t.names()
    if isinstance(t, ClassT) and world is not None:
        return frozenset([SELF, *world.attr_names(t.name)])
    return frozenset()


def deref(r: Value, world: World) -> RecV:
    if isinstance(r, NilV):
        raise NilDereference("cannot dereference Nil")
    if not isinstance(r, OidV):
        raise CarrierViolation(f"{r!r} is not a reference")
    record = world.objects.get(r)
    if record is None:
        raise UnknownOid(f"object identifier {r} was never allocated")
    return record


def proj(v: Value, a: Name, world: Optional[World] = None) -> Value:
    """``v.a`` for records, ``v->a`` (one dereference first) for identifiers."""
    if isinstance(v, NilV):
        raise NilDereference(f"projection of {a!r} through Nil")
    if isinstance(v, OidV):
        if world is None:
            raise UnknownOid("projection through a reference needs a world")
        v = deref(v, world)
    if isinstance(v, RecV):
        got = v.get(a)
        if got is None:
            raise NoSuchField(f"record has no field {a!r}")
        return got
    raise NoSuchField(f"cannot project {a!r} out of {v!r}")


def rec_from_tuple(names: Sequence[Name], t: TupleV) -> RecV:
    names = list(names)
    if len(names) != len(t.items):
        raise ArityMismatch(f"{len(names)} names for a {len(t.items)}-tuple")
    _check_distinct(names)
    return RecV(tuple(zip(names, t.items)))


def tuple_from_rec(names: Sequence[Name], r: RecV) -> TupleV:
    names = list(names)
    _check_distinct(names)
    if set(names) != r.names():
        raise FieldSetMismatch(
            f"names {sorted(names)} do not match record fields {sorted(r.names())}"
        )
    fields = r.as_dict()
    return TupleV(tuple(fields[n] for n in names))

