"""Snapshot stores: existing objects plus location contents.

A :class:`Store` is a plain value.  Every update returns a new snapshot and
leaves its input untouched.  Functions that need to know what a location or
identifier *is* take the :class:`~sysmod.classes.World` as first argument.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Mapping

from .classes import location_fields
from .errors import (
    CarrierViolation,
    DuplicateObject,
    ImmutableAttr,
    UnknownOid,
    UnmappedLocation,
    WrongLocationSet,
)
from .frozen import EMPTY, FrozenMap
from .universe import LocV, Name, OidV, Value, in_carrier, oids_in

if TYPE_CHECKING:
    from .classes import World


@dataclass(frozen=True)
class Store:
    oids: frozenset = frozenset()
    mem: FrozenMap = EMPTY  # LocV -> Value

    def __post_init__(self):
        object.__setattr__(self, "oids", frozenset(self.oids))
        if not isinstance(self.mem, FrozenMap):
            object.__setattr__(self, "mem", FrozenMap(self.mem))


EMPTY_STORE = Store()


@dataclass(frozen=True)
class Violation:
    """One broken well-formedness rule, with enough context to find it."""

    kind: str
    message: str
    context: tuple = ()

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


def oids_of(store: Store) -> frozenset:
    return store.oids


def locations_of(store: Store) -> frozenset:
    return frozenset(store.mem)


def val_loc(store: Store, loc: LocV) -> Value:
    try:
        return store.mem[loc]
    except KeyError:
        raise UnmappedLocation(f"{loc} is not in use in this store") from None


def setval_loc(world: World, store: Store, loc: LocV, v: Value) -> Store:
    if loc not in store.mem:
        raise UnmappedLocation(f"{loc} is not in use in this store")
    content = world.loc_type(loc)
    if content is None or not in_carrier(v, content, world):
        raise CarrierViolation(f"{v!r} cannot be stored in {loc}: Loc {content}")
    return Store(store.oids, store.mem.set(loc, v))


def _attr(world: World, store: Store, oid: OidV, at: Name):
    if oid not in store.oids or oid not in world.objects:
        raise UnknownOid(f"{oid} does not exist in this store")
    return world.attr_decl(oid.cls, at)


def val_attr(world: World, store: Store, oid: OidV, at: Name) -> Value:
    """``ds(oid.at)``; constant attributes are read straight from the instance record."""
    a = _attr(world, store, oid, at)
    field = world.objects[oid].get(at)
    if not a.mutable:
        return field
    return val_loc(store, field)


def setval_attr(world: World, store: Store, oid: OidV, at: Name, v: Value) -> Store:
    a = _attr(world, store, oid, at)
    if not a.mutable:
        raise ImmutableAttr(f"{oid.cls}.{at} is a constant attribute")
    return setval_loc(world, store, world.objects[oid].get(at), v)


def vals_of(world: World, store: Store, oid: OidV) -> dict[Name, Value]:
    if oid not in store.oids or oid not in world.objects:
        raise UnknownOid(f"{oid} does not exist in this store")
    return {at: val_attr(world, store, oid, at) for at in world.attr_names(oid.cls)}


def addobj(world: World, store: Store, oid: OidV, f: Mapping[LocV, Value]) -> Store:
    """Add an allocated object together with the initial contents of its locations."""
    if oid not in world.objects:
        raise UnknownOid(f"{oid} was never allocated")
    if oid in store.oids:
        raise DuplicateObject(f"{oid} already exists in this store")
    if set(f) != set(location_fields(world, oid)):
        raise WrongLocationSet(f"locations given for {oid} do not match its instance record")
    for loc, v in f.items():
        if not in_carrier(v, world.loc_type(loc), world):
            raise CarrierViolation(f"{v!r} cannot be stored in {loc}: Loc {world.loc_type(loc)}")
    return Store(store.oids | {oid}, store.mem.update(f))


# ---------------------------------------------------------------------------
# Well-formedness


def check_store(world: World, store: Store) -> list[Violation]:
    """All violated store restrictions; an empty list means well formed.

    Both components are finite by construction, so finiteness is not
    re-checked here.
    """
    from .associations import check_assoc_consistency

    out: list[Violation] = []
    owner: dict[LocV, str] = {}

    def claim(loc: LocV, who: str) -> None:
        if loc in owner:
            out.append(
                Violation("shared location", f"{loc} used by both {owner[loc]} and {who}", (loc,))
            )
        else:
            owner[loc] = who

    for oid in sorted(store.oids):
        record = world.objects.get(oid)
        if record is None:
            out.append(Violation("unknown object", f"{oid} was never allocated", (oid,)))
            continue
        if record.get("self") != oid:
            out.append(Violation("self law", f"record of {oid} has self = {record.get('self')}", (oid,)))
        for loc in location_fields(world, oid):
            claim(loc, str(oid))
    for name, loc in sorted(world.statics.items()):
        claim(loc, f"static {name}")

    used = set(owner)
    present = set(store.mem)
    for loc in sorted(present - used):
        out.append(Violation("orphan location", f"{loc} belongs to no existing object or static", (loc,)))
    for loc in sorted(used - present):
        out.append(Violation("missing location", f"{loc} of {owner[loc]} has no content", (loc,)))

    for loc in sorted(present):
        v = store.mem[loc]
        content = world.loc_type(loc)
        if content is None or not in_carrier(v, content, world):
            out.append(Violation("carrier", f"{loc} holds {v!r}, not a {content}", (loc,)))
        for ref in oids_in(v):
            if ref not in store.oids:
                out.append(Violation("dangling reference", f"{loc} refers to missing {ref}", (loc, ref)))
    for oid in sorted(store.oids):
        record = world.objects.get(oid)
        if record is None:
            continue
        for n, fv in record.fields:
            if n == "self":
                continue
            for ref in oids_in(fv):
                if ref not in store.oids:
                    out.append(
                        Violation("dangling reference", f"{oid}.{n} refers to missing {ref}", (oid, ref))
                    )

    out.extend(check_assoc_consistency(world, store))
    return out
