"""Class declarations, subclassing, object allocation and static attributes.

The :class:`World` is the static half of the system: every declared class and
association, every allocated object identifier with its instance record, and
the content type of every allocated location.  It only ever grows, and every
operation returns a new world; older worlds remain valid snapshots.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Mapping, Optional

from .errors import (
    CarrierViolation,
    DuplicateClass,
    DuplicateField,
    DuplicateStatic,
    InheritanceCycle,
    MalformedType,
    MissingInit,
    NameConflict,
    NoSuchAttr,
    StrictRedefinition,
    UnknownClass,
    UnknownSuper,
)
from .frozen import EMPTY, FrozenMap
from .universe import (
    SELF,
    ClassT,
    Loc,
    LocV,
    Name,
    OidV,
    Rec,
    RecV,
    TypeName,
    Value,
    canonicalize,
    check_name,
    check_type,
    class_names_in,
    in_carrier,
)

if TYPE_CHECKING:
    from .associations import AssocDecl
    from .datastore import Store

# Keywords of the type grammar; no class may be called like one of them.
RESERVED_TYPE_WORDS = frozenset(
    {"Int", "Bool", "Boolean", "Void", "Ref", "Rec", "Prod", "Loc", "Oid", "Set", "List", "loc"}
)


@dataclass(frozen=True)
class AttrDecl:
    """An attribute.  Mutable ones live in a location (field type ``Loc T``),
    constant ones sit directly in the instance record."""

    name: Name
    type: TypeName
    mutable: bool = True

    @property
    def field_type(self) -> TypeName:
        return Loc(self.type) if self.mutable else self.type

    def same_shape(self, other: AttrDecl) -> bool:
        return (
            self.name == other.name
            and self.mutable == other.mutable
            and canonicalize(self.type) == canonicalize(other.type)
        )


@dataclass(frozen=True)
class ClassDecl:
    """``supers`` are inherited from; ``subclass_of`` only adds sub edges."""

    name: Name
    supers: tuple[Name, ...] = ()
    attrs: tuple[AttrDecl, ...] = ()
    subclass_of: tuple[Name, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "supers", tuple(self.supers))
        object.__setattr__(self, "attrs", tuple(self.attrs))
        object.__setattr__(self, "subclass_of", tuple(self.subclass_of))


@dataclass(frozen=True)
class ClassInfo:
    decl: ClassDecl
    attrs: tuple[AttrDecl, ...]
    origins: FrozenMap  # attribute name -> class that declared it
    ancestors: frozenset  # reflexive-transitive superclasses

    def attr(self, name: Name) -> Optional[AttrDecl]:
        for a in self.attrs:
            if a.name == name:
                return a
        return None


@dataclass(frozen=True)
class StaticDecl:
    name: Name
    type: TypeName
    init: Value


@dataclass(frozen=True)
class World:
    strict: bool = False
    classes: FrozenMap = EMPTY
    class_order: tuple[Name, ...] = ()
    objects: FrozenMap = EMPTY  # OidV -> RecV
    loc_types: FrozenMap = EMPTY  # LocV -> TypeName
    statics: FrozenMap = EMPTY  # Name -> LocV
    static_decls: FrozenMap = EMPTY  # Name -> StaticDecl
    assocs: FrozenMap = EMPTY  # Name -> AssocDecl
    assoc_order: tuple[Name, ...] = ()
    next_serial: FrozenMap = EMPTY  # class Name -> last serial used
    next_loc: int = 0

    # -- lookups used by the carrier judgment ------------------------------

    def has_class(self, name: Name) -> bool:
        return name in self.classes

    def class_info(self, name: Name) -> ClassInfo:
        try:
            return self.classes[name]
        except KeyError:
            raise UnknownClass(f"class {name!r} is not declared") from None

    def class_of(self, oid: OidV) -> Optional[Name]:
        """classOf for allocated identifiers, None otherwise."""
        return oid.cls if oid in self.objects else None

    def is_subclass(self, c1: Name, c2: Name) -> bool:
        info = self.classes.get(c1)
        return info is not None and c2 in info.ancestors

    def loc_type(self, loc: LocV) -> Optional[TypeName]:
        return self.loc_types.get(loc)

    def attr_names(self, cls: Name) -> tuple[Name, ...]:
        return tuple(a.name for a in self.class_info(cls).attrs)

    def attr_decl(self, cls: Name, name: Name) -> AttrDecl:
        a = self.class_info(cls).attr(name)
        if a is None:
            raise NoSuchAttr(f"class {cls} has no attribute {name!r}")
        return a

    def static_locations(self) -> frozenset:
        return frozenset(self.statics.values())

    def with_assoc(self, decl: AssocDecl) -> World:
        return dataclasses.replace(
            self,
            assocs=self.assocs.set(decl.name, decl),
            assoc_order=self.assoc_order + (decl.name,),
        )


def _check_class_types(t: TypeName, world: World, allowed: frozenset) -> None:
    check_type(t)
    for c in class_names_in(t):
        if c not in allowed and not world.has_class(c):
            raise MalformedType(f"undeclared class {c!r} in type {t}")


def declare_class(world: World, decl: ClassDecl, forward: Iterable[Name] = ()) -> World:
    """Add ``decl``.  Attribute types may mention the class itself and any
    name in ``forward`` (classes the caller promises to declare later)."""
    name = check_name(decl.name, "class name")
    if name in RESERVED_TYPE_WORDS:
        raise MalformedType(f"{name!r} is a reserved type name")
    if world.has_class(name):
        raise DuplicateClass(f"class {name} already declared")
    parents = decl.supers + decl.subclass_of
    if name in parents:
        raise InheritanceCycle(f"class {name} cannot be its own superclass")
    for p in parents:
        if not world.has_class(p):
            raise UnknownSuper(f"superclass {p!r} of {name} is not declared")

    allowed = frozenset(forward) | {name}
    own_names = set()
    for a in decl.attrs:
        check_name(a.name, "attribute name")
        if a.name == SELF:
            raise NameConflict(f"{SELF!r} is reserved and cannot be declared in {name}")
        if a.name in own_names:
            raise DuplicateField(f"attribute {a.name!r} declared twice in {name}")
        own_names.add(a.name)
        _check_class_types(a.type, world, allowed)

    inherited: dict[Name, AttrDecl] = {}
    origins: dict[Name, Name] = {}
    for s in decl.supers:
        sinfo = world.classes[s]
        for a in sinfo.attrs:
            origin = sinfo.origins[a.name]
            if a.name in inherited:
                if origins[a.name] != origin:
                    raise NameConflict(
                        f"{name} inherits two different attributes named {a.name!r} "
                        f"(from {origins[a.name]} and {origin})"
                    )
                continue
            inherited[a.name] = a
            origins[a.name] = origin

    for a in decl.attrs:
        if a.name in inherited:
            if world.strict:
                raise StrictRedefinition(
                    f"{name} redefines inherited attribute {a.name!r} (strict inheritance)"
                )
            del inherited[a.name]
        origins[a.name] = name
    attrs = tuple(inherited.values()) + decl.attrs

    if world.strict:
        mine = {a.name: a for a in attrs}
        for p in decl.subclass_of:
            for pa in world.classes[p].attrs:
                ours = mine.get(pa.name)
                if ours is None or not ours.same_shape(pa):
                    raise StrictRedefinition(
                        f"{name} sub {p} but does not keep attribute {pa.name!r} unchanged"
                    )

    ancestors = frozenset({name}).union(*(world.classes[p].ancestors for p in parents))
    info = ClassInfo(decl, attrs, FrozenMap(origins), ancestors)
    return dataclasses.replace(
        world,
        classes=world.classes.set(name, info),
        class_order=world.class_order + (name,),
    )


def sub_class_of(world: World, c1: Name, c2: Name) -> bool:
    world.class_info(c1)
    world.class_info(c2)
    return world.is_subclass(c1, c2)


def instance_type(world: World, cls: Name) -> Rec:
    """Record type of the instances of ``cls``: ``self`` plus one field per attribute."""
    info = world.class_info(cls)
    return Rec(((SELF, ClassT(cls)),) + tuple((a.name, a.field_type) for a in info.attrs))


def _alloc_locations(world: World, types: Iterable[TypeName]) -> tuple[World, list[LocV]]:
    locs = []
    loc_types = dict(world.loc_types)
    n = world.next_loc
    for t in types:
        n += 1
        loc = LocV(n)
        loc_types[loc] = t
        locs.append(loc)
    return dataclasses.replace(world, loc_types=FrozenMap(loc_types), next_loc=n), locs


def instantiate(
    world: World, store: Store, cls: Name, init: Mapping[Name, Value]
) -> tuple[World, Store, OidV]:
    """Create a fresh object of ``cls`` with one fresh location per mutable attribute."""
    from .datastore import addobj

    info = world.class_info(cls)
    names = {a.name for a in info.attrs}
    extra = set(init) - names
    if extra:
        raise NoSuchAttr(f"class {cls} has no attribute(s) {', '.join(sorted(extra))}")
    missing = [a.name for a in info.attrs if a.name not in init]
    if missing:
        raise MissingInit(f"no initial value for {cls}.{', '.join(missing)}")
    for a in info.attrs:
        if not in_carrier(init[a.name], a.type, world):
            raise CarrierViolation(f"{init[a.name]!r} is not a valid {cls}.{a.name}: {a.type}")

    serial = world.next_serial.get(cls, 0) + 1
    oid = OidV(cls, serial)
    mutable = [a for a in info.attrs if a.mutable]
    world, locs = _alloc_locations(world, [a.type for a in mutable])
    loc_of = {a.name: loc for a, loc in zip(mutable, locs)}
    record = RecV(
        ((SELF, oid),)
        + tuple((a.name, loc_of[a.name] if a.mutable else init[a.name]) for a in info.attrs)
    )
    world = dataclasses.replace(
        world,
        objects=world.objects.set(oid, record),
        next_serial=world.next_serial.set(cls, serial),
    )
    store = addobj(world, store, oid, {loc_of[a.name]: init[a.name] for a in mutable})
    return world, store, oid


def declare_static_attr(
    world: World, store: Store, name: Name, t: TypeName, init: Value
) -> tuple[World, Store]:
    """Give a static attribute a location that belongs to no object."""
    from .datastore import Store

    check_name(name, "static attribute name")
    if name in world.statics:
        raise DuplicateStatic(f"static attribute {name!r} already declared")
    check_type(t, world)
    if not in_carrier(init, t, world):
        raise CarrierViolation(f"{init!r} is not a valid initial value for static {name}: {t}")
    world, (loc,) = _alloc_locations(world, [t])
    world = dataclasses.replace(
        world,
        statics=world.statics.set(name, loc),
        static_decls=world.static_decls.set(name, StaticDecl(name, t, init)),
    )
    return world, Store(store.oids, store.mem.set(loc, init))


def location_fields(world: World, oid: OidV) -> list[LocV]:
    """The locations owned by ``oid``: one per mutable attribute of its class.

    Constant attributes may hold location values too, but those are ordinary
    values and do not belong to the object.
    """
    record = world.objects[oid]
    return [record.get(a.name) for a in world.class_info(oid.cls).attrs if a.mutable]
