"""Associations and their retrieval functions.

An association is stored inside ordinary objects and locations; its current
links are *derived* from a store by a retrieval function that depends on how
the association is realized.  Five realizations are supported:

``AttributeOwned``
    a to-1 link held in a mutable attribute of the owning class.
``Mediator``
    one intermediate object per link, with one role attribute per
    participant plus optional extra attributes (any arity).
``RedundantHybrid``
    a to-1 attribute on one side and a ``Set(Oid ...)`` collection on the
    other; both must describe the same links.
``Ordered``
    a ``List(Oid ...)`` attribute on the owner; order and duplicates kept.
``Qualified``
    a mediator carrying a qualifier value that picks a unique target.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .classes import AttrDecl, World, instantiate
from .datastore import Store, Violation, setval_attr, val_attr
from .errors import (
    ArityMismatch,
    AssocInconsistent,
    CarrierViolation,
    DuplicateAssoc,
    MultiplicityViolation,
    QualifierNotUnique,
    SysModError,
    StrategyMismatch,
    StrategyShapeMismatch,
    UnderspecifiedValue,
    UnknownAssoc,
)
from .universe import (
    ClassT,
    ListT,
    ListV,
    Name,
    Oid,
    OidV,
    SetT,
    SetV,
    TypeName,
    UnknownV,
    Value,
    canonicalize,
    check_name,
    check_type,
    in_carrier,
)


@dataclass(frozen=True)
class AttributeOwned:
    owner: Name
    attr: Name


@dataclass(frozen=True)
class Mediator:
    mediator: Name
    roles: Optional[tuple[Name, ...]] = None  # inferred when None
    extras: tuple[Name, ...] = ()

    def __post_init__(self):
        if self.roles is not None:
            object.__setattr__(self, "roles", tuple(self.roles))
        object.__setattr__(self, "extras", tuple(self.extras))


@dataclass(frozen=True)
class RedundantHybrid:
    direct_class: Name
    direct_attr: Name
    coll_class: Name
    coll_attr: Name


@dataclass(frozen=True)
class Ordered:
    owner: Name
    attr: Name


@dataclass(frozen=True)
class Qualified:
    mediator: Name
    qualifier_type: TypeName
    roles: Optional[tuple[Name, ...]] = None
    qualifier_attr: Optional[Name] = None

    def __post_init__(self):
        if self.roles is not None:
            object.__setattr__(self, "roles", tuple(self.roles))


Strategy = Union[AttributeOwned, Mediator, RedundantHybrid, Ordered, Qualified]


@dataclass(frozen=True)
class AssocDecl:
    """``extra_types`` may be left as None; declaring fills it in from the strategy."""

    name: Name
    signature: tuple[Name, ...]
    strategy: Strategy
    extra_types: Optional[tuple[TypeName, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "signature", tuple(self.signature))
        if self.extra_types is not None:
            object.__setattr__(self, "extra_types", tuple(self.extra_types))

    @property
    def arity(self) -> int:
        return len(self.signature)


# ---------------------------------------------------------------------------
# Declaration


def _shape(msg: str) -> StrategyShapeMismatch:
    return StrategyShapeMismatch(msg)


def _refers_to(world: World, t: TypeName, cls: Name) -> bool:
    """Whether every non-Nil member of ``t`` is an identifier in Oid(``cls``)."""
    return isinstance(t, (ClassT, Oid)) and world.is_subclass(t.name, cls)


def _mutable_attr(world: World, cls: Name, attr: Name) -> AttrDecl:
    a = world.class_info(cls).attr(attr)
    if a is None:
        raise _shape(f"class {cls} has no attribute {attr!r}")
    if not a.mutable:
        raise _shape(f"{cls}.{attr} must be a loc attribute")
    return a


def _side(decl: AssocDecl, cls: Name, role: str) -> int:
    if cls not in decl.signature:
        raise _shape(f"{role} class {cls} is not part of {decl.name}{decl.signature}")
    return decl.signature.index(cls)


def _no_extras(decl: AssocDecl) -> tuple[TypeName, ...]:
    if decl.extra_types:
        raise _shape(f"{type(decl.strategy).__name__} associations carry no extra attributes")
    return ()


def _infer_roles(world: World, mediator: Name, signature: Sequence[Name]) -> tuple[Name, ...]:
    candidates = [
        a.name
        for a in world.class_info(mediator).attrs
        if a.mutable and isinstance(a.type, (ClassT, Oid))
    ]
    if len(candidates) != len(signature):
        raise _shape(
            f"cannot infer role attributes of {mediator}: "
            f"{len(candidates)} reference attributes for {len(signature)} participants"
        )
    return tuple(candidates)


def _check_roles(world: World, mediator: Name, roles: Sequence[Name], signature: Sequence[Name]) -> None:
    if len(roles) != len(signature):
        raise _shape(f"{mediator} names {len(roles)} roles for {len(signature)} participants")
    if len(set(roles)) != len(roles):
        raise _shape(f"{mediator} role attributes must be distinct")
    for role, cls in zip(roles, signature):
        a = _mutable_attr(world, mediator, role)
        if not _refers_to(world, a.type, cls):
            raise _shape(f"{mediator}.{role}: {a.type} does not refer to {cls}")


def _resolve(world: World, decl: AssocDecl) -> AssocDecl:
    s = decl.strategy
    n = decl.arity
    if isinstance(s, (AttributeOwned, Ordered, RedundantHybrid, Qualified)) and n != 2:
        raise _shape(f"{type(s).__name__} associations must be binary")

    if isinstance(s, (AttributeOwned, Ordered)):
        i = _side(decl, s.owner, "owner")
        other = decl.signature[1 - i]
        a = _mutable_attr(world, s.owner, s.attr)
        t = a.type
        if isinstance(s, Ordered):
            if not isinstance(t, ListT):
                raise _shape(f"{s.owner}.{s.attr} must have a List type")
            t = t.elem
        if not _refers_to(world, t, other):
            raise _shape(f"{s.owner}.{s.attr}: {a.type} does not refer to {other}")
        return dataclasses.replace(decl, extra_types=_no_extras(decl))

    if isinstance(s, RedundantHybrid):
        i = _side(decl, s.direct_class, "direct")
        if s.coll_class != decl.signature[1 - i]:
            raise _shape(f"collection side {s.coll_class} must be the other participant")
        d = _mutable_attr(world, s.direct_class, s.direct_attr)
        if not _refers_to(world, d.type, s.coll_class):
            raise _shape(f"{s.direct_class}.{s.direct_attr} does not refer to {s.coll_class}")
        c = _mutable_attr(world, s.coll_class, s.coll_attr)
        if not (isinstance(c.type, SetT) and _refers_to(world, c.type.elem, s.direct_class)):
            raise _shape(f"{s.coll_class}.{s.coll_attr} must be a Set of {s.direct_class} identifiers")
        return dataclasses.replace(decl, extra_types=_no_extras(decl))

    if isinstance(s, Mediator):
        if n < 2:
            raise _shape("associations need at least two participants")
        world.class_info(s.mediator)
        roles = s.roles if s.roles is not None else _infer_roles(world, s.mediator, decl.signature)
        _check_roles(world, s.mediator, roles, decl.signature)
        extra_types = []
        for e in s.extras:
            if e in roles:
                raise _shape(f"{s.mediator}.{e} cannot be both a role and an extra attribute")
            a = world.class_info(s.mediator).attr(e)
            if a is None:
                raise _shape(f"class {s.mediator} has no attribute {e!r}")
            extra_types.append(a.type)
        if decl.extra_types is not None and [canonicalize(t) for t in decl.extra_types] != [
            canonicalize(t) for t in extra_types
        ]:
            raise _shape(f"extra attribute types of {decl.name} do not match {s.mediator}")
        return dataclasses.replace(
            decl, strategy=Mediator(s.mediator, roles, s.extras), extra_types=tuple(extra_types)
        )

    if isinstance(s, Qualified):
        world.class_info(s.mediator)
        check_type(s.qualifier_type, world)
        roles = s.roles if s.roles is not None else _infer_roles(world, s.mediator, decl.signature)
        _check_roles(world, s.mediator, roles, decl.signature)
        qt = canonicalize(s.qualifier_type)
        if s.qualifier_attr is None:
            found = [
                a.name
                for a in world.class_info(s.mediator).attrs
                if a.name not in roles and canonicalize(a.type) == qt
            ]
            if len(found) != 1:
                raise _shape(f"{s.mediator} needs exactly one attribute of qualifier type {qt}")
            q = found[0]
        else:
            q = s.qualifier_attr
            a = world.class_info(s.mediator).attr(q)
            if a is None or q in roles or canonicalize(a.type) != qt:
                raise _shape(f"{s.mediator}.{q} is not a qualifier of type {qt}")
        if decl.extra_types is not None and [canonicalize(t) for t in decl.extra_types] != [qt]:
            raise _shape(f"qualified association {decl.name} has exactly the qualifier as extra")
        return dataclasses.replace(
            decl,
            strategy=Qualified(s.mediator, s.qualifier_type, roles, q),
            extra_types=(s.qualifier_type,),
        )

    raise _shape(f"unknown realization strategy {s!r}")


def declare_assoc(world: World, decl: AssocDecl) -> World:
    check_name(decl.name, "association name")
    if decl.name in world.assocs:
        raise DuplicateAssoc(f"association {decl.name} already declared")
    for c in decl.signature:
        world.class_info(c)
    for t in decl.extra_types or ():
        check_type(t, world)
    return world.with_assoc(_resolve(world, decl))


def assoc_decl(world: World, name: Name) -> AssocDecl:
    try:
        return world.assocs[name]
    except KeyError:
        raise UnknownAssoc(f"association {name!r} is not declared") from None


# ---------------------------------------------------------------------------
# Retrieval


def _members(world: World, store: Store, cls: Name) -> list[OidV]:
    """Existing identifiers in CAR(Oid cls), in a stable order."""
    return [o for o in sorted(store.oids) if o in world.objects and world.is_subclass(o.cls, cls)]


def _read(world: World, store: Store, oid: OidV, attr: Name) -> Optional[Value]:
    """``ds(oid.attr)``, or None when ``oid``'s class has no such attribute."""
    if world.class_info(oid.cls).attr(attr) is None:
        return None
    return val_attr(world, store, oid, attr)


def _is_member(world: World, store: Store, v: Optional[Value], cls: Name) -> bool:
    return isinstance(v, OidV) and v in store.oids and world.is_subclass(v.cls, cls)


def _arrange(i: int, x: OidV, y: OidV) -> tuple:
    """Put the owner ``x`` at signature position ``i`` of a binary tuple."""
    return (x, y) if i == 0 else (y, x)


def _redundant_sides(world: World, store: Store, decl: AssocDecl) -> tuple[set, set]:
    s = decl.strategy
    i = decl.signature.index(s.direct_class)
    direct, coll = set(), set()
    for x in _members(world, store, s.direct_class):
        y = _read(world, store, x, s.direct_attr)
        if _is_member(world, store, y, s.coll_class):
            direct.add(_arrange(i, x, y))
    for y in _members(world, store, s.coll_class):
        c = _read(world, store, y, s.coll_attr)
        if isinstance(c, SetV):
            for x in c.items:
                if _is_member(world, store, x, s.direct_class):
                    coll.add(_arrange(i, x, y))
    return direct, coll


def _mediator_tuples(world: World, store: Store, decl: AssocDecl) -> set:
    s = decl.strategy
    extras = s.extras if isinstance(s, Mediator) else (s.qualifier_attr,)
    out = set()
    for m in sorted(store.oids):
        if m.cls != s.mediator or m not in world.objects:
            continue
        ends = [val_attr(world, store, m, r) for r in s.roles]
        if all(_is_member(world, store, e, c) for e, c in zip(ends, decl.signature)):
            out.add(tuple(ends) + tuple(val_attr(world, store, m, e) for e in extras))
    return out


def rel_of(world: World, store: Store, name: Name) -> set:
    """The current links of association ``name``: tuples of identifiers then extras."""
    decl = assoc_decl(world, name)
    s = decl.strategy
    if isinstance(s, AttributeOwned):
        i = decl.signature.index(s.owner)
        other = decl.signature[1 - i]
        out = set()
        for x in _members(world, store, s.owner):
            y = _read(world, store, x, s.attr)
            if _is_member(world, store, y, other):
                out.add(_arrange(i, x, y))
        return out
    if isinstance(s, Ordered):
        i = decl.signature.index(s.owner)
        return {_arrange(i, x, y) for x, ys in ordered_binary_rel_of(world, store, name).items() for y in ys}
    if isinstance(s, RedundantHybrid):
        direct, coll = _redundant_sides(world, store, decl)
        if direct != coll:
            raise AssocInconsistent(
                f"{name}: direct and collection sides disagree on "
                f"{len(direct ^ coll)} link(s)"
            )
        return direct
    return _mediator_tuples(world, store, decl)


def binary_rel_of(world: World, store: Store, name: Name) -> set:
    decl = assoc_decl(world, name)
    if decl.arity != 2 or decl.extra_types:
        raise StrategyMismatch(f"{name} is not a plain binary association")
    return rel_of(world, store, name)


def ordered_binary_rel_of(world: World, store: Store, name: Name) -> dict[OidV, list[OidV]]:
    """Owner -> ordered targets.  Owners whose list is unknown are left out."""
    decl = assoc_decl(world, name)
    s = decl.strategy
    if not isinstance(s, Ordered):
        raise StrategyMismatch(f"{name} is not realized as an ordered association")
    other = decl.signature[1 - decl.signature.index(s.owner)]
    out = {}
    for x in _members(world, store, s.owner):
        v = _read(world, store, x, s.attr)
        if isinstance(v, ListV):
            out[x] = [y for y in v.items if _is_member(world, store, y, other)]
    return out


def _qualifier_clashes(triples: set) -> list[tuple]:
    seen: dict[tuple, set] = {}
    for a, b, q in triples:
        seen.setdefault((a, q), set()).add(b)
    return sorted(
        ((a, q, frozenset(bs)) for (a, q), bs in seen.items() if len(bs) > 1), key=repr
    )


def qualified_binary_rel_of(world: World, store: Store, name: Name) -> set:
    decl = assoc_decl(world, name)
    if not isinstance(decl.strategy, Qualified):
        raise StrategyMismatch(f"{name} is not a qualified association")
    triples = _mediator_tuples(world, store, decl)
    clashes = _qualifier_clashes(triples)
    if clashes:
        a, q, _ = clashes[0]
        raise QualifierNotUnique(f"{name}: qualifier {q!r} of {a} selects several targets")
    return triples


# ---------------------------------------------------------------------------
# Mutation


def _default_value(t: TypeName) -> Value:
    return UnknownV(t)


def link(
    world: World, store: Store, name: Name, tup: Sequence[Value], overwrite: bool = True
) -> tuple[World, Store]:
    """Add a link by updating the association's underlying objects.

    For the to-1 realizations (attribute-owned and redundant) an existing
    link of the owner is replaced, unless ``overwrite`` is False, in which
    case :class:`MultiplicityViolation` is raised.
    """
    decl = assoc_decl(world, name)
    s = decl.strategy
    tup = tuple(tup)
    n, k = decl.arity, len(decl.extra_types or ())
    if len(tup) != n + k:
        raise ArityMismatch(f"{name} links {n} objects and {k} extra value(s), got {len(tup)}")
    for v, c in zip(tup, decl.signature):
        if not _is_member(world, store, v, c):
            raise CarrierViolation(f"{v!r} is not an existing object of {c} (or a subclass)")
    for v, t in zip(tup[n:], decl.extra_types or ()):
        if not in_carrier(v, t, world):
            raise CarrierViolation(f"{v!r} is not a valid {t} for {name}")

    if isinstance(s, (AttributeOwned, Ordered)):
        i = decl.signature.index(s.owner)
        x, y = tup[i], tup[1 - i]
        try:
            current = val_attr(world, store, x, s.attr)
        except SysModError as e:  # owner class lacks the attribute
            raise CarrierViolation(f"{x} cannot own links of {name}: {e}") from e
        if isinstance(s, Ordered):
            if not isinstance(current, ListV):
                raise UnderspecifiedValue(f"{x}.{s.attr} is not a known list")
            return world, setval_attr(world, store, x, s.attr, ListV(current.items + (y,)))
        if not overwrite and _is_member(world, store, current, decl.signature[1 - i]) and current != y:
            raise MultiplicityViolation(f"{x} is already linked to {current} via {name}")
        return world, setval_attr(world, store, x, s.attr, y)

    if isinstance(s, RedundantHybrid):
        i = decl.signature.index(s.direct_class)
        x, y = tup[i], tup[1 - i]
        old = _read(world, store, x, s.direct_attr)
        if old is None or _read(world, store, y, s.coll_attr) is None:
            raise CarrierViolation(f"{x} or {y} does not carry the attributes of {name}")
        if _is_member(world, store, old, s.coll_class) and old != y:
            if not overwrite:
                raise MultiplicityViolation(f"{x} is already linked to {old} via {name}")
            old_coll = val_attr(world, store, old, s.coll_attr)
            if isinstance(old_coll, SetV):
                store = setval_attr(world, store, old, s.coll_attr, SetV(old_coll.items - {x}))
        coll = val_attr(world, store, y, s.coll_attr)
        if not isinstance(coll, SetV):
            raise UnderspecifiedValue(f"{y}.{s.coll_attr} is not a known set")
        store = setval_attr(world, store, x, s.direct_attr, y)
        store = setval_attr(world, store, y, s.coll_attr, SetV(coll.items | {x}))
        return world, store

    if isinstance(s, Qualified):
        a, b, q = tup
        for a2, b2, q2 in _mediator_tuples(world, store, decl):
            if a2 == a and q2 == q and b2 != b:
                raise QualifierNotUnique(f"{name}: {a} already reaches {b2} under qualifier {q!r}")
        extras = {s.qualifier_attr: q}
    else:
        extras = dict(zip(s.extras, tup[n:]))
    init = dict(zip(s.roles, tup[:n]))
    init.update(extras)
    for a in world.class_info(s.mediator).attrs:
        init.setdefault(a.name, _default_value(a.type))
    world, store, _ = instantiate(world, store, s.mediator, init)
    return world, store


# ---------------------------------------------------------------------------
# Consistency


def check_assoc_consistency(world: World, store: Store) -> list[Violation]:
    out = []
    for name in world.assoc_order:
        decl = world.assocs[name]
        s = decl.strategy
        try:
            if isinstance(s, RedundantHybrid):
                direct, coll = _redundant_sides(world, store, decl)
                diff = direct ^ coll
                if diff:
                    shown = ", ".join(
                        f"({x}, {y})" + (" direct only" if (x, y) in direct else " collection only")
                        for x, y in sorted(diff)
                    )
                    out.append(Violation("association inconsistency", f"{name}: {shown}", (name, frozenset(diff))))
            elif isinstance(s, Qualified):
                for a, q, bs in _qualifier_clashes(_mediator_tuples(world, store, decl)):
                    out.append(
                        Violation(
                            "qualifier not unique",
                            f"{name}: {a} with qualifier {q!r} reaches {len(bs)} objects",
                            (name, a, q),
                        )
                    )
        except SysModError as e:
            out.append(Violation("association", f"{name}: cannot evaluate ({e})", (name,)))
    return out
