"""Independent reference implementations used by the tests.

Nothing here calls the library's subclass relation, attribute lookup or
retrieval functions.  Everything is recomputed from the raw declarations,
the instance records in ``world.objects`` and the raw ``store.mem`` map.
"""

from __future__ import annotations

from collections import deque

from sysmod.associations import AttributeOwned, Mediator, Ordered, Qualified, RedundantHybrid
from sysmod.universe import ListV, LocV, OidV, SetV


def ancestors(world) -> dict:
    """Reflexive-transitive superclasses by breadth-first search over declared edges."""
    edges = {c: list(info.decl.supers) + list(info.decl.subclass_of) for c, info in world.classes.items()}
    out = {}
    for c in edges:
        seen = {c}
        todo = deque([c])
        while todo:
            for p in edges[todo.popleft()]:
                if p not in seen:
                    seen.add(p)
                    todo.append(p)
        out[c] = seen
    return out


def effective_attrs(world, cls) -> dict:
    """name -> (type, mutable), own declarations overriding inherited ones."""
    decl = world.classes[cls].decl
    out = {}
    for s in decl.supers:
        for n, v in effective_attrs(world, s).items():
            out.setdefault(n, v)
    for a in decl.attrs:
        out[a.name] = (a.type, a.mutable)
    return out


def raw_read(world, store, oid, attr):
    """ds(oid.attr) straight from the instance record and memory; None if absent."""
    attrs = effective_attrs(world, oid.cls)
    if attr not in attrs:
        return None
    field = dict(world.objects[oid].fields)[attr]
    if attrs[attr][1]:
        assert isinstance(field, LocV)
        return store.mem[field]
    return field


def _exists_in(world, store, v, cls, anc):
    return isinstance(v, OidV) and v in store.oids and cls in anc[v.cls]


def _pairs(decl, owner_first):
    return (lambda x, y: (x, y)) if owner_first else (lambda x, y: (y, x))


def oracle_attribute(world, store, decl):
    s = decl.strategy
    anc = ancestors(world)
    other = decl.signature[1] if decl.signature[0] == s.owner else decl.signature[0]
    pair = _pairs(decl, decl.signature[0] == s.owner)
    out = set()
    for x in store.oids:
        if s.owner not in anc[x.cls]:
            continue
        for y in store.oids:
            if other in anc[y.cls] and raw_read(world, store, x, s.attr) == y:
                out.add(pair(x, y))
    return out


def oracle_mediator(world, store, decl, roles, extras):
    anc = ancestors(world)
    med = decl.strategy.mediator
    out = set()
    for m in store.oids:
        if m.cls != med:
            continue
        ends = [raw_read(world, store, m, r) for r in roles]
        if all(_exists_in(world, store, e, c, anc) for e, c in zip(ends, decl.signature)):
            out.add(tuple(ends) + tuple(raw_read(world, store, m, e) for e in extras))
    return out


def oracle_redundant(world, store, decl):
    """(direct side, collection side) from the two defining comprehensions."""
    s = decl.strategy
    anc = ancestors(world)
    pair = _pairs(decl, decl.signature[0] == s.direct_class)
    direct, coll = set(), set()
    for x in store.oids:
        if s.direct_class not in anc[x.cls]:
            continue
        for y in store.oids:
            if s.coll_class not in anc[y.cls]:
                continue
            if raw_read(world, store, x, s.direct_attr) == y:
                direct.add(pair(x, y))
            c = raw_read(world, store, y, s.coll_attr)
            if isinstance(c, SetV) and x in c.items:
                coll.add(pair(x, y))
    return direct, coll


def oracle_ordered(world, store, decl):
    s = decl.strategy
    anc = ancestors(world)
    other = decl.signature[1] if decl.signature[0] == s.owner else decl.signature[0]
    out = {}
    for x in store.oids:
        if s.owner not in anc[x.cls]:
            continue
        v = raw_read(world, store, x, s.attr)
        if isinstance(v, ListV):
            out[x] = [y for y in v.items if _exists_in(world, store, y, other, anc)]
    return out


def oracle_qualified(world, store, decl):
    s = decl.strategy
    triples = oracle_mediator(world, store, decl, s.roles, (s.qualifier_attr,))
    by_key = {}
    for a, b, q in triples:
        by_key.setdefault((a, q), set()).add(b)
    unique = all(len(bs) == 1 for bs in by_key.values())
    return triples, unique


def oracle_rel(world, store, decl):
    """Expected relOf output, or the string "inconsistent"."""
    s = decl.strategy
    if isinstance(s, AttributeOwned):
        return oracle_attribute(world, store, decl)
    if isinstance(s, Mediator):
        return oracle_mediator(world, store, decl, s.roles, s.extras)
    if isinstance(s, RedundantHybrid):
        d, c = oracle_redundant(world, store, decl)
        return d if d == c else "inconsistent"
    if isinstance(s, Ordered):
        owner_first = decl.signature[0] == s.owner
        return {(x, y) if owner_first else (y, x) for x, ys in oracle_ordered(world, store, decl).items() for y in ys}
    if isinstance(s, Qualified):
        return oracle_qualified(world, store, decl)[0]
    raise TypeError(s)


def location_fields_raw(world, oid):
    attrs = effective_attrs(world, oid.cls)
    rec = dict(world.objects[oid].fields)
    return [rec[n] for n, (_, mutable) in attrs.items() if mutable]
