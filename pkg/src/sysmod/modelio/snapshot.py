"""Deterministic snapshot documents (text and JSON).

Text layout, one section per header line::

    sysmod snapshot 1
    [classes]       model text, one class per line, declaration order
    [statics]       model text per static; indented line gives location and value
    [associations]  model text per association; indented lines list the links
    [objects]       one header per object, indented attribute values
                    (``name @ loc#n = value`` for mutable attributes)
    [locations]     ``loc#n : Type = value``

Unindented lines of the first three sections together form a model that
replays to the same declarations (see :func:`declarations_of`).
"""

from __future__ import annotations

from ..associations import AssocDecl, check_assoc_consistency, rel_of
from ..classes import World
from ..datastore import Store
from ..errors import SysModError
from .render import (
    format_assoc,
    format_class,
    format_static,
    format_tuple,
    format_type,
    format_value,
)

HEADER = "sysmod snapshot 1"
SECTIONS = ("classes", "statics", "associations", "objects", "locations")
DECLARATION_SECTIONS = ("classes", "statics", "associations")


def _links(world: World, store: Store, decl: AssocDecl) -> tuple[list[str], list[str]]:
    """Rendered link tuples plus any flags for the association."""
    flags = [str(v) for v in check_assoc_consistency(world, store) if v.context[:1] == (decl.name,)]
    try:
        tuples = rel_of(world, store, decl.name)
    except SysModError as e:
        return [], flags or [str(e)]
    return sorted(format_tuple(t) for t in tuples), flags


def snapshot_dict(world: World, store: Store) -> dict:
    statics = []
    for name, decl in sorted(world.static_decls.items()):
        loc = world.statics[name]
        statics.append(
            {
                "name": name,
                "declaration": format_static(decl),
                "location": str(loc),
                "value": format_value(store.mem[loc]) if loc in store.mem else None,
            }
        )
    assocs = []
    for name in sorted(world.assoc_order):
        decl = world.assocs[name]
        links, flags = _links(world, store, decl)
        assocs.append(
            {
                "name": name,
                "declaration": format_assoc(decl),
                "strategy": type(decl.strategy).__name__,
                "links": links,
                "flags": flags,
            }
        )
    objects = []
    for oid in sorted(store.oids):
        record = world.objects.get(oid)
        values, cells = {}, {}
        if record is not None and world.has_class(oid.cls):
            for a in world.class_info(oid.cls).attrs:
                field = record.get(a.name)
                if a.mutable:
                    cells[a.name] = str(field)
                    v = store.mem.get(field)
                    values[a.name] = format_value(v) if v is not None else "<unmapped>"
                else:
                    values[a.name] = format_value(field)
        objects.append({"oid": str(oid), "class": oid.cls, "values": values, "locations": cells})
    locations = []
    for loc in sorted(store.mem):
        t = world.loc_type(loc)
        locations.append(
            {
                "id": str(loc),
                "type": format_type(t) if t is not None else None,
                "value": format_value(store.mem[loc]),
            }
        )
    return {
        "classes": [format_class(world.classes[c].decl) for c in world.class_order],
        "statics": statics,
        "associations": assocs,
        "objects": objects,
        "locations": locations,
    }


def dump_snapshot(world: World, store: Store) -> str:
    d = snapshot_dict(world, store)
    out = [HEADER, "[classes]"]
    out += d["classes"]
    out.append("[statics]")
    for s in d["statics"]:
        out.append(s["declaration"])
        out.append(f"  at {s['location']} = {s['value'] if s['value'] is not None else '<unmapped>'}")
    out.append("[associations]")
    for a in d["associations"]:
        out.append(a["declaration"])
        out += [f"  ! {f}" for f in a["flags"]]
        out += [f"  {t}" for t in a["links"]]
    out.append("[objects]")
    for o in d["objects"]:
        out.append(f"{o['oid']} : {o['class']}")
        for n, v in sorted(o["values"].items()):
            at = f" @ {o['locations'][n]}" if n in o["locations"] else ""
            out.append(f"  {n}{at} = {v}")
    out.append("[locations]")
    for loc in d["locations"]:
        out.append(f"{loc['id']} : {loc['type']} = {loc['value']}")
    return "\n".join(out) + "\n"


def split_sections(doc: str) -> dict[str, list[str]]:
    sections: dict[str, list[str]] = {}
    current = None
    for line in doc.splitlines():
        if line.startswith("[") and line.endswith("]") and line[1:-1] in SECTIONS:
            current = line[1:-1]
            sections[current] = []
        elif current is not None:
            sections[current].append(line)
    return sections


def declarations_of(doc: str) -> str:
    """The replayable model text embedded in a snapshot document."""
    sections = split_sections(doc)
    lines = []
    for name in DECLARATION_SECTIONS:
        lines += [ln for ln in sections.get(name, []) if ln and not ln.startswith(" ")]
    return "\n".join(lines) + ("\n" if lines else "")
