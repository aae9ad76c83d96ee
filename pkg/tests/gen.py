"""Seeded random generators for worlds, stores, models and scripts."""

from __future__ import annotations

import random

from sysmod import (
    BOOLEAN,
    EMPTY_STORE,
    FALSE,
    INT,
    NIL,
    TRUE,
    AssocDecl,
    AttrDecl,
    AttributeOwned,
    ClassDecl,
    ClassT,
    IntV,
    ListT,
    ListV,
    Mediator,
    Oid,
    Ordered,
    Qualified,
    RedundantHybrid,
    SetT,
    SetV,
    UnknownV,
    World,
    declare_assoc,
    declare_class,
    instantiate,
)
from sysmod.errors import NameConflict, StrictRedefinition
from sysmod.universe import Basic

FIELD_NAMES = ["a", "b", "c", "d", "e", "f", "g", "h", "k", "m", "n", "p", "q", "r", "s", "t", "u", "w", "x", "y", "z"]


def rand_basic(rng: random.Random):
    return rng.choice([INT, BOOLEAN, Basic("Bool"), Basic("Void")])


def rand_type(rng: random.Random, depth: int = 2):
    """A random closed type name without class references."""
    from sysmod import Prod, Rec, Ref

    if depth == 0 or rng.random() < 0.4:
        return rand_basic(rng)
    k = rng.randrange(6)
    if k == 0:
        names = rng.sample(FIELD_NAMES, rng.randrange(4))
        return Rec(tuple((n, rand_type(rng, depth - 1)) for n in names))
    if k == 1:
        return Prod(tuple(rand_type(rng, depth - 1) for _ in range(rng.randrange(3))))
    if k == 2:
        return Ref(rand_type(rng, depth - 1))
    if k == 3:
        return SetT(rand_type(rng, depth - 1))
    if k == 4:
        return ListT(rand_type(rng, depth - 1))
    return rand_basic(rng)


def members(world, store, cls, direct=False):
    return sorted(
        o for o in store.oids if (o.cls == cls if direct else world.is_subclass(o.cls, cls))
    )


def rand_value(rng: random.Random, t, world, store, unknown=0.1):
    """A random carrier member of ``t`` (restricted to the types the generators use)."""
    if rng.random() < unknown:
        return UnknownV(t)
    if t == INT:
        return IntV(rng.randint(-5, 5))
    if t == BOOLEAN:
        return rng.choice([TRUE, FALSE])
    if isinstance(t, (ClassT, Oid)):
        pool = members(world, store, t.name, direct=isinstance(t, ClassT))
        if not pool or rng.random() < 0.2:
            return NIL
        return rng.choice(pool)
    if isinstance(t, SetT):
        return SetV(frozenset(rand_value(rng, t.elem, world, store, 0) for _ in range(rng.randrange(4))))
    if isinstance(t, ListT):
        return ListV(tuple(rand_value(rng, t.elem, world, store, 0) for _ in range(rng.randrange(4))))
    raise ValueError(t)


def rand_hierarchy(rng: random.Random, max_classes=10, max_attrs=6, strict=False, redefine=0.0):
    """Declare up to ``max_classes`` classes with random multiple inheritance.

    Attribute names are unique per declaring class, so only deliberate
    redefinitions (probability ``redefine`` per class) clash.  Returns the
    world and a list of (class, attribute) redefinitions that were attempted.
    """
    world = World(strict=strict)
    n = rng.randint(1, max_classes)
    attempted = []
    for i in range(n):
        name = f"C{i}"
        prior = list(world.class_order)
        supers = tuple(rng.sample(prior, rng.randint(0, min(2, len(prior))))) if prior else ()
        inherited = {}
        kept = []
        for s in supers:
            extra = {a.name: a for a in world.class_info(s).attrs if a.name not in inherited}
            if len(inherited) + len(extra) > max_attrs:
                continue
            inherited.update(extra)
            kept.append(s)
        supers = tuple(kept)
        room = max(0, max_attrs - len(inherited))
        attrs = []
        for j in range(rng.randint(0, room)):
            if prior and rng.random() < 0.25:
                target = rng.choice(prior + [name])
                t = rng.choice([Oid(target), ClassT(target)])
            else:
                t = rng.choice([INT, BOOLEAN, SetT(INT), ListT(BOOLEAN)])
            attrs.append(AttrDecl(f"{name.lower()}_{j}", t, rng.random() < 0.7))
        redefs = []
        if inherited and rng.random() < redefine:
            victim = rng.choice(sorted(inherited))
            old = inherited[victim]
            new_t = rng.choice([old.type, INT, BOOLEAN])
            attrs.append(AttrDecl(victim, new_t, rng.choice([old.mutable, not old.mutable])))
            redefs.append(victim)
        decl = ClassDecl(name, supers, tuple(attrs))
        try:
            world = declare_class(world, decl)
        except NameConflict:
            # an earlier redefinition made two supers disagree on a name
            continue
        except StrictRedefinition:
            attempted.append((name, redefs[0] if redefs else None, "rejected"))
            continue
        if redefs:
            attempted.append((name, redefs[0], "accepted"))
    return world, attempted


def rand_init(rng, world, store, cls, unknown=0.1):
    return {a.name: rand_value(rng, a.type, world, store, unknown) for a in world.class_info(cls).attrs}


def populate(rng, world, store, classes, count):
    for _ in range(count):
        cls = rng.choice(classes)
        world, store, _ = instantiate(world, store, cls, rand_init(rng, world, store, cls))
    return world, store


# ---------------------------------------------------------------------------
# Association fixtures: a small base world per strategy


def assoc_world(kind: str, subclass_signature=True):
    """World with classes A, A2 <: A, B, B2 <: B and one association ``R`` of ``kind``."""
    w = World()

    def cls(name, supers=(), attrs=()):
        nonlocal w
        w = declare_class(w, ClassDecl(name, supers, tuple(attrs)), forward=("A", "A2", "B", "B2", "M"))

    if kind == "attribute":
        cls("B", attrs=[AttrDecl("tag", INT, False)])
        cls("B2", ("B",))
        cls("A", attrs=[AttrDecl("r", Oid("B")), AttrDecl("n", INT)])
        cls("A2", ("A",))
        decl = AssocDecl("R", ("A", "B"), AttributeOwned("A", "r"))
    elif kind == "mediator":
        cls("A")
        cls("A2", ("A",))
        cls("B")
        cls("B2", ("B",))
        cls("M", attrs=[AttrDecl("x", Oid("A")), AttrDecl("y", Oid("B")), AttrDecl("w", INT)])
        decl = AssocDecl("R", ("A", "B"), Mediator("M", ("x", "y"), ("w",)))
    elif kind == "redundant":
        cls("B", attrs=[AttrDecl("coll", SetT(Oid("A")))])
        cls("B2", ("B",))
        cls("A", attrs=[AttrDecl("med", Oid("B"))])
        cls("A2", ("A",))
        decl = AssocDecl("R", ("A", "B"), RedundantHybrid("A", "med", "B", "coll"))
    elif kind == "ordered":
        cls("B")
        cls("B2", ("B",))
        cls("A", attrs=[AttrDecl("xs", ListT(Oid("B")))])
        cls("A2", ("A",))
        decl = AssocDecl("R", ("A", "B"), Ordered("A", "xs"))
    elif kind == "qualified":
        cls("A")
        cls("A2", ("A",))
        cls("B")
        cls("B2", ("B",))
        cls("M", attrs=[AttrDecl("x", Oid("A")), AttrDecl("y", Oid("B")), AttrDecl("q", INT, False)])
        decl = AssocDecl("R", ("A", "B"), Qualified("M", INT))
    else:
        raise ValueError(kind)
    return declare_assoc(w, decl), EMPTY_STORE


KINDS = ("attribute", "mediator", "redundant", "ordered", "qualified")


def rand_assoc_store(rng: random.Random, kind: str, steps=None, raw_writes=True):
    """Random store over :func:`assoc_world` mixing creation, links and raw writes.

    Raw writes go through ``setval_attr`` on the association's own
    attributes, so for the redundant strategy they can leave the two sides
    out of step.  Returns (world, store).
    """
    from sysmod import link, setval_attr
    from sysmod.errors import SysModError

    world, store = assoc_world(kind)
    decl = world.assocs["R"]
    plain = ["A", "A2", "B", "B2"]
    steps = rng.randint(0, 25) if steps is None else steps
    for _ in range(steps):
        op = rng.random()
        if op < 0.35 or not store.oids:
            cls = rng.choice(plain + (["M"] if kind in ("mediator", "qualified") else []))
            init = rand_init(rng, world, store, cls)
            if kind == "redundant" and not raw_writes:
                # start unlinked so that only ``link`` shapes the two sides
                init = {"med": NIL} if "med" in init else {"coll": SetV(frozenset())}
            world, store, _ = instantiate(world, store, cls, init)
        elif op < 0.75:
            xs, ys = members(world, store, "A"), members(world, store, "B")
            if not xs or not ys:
                continue
            tup = [rng.choice(xs), rng.choice(ys)]
            tup += [IntV(rng.randint(0, 3)) for _ in decl.extra_types or ()]
            try:
                world, store = link(world, store, "R", tup)
            except SysModError:
                pass
        elif raw_writes:
            candidates = [
                (o, a) for o in sorted(store.oids) for a in world.class_info(o.cls).attrs if a.mutable
            ]
            if not candidates:
                continue
            o, a = rng.choice(candidates)
            store = setval_attr(world, store, o, a.name, rand_value(rng, a.type, world, store))
    return world, store


# ---------------------------------------------------------------------------
# Model and script text


class ModelPlan:
    """A random model in source form plus what the script generator needs to know."""

    def __init__(self):
        self.classes = []  # (name, supers, [(attr, type text, mutable)])
        self.assocs = []  # (name, kind, sig, text)
        self.statics = []  # (name, type text, literal)
        self.managed = set()  # (class, attr) pairs only ``link`` may touch
        self.mediators = set()

    def text(self) -> str:
        lines = []
        for name, supers, attrs in self.classes:
            ext = f" extends {', '.join(supers)}" if supers else ""
            body = "; ".join(f"{a}: {'loc ' if m else ''}{t}" for a, t, m in attrs)
            lines.append(f"class {name}{ext} {{ {body} }}" if body else f"class {name}{ext} {{}}")
        lines += [f"static {n}: {t} = {lit}" for n, t, lit in self.statics]
        lines += [text for *_, text in self.assocs]
        return "\n".join(lines) + "\n"


def rand_model(rng: random.Random) -> ModelPlan:
    plan = ModelPlan()
    n = rng.randint(2, 6)
    names = [f"K{i}" for i in range(n)]
    attrs = {c: [] for c in names}
    supers = {}
    for i, c in enumerate(names):
        supers[c] = tuple(rng.sample(names[:i], rng.randint(0, min(2, i)))) if i else ()
        for j in range(rng.randint(0, 3)):
            t = rng.choice(["Int", "Bool", "Set(Int)", "List(Bool)", f"Oid({rng.choice(names)})", rng.choice(names)])
            attrs[c].append((f"{c.lower()}a{j}", t, rng.random() < 0.7))
    for k in range(rng.randint(1, 4)):
        kind = rng.choice(KINDS)
        a, b = rng.sample(names, 2)
        r = f"R{k}"
        if kind == "attribute":
            attrs[a].append((f"r{k}", f"Oid({b})", True))
            plan.assocs.append((r, kind, (a, b), f"assoc {r} ({a}, {b}) via attribute {a}.r{k}"))
        elif kind == "ordered":
            attrs[a].append((f"o{k}", f"List(Oid({b}))", True))
            plan.assocs.append((r, kind, (a, b), f"assoc {r} ({a}, {b}) via ordered {a}.o{k}"))
        elif kind == "redundant":
            attrs[a].append((f"d{k}", f"Oid({b})", True))
            attrs[b].append((f"c{k}", f"Set(Oid({a}))", True))
            plan.managed |= {(a, f"d{k}"), (b, f"c{k}")}
            plan.assocs.append((r, kind, (a, b), f"assoc {r} ({a}, {b}) via redundant {a}.d{k}, {b}.c{k}"))
        elif kind == "mediator":
            m = f"M{k}"
            plan.mediators.add(m)
            extra = rng.random() < 0.5
            mattrs = [("x", f"Oid({a})", True), ("y", f"Oid({b})", True)] + ([("w", "Int", False)] if extra else [])
            plan.classes.append((m, (), mattrs))
            tail = " with (w)" if extra else ""
            plan.assocs.append((r, kind, (a, b), f"assoc {r} ({a}, {b}) via mediator {m} (x, y){tail}"))
        else:
            m = f"Q{k}"
            plan.mediators.add(m)
            plan.classes.append((m, (), [("x", f"Oid({a})", True), ("y", f"Oid({b})", True), ("q", "Int", False)]))
            plan.assocs.append((r, kind, (a, b), f"assoc {r} ({a}, {b}) via qualified {m} by Int"))
    mediator_classes = plan.classes
    plan.classes = [(c, supers[c], attrs[c]) for c in names] + mediator_classes
    for i in range(rng.randint(0, 2)):
        t, lit = rng.choice([("Int", str(rng.randint(-9, 9))), ("Bool", rng.choice(["true", "false"])), ("Set(Int)", "{1, 2}")])
        plan.statics.append((f"s{i}", t, lit))
    return plan


def _literal(rng, t, world, env, unknown=0.15):
    """Literal text for a random carrier member of ``t``, using bound variables for objects."""
    from sysmod.universe import Basic as _B

    if rng.random() < unknown and isinstance(t, _B):
        return "unknown"
    if t == INT:
        return str(rng.randint(-20, 20))
    if isinstance(t, _B):  # Boolean under either spelling
        return rng.choice(["true", "false"])
    if isinstance(t, (ClassT, Oid)):
        ok = [
            v
            for v, o in sorted(env.items())
            if (o.cls == t.name if isinstance(t, ClassT) else world.is_subclass(o.cls, t.name))
        ]
        return rng.choice(ok) if ok and rng.random() < 0.8 else "nil"
    if isinstance(t, SetT):
        return "{" + ", ".join(_literal(rng, t.elem, world, env, 0) for _ in range(rng.randrange(3))) + "}"
    if isinstance(t, ListT):
        return "[" + ", ".join(_literal(rng, t.elem, world, env, 0) for _ in range(rng.randrange(3))) + "]"
    raise ValueError(t)


def rand_script(rng: random.Random, plan: ModelPlan, length=None) -> str:
    """A script whose every statement is valid in sequence.

    The generator runs each statement as it goes so that assertions,
    object choices and qualifiers stay consistent with the evolving store.
    """
    from sysmod import rel_of
    from sysmod.modelio import Interpreter, load_model, parse_script

    world, store = load_model(plan.text())
    interp = Interpreter(world, store)
    lines = []
    qualifiers = 0
    length = rng.randint(1, 30) if length is None else length
    plain = [c for c, _, _ in plan.classes if c not in plan.mediators]
    for i in range(length):
        w = interp.world
        env = {v: o for v, o in interp.env.items()}
        op = rng.random()
        stmt = None
        if op < 0.35 or not env:
            c = rng.choice(plain)
            inits = []
            for a in w.class_info(c).attrs:
                if (c, a.name) in plan.managed or any(
                    w.is_subclass(c, mc) and a.name == ma for mc, ma in plan.managed
                ):
                    inits.append(f"{a.name} = {'nil' if a.name.startswith('d') else '{}'}")
                else:
                    inits.append(f"{a.name} = {_literal(rng, a.type, w, env)}")
            stmt = f"new v{i} : {c}" + (f" {{ {', '.join(inits)} }}" if inits else "")
        elif op < 0.55:
            cands = [
                (v, a)
                for v, o in sorted(env.items())
                for a in w.class_info(o.cls).attrs
                if a.mutable and not any(w.is_subclass(o.cls, mc) and a.name == ma for mc, ma in plan.managed)
            ]
            if cands:
                v, a = rng.choice(cands)
                stmt = f"set {v}.{a.name} = {_literal(rng, a.type, w, env)}"
            elif plan.statics:
                n, t, _ = rng.choice(plan.statics)
                stmt = f"set static {n} = {_literal(rng, w.loc_type(w.statics[n]), w, env)}"
        elif op < 0.85 and plan.assocs:
            r, kind, (a, b), _ = rng.choice(plan.assocs)
            xs = [v for v, o in sorted(env.items()) if w.is_subclass(o.cls, a)]
            ys = [v for v, o in sorted(env.items()) if w.is_subclass(o.cls, b)]
            if xs and ys:
                args = [rng.choice(xs), rng.choice(ys)]
                decl = w.assocs[r]
                if kind == "qualified":
                    qualifiers += 1
                    args.append(str(qualifiers))
                elif decl.extra_types:
                    args.append(str(rng.randint(0, 3)))
                if kind == "ordered" and not isinstance(
                    interp.store.mem.get(w.objects[env[args[0]]].get(decl.strategy.attr)), ListV
                ):
                    stmt = None
                else:
                    stmt = f"link {r} ({', '.join(args)})"
        elif plan.assocs:
            r, kind, (a, b), _ = rng.choice(plan.assocs)
            rel = rel_of(w, interp.store, r)
            if rel and rng.random() < 0.7:
                tup = rng.choice(sorted(rel, key=repr))
                names = {o: v for v, o in env.items()}
                if all(x in names for x in tup[:2]) and len(tup) == 2:
                    stmt = f"assert rel {r} contains ({names[tup[0]]}, {names[tup[1]]})"
            else:
                xs = [v for v, o in sorted(env.items()) if w.is_subclass(o.cls, a)]
                ys = [v for v, o in sorted(env.items()) if w.is_subclass(o.cls, b)]
                if xs and ys and w.assocs[r].arity + len(w.assocs[r].extra_types or ()) == 2:
                    x, y = rng.choice(xs), rng.choice(ys)
                    verb = "contains" if (env[x], env[y]) in rel else "excludes"
                    stmt = f"assert rel {r} {verb} ({x}, {y})"
        if stmt is None:
            stmt = rng.choice(["check", "check", "dump"])
        for s in parse_script(stmt).statements:
            interp.execute(s)
        lines.append(stmt)
    return "\n".join(lines) + "\n"
