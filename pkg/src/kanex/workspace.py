"""YAML workspaces: named categories, functors, transformations, rings and modules.

Every entity is validated while loading; the first problem aborts the load
with the file and line of the offending entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import yaml

from .backends import FINAB, FINSET, ValuedFunctor, ValuedNatTrans, validate_valued_functor, validate_valued_nat_trans
from .cmod import ModulePresentation, RingPresentation, module_to_functor, ring_to_category, validate_ring
from .errors import KanexError, ParseError, UnknownEntity, ValidationError
from .finab import AbMap, FgAbGroup
from .fincat import (
    FinCat,
    FunctorRep,
    NatTransRep,
    leq_id,
    make_category,
    opposite,
    poset_category,
    validate_category,
    validate_functor,
    validate_nat_trans,
)
from .finset import FinSetMap, FinSetObj

SECTIONS = ("categories", "functors", "transformations", "rings", "modules")
VALUE_TARGETS = ("FinSet", "Ab")


class _Loc(dict):
    line: int | None = None
    key_lines: dict


class _LocList(list):
    line: int | None = None


class _Loader(yaml.SafeLoader):
    pass


def _construct_mapping(loader, node):
    out = _Loc()
    out.line = node.start_mark.line + 1
    out.key_lines = {}
    for knode, vnode in node.value:
        key = loader.construct_object(knode, deep=True)
        if key in out:
            raise ParseError(f"duplicate key {key!r}", loader.name, knode.start_mark.line + 1)
        out[key] = loader.construct_object(vnode, deep=True)
        out.key_lines[key] = knode.start_mark.line + 1
    return out


def _construct_sequence(loader, node):
    out = _LocList(loader.construct_object(v, deep=True) for v in node.value)
    out.line = node.start_mark.line + 1
    return out


_Loader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _construct_mapping)
_Loader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_SEQUENCE_TAG, _construct_sequence)


def _skeys(d):
    """String keys, so that ``0:`` and ``"0":`` name the same object."""
    if not isinstance(d, dict):
        return d
    out = _Loc((str(k), v) for k, v in d.items())
    out.line = getattr(d, "line", None)
    out.key_lines = {str(k): v for k, v in getattr(d, "key_lines", {}).items()}
    return out


def _line(obj, key=None):
    if key is not None and isinstance(obj, _Loc):
        return obj.key_lines.get(key, obj.line)
    return getattr(obj, "line", None)


@dataclass
class Workspace:
    source: str | None = None
    categories: dict = field(default_factory=dict)
    functors: dict = field(default_factory=dict)
    transformations: dict = field(default_factory=dict)
    rings: dict = field(default_factory=dict)
    modules: dict = field(default_factory=dict)
    # per-entity extra data needed to render or serialize
    meta: dict = field(default_factory=dict)
    lines: dict = field(default_factory=dict)

    def get(self, kind: str, name: str):
        table = getattr(self, kind)
        if name not in table:
            raise UnknownEntity(f"no {kind[:-1]} named {name!r}")
        return table[name]

    def find(self, name: str):
        """(kind, entity) for a name, searching every section."""
        for kind in SECTIONS:
            table = getattr(self, kind)
            if name in table:
                return kind, table[name]
        raise UnknownEntity(f"no entity named {name!r}")

    def __eq__(self, other):
        if not isinstance(other, Workspace):
            return NotImplemented
        return serialize_data(self) == serialize_data(other)


# ------------------------------------------------------------- parsing


class _Ctx:
    def __init__(self, source):
        self.source = source

    def fail(self, msg, node=None, key=None):
        raise ValidationError(msg, self.source, _line(node, key))

    def need(self, node, key, kind=None):
        if not isinstance(node, dict) or key not in node:
            self.fail(f"missing field {key!r}", node)
        v = node[key]
        if kind is not None and not isinstance(v, kind):
            self.fail(f"field {key!r} must be a {kind.__name__ if isinstance(kind, type) else 'value of the right kind'}", node, key)
        return v


def parse_workspace(text: str, source: str | None = None) -> Workspace:
    try:
        loader = _Loader(text)
        loader.name = source
        try:
            doc = loader.get_single_data()
        finally:
            loader.dispose()
    except ParseError:
        raise
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        raise ParseError(str(getattr(e, "problem", e)), source, mark.line + 1 if mark else None) from None
    if doc is None:
        doc = _Loc()
    if not isinstance(doc, dict):
        raise ParseError("workspace must be a mapping", source, _line(doc))
    ctx = _Ctx(source)
    for key in doc:
        if key not in SECTIONS:
            ctx.fail(f"unknown section {key!r}", doc, key)
    ws = Workspace(source)
    for name, spec in (doc.get("categories") or {}).items():
        ws.categories[str(name)] = _parse_category(ctx, spec)
        ws.lines[("categories", str(name))] = _line(doc["categories"], name)
    for name, spec in (doc.get("rings") or {}).items():
        ws.rings[str(name)] = _parse_ring(ctx, spec)
    for name, spec in (doc.get("functors") or {}).items():
        ws.functors[str(name)], ws.meta[("functors", str(name))] = _parse_functor(ctx, ws, spec)
    for name, spec in (doc.get("transformations") or {}).items():
        ws.transformations[str(name)], ws.meta[("transformations", str(name))] = _parse_transformation(ctx, ws, spec)
    for name, spec in (doc.get("modules") or {}).items():
        ws.modules[str(name)] = _parse_module(ctx, ws, spec)
        ws.meta[("modules", str(name))] = {"ring": str(spec["ring"])}
    return ws


def load_workspace(path: str) -> Workspace:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ParseError(f"cannot read workspace: {e.strerror}", path) from None
    return parse_workspace(text, path)


def _parse_category(ctx: _Ctx, spec) -> FinCat:
    if not isinstance(spec, dict):
        ctx.fail("category must be a mapping", spec)
    if "poset" in spec:
        p = spec["poset"]
        elements = [str(x) for x in ctx.need(p, "elements", list)]
        pairs = {(str(a), str(b)) for a, b in (p.get("order") or [])}
        # reflexive-transitive closure of the generating pairs
        leq = {(x, x) for x in elements} | pairs
        changed = True
        while changed:
            changed = False
            for a, b in list(leq):
                for c, d in list(leq):
                    if b == c and (a, d) not in leq:
                        leq.add((a, d))
                        changed = True
        for a, b in leq:
            if a != b and (b, a) in leq:
                ctx.fail(f"order is not antisymmetric: {a} and {b}", p)
            if a not in elements or b not in elements:
                ctx.fail(f"order mentions unknown element {a if a not in elements else b}", p)
        return poset_category(elements, lambda x, y: (x, y) in leq)
    objects = [str(x) for x in ctx.need(spec, "objects", list)]
    if len(set(objects)) != len(objects):
        ctx.fail("duplicate object ids", spec, "objects")
    arrows = []
    for m in spec.get("morphisms") or []:
        if not isinstance(m, dict):
            ctx.fail("morphism entries must be mappings with id, dom, cod", spec, "morphisms")
        arrows.append((str(ctx.need(m, "id")), str(ctx.need(m, "dom")), str(ctx.need(m, "cod"))))
    for _, d, c in arrows:
        for end in (d, c):
            if end not in objects:
                ctx.fail(f"morphism endpoint {end!r} is not an object", spec, "morphisms")
    comps = []
    for entry in spec.get("compose") or []:
        if not isinstance(entry, list) or len(entry) != 3:
            ctx.fail("compose entries must be [g, f, g∘f]", spec, "compose")
        comps.append(tuple(str(x) for x in entry))
    identities = spec.get("identities")
    if identities is not None:
        identities = {str(k): str(v) for k, v in identities.items()}
        for x, e in identities.items():
            if x not in objects or e not in {a[0] for a in arrows}:
                ctx.fail(f"identity {e} of {x} must be a declared morphism on a declared object", spec, "identities")
    cat = make_category(objects, arrows, comps, identities)
    problems = validate_category(cat)
    if problems:
        ctx.fail(f"invalid category: {problems[0]}", spec)
    return cat


def _value_map(ctx, node, backend, dom, cod, where):
    try:
        if backend is FINSET:
            return FinSetMap(dom, cod, list(node))
        return AbMap(dom, cod, [list(r) for r in node])
    except (KanexError, ValueError, TypeError) as e:
        ctx.fail(f"{where}: {e}", _where_node(node))


def _where_node(node):
    return node if hasattr(node, "line") else None


def _value_object(ctx, backend, v, node):
    try:
        if backend is FINSET:
            if not isinstance(v, int) or v < 0:
                raise ValueError("set sizes must be non-negative integers")
            return FinSetObj(v)
        if not isinstance(v, list) or not all(isinstance(d, int) and d >= 0 for d in v):
            raise ValueError("groups are lists of non-negative invariant factors")
        return FgAbGroup.from_invariants(v)
    except ValueError as e:
        ctx.fail(str(e), node)


def _parse_functor(ctx: _Ctx, ws: Workspace, spec):
    src_name = str(ctx.need(spec, "src"))
    dst_name = str(ctx.need(spec, "dst"))
    if src_name not in ws.categories:
        ctx.fail(f"unknown category {src_name!r}", spec, "src")
    C = ws.categories[src_name]
    variance = spec.get("variance", "covariant")
    if variance not in ("covariant", "contravariant"):
        ctx.fail("variance must be covariant or contravariant", spec, "variance")
    src = C if variance == "covariant" else opposite(C)
    on_obj = _skeys(ctx.need(spec, "on_objects", dict))
    on_mor = _skeys(spec.get("on_morphisms") or {})
    meta = {"src": src_name, "dst": dst_name, "variance": variance}
    for x in C.objects:
        if x not in on_obj:
            ctx.fail(f"object {x} has no image", spec, "on_objects")
    if dst_name in VALUE_TARGETS:
        be = FINSET if dst_name == "FinSet" else FINAB
        objs = {x: _value_object(ctx, be, on_obj[x], on_obj) for x in C.objects}
        mors = {}
        for f in C.mor_ids:
            a, b = src.dom(f), src.cod(f)
            if f in on_mor:
                mors[f] = _value_map(ctx, on_mor[f], be, objs[a], objs[b], f"image of {f}")
            elif C.is_identity(f):
                mors[f] = be.identity(objs[a])
            else:
                ctx.fail(f"morphism {f} has no image", spec, "on_morphisms")
        F = ValuedFunctor(src, be, objs, mors)
        problems = validate_valued_functor(F)
        if problems:
            ctx.fail(f"invalid functor: {problems[0]}", spec)
        meta["raw_objects"] = {x: on_obj[x] for x in C.objects}
        return F, meta
    if dst_name not in ws.categories:
        ctx.fail(f"unknown category {dst_name!r}", spec, "dst")
    D = ws.categories[dst_name]
    objs = {x: str(on_obj[x]) for x in C.objects}
    mors = {}
    for f in C.mor_ids:
        if f in on_mor:
            mors[f] = str(on_mor[f])
        elif C.is_identity(f) and objs[C.dom(f)] in D.identity:
            mors[f] = D.identity[objs[C.dom(f)]]
        elif _poset_like(D):
            hs = D.hom(objs[src.dom(f)], objs[src.cod(f)])
            if len(hs) != 1:
                ctx.fail(f"morphism {f} has no image and none is forced", spec, "on_morphisms")
            mors[f] = hs[0]
        else:
            ctx.fail(f"morphism {f} has no image", spec, "on_morphisms")
    F = FunctorRep(src, D, objs, mors)
    problems = validate_functor(F)
    if problems:
        ctx.fail(f"invalid functor: {problems[0]}", spec)
    return F, meta


def _poset_like(c: FinCat) -> bool:
    return all(len(c.hom(x, y)) <= 1 for x in c.objects for y in c.objects)


def _parse_transformation(ctx: _Ctx, ws: Workspace, spec):
    sname, tname = str(ctx.need(spec, "source")), str(ctx.need(spec, "target"))
    for n, key in ((sname, "source"), (tname, "target")):
        if n not in ws.functors:
            ctx.fail(f"unknown functor {n!r}", spec, key)
    F, G = ws.functors[sname], ws.functors[tname]
    comps = _skeys(spec.get("components") or {})
    meta = {"source": sname, "target": tname}
    if isinstance(F, FunctorRep) and isinstance(G, FunctorRep):
        if F.src != G.src or F.dst != G.dst:
            ctx.fail("source and target functors have different boundaries", spec)
        D = F.dst
        out = {}
        for x in F.src.objects:
            if x in comps:
                out[x] = str(comps[x])
            elif _poset_like(D) and len(D.hom(F.obj_map[x], G.obj_map[x])) == 1:
                out[x] = D.hom(F.obj_map[x], G.obj_map[x])[0]
            else:
                ctx.fail(f"component at {x} is missing", spec, "components")
        alpha = NatTransRep(F, G, out)
        problems = validate_nat_trans(alpha, "component")
        if problems:
            ctx.fail(f"invalid transformation: {problems[0]}", spec)
        return alpha, meta
    if isinstance(F, ValuedFunctor) and isinstance(G, ValuedFunctor):
        if F.src != G.src or F.backend is not G.backend:
            ctx.fail("source and target functors have different boundaries", spec)
        out = {}
        for x in F.src.objects:
            if x not in comps:
                ctx.fail(f"component at {x} is missing", spec, "components")
            out[x] = _value_map(ctx, comps[x], F.backend, F.obj_map[x], G.obj_map[x], f"component at {x}")
        alpha = ValuedNatTrans(F, G, out)
        problems = validate_valued_nat_trans(alpha)
        if problems:
            ctx.fail(f"invalid transformation: {problems[0]}", spec)
        return alpha, meta
    ctx.fail("source and target functors land in different kinds of category", spec)


def _coords(v, n):
    if isinstance(v, int):
        return [v] + [0] * (n - 1)
    return list(v)


def _parse_ring(ctx: _Ctx, spec) -> RingPresentation:
    inv = ctx.need(spec, "invariant_factors", list)
    n = len(inv)
    table = ctx.need(spec, "mult_table", list)
    try:
        r = RingPresentation(inv, [[_coords(v, n) for v in row] for row in table])
        validate_ring(r)
    except KanexError as e:
        ctx.fail(f"invalid ring: {e}", spec)
    except (TypeError, ValueError) as e:
        ctx.fail(f"invalid ring: {e}", spec)
    return r


def _parse_module(ctx: _Ctx, ws: Workspace, spec) -> ModulePresentation:
    rname = str(ctx.need(spec, "ring"))
    if rname not in ws.rings:
        ctx.fail(f"unknown ring {rname!r}", spec, "ring")
    ring = ws.rings[rname]
    n = len(ring.invariants)
    inv = ctx.need(spec, "invariant_factors", list)
    tables = spec.get("action_tables") or {}
    actions = {}
    if isinstance(tables, dict):
        items = list(tables.items())
    else:
        items = [(ctx.need(t, "element"), ctx.need(t, "matrix")) for t in tables]
    for k, m in items:
        actions[tuple(_coords(k, n))] = [list(r) for r in m]
    side = spec.get("side", "right")
    m = ModulePresentation(ring, inv, actions, side)
    try:
        module_to_functor(m, ring_to_category(ring))
    except KanexError as e:
        ctx.fail(f"invalid module: {e}", spec)
    return m


# ----------------------------------------------------------- serializing


def diagonal_invariants(g: FgAbGroup) -> list:
    out = [0] * g.rank
    for r in g.relators:
        nz = [i for i, v in enumerate(r) if v]
        if len(nz) != 1 or out[nz[0]]:
            raise ValueError("group is not given by invariant factors")
        out[nz[0]] = abs(r[nz[0]])
    return out


def _map_data(m):
    if isinstance(m, FinSetMap):
        return list(m.table)
    if isinstance(m, AbMap):
        return [list(r) for r in m.matrix]
    return m


def _obj_data(o):
    if isinstance(o, FinSetObj):
        return o.size
    if isinstance(o, FgAbGroup):
        return diagonal_invariants(o)
    return o


def _category_data(c: FinCat) -> dict:
    return {
        "objects": list(c.objects),
        "morphisms": [{"id": m, "dom": d, "cod": k} for m, d, k in c.morphisms],
        "identities": dict(c.identity),
        "compose": [[g, f, c.comp[(g, f)]] for g, f in c.composable_pairs()],
    }


def serialize_data(ws: Workspace) -> dict:
    out: dict[str, Any] = {}
    if ws.categories:
        out["categories"] = {n: _category_data(c) for n, c in ws.categories.items()}
    if ws.rings:
        out["rings"] = {n: {"invariant_factors": list(r.invariants),
                            "mult_table": [[list(v) for v in row] for row in r.mult]} for n, r in ws.rings.items()}
    if ws.functors:
        fs = {}
        for n, F in ws.functors.items():
            meta = ws.meta[("functors", n)]
            d = {"src": meta["src"], "dst": meta["dst"]}
            if meta["variance"] != "covariant":
                d["variance"] = meta["variance"]
            d["on_objects"] = {x: _obj_data(v) for x, v in F.obj_map.items()}
            d["on_morphisms"] = {f: _map_data(v) for f, v in F.mor_map.items()}
            fs[n] = d
        out["functors"] = fs
    if ws.transformations:
        ts = {}
        for n, a in ws.transformations.items():
            meta = ws.meta[("transformations", n)]
            ts[n] = {"source": meta["source"], "target": meta["target"],
                     "components": {x: _map_data(v) for x, v in a.components.items()}}
        out["transformations"] = ts
    if ws.modules:
        ms = {}
        for n, m in ws.modules.items():
            ms[n] = {"ring": ws.meta[("modules", n)]["ring"], "invariant_factors": list(m.invariants), "side": m.side,
                     "action_tables": [{"element": list(k), "matrix": [list(r) for r in v]} for k, v in m.actions.items()]}
        out["modules"] = ms
    return out


def serialize(ws: Workspace) -> str:
    return yaml.safe_dump(serialize_data(ws), sort_keys=False, allow_unicode=True, default_flow_style=None)


__all__ = ["Workspace", "parse_workspace", "load_workspace", "serialize", "serialize_data", "leq_id"]
