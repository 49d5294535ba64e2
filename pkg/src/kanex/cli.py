"""Command-line front end.

    kanex <command> --workspace FILE [--target NAME ...] [--verify] [--budget N]

Exit status: 0 success, 2 validation failure, 3 computation error, 4 parse error.
``check-adjunction`` compares against Lan_F(id) only for finite lattices,
where the needed colimits exist; other posets are rejected with exit 2.
"""

from __future__ import annotations

import argparse
import sys

from . import finab, finset
from .finab import render_invariants
from .backends import FINAB, FINSET, CategoryBackend, ValuedFunctor, valued
from .brute import Cocone, Diagram, SetsUpTo, brute_colimit, find_mediator
from .cmod import (
    comparison_map,
    module_to_functor,
    ring_to_category,
    tensor_bilinear_oracle,
    tensor_coend,
    tensor_resolution,
)
from .coend import Bifunctor, all_factorizations, coend, hom_bifunctor
from .errors import KanexError, ParseError, UnknownEntity, ValidationError
from .fincat import FunctorRep, NatTransRep, opposite, skeleton
from .kan import (
    adjoint_to_lan,
    check_triangle_identities,
    colimit_via_lan,
    count_factorizations,
    lan,
    posetal_unit_counit,
)
from .workspace import Workspace, load_workspace

COMMANDS = ("validate", "coend", "lan", "colimit", "tensor", "skeleton", "check-adjunction", "oracle-tensor")

EXIT_OK, EXIT_VALIDATION, EXIT_COMPUTATION, EXIT_PARSE = 0, 2, 3, 4


class CheckFailed(Exception):
    """A check ran to completion and found a violation; carries the report."""

    def __init__(self, text: str):
        super().__init__(text)
        self.text = text


# ------------------------------------------------------------- rendering


def render_object(backend, obj) -> str:
    if isinstance(obj, finset.FinSetObj):
        return str(obj.size)
    if isinstance(obj, finab.FgAbGroup):
        return obj.render()
    return str(obj)


def render_map(m) -> str:
    if isinstance(m, finset.FinSetMap):
        return "[" + ", ".join(map(str, m.table)) + "]"
    if isinstance(m, finab.AbMap):
        return "[" + ", ".join("[" + ", ".join(map(str, r)) + "]" for r in m.matrix) + "]"
    return str(m)


# -------------------------------------------------------------- helpers


def _need_targets(targets, n: int, usage: str):
    if len(targets) not in ((n,) if isinstance(n, int) else n):
        raise UnknownEntity(f"expected --target {usage}")


def _functor(ws: Workspace, name: str, budget):
    F = ws.get("functors", name)
    if isinstance(F, FunctorRep):
        return valued(F, budget)
    return F


def _product_bifunctor(G: ValuedFunctor, F: ValuedFunctor) -> Bifunctor:
    """H(x, y) = G(x) × F(y) in FinSet or G(x) ⊗ F(y) in Ab; G is contravariant."""
    C = F.src
    if G.src != opposite(C) or G.backend is not F.backend or F.backend not in (FINSET, FINAB):
        raise UnknownEntity("coend of two functors needs a contravariant and a covariant functor "
                            "on the same category, both into FinSet or both into Ab")
    be = F.backend

    if be is FINSET:
        def obj(x, y):
            return finset.FinSetObj(G.obj_map[x].size * F.obj_map[y].size)

        def pair(a, b):
            n = b.cod.size
            return finset.FinSetMap(obj_of(a.dom, b.dom), obj_of(a.cod, b.cod),
                                    [a(i) * n + b(j) for i in range(a.dom.size) for j in range(b.dom.size)])

        def obj_of(s, t):
            return finset.FinSetObj(s.size * t.size)
    else:
        def obj(x, y):
            return finab.tensor_z(G.obj_map[x], F.obj_map[y])

        pair = finab.tensor_maps

    def on_first(f, y):
        return pair(G.mor_map[f], be.identity(F.obj_map[y]))

    def on_second(x, g):
        return pair(be.identity(G.obj_map[x]), F.mor_map[g])

    return Bifunctor.from_functions(C, be, obj, on_first, on_second)


def _legs_lines(prefix: str, legs, order) -> list:
    return [f"{prefix} {x}: {render_map(legs[x])}" for x in order]


# -------------------------------------------------------------- commands


def cmd_validate(ws: Workspace, targets, verify, budget) -> str:
    lines = []
    names = set(targets)
    for n in names:
        ws.find(n)

    def want(n):
        return not names or n in names

    for n, c in ws.categories.items():
        if want(n):
            lines.append(f"category {n}: {len(c.objects)} objects, {len(c.morphisms)} morphisms")
    for n, F in ws.functors.items():
        if want(n):
            meta = ws.meta[("functors", n)]
            var = "" if meta["variance"] == "covariant" else " (contravariant)"
            lines.append(f"functor {n}: {meta['src']} -> {meta['dst']}{var}")
    for n in ws.transformations:
        if want(n):
            meta = ws.meta[("transformations", n)]
            lines.append(f"transformation {n}: {meta['source']} => {meta['target']}")
    for n, r in ws.rings.items():
        if want(n):
            lines.append(f"ring {n}: additive group {render_invariants(r.group.invariants)}")
    for n, m in ws.modules.items():
        if want(n):
            ring = ws.meta[("modules", n)]["ring"]
            lines.append(f"module {n}: {m.side} module over {ring}, group {m.group.render()}")
    lines.append("ok")
    return "\n".join(lines)


def cmd_coend(ws: Workspace, targets, verify, budget) -> str:
    _need_targets(targets, (1, 2), "CATEGORY or --target G F")
    if len(targets) == 1:
        C = ws.get("categories", targets[0])
        h = hom_bifunctor(C)
        title = f"coend of Hom_{targets[0]}"
    else:
        G, F = (_functor(ws, n, budget) for n in targets)
        h = _product_bifunctor(G, F)
        title = f"coend of {targets[0]} x {targets[1]}"
    r = coend(h)
    lines = [title, f"apex: {render_object(h.backend, r.apex)}"]
    lines += _legs_lines("leg", r.legs, h.src.objects)
    if verify:
        if h.backend is FINSET:
            n = len(all_factorizations(r, r.wedge, cap=2))
            if n != 1:
                raise CheckFailed("\n".join(lines + [f"verify: {n} endomorphisms over the universal wedge"]))
            lines.append("verify: universal wedge factors through itself uniquely")
        else:
            lines.append("verify: exhaustive search needs FinSet values; skipped")
    return "\n".join(lines)


def cmd_lan(ws: Workspace, targets, verify, budget) -> str:
    _need_targets(targets, 2, "F K")
    F = _functor(ws, targets[0], budget)
    K = ws.get("functors", targets[1])
    if not isinstance(K, FunctorRep):
        raise UnknownEntity(f"{targets[1]} must be a functor between workspace categories")
    lr = lan(F, K)
    D, C = K.dst, K.src
    lines = [f"lan of {targets[0]} along {targets[1]}"]
    for d in D.objects:
        lines.append(f"object {d}: {render_object(F.backend, lr.lan.obj_map[d])}")
    for g in D.mor_ids:
        if not D.is_identity(g):
            lines.append(f"map {g}: {render_map(lr.lan.mor_map[g])}")
    for d in D.objects:
        for x in C.objects:
            lines.append(f"leg {d} {x}: {render_map(lr.coends[d].legs[x])}")
    lines += _legs_lines("unit", lr.unit.components, C.objects)
    if verify:
        if F.backend is FINSET:
            n = count_factorizations(lr, lr.lan, lr.unit)
            if n != 1:
                raise CheckFailed("\n".join(lines + [f"verify: {n} factorizations of the unit through itself"]))
            lines.append("verify: unit factors through itself uniquely")
        else:
            lines.append("verify: exhaustive search needs FinSet values; skipped")
    return "\n".join(lines)


def cmd_colimit(ws: Workspace, targets, verify, budget) -> str:
    _need_targets(targets, 1, "F")
    F = _functor(ws, targets[0], budget)
    r = colimit_via_lan(F)
    lines = [f"colimit of {targets[0]}", f"apex: {render_object(F.backend, r.apex)}"]
    lines += _legs_lines("leg", r.legs, F.src.objects)
    if verify:
        if F.backend is FINSET:
            target = SetsUpTo(sum(v.size for v in F.obj_map.values()))
        elif isinstance(F.backend, CategoryBackend):
            target = F.backend.cat
        else:
            lines.append("verify: brute-force search needs FinSet or finite-category values; skipped")
            return "\n".join(lines)
        d = Diagram(F.src, target, F)
        b = brute_colimit(d, budget)
        ours = Cocone(r.apex, r.legs)
        u, v = find_mediator(d, ours, b), find_mediator(d, b, ours)
        if isinstance(target, SetsUpTo):
            ok = u is not None and v is not None and u.is_bijective()
        else:
            ok = u is not None and F.backend.is_iso(u)
        if not ok:
            raise CheckFailed("\n".join(lines + [f"verify: brute-force colimit {render_object(F.backend, b.apex)} "
                                                 "is not isomorphic"]))
        lines.append(f"verify: brute-force colimit {render_object(F.backend, b.apex)} is isomorphic")
    return "\n".join(lines)


def _modules(ws: Workspace, targets):
    _need_targets(targets, 2, "RIGHT LEFT")
    a, b = (ws.get("modules", n) for n in targets)
    if a.side != "right" or b.side != "left":
        raise UnknownEntity("tensor needs a right module followed by a left module")
    if ws.meta[("modules", targets[0])]["ring"] != ws.meta[("modules", targets[1])]["ring"]:
        raise UnknownEntity("modules must be over the same ring")
    return a, b


def cmd_tensor(ws: Workspace, targets, verify, budget) -> str:
    a, b = _modules(ws, targets)
    base = ring_to_category(a.ring)
    fa, fb = module_to_functor(a, base), module_to_functor(b, base)
    g = tensor_coend(fb, fa)
    lines = [g.render()]
    if verify:
        res = tensor_resolution(fb, fa)
        orc = tensor_bilinear_oracle(a, b)
        iso = comparison_map(fb, fa).is_iso()
        lines += [f"resolution: {res.render()}", f"coend: {g.render()}", f"oracle: {orc.render()}",
                  f"comparison map iso: {'yes' if iso else 'no'}"]
        if not (iso and finab.are_isomorphic(res, g) and finab.are_isomorphic(g, orc)):
            raise CheckFailed("\n".join(lines))
    return "\n".join(lines)


def cmd_oracle_tensor(ws: Workspace, targets, verify, budget) -> str:
    a, b = _modules(ws, targets)
    return tensor_bilinear_oracle(a, b).render()


def cmd_skeleton(ws: Workspace, targets, verify, budget) -> str:
    _need_targets(targets, 1, "CATEGORY")
    c = ws.get("categories", targets[0])
    s = skeleton(c)
    lines = [f"skeleton of {targets[0]}", "objects: " + ", ".join(s.category.objects)]
    for x in c.objects:
        lines.append(f"representative {x}: {s.representative[x]}")
    for f in c.mor_ids:
        lines.append(f"P {f}: {s.projection.mor_map[f]}")
    for x in c.objects:
        lines.append(f"counit {x}: {s.counit.components[x]}")
    return "\n".join(lines)


def _is_lattice(c) -> bool:
    # every pair has a least upper bound, and there is a least element
    objs = c.objects

    def least(cands):
        return [m for m in cands if all(c.hom(m, o) for o in cands)]

    if not least(list(objs)):
        return False
    return all(least([z for z in objs if c.hom(x, z) and c.hom(y, z)]) for x in objs for y in objs)


def cmd_check_adjunction(ws: Workspace, targets, verify, budget) -> str:
    _need_targets(targets, (2, 4), "F G [ETA EPS]")
    F, G = (ws.get("functors", n) for n in targets[:2])
    if not (isinstance(F, FunctorRep) and isinstance(G, FunctorRep)):
        raise UnknownEntity("check-adjunction needs functors between workspace categories")
    lines = [f"adjunction {targets[0]} -| {targets[1]}"]
    if len(targets) == 4:
        eta, eps = (ws.get("transformations", n) for n in targets[2:])
        if not (isinstance(eta, NatTransRep) and isinstance(eps, NatTransRep)):
            raise UnknownEntity("unit and counit must be transformations between category-valued functors")
        problems = []
    else:
        eta, eps, problems = posetal_unit_counit(F, G)
    if not problems:
        problems = check_triangle_identities(F, G, eta, eps)
    if problems:
        raise CheckFailed("\n".join(lines + [f"FAIL {p.law} at {', '.join(map(str, p.witnesses))}: {p.message}"
                                             for p in problems]))
    lines.append("triangle identities: ok")
    if not _is_lattice(F.src):
        raise CheckFailed("\n".join(lines + [f"FAIL lan: {F.src!r} is not a lattice; Lan_F(id) is not computed"]))
    rep = adjoint_to_lan(F, G, eta, eps, budget)
    for y in F.dst.objects:
        lines.append(f"lan {y}: {rep.lan_objects[y]}")
    if not rep.ok:
        raise CheckFailed("\n".join(lines + [f"FAIL {p.law} at {', '.join(map(str, p.witnesses))}: {p.message}"
                                             for p in rep.mismatches]))
    lines.append("Lan_F(id) agrees with G: ok")
    return "\n".join(lines)


DISPATCH = {
    "validate": cmd_validate,
    "coend": cmd_coend,
    "lan": cmd_lan,
    "colimit": cmd_colimit,
    "tensor": cmd_tensor,
    "skeleton": cmd_skeleton,
    "check-adjunction": cmd_check_adjunction,
    "oracle-tensor": cmd_oracle_tensor,
}


def run_command(ws: Workspace, cmd: str, targets=(), verify: bool = False, budget: int | None = None) -> str:
    """Rendered output of one command; raises on failure."""
    if cmd not in DISPATCH:
        raise UnknownEntity(f"unknown command {cmd!r}")
    return DISPATCH[cmd](ws, list(targets), verify, budget)


def execute(argv=None) -> tuple:
    """(exit status, stdout text, stderr text) for the given arguments."""
    p = argparse.ArgumentParser(prog="kanex", description="Coends, Kan extensions and tensor products of finite data.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--workspace", required=True, help="YAML workspace file")
    p.add_argument("--target", nargs="+", default=[], metavar="NAME", help="entity names the command acts on")
    p.add_argument("--verify", action="store_true", help="run the exhaustive uniqueness and oracle checks")
    p.add_argument("--budget", type=int, default=None, help="cap on candidate cocones for brute-force search")
    args = p.parse_args(argv)
    try:
        ws = load_workspace(args.workspace)
        out = run_command(ws, args.command, args.target, args.verify, args.budget)
    except ParseError as e:
        return EXIT_PARSE, "", f"parse error: {e}\n"
    except (ValidationError, UnknownEntity) as e:
        return EXIT_VALIDATION, "", f"validation error: {e}\n"
    except CheckFailed as e:
        return EXIT_VALIDATION, e.text + "\n", ""
    except KanexError as e:
        return EXIT_COMPUTATION, "", f"computation error: {type(e).__name__}: {e}\n"
    return EXIT_OK, out + "\n", ""


def main(argv=None) -> int:
    code, out, err = execute(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
