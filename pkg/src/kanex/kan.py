"""Left Kan extensions through coends of the Kan bifunctor.

For F: C → E and K: C → D the Kan bifunctor at D is

    H_D(C′, C) = Hom_D(K C′, D) ⊙ F(C)

and Lan_K(F)(D) is its coend.  Copower summands are indexed by
``D.hom(K C′, D)`` in declaration order; that order fixes every offset in
the output.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _product
from typing import Any, Mapping

from .backends import (
    Backend,
    CategoryBackend,
    ValuedFunctor,
    ValuedNatTrans,
    precompose,
    validate_valued_functor,
    validate_valued_nat_trans,
)
from .coend import Bifunctor, CoendResult, Wedge, coend, factor_through_coend
from .errors import LemmaViolation, NotAdjoint, NotNatural, ShapeMismatch
from .fincat import (
    FinCat,
    FunctorRep,
    NatTransRep,
    Violation,
    compose_functors,
    find_isomorphism,
    identity_functor,
    terminal,
    validate_nat_trans,
)


@dataclass(frozen=True, eq=False)
class KanBifunctor:
    bifunctor: Bifunctor
    d: str
    homs: Mapping[str, tuple]  # C′ -> Hom_D(K C′, d)
    inj: Mapping[tuple, list]  # (C′, C) -> copower injections, aligned with homs[C′]


def kan_bifunctor(F: ValuedFunctor, K: FunctorRep, d: str) -> KanBifunctor:
    if F.src != K.src:
        raise ShapeMismatch("F and K must share their source category")
    C, D, be = K.src, K.dst, F.backend
    if d not in D.objects:
        raise ShapeMismatch(f"{d} is not an object of the target of K")
    homs = {x: D.hom(K.obj_map[x], d) for x in C.objects}
    pos = {x: {h: i for i, h in enumerate(hs)} for x, hs in homs.items()}
    obj, inj = {}, {}
    for x in C.objects:
        for y in C.objects:
            obj[(x, y)], inj[(x, y)] = be.copower(len(homs[x]), F.obj_map[y])
    first, second = {}, {}
    for f in C.mor_ids:
        a, b = C.dom(f), C.cod(f)
        Kf = K.mor_map[f]
        for y in C.objects:
            # reindex h ↦ h∘K(f)
            legs = [inj[(a, y)][pos[a][D.comp[(h, Kf)]]] for h in homs[b]]
            first[(f, y)] = be.copair(obj[(b, y)], inj[(b, y)], legs, obj[(a, y)])
        Ff = F.mor_map[f]
        for x in C.objects:
            legs = [be.compose(i, Ff) for i in inj[(x, b)]]
            second[(x, f)] = be.copair(obj[(x, a)], inj[(x, a)], legs, obj[(x, b)])
    return KanBifunctor(Bifunctor(C, be, obj, first, second), d, homs, inj)


def _transition(src: KanBifunctor, dst: KanBifunctor, g: str, D: FinCat) -> dict:
    be = src.bifunctor.backend
    C = src.bifunctor.src
    pos = {x: {h: i for i, h in enumerate(hs)} for x, hs in dst.homs.items()}
    out = {}
    for x in C.objects:
        for y in C.objects:
            # reindex h ↦ g∘h
            legs = [dst.inj[(x, y)][pos[x][D.comp[(g, h)]]] for h in src.homs[x]]
            out[(x, y)] = be.copair(src.bifunctor.obj[(x, y)], src.inj[(x, y)], legs, dst.bifunctor.obj[(x, y)])
    return out


def check_transition(src: KanBifunctor, dst: KanBifunctor, Hg: Mapping) -> list:
    """Both interchange laws of H_g with the actions of H_D and H_D′."""
    Hs, Ht = src.bifunctor, dst.bifunctor
    C, be = Hs.src, Hs.backend
    out = []
    for f in C.mor_ids:
        a, b = C.dom(f), C.cod(f)
        for y in C.objects:
            lhs = be.compose(Hg[(a, y)], Hs.first[(f, y)])
            rhs = be.compose(Ht.first[(f, y)], Hg[(b, y)])
            if not be.equal(lhs, rhs):
                out.append(Violation("transition.first", (f, y), f"H_g({a},{y})∘H({f},{y}) ≠ H′({f},{y})∘H_g({b},{y})"))
            lhs = be.compose(Hg[(y, b)], Hs.second[(y, f)])
            rhs = be.compose(Ht.second[(y, f)], Hg[(y, a)])
            if not be.equal(lhs, rhs):
                out.append(Violation("transition.second", (y, f), f"H_g({y},{b})∘H({y},{f}) ≠ H′({y},{f})∘H_g({y},{a})"))
    return out


@dataclass(frozen=True, eq=False)
class LanResult:
    F: ValuedFunctor
    K: FunctorRep
    lan: ValuedFunctor
    unit: ValuedNatTrans
    bifunctors: Mapping[str, KanBifunctor]
    coends: Mapping[str, CoendResult]

    @property
    def backend(self) -> Backend:
        return self.F.backend


def kan_transition(lr: LanResult, g: str) -> dict:
    """H_g(C′, C): H_D(C′, C) → H_D′(C′, C) for g: D → D′, with both laws checked."""
    D = lr.K.dst
    src, dst = lr.bifunctors[D.dom(g)], lr.bifunctors[D.cod(g)]
    Hg = _transition(src, dst, g, D)
    problems = check_transition(src, dst, Hg)
    if problems:
        raise LemmaViolation("; ".join(map(str, problems)))
    return Hg


def lan(F: ValuedFunctor, K: FunctorRep, *, verify: bool = True) -> LanResult:
    if F.src != K.src:
        raise ShapeMismatch("F and K must share their source category")
    C, D, be = K.src, K.dst, F.backend
    bifs = {d: kan_bifunctor(F, K, d) for d in D.objects}
    coends = {d: coend(bifs[d].bifunctor, validate=verify) for d in D.objects}
    on_mor = {}
    for g in D.mor_ids:
        d, d2 = D.dom(g), D.cod(g)
        Hg = _transition(bifs[d], bifs[d2], g, D)
        if verify:
            problems = check_transition(bifs[d], bifs[d2], Hg)
            if problems:
                raise LemmaViolation("; ".join(map(str, problems)))
        r2 = coends[d2]
        legs = {x: be.compose(r2.legs[x], Hg[(x, x)]) for x in C.objects}
        on_mor[g] = factor_through_coend(coends[d], Wedge(bifs[d].bifunctor, r2.apex, legs))
    G = ValuedFunctor(D, be, {d: coends[d].apex for d in D.objects}, on_mor)
    eta = {}
    for x in C.objects:
        kx = K.obj_map[x]
        b = bifs[kx]
        i = b.homs[x].index(D.identity[kx])
        eta[x] = be.compose(coends[kx].legs[x], b.inj[(x, x)][i])
    unit = ValuedNatTrans(F, precompose(G, K), eta)
    if verify:
        problems = validate_valued_functor(G) + validate_valued_nat_trans(unit, "η")
        if problems:
            raise LemmaViolation("; ".join(map(str, problems)))
    return LanResult(F, K, G, unit, bifs, coends)


def lan_factorize(lr: LanResult, gprime: ValuedFunctor, etaprime: ValuedNatTrans) -> ValuedNatTrans:
    """The unique α: Lan ⇒ G′ with α_K∘η = η′."""
    be, C, D = lr.backend, lr.K.src, lr.K.dst
    problems = validate_valued_functor(gprime) + validate_valued_nat_trans(etaprime, "η′")
    if problems:
        raise NotNatural("; ".join(map(str, problems)))
    alpha = {}
    for d in D.objects:
        b = lr.bifunctors[d]
        omega = {}
        for x in C.objects:
            legs = [be.compose(gprime.mor_map[h], etaprime.components[x]) for h in b.homs[x]]
            omega[x] = be.copair(b.bifunctor.obj[(x, x)], b.inj[(x, x)], legs, gprime.obj_map[d])
        alpha[d] = factor_through_coend(lr.coends[d], Wedge(b.bifunctor, gprime.obj_map[d], omega))
    out = ValuedNatTrans(lr.lan, gprime, alpha)
    problems = validate_valued_nat_trans(out)
    for x in C.objects:
        if not be.equal(be.compose(alpha[lr.K.obj_map[x]], lr.unit.components[x]), etaprime.components[x]):
            problems.append(Violation("factorization", (x,), f"α_K∘η ≠ η′ at {x}"))
    if problems:
        raise LemmaViolation("; ".join(map(str, problems)))
    return out


def count_factorizations(lr: LanResult, gprime: ValuedFunctor, etaprime: ValuedNatTrans, cap: int = 2) -> int:
    """Exhaustive count of natural α with α_K∘η = η′; needs enumerable hom-sets."""
    be, C, D, K = lr.backend, lr.K.src, lr.K.dst, lr.K
    objs = list(D.objects)
    homs = [list(be.hom(lr.lan.obj_map[d], gprime.obj_map[d])) for d in objs]
    pinned = {d: [x for x in C.objects if K.obj_map[x] == d] for d in objs}
    n = 0
    for choice in _product(*homs):
        a = dict(zip(objs, choice))
        if any(not be.equal(be.compose(a[d], lr.unit.components[x]), etaprime.components[x])
               for d in objs for x in pinned[d]):
            continue
        if all(be.equal(be.compose(gprime.mor_map[g], a[D.dom(g)]), be.compose(a[D.cod(g)], lr.lan.mor_map[g]))
               for g in D.mor_ids):
            n += 1
            if n >= cap:
                break
    return n


def terminal_functor(c: FinCat) -> FunctorRep:
    t = terminal()
    return FunctorRep(c, t, {x: "*" for x in c.objects}, {f: t.identity["*"] for f in c.mor_ids})


@dataclass(frozen=True, eq=False)
class ColimitViaLan:
    apex: Any
    legs: Mapping[str, Any]
    lan: LanResult


def colimit_via_lan(F: ValuedFunctor, *, verify: bool = True) -> ColimitViaLan:
    lr = lan(F, terminal_functor(F.src), verify=verify)
    return ColimitViaLan(lr.lan.obj_map["*"], dict(lr.unit.components), lr)


def copower_functor(n: int, F: ValuedFunctor) -> ValuedFunctor:
    """S⊙F for |S| = n, applied pointwise."""
    be, C = F.backend, F.src
    obj, inj = {}, {}
    for x in C.objects:
        obj[x], inj[x] = be.copower(n, F.obj_map[x])
    mor = {}
    for f in C.mor_ids:
        a, b = C.dom(f), C.cod(f)
        legs = [be.compose(i, F.mor_map[f]) for i in inj[b]]
        mor[f] = be.copair(obj[a], inj[a], legs, obj[b])
    return ValuedFunctor(C, be, obj, mor)


# ------------------------------------------------------------ adjunctions


def check_triangle_identities(F: FunctorRep, G: FunctorRep, eta: NatTransRep, eps: NatTransRep) -> list:
    """Violations of ε_{F C}∘F(η_C) = id and G(ε_D)∘η_{G D} = id, after typing checks."""
    C, D = F.src, F.dst
    if G.src != D or G.dst != C:
        return [Violation("adjunction.shape", (), "G must go back from the target of F to its source")]
    out = validate_nat_trans(eta, "η") + validate_nat_trans(eps, "ε")
    if out:
        return out
    for x in C.objects:
        fx = F.obj_map[x]
        got = D.comp[(eps.components[fx], F.mor_map[eta.components[x]])]
        if got != D.identity[fx]:
            out.append(Violation("triangle.left", (x,), f"ε[{fx}]∘F(η[{x}]) = {got}, expected {D.identity[fx]}"))
    for y in D.objects:
        gy = G.obj_map[y]
        got = C.comp[(G.mor_map[eps.components[y]], eta.components[gy])]
        if got != C.identity[gy]:
            out.append(Violation("triangle.right", (y,), f"G(ε[{y}])∘η[{gy}] = {got}, expected {C.identity[gy]}"))
    return out


def posetal_unit_counit(F: FunctorRep, G: FunctorRep):
    """Between posets η and ε are forced; return them with any missing components.

    A component is missing when the required morphism does not exist.
    """
    C, D = F.src, F.dst
    GF, FG = compose_functors(G, F), compose_functors(F, G)
    missing = []
    eta, eps = {}, {}
    for x in C.objects:
        hs = C.hom(x, GF.obj_map[x])
        if hs:
            eta[x] = hs[0]
        else:
            missing.append(Violation("unit.component", (x,), f"η[{x}] needs a morphism {x}→{GF.obj_map[x]}; none exists"))
    for y in D.objects:
        hs = D.hom(FG.obj_map[y], y)
        if hs:
            eps[y] = hs[0]
        else:
            missing.append(Violation("counit.component", (y,), f"ε[{y}] needs a morphism {FG.obj_map[y]}→{y}; none exists"))
    return (NatTransRep(identity_functor(C), GF, eta), NatTransRep(FG, identity_functor(D), eps), missing)


@dataclass(frozen=True)
class AdjointLanReport:
    lan_objects: Mapping[str, str]
    mismatches: tuple

    @property
    def ok(self) -> bool:
        return not self.mismatches


def adjoint_to_lan(F: FunctorRep, G: FunctorRep, eta: NatTransRep, eps: NatTransRep,
                   budget: int | None = None) -> AdjointLanReport:
    """Compare G and η with Lan_F(id) computed in the source category by cocone search."""
    problems = check_triangle_identities(F, G, eta, eps)
    if problems:
        raise NotAdjoint("; ".join(map(str, problems)))
    C = F.src
    be = CategoryBackend(C, budget)
    ident = ValuedFunctor(C, be, {x: x for x in C.objects}, {f: f for f in C.mor_ids})
    lr = lan(ident, F)
    mismatches = []
    for y in F.dst.objects:
        got, want = lr.lan.obj_map[y], G.obj_map[y]
        if got != want and find_isomorphism(C, got, want) is None:
            mismatches.append(Violation("lan.object", (y,), f"Lan_F(id)({y}) = {got} but G({y}) = {want}"))
    if not mismatches:
        for x in C.objects:
            if lr.unit.components[x] != eta.components[x]:
                mismatches.append(Violation("lan.unit", (x,), f"unit at {x} is {lr.unit.components[x]}, η[{x}] = {eta.components[x]}"))
    return AdjointLanReport(dict(lr.lan.obj_map), tuple(mismatches))

