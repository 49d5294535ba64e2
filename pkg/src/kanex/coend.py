"""Coends of bifunctors C^op × C → E as coequalizers of two coproduct maps.

The middle coproduct runs over every morphism f: C → C′ of C (identities
included) and holds a copy of H(C′, C); the diagonal coproduct holds H(C, C)
for every object.  α sends the f-summand through H(C′, f) into the C′
summand, β through H(f, C) into the C summand, and the coend is their
coequalizer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

from .backends import FINSET, Backend
from .errors import InvalidBifunctor, NotDinatural, ShapeMismatch
from .fincat import FinCat, Violation
from .finset import FinSetMap, FinSetObj


@dataclass(frozen=True, eq=False)
class Bifunctor:
    """H: C^op × C → E, tabulated.

    ``first[(f, C)]`` is H(f, C): H(C2, C) → H(C1, C) for f: C1 → C2 and
    ``second[(C′, g)]`` is H(C′, g): H(C′, B1) → H(C′, B2) for g: B1 → B2.
    """

    src: FinCat
    backend: Backend
    obj: Mapping[tuple, Any]
    first: Mapping[tuple, Any]
    second: Mapping[tuple, Any]
    injections: Mapping[tuple, Any] | None = None

    @classmethod
    def from_functions(cls, src: FinCat, backend: Backend, on_objects: Callable, on_first: Callable,
                       on_second: Callable) -> "Bifunctor":
        objs = src.objects
        return cls(
            src, backend,
            {(x, y): on_objects(x, y) for x in objs for y in objs},
            {(f, y): on_first(f, y) for f in src.mor_ids for y in objs},
            {(x, g): on_second(x, g) for x in objs for g in src.mor_ids},
        )

    def __call__(self, x: str, y: str):
        return self.obj[(x, y)]


def validate_bifunctor(h: Bifunctor) -> list:
    """Boundaries, functoriality of each action, and commuting of the two actions."""
    C, be = h.src, h.backend
    out = []

    def bound(m, d, c, label):
        if not (be.same_object(be.dom(m), d) and be.same_object(be.cod(m), c)):
            out.append(Violation("bifunctor.dom_cod", label, f"H{label} has the wrong domain or codomain"))

    for f in C.mor_ids:
        a, b = C.dom(f), C.cod(f)
        for y in C.objects:
            bound(h.first[(f, y)], h.obj[(b, y)], h.obj[(a, y)], (f, y))
            bound(h.second[(y, f)], h.obj[(y, a)], h.obj[(y, b)], (y, f))
    if out:
        return out
    for x in C.objects:
        e = C.identity[x]
        for y in C.objects:
            if not be.equal(h.first[(e, y)], be.identity(h.obj[(x, y)])):
                out.append(Violation("bifunctor.identity", (e, y), f"H({e}, {y}) is not an identity"))
            if not be.equal(h.second[(y, e)], be.identity(h.obj[(y, x)])):
                out.append(Violation("bifunctor.identity", (y, e), f"H({y}, {e}) is not an identity"))
    for g, f in C.composable_pairs():
        gf = C.comp[(g, f)]
        for y in C.objects:
            # contravariant: H(g∘f, y) = H(f, y)∘H(g, y)
            if not be.equal(h.first[(gf, y)], be.compose(h.first[(f, y)], h.first[(g, y)])):
                out.append(Violation("bifunctor.first", (g, f, y), f"H({g}∘{f}, {y}) ≠ H({f}, {y})∘H({g}, {y})"))
            if not be.equal(h.second[(y, gf)], be.compose(h.second[(y, g)], h.second[(y, f)])):
                out.append(Violation("bifunctor.second", (y, g, f), f"H({y}, {g}∘{f}) ≠ H({y}, {g})∘H({y}, {f})"))
    for f in C.mor_ids:
        a, a2 = C.dom(f), C.cod(f)
        for g in C.mor_ids:
            b, b2 = C.dom(g), C.cod(g)
            lhs = be.compose(h.first[(f, b2)], h.second[(a2, g)])
            rhs = be.compose(h.second[(a, g)], h.first[(f, b)])
            if not be.equal(lhs, rhs):
                out.append(Violation("bifunctor.interchange", (f, g), f"actions of {f} and {g} do not commute"))
    return out


@dataclass(frozen=True, eq=False)
class Wedge:
    bifunctor: Bifunctor
    apex: Any
    legs: Mapping[str, Any]  # object C -> H(C, C) → apex


def verify_dinaturality(w: Wedge) -> list:
    """One violation per f: C → C′ with λ_C∘H(f, C) ≠ λ_{C′}∘H(C′, f)."""
    h = w.bifunctor
    C, be = h.src, h.backend
    out = []
    for f in C.mor_ids:
        a, b = C.dom(f), C.cod(f)
        lhs = be.compose(w.legs[a], h.first[(f, a)])
        rhs = be.compose(w.legs[b], h.second[(b, f)])
        if not be.equal(lhs, rhs):
            out.append(Violation("dinaturality", (f,), f"λ_{a}∘H({f}, {a}) ≠ λ_{b}∘H({b}, {f})"))
    return out


@dataclass(frozen=True, eq=False)
class CoendResult:
    bifunctor: Bifunctor
    apex: Any
    projection: Any  # λ: diagonal coproduct → apex
    diagonal: Any
    j: Mapping[str, Any]  # object -> injection into the diagonal coproduct
    middle: Any
    k: Mapping[str, Any]  # morphism -> injection into the middle coproduct
    alpha: Any
    beta: Any
    legs: Mapping[str, Any] = field(default_factory=dict)

    @property
    def wedge(self) -> Wedge:
        return Wedge(self.bifunctor, self.apex, self.legs)


def coend(h: Bifunctor, *, validate: bool = True, include_identities: bool = True) -> CoendResult:
    if validate:
        problems = validate_bifunctor(h)
        if problems:
            raise InvalidBifunctor("; ".join(map(str, problems[:3])))
    C, be = h.src, h.backend
    objs = C.objects
    diag, j_list = be.coproduct([h.obj[(x, x)] for x in objs])
    j = dict(zip(objs, j_list))
    mors = [f for f in C.mor_ids if include_identities or not C.is_identity(f)]
    middle, k_list = be.coproduct([h.obj[(C.cod(f), C.dom(f))] for f in mors])
    k = dict(zip(mors, k_list))
    alpha_legs = [be.compose(j[C.cod(f)], h.second[(C.cod(f), f)]) for f in mors]
    beta_legs = [be.compose(j[C.dom(f)], h.first[(f, C.dom(f))]) for f in mors]
    alpha = be.copair(middle, k_list, alpha_legs, diag)
    beta = be.copair(middle, k_list, beta_legs, diag)
    apex, lam = be.coequalizer(alpha, beta)
    legs = {x: be.compose(lam, j[x]) for x in objs}
    return CoendResult(h, apex, lam, diag, j, middle, k, alpha, beta, legs)


def _copair_legs(r: CoendResult, legs: Mapping, target):
    be = r.bifunctor.backend
    objs = r.bifunctor.src.objects
    return be.copair(r.diagonal, [r.j[x] for x in objs], [legs[x] for x in objs], target)


def factor_through_coend(r: CoendResult, w: Wedge):
    """The unique u: ∫H → w.apex with u∘λ_C = w.legs[C]."""
    problems = verify_dinaturality(w)
    if problems:
        raise NotDinatural("; ".join(map(str, problems)))
    be = r.bifunctor.backend
    return be.factor(r.projection, _copair_legs(r, w.legs, w.apex))


def all_factorizations(r: CoendResult, w: Wedge, cap: int | None = None) -> list:
    """Every u with u∘λ_C = w.legs[C], by enumerating the whole hom-set."""
    be = r.bifunctor.backend
    out = []
    for u in be.hom(r.apex, w.apex):
        if all(be.equal(be.compose(u, r.legs[x]), w.legs[x]) for x in r.bifunctor.src.objects):
            out.append(u)
            if cap is not None and len(out) >= cap:
                break
    return out


def coproduct_of_bifunctors(parts) -> Bifunctor:
    """Pointwise coproduct; ``injections[(C′, C)]`` lists the summand inclusions."""
    parts = list(parts)
    if not parts:
        raise ShapeMismatch("need at least one bifunctor")
    C, be = parts[0].src, parts[0].backend
    if any(p.src != C or p.backend is not be for p in parts):
        raise ShapeMismatch("bifunctors must share source category and backend")
    obj, inj = {}, {}
    for x in C.objects:
        for y in C.objects:
            obj[(x, y)], inj[(x, y)] = be.coproduct([p.obj[(x, y)] for p in parts])

    def induced(src_key, dst_key, maps):
        legs = [be.compose(i, m) for i, m in zip(inj[dst_key], maps)]
        return be.copair(obj[src_key], inj[src_key], legs, obj[dst_key])

    first, second = {}, {}
    for f in C.mor_ids:
        a, b = C.dom(f), C.cod(f)
        for y in C.objects:
            first[(f, y)] = induced((b, y), (a, y), [p.first[(f, y)] for p in parts])
            second[(y, f)] = induced((y, a), (y, b), [p.second[(y, f)] for p in parts])
    return Bifunctor(C, be, obj, first, second, inj)


def hom_bifunctor(c: FinCat) -> Bifunctor:
    """Hom_C as a FinSet-valued bifunctor; hom-sets indexed in declaration order."""
    homs = {(x, y): c.hom(x, y) for x in c.objects for y in c.objects}
    pos = {key: {m: i for i, m in enumerate(ms)} for key, ms in homs.items()}

    def on_objects(x, y):
        return FinSetObj(len(homs[(x, y)]))

    def on_first(f, y):
        a, b = c.dom(f), c.cod(f)
        return FinSetMap(on_objects(b, y), on_objects(a, y), [pos[(a, y)][c.comp[(h, f)]] for h in homs[(b, y)]])

    def on_second(x, g):
        a, b = c.dom(g), c.cod(g)
        return FinSetMap(on_objects(x, a), on_objects(x, b), [pos[(x, b)][c.comp[(g, h)]] for h in homs[(x, a)]])

    return Bifunctor.from_functions(c, FINSET, on_objects, on_first, on_second)


def constant_bifunctor(c: FinCat, backend: Backend, obj) -> Bifunctor:
    e = backend.identity(obj)
    return Bifunctor.from_functions(c, backend, lambda x, y: obj, lambda f, y: e, lambda x, g: e)
