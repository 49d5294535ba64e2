"""Cocomplete target categories behind one small interface.

The coend and Kan engines only ever ask a backend for coproducts (with
injections and copairing), coequalizers (with factorization through the
projection), composition and equality of morphisms.  Copowers are
coproducts of copies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from . import finab, finset
from .brute import Diagram, brute_colimit
from .errors import BoundaryMismatch, IllDefinedMap
from .fincat import FinCat, FunctorRep, Violation, discrete, parallel_pair


class Backend:
    name = "abstract"

    def identity(self, obj):
        raise NotImplementedError

    def compose(self, g, f):
        raise NotImplementedError

    def equal(self, f, g) -> bool:
        return f == g

    def dom(self, f):
        return f.dom

    def cod(self, f):
        return f.cod

    def coproduct(self, parts: Sequence):
        raise NotImplementedError

    def copair(self, S, injections: Sequence, legs: Sequence, target):
        raise NotImplementedError

    def coequalizer(self, f, g):
        raise NotImplementedError

    def factor(self, proj, h):
        """The unique u with u∘proj = h, where proj came from :meth:`coequalizer`."""
        raise NotImplementedError

    def copower(self, n: int, obj):
        return self.coproduct([obj] * n)

    def canonical(self, obj):
        raise NotImplementedError

    def render(self, obj) -> str:
        return str(self.canonical(obj))

    def is_iso(self, f) -> bool:
        raise NotImplementedError

    def same_object(self, a, b) -> bool:
        return a == b

    def hom(self, a, b):
        raise NotImplementedError(f"{self.name} backend cannot enumerate hom-sets")


class FinSetBackend(Backend):
    name = "FinSet"

    def identity(self, obj):
        return finset.identity(obj)

    def compose(self, g, f):
        return g.compose(f)

    def coproduct(self, parts):
        return finset.coproduct(list(parts))

    def copair(self, S, injections, legs, target):
        return finset.copair(S, legs, target)

    def coequalizer(self, f, g):
        return finset.coequalizer(f, g)

    def factor(self, proj, h):
        return finset.factor_through(proj, h)

    def canonical(self, obj):
        return obj.size

    def render(self, obj):
        return str(obj.size)

    def is_iso(self, f):
        return f.is_bijective()

    def hom(self, a, b):
        return finset.all_maps(a, b)

    def object_of(self, value):
        return finset.FinSetObj(int(value))


class FinAbBackend(Backend):
    name = "Ab"

    def identity(self, obj):
        return finab.AbMap.identity(obj)

    def compose(self, g, f):
        return g.compose(f)

    def coproduct(self, parts):
        return finab.direct_sum(list(parts))

    def copair(self, S, injections, legs, target):
        return finab.copair(S, legs, target)

    def coequalizer(self, f, g):
        return finab.coequalizer_ab(f, g)

    def factor(self, proj, h):
        # projections out of coequalizer_ab are ambient identities
        if proj.dom != h.dom:
            raise BoundaryMismatch("maps must share a domain")
        u = finab.AbMap(proj.cod, h.cod, h.matrix)
        if not u.is_well_defined():
            raise IllDefinedMap("map does not vanish on the coequalized relations")
        return u

    def canonical(self, obj):
        return obj.invariants

    def render(self, obj):
        return obj.render()

    def is_iso(self, f):
        return f.is_iso()

    def object_of(self, value):
        return finab.FgAbGroup.from_invariants(list(value))


class CategoryBackend(Backend):
    """A finite category as a target; colimits come from :func:`brute_colimit`."""

    name = "FinCat"

    def __init__(self, cat: FinCat, budget: int | None = None):
        self.cat = cat
        self.budget = budget

    def identity(self, obj):
        return self.cat.identity[obj]

    def compose(self, g, f):
        return self.cat.compose(g, f)

    def dom(self, f):
        return self.cat.dom(f)

    def cod(self, f):
        return self.cat.cod(f)

    def coproduct(self, parts):
        parts = list(parts)
        names = [str(i) for i in range(len(parts))]
        shape = discrete(names)
        F = FunctorRep(shape, self.cat, dict(zip(names, parts)),
                       {shape.identity[n]: self.cat.identity[p] for n, p in zip(names, parts)})
        c = brute_colimit(Diagram(shape, self.cat, F), self.budget)
        return c.apex, [c.legs[n] for n in names]

    def _mediator(self, src_legs: Sequence, apex, dst_legs: Sequence):
        for u in self.cat.hom(self.cat.cod(src_legs[0]), apex) if src_legs else ():
            if all(self.cat.compose(u, a) == b for a, b in zip(src_legs, dst_legs)):
                return u
        return None

    def copair(self, S, injections, legs, target):
        for leg in legs:
            if self.cat.cod(leg) != target:
                raise BoundaryMismatch("legs must share the target")
        if not injections:
            # S is initial: its unique map to target
            homs = self.cat.hom(S, target)
            if len(homs) != 1:
                raise BoundaryMismatch("empty coproduct is not initial")
            return homs[0]
        u = self._mediator(list(injections), target, list(legs))
        if u is None:
            raise IllDefinedMap("no map out of the coproduct restricts to the legs")
        return u

    def coequalizer(self, f, g):
        if (self.dom(f), self.cod(f)) != (self.dom(g), self.cod(g)):
            raise BoundaryMismatch("coequalizer needs parallel maps")
        shape = parallel_pair()
        F = FunctorRep(
            shape, self.cat,
            {"0": self.dom(f), "1": self.cod(f)},
            {"f": f, "g": g, shape.identity["0"]: self.cat.identity[self.dom(f)],
             shape.identity["1"]: self.cat.identity[self.cod(f)]},
        )
        c = brute_colimit(Diagram(shape, self.cat, F), self.budget)
        return c.apex, c.legs["1"]

    def factor(self, proj, h):
        u = self._mediator([proj], self.cod(h), [h])
        if u is None:
            raise IllDefinedMap("map does not factor through the projection")
        return u

    def canonical(self, obj):
        return obj

    def render(self, obj):
        return str(obj)

    def is_iso(self, f):
        d, c = self.dom(f), self.cod(f)
        return any(self.cat.comp[(g, f)] == self.cat.identity[d] and self.cat.comp[(f, g)] == self.cat.identity[c]
                   for g in self.cat.hom(c, d))

    def hom(self, a, b):
        return iter(self.cat.hom(a, b))


FINSET = FinSetBackend()
FINAB = FinAbBackend()


# ----------------------------------------------- functors into a backend


@dataclass(frozen=True, eq=False)
class ValuedFunctor:
    """A functor from a finite category into a backend's category."""

    src: FinCat
    backend: Backend
    obj_map: Mapping[str, Any]
    mor_map: Mapping[str, Any]

    def __post_init__(self):
        object.__setattr__(self, "obj_map", dict(self.obj_map))
        object.__setattr__(self, "mor_map", dict(self.mor_map))

    def __call__(self, x: str):
        if x in self.src.objects and x in self.obj_map:
            return self.obj_map[x]
        return self.mor_map[x]


def valued(F: FunctorRep, budget: int | None = None) -> ValuedFunctor:
    """View a functor between finite categories as valued in a brute-force backend."""
    return ValuedFunctor(F.src, CategoryBackend(F.dst, budget), F.obj_map, F.mor_map)


def precompose(G: ValuedFunctor, K: FunctorRep) -> ValuedFunctor:
    """G∘K."""
    if K.dst != G.src:
        raise BoundaryMismatch("functors are not composable")
    return ValuedFunctor(K.src, G.backend, {x: G.obj_map[K.obj_map[x]] for x in K.src.objects},
                         {f: G.mor_map[K.mor_map[f]] for f in K.src.mor_ids})


def _boundary(be: Backend, f):
    return be.dom(f), be.cod(f)


def validate_valued_functor(F: ValuedFunctor) -> list:
    be, C = F.backend, F.src
    out = []
    for f in C.mor_ids:
        want = (F.obj_map[C.dom(f)], F.obj_map[C.cod(f)])
        got = _boundary(be, F.mor_map[f])
        if not (be.same_object(got[0], want[0]) and be.same_object(got[1], want[1])):
            out.append(Violation("functor.dom_cod", (f,), f"F({f}) has the wrong domain or codomain"))
    if out:
        return out
    for x in C.objects:
        if not be.equal(F.mor_map[C.identity[x]], be.identity(F.obj_map[x])):
            out.append(Violation("functor.identity", (x,), f"F(id_{x}) is not an identity"))
    for g, f in C.composable_pairs():
        if not be.equal(F.mor_map[C.comp[(g, f)]], be.compose(F.mor_map[g], F.mor_map[f])):
            out.append(Violation("functor.composition", (g, f), f"F({g}∘{f}) ≠ F({g})∘F({f})"))
    return out


def valued_identity_functor(src: FinCat, backend: Backend, obj_map: Mapping) -> ValuedFunctor:
    return ValuedFunctor(src, backend, obj_map,
                         {f: backend.identity(obj_map[src.dom(f)]) for f in src.mor_ids})


def constant_valued(src: FinCat, backend: Backend, obj) -> ValuedFunctor:
    e = backend.identity(obj)
    return ValuedFunctor(src, backend, {x: obj for x in src.objects}, {f: e for f in src.mor_ids})


@dataclass(frozen=True, eq=False)
class ValuedNatTrans:
    source: ValuedFunctor
    target: ValuedFunctor
    components: Mapping[str, Any]

    def __post_init__(self):
        object.__setattr__(self, "components", dict(self.components))

    def __getitem__(self, x):
        return self.components[x]


def validate_valued_nat_trans(alpha: ValuedNatTrans, name: str = "α") -> list:
    F, G = alpha.source, alpha.target
    be, C = F.backend, F.src
    out = []
    for x in C.objects:
        a = alpha.components.get(x)
        if a is None:
            out.append(Violation("naturality.component", (x,), f"{name}[{x}] is missing"))
            continue
        d, c = _boundary(be, a)
        if not (be.same_object(d, F.obj_map[x]) and be.same_object(c, G.obj_map[x])):
            out.append(Violation("naturality.component", (x,), f"{name}[{x}] has the wrong domain or codomain"))
    if out:
        return out
    for f in C.mor_ids:
        x, y = C.dom(f), C.cod(f)
        lhs = be.compose(G.mor_map[f], alpha.components[x])
        rhs = be.compose(alpha.components[y], F.mor_map[f])
        if not be.equal(lhs, rhs):
            out.append(Violation("naturality.square", (f,), f"{name}: naturality square at {f} does not commute"))
    return out
