"""Colimits in finite categories by exhaustive cocone enumeration.

This is an oracle, not an algorithm: every cocone in the target is listed and
the first initial one (apexes in declaration order, legs lexicographic) is
returned.  Targets only need ``objects``, ``hom(x, y)``, ``compose(g, f)``
and ``id(x)``; :class:`~kanex.fincat.FinCat` and :class:`SetsUpTo` both
qualify.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Any, Mapping

from .errors import NoColimit, SearchBudgetExceeded
from .fincat import FinCat
from .finset import FinSetMap, FinSetObj, all_maps, identity as fs_identity

DEFAULT_BUDGET = 10**6


def resolve_budget(budget: int | None = None) -> int:
    if budget is not None:
        return int(budget)
    env = os.environ.get("KANEX_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


class SetsUpTo:
    """The full subcategory of FinSet on the sets of size 0..n."""

    def __init__(self, n: int):
        self.n = n
        self.objects = tuple(FinSetObj(k) for k in range(n + 1))

    def hom(self, x: FinSetObj, y: FinSetObj):
        return all_maps(x, y)

    def hom_count(self, x: FinSetObj, y: FinSetObj) -> int:
        return y.size ** x.size

    def compose(self, g: FinSetMap, f: FinSetMap) -> FinSetMap:
        return g.compose(f)

    def id(self, x: FinSetObj) -> FinSetMap:
        return fs_identity(x)

    def count_mediators(self, a: FinSetObj, legs, b: FinSetObj, others, cap: int = 2) -> int:
        # u is forced on the joint image of the legs and free elsewhere
        forced = {}
        for lam, mu in zip(legs, others):
            for x, y in zip(lam.table, mu.table):
                if forced.setdefault(x, y) != y:
                    return 0
        free = a.size - len(forced)
        return min(cap, b.size ** free)


@dataclass(frozen=True)
class Diagram:
    shape: FinCat
    target: Any
    functor: Any  # anything with obj_map / mor_map over the shape

    def obj(self, x):
        return self.functor.obj_map[x]

    def mor(self, f):
        return self.functor.mor_map[f]


@dataclass(frozen=True)
class Cocone:
    apex: Any
    legs: Mapping  # shape object -> target morphism


def _hom_count(target, x, y) -> int:
    if hasattr(target, "hom_count"):
        return target.hom_count(x, y)
    return len(tuple(target.hom(x, y)))


def enumerate_cocones(d: Diagram, budget: int | None = None):
    """All commuting cocones, apexes in declaration order, legs lexicographic."""
    budget = resolve_budget(budget)
    shape, T = d.shape, d.target
    objs = list(shape.objects)
    total = 0
    for a in T.objects:
        n = 1
        for x in objs:
            n *= _hom_count(T, d.obj(x), a)
            if n == 0:
                break
        total += n
        if total > budget:
            raise SearchBudgetExceeded(f"more than {budget} candidate cocones")
    out = []
    # morphisms checked as soon as both endpoints have legs
    checks = {i: [] for i in range(len(objs))}
    pos = {x: i for i, x in enumerate(objs)}
    for f in shape.mor_ids:
        i, j = pos[shape.dom(f)], pos[shape.cod(f)]
        checks[max(i, j)].append(f)
    for a in T.objects:
        homs = [list(T.hom(d.obj(x), a)) for x in objs]
        legs = [None] * len(objs)

        def extend(k):
            if k == len(objs):
                out.append(Cocone(a, dict(zip(objs, legs))))
                return
            for lam in homs[k]:
                legs[k] = lam
                ok = True
                for f in checks[k]:
                    x, y = pos[shape.dom(f)], pos[shape.cod(f)]
                    if T.compose(legs[y], d.mor(f)) != legs[x]:
                        ok = False
                        break
                if ok:
                    extend(k + 1)
            legs[k] = None

        extend(0)
    return out


def count_mediators(d: Diagram, c: Cocone, other: Cocone, cap: int = 2) -> int:
    """Number of u: c.apex → other.apex with u∘c.legs = other.legs (capped)."""
    T = d.target
    objs = d.shape.objects
    if hasattr(T, "count_mediators"):
        return T.count_mediators(c.apex, [c.legs[x] for x in objs], other.apex, [other.legs[x] for x in objs], cap)
    n = 0
    for u in T.hom(c.apex, other.apex):
        if all(T.compose(u, c.legs[x]) == other.legs[x] for x in objs):
            n += 1
            if n >= cap:
                break
    return n


def find_mediator(d: Diagram, c: Cocone, other: Cocone):
    T = d.target
    for u in T.hom(c.apex, other.apex):
        if all(T.compose(u, c.legs[x]) == other.legs[x] for x in d.shape.objects):
            return u
    return None


def brute_colimit(d: Diagram, budget: int | None = None) -> Cocone:
    """The first initial cocone, or NoColimit if none exists."""
    cocones = enumerate_cocones(d, budget)
    for c in cocones:
        # cheap filter: the only endomorphism over c must be the identity
        if count_mediators(d, c, c) != 1:
            continue
        if all(count_mediators(d, c, o) == 1 for o in cocones):
            return c
    raise NoColimit("no initial cocone in the target")


def is_initial(d: Diagram, c: Cocone, budget: int | None = None) -> bool:
    return all(count_mediators(d, c, o) == 1 for o in enumerate_cocones(d, budget))
