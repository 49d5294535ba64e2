"""Finite categories, functors and natural transformations given by explicit tables.

Objects and morphisms are identified by strings.  Every listing (objects,
morphisms, hom-sets) follows declaration order, so all derived
constructions are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import NotComposable, ShapeMismatch


@dataclass(frozen=True)
class Violation:
    """One broken law, with the ids that witness it."""

    law: str
    witnesses: tuple
    message: str

    def __str__(self):
        return f"{self.law}: {self.message}"


@dataclass(frozen=True, eq=False)
class FinCat:
    objects: tuple
    morphisms: tuple  # (id, dom, cod) triples
    identity: Mapping[str, str]
    comp: Mapping[tuple, str]  # (g, f) -> g∘f

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "morphisms", tuple(tuple(m) for m in self.morphisms))
        object.__setattr__(self, "identity", dict(self.identity))
        object.__setattr__(self, "comp", {tuple(k): v for k, v in dict(self.comp).items()})

    @cached_property
    def mor_ids(self) -> tuple:
        return tuple(m[0] for m in self.morphisms)

    @cached_property
    def _boundary(self) -> dict:
        return {m: (d, c) for m, d, c in self.morphisms}

    @cached_property
    def _homs(self) -> dict:
        homs = {(x, y): [] for x in self.objects for y in self.objects}
        for m, d, c in self.morphisms:
            homs.setdefault((d, c), []).append(m)
        return {k: tuple(v) for k, v in homs.items()}

    def dom(self, f: str) -> str:
        return self._boundary[f][0]

    def cod(self, f: str) -> str:
        return self._boundary[f][1]

    def hom(self, x: str, y: str) -> tuple:
        return self._homs.get((x, y), ())

    def id(self, x: str) -> str:
        return self.identity[x]

    def is_identity(self, f: str) -> bool:
        d, c = self._boundary[f]
        return d == c and self.identity.get(d) == f

    def compose(self, g: str, f: str) -> str:
        """Return g∘f."""
        if self.cod(f) != self.dom(g):
            raise NotComposable(f"cannot compose {g} after {f}: cod({f})={self.cod(f)} but dom({g})={self.dom(g)}")
        try:
            return self.comp[(g, f)]
        except KeyError:
            raise NotComposable(f"composite {g}∘{f} missing from table") from None

    def compose_path(self, *fs: str) -> str:
        """compose_path(h, g, f) = h∘g∘f."""
        out = fs[-1]
        for g in reversed(fs[:-1]):
            out = self.compose(g, out)
        return out

    def composable_pairs(self):
        for f in self.mor_ids:
            for g in self.hom_from(self.cod(f)):
                yield g, f

    def hom_from(self, x: str) -> tuple:
        return tuple(m for m, d, _ in self.morphisms if d == x)

    def __eq__(self, other):
        if not isinstance(other, FinCat):
            return NotImplemented
        return (
            self.objects == other.objects
            and self.morphisms == other.morphisms
            and self.identity == other.identity
            and self.comp == other.comp
        )

    def __hash__(self):
        return hash((self.objects, self.morphisms))

    def __repr__(self):
        return f"FinCat({len(self.objects)} objects, {len(self.morphisms)} morphisms)"


def compose(c: FinCat, g: str, f: str) -> str:
    return c.compose(g, f)


def make_category(
    objects: Sequence[str],
    arrows: Iterable[Sequence[str]] = (),
    composites: Iterable[Sequence[str]] = (),
    identities: Mapping[str, str] | None = None,
) -> FinCat:
    """Build a category from its non-identity data.

    Identities are created as ``id_<obj>`` unless given in `identities`
    (in which case they must also appear among `arrows`).  Composites that
    involve an identity are filled in; `composites` lists the remaining
    ``(g, f, g∘f)`` entries.
    """
    identities = dict(identities or {})
    morphisms = []
    declared = {a[0] for a in arrows}
    arrows = [tuple(a) for a in arrows]
    for x in objects:
        if x not in identities:
            identities[x] = f"id_{x}"
        if identities[x] not in declared:
            morphisms.append((identities[x], x, x))
    morphisms.extend(arrows)
    comp = {}
    for m, d, c in morphisms:
        comp[(identities[c], m)] = m
        comp[(m, identities[d])] = m
    for g, f, gf in composites:
        comp[(g, f)] = gf
    return FinCat(tuple(objects), tuple(morphisms), identities, comp)


def validate_category(c: FinCat) -> list:
    """Check identity, closure and associativity laws; return the violations."""
    out = []
    seen = set()
    for m, d, cod in c.morphisms:
        if m in seen:
            out.append(Violation("closure", (m,), f"morphism id {m} declared twice"))
        seen.add(m)
        for end in (d, cod):
            if end not in c.objects:
                out.append(Violation("closure", (m,), f"{m} has unknown endpoint {end}"))
    if out:
        return out
    for x in c.objects:
        e = c.identity.get(x)
        if e is None or e not in seen:
            out.append(Violation("identity", (x,), f"object {x} has no identity morphism"))
        elif (c.dom(e), c.cod(e)) != (x, x):
            out.append(Violation("identity", (x, e), f"identity {e} of {x} is not an endomorphism of {x}"))
    if out:
        return out

    for (g, f), gf in c.comp.items():
        if g not in seen or f not in seen:
            out.append(Violation("closure", (g, f), f"table entry ({g}, {f}) names an unknown morphism"))
        elif c.cod(f) != c.dom(g):
            out.append(Violation("closure", (g, f), f"table defines {g}∘{f} but they are not composable"))
    for g, f in c.composable_pairs():
        gf = c.comp.get((g, f))
        if gf is None:
            out.append(Violation("closure", (g, f), f"composite {g}∘{f} is missing"))
        elif gf not in seen:
            out.append(Violation("closure", (g, f), f"{g}∘{f} = {gf} is not a morphism"))
        elif (c.dom(gf), c.cod(gf)) != (c.dom(f), c.cod(g)):
            out.append(Violation("closure", (g, f), f"{g}∘{f} = {gf} has the wrong dom/cod"))
    if out:
        return out

    for f in c.mor_ids:
        left = c.comp[(c.identity[c.cod(f)], f)]
        right = c.comp[(f, c.identity[c.dom(f)])]
        if left != f:
            out.append(Violation("identity", (f,), f"id_{c.cod(f)}∘{f} = {left}, expected {f}"))
        if right != f:
            out.append(Violation("identity", (f,), f"{f}∘id_{c.dom(f)} = {right}, expected {f}"))
    for g, f in c.composable_pairs():
        gf = c.comp[(g, f)]
        for h in c.hom_from(c.cod(g)):
            a = c.comp[(h, gf)]
            b = c.comp[(c.comp[(h, g)], f)]
            if a != b:
                out.append(Violation("associativity", (h, g, f), f"({h}∘{g})∘{f} = {b} but {h}∘({g}∘{f}) = {a}"))
    return out


def opposite(c: FinCat) -> FinCat:
    return FinCat(
        c.objects,
        tuple((m, cod, d) for m, d, cod in c.morphisms),
        c.identity,
        {(f, g): gf for (g, f), gf in c.comp.items()},
    )


def _pair(a: str, b: str) -> str:
    return f"({a},{b})"


def product(a: FinCat, b: FinCat) -> FinCat:
    objects = tuple(_pair(x, y) for x in a.objects for y in b.objects)
    morphisms = tuple(
        (_pair(f, g), _pair(fd, gd), _pair(fc, gc))
        for f, fd, fc in a.morphisms
        for g, gd, gc in b.morphisms
    )
    identity = {_pair(x, y): _pair(a.identity[x], b.identity[y]) for x in a.objects for y in b.objects}
    comp = {
        (_pair(f2, g2), _pair(f1, g1)): _pair(fv, gv)
        for (f2, f1), fv in a.comp.items()
        for (g2, g1), gv in b.comp.items()
    }
    return FinCat(objects, morphisms, identity, comp)


# ---------------------------------------------------------------- functors


@dataclass(frozen=True, eq=False)
class FunctorRep:
    src: FinCat
    dst: FinCat
    obj_map: Mapping[str, str]
    mor_map: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "obj_map", dict(self.obj_map))
        object.__setattr__(self, "mor_map", dict(self.mor_map))

    def __call__(self, x: str) -> str:
        """Apply to an object or a morphism id."""
        if x in self.obj_map and x in self.src.objects:
            return self.obj_map[x]
        return self.mor_map[x]

    def __eq__(self, other):
        if not isinstance(other, FunctorRep):
            return NotImplemented
        return (self.src, self.dst, self.obj_map, self.mor_map) == (
            other.src, other.dst, other.obj_map, other.mor_map)

    __hash__ = object.__hash__


def validate_functor(F: FunctorRep) -> list:
    out = []
    C, D = F.src, F.dst
    for x in C.objects:
        if F.obj_map.get(x) not in D.objects:
            out.append(Violation("functor.object", (x,), f"object {x} sent to {F.obj_map.get(x)!r}, not an object of the target"))
    for f in C.mor_ids:
        if F.mor_map.get(f) not in D.mor_ids:
            out.append(Violation("functor.morphism", (f,), f"morphism {f} sent to {F.mor_map.get(f)!r}, not a morphism of the target"))
    if out:
        return out
    for f in C.mor_ids:
        Ff = F.mor_map[f]
        want = (F.obj_map[C.dom(f)], F.obj_map[C.cod(f)])
        got = (D.dom(Ff), D.cod(Ff))
        if got != want:
            out.append(Violation("functor.dom_cod", (f, Ff), f"F({f}) = {Ff}: {got[0]}→{got[1]}, expected {want[0]}→{want[1]}"))
    if out:
        return out
    for x in C.objects:
        if F.mor_map[C.identity[x]] != D.identity[F.obj_map[x]]:
            out.append(Violation("functor.identity", (x,), f"F(id_{x}) is not the identity of F({x})"))
    for g, f in C.composable_pairs():
        lhs = F.mor_map[C.comp[(g, f)]]
        rhs = D.comp[(F.mor_map[g], F.mor_map[f])]
        if lhs != rhs:
            out.append(Violation("functor.composition", (g, f), f"F({g}∘{f}) = {lhs} but F({g})∘F({f}) = {rhs}"))
    return out


def identity_functor(c: FinCat) -> FunctorRep:
    return FunctorRep(c, c, {x: x for x in c.objects}, {f: f for f in c.mor_ids})


def constant_functor(src: FinCat, dst: FinCat, obj: str) -> FunctorRep:
    e = dst.identity[obj]
    return FunctorRep(src, dst, {x: obj for x in src.objects}, {f: e for f in src.mor_ids})


def compose_functors(G: FunctorRep, F: FunctorRep) -> FunctorRep:
    """G∘F."""
    if F.dst != G.src:
        raise ShapeMismatch("functors are not composable")
    return FunctorRep(
        F.src, G.dst,
        {x: G.obj_map[y] for x, y in F.obj_map.items()},
        {f: G.mor_map[g] for f, g in F.mor_map.items()},
    )


# ------------------------------------------------- natural transformations


@dataclass(frozen=True, eq=False)
class NatTransRep:
    source: FunctorRep
    target: FunctorRep
    components: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "components", dict(self.components))

    def __getitem__(self, x: str) -> str:
        return self.components[x]

    def __eq__(self, other):
        if not isinstance(other, NatTransRep):
            return NotImplemented
        return (self.source, self.target, self.components) == (other.source, other.target, other.components)

    __hash__ = object.__hash__


def validate_nat_trans(alpha: NatTransRep, name: str = "α") -> list:
    """Report ill-typed components and non-commuting naturality squares."""
    F, G = alpha.source, alpha.target
    if F.src != G.src or F.dst != G.dst:
        return [Violation("naturality", (), f"{name}: source and target functors have different boundaries")]
    C, D = F.src, F.dst
    out = []
    for x in C.objects:
        a = alpha.components.get(x)
        want = (F.obj_map[x], G.obj_map[x])
        if a is None or a not in D.mor_ids:
            out.append(Violation("naturality.component", (x,), f"{name}[{x}] is missing; need a morphism {want[0]}→{want[1]}"))
        elif (D.dom(a), D.cod(a)) != want:
            out.append(Violation("naturality.component", (x, a), f"{name}[{x}] = {a}: {D.dom(a)}→{D.cod(a)}, expected {want[0]}→{want[1]}"))
    if out:
        return out
    for f in C.mor_ids:
        x, y = C.dom(f), C.cod(f)
        lhs = D.comp[(G.mor_map[f], alpha.components[x])]
        rhs = D.comp[(alpha.components[y], F.mor_map[f])]
        if lhs != rhs:
            out.append(Violation("naturality.square", (f,), f"{name}: square at {f}: G({f})∘{name}[{x}] = {lhs} but {name}[{y}]∘F({f}) = {rhs}"))
    return out


def identity_transformation(F: FunctorRep) -> NatTransRep:
    return NatTransRep(F, F, {x: F.dst.identity[F.obj_map[x]] for x in F.src.objects})


def vcompose(beta: NatTransRep, alpha: NatTransRep) -> NatTransRep:
    """(β∘α)_C = β_C∘α_C."""
    if alpha.target != beta.source:
        raise ShapeMismatch("vertical composition needs cod(α) = dom(β)")
    D = alpha.source.dst
    return NatTransRep(
        alpha.source, beta.target,
        {x: D.comp[(beta.components[x], alpha.components[x])] for x in alpha.source.src.objects},
    )


def whisker_left(alpha: NatTransRep, K: FunctorRep) -> NatTransRep:
    """α_K with (α_K)_A = α_{K(A)}."""
    if K.dst != alpha.source.src:
        raise ShapeMismatch("whiskering functor must land in the domain of α")
    return NatTransRep(
        compose_functors(alpha.source, K),
        compose_functors(alpha.target, K),
        {a: alpha.components[K.obj_map[a]] for a in K.src.objects},
    )


def whisker_right(H: FunctorRep, alpha: NatTransRep) -> NatTransRep:
    """H(α) with H(α)_C = H(α_C)."""
    if H.src != alpha.source.dst:
        raise ShapeMismatch("whiskering functor must start at the codomain of α")
    return NatTransRep(
        compose_functors(H, alpha.source),
        compose_functors(H, alpha.target),
        {x: H.mor_map[a] for x, a in alpha.components.items()},
    )


def nat_trans_algebra(kind: str, *args) -> NatTransRep:
    """Dispatch to :func:`vcompose`, :func:`whisker_left` or :func:`whisker_right`."""
    ops = {"vcompose": vcompose, "whisker_left": whisker_left, "whisker_right": whisker_right}
    if kind not in ops:
        raise ValueError(f"unknown operation {kind!r}")
    return ops[kind](*args)


# ---------------------------------------------------------------- skeleton


def find_isomorphism(c: FinCat, x: str, y: str):
    """Return a mutually inverse pair (f: x→y, g: y→x) or None.

    The pair with the smallest f id wins.
    """
    for f in sorted(c.hom(x, y)):
        for g in c.hom(y, x):
            if c.comp[(g, f)] == c.identity[x] and c.comp[(f, g)] == c.identity[y]:
                return f, g
    return None


def full_subcategory(c: FinCat, objects: Sequence[str]) -> FinCat:
    keep = set(objects)
    morphisms = tuple(m for m in c.morphisms if m[1] in keep and m[2] in keep)
    ids = {m[0] for m in morphisms}
    comp = {(g, f): gf for (g, f), gf in c.comp.items() if g in ids and f in ids}
    return FinCat(tuple(x for x in c.objects if x in keep), morphisms, {x: c.identity[x] for x in c.objects if x in keep}, comp)


@dataclass(frozen=True)
class Skeleton:
    category: FinCat
    inclusion: FunctorRep  # J
    projection: FunctorRep  # P
    unit: NatTransRep  # μ: id ⇒ P∘J
    counit: NatTransRep  # ν: J∘P ⇒ id
    counit_inverse: Mapping[str, str]
    representative: Mapping[str, str]


def skeleton(c: FinCat) -> Skeleton:
    """Full subcategory on one object per isomorphism class, with the equivalence data."""
    rep = {}
    to_rep = {}  # iso X → rep(X)
    from_rep = {}  # its inverse
    for x in c.objects:
        rep[x] = x
        to_rep[x] = from_rep[x] = c.identity[x]
    reps = []
    for x in sorted(c.objects):
        for r in reps:
            iso = find_isomorphism(c, x, r)
            if iso is not None:
                rep[x] = r
                to_rep[x], from_rep[x] = iso
                break
        else:
            reps.append(x)
    # declaration order for the kept objects
    kept = [x for x in c.objects if rep[x] == x]
    S = full_subcategory(c, kept)
    J = FunctorRep(S, c, {x: x for x in S.objects}, {f: f for f in S.mor_ids})
    P = FunctorRep(
        c, S,
        {x: rep[x] for x in c.objects},
        {f: c.compose_path(to_rep[c.cod(f)], f, from_rep[c.dom(f)]) for f in c.mor_ids},
    )
    mu = NatTransRep(identity_functor(S), compose_functors(P, J), {x: S.identity[x] for x in S.objects})
    nu = NatTransRep(compose_functors(J, P), identity_functor(c), {x: from_rep[x] for x in c.objects})
    return Skeleton(S, J, P, mu, nu, {x: to_rep[x] for x in c.objects}, rep)


# ------------------------------------------------------ standard categories


def terminal() -> FinCat:
    return make_category(["*"])


def discrete(objects: Sequence[str]) -> FinCat:
    return make_category(list(objects))


def walking_arrow() -> FinCat:
    return make_category(["a", "b"], [("u", "a", "b")])


def parallel_pair() -> FinCat:
    return make_category(["0", "1"], [("f", "0", "1"), ("g", "0", "1")])


def leq_id(x: str, y: str) -> str:
    return f"{x}<={y}"


def poset_category(elements: Sequence[str], leq) -> FinCat:
    """Category of a finite poset; `leq(x, y)` decides x ≤ y.

    The morphism x→y is named ``x<=y`` and doubles as the identity when x = y.
    """
    elements = list(elements)
    arrows = [(leq_id(x, y), x, y) for x in elements for y in elements if leq(x, y)]
    identities = {x: leq_id(x, x) for x in elements}
    composites = []
    for _, x, y in arrows:
        for _, y2, z in arrows:
            if y2 == y and x != y and y != z:
                composites.append((leq_id(y, z), leq_id(x, y), leq_id(x, z)))
    return make_category(elements, arrows, composites, identities)


def chain(n: int) -> FinCat:
    """The ordinal 0 < 1 < … < n-1."""
    return poset_category([str(i) for i in range(n)], lambda x, y: int(x) <= int(y))


def free_category(objects: Sequence[str], edges: Sequence[Sequence[str]]) -> FinCat:
    """Path category of an acyclic quiver; composite paths are named ``g.f``."""
    objects = list(objects)
    paths = [(e, d, c) for e, d, c in edges]
    frontier = list(paths)
    while frontier:
        nxt = []
        for p, d, c in frontier:
            for e, d2, c2 in edges:
                if d2 == c:
                    q = (f"{e}.{p}", d, c2)
                    if len(paths) > 10_000:
                        raise ValueError("quiver has cycles or too many paths")
                    nxt.append(q)
        paths.extend(nxt)
        frontier = nxt
    steps = {p: p.split(".") for p, _, _ in paths}
    byname = {p: (p, d, c) for p, d, c in paths}
    composites = []
    for g, gd, gc in paths:
        for f, fd, fc in paths:
            if fc == gd:
                name = ".".join(steps[g] + steps[f])
                composites.append((g, f, byname[name][0]))
    return make_category(objects, paths, composites)


def monoid_category(elements: Sequence[str], table: Mapping, unit: str) -> FinCat:
    """One-object category ``*`` from a finite monoid; table[(a, b)] = a·b = a∘b."""
    arrows = [(m, "*", "*") for m in elements]
    composites = [(a, b, table[(a, b)]) for a in elements for b in elements]
    return make_category(["*"], arrows, composites, {"*": unit})

