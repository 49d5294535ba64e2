"""Modules over preadditive categories with finite hom-groups, and their tensor products.

Morphisms of a :class:`PreaddCat` are ambient integer vectors in the hom
group; composition is a bilinear table on ambient generators.  A module is
an additive functor into Ab given by the action of each hom generator.
Contravariant modules (C^op → Ab) are the usual C-modules; covariant ones
(C → Ab) are C^op-modules.

Two tensor products of a covariant F with a contravariant G are computed:

* :func:`tensor_resolution` applies F to a length-one free presentation of
  G and takes the cokernel;
* :func:`tensor_coend` coequalizes G(f)(y)⊗x and y⊗F(f)(x) on the
  coproduct of G(C)⊗F(C), with one relation family per hom generator f.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as _product
from typing import Mapping, Sequence

from . import snf
from .backends import FINAB
from .coend import Bifunctor, coend
from .errors import IllDefinedAction, InvalidRing, LemmaViolation, NotNatural, ShapeMismatch
from .fincat import FinCat, Violation, validate_category
from .finab import (
    AbMap,
    FgAbGroup,
    coequalizer_ab,
    copair,
    direct_sum,
    is_exact,
    kernel_cokernel,
    lift,
    tensor_maps,
    tensor_z,
)

CONTRA = "contravariant"
CO = "covariant"


def _basis(n: int, i: int) -> tuple:
    return tuple(int(i == j) for j in range(n))


def _add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _scale(k, v):
    return tuple(k * a for a in v)


# ------------------------------------------------------------ categories


@dataclass(frozen=True, eq=False)
class PreaddCat:
    """Preadditive category; ``table[(X, Y, Z)][p][q]`` is e_p∘e_q for e_p in hom(Y,Z), e_q in hom(X,Y)."""

    objects: tuple
    hom: Mapping[tuple, FgAbGroup]
    table: Mapping[tuple, tuple]
    identity: Mapping[str, tuple]

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "hom", dict(self.hom))
        object.__setattr__(self, "table", {k: tuple(tuple(tuple(v) for v in row) for row in t)
                                           for k, t in dict(self.table).items()})
        object.__setattr__(self, "identity", {k: tuple(v) for k, v in dict(self.identity).items()})

    def rank(self, x: str, y: str) -> int:
        return self.hom[(x, y)].rank

    def compose(self, x: str, y: str, z: str, g: Sequence[int], f: Sequence[int]) -> tuple:
        """g∘f for g ∈ hom(y, z), f ∈ hom(x, y)."""
        t = self.table[(x, y, z)]
        out = (0,) * self.rank(x, z)
        for p, gp in enumerate(g):
            if gp:
                for q, fq in enumerate(f):
                    if fq:
                        out = _add(out, _scale(gp * fq, t[p][q]))
        return out

    def equal(self, x: str, y: str, f, g) -> bool:
        return self.hom[(x, y)].equal(f, g)

    def triples(self):
        objs = self.objects
        return [(x, y, z) for x in objs for y in objs for z in objs]


def validate_preadd(c: PreaddCat) -> list:
    out = []
    objs = c.objects
    for x in objs:
        for y in objs:
            h = c.hom.get((x, y))
            if h is None:
                out.append(Violation("preadd.hom", (x, y), f"hom({x}, {y}) is missing"))
            elif not h.is_finite:
                out.append(Violation("preadd.hom", (x, y), f"hom({x}, {y}) = {h.render()} is not finite"))
    if out:
        return out
    for x, y, z in c.triples():
        t = c.table.get((x, y, z))
        if t is None or len(t) != c.rank(y, z) or any(len(row) != c.rank(x, y) for row in t):
            out.append(Violation("preadd.table", (x, y, z), f"composition table for {x}→{y}→{z} has the wrong shape"))
    if out:
        return out
    for x, y, z in c.triples():
        hxz = c.hom[(x, z)]
        for r in c.hom[(y, z)].relators:
            for q in range(c.rank(x, y)):
                if not hxz.is_zero(c.compose(x, y, z, r, _basis(c.rank(x, y), q))):
                    out.append(Violation("preadd.bilinear", (x, y, z), f"a relation of hom({y}, {z}) is not killed by composition"))
        for r in c.hom[(x, y)].relators:
            for p in range(c.rank(y, z)):
                if not hxz.is_zero(c.compose(x, y, z, _basis(c.rank(y, z), p), r)):
                    out.append(Violation("preadd.bilinear", (x, y, z), f"a relation of hom({x}, {y}) is not killed by composition"))
    for x in objs:
        if len(c.identity.get(x, ())) != c.rank(x, x):
            out.append(Violation("preadd.identity", (x,), f"identity of {x} has the wrong length"))
    if out:
        return out
    for x in objs:
        for y in objs:
            for q in range(c.rank(x, y)):
                e = _basis(c.rank(x, y), q)
                if not c.equal(x, y, c.compose(x, y, y, c.identity[y], e), e) or \
                        not c.equal(x, y, c.compose(x, x, y, e, c.identity[x]), e):
                    out.append(Violation("preadd.identity", (x, y, q), f"identity law fails on generator {q} of hom({x}, {y})"))
    for w, x, y in c.triples():
        for z in objs:
            for a, b, d in _product(range(c.rank(y, z)), range(c.rank(x, y)), range(c.rank(w, x))):
                h, g, f = _basis(c.rank(y, z), a), _basis(c.rank(x, y), b), _basis(c.rank(w, x), d)
                lhs = c.compose(w, x, z, c.compose(x, y, z, h, g), f)
                rhs = c.compose(w, y, z, h, c.compose(w, x, y, g, f))
                if not c.equal(w, z, lhs, rhs):
                    out.append(Violation("preadd.associativity", (w, x, y, z, a, b, d),
                                         f"associativity fails on generators of {w}→{x}→{y}→{z}"))
    return out


def opposite_preadd(c: PreaddCat) -> PreaddCat:
    hom = {(x, y): c.hom[(y, x)] for x in c.objects for y in c.objects}
    table = {}
    for x, y, z in c.triples():
        t = c.table[(z, y, x)]  # q∘p in c for p ∈ hom(z, y), q ∈ hom(y, x)
        table[(x, y, z)] = tuple(tuple(t[q][p] for q in range(c.rank(y, x))) for p in range(c.rank(z, y)))
    return PreaddCat(c.objects, hom, table, c.identity)


def hom_elements(c: PreaddCat, x: str, y: str) -> list:
    return list(c.hom[(x, y)].elements())


def element_name(c: PreaddCat, x: str, y: str, v) -> str:
    coords = c.hom[(x, y)].coords(v)
    return f"{x}>{y}[{','.join(map(str, coords))}]"


def underlying_category(c: PreaddCat):
    """The ordinary category whose morphisms are all elements of the hom groups.

    Returns the category and a map from morphism id to its element vector.
    """
    morphisms, comp, rep = [], {}, {}
    for x in c.objects:
        for y in c.objects:
            for v in hom_elements(c, x, y):
                name = element_name(c, x, y, v)
                morphisms.append((name, x, y))
                rep[name] = v
    for x, y, z in c.triples():
        for gv in hom_elements(c, y, z):
            for fv in hom_elements(c, x, y):
                comp[(element_name(c, y, z, gv), element_name(c, x, y, fv))] = \
                    element_name(c, x, z, c.compose(x, y, z, gv, fv))
    identity = {x: element_name(c, x, x, c.identity[x]) for x in c.objects}
    out = FinCat(c.objects, morphisms, identity, comp)
    problems = validate_category(out)
    if problems:  # pragma: no cover - guaranteed by validate_preadd
        raise LemmaViolation(str(problems[0]))
    return out, rep


def find_iso(c: PreaddCat, x: str, y: str):
    for f in hom_elements(c, x, y):
        for g in hom_elements(c, y, x):
            if c.equal(x, x, c.compose(x, y, x, g, f), c.identity[x]) and \
                    c.equal(y, y, c.compose(y, x, y, f, g), c.identity[y]):
                return f, g
    return None


@dataclass(frozen=True, eq=False)
class PreaddSkeleton:
    category: PreaddCat
    representative: Mapping[str, str]
    to_rep: Mapping[str, tuple]  # iso X → rep(X)
    from_rep: Mapping[str, tuple]


def preadd_skeleton(c: PreaddCat) -> PreaddSkeleton:
    """Full subcategory on the smallest object id of each isomorphism class."""
    rep, to_rep, from_rep = {}, {}, {}
    reps = []
    for x in sorted(c.objects):
        for r in reps:
            iso = find_iso(c, x, r)
            if iso is not None:
                rep[x] = r
                to_rep[x], from_rep[x] = iso
                break
        else:
            reps.append(x)
            rep[x] = x
            to_rep[x] = from_rep[x] = c.identity[x]
    kept = tuple(x for x in c.objects if rep[x] == x)
    sub = PreaddCat(
        kept,
        {(x, y): c.hom[(x, y)] for x in kept for y in kept},
        {(x, y, z): c.table[(x, y, z)] for x in kept for y in kept for z in kept},
        {x: c.identity[x] for x in kept},
    )
    return PreaddSkeleton(sub, rep, to_rep, from_rep)


# --------------------------------------------------------------- modules


@dataclass(frozen=True, eq=False)
class CModule:
    """Additive functor on a PreaddCat.

    ``action[(X, Y)][p]`` is the image of generator p of hom(X, Y): a map
    M(Y) → M(X) when contravariant, M(X) → M(Y) when covariant.
    """

    base: PreaddCat
    values: Mapping[str, FgAbGroup]
    action: Mapping[tuple, tuple]
    variance: str = CONTRA
    generators: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "values", dict(self.values))
        object.__setattr__(self, "action", {k: tuple(v) for k, v in dict(self.action).items()})

    def ends(self, x: str, y: str) -> tuple:
        """(source, target) objects of the action of a morphism x → y."""
        return (y, x) if self.variance == CONTRA else (x, y)

    def act(self, x: str, y: str, f: Sequence[int]) -> AbMap:
        s, t = self.ends(x, y)
        out = AbMap.zero(self.values[s], self.values[t])
        for p, k in enumerate(f):
            if k:
                out = out + self.action[(x, y)][p].scale(k)
        return out

    def __call__(self, x: str) -> FgAbGroup:
        return self.values[x]


def validate_module(m: CModule) -> list:
    c = m.base
    out = []
    for x in c.objects:
        for y in c.objects:
            acts = m.action.get((x, y), ())
            s, t = m.ends(x, y)
            if len(acts) != c.rank(x, y):
                out.append(Violation("module.action", (x, y), f"need {c.rank(x, y)} action maps for hom({x}, {y})"))
                continue
            for p, a in enumerate(acts):
                if a.dom != m.values[s] or a.cod != m.values[t]:
                    out.append(Violation("module.action", (x, y, p), f"action of generator {p} of hom({x}, {y}) has the wrong boundary"))
                elif not a.is_well_defined():
                    out.append(Violation("module.action", (x, y, p), f"action of generator {p} of hom({x}, {y}) ignores relations"))
    if out:
        return out
    for x in c.objects:
        for y in c.objects:
            for r in c.hom[(x, y)].relators:
                if not m.act(x, y, r).is_zero():
                    out.append(Violation("module.additive", (x, y), f"a relation of hom({x}, {y}) does not act as zero"))
    for x in c.objects:
        if m.act(x, x, c.identity[x]) != AbMap.identity(m.values[x]):
            out.append(Violation("module.identity", (x,), f"identity of {x} does not act as the identity"))
    for x, y, z in c.triples():
        for p in range(c.rank(y, z)):
            for q in range(c.rank(x, y)):
                g, f = _basis(c.rank(y, z), p), _basis(c.rank(x, y), q)
                lhs = m.act(x, z, c.compose(x, y, z, g, f))
                mg, mf = m.act(y, z, g), m.act(x, y, f)
                rhs = mf.compose(mg) if m.variance == CONTRA else mg.compose(mf)
                if lhs != rhs:
                    out.append(Violation("module.composition", (x, y, z, p, q), f"composition of generators {p}, {q} through {y} is not respected"))
    return out


@dataclass(frozen=True, eq=False)
class CModuleMap:
    source: CModule
    target: CModule
    components: Mapping[str, AbMap]

    def __post_init__(self):
        object.__setattr__(self, "components", dict(self.components))

    def __getitem__(self, x):
        return self.components[x]


def validate_module_map(a: CModuleMap) -> list:
    M, N = a.source, a.target
    if M.base is not N.base and M.base.objects != N.base.objects:
        return [Violation("module_map.base", (), "modules live over different categories")]
    if M.variance != N.variance:
        return [Violation("module_map.variance", (), "modules have different variance")]
    c = M.base
    out = []
    for x in c.objects:
        comp = a.components.get(x)
        if comp is None or comp.dom != M.values[x] or comp.cod != N.values[x]:
            out.append(Violation("module_map.component", (x,), f"component at {x} has the wrong boundary"))
        elif not comp.is_well_defined():
            out.append(Violation("module_map.component", (x,), f"component at {x} ignores relations"))
    if out:
        return out
    for x in c.objects:
        for y in c.objects:
            s, t = M.ends(x, y)
            for p in range(c.rank(x, y)):
                if N.action[(x, y)][p].compose(a.components[s]) != a.components[t].compose(M.action[(x, y)][p]):
                    out.append(Violation("module_map.naturality", (x, y, p), f"square for generator {p} of hom({x}, {y}) does not commute"))
    return out


def identity_module_map(m: CModule) -> CModuleMap:
    return CModuleMap(m, m, {x: AbMap.identity(m.values[x]) for x in m.base.objects})


def zero_module_map(m: CModule, n: CModule) -> CModuleMap:
    return CModuleMap(m, n, {x: AbMap.zero(m.values[x], n.values[x]) for x in m.base.objects})


def compose_module_maps(b: CModuleMap, a: CModuleMap) -> CModuleMap:
    return CModuleMap(a.source, b.target, {x: b.components[x].compose(a.components[x]) for x in a.components})


def scale_module_map(a: CModuleMap, k: int) -> CModuleMap:
    return CModuleMap(a.source, a.target, {x: m.scale(k) for x, m in a.components.items()})


def zero_module(c: PreaddCat, variance: str = CONTRA) -> CModule:
    z = FgAbGroup.zero()
    return CModule(c, {x: z for x in c.objects},
                   {(x, y): tuple(AbMap.zero(z, z) for _ in range(c.rank(x, y))) for x in c.objects for y in c.objects},
                   variance)


def module_direct_sum(parts: Sequence[CModule]):
    """Componentwise direct sum, with injection and projection maps."""
    parts = list(parts)
    if not parts:
        raise ShapeMismatch("need at least one module")
    c, var = parts[0].base, parts[0].variance
    values, inj = {}, {}
    for x in c.objects:
        values[x], inj[x] = direct_sum([p.values[x] for p in parts])
    action = {}
    for x in c.objects:
        for y in c.objects:
            s, t = parts[0].ends(x, y)
            acts = []
            for q in range(c.rank(x, y)):
                cols = []
                for k, p in enumerate(parts):
                    a = inj[t][k].compose(p.action[(x, y)][q])
                    cols += [a.image_of(j) for j in range(a.dom.rank)]
                acts.append(AbMap.from_columns(values[s], values[t], cols))
            action[(x, y)] = tuple(acts)
    S = CModule(c, values, action, var)
    injections = [CModuleMap(p, S, {x: inj[x][k] for x in c.objects}) for k, p in enumerate(parts)]
    return S, injections


# ----------------------------------------------------------- free modules


def free_module(c: PreaddCat, objs: Sequence[str], variance: str = CONTRA) -> CModule:
    """⊕ Hom(-, C_i) (contravariant) or ⊕ Hom(C_i, -) (covariant).

    ``generators`` lists (summand, C_i, id_{C_i}) for the marked generators.
    """
    objs = list(objs)

    def hom_of(x, ci):
        return c.hom[(x, ci)] if variance == CONTRA else c.hom[(ci, x)]

    values, inj = {}, {}
    for x in c.objects:
        values[x], inj[x] = direct_sum([hom_of(x, ci) for ci in objs])
    action = {}
    for x in c.objects:
        for y in c.objects:
            s, t = (y, x) if variance == CONTRA else (x, y)
            acts = []
            for p in range(c.rank(x, y)):
                e = _basis(c.rank(x, y), p)
                cols = []
                for k, ci in enumerate(objs):
                    for q in range(hom_of(s, ci).rank):
                        h = _basis(hom_of(s, ci).rank, q)
                        if variance == CONTRA:
                            v = c.compose(x, y, ci, h, e)  # h∘e ∈ hom(x, ci)
                        else:
                            v = c.compose(ci, x, y, e, h)  # e∘h ∈ hom(ci, y)
                        cols.append(inj[t][k](v))
                acts.append(AbMap.from_columns(values[s], values[t], cols))
            action[(x, y)] = tuple(acts)
    gens = tuple((k, ci, inj[ci][k](c.identity[ci])) for k, ci in enumerate(objs))
    return CModule(c, values, action, variance, gens)


def yoneda_map(free: CModule, target: CModule, elements: Sequence[tuple]) -> CModuleMap:
    """The map out of a free module sending generator k to ``elements[k]`` ∈ target(C_k)."""
    c = free.base
    if len(elements) != len(free.generators):
        raise ShapeMismatch("one element per free generator is required")
    comps = {}
    for x in c.objects:
        cols = []
        for (k, ci, _), v in zip(free.generators, elements):
            hrank = c.rank(x, ci) if free.variance == CONTRA else c.rank(ci, x)
            for q in range(hrank):
                h = _basis(hrank, q)
                a = target.act(x, ci, h) if free.variance == CONTRA else target.act(ci, x, h)
                cols.append(a(v))
        comps[x] = AbMap.from_columns(free.values[x], target.values[x], cols)
    out = CModuleMap(free, target, comps)
    problems = validate_module_map(out)
    if problems:  # pragma: no cover - Yoneda maps are natural by construction
        raise LemmaViolation(str(problems[0]))
    return out


# ----------------------------------------------------- kernels, cokernels


@dataclass(frozen=True, eq=False)
class ModuleKernelCokernel:
    kernel: CModule
    inclusion: CModuleMap
    cokernel: CModule
    projection: CModuleMap


def module_kernel_cokernel(alpha: CModuleMap) -> ModuleKernelCokernel:
    problems = validate_module_map(alpha)
    if problems:
        raise NotNatural("; ".join(map(str, problems)))
    M, N = alpha.source, alpha.target
    c = M.base
    kc = {x: kernel_cokernel(alpha.components[x]) for x in c.objects}
    kact, qact = {}, {}
    for x in c.objects:
        for y in c.objects:
            s, t = M.ends(x, y)
            ks, kt = kc[s], kc[t]
            kl, ql = [], []
            for p in range(c.rank(x, y)):
                a = M.action[(x, y)][p]
                cols = []
                for j in range(ks.kernel.rank):
                    z = lift(kt.inclusion, a(ks.inclusion.image_of(j)))
                    if z is None:  # pragma: no cover - naturality forces a lift
                        raise LemmaViolation("kernel is not stable under the action")
                    cols.append(z)
                kl.append(AbMap.from_columns(ks.kernel, kt.kernel, cols))
                ql.append(AbMap(ks.cokernel, kt.cokernel, N.action[(x, y)][p].matrix))
            kact[(x, y)], qact[(x, y)] = tuple(kl), tuple(ql)
    K = CModule(c, {x: kc[x].kernel for x in c.objects}, kact, M.variance)
    Q = CModule(c, {x: kc[x].cokernel for x in c.objects}, qact, M.variance)
    inc = CModuleMap(K, M, {x: kc[x].inclusion for x in c.objects})
    proj = CModuleMap(N, Q, {x: kc[x].projection for x in c.objects})
    for part in (validate_module(K), validate_module(Q), validate_module_map(inc), validate_module_map(proj)):
        if part:  # pragma: no cover
            raise LemmaViolation(str(part[0]))
    return ModuleKernelCokernel(K, inc, Q, proj)


def is_exact_at(f: CModuleMap, g: CModuleMap) -> bool:
    return all(is_exact(f.components[x], g.components[x]) for x in f.source.base.objects)


# ------------------------------------------------------ free presentations


@dataclass(frozen=True, eq=False)
class FreePresentation:
    module: CModule
    f0: CModule
    f0_summands: tuple  # (object, generator index of module(object))
    epsilon: CModuleMap
    kernel: ModuleKernelCokernel
    f1: CModule
    f1_summands: tuple  # (object, generator index of kernel(object))
    d: CModuleMap  # F1 → F0
    entries: Mapping[tuple, tuple]  # (i, j) -> f_ij ∈ hom(C_i, C_j), i in F1, j in F0


def _cover(g: CModule):
    c = g.base
    summands = tuple((x, j) for x in c.objects for j in range(g.values[x].rank))
    f0 = free_module(c, [x for x, _ in summands], g.variance)
    eps = yoneda_map(f0, g, [_basis(g.values[x].rank, j) for x, j in summands])
    return summands, f0, eps


def free_presentation(g: CModule) -> FreePresentation:
    if g.variance != CONTRA:
        raise ShapeMismatch("free presentations are built for contravariant modules")
    c = g.base
    s0, f0, eps = _cover(g)
    kc = module_kernel_cokernel(eps)
    K = kc.kernel
    s1 = tuple((y, k) for y in c.objects for k in range(K.values[y].rank))
    f1 = free_module(c, [y for y, _ in s1], CONTRA)
    elems = [kc.inclusion.components[y].image_of(k) for y, k in s1]
    d = yoneda_map(f1, f0, elems)
    entries = {}
    for i, ((y, _), v) in enumerate(zip(s1, elems)):
        off = 0
        for j, (x, _) in enumerate(s0):
            r = c.rank(y, x)
            entries[(i, j)] = tuple(v[off:off + r])
            off += r
    return FreePresentation(g, f0, s0, eps, kc, f1, s1, d, entries)


def _block_map(dom: FgAbGroup, cod: FgAbGroup, row_ranks, col_ranks, blocks) -> AbMap:
    rows = [[0] * dom.rank for _ in range(cod.rank)]
    r0 = 0
    for i, rr in enumerate(row_ranks):
        c0 = 0
        for j, cr in enumerate(col_ranks):
            b = blocks.get((i, j))
            if b is not None:
                for a in range(rr):
                    for k in range(cr):
                        rows[r0 + a][c0 + k] = b.matrix[a][k]
            c0 += cr
        r0 += rr
    return AbMap(dom, cod, rows)


@dataclass(frozen=True, eq=False)
class ResolutionTensor:
    group: FgAbGroup
    presentation: FreePresentation
    top: FgAbGroup  # ⊕ F(C_j) over F0 summands
    bottom: FgAbGroup  # ⊕ F(C_i) over F1 summands
    map: AbMap  # (F(f_ij))


def _check_pair(f: CModule, g: CModule):
    if f.variance != CO or g.variance != CONTRA:
        raise ShapeMismatch("tensor needs a covariant left factor and a contravariant right factor")
    if f.base is not g.base and f.base.objects != g.base.objects:
        raise ShapeMismatch("modules live over different categories")


def tensor_resolution_data(f: CModule, g: CModule) -> ResolutionTensor:
    _check_pair(f, g)
    pres = free_presentation(g)
    top, _ = direct_sum([f.values[x] for x, _ in pres.f0_summands])
    bottom, _ = direct_sum([f.values[y] for y, _ in pres.f1_summands])
    blocks = {}
    for (i, j), v in pres.entries.items():
        y, x = pres.f1_summands[i][0], pres.f0_summands[j][0]
        blocks[(j, i)] = f.act(y, x, v)
    m = _block_map(bottom, top,
                   [f.values[x].rank for x, _ in pres.f0_summands],
                   [f.values[y].rank for y, _ in pres.f1_summands], blocks)
    return ResolutionTensor(kernel_cokernel(m).cokernel, pres, top, bottom, m)


def tensor_resolution(f: CModule, g: CModule) -> FgAbGroup:
    """F ⊗ G as the cokernel of (F(f_ij)) over a free presentation of G."""
    return tensor_resolution_data(f, g).group


# ------------------------------------------------------------ coend tensor


@dataclass(frozen=True, eq=False)
class CoendTensor:
    group: FgAbGroup
    diagonal: FgAbGroup
    j: Mapping[str, AbMap]  # G(X)⊗F(X) → diagonal
    parts: Mapping[str, FgAbGroup]


def _restrict(m: CModule, sub: PreaddCat) -> CModule:
    keep = sub.objects
    return CModule(sub, {x: m.values[x] for x in keep},
                   {(x, y): m.action[(x, y)] for x in keep for y in keep}, m.variance)


def tensor_coend_data(f: CModule, g: CModule) -> CoendTensor:
    _check_pair(f, g)
    c = f.base
    objs = c.objects
    parts = {x: tensor_z(g.values[x], f.values[x]) for x in objs}
    diag, jl = direct_sum([parts[x] for x in objs])
    j = dict(zip(objs, jl))
    pieces, a_legs, b_legs = [], [], []
    for x in objs:
        for y in objs:
            for p in range(c.rank(x, y)):
                # generator p: x → y; summand G(y)⊗F(x)
                pieces.append(tensor_z(g.values[y], f.values[x]))
                a_legs.append(j[y].compose(tensor_maps(AbMap.identity(g.values[y]), f.action[(x, y)][p])))
                b_legs.append(j[x].compose(tensor_maps(g.action[(x, y)][p], AbMap.identity(f.values[x]))))
    middle, _ = direct_sum(pieces)
    alpha = copair(middle, a_legs, diag)
    beta = copair(middle, b_legs, diag)
    q, _ = coequalizer_ab(alpha, beta)
    return CoendTensor(q, diag, j, parts)


def tensor_coend(f: CModule, g: CModule, *, use_skeleton: bool = True) -> FgAbGroup:
    """∫ G(C)⊗F(C), with relations indexed by hom-group generators."""
    _check_pair(f, g)
    if use_skeleton:
        sk = preadd_skeleton(f.base)
        if len(sk.category.objects) < len(f.base.objects):
            return tensor_coend_data(_restrict(f, sk.category), _restrict(g, sk.category)).group
    return tensor_coend_data(f, g).group


def tensor_coend_underlying(f: CModule, g: CModule) -> FgAbGroup:
    """Ordinary coend over every element of every hom group, via the generic engine."""
    _check_pair(f, g)
    c = f.base
    U, reps = underlying_category(c)
    obj = {(x, y): tensor_z(g.values[x], f.values[y]) for x in c.objects for y in c.objects}

    def on_first(h, y):
        a, b = U.dom(h), U.cod(h)
        return tensor_maps(g.act(a, b, reps[h]), AbMap.identity(f.values[y]))

    def on_second(x, h):
        a, b = U.dom(h), U.cod(h)
        return tensor_maps(AbMap.identity(g.values[x]), f.act(a, b, reps[h]))

    H = Bifunctor.from_functions(U, FINAB, lambda x, y: obj[(x, y)], on_first, on_second)
    return coend(H).apex


# ------------------------------------------------- maps and the comparison


def tensor_coend_map(f: CModule, eta: CModuleMap, src: CoendTensor | None = None,
                     dst: CoendTensor | None = None) -> AbMap:
    """F ⊗ η on coend tensors, induced by η_X ⊗ id on the diagonal."""
    src = src or tensor_coend_data(f, eta.source)
    dst = dst or tensor_coend_data(f, eta.target)
    objs = f.base.objects
    blocks = {(i, i): tensor_maps(eta.components[x], AbMap.identity(f.values[x])) for i, x in enumerate(objs)}
    m = _block_map(src.diagonal, dst.diagonal, [dst.parts[x].rank for x in objs],
                   [src.parts[x].rank for x in objs], blocks)
    out = AbMap(src.group, dst.group, m.matrix)
    if not out.is_well_defined():
        raise LemmaViolation("F⊗η does not descend to the coend")
    return out


def tensor_resolution_map(f: CModule, eta: CModuleMap, src: ResolutionTensor | None = None,
                          dst: ResolutionTensor | None = None) -> AbMap:
    """F ⊗ η on resolution tensors, from the canonical lift η′ between free covers."""
    src = src or tensor_resolution_data(f, eta.source)
    dst = dst or tensor_resolution_data(f, eta.target)
    s0, t0 = src.presentation.f0_summands, dst.presentation.f0_summands
    where = {key: i for i, key in enumerate(t0)}
    blocks = {}
    for jcol, (x, j) in enumerate(s0):
        v = eta.components[x].image_of(j)
        for k, coeff in enumerate(v):
            if coeff:
                i = where[(x, k)]
                prev = blocks.get((i, jcol))
                add = AbMap.identity(f.values[x]).scale(coeff)
                blocks[(i, jcol)] = add if prev is None else prev + add
    m = _block_map(src.top, dst.top, [f.values[x].rank for x, _ in t0], [f.values[x].rank for x, _ in s0], blocks)
    out = AbMap(src.group, dst.group, m.matrix)
    if not out.is_well_defined():
        raise LemmaViolation("F⊗η does not descend to the resolution cokernel")
    return out


def comparison_map(f: CModule, g: CModule, res: ResolutionTensor | None = None,
                   cot: CoendTensor | None = None) -> AbMap:
    """The isomorphism from the resolution tensor to the coend tensor (x in summand (X, j) ↦ e_j ⊗ x)."""
    res = res or tensor_resolution_data(f, g)
    cot = cot or tensor_coend_data(f, g)
    cols = []
    for x, j in res.presentation.f0_summands:
        nf = f.values[x].rank
        for t in range(nf):
            cols.append(cot.j[x](_basis(cot.parts[x].rank, j * nf + t)))
    out = AbMap.from_columns(res.group, cot.group, cols)
    if not out.is_well_defined():
        raise LemmaViolation("comparison map does not descend to the cokernel")
    return out


# ------------------------------------------------------- rings and modules


def _elem(v, n: int) -> tuple:
    if isinstance(v, int):
        return tuple([v] + [0] * (n - 1)) if n else ()
    return tuple(v)


@dataclass(frozen=True, eq=False)
class RingPresentation:
    """Finite ring: additive group from invariant factors, mult[p][q] = e_p·e_q in coordinates."""

    invariants: tuple
    mult: tuple

    def __post_init__(self):
        object.__setattr__(self, "invariants", tuple(int(d) for d in self.invariants))
        n = len(self.invariants)
        object.__setattr__(self, "mult", tuple(tuple(_elem(v, n) for v in row) for row in self.mult))

    @property
    def group(self) -> FgAbGroup:
        return FgAbGroup.from_invariants(self.invariants)

    def multiply(self, a, b) -> tuple:
        n = len(self.invariants)
        out = (0,) * n
        for p, x in enumerate(a):
            for q, y in enumerate(b):
                if x and y:
                    out = _add(out, _scale(x * y, self.mult[p][q]))
        return out


def validate_ring(r: RingPresentation) -> tuple:
    """Check the ring axioms and return the unit (in coordinates)."""
    n = len(r.invariants)
    if any(d <= 0 for d in r.invariants):
        raise InvalidRing("additive group must be finite (all invariant factors positive)")
    if len(r.mult) != n or any(len(row) != n for row in r.mult) or any(len(v) != n for row in r.mult for v in row):
        raise InvalidRing("multiplication table must be n×n with entries of length n")
    A = r.group
    basis = [_basis(n, i) for i in range(n)]
    for rel in A.relators:
        for b in basis:
            if not A.is_zero(r.multiply(rel, b)) or not A.is_zero(r.multiply(b, rel)):
                raise InvalidRing("distributivity: multiplication does not respect the additive relations")
    for a in basis:
        for b in basis:
            for c in basis:
                if not A.equal(r.multiply(r.multiply(a, b), c), r.multiply(a, r.multiply(b, c))):
                    raise InvalidRing("associativity fails on generators")
    for u in A.elements():
        if all(A.equal(r.multiply(u, b), b) and A.equal(r.multiply(b, u), b) for b in basis):
            return tuple(u)
    raise InvalidRing("unit: no two-sided multiplicative identity")


def ring_to_category(r: RingPresentation) -> PreaddCat:
    """One object ``*``; composition g∘f is the product g·f."""
    unit = validate_ring(r)
    n = len(r.invariants)
    table = tuple(tuple(r.mult[p][q] for q in range(n)) for p in range(n))
    return PreaddCat(("*",), {("*", "*"): r.group}, {("*", "*", "*"): table}, {"*": unit})


@dataclass(frozen=True, eq=False)
class ModulePresentation:
    """A module over a finite ring: group plus action matrices keyed by ring element."""

    ring: RingPresentation
    invariants: tuple
    actions: Mapping  # ring element (int or coordinate tuple) -> matrix
    side: str = "right"

    def __post_init__(self):
        n = len(self.ring.invariants)
        object.__setattr__(self, "invariants", tuple(int(d) for d in self.invariants))
        object.__setattr__(self, "actions", {_elem(k, n): tuple(tuple(r) for r in m) for k, m in dict(self.actions).items()})

    @property
    def group(self) -> FgAbGroup:
        return FgAbGroup.from_invariants(self.invariants)

    def generator_actions(self) -> list:
        """Action maps of the ring's ambient generators."""
        n = len(self.ring.invariants)
        A = self.group
        R = self.ring.group
        out = []
        for p in range(n):
            e = _basis(n, p)
            m = next((mat for k, mat in self.actions.items() if R.equal(k, e)), None)
            if m is None:
                raise IllDefinedAction(f"no action given for ring generator {list(e)}")
            out.append(AbMap(A, A, m))
        return out


def module_to_functor(m: ModulePresentation, base: PreaddCat | None = None) -> CModule:
    """Right modules become contravariant functors, left modules covariant ones."""
    if m.side not in ("right", "left"):
        raise IllDefinedAction(f"module side must be 'right' or 'left', not {m.side!r}")
    base = base or ring_to_category(m.ring)
    A = m.group
    try:
        gens = m.generator_actions()
    except ValueError as e:
        raise IllDefinedAction(f"action matrix has the wrong shape: {e}") from None
    for p, a in enumerate(gens):
        if not a.is_well_defined():
            raise IllDefinedAction(f"action of generator {p} does not respect the module's relations")
    for key, mat in m.actions.items():
        try:
            given = AbMap(A, A, mat)
        except ValueError as e:
            raise IllDefinedAction(f"action matrix has the wrong shape: {e}") from None
        implied = AbMap.zero(A, A)
        for p, k in enumerate(key):
            implied = implied + gens[p].scale(k)
        if given != implied:
            raise IllDefinedAction(
                f"additivity: element {list(key)} acts as {[list(r) for r in given.matrix]} "
                f"but the sum of generator actions gives {[list(r) for r in implied.matrix]}")
    mod = CModule(base, {"*": A}, {("*", "*"): tuple(gens)}, CONTRA if m.side == "right" else CO)
    problems = validate_module(mod)
    if problems:
        raise IllDefinedAction("; ".join(map(str, problems)))
    return mod


def tensor_bilinear_oracle(a: ModulePresentation, b: ModulePresentation) -> FgAbGroup:
    """A ⊗_R B from generators a_i ⊗ b_j, bilinearity and the balancing relations.

    Works directly on the action matrices, without the categorical machinery.
    """
    if a.side != "right" or b.side != "left":
        raise ShapeMismatch("oracle needs a right module and a left module")
    A, B = a.group, b.group
    na, nb = A.rank, B.rank
    rels = [list(r) for r in tensor_z(A, B).relators]
    for ra, rb in zip(a.generator_actions(), b.generator_actions()):
        for i in range(na):
            ai_r = ra.image_of(i)
            for j in range(nb):
                rbj = rb.image_of(j)
                v = [0] * (na * nb)
                for s in range(na):
                    v[s * nb + j] += ai_r[s]
                for t in range(nb):
                    v[i * nb + t] -= rbj[t]
                rels.append(v)
    return FgAbGroup(na * nb, rels)


def regular_module(r: RingPresentation, side: str = "right") -> ModulePresentation:
    """R acting on itself by multiplication."""
    n = len(r.invariants)
    actions = {}
    for p in range(n):
        e = _basis(n, p)
        # column q is e_q·e (right) or e·e_q (left)
        cols = [r.multiply(_basis(n, q), e) if side == "right" else r.multiply(e, _basis(n, q)) for q in range(n)]
        actions[e] = snf.from_columns(cols, n)
    return ModulePresentation(r, r.invariants, actions, side)
