"""Finitely generated abelian groups as integer presentations.

A group is ``Z^n / R`` where the columns of R (the *relators*) span the
relation lattice.  Presentations are never simplified: injections and
projections keep their ambient coordinates, and the invariant factors are a
cached view computed from the Smith normal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product as _product
from typing import Sequence

from . import snf
from .errors import BoundaryMismatch, IllDefinedMap


@dataclass(frozen=True, eq=False)
class FgAbGroup:
    rank: int  # ambient rank n
    relators: tuple = ()  # each a length-n integer vector

    def __post_init__(self):
        rels = tuple(tuple(int(x) for x in r) for r in self.relators)
        if any(len(r) != self.rank for r in rels):
            raise ValueError("relator length must equal the ambient rank")
        object.__setattr__(self, "relators", rels)

    @classmethod
    def from_invariants(cls, factors: Sequence[int]) -> "FgAbGroup":
        """⊕ Z/d over `factors`; 0 stands for a copy of Z."""
        n = len(factors)
        rels = tuple(tuple(d if i == j else 0 for i in range(n)) for j, d in enumerate(factors) if d)
        return cls(n, rels)

    @classmethod
    def free(cls, n: int) -> "FgAbGroup":
        return cls(n, ())

    @classmethod
    def zero(cls) -> "FgAbGroup":
        return cls(0, ())

    @property
    def relation_matrix(self) -> list:
        return snf.from_columns(self.relators, self.rank)

    @cached_property
    def _smith(self):
        return snf.smith_full(self.relation_matrix, self.rank, len(self.relators))

    @cached_property
    def _live(self) -> tuple:
        # coordinates with d != 1 survive in the canonical form
        return tuple(i for i, d in enumerate(self._smith[1]) if d != 1)

    @cached_property
    def invariants(self) -> tuple:
        """Invariant factors, 1s dropped, torsion in divisibility order then zeros."""
        diag = self._smith[1]
        tors = [d for d in diag if d > 1]
        free = [0 for d in diag if d == 0]
        return tuple(tors + free)

    def coords(self, x: Sequence[int]) -> tuple:
        """Canonical coordinates of the class of x (a complete invariant)."""
        U, diag, _, _ = self._smith
        y = snf.matvec(U, x)
        return tuple(y[i] % diag[i] if diag[i] else y[i] for i in self._live)

    def is_zero(self, x: Sequence[int]) -> bool:
        return not any(self.coords(x))

    def equal(self, x: Sequence[int], y: Sequence[int]) -> bool:
        return self.is_zero([a - b for a, b in zip(x, y)])

    @property
    def is_finite(self) -> bool:
        return 0 not in self.invariants

    def order(self) -> int | None:
        if not self.is_finite:
            return None
        out = 1
        for d in self.invariants:
            out *= d
        return out

    def elements(self):
        """Yield one ambient representative per element (finite groups only)."""
        if not self.is_finite:
            raise ValueError("group is infinite")
        _, diag, _, Ui = self._smith
        live = self._live
        for ys in _product(*(range(diag[i]) for i in live)):
            y = [0] * self.rank
            for i, v in zip(live, ys):
                y[i] = v
            yield tuple(snf.matvec(Ui, y))

    def basis_vector(self, i: int) -> tuple:
        return tuple(int(i == j) for j in range(self.rank))

    def is_isomorphic(self, other: "FgAbGroup") -> bool:
        return self.invariants == other.invariants

    def render(self) -> str:
        return render_invariants(self.invariants)

    def __eq__(self, other):
        if not isinstance(other, FgAbGroup):
            return NotImplemented
        return self.rank == other.rank and self.relators == other.relators

    def __hash__(self):
        return hash((self.rank, self.relators))

    def __repr__(self):
        return f"FgAbGroup({self.render()}; rank {self.rank})"


def render_invariants(factors: Sequence[int]) -> str:
    free = sum(1 for d in factors if d == 0)
    parts = []
    if free == 1:
        parts.append("Z")
    elif free > 1:
        parts.append(f"Z^{free}")
    parts += [f"Z/{d}" for d in factors if d > 1]
    return " ⊕ ".join(parts) if parts else "0"


def canonicalize(g: FgAbGroup) -> tuple:
    return g.invariants


def are_isomorphic(a: FgAbGroup, b: FgAbGroup) -> bool:
    return a.invariants == b.invariants


@dataclass(frozen=True, eq=False)
class AbMap:
    dom: FgAbGroup
    cod: FgAbGroup
    matrix: tuple  # cod.rank rows × dom.rank columns; column j = image of generator j

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.matrix)
        if len(m) != self.cod.rank or any(len(row) != self.dom.rank for row in m):
            raise ValueError(f"matrix shape must be {self.cod.rank}×{self.dom.rank}")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, g: FgAbGroup) -> "AbMap":
        return cls(g, g, snf.identity(g.rank))

    @classmethod
    def zero(cls, dom: FgAbGroup, cod: FgAbGroup) -> "AbMap":
        return cls(dom, cod, snf.zeros(cod.rank, dom.rank))

    @classmethod
    def from_columns(cls, dom: FgAbGroup, cod: FgAbGroup, cols: Sequence[Sequence[int]]) -> "AbMap":
        return cls(dom, cod, snf.from_columns(cols, cod.rank))

    def __call__(self, x: Sequence[int]) -> tuple:
        return tuple(snf.matvec(self.matrix, x))

    def image_of(self, j: int) -> tuple:
        return tuple(row[j] for row in self.matrix)

    def compose(self, f: "AbMap") -> "AbMap":
        """self∘f."""
        if f.cod != self.dom:
            raise BoundaryMismatch("cannot compose: codomain and domain differ")
        return AbMap(f.dom, self.cod, snf.matmul(list(self.matrix), list(f.matrix), inner=self.dom.rank,
                                                  cols=f.dom.rank)
                     if self.cod.rank else ())

    def _same_boundary(self, other: "AbMap"):
        if self.dom != other.dom or self.cod != other.cod:
            raise BoundaryMismatch("maps have different domains or codomains")

    def __add__(self, other: "AbMap") -> "AbMap":
        self._same_boundary(other)
        return AbMap(self.dom, self.cod, [[a + b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)])

    def __neg__(self) -> "AbMap":
        return AbMap(self.dom, self.cod, [[-a for a in r] for r in self.matrix])

    def __sub__(self, other: "AbMap") -> "AbMap":
        return self + (-other)

    def scale(self, k: int) -> "AbMap":
        return AbMap(self.dom, self.cod, [[k * a for a in r] for r in self.matrix])

    def is_well_defined(self) -> bool:
        return all(self.cod.is_zero(self(r)) for r in self.dom.relators)

    def is_zero(self) -> bool:
        return all(self.cod.is_zero(self.image_of(j)) for j in range(self.dom.rank))

    def __eq__(self, other):
        """Equality as homomorphisms: same boundary and agreement modulo the codomain relations."""
        if not isinstance(other, AbMap):
            return NotImplemented
        if self.dom != other.dom or self.cod != other.cod:
            return False
        return (self - other).is_zero()

    __hash__ = None

    def is_iso(self) -> bool:
        kc = kernel_cokernel(self)
        return not kc.kernel.invariants and not kc.cokernel.invariants

    def __repr__(self):
        return f"AbMap({self.dom.render()} → {self.cod.render()}, {list(map(list, self.matrix))})"


def hom_sum(maps: Sequence[AbMap], dom: FgAbGroup, cod: FgAbGroup) -> AbMap:
    out = AbMap.zero(dom, cod)
    for m in maps:
        out = out + m
    return out


# ------------------------------------------------------------ subgroups


def in_subgroup(x: Sequence[int], gens: Sequence[Sequence[int]], g: FgAbGroup) -> bool:
    """Is x in the subgroup of g generated by `gens`?"""
    cols = list(gens) + list(g.relators)
    if not cols:
        return not any(x)
    return snf.solve(snf.from_columns(cols, g.rank), list(x), len(cols)) is not None


def lift(f: AbMap, v: Sequence[int]) -> tuple | None:
    """Some x with f(x) = v in the codomain, or None if v is not in the image."""
    n = f.dom.rank
    cols = [f.image_of(j) for j in range(n)] + list(f.cod.relators)
    z = snf.solve(snf.from_columns(cols, f.cod.rank), list(v), len(cols))
    if z is None:
        return None
    return tuple(z[:n])


@dataclass(frozen=True)
class KernelCokernel:
    kernel: FgAbGroup
    inclusion: AbMap
    cokernel: FgAbGroup
    projection: AbMap


def kernel_cokernel(f: AbMap) -> KernelCokernel:
    if not f.is_well_defined():
        raise IllDefinedMap("map does not respect the relations of its domain")
    A, B = f.dom, f.cod
    n = A.rank
    # x ∈ ker f  ⇔  f(x) = R_B·y for some integer y
    stacked_cols = [f.image_of(j) for j in range(n)] + [tuple(-v for v in r) for r in B.relators]
    if stacked_cols and B.rank:
        sols = snf.kernel_basis(snf.from_columns(stacked_cols, B.rank), B.rank, len(stacked_cols))
    else:
        # no constraints: every integer vector works
        sols = [[int(i == j) for i in range(len(stacked_cols))] for j in range(len(stacked_cols))]
    gens = [s[:n] for s in sols]
    basis = snf.lattice_basis(gens, n)
    k = len(basis)
    B_L = snf.from_columns(basis, n)
    rels = []
    for r in A.relators:
        z = snf.solve(B_L, list(r), k)
        if z is None:  # pragma: no cover - guaranteed by well-definedness
            raise IllDefinedMap("relator of the domain not in the kernel lattice")
        rels.append(z)
    K = FgAbGroup(k, rels)
    inc = AbMap(K, A, B_L if n else ())
    Q = FgAbGroup(B.rank, list(B.relators) + [f.image_of(j) for j in range(n)])
    proj = AbMap(B, Q, snf.identity(B.rank))
    return KernelCokernel(K, inc, Q, proj)


def is_exact(f: AbMap, g: AbMap) -> bool:
    """Exactness of A --f--> B --g--> C at B."""
    if f.cod != g.dom:
        raise BoundaryMismatch("maps are not composable")
    if not g.compose(f).is_zero():
        return False
    kc = kernel_cokernel(g)
    images = [f.image_of(j) for j in range(f.dom.rank)]
    return all(in_subgroup(kc.inclusion.image_of(j), images, f.cod) for j in range(kc.kernel.rank))


def is_epi(f: AbMap) -> bool:
    return not kernel_cokernel(f).cokernel.invariants


def is_mono(f: AbMap) -> bool:
    return not kernel_cokernel(f).kernel.invariants


# ------------------------------------------------------ colimits and ⊗


def direct_sum(parts: Sequence[FgAbGroup]):
    """Block-diagonal presentation with ambient-coordinate injections."""
    n = sum(p.rank for p in parts)
    rels = []
    offsets = []
    off = 0
    for p in parts:
        offsets.append(off)
        for r in p.relators:
            rels.append([0] * off + list(r) + [0] * (n - off - p.rank))
        off += p.rank
    S = FgAbGroup(n, rels)
    injections = []
    for p, off in zip(parts, offsets):
        cols = [[int(i == off + j) for i in range(n)] for j in range(p.rank)]
        injections.append(AbMap.from_columns(p, S, cols))
    return S, injections


def direct_sum_projections(S: FgAbGroup, parts: Sequence[FgAbGroup]) -> list:
    out = []
    off = 0
    for p in parts:
        rows = [[int(j == off + i) for j in range(S.rank)] for i in range(p.rank)]
        out.append(AbMap(S, p, rows))
        off += p.rank
    return out


def copair(S: FgAbGroup, legs: Sequence[AbMap], target: FgAbGroup) -> AbMap:
    """The unique map out of a direct sum built by :func:`direct_sum` with given legs."""
    cols = []
    for leg in legs:
        if leg.cod != target:
            raise BoundaryMismatch("legs must share the target")
        cols += [leg.image_of(j) for j in range(leg.dom.rank)]
    if len(cols) != S.rank:
        raise BoundaryMismatch("legs do not cover the direct sum")
    return AbMap.from_columns(S, target, cols)


def coequalizer_ab(f: AbMap, g: AbMap):
    """Cokernel of f - g; the projection is the ambient identity."""
    if f.dom != g.dom or f.cod != g.cod:
        raise BoundaryMismatch("coequalizer needs parallel maps")
    d = f - g
    Q = FgAbGroup(f.cod.rank, list(f.cod.relators) + [d.image_of(j) for j in range(f.dom.rank)])
    return Q, AbMap(f.cod, Q, snf.identity(f.cod.rank))


def tensor_z(a: FgAbGroup, b: FgAbGroup) -> FgAbGroup:
    """a ⊗_Z b; ambient generator (i, j) sits at index i·rank(b) + j."""
    n, m = a.rank, b.rank
    rels = []
    for r in a.relators:
        for j in range(m):
            v = [0] * (n * m)
            for i in range(n):
                v[i * m + j] = r[i]
            rels.append(v)
    for s in b.relators:
        for i in range(n):
            v = [0] * (n * m)
            for j in range(m):
                v[i * m + j] = s[j]
            rels.append(v)
    return FgAbGroup(n * m, rels)


def tensor_maps(f: AbMap, g: AbMap) -> AbMap:
    """f ⊗ g as a map tensor_z(dom f, dom g) → tensor_z(cod f, cod g)."""
    dom = tensor_z(f.dom, g.dom)
    cod = tensor_z(f.cod, g.cod)
    rows = []
    for i in range(f.cod.rank):
        for k in range(g.cod.rank):
            rows.append([f.matrix[i][j] * g.matrix[k][l] for j in range(f.dom.rank) for l in range(g.dom.rank)])
    return AbMap(dom, cod, rows)


def copower_ab(s: Sequence, a: FgAbGroup):
    """|s| copies of `a`; injections listed in the order of `s`."""
    return direct_sum([a] * len(s))
