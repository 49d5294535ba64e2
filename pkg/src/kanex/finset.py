"""Canonical finite sets {0, …, n-1} and the functions between them."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _product
from typing import Sequence

from .errors import BoundaryMismatch, IllDefinedMap


@dataclass(frozen=True)
class FinSetObj:
    size: int

    def __post_init__(self):
        if self.size < 0:
            raise ValueError("set size must be non-negative")

    def __repr__(self):
        return f"FinSetObj({self.size})"


@dataclass(frozen=True)
class FinSetMap:
    dom: FinSetObj
    cod: FinSetObj
    table: tuple

    def __post_init__(self):
        t = tuple(int(v) for v in self.table)
        object.__setattr__(self, "table", t)
        if len(t) != self.dom.size:
            raise BoundaryMismatch(f"table has {len(t)} entries for a domain of size {self.dom.size}")
        if any(v < 0 or v >= self.cod.size for v in t):
            raise BoundaryMismatch(f"table {list(t)} leaves the codomain of size {self.cod.size}")

    def __call__(self, x: int) -> int:
        return self.table[x]

    def compose(self, f: "FinSetMap") -> "FinSetMap":
        """self∘f."""
        if f.cod != self.dom:
            raise BoundaryMismatch("cannot compose: codomain and domain differ")
        return FinSetMap(f.dom, self.cod, tuple(self.table[v] for v in f.table))

    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def is_surjective(self) -> bool:
        return len(set(self.table)) == self.cod.size

    def is_bijective(self) -> bool:
        return self.dom.size == self.cod.size and self.is_injective()

    def inverse(self) -> "FinSetMap":
        if not self.is_bijective():
            raise IllDefinedMap("map is not a bijection")
        inv = [0] * self.dom.size
        for i, v in enumerate(self.table):
            inv[v] = i
        return FinSetMap(self.cod, self.dom, inv)


def fs(n: int) -> FinSetObj:
    return FinSetObj(n)


def identity(s: FinSetObj) -> FinSetMap:
    return FinSetMap(s, s, range(s.size))


def compose(g: FinSetMap, f: FinSetMap) -> FinSetMap:
    return g.compose(f)


def all_maps(dom: FinSetObj, cod: FinSetObj):
    """Every function dom → cod, in lexicographic order of tables."""
    for t in _product(range(cod.size), repeat=dom.size):
        yield FinSetMap(dom, cod, t)


def coproduct(parts: Sequence[FinSetObj]):
    """Disjoint union; part k occupies the block starting at the sum of earlier sizes."""
    total = sum(p.size for p in parts)
    S = FinSetObj(total)
    out = []
    off = 0
    for p in parts:
        out.append(FinSetMap(p, S, range(off, off + p.size)))
        off += p.size
    return S, out


def copair(S: FinSetObj, legs: Sequence[FinSetMap], target: FinSetObj) -> FinSetMap:
    """The map out of a coproduct built by :func:`coproduct` with the given legs."""
    table = []
    for leg in legs:
        if leg.cod != target:
            raise BoundaryMismatch("legs must share the target")
        table.extend(leg.table)
    if len(table) != S.size:
        raise BoundaryMismatch("legs do not cover the coproduct")
    return FinSetMap(S, target, table)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # the smaller element stays the root
            lo, hi = min(ra, rb), max(ra, rb)
            self.parent[hi] = lo


def coequalizer(f: FinSetMap, g: FinSetMap):
    """Quotient of the codomain by the equivalence generated by f(x) ~ g(x).

    Classes are numbered by their smallest member.
    """
    if f.dom != g.dom or f.cod != g.cod:
        raise BoundaryMismatch("coequalizer needs parallel maps")
    n = f.cod.size
    uf = _UnionFind(n)
    for a, b in zip(f.table, g.table):
        uf.union(a, b)
    index = {}
    table = []
    for x in range(n):
        r = uf.find(x)
        if r not in index:
            index[r] = len(index)
        table.append(index[r])
    Q = FinSetObj(len(index))
    return Q, FinSetMap(f.cod, Q, table)


def factor_through(proj: FinSetMap, h: FinSetMap) -> FinSetMap:
    """The unique u with u∘proj = h, for a surjective proj."""
    if proj.dom != h.dom:
        raise BoundaryMismatch("maps must share a domain")
    values = [None] * proj.cod.size
    for x, q in enumerate(proj.table):
        v = h.table[x]
        if values[q] is None:
            values[q] = v
        elif values[q] != v:
            raise IllDefinedMap(f"h is not constant on the class of {x}")
    if any(v is None for v in values):
        raise IllDefinedMap("projection is not surjective")
    return FinSetMap(proj.cod, h.cod, values)


def copower(s: Sequence, e: FinSetObj):
    """|s| copies of e; the injection for s[k] has offset k·|e|."""
    return coproduct([e] * len(s))


def copower_on_index(t: Sequence[int], n_target: int, e: FinSetObj) -> FinSetMap:
    """t⊙E for an index map t: {0..|S|-1} → {0..n_target-1}."""
    size = e.size
    table = [t[k] * size + i for k in range(len(t)) for i in range(size)]
    return FinSetMap(FinSetObj(len(t) * size), FinSetObj(n_target * size), table)


def copower_on_morphism(n_index: int, f: FinSetMap) -> FinSetMap:
    """S⊙f for |S| = n_index."""
    m = f.cod.size
    table = [k * m + v for k in range(n_index) for v in f.table]
    return FinSetMap(FinSetObj(n_index * f.dom.size), FinSetObj(n_index * m), table)


def copower_action(kind: str, **context) -> FinSetMap:
    """Dispatch ``on_index`` (t, n_target, e) or ``on_morphism`` (n_index, f)."""
    if kind == "on_index":
        return copower_on_index(context["t"], context["n_target"], context["e"])
    if kind == "on_morphism":
        return copower_on_morphism(context["n_index"], context["f"])
    raise ValueError(f"unknown copower action {kind!r}")
