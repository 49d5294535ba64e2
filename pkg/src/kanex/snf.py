"""Exact integer matrix algebra: Smith normal form and the solvers built on it.

Matrices are lists of rows of Python ints (arbitrary precision).  A matrix
with zero rows or zero columns is allowed; its shape is then carried by the
caller.
"""

from __future__ import annotations

from typing import Sequence

Matrix = list  # list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def matmul(a: Matrix, b: Matrix, inner: int | None = None, cols: int | None = None) -> Matrix:
    """a·b; `inner` and `cols` give dimensions that empty matrices cannot carry."""
    rows = len(a)
    if cols is None:
        cols = len(b[0]) if b else 0
    if inner is None:
        inner = len(b)
    if b and inner != len(b):
        raise ValueError("inner dimensions disagree")
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for k in range(inner):
            x = ai[k]
            if x:
                bk = b[k]
                for j in range(cols):
                    oi[j] += x * bk[j]
    return out


def matvec(a: Matrix, v: Sequence[int]) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose(a: Matrix, cols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*a)]


def columns(a: Matrix, ncols: int | None = None) -> list:
    if ncols is None:
        ncols = len(a[0]) if a else 0
    return [[row[j] for row in a] for j in range(ncols)]


def from_columns(cols: Sequence[Sequence[int]], nrows: int) -> Matrix:
    return [[c[i] for c in cols] for i in range(nrows)]


def _smith(m: Matrix, nrows: int, ncols: int):
    """Return (U, D, V, U⁻¹) with U·m·V = D."""
    A = [list(map(int, row)) for row in m]
    U = identity(nrows)
    Ui = identity(nrows)
    V = identity(ncols)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        for row in Ui:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q·row_src
        if q == 0:
            return
        A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]
        for row in Ui:
            row[src] -= q * row[dst]

    def add_col(dst, src, q):
        # col_dst += q·col_src
        if q == 0:
            return
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    t = 0
    while t < min(nrows, ncols):
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                x = A[i][j]
                if x and (best is None or abs(x) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        while True:
            i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            p = A[t][t]
            for i in range(t + 1, nrows):
                add_row(i, t, -(A[i][t] // p))
            for j in range(t + 1, ncols):
                add_col(j, t, -(A[t][j] // p))
            rest = [(i, t) for i in range(t + 1, nrows) if A[i][t]]
            rest += [(t, j) for j in range(t + 1, ncols) if A[t][j]]
            if rest:
                best = min(rest, key=lambda ij: abs(A[ij[0]][ij[1]]))
                continue
            bad = next(
                (i for i in range(t + 1, nrows) for j in range(t + 1, ncols) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
            best = min(
                ((t, j) for j in range(t, ncols) if A[t][j]),
                key=lambda ij: abs(A[ij[0]][ij[1]]),
            )
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
            for row in Ui:
                row[t] = -row[t]
        t += 1
    return U, A, V, Ui


def smith_normal_form(m: Matrix, nrows: int | None = None, ncols: int | None = None):
    """Return (u, d, v) with u·m·v = d, u and v unimodular.

    d is diagonal with non-negative entries forming a divisibility chain
    d[0][0] | d[1][1] | …; zeros come last.
    """
    nrows = len(m) if nrows is None else nrows
    ncols = (len(m[0]) if m else 0) if ncols is None else ncols
    U, D, V, _ = _smith(m, nrows, ncols)
    return U, D, V


def smith_full(m: Matrix, nrows: int, ncols: int):
    """Like :func:`smith_normal_form` but also returns u⁻¹ and the diagonal."""
    U, D, V, Ui = _smith(m, nrows, ncols)
    diag = [D[i][i] if i < ncols else 0 for i in range(nrows)]
    return U, diag, V, Ui


def rank(m: Matrix, nrows: int, ncols: int) -> int:
    _, diag, _, _ = smith_full(m, nrows, ncols)
    return sum(1 for d in diag if d)


def solve(a: Matrix, b: Sequence[int], ncols: int) -> list | None:
    """One integer solution x of a·x = b, or None if there is none."""
    nrows = len(b)
    U, diag, V, _ = smith_full(a, nrows, ncols)
    ub = matvec(U, b)
    y = [0] * ncols
    for i in range(nrows):
        d = diag[i] if i < ncols else 0
        if d == 0:
            if ub[i]:
                return None
        else:
            q, r = divmod(ub[i], d)
            if r:
                return None
            y[i] = q
    return matvec(V, y) if ncols else []


def kernel_basis(a: Matrix, nrows: int, ncols: int) -> list:
    """Basis (as vectors) of the integer kernel {x : a·x = 0}."""
    _, diag, V, _ = smith_full(a, nrows, ncols)
    r = sum(1 for d in diag[: min(nrows, ncols)] if d)
    return [[V[i][j] for i in range(ncols)] for j in range(r, ncols)]


def lattice_basis(gens: Sequence[Sequence[int]], dim: int) -> list:
    """Basis of the sublattice of Z^dim spanned by `gens`."""
    if not gens:
        return []
    G = from_columns(gens, dim)
    _, diag, _, Ui = smith_full(G, dim, len(gens))
    return [[Ui[i][k] * diag[k] for i in range(dim)] for k in range(min(dim, len(gens))) if diag[k]]


def determinant(m: Matrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    A = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]
