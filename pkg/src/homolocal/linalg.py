"""Exact linear algebra over the rationals (and any exact field).

Two layers.  The sparse layer speaks dicts {column: scalar} and drives
the integer echelon kernel: ranks and span membership for the large
matrices that homology produces.  The dense layer is a plain Gaussian
elimination over an arbitrary exact field (Fraction or GFp), used for
the small solve/nullspace/inverse systems of the algebra machinery.

Per-row scaling by the lcm of denominators turns a rational row into an
integer row with the same span, so the fraction-free kernel applies.
"""

import os
from fractions import Fraction
from math import gcd

from . import _kernels
from .errors import BudgetExceeded

DEFAULT_BUDGET = 60_000_000


def budget():
    raw = os.environ.get("HOMOLOCAL_BUDGET", "")
    try:
        return int(raw)
    except ValueError:
        return DEFAULT_BUDGET


def check_budget(nrows, ncols, what="matrix"):
    cap = budget()
    if nrows * ncols > cap:
        raise BudgetExceeded(
            "%s of size %d x %d exceeds budget %d (set HOMOLOCAL_BUDGET to raise)"
            % (what, nrows, ncols, cap)
        )


def integerize(row):
    """Scale a {col: Fraction} row to a primitive {col: int} row."""
    if not row:
        return {}
    lcm = 1
    for v in row.values():
        d = Fraction(v).denominator
        lcm = lcm // gcd(lcm, d) * d
    out = {}
    for c, v in row.items():
        f = Fraction(v) * lcm
        if f:
            out[c] = f.numerator
    return out


class SpanChecker:
    """Incremental row span over Q.  add() reports whether the vector
    enlarged the span; contains() tests membership without inserting."""

    def __init__(self, rows=()):
        self.pivots = {}
        for r in rows:
            self.add(r)

    @property
    def rank(self):
        return len(self.pivots)

    def add(self, row):
        return _kernels.echelon_insert(self.pivots, integerize(row)) is not None

    def contains(self, row):
        return not _kernels.echelon_reduce(self.pivots, integerize(row))


def rank_of(rows):
    """Exact rank of an iterable of {col: scalar} rows."""
    return _kernels.echelon_rank([integerize(r) for r in rows])


def rref_dense(mat):
    """Reduced row echelon form in place; returns pivot column list.
    Entries may be any exact field scalars."""
    if not mat:
        return []
    nrows = len(mat)
    ncols = len(mat[0])
    pivcols = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if mat[i][c]:
                pr = i
                break
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = mat[r][c]
        mat[r] = [x / inv for x in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivcols.append(c)
        r += 1
        if r == nrows:
            break
    return pivcols


def solve_dense(a, b):
    """One solution x of A x = b, or None.  a: list of rows, b: list."""
    if not a:
        return [] if not any(b) else None
    ncols = len(a[0])
    aug = [list(row) + [bv] for row, bv in zip(a, b)]
    pivcols = rref_dense(aug)
    if ncols in pivcols:
        return None
    x = [a[0][0] * 0 for _ in range(ncols)]
    for r, c in enumerate(pivcols):
        x[c] = aug[r][ncols]
    return x


def nullspace_dense(a):
    """Basis of the right kernel of A (list of rows); returns list of
    vectors, deterministic order (free columns ascending)."""
    if not a:
        return []
    ncols = len(a[0])
    mat = [list(row) for row in a]
    pivcols = rref_dense(mat)
    pivset = set(pivcols)
    one = None
    for row in mat:
        for x in row:
            if x:
                one = x / x
                break
        if one is not None:
            break
    if one is None:
        one = Fraction(1)
    zero = one - one
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        vec = [zero] * ncols
        vec[free] = one
        for r, c in enumerate(pivcols):
            vec[c] = -mat[r][free]
        basis.append(vec)
    return basis


def invert_dense(a):
    """Inverse of a square matrix over an exact field, or None."""
    n = len(a)
    if n == 0:
        return []
    aug = [list(row) + [row[0] * 0] * n for row in a]
    one = None
    for row in a:
        for x in row:
            if x:
                one = x / x
                break
        if one is not None:
            break
    if one is None:
        return None
    for i in range(n):
        aug[i][n + i] = one
    pivcols = rref_dense(aug)
    if pivcols != list(range(n)):
        return None
    return [row[n:] for row in aug]

def smith_with_transform(rows, ncols):
    """Smith reduction of an integer matrix given as a list of length
    ncols rows.  Returns (diag, V) with diag the positive diagonal
    entries in divisibility order and V a square unimodular matrix of
    column operations: U A V is diagonal for some unimodular U that is
    not tracked.  Row vectors x of Z^ncols push forward as x V; kernel
    vectors of the map x -> A x appear as the columns of V past the
    diagonal."""
    A = [list(r) for r in rows]
    m = len(A)
    n = ncols
    for r in A:
        if len(r) != n:
            raise ValueError("row length disagrees with ncols")
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def addmul_col(dst, src, c):
        for row in A:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    def negate_col(i):
        for row in A:
            row[i] = -row[i]
        for row in V:
            row[i] = -row[i]

    diag = []
    k = 0
    while k < m and k < n:
        while True:
            best = None
            for i in range(k, m):
                for j in range(k, n):
                    v = A[i][j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
            if best is None:
                break
            _, bi, bj = best
            if bi != k:
                A[k], A[bi] = A[bi], A[k]
            if bj != k:
                swap_cols(k, bj)
            piv = A[k][k]
            dirty = False
            for i in range(k + 1, m):
                if A[i][k]:
                    q = A[i][k] // piv
                    if q:
                        for j in range(k, n):
                            A[i][j] -= q * A[k][j]
                    if A[i][k]:
                        dirty = True
            for j in range(k + 1, n):
                if A[k][j]:
                    q = A[k][j] // piv
                    if q:
                        addmul_col(j, k, -q)
                    if A[k][j]:
                        dirty = True
            if dirty:
                continue
            offender = None
            for i in range(k + 1, m):
                for j in range(k + 1, n):
                    if A[i][j] % piv:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            for j in range(k, n):
                A[k][j] += A[offender][j]
        if k >= m or k >= n or A[k][k] == 0:
            break
        if A[k][k] < 0:
            negate_col(k)
        diag.append(A[k][k])
        k += 1
    return diag, V
