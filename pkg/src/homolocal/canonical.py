"""Canonical forms for square matrices over an exact field.

Invariant factors are computed from the characteristic matrix xI - M by
a Smith reduction over the polynomial ring.  The reduction is written
against a tiny field context so the same code serves plain rationals,
prime fields and one dimensional (or genuinely field) algebras.  Only
polynomial factorisation is delegated to sympy; everything else is done
here so the arithmetic stays inspectable.
"""

from fractions import Fraction

from .errors import NotAField, NotInvertible, SearchBudgetExceeded
from .scalars import GFp
from . import linalg
from .matrices import AlgMatrix, InvertibleWitness, invert_element, invert_matrix


class FieldContext:
    """Zero, one and inversion for the coefficient field in use."""

    def __init__(self, zero, one, inv):
        self.zero = zero
        self.one = one
        self.inv = inv


def _context_for(entry):
    if isinstance(entry, GFp):
        p = entry.p
        return FieldContext(GFp(p, 0), GFp(p, 1), lambda a: a.inverse())
    if isinstance(entry, (int, Fraction)):
        return FieldContext(Fraction(0), Fraction(1), lambda a: 1 / Fraction(a))
    # algebra element over a field algebra
    def inv(a):
        y = invert_element(a)
        if y is None:
            raise NotInvertible("element of a claimed field has no inverse")
        return y
    A = entry.algebra
    return FieldContext(A.zero(), A.unit_element(), inv)


# Polynomials are lists of field elements, low degree first, no trailing
# zeros except the zero polynomial which is [].

def _ptrim(p, zero):
    while p and p[-1] == zero:
        p.pop()
    return p


def _padd(p, q, zero):
    n = max(len(p), len(q))
    out = [(p[i] if i < len(p) else zero) + (q[i] if i < len(q) else zero)
           for i in range(n)]
    return _ptrim(out, zero)


def _pneg(p):
    return [-a for a in p]


def _pmul(p, q, zero):
    if not p or not q:
        return []
    out = [zero] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == zero:
            continue
        for j, b in enumerate(q):
            if b == zero:
                continue
            out[i + j] = out[i + j] + a * b
    return _ptrim(out, zero)


def _pdivmod(p, q, ctx):
    """Division with remainder; q must be nonzero."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    quo = [ctx.zero] * max(0, len(p) - len(q) + 1)
    qlead_inv = ctx.inv(q[-1])
    while len(rem) >= len(q):
        c = rem[-1] * qlead_inv
        d = len(rem) - len(q)
        quo[d] = quo[d] + c
        for i, b in enumerate(q):
            rem[d + i] = rem[d + i] - c * b
        _ptrim(rem, ctx.zero)
        if not rem:
            break
    return _ptrim(quo, ctx.zero), rem


def _pmonic(p, ctx):
    if not p:
        return p
    c = ctx.inv(p[-1])
    return [a * c for a in p]


def poly_string(p, var="x"):
    """Readable form of a coefficient list, for reports.

    >>> poly_string([Fraction(-1), Fraction(0), Fraction(1)])
    'x^2 - 1'
    """
    if not p:
        return "0"
    parts = []
    for d in range(len(p) - 1, -1, -1):
        c = p[d]
        if c == 0:
            continue
        if d == 0:
            term = str(abs(c) if isinstance(c, (int, Fraction)) else c)
        else:
            mag = abs(c) if isinstance(c, (int, Fraction)) else c
            coef = "" if mag == 1 else str(mag)
            term = "%s%s" % (coef, var if d == 1 else "%s^%d" % (var, d))
        if not parts:
            sign = "-" if isinstance(c, (int, Fraction)) and c < 0 else ""
            parts.append(sign + term)
        else:
            sign = " - " if isinstance(c, (int, Fraction)) and c < 0 else " + "
            parts.append(sign + term)
    return "".join(parts)


def _entry_rows(u):
    """Normalise the accepted inputs to (rows, context).

    Accepts a nested list of scalars, or an AlgMatrix over an algebra
    that is a field."""
    if isinstance(u, AlgMatrix):
        if not is_field_algebra(u.algebra):
            raise NotAField("matrix entries live in a non field algebra")
        n = u.size
        if u.algebra.dim == 1:
            unit = u.algebra.unit[0]
            rows = [[x.coeffs.get(0, Fraction(0)) / unit for x in row]
                    for row in u.entries]
            return rows, _context_for(Fraction(1))
        return [list(row) for row in u.entries], _context_for(u.entries[0][0])
    rows = [[Fraction(x) if isinstance(x, int) else x for x in row] for row in u]
    return rows, _context_for(rows[0][0])


def invariant_factors(u):
    """Monic nonunit invariant factors of a square matrix, in
    divisibility order.  Two matrices over the same field are conjugate
    exactly when these lists agree.

    >>> invariant_factors([[1, 0], [0, 1]])
    [[Fraction(-1, 1), Fraction(1, 1)], [Fraction(-1, 1), Fraction(1, 1)]]
    """
    rows, ctx = _entry_rows(u)
    n = len(rows)
    for row in rows:
        if len(row) != n:
            raise ValueError("matrix must be square")
    # characteristic matrix xI - M as polynomial entries
    P = [[[-rows[i][j]] if rows[i][j] != ctx.zero else [] for j in range(n)]
         for i in range(n)]
    for i in range(n):
        P[i][i] = _ptrim([-rows[i][i], ctx.one], ctx.zero)

    def degree(p):
        return len(p) - 1 if p else -1

    for k in range(n):
        while True:
            # locate a nonzero entry of least degree in the working block
            best = None
            for i in range(k, n):
                for j in range(k, n):
                    d = degree(P[i][j])
                    if d >= 0 and (best is None or d < best[0]):
                        best = (d, i, j)
            if best is None:
                break
            _, bi, bj = best
            if bi != k:
                P[k], P[bi] = P[bi], P[k]
            if bj != k:
                for row in P:
                    row[k], row[bj] = row[bj], row[k]
            pivot = P[k][k]
            dirty = False
            for i in range(k + 1, n):
                if P[i][k]:
                    q, r = _pdivmod(P[i][k], pivot, ctx)
                    if q:
                        for j in range(k, n):
                            P[i][j] = _padd(P[i][j], _pneg(_pmul(q, P[k][j], ctx.zero)),
                                            ctx.zero)
                    if P[i][k]:
                        dirty = True
            for j in range(k + 1, n):
                if P[k][j]:
                    q, r = _pdivmod(P[k][j], pivot, ctx)
                    if q:
                        for i in range(k, n):
                            P[i][j] = _padd(P[i][j], _pneg(_pmul(q, P[i][k], ctx.zero)),
                                            ctx.zero)
                    if P[k][j]:
                        dirty = True
            if dirty:
                continue
            # pivot must divide the rest of the block
            offender = None
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    if P[i][j]:
                        _, r = _pdivmod(P[i][j], pivot, ctx)
                        if r:
                            offender = i
                            break
                if offender is not None:
                    break
            if offender is None:
                break
            for j in range(k, n):
                P[k][j] = _padd(P[k][j], P[offender][j], ctx.zero)
    factors = []
    for k in range(n):
        p = _pmonic(P[k][k], ctx)
        if len(p) > 1:
            factors.append(p)
    return factors


def rational_canonical_form(u):
    """Invariant factor list of a square matrix over a field; raises
    NotAField when given an AlgMatrix over a non field algebra."""
    return invariant_factors(u)


def conjugate_over_field(u, v):
    """Whether two square matrices over the same field are conjugate."""
    return invariant_factors(u) == invariant_factors(v)


def minimal_polynomial(x):
    """Monic minimal polynomial of an algebra element, as Fractions."""
    A = x.algebra
    dim = A.dim
    power = dict(A.unit)
    coords = []
    span = linalg.SpanChecker()
    k = 0
    while True:
        vec = [power.get(i, Fraction(0)) for i in range(dim)]
        coords.append(vec)
        if not span.add({i: v for i, v in enumerate(vec) if v}):
            break
        power = A.mul_vec(power, x.coeffs)
        k += 1
    # coords[k] depends on coords[0..k-1]; solve for the combination
    mat = [[coords[j][i] for j in range(k)] for i in range(dim)]
    rhs = [coords[k][i] for i in range(dim)]
    sol = linalg.solve_dense(mat, rhs)
    coeffs = [-c for c in sol] + [Fraction(1)]
    return coeffs


def _trace_of_left_mul(A, vec):
    t = Fraction(0)
    for k in range(A.dim):
        prod = A.mul_vec(vec, {k: Fraction(1)})
        t += prod.get(k, Fraction(0))
    return t


def trace_form_radical_dim(A):
    """Dimension of the radical of the trace form tr(L_a L_b); zero for
    semisimple algebras in characteristic zero."""
    dim = A.dim
    gram = []
    for i in range(dim):
        row = []
        for j in range(dim):
            prod = A.mul_vec({i: Fraction(1)}, {j: Fraction(1)})
            row.append(_trace_of_left_mul(A, prod))
        gram.append(row)
    ns = linalg.nullspace_dense(gram)
    return len(ns)


_FIELD_CACHE = {}


def is_field_algebra(A, tries=40, rng=None):
    """Whether the underlying algebra is a field.

    Commutativity and a zero trace form radical are necessary; the final
    step hunts for a primitive element and factors its minimal
    polynomial.  In characteristic zero a commutative semisimple algebra
    always has primitive elements, so the budgeted search failing is
    reported as SearchBudgetExceeded rather than a verdict."""
    key = id(A)
    if key in _FIELD_CACHE:
        return _FIELD_CACHE[key]
    out = _is_field_algebra(A, tries, rng)
    _FIELD_CACHE[key] = out
    return out


def _is_field_algebra(A, tries, rng):
    import random
    if A.dim == 1:
        return True
    if not A.is_commutative():
        return False
    if trace_form_radical_dim(A) > 0:
        return False
    rng = rng or random.Random(20290)
    import sympy
    x = sympy.Symbol("x")
    for attempt in range(tries):
        width = 2 + attempt // 8
        coeffs = {i: Fraction(rng.randint(-width, width)) for i in range(A.dim)}
        elem = A.element({i: c for i, c in coeffs.items() if c})
        m = minimal_polynomial(elem)
        if len(m) - 1 != A.dim:
            continue
        poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator)
                           for c in reversed(m)], x, domain="QQ")
        _, factors = poly.factor_list()
        return len(factors) == 1 and factors[0][1] == 1
    raise SearchBudgetExceeded("no primitive element found in %d tries" % tries)


def conjugacy_witness(u, v, budget=400):
    """Search for an invertible g with g u = v g over the algebra.

    The intertwiner space is found exactly by linear algebra; invertible
    members are then hunted by a bounded enumeration of small rational
    combinations.  Returns an InvertibleWitness, or None when the
    intertwiner space is zero (so no conjugacy can exist).  Raises
    SearchBudgetExceeded when the enumeration runs out before finding an
    invertible combination."""
    um = u.matrix if hasattr(u, "matrix") else u
    vm = v.matrix if hasattr(v, "matrix") else v
    A = um.algebra
    n = um.size
    if vm.size != n:
        raise ValueError("sizes differ")
    dim = A.dim
    nv = n * n * dim
    # coords: g[i][j] = sum_k x[(i*n+j)*dim+k] e_k; equations from g u - v g = 0
    cols = []
    for i in range(n):
        for j in range(n):
            for k in range(dim):
                gm = AlgMatrix.zeros(A, n)
                gm.entries[i][j] = A.basis_element(k)
                resid = gm * um - vm * gm
                col = []
                for a in range(n):
                    for b in range(n):
                        cc = resid.entries[a][b].coeffs
                        col.extend(cc.get(t, Fraction(0)) for t in range(dim))
                cols.append(col)
    mat = [[cols[c][r] for c in range(nv)] for r in range(nv)]
    basis = linalg.nullspace_dense(mat)
    if not basis:
        return None

    def as_matrix(vec):
        gm = AlgMatrix.zeros(A, n)
        for i in range(n):
            for j in range(n):
                coeffs = {}
                for k in range(dim):
                    val = vec[(i * n + j) * dim + k]
                    if val:
                        coeffs[k] = val
                gm.entries[i][j] = A.element(coeffs)
        return gm

    tried = 0
    import itertools
    single = [(c, idx) for idx in range(len(basis)) for c in (1, -1, 2)]
    candidates = []
    for c, idx in single:
        candidates.append([(c, idx)])
    for i1, i2 in itertools.combinations(range(len(basis)), 2):
        for c1 in (1, -1):
            for c2 in (1, -1, 2):
                candidates.append([(c1, i1), (c2, i2)])
    for combo in candidates:
        if tried >= budget:
            break
        tried += 1
        vec = [Fraction(0)] * nv
        for c, idx in combo:
            for t in range(nv):
                vec[t] += c * basis[idx][t]
        gm = as_matrix(vec)
        ginv = invert_matrix(gm)
        if ginv is not None:
            return InvertibleWitness(gm, ginv, check=False)
    raise SearchBudgetExceeded("no invertible intertwiner within %d candidates"
                               % budget)
