"""Matrices over a localised algebra.

Entries are AlgebraElement values and all arithmetic is exact.  Invertible
matrices always travel together with an explicit inverse (InvertibleWitness);
nothing in this module ever tests invertibility by rank over a field, the
witness is the certificate.  A module level counter records how many algebra
element multiplications have been performed, so callers can report the work
a construction consumed.
"""

from fractions import Fraction

from .errors import NotIdempotent, NotInvertible, SizeMismatch
from . import linalg

_mul_count = 0


def multiplications():
    """Number of algebra element products performed since the last reset."""
    return _mul_count


def reset_multiplications():
    global _mul_count
    _mul_count = 0


def _bump(k):
    global _mul_count
    _mul_count += k


class AlgMatrix:
    """Dense rows x cols matrix of algebra elements."""

    __slots__ = ("algebra", "nrows", "ncols", "entries")

    def __init__(self, algebra, entries):
        self.algebra = algebra
        self.entries = [list(row) for row in entries]
        self.nrows = len(self.entries)
        self.ncols = len(self.entries[0]) if self.entries else 0
        for row in self.entries:
            if len(row) != self.ncols:
                raise SizeMismatch("ragged rows")

    @classmethod
    def zeros(cls, algebra, nrows, ncols=None):
        if ncols is None:
            ncols = nrows
        z = algebra.zero()
        return cls(algebra, [[z] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, algebra, n):
        z = algebra.zero()
        one = algebra.unit_element()
        return cls(algebra, [[one if i == j else z for j in range(n)]
                             for i in range(n)])

    @classmethod
    def from_scalar_rows(cls, algebra, rows):
        """Build from nested scalars; each scalar multiplies the unit."""
        return cls(algebra, [[algebra.scalar(Fraction(v)) for v in row]
                             for row in rows])

    @property
    def size(self):
        if self.nrows != self.ncols:
            raise SizeMismatch("matrix is not square")
        return self.nrows

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def level(self):
        lv = float("inf")
        for row in self.entries:
            for x in row:
                l = x.level()
                if l < lv:
                    lv = l
        return lv

    def __add__(self, other):
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise SizeMismatch("add: %dx%d vs %dx%d"
                               % (self.nrows, self.ncols, other.nrows, other.ncols))
        return AlgMatrix(self.algebra,
                         [[a + b for a, b in zip(r1, r2)]
                          for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other):
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise SizeMismatch("sub: %dx%d vs %dx%d"
                               % (self.nrows, self.ncols, other.nrows, other.ncols))
        return AlgMatrix(self.algebra,
                         [[a - b for a, b in zip(r1, r2)]
                          for r1, r2 in zip(self.entries, other.entries)])

    def __neg__(self):
        return AlgMatrix(self.algebra, [[-a for a in row] for row in self.entries])

    def scale(self, c):
        return AlgMatrix(self.algebra,
                         [[a.scale(c) for a in row] for row in self.entries])

    def __mul__(self, other):
        if not isinstance(other, AlgMatrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise SizeMismatch("mul: %dx%d times %dx%d"
                               % (self.nrows, self.ncols, other.nrows, other.ncols))
        out = []
        performed = 0
        zero = self.algebra.zero()
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = zero
                for k in range(self.ncols):
                    a = self.entries[i][k]
                    b = other.entries[k][j]
                    if a.is_zero() or b.is_zero():
                        continue
                    acc = acc + a * b
                    performed += 1
                row.append(acc)
            out.append(row)
        _bump(performed)
        return AlgMatrix(self.algebra, out)

    def __eq__(self, other):
        return (isinstance(other, AlgMatrix)
                and self.nrows == other.nrows and self.ncols == other.ncols
                and all(a == b for r1, r2 in zip(self.entries, other.entries)
                        for a, b in zip(r1, r2)))

    def __ne__(self, other):
        return not self.__eq__(other)

    def is_zero(self):
        return all(a.is_zero() for row in self.entries for a in row)

    def is_idempotent(self):
        return self * self == self

    def transpose(self):
        return AlgMatrix(self.algebra,
                         [[self.entries[i][j] for i in range(self.nrows)]
                          for j in range(self.ncols)])

    def direct_sum(self, other):
        z = self.algebra.zero()
        top = [row + [z] * other.ncols for row in self.entries]
        bot = [[z] * self.ncols + list(row) for row in other.entries]
        return AlgMatrix(self.algebra, top + bot)

    def to_doc(self):
        from .scalars import format_scalar
        return [[{str(i): format_scalar(v) for i, v in sorted(x.coeffs.items())}
                 for x in row] for row in self.entries]

    @classmethod
    def from_doc(cls, algebra, doc):
        return cls(algebra, [[algebra.element(vec) for vec in row] for row in doc])

    def __repr__(self):
        return "AlgMatrix(%dx%d over %s)" % (self.nrows, self.ncols,
                                             self.algebra.name or "algebra")


def block(rows):
    """Assemble a matrix from a grid of conformal blocks."""
    out = None
    for brow in rows:
        acc = None
        for m in brow:
            if acc is None:
                acc = m
            else:
                if m.nrows != acc.nrows:
                    raise SizeMismatch("block row heights differ")
                acc = AlgMatrix(acc.algebra,
                                [r1 + r2 for r1, r2 in zip(acc.entries, m.entries)])
        if out is None:
            out = acc
        else:
            if acc.ncols != out.ncols:
                raise SizeMismatch("block column widths differ")
            out = AlgMatrix(out.algebra, out.entries + acc.entries)
    return out


def regular_representation(x):
    """Left multiplication by x as a dim x dim matrix of scalars."""
    A = x.algebra
    dim = A.dim
    cols = []
    for j in range(dim):
        prod = A.mul_vec(x.coeffs, {j: Fraction(1)})
        cols.append(prod)
    _bump(dim)
    return [[cols[j].get(i, Fraction(0)) for j in range(dim)] for i in range(dim)]


def invert_element(x):
    """Two sided inverse of an algebra element, or None."""
    A = x.algebra
    rep = regular_representation(x)
    rhs = [A.unit.get(i, Fraction(0)) for i in range(A.dim)]
    sol = linalg.solve_dense(rep, rhs)
    if sol is None:
        return None
    y = A.element({i: v for i, v in enumerate(sol) if v})
    if not (x * y == A.unit_element() and y * x == A.unit_element()):
        return None
    return y


def invert_matrix(m):
    """Exact inverse of a square matrix over the algebra, or None.

    Works through the regular representation: the matrix becomes a
    (n*dim) square matrix of scalars, which is inverted exactly; the
    blocks of the scalar inverse are read back as algebra elements."""
    n = m.size
    A = m.algebra
    dim = A.dim
    big = [[Fraction(0)] * (n * dim) for _ in range(n * dim)]
    for i in range(n):
        for j in range(n):
            x = m.entries[i][j]
            if x.is_zero():
                continue
            rep = regular_representation(x)
            for k in range(dim):
                brow = big[i * dim + k]
                rrow = rep[k]
                for l in range(dim):
                    if rrow[l]:
                        brow[j * dim + l] = rrow[l]
    inv = linalg.invert_dense(big)
    if inv is None:
        return None
    unit = [A.unit.get(l, Fraction(0)) for l in range(dim)]
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            coeffs = {}
            for k in range(dim):
                v = sum(inv[i * dim + k][j * dim + l] * unit[l]
                        for l in range(dim))
                if v:
                    coeffs[k] = v
            row.append(A.element(coeffs))
        out.append(row)
    y = AlgMatrix(A, out)
    ident = AlgMatrix.identity(A, n)
    if not (m * y == ident and y * m == ident):
        return None
    return y


class InvertibleWitness:
    """A square matrix together with its exact two sided inverse."""

    __slots__ = ("matrix", "inverse")

    def __init__(self, matrix, inverse, check=True):
        if matrix.nrows != matrix.ncols or inverse.nrows != inverse.ncols:
            raise SizeMismatch("witness parts must be square")
        if matrix.nrows != inverse.nrows:
            raise SizeMismatch("matrix and inverse sizes differ")
        if check:
            ident = AlgMatrix.identity(matrix.algebra, matrix.nrows)
            if not (matrix * inverse == ident and inverse * matrix == ident):
                raise NotInvertible("claimed inverse fails")
        self.matrix = matrix
        self.inverse = inverse

    @classmethod
    def from_matrix(cls, m):
        inv = invert_matrix(m)
        if inv is None:
            raise NotInvertible("matrix has no inverse over the algebra")
        return cls(m, inv, check=False)

    @classmethod
    def identity(cls, algebra, n):
        ident = AlgMatrix.identity(algebra, n)
        return cls(ident, ident, check=False)

    @property
    def size(self):
        return self.matrix.nrows

    @property
    def algebra(self):
        return self.matrix.algebra

    def level(self):
        return min(self.matrix.level(), self.inverse.level())

    def inv(self):
        return InvertibleWitness(self.inverse, self.matrix, check=False)

    def __mul__(self, other):
        if not isinstance(other, InvertibleWitness):
            return NotImplemented
        return InvertibleWitness(self.matrix * other.matrix,
                                 other.inverse * self.inverse, check=False)

    def direct_sum(self, other):
        return InvertibleWitness(self.matrix.direct_sum(other.matrix),
                                 self.inverse.direct_sum(other.inverse),
                                 check=False)

    def __eq__(self, other):
        return isinstance(other, InvertibleWitness) and self.matrix == other.matrix

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return "InvertibleWitness(size=%d)" % self.size


class Idempotent:
    """A square matrix p with p*p = p, checked on construction."""

    __slots__ = ("matrix",)

    def __init__(self, matrix, check=True):
        if matrix.nrows != matrix.ncols:
            raise SizeMismatch("idempotent must be square")
        if check and not matrix.is_idempotent():
            raise NotIdempotent("matrix square differs from the matrix")
        self.matrix = matrix

    @property
    def size(self):
        return self.matrix.nrows

    @property
    def algebra(self):
        return self.matrix.algebra

    def level(self):
        return self.matrix.level()

    def direct_sum(self, other):
        return Idempotent(self.matrix.direct_sum(other.matrix), check=False)

    def __eq__(self, other):
        return isinstance(other, Idempotent) and self.matrix == other.matrix

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return "Idempotent(size=%d)" % self.size


def elementary(i, j, a, n):
    """Elementary matrix E_ij(a) of size n with 1 based indices i != j."""
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError("elementary indices out of range")
    if i == j:
        raise IndexError("elementary matrix needs i != j")
    A = a.algebra
    m = AlgMatrix.identity(A, n)
    m.entries[i - 1][j - 1] = a
    inv = AlgMatrix.identity(A, n)
    inv.entries[i - 1][j - 1] = -a
    return InvertibleWitness(m, inv, check=False)


def rotation(algebra, n):
    """Block rotation [[0, -1], [1, 0]] of size 2n."""
    one = AlgMatrix.identity(algebra, n)
    z = AlgMatrix.zeros(algebra, n)
    m = block([[z, -one], [one, z]])
    minv = block([[z, one], [-one, z]])
    return InvertibleWitness(m, minv, check=False)


def diag_blocks(*ws):
    """Direct sum of invertible witnesses."""
    out = ws[0]
    for w in ws[1:]:
        out = out.direct_sum(w)
    return out


def factor_hyperbolic(u):
    """Factor diag(u, u^{-1}) into two block elementaries repeated around
    a lower block elementary, followed by the block rotation.

    The ordered product of the returned witnesses equals diag(u, u^{-1})
    exactly; the factor entries only involve u and its inverse."""
    n = u.size
    A = u.algebra
    one = AlgMatrix.identity(A, n)
    z = AlgMatrix.zeros(A, n)
    upper = InvertibleWitness(block([[one, u.matrix], [z, one]]),
                              block([[one, -u.matrix], [z, one]]), check=False)
    lower = InvertibleWitness(block([[one, z], [-u.inverse, one]]),
                              block([[one, z], [u.inverse, one]]), check=False)
    return [upper, lower, upper, rotation(A, n)]


def stabilize(x, k):
    """Pad an idempotent with a zero block, an invertible with an
    identity block."""
    if k < 0:
        raise ValueError("padding must be nonnegative")
    if k == 0:
        return x
    if isinstance(x, Idempotent):
        pad = Idempotent(AlgMatrix.zeros(x.algebra, k), check=False)
        return x.direct_sum(pad)
    if isinstance(x, InvertibleWitness):
        return x.direct_sum(InvertibleWitness.identity(x.algebra, k))
    raise TypeError("stabilize wants an Idempotent or InvertibleWitness")


def conjugate(x, u):
    """u x u^{-1}; accepts a bare matrix or anything carrying one."""
    m = x.matrix if hasattr(x, "matrix") else x
    if m.nrows != u.size or m.ncols != u.size:
        raise SizeMismatch("conjugation sizes differ")
    return u.matrix * m * u.inverse


def k1_identities_check(A, B):
    """Exact check of the three diagonal block identities that make the
    commutator, the direct sum and a conjugate of A visible as products
    of paired diagonal matrices.  Returns a report dictionary."""
    if A.size != B.size:
        raise SizeMismatch("witnesses differ in size")
    reset = multiplications()
    ident = InvertibleWitness.identity(A.algebra, A.size)
    AB = A * B
    BA = B * A
    comm = A * B * A.inv() * B.inv()

    lhs1 = comm.direct_sum(ident)
    rhs1 = diag_blocks(A, A.inv()) * diag_blocks(B, B.inv()) \
        * diag_blocks(BA.inv(), BA)
    pass1 = lhs1.matrix == rhs1.matrix

    lhs2 = A.direct_sum(B)
    rhs2 = AB.direct_sum(ident) * diag_blocks(B.inv(), B)
    pass2 = lhs2.matrix == rhs2.matrix

    conj = A * B * A.inv()
    lhs3 = conj.direct_sum(ident)
    w = diag_blocks(A, A.inv())
    rhs3 = w * B.direct_sum(ident) * w.inv()
    pass3 = lhs3.matrix == rhs3.matrix

    checks = [
        {"id": "commutator-diagonal-factorization", "pass": pass1},
        {"id": "direct-sum-as-product", "pass": pass2},
        {"id": "conjugate-diagonal-factorization", "pass": pass3},
    ]
    return {
        "size": A.size,
        "checks": checks,
        "pass": pass1 and pass2 and pass3,
        "multiplications": multiplications() - reset,
    }


def random_element(algebra, rng, span=3):
    """Small random element with coefficients in {-2..2}."""
    coeffs = {}
    for _ in range(span):
        i = rng.randrange(algebra.dim)
        c = rng.randint(-2, 2)
        if c:
            coeffs[i] = coeffs.get(i, 0) + c
    return algebra.element({i: Fraction(c) for i, c in coeffs.items() if c})


def random_unit_element(algebra, rng, tries=50):
    """Random invertible algebra element found by rejection."""
    for _ in range(tries):
        x = algebra.unit_element().scale(Fraction(rng.randint(1, 3))) \
            + random_element(algebra, rng, span=2)
        y = invert_element(x)
        if y is not None:
            return x, y
    raise NotInvertible("no unit found in %d tries" % tries)


def random_invertible(algebra, n, rng, steps=4):
    """Random invertible matrix built as a product of elementaries and a
    unit diagonal, so the inverse witness comes for free."""
    if n == 1:
        x, y = random_unit_element(algebra, rng)
        return InvertibleWitness(AlgMatrix(algebra, [[x]]),
                                 AlgMatrix(algebra, [[y]]), check=False)
    w = InvertibleWitness.identity(algebra, n)
    for _ in range(steps):
        i = rng.randrange(1, n + 1)
        j = rng.randrange(1, n + 1)
        if i == j:
            continue
        w = w * elementary(i, j, random_element(algebra, rng, span=2), n)
    x, y = random_unit_element(algebra, rng)
    d = AlgMatrix.identity(algebra, n)
    dinv = AlgMatrix.identity(algebra, n)
    d.entries[0][0] = x
    dinv.entries[0][0] = y
    return w * InvertibleWitness(d, dinv, check=False)


def random_idempotent(algebra, n, rng, rank=None):
    """Random idempotent conjugate to a scalar diagonal projection."""
    if rank is None:
        rank = rng.randrange(n + 1)
    base = AlgMatrix.identity(algebra, n)
    z = algebra.zero()
    for i in range(rank, n):
        base.entries[i][i] = z
    u = random_invertible(algebra, n, rng)
    return Idempotent(conjugate(base, u), check=False)
