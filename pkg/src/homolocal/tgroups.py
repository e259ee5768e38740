"""Class groups of idempotents and invertibles.

T0 is the Grothendieck completion of stabilised idempotent classes; the
engine quotients by the trace form radical, splits the semisimple part
into central blocks and classifies an idempotent by the exact rank of
its action on each block.  T1 is the T-completion of conjugacy classes
of invertibles; over the rationals the class label is the multiset of
elementary divisors, over a commutative algebra size one classes are the
elements themselves, and everything else falls back to a bounded
conjugacy search with an explicit budget.
"""

import itertools
import random
from fractions import Fraction

from .errors import (
    InvolutionViolation,
    LevelViolation,
    NotAnIdeal,
    NotInvertible,
    SearchBudgetExceeded,
)
from . import linalg
from .algebra import (
    AlgebraHom,
    FiniteAlgebra,
    LocalisedAlgebra,
    TrivialFiltration,
)
from .canonical import (
    FieldContext,
    _padd,
    _pdivmod,
    _pmonic,
    _pmul,
    _pneg,
    _ptrim,
    invariant_factors,
    is_field_algebra,
    poly_string,
)
from .matrices import AlgMatrix, Idempotent, InvertibleWitness, invert_matrix

_QCTX = FieldContext(Fraction(0), Fraction(1), lambda a: 1 / a)


# ---------------------------------------------------------------------------
# T-completion of a free commutative monoid with involution

class TCompletionGroup:
    """Group completion of the free commutative monoid on a finite
    generator set, modulo g + I(g) = 0 for an additive involution I."""

    def __init__(self, generators, involution):
        self.generators = list(generators)
        index = {g: i for i, g in enumerate(self.generators)}
        if len(index) != len(self.generators):
            raise InvolutionViolation("duplicate generators")
        if callable(involution):
            involution = {g: involution(g) for g in self.generators}
        self.involution = dict(involution)
        for g in self.generators:
            ig = self.involution.get(g)
            if ig not in index:
                raise InvolutionViolation(
                    "involution leaves the generator set at %r" % (g,))
            if self.involution.get(ig) != g:
                raise InvolutionViolation(
                    "involution squared moves %r" % (g,))
        n = len(self.generators)
        relations = []
        seen = set()
        for g in self.generators:
            ig = self.involution[g]
            key = frozenset((g, ig))
            if key in seen:
                continue
            seen.add(key)
            row = [0] * n
            row[index[g]] += 1
            row[index[ig]] += 1
            relations.append(row)
        diag, V = linalg.smith_with_transform(relations, n)
        self.index = index
        self.diag = diag
        self.V = V
        self.n = n

    def class_of(self, multiset):
        """Canonical coordinates of a monoid element given as a
        {generator: count} mapping."""
        x = [0] * self.n
        for g, c in multiset.items():
            x[self.index[g]] += int(c)
        y = [sum(x[i] * self.V[i][j] for i in range(self.n))
             for j in range(self.n)]
        out = []
        for j in range(self.n):
            if j < len(self.diag):
                d = self.diag[j]
                if d == 1:
                    continue
                out.append(y[j] % d)
            else:
                out.append(y[j])
        return tuple(out)

    def zero(self):
        return self.class_of({})

    def add(self, c1, c2):
        out = []
        slot = 0
        for j in range(self.n):
            if j < len(self.diag):
                d = self.diag[j]
                if d == 1:
                    continue
                out.append((c1[slot] + c2[slot]) % d)
            else:
                out.append(c1[slot] + c2[slot])
            slot += 1
        return tuple(out)

    def neg(self, c):
        out = []
        slot = 0
        for j in range(self.n):
            if j < len(self.diag):
                d = self.diag[j]
                if d == 1:
                    continue
                out.append((-c[slot]) % d)
            else:
                out.append(-c[slot])
            slot += 1
        return tuple(out)

    def describe(self):
        torsion = [d for d in self.diag if d > 1]
        free_rank = self.n - len(self.diag)
        return {
            "generators": [str(g) for g in self.generators],
            "relations": ["%s + %s = 0" % (g, self.involution[g])
                          for g in self.generators],
            "freeRank": free_rank,
            "torsion": torsion,
        }


def t_completion_quotient(generators, involution):
    """See TCompletionGroup; this is the documented entry point."""
    return TCompletionGroup(generators, involution)


# ---------------------------------------------------------------------------
# formal sums

class FormalSum:
    """Reduced integer (or half integer) combination of class labels."""

    __slots__ = ("coeffs", "ring", "torsion")

    def __init__(self, coeffs, ring="Z", torsion=frozenset()):
        self.ring = ring
        self.torsion = frozenset(torsion)
        clean = {}
        for label, c in coeffs.items():
            c = Fraction(c)
            if ring == "Z" and c.denominator != 1:
                raise ValueError("integer ring cannot hold %s" % c)
            if label in self.torsion:
                if ring == "Z[1/2]":
                    continue
                c = Fraction(int(c) % 2)
            if c:
                clean[label] = c
        self.coeffs = clean

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return (isinstance(other, FormalSum) and self.ring == other.ring
                and self.coeffs == other.coeffs)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __add__(self, other):
        if self.ring != other.ring:
            raise ValueError("coefficient rings differ")
        coeffs = dict(self.coeffs)
        for label, c in other.coeffs.items():
            coeffs[label] = coeffs.get(label, Fraction(0)) + c
        return type(self)(coeffs, self.ring, self.torsion | other.torsion)

    def __neg__(self):
        return type(self)({l: -c for l, c in self.coeffs.items()},
                          self.ring, self.torsion)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        if self.ring == "Z":
            if c.denominator != 1:
                raise ValueError("integer ring cannot scale by %s" % c)
        elif c.denominator & (c.denominator - 1):
            raise ValueError("Z[1/2] scaling needs a dyadic factor")
        return type(self)({l: v * c for l, v in self.coeffs.items()},
                          self.ring, self.torsion)

    def tensor_half(self):
        """The same element with Z[1/2] coefficients; order two classes
        die because Z/2 tensored with Z[1/2] vanishes."""
        return type(self)(self.coeffs, "Z[1/2]", self.torsion)

    @property
    def plus(self):
        return {l: c for l, c in self.coeffs.items() if c > 0}

    @property
    def minus(self):
        return {l: -c for l, c in self.coeffs.items() if c < 0}

    @staticmethod
    def _format_label(label):
        return str(label)

    def to_doc(self):
        fmt = self._format_label
        return {
            "ring": self.ring,
            "terms": [{"label": fmt(l), "coefficient": str(c)}
                      for l, c in sorted(self.coeffs.items(),
                                         key=lambda kv: fmt(kv[0]))],
        }

    def __repr__(self):
        if not self.coeffs:
            return "0"
        fmt = self._format_label
        return " + ".join("%s*[%s]" % (c, fmt(l)) for l, c in sorted(
            self.coeffs.items(), key=lambda kv: fmt(kv[0])))


class T0Element(FormalSum):
    pass


class T1Element(FormalSum):

    @staticmethod
    def _format_label(label):
        if isinstance(label, tuple) and len(label) == 2:
            kind, payload = label
            if kind == "poly":
                return poly_string(list(payload))
            if kind == "unit":
                return "unit{%s}" % ", ".join(
                    "%d: %s" % (i, c) for i, c in payload)
            if kind == "search":
                return payload
        return str(label)


def tensor_half(x):
    return x.tensor_half()


# ---------------------------------------------------------------------------
# semisimple structure of the algebra

def radical_basis(A):
    """Basis of the trace form radical, as dense coordinate vectors."""
    dim = A.dim

    def trace_left(vec):
        t = Fraction(0)
        for k in range(dim):
            prod = A.mul_vec(vec, {k: Fraction(1)})
            t += prod.get(k, Fraction(0))
        return t

    gram = []
    for i in range(dim):
        row = []
        for j in range(dim):
            prod = A.mul_vec({i: Fraction(1)}, {j: Fraction(1)})
            row.append(trace_left(prod))
        gram.append(row)
    return linalg.nullspace_dense(gram)


class QuotientStructure:
    """A/N for a subspace ideal N, with the projection in coordinates."""

    def __init__(self, A, subspace_rows):
        dim = A.dim
        mat = [list(r) for r in subspace_rows]
        pivcols = linalg.rref_dense(mat)
        self.rep_indices = [c for c in range(dim) if c not in set(pivcols)]
        # change of basis: columns are subspace vectors then representatives
        cols = [list(r) for r in mat[:len(pivcols)]]
        for c in self.rep_indices:
            vec = [Fraction(0)] * dim
            vec[c] = Fraction(1)
            cols.append(vec)
        basis_matrix = [[cols[j][i] for j in range(dim)] for i in range(dim)]
        self.inv_basis = linalg.invert_dense(basis_matrix)
        if self.inv_basis is None:
            raise ValueError("subspace basis is degenerate")
        self.n_sub = len(pivcols)
        self.source = A
        qdim = len(self.rep_indices)
        basis_names = [A.basis[c] + "~" for c in self.rep_indices]
        mul = {}
        for a in range(qdim):
            for b in range(qdim):
                prod = A.mul_vec({self.rep_indices[a]: Fraction(1)},
                                 {self.rep_indices[b]: Fraction(1)})
                mul[(a, b)] = self.project_coeffs(prod)
        unit = self.project_coeffs(dict(A.unit))
        alg = FiniteAlgebra(basis_names, mul, unit, validate=False)
        self.quotient = LocalisedAlgebra(
            alg, TrivialFiltration(A.max_level), name=(A.name or "A") + "/rad")

    def project_coeffs(self, coeffs):
        dim = self.source.dim
        out = {}
        for j in range(self.n_sub, dim):
            v = sum(self.inv_basis[j][i] * coeffs.get(i, Fraction(0))
                    for i in range(dim))
            if v:
                out[j - self.n_sub] = v
        return out

    def project(self, x):
        return self.quotient.element(self.project_coeffs(x.coeffs))

    def lift_coeffs(self, coeffs):
        out = {}
        for a, v in coeffs.items():
            out[self.rep_indices[a]] = out.get(self.rep_indices[a], Fraction(0)) + v
        return out


def _scalar_matrix_minpoly(M):
    n = len(M)
    power = [[Fraction(1) if i == j else Fraction(0) for j in range(n)]
             for i in range(n)]
    flats = []
    span = linalg.SpanChecker()
    while True:
        flat = [power[i][j] for i in range(n) for j in range(n)]
        flats.append(flat)
        if not span.add({i: v for i, v in enumerate(flat) if v}):
            break
        power = [[sum(power[i][k] * M[k][j] for k in range(n))
                  for j in range(n)] for i in range(n)]
    k = len(flats) - 1
    mat = [[flats[j][i] for j in range(k)] for i in range(n * n)]
    rhs = [flats[k][i] for i in range(n * n)]
    sol = linalg.solve_dense(mat, rhs)
    return [-c for c in sol] + [Fraction(1)]


def _poly_xgcd(a, b):
    """Extended gcd in Q[x]: returns (g, s, t) with s a + t b = g monic."""
    r0, r1 = list(a), list(b)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = _pdivmod(r0, r1, _QCTX)
        r0, r1 = r1, r
        s0, s1 = s1, _padd(s0, _pneg(_pmul(q, s1, Fraction(0))), Fraction(0))
        t0, t1 = t1, _padd(t0, _pneg(_pmul(q, t1, Fraction(0))), Fraction(0))
    lead = r0[-1]
    scale = [1 / lead]
    return (_pmul(r0, scale, Fraction(0)), _pmul(s0, scale, Fraction(0)),
            _pmul(t0, scale, Fraction(0)))


def _eval_poly_element(coeffs, x, unit):
    """Evaluate a rational polynomial at an algebra element, with the
    given unit standing in for x**0."""
    acc = x.algebra.zero()
    for c in reversed(coeffs):
        acc = acc * x + unit.scale(c)
    return acc


def _sympy_factors(coeffs):
    import sympy
    var = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator)
                       for c in reversed(coeffs)], var, domain="QQ")
    _, factors = poly.factor_list()
    out = []
    for f, mult in factors:
        fc = [Fraction(str(c)) for c in reversed(sympy.Poly(f, var).all_coeffs())]
        fc = _pmonic(fc, _QCTX)
        out.append((fc, mult))
    return out


def central_primitive_idempotents(Abar, tries=60, seed=20290):
    """Central primitive idempotents of a semisimple algebra, found by
    splitting the minimal polynomial of a primitive central element."""
    dim = Abar.dim
    # center: z with e_i z = z e_i for all i
    rows = []
    for i in range(dim):
        for out_coord in range(dim):
            row = []
            for j in range(dim):
                lhs = Abar.mul_vec({i: Fraction(1)}, {j: Fraction(1)})
                rhs = Abar.mul_vec({j: Fraction(1)}, {i: Fraction(1)})
                row.append(lhs.get(out_coord, Fraction(0))
                           - rhs.get(out_coord, Fraction(0)))
            rows.append(row)
    center = linalg.nullspace_dense(rows)
    dimz = len(center)
    unit = Abar.unit_element()
    if dimz == 1:
        return [unit]
    rng = random.Random(seed)
    for attempt in range(tries):
        width = 2 + attempt // 6
        combo = [Fraction(rng.randint(-width, width)) for _ in range(dimz)]
        coeffs = {}
        for c, vec in zip(combo, center):
            for i, v in enumerate(vec):
                if c * v:
                    coeffs[i] = coeffs.get(i, Fraction(0)) + c * v
        z = Abar.element(coeffs)
        # minimal polynomial of z by power dependence
        power = dict(Abar.unit)
        coords = []
        span = linalg.SpanChecker()
        while True:
            vec = [power.get(i, Fraction(0)) for i in range(dim)]
            coords.append(vec)
            if not span.add({i: v for i, v in enumerate(vec) if v}):
                break
            power = Abar.mul_vec(power, z.coeffs)
        k = len(coords) - 1
        if k != dimz:
            continue
        mat = [[coords[j][i] for j in range(k)] for i in range(dim)]
        rhs = [coords[k][i] for i in range(dim)]
        sol = linalg.solve_dense(mat, rhs)
        m = [-c for c in sol] + [Fraction(1)]
        factors = _sympy_factors(m)
        if any(mult != 1 for _, mult in factors):
            continue
        idems = []
        for f, _ in factors:
            cof, _ = _pdivmod(m, f, _QCTX)
            g, s, _ = _poly_xgcd(cof, f)
            if len(g) != 1:
                idems = None
                break
            h = _pmul(cof, s, Fraction(0))
            _, h = _pdivmod(h, m, _QCTX)
            e = _eval_poly_element(h, z, unit)
            idems.append(e)
        if idems is None:
            continue
        total = Abar.zero()
        ok = True
        for e in idems:
            if not (e * e == e):
                ok = False
                break
            total = total + e
        if ok and total == unit:
            return idems
    raise SearchBudgetExceeded(
        "no primitive central element found in %d tries" % tries)


def lift_idempotent(A, quot, e_bar, max_iter=None):
    """Lift an idempotent of A/rad to an exact idempotent of A by the
    cubic Newton step p <- 3p^2 - 2p^3."""
    p = A.element(quot.lift_coeffs(e_bar.coeffs))
    limit = max_iter or (A.dim + 3)
    for _ in range(limit):
        if p * p == p:
            return p
        sq = p * p
        p = sq.scale(3) - (sq * p).scale(2)
    raise SearchBudgetExceeded("idempotent refused to lift exactly")


class T0Group:
    """T0 of a localised algebra with a working classifier."""

    def __init__(self, A, mu=None, seed=20290, samples=8):
        self.A = A
        self.mu = mu
        rad = radical_basis(A.algebra if hasattr(A, "algebra") else A)
        self.quot = QuotientStructure(A, rad)
        Abar = self.quot.quotient
        self.Abar = Abar
        idems = central_primitive_idempotents(Abar, seed=seed)
        rng = random.Random(seed + 1)
        self.blocks = []
        for bi, e in enumerate(idems):
            basis = []
            checker = linalg.SpanChecker()
            for k in range(Abar.dim):
                v = e * Abar.basis_element(k)
                row = {i: c for i, c in v.coeffs.items()}
                if checker.add(row):
                    basis.append(v)
            quantum = self._block_quantum(e, basis, rng, samples)
            rep_bar = e
            rep = lift_idempotent(A, self.quot, rep_bar)
            self.blocks.append({
                "label": "block%d" % bi,
                "idempotent": e,
                "basis": basis,
                "quantum": quantum,
                "representative": rep,
                "representativeLevel": rep.level(),
            })

    def _block_quantum(self, e, basis, rng, samples):
        quantum = self._invariant_of_element(e, basis)
        from math import gcd
        for _ in range(samples):
            coeffs = {}
            for v in basis:
                c = Fraction(rng.randint(-2, 2))
                if c:
                    for i, w in v.coeffs.items():
                        coeffs[i] = coeffs.get(i, Fraction(0)) + c * w
            b = self.Abar.element({i: c for i, c in coeffs.items() if c})
            if b.is_zero():
                continue
            # spectral idempotents of left multiplication by b on the block
            M = []
            for v in basis:
                img = b * v
                M.append(self._coords_in(basis, img))
            M = [[M[j][i] for j in range(len(basis))] for i in range(len(basis))]
            m = _scalar_matrix_minpoly(M)
            # CRT projections for each irreducible power factor
            factors = _sympy_factors(m)
            if len(factors) < 2:
                continue
            for f, mult in factors:
                fp = self._ppow(f, mult)
                cof, _ = _pdivmod(m, fp, _QCTX)
                g, s, _ = _poly_xgcd(cof, fp)
                if len(g) != 1:
                    continue
                h = _pmul(cof, s, Fraction(0))
                _, h = _pdivmod(h, m, _QCTX)
                p = _eval_poly_element(h, b, e)
                if not (p * p == p) or p.is_zero():
                    continue
                quantum = gcd(quantum, self._invariant_of_element(p, basis))
        return quantum

    @staticmethod
    def _ppow(f, k):
        out = [Fraction(1)]
        for _ in range(k):
            out = _pmul(out, f, Fraction(0))
        return out

    @staticmethod
    def _coords_in(basis, x):
        mat = []
        dim = x.algebra.dim
        for i in range(dim):
            mat.append([v.coeffs.get(i, Fraction(0)) for v in basis])
        rhs = [x.coeffs.get(i, Fraction(0)) for i in range(dim)]
        sol = linalg.solve_dense(mat, rhs)
        if sol is None:
            raise ValueError("element outside block span")
        return sol

    def _invariant_of_element(self, p, basis):
        rows = []
        for v in basis:
            img = p * v
            rows.append({i: c for i, c in img.coeffs.items()})
        return linalg.rank_of(rows)

    def _invariant_vector(self, pbar_entries, k):
        """Per block rank of the idempotent acting on Block^k."""
        out = []
        dimq = self.Abar.dim
        for blk in self.blocks:
            rows = []
            for s in range(k):
                for v in blk["basis"]:
                    col = {}
                    for r in range(k):
                        w = pbar_entries[r][s] * v
                        for i, c in w.coeffs.items():
                            col[r * dimq + i] = c
                    rows.append(col)
            out.append(linalg.rank_of(rows))
        return out

    def classifier(self, p):
        """Map an idempotent matrix over A to its T0 class."""
        m = p.matrix if isinstance(p, Idempotent) else p
        if isinstance(m, AlgMatrix):
            if not m.is_idempotent():
                from .errors import NotIdempotent
                raise NotIdempotent("classifier needs an idempotent")
            if self.mu is not None and m.level() < self.mu:
                raise LevelViolation(
                    "idempotent level %s below %s" % (m.level(), self.mu))
            k = m.size
            entries = [[self.quot.project(x) for x in row] for row in m.entries]
        else:
            raise TypeError("classifier wants an AlgMatrix or Idempotent")
        vec = self._invariant_vector(entries, k)
        coeffs = {}
        for blk, value in zip(self.blocks, vec):
            q, r = divmod(value, blk["quantum"])
            if r:
                raise SearchBudgetExceeded(
                    "block quantum for %s underestimated; rerun with more "
                    "samples" % blk["label"])
            if q:
                coeffs[blk["label"]] = q
        return T0Element(coeffs)

    def describe(self):
        return {
            "group": "free abelian",
            "rank": len(self.blocks),
            "generators": [b["label"] for b in self.blocks],
            "relations": [],
            "blocks": [{
                "label": b["label"],
                "dimension": len(b["basis"]),
                "quantum": b["quantum"],
                "representativeLevel": str(b["representativeLevel"]),
            } for b in self.blocks],
        }


def t0_group(A, mu=None, seed=20290):
    return T0Group(A, mu=mu, seed=seed)


# ---------------------------------------------------------------------------
# T1

def _reciprocal_label(label):
    """Label of the inverse class: reciprocal polynomial coefficients."""
    c0 = label[0]
    rev = tuple(c / c0 for c in reversed(label))
    return rev


def _as_scalar_rows(A, m):
    unit = A.unit[0]
    return [[x.coeffs.get(0, Fraction(0)) / unit for x in row]
            for row in m.entries]


class T1Group:
    """T1 of a localised algebra with a classifier.

    mode "field-q": labels are elementary divisor polynomials over Q.
    mode "commutative": size one matrices label by the element itself;
    larger sizes join the search registry.
    mode "search": bounded conjugacy search ids.
    """

    def __init__(self, A, mu=None, search_budget=200):
        self.A = A
        self.mu = mu
        self.search_budget = search_budget
        self.registry = []
        self.inconclusive = 0
        self._cache = {}
        if A.dim == 1:
            self.mode = "field-q"
        elif A.is_commutative():
            self.mode = "commutative"
        else:
            self.mode = "search"

    @staticmethod
    def _matrix_key(m):
        return tuple(tuple(tuple(sorted(x.coeffs.items())) for x in row)
                     for row in m.entries)

    # --- label machinery -------------------------------------------------
    # labels are hashable tuples: ("poly", coeff tuple) for elementary
    # divisors, ("unit", ((index, value), ...)) for commutative units,
    # ("search", name) for registry classes.

    def _field_labels(self, m):
        rows = _as_scalar_rows(self.A, m)
        factors = invariant_factors(rows)
        labels = []
        for f in factors:
            for prime, mult in _sympy_factors(f):
                if prime[0] == 0:
                    raise NotInvertible("matrix has a zero elementary divisor")
                power = T0Group._ppow(prime, mult)
                if power == [Fraction(-1), Fraction(1)]:
                    continue
                labels.append(tuple(power))
        return labels

    def _element_label(self, x):
        return tuple((i, x.coeffs[i]) for i in sorted(x.coeffs))

    def _classify_field(self, m):
        coeffs = {}
        torsion = set()
        for label in self._field_labels(m):
            rec = _reciprocal_label(label)
            if rec == label:
                canon, sign = label, 1
                torsion.add(("poly", canon))
            elif label < rec:
                canon, sign = label, 1
            else:
                canon, sign = rec, -1
            key = ("poly", canon)
            coeffs[key] = coeffs.get(key, 0) + sign
        return T1Element(coeffs, torsion=torsion)

    def _classify_commutative_unit(self, m):
        x = m.entries[0][0]
        if x == self.A.unit_element():
            return T1Element({})
        from .matrices import invert_element
        y = invert_element(x)
        if y is None:
            raise NotInvertible("size one matrix entry is not a unit")
        lx, ly = self._element_label(x), self._element_label(y)
        if lx == ly:
            key = ("unit", lx)
            return T1Element({key: 1}, torsion={key})
        canon, sign = (lx, 1) if lx < ly else (ly, -1)
        return T1Element({("unit", canon): sign})

    def _classify_search(self, m, minv):
        from .canonical import conjugacy_witness
        n = m.size
        ident = AlgMatrix.identity(self.A, n)
        if m == ident:
            return T1Element({})
        for rec in self.registry:
            if rec["size"] != n:
                continue
            if m == rec["rep"]:
                return T1Element({rec["label"]: 1},
                                 torsion={rec["label"]} if rec["selfDual"] else ())
            if m == rec["inv"]:
                if rec["selfDual"]:
                    return T1Element({rec["label"]: 1}, torsion={rec["label"]})
                return T1Element({rec["label"]: -1})
        for rec in self.registry:
            if rec["size"] != n:
                continue
            try:
                w = conjugacy_witness(m, rec["rep"], budget=self.search_budget)
                if w is not None:
                    return T1Element({rec["label"]: 1},
                                     torsion={rec["label"]} if rec["selfDual"] else ())
                w = conjugacy_witness(m, rec["inv"], budget=self.search_budget)
                if w is not None:
                    if rec["selfDual"]:
                        return T1Element({rec["label"]: 1}, torsion={rec["label"]})
                    return T1Element({rec["label"]: -1})
            except SearchBudgetExceeded:
                self.inconclusive += 1
        label = ("search", "class%d@%d" % (len(self.registry), n))
        self_dual = m == minv
        if not self_dual:
            try:
                self_dual = conjugacy_witness(
                    m, minv, budget=self.search_budget) is not None
            except SearchBudgetExceeded:
                self.inconclusive += 1
        self.registry.append({
            "label": label, "rep": m, "inv": minv, "size": n,
            "selfDual": self_dual,
        })
        return T1Element({label: 1}, torsion={label} if self_dual else ())

    def classifier(self, u):
        """Map an invertible matrix (witness preferred) to its T1 class."""
        if isinstance(u, InvertibleWitness):
            m, minv = u.matrix, u.inverse
        elif isinstance(u, AlgMatrix):
            minv = invert_matrix(u)
            if minv is None:
                raise NotInvertible("matrix is not invertible over the algebra")
            m = u
        else:
            raise TypeError("classifier wants an InvertibleWitness or AlgMatrix")
        if self.mu is not None and min(m.level(), minv.level()) < self.mu:
            raise LevelViolation("invertible not witnessed at level %s" % self.mu)
        if self.mode == "field-q":
            return self._classify_field(m)
        if self.mode == "commutative" and m.size == 1:
            return self._classify_commutative_unit(m)
        key = self._matrix_key(m)
        if key in self._cache:
            return self._cache[key]
        out = self._classify_search(m, minv)
        # a witness pins the inverse class for free: [u^{-1}] = -[u]
        self._cache[key] = out
        self._cache[self._matrix_key(minv)] = -out
        return out

    def representative_of(self, label):
        """A matrix in the class of a registered or polynomial label."""
        for rec in self.registry:
            if rec["label"] == label:
                return rec["rep"]
        raise KeyError(label)

    def describe(self):
        doc = {
            "group": "T-completion of conjugacy classes",
            "mode": self.mode,
            "relations": "[c] + [inverse class of c] = 0",
            "generators": "class labels, produced lazily by the classifier",
        }
        if self.mode == "search" or self.registry:
            doc["registered"] = [
                {"label": T1Element._format_label(r["label"]),
                 "size": r["size"], "selfDual": r["selfDual"]}
                for r in self.registry]
            doc["inconclusiveComparisons"] = self.inconclusive
            doc["searchBudget"] = self.search_budget
        return doc


def t1_group(A, mu=None, search_budget=200):
    return T1Group(A, mu=mu, search_budget=search_budget)


# ---------------------------------------------------------------------------
# induced maps and relative groups

class InducedMap:
    """Pushforward on T0 and T1 along a level preserving homomorphism."""

    def __init__(self, f, source_t0=None, target_t0=None,
                 source_t1=None, target_t1=None):
        f.validate_levels()
        self.f = f
        self._s0 = source_t0
        self._t0 = target_t0
        self._s1 = source_t1
        self._t1 = target_t1

    def _source0(self):
        if self._s0 is None:
            self._s0 = t0_group(self.f.source)
        return self._s0

    def _target0(self):
        if self._t0 is None:
            self._t0 = t0_group(self.f.target)
        return self._t0

    def _target1(self):
        if self._t1 is None:
            self._t1 = t1_group(self.f.target)
        return self._t1

    def _push_matrix(self, m):
        return AlgMatrix(self.f.target,
                         [[self.f.apply(x) for x in row] for row in m.entries])

    def t0(self, x):
        src = self._source0()
        dst = self._target0()
        out = T0Element({})
        for label, c in x.coeffs.items():
            rep = None
            for blk in src.blocks:
                if blk["label"] == label:
                    rep = blk["representative"]
                    break
            if rep is None:
                raise KeyError("unknown T0 label %r" % label)
            mat = AlgMatrix(self.f.source, [[rep]])
            cls = dst.classifier(self._push_matrix(mat))
            out = out + cls.scale(c)
        if x.ring == "Z[1/2]":
            out = out.tensor_half()
        return out

    def t1(self, x, source_reps=None):
        """Push a T1 element; source_reps supplies a representative
        matrix per label when the source group cannot reconstruct one."""
        dst = self._target1()
        out = T1Element({})
        reps = source_reps or {}
        for label, c in x.coeffs.items():
            if label in reps:
                rep = reps[label]
            elif self._s1 is not None and self._s1.mode == "search":
                rep = self._s1.representative_of(label)
            else:
                rep = _matrix_for_label(self.f.source, label)
            cls = dst.classifier(self._push_matrix(rep))
            out = out + cls.scale(c)
        return out


def _matrix_for_label(A, label):
    """Representative matrix over the source algebra for a structured
    class label: the companion matrix of a polynomial label, or the
    element itself for a commutative unit label."""
    kind, payload = label
    if kind == "unit":
        x = A.element({i: c for i, c in payload})
        return AlgMatrix(A, [[x]])
    if kind == "poly":
        coeffs = list(payload)
        d = len(coeffs) - 1
        m = AlgMatrix.zeros(A, d)
        for r in range(1, d):
            m.entries[r][r - 1] = A.unit_element()
        for r in range(d):
            m.entries[r][d - 1] = A.scalar(-coeffs[r])
        return m
    raise KeyError("cannot rebuild a representative for %r" % (label,))


def induced_map(f, **kw):
    return InducedMap(f, **kw)


def _ideal_rows(A, J):
    if isinstance(J, dict):
        J = J.get("span", [])
    rows = []
    for v in J:
        if hasattr(v, "coeffs"):
            vec = [v.coeffs.get(i, Fraction(0)) for i in range(A.dim)]
        elif isinstance(v, dict):
            vec = [Fraction(v.get(i, v.get(str(i), 0))) for i in range(A.dim)]
        else:
            vec = [Fraction(c) for c in v]
        rows.append(vec)
    return rows


def validate_ideal(A, rows):
    span = linalg.SpanChecker()
    for r in rows:
        span.add({i: v for i, v in enumerate(r) if v})
    for r in rows:
        coeffs = {i: v for i, v in enumerate(r) if v}
        for i in range(A.dim):
            left = A.mul_vec({i: Fraction(1)}, coeffs)
            if not span.contains(dict(left)):
                raise NotAnIdeal({"basis": i, "side": "left"})
            right = A.mul_vec(coeffs, {i: Fraction(1)})
            if not span.contains(dict(right)):
                raise NotAnIdeal({"basis": i, "side": "right"})


def doubled_algebra(A, ideal_rows):
    """The pullback algebra of pairs (x, y) with x - y in the ideal."""
    dim = A.dim
    nj = len(ideal_rows)
    names = ["(%s,%s)" % (A.basis[k], A.basis[k]) for k in range(dim)]
    names += ["(j%d,0)" % b for b in range(nj)]
    # coordinates: first the diagonal copy, then the ideal directions
    def pair_of(index):
        if index < dim:
            x = {index: Fraction(1)}
            return x, dict(x)
        row = ideal_rows[index - dim]
        return {i: v for i, v in enumerate(row) if v}, {}

    # basis matrix for solving pair -> coordinates
    cols = []
    for idx in range(dim + nj):
        x, y = pair_of(idx)
        vec = [x.get(i, Fraction(0)) for i in range(dim)]
        vec += [y.get(i, Fraction(0)) for i in range(dim)]
        cols.append(vec)
    mat = [[cols[j][i] for j in range(dim + nj)] for i in range(2 * dim)]

    def coords_of_pair(x, y):
        rhs = [x.get(i, Fraction(0)) for i in range(dim)]
        rhs += [y.get(i, Fraction(0)) for i in range(dim)]
        sol = linalg.solve_dense(mat, rhs)
        if sol is None:
            raise ValueError("pair escapes the pullback")
        return {i: v for i, v in enumerate(sol) if v}

    mul = {}
    for a in range(dim + nj):
        for b in range(dim + nj):
            xa, ya = pair_of(a)
            xb, yb = pair_of(b)
            mul[(a, b)] = coords_of_pair(A.mul_vec(xa, xb), A.mul_vec(ya, yb))
    unit = coords_of_pair(dict(A.unit), dict(A.unit))
    alg = FiniteAlgebra(names, mul, unit, validate=False)
    Lam = LocalisedAlgebra(alg, TrivialFiltration(A.max_level),
                           name=(A.name or "A") + " pullback")
    j1 = AlgebraHom(Lam, A, [dict(pair_of(idx)[0].items())
                             for idx in range(dim + nj)], check=False)
    j2 = AlgebraHom(Lam, A, [dict(pair_of(idx)[1].items())
                             for idx in range(dim + nj)], check=False)
    return Lam, j1, j2


class RelativeT1:
    """Kernel of the induced second projection on T1, presented as a
    membership predicate (the class labels are not finitely listed)."""

    def __init__(self, pushdown):
        self.pushdown = pushdown

    def contains(self, x, source_reps=None):
        return self.pushdown.t1(x, source_reps=source_reps).is_zero()

    def describe(self):
        return {
            "group": "kernel of the second projection on T1",
            "presentation": "membership predicate only",
        }


def relative_t_groups(A, J):
    """Relative T groups of (A, J) through the pullback of pairs."""
    rows = _ideal_rows(A, J)
    validate_ideal(A, rows)
    Lam, j1, j2 = doubled_algebra(A, rows)
    lam0 = t0_group(Lam)
    a0 = t0_group(A)
    push = InducedMap(j2, source_t0=lam0, target_t0=a0)
    # integer matrix of j2* on T0 generators
    matrix_rows = []
    for blk in lam0.blocks:
        x = T0Element({blk["label"]: 1})
        img = push.t0(x)
        matrix_rows.append([img.coeffs.get(b["label"], 0) for b in a0.blocks])
    # kernel of x -> x . M (row convention): transpose to column map
    ncols = len(lam0.blocks)
    mat = [[matrix_rows[j][i] for j in range(ncols)]
           for i in range(len(a0.blocks))]
    diag, V = linalg.smith_with_transform(mat, ncols)
    kernel = []
    for j in range(len(diag), ncols):
        combo = {lam0.blocks[i]["label"]: V[i][j] for i in range(ncols)
                 if V[i][j]}
        kernel.append(combo)
    t0_rel = {
        "group": "free abelian",
        "rank": len(kernel),
        "generators": kernel,
        "ambient": lam0.describe(),
        "map": matrix_rows,
    }
    lam1 = t1_group(Lam)
    push1 = InducedMap(j2, source_t1=lam1)
    t1_rel = RelativeT1(push1)
    return {
        "pullback": Lam,
        "j1": j1,
        "j2": j2,
        "t0": t0_rel,
        "t1": t1_rel,
        "t0Group": lam0,
        "t1Group": lam1,
    }
