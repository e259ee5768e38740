"""Finite-dimensional unital algebras by structure constants, together
with the filtration ("level") structure that makes them localised.

An element's level says how deep it sits in the decreasing filtration
A_0 >= A_1 >= ... >= A_maxLevel; scalar multiples of the unit belong to
every A_mu and get level inf.  The three axioms:

  1. each A_mu is a linear subspace and the family is decreasing;
  2. scalar multiples of the unit lie in every A_mu;
  3. level(a*b) >= min(level(a), level(b)) - 1, clamped at 0 so that
     level-0 products stay at level 0.

Three filtration models are supported: trivial (every element has level
inf), a per-basis-element level table, and a metric model where basis
elements are kernels k(x,y) on a finite metric space and the level of an
element is the largest mu whose scale eps_mu = eps0 * 2^(-mu) contains
the support; the doubling schedule is what makes Axiom 3 hold there.

Algebra documents are JSON: fields `basis`, `unit`, `mul`, `filtration`
(and optionally `maxLevel`), rationals as "p/q" strings.  Metric models
may omit basis/unit/mul since the kernel (or pointwise-function) algebra
is generated from the point set.
"""

import json
from fractions import Fraction
from math import inf

from .errors import (
    AssociativityViolation,
    FiltrationViolation,
    NotLevelPreserving,
    ParseError,
    SizeMismatch,
    UnitViolation,
)
from .scalars import format_scalar, parse_scalar


def _clean(coeffs):
    return {i: v for i, v in coeffs.items() if v}


def required_product_level(mu1, mu2):
    """Lower bound for the level of a product, per Axiom 3."""
    m = min(mu1, mu2)
    if m == inf:
        return inf
    return max(m - 1, 0)


class AlgebraElement:
    """Sparse vector over the basis of one algebra.  Immutable by
    convention; all arithmetic returns fresh elements."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra, coeffs):
        self.algebra = algebra
        self.coeffs = _clean(coeffs)

    def __add__(self, other):
        out = dict(self.coeffs)
        for i, v in other.coeffs.items():
            cur = out.get(i, 0) + v
            if cur:
                out[i] = cur
            elif i in out:
                del out[i]
        return AlgebraElement(self.algebra, out)

    def __sub__(self, other):
        out = dict(self.coeffs)
        for i, v in other.coeffs.items():
            cur = out.get(i, 0) - v
            if cur:
                out[i] = cur
            elif i in out:
                del out[i]
        return AlgebraElement(self.algebra, out)

    def __neg__(self):
        return AlgebraElement(self.algebra, {i: -v for i, v in self.coeffs.items()})

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return AlgebraElement(self.algebra, {})
        return AlgebraElement(self.algebra, {i: v * c for i, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return AlgebraElement(
                self.algebra, self.algebra.mul_vec(self.coeffs, other.coeffs)
            )
        return self.scale(other)

    def __rmul__(self, c):
        return self.scale(c)

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraElement)
            and self.algebra is other.algebra
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def level(self):
        return self.algebra.level_of(self)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for i in sorted(self.coeffs):
            bits.append("%s*%s" % (format_scalar(self.coeffs[i]), self.algebra.basis[i]))
        return " + ".join(bits)


class FiniteAlgebra:
    """Unital associative algebra over Q given by structure constants."""

    def __init__(self, basis, mul, unit, validate=True):
        self.basis = list(basis)
        self.dim = len(self.basis)
        self.unit = _clean(dict(unit))
        flat = [()] * (self.dim * self.dim)
        for (i, j), vec in mul.items():
            flat[i * self.dim + j] = tuple(sorted((k, v) for k, v in vec.items() if v))
        self.mulflat = flat
        if validate:
            self.validate()

    def mul_vec(self, u, v):
        out = {}
        dim = self.dim
        flat = self.mulflat
        for i, ci in u.items():
            for j, cj in v.items():
                c = ci * cj
                for k, s in flat[i * dim + j]:
                    cur = out.get(k, 0) + c * s
                    if cur:
                        out[k] = cur
                    elif k in out:
                        del out[k]
        return out

    def validate(self):
        dim = self.dim
        for i in range(dim):
            ei = {i: Fraction(1)}
            left = self.mul_vec(self.unit, ei)
            right = self.mul_vec(ei, self.unit)
            if left != ei or right != ei:
                raise UnitViolation(i)
        for i in range(dim):
            ei = {i: Fraction(1)}
            for j in range(dim):
                ej = {j: Fraction(1)}
                ij = self.mul_vec(ei, ej)
                for k in range(dim):
                    ek = {k: Fraction(1)}
                    lhs = self.mul_vec(ij, ek)
                    rhs = self.mul_vec(ei, self.mul_vec(ej, ek))
                    if lhs != rhs:
                        raise AssociativityViolation(i, j, k)

    def is_commutative(self):
        for i in range(self.dim):
            for j in range(i):
                a = self.mul_vec({i: Fraction(1)}, {j: Fraction(1)})
                b = self.mul_vec({j: Fraction(1)}, {i: Fraction(1)})
                if a != b:
                    return False
        return True


class Filtration:
    kind = "abstract"

    def index_level(self, i):
        raise NotImplementedError

    def word_points(self, i):
        """Support point set of a basis element, metric models only."""
        return None


class TrivialFiltration(Filtration):
    kind = "trivial"

    def __init__(self, max_level=3):
        self.max_level = max_level

    def index_level(self, i):
        return inf


class TableFiltration(Filtration):
    kind = "table"

    def __init__(self, levels, max_level):
        self.levels = [inf if v == inf else int(v) for v in levels]
        self.max_level = max_level

    def index_level(self, i):
        return self.levels[i]


class MetricFiltration(Filtration):
    """Levels from supports on a finite metric space.  `pair_points[i]`
    is the tuple of points a basis element touches (two for kernels
    k(x,y), one for pointwise functions)."""

    kind = "metric"

    def __init__(self, points, dist, eps0, max_level, pair_points, schedule=None):
        self.points = list(points)
        self.dist = dist
        self.eps0 = Fraction(eps0)
        self.max_level = max_level
        self.pair_points = pair_points
        if schedule is None:
            schedule = [self.eps0 / (2**mu) for mu in range(max_level + 1)]
        self.schedule = [Fraction(e) for e in schedule]

    def eps(self, mu):
        return self.schedule[mu]

    def level_of_diameter(self, diam):
        if diam == 0:
            return inf
        lvl = 0
        for mu in range(self.max_level + 1):
            if diam <= self.schedule[mu]:
                lvl = mu
        if diam > self.schedule[0]:
            return 0
        return lvl

    def index_level(self, i):
        pts = self.pair_points[i]
        diam = max(
            (self.dist[a][b] for a in pts for b in pts),
            default=Fraction(0),
        )
        return self.level_of_diameter(diam)

    def set_diameter(self, point_ids):
        return max(
            (self.dist[a][b] for a in point_ids for b in point_ids),
            default=Fraction(0),
        )


class LocalisedAlgebra:
    """A FiniteAlgebra together with its filtration."""

    def __init__(self, algebra, filtration, name=""):
        self.algebra = algebra
        self.filtration = filtration
        self.name = name
        self.basis = algebra.basis
        self.dim = algebra.dim
        self.mulflat = algebra.mulflat
        self.unit = algebra.unit
        self._index_levels = [filtration.index_level(i) for i in range(self.dim)]

    @property
    def max_level(self):
        return self.filtration.max_level

    def element(self, coeffs):
        return AlgebraElement(self, {int(i): Fraction(v) for i, v in coeffs.items()})

    def zero(self):
        return AlgebraElement(self, {})

    def unit_element(self):
        return AlgebraElement(self, dict(self.unit))

    def basis_element(self, i):
        return AlgebraElement(self, {i: Fraction(1)})

    def scalar(self, c):
        return self.unit_element().scale(c)

    def mul_vec(self, u, v):
        return self.algebra.mul_vec(u, v)

    def is_commutative(self):
        return self.algebra.is_commutative()

    def subspace_indices(self, mu):
        return [i for i in range(self.dim) if self._index_levels[i] >= mu]

    def is_scalar_multiple_of_unit(self, elem):
        """Return the scalar c with elem = c*unit, or None."""
        coeffs = elem.coeffs
        if not coeffs:
            return Fraction(0)
        i0 = next(iter(self.unit))
        c = coeffs.get(i0, Fraction(0)) / self.unit[i0]
        probe = {k: v * c for k, v in self.unit.items() if v * c}
        return c if probe == coeffs else None

    def level_of(self, elem):
        """Largest mu with elem in A_mu = span{e_i : level(e_i) >= mu} +
        Q*unit; inf when the element lies in every A_mu (supported on
        level-inf directions up to a multiple of the unit)."""
        if self._in_level_subspace(elem, inf):
            return inf
        best = 0
        for mu in range(self.max_level, -1, -1):
            if self._in_level_subspace(elem, mu):
                best = mu
                break
        return best

    def _in_level_subspace(self, elem, mu):
        levels = self._index_levels
        off = {i: v for i, v in elem.coeffs.items() if levels[i] < mu}
        if not off:
            return True
        i0 = next(iter(off))
        u0 = self.unit.get(i0, Fraction(0))
        if not u0:
            return False
        c = off[i0] / u0
        probe = {
            i: v * c
            for i, v in self.unit.items()
            if levels[i] < mu and v * c
        }
        return probe == off

    def word_level(self, word):
        """Locality level of a tensor word (tuple of basis indices).

        Metric models use the joint support: the largest mu whose scale
        covers the diameter of all points the word touches.  Other
        models use the min of the letter levels."""
        f = self.filtration
        if f.kind == "metric":
            pts = set()
            for i in word:
                pts.update(f.pair_points[i])
            return f.level_of_diameter(f.set_diameter(sorted(pts)))
        return min((self._index_levels[i] for i in word), default=inf)

    def serialize(self):
        doc = {
            "basis": list(self.basis),
            "unit": {str(i): format_scalar(v) for i, v in sorted(self.unit.items())},
            "mul": [],
            "maxLevel": self.max_level,
        }
        dim = self.dim
        for i in range(dim):
            for j in range(dim):
                vec = self.mulflat[i * dim + j]
                if vec:
                    doc["mul"].append(
                        [i, j, {str(k): format_scalar(v) for k, v in vec}]
                    )
        f = self.filtration
        if f.kind == "trivial":
            doc["filtration"] = "trivial"
        elif f.kind == "table":
            doc["filtration"] = {
                "table": ["inf" if v == inf else v for v in f.levels]
            }
        else:
            doc["filtration"] = {
                "metric": {
                    "points": list(f.points),
                    "distances": [
                        [format_scalar(d) for d in row] for row in f.dist
                    ],
                    "epsilon0": format_scalar(f.eps0),
                    "model": getattr(self, "metric_model", "kernel"),
                    "maxLevel": f.max_level,
                }
            }
        return doc


def _parse_sparse_vec(obj):
    return {int(i): parse_scalar(v) for i, v in obj.items()}


def metric_kernel_algebra(points, dist, eps0, max_level=3, schedule=None, name=""):
    """Kernels k(x,y) on a finite metric space under composition
    (k*l)(x,z) = sum_y k(x,y) l(y,z); levels come from supports."""
    n = len(points)
    basis = []
    pair_points = []
    for x in range(n):
        for y in range(n):
            basis.append("k(%s,%s)" % (points[x], points[y]))
            pair_points.append((x, y))
    mul = {}
    for x in range(n):
        for y in range(n):
            for z in range(n):
                mul[(x * n + y, y * n + z)] = {x * n + z: Fraction(1)}
    unit = {x * n + x: Fraction(1) for x in range(n)}
    alg = FiniteAlgebra(basis, mul, unit, validate=False)
    filt = MetricFiltration(points, dist, eps0, max_level, pair_points, schedule)
    out = LocalisedAlgebra(alg, filt, name=name)
    out.metric_model = "kernel"
    return out


def metric_function_algebra(points, dist, eps0, max_level=3, schedule=None, name=""):
    """Pointwise functions on a finite metric space; the algebra itself
    is a product of copies of Q, locality enters through chain words."""
    n = len(points)
    basis = ["f(%s)" % p for p in points]
    pair_points = [(x,) for x in range(n)]
    mul = {(x, x): {x: Fraction(1)} for x in range(n)}
    unit = {x: Fraction(1) for x in range(n)}
    alg = FiniteAlgebra(basis, mul, unit, validate=False)
    filt = MetricFiltration(points, dist, eps0, max_level, pair_points, schedule)
    out = LocalisedAlgebra(alg, filt, name=name)
    out.metric_model = "function"
    return out


def build_algebra(description, validate_filtration=True):
    """Construct a LocalisedAlgebra from a document (dict, JSON text, or
    path to a JSON file).  Associativity and the unit law are always
    checked eagerly; filtration axioms too unless disabled."""
    doc = description
    if isinstance(doc, str):
        if doc.lstrip().startswith("{"):
            doc = json.loads(doc)
        else:
            with open(doc) as fh:
                doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ParseError("algebra description must be a JSON object")

    filt_spec = doc.get("filtration", "trivial")
    max_level = int(doc.get("maxLevel", 3))
    name = doc.get("name", "")

    if isinstance(filt_spec, dict) and "metric" in filt_spec:
        m = filt_spec["metric"]
        points = list(m["points"])
        dist = [[parse_scalar(v) for v in row] for row in m["distances"]]
        _check_metric(points, dist)
        eps0 = parse_scalar(m["epsilon0"])
        model = m.get("model", "kernel")
        ml = int(m.get("maxLevel", max_level))
        schedule = [parse_scalar(e) for e in m["schedule"]] if "schedule" in m else None
        maker = metric_kernel_algebra if model == "kernel" else metric_function_algebra
        out = maker(points, dist, eps0, max_level=ml, schedule=schedule, name=name)
    else:
        try:
            basis = list(doc["basis"])
            unit = _parse_sparse_vec(doc["unit"])
            mul = {}
            for i, j, vec in doc["mul"]:
                mul[(int(i), int(j))] = _parse_sparse_vec(vec)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError("bad algebra document: %s" % exc) from None
        alg = FiniteAlgebra(basis, mul, unit, validate=True)
        if filt_spec == "trivial":
            filt = TrivialFiltration(max_level)
        elif isinstance(filt_spec, dict) and "table" in filt_spec:
            levels = [inf if v in ("inf", inf) else int(v) for v in filt_spec["table"]]
            if len(levels) != alg.dim:
                raise ParseError("level table length != dim")
            filt = TableFiltration(levels, max_level)
        else:
            raise ParseError("unknown filtration spec %r" % (filt_spec,))
        out = LocalisedAlgebra(alg, filt, name=name)

    if validate_filtration:
        report = check_localisation_axioms(out)
        if not report["pass"]:
            first = next(a for a in report["axioms"] if not a["pass"])
            raise FiltrationViolation(first["axiom"], first.get("witness"))
    return out


def _check_metric(points, dist):
    n = len(points)
    if len(dist) != n or any(len(r) != n for r in dist):
        raise ParseError("distance matrix shape mismatch")
    for i in range(n):
        if dist[i][i] != 0:
            raise ParseError("nonzero diagonal in metric")
        for j in range(n):
            if dist[i][j] != dist[j][i] or dist[i][j] < 0:
                raise ParseError("metric not symmetric nonnegative")
            for k in range(n):
                if dist[i][k] > dist[i][j] + dist[j][k]:
                    raise ParseError(
                        "triangle inequality fails at (%d,%d,%d)" % (i, j, k)
                    )


def check_localisation_axioms(A):
    """Pass/fail report for the three filtration axioms, with witnesses."""
    axioms = []

    witness = None
    if A.filtration.kind == "metric":
        sched = A.filtration.schedule
        for mu in range(len(sched) - 1):
            if sched[mu + 1] > sched[mu]:
                witness = {
                    "mu": mu,
                    "eps_mu": format_scalar(sched[mu]),
                    "eps_next": format_scalar(sched[mu + 1]),
                }
                break
    else:
        for i, lv in enumerate(A._index_levels):
            if lv != inf and (lv < 0 or lv != int(lv)):
                witness = {"index": i, "level": lv}
                break
    axioms.append(
        {
            "axiom": 1,
            "statement": "levels form a decreasing filtration by subspaces",
            "pass": witness is None,
            "witness": witness,
        }
    )

    unit_level = A.level_of(A.unit_element())
    axioms.append(
        {
            "axiom": 2,
            "statement": "scalar multiples of the unit lie in every level",
            "pass": unit_level == inf,
            "witness": None if unit_level == inf else {"unitLevel": unit_level},
        }
    )

    witness = None
    dim = A.dim
    for i in range(dim):
        li = A._index_levels[i]
        for j in range(dim):
            lj = A._index_levels[j]
            need = required_product_level(li, lj)
            if need == 0:
                continue
            prod = A.element(A.mul_vec({i: Fraction(1)}, {j: Fraction(1)}))
            got = prod.level()
            if got < need:
                witness = {
                    "i": i,
                    "j": j,
                    "levels": [str(li), str(lj)],
                    "productLevel": str(got),
                    "required": str(need),
                }
                break
        if witness:
            break
    axioms.append(
        {
            "axiom": 3,
            "statement": "level(a*b) >= min(level(a), level(b)) - 1, clamped at 0",
            "pass": witness is None,
            "witness": witness,
        }
    )

    return {"pass": all(a["pass"] for a in axioms), "axioms": axioms}


def matrix_algebra_of(A, n):
    """The n x n matrix algebra over A as a LocalisedAlgebra; the level
    of a matrix unit E_rc * e_k is the level of e_k (entrywise levels),
    and for metric bases the point supports carry over so chain words
    keep their joint-support locality."""
    if n < 1:
        raise ValueError("matrix size must be >= 1")
    dim = A.dim
    basis = []
    for r in range(n):
        for c in range(n):
            for k in range(dim):
                basis.append("E[%d,%d]%s" % (r, c, A.basis[k]))

    def idx(r, c, k):
        return (r * n + c) * dim + k

    mul = {}
    for r1 in range(n):
        for c1 in range(n):
            for k1 in range(dim):
                for c2 in range(n):
                    for k2 in range(dim):
                        vec = A.mulflat[k1 * dim + k2]
                        if not vec:
                            continue
                        mul[(idx(r1, c1, k1), idx(c1, c2, k2))] = {
                            idx(r1, c2, k): v for k, v in vec
                        }
    unit = {}
    for r in range(n):
        for k, v in A.unit.items():
            unit[idx(r, r, k)] = v

    alg = FiniteAlgebra(basis, mul, unit, validate=False)
    f = A.filtration
    if f.kind == "metric":
        pair_points = []
        for r in range(n):
            for c in range(n):
                for k in range(dim):
                    pair_points.append(f.pair_points[k])
        filt = MetricFiltration(
            f.points, f.dist, f.eps0, f.max_level, pair_points, f.schedule
        )
    elif f.kind == "table":
        filt = TableFiltration(
            [A._index_levels[k] for _ in range(n * n) for k in range(dim)],
            f.max_level,
        )
    else:
        filt = TrivialFiltration(f.max_level)
    out = LocalisedAlgebra(alg, filt, name="M%d(%s)" % (n, A.name or "A"))
    out.matrix_base = A
    out.matrix_size = n
    return out

class AlgebraHom:
    """Unital algebra homomorphism between two localised algebras,
    given by the images of the source basis."""

    def __init__(self, source, target, images, check=True, check_levels=False):
        self.source = source
        self.target = target
        self.images = [target.element(v) if isinstance(v, dict) else v
                       for v in images]
        if len(self.images) != source.dim:
            raise SizeMismatch("need one image per source basis element")
        if check:
            self.validate()
        if check_levels:
            self.validate_levels()

    def apply(self, x):
        out = self.target.zero()
        for i, c in x.coeffs.items():
            out = out + self.images[i].scale(c)
        return out

    def validate(self):
        one = self.apply(self.source.unit_element())
        if one != self.target.unit_element():
            raise UnitViolation("homomorphism does not preserve the unit")
        for i in range(self.source.dim):
            for j in range(self.source.dim):
                lhs = self.apply(self.source.element(
                    self.source.mul_vec({i: Fraction(1)}, {j: Fraction(1)})))
                rhs = self.images[i] * self.images[j]
                if lhs != rhs:
                    raise AssociativityViolation(
                        "homomorphism fails multiplicativity at basis pair "
                        "(%d, %d)" % (i, j))

    def validate_levels(self):
        for i in range(self.source.dim):
            src = self.source._index_levels[i]
            dst = self.images[i].level()
            if dst < src:
                raise NotLevelPreserving(
                    "image of basis %d has level %s, needs at least %s"
                    % (i, dst, src))

    def compose(self, other):
        """self after other."""
        return AlgebraHom(other.source, self.target,
                          [self.apply(im) for im in other.images], check=False)

    @classmethod
    def identity(cls, A):
        return cls(A, A, [A.basis_element(i) for i in range(A.dim)], check=False)
