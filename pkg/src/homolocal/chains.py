"""Tensor chains and the boundary-type operators.

A degree-p chain is a sparse rational combination of basis words of
length p+1 over a fixed algebra.  Operators:

  b       Hochschild boundary (b' drops the wrap-around term)
  d       unit-insertion coboundary (alternating insertion of 1)
  T, N    signed cyclic rotation and the cyclic norm
  B       Connes boundary s*N on normalized chains
  sigma   1 - (db + bd), a chain map chain-homotopic to the identity
  Pi      (1 - bd) sigma^k, idempotent projection onto non-degenerate
          chains, commuting with both b and d
  b~, d~  modified boundaries: b (resp. d) composed with alternating
          binomial series in db (resp. bd); b~^2 = 0 on all chains and
          the anticommutations with d (resp. b) hold on the Pi-range

Degree bookkeeping: b lowers by one, d and B raise by one.  b at degree
zero is the zero map internally; the public operator refuses it.

Normalization: a word is degenerate when a unit letter sits anywhere
except position 0.  When the unit is a basis element the normalized
projection just drops degenerate words; otherwise the Pi projection
plays that role and "normalized" means Pi-invariant.
"""

from fractions import Fraction
from math import comb, inf

from . import _kernels
from .errors import DegreeZero, NotNormalized


class Chain:
    """Sparse chain: terms maps word tuples (len degree+1) to Fraction."""

    __slots__ = ("algebra", "degree", "terms")

    def __init__(self, algebra, degree, terms=None):
        self.algebra = algebra
        self.degree = degree
        self.terms = {}
        if terms:
            for w, c in terms.items():
                if c:
                    assert len(w) == degree + 1
                    self.terms[w] = Fraction(c)

    @classmethod
    def _raw(cls, algebra, degree, terms):
        out = cls.__new__(cls)
        out.algebra = algebra
        out.degree = degree
        out.terms = terms
        return out

    def copy(self):
        return Chain._raw(self.algebra, self.degree, dict(self.terms))

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, Chain)
            and self.algebra is other.algebra
            and self.degree == other.degree
            and self.terms == other.terms
        )

    def __add__(self, other):
        assert self.algebra is other.algebra and self.degree == other.degree
        out = dict(self.terms)
        for w, c in other.terms.items():
            cur = out.get(w, 0) + c
            if cur:
                out[w] = cur
            elif w in out:
                del out[w]
        return Chain._raw(self.algebra, self.degree, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return Chain._raw(self.algebra, self.degree, {})
        return Chain._raw(
            self.algebra, self.degree, {w: v * c for w, v in self.terms.items()}
        )

    def __neg__(self):
        return self.scale(-1)

    def level(self):
        """Locality level: min over words of the word level (joint
        support for metric models, min letter level otherwise)."""
        return min(
            (self.algebra.word_level(w) for w in self.terms),
            default=inf,
        )

    def restrict_level(self, mu):
        """Drop words below locality level mu."""
        keep = {
            w: c for w, c in self.terms.items() if self.algebra.word_level(w) >= mu
        }
        return Chain._raw(self.algebra, self.degree, keep)

    def to_doc(self):
        return {
            "degree": self.degree,
            "terms": [
                {"word": list(w), "coeff": "%d/%d" % (c.numerator, c.denominator)
                 if c.denominator != 1 else str(c.numerator)}
                for w, c in sorted(self.terms.items())
            ],
        }

    @classmethod
    def from_doc(cls, algebra, doc):
        terms = {}
        for t in doc["terms"]:
            terms[tuple(int(i) for i in t["word"])] = Fraction(t["coeff"])
        return cls(algebra, int(doc["degree"]), terms)

    def __repr__(self):
        return "Chain(deg=%d, %d terms)" % (self.degree, len(self.terms))


def zero_chain(algebra, degree):
    return Chain._raw(algebra, degree, {})


def tensor_of_elements(elements):
    """Chain a_0 (x) ... (x) a_p from algebra elements: expand every
    sparse factor into basis words."""
    algebra = elements[0].algebra
    words = {(): Fraction(1)}
    for el in elements:
        assert el.algebra is algebra
        nxt = {}
        for w, c in words.items():
            for i, v in el.coeffs.items():
                w2 = w + (i,)
                cur = nxt.get(w2, 0) + c * v
                if cur:
                    nxt[w2] = cur
                elif w2 in nxt:
                    del nxt[w2]
        words = nxt
    return Chain._raw(algebra, len(elements) - 1, words)


def random_chain(algebra, degree, rng, nterms=4, span=3):
    """Deterministic pseudo-random chain for suites: nterms words with
    small integer coefficients in [-span, span]."""
    terms = {}
    for _ in range(nterms):
        w = tuple(rng.randrange(algebra.dim) for _ in range(degree + 1))
        c = 0
        while c == 0:
            c = rng.randint(-span, span)
        cur = terms.get(w, 0) + Fraction(c)
        if cur:
            terms[w] = cur
        elif w in terms:
            del terms[w]
    return Chain._raw(algebra, degree, terms)


def _b(c, wrap=True):
    """Internal b / b': zero map at degree 0."""
    if c.degree == 0:
        return Chain._raw(c.algebra, -1, {})
    terms = _kernels.b_apply(c.terms, c.algebra.mulflat, c.algebra.dim, wrap)
    return Chain._raw(c.algebra, c.degree - 1, terms)


def hochschild_b(c, prime=False):
    """Hochschild boundary; prime=True computes b' (no wrap term)."""
    if c.degree == 0:
        raise DegreeZero("b is undefined at degree 0")
    return _b(c, wrap=not prime)


def _unit_items(algebra):
    return tuple(sorted(algebra.unit.items()))


def as_coboundary_d(c, level=None):
    """Unit-insertion coboundary.  With level=mu the output is truncated
    to words of locality level >= mu (the local subcomplex)."""
    terms = _kernels.d_apply(c.terms, _unit_items(c.algebra))
    out = Chain._raw(c.algebra, c.degree + 1, terms)
    if level is not None:
        out = out.restrict_level(level)
    return out


def cyclic_T(c):
    """Signed cyclic rotation: T(a_0 (x) ... (x) a_p) brings a_p in
    front with sign (-1)^p."""
    p = c.degree
    sign = -1 if p % 2 else 1
    out = {}
    for w, v in c.terms.items():
        w2 = (w[p],) + w[:p]
        cur = out.get(w2, 0) + v * sign
        if cur:
            out[w2] = cur
        elif w2 in out:
            del out[w2]
    return Chain._raw(c.algebra, p, out)


def cyclic_N(c):
    """Cyclic norm N = sum of T^i, i = 0..degree."""
    acc = c
    cur = c
    for _ in range(c.degree):
        cur = cyclic_T(cur)
        acc = acc + cur
    return acc


def cyclic_T_N(c):
    return cyclic_T(c), cyclic_N(c)


def _unit_basis_index(algebra):
    """Basis index of the unit when the unit IS a basis element."""
    items = list(algebra.unit.items())
    if len(items) == 1 and items[0][1] == 1:
        return items[0][0]
    return None


def is_normalized(c):
    """True when the chain carries no degenerate part.  Word test when
    the unit is a basis element; Pi-invariance otherwise."""
    ub = _unit_basis_index(c.algebra)
    if ub is not None:
        return all(ub not in w[1:] for w in c.terms)
    return pi_idempotent(c) == c


def normalize(c):
    """Project onto the normalized (non-degenerate) part."""
    ub = _unit_basis_index(c.algebra)
    if ub is not None:
        keep = {w: v for w, v in c.terms.items() if ub not in w[1:]}
        return Chain._raw(c.algebra, c.degree, keep)
    return pi_idempotent(c)


def connes_B(c, check=True):
    """Connes boundary on the normalized complex: prepend the unit to
    every signed cyclic rotation (s N), then project the result back to
    its normalized part."""
    if check and not is_normalized(c):
        raise NotNormalized("B needs a normalized chain")
    n = c.degree
    out = {}
    unit_items = _unit_items(c.algebra)
    for w, v in c.terms.items():
        for j in range(n + 1):
            rot = w[j:] + w[:j]
            sign = -1 if (n * j) % 2 else 1
            for u, s in unit_items:
                w2 = (u,) + rot
                cur = out.get(w2, 0) + v * s * sign
                if cur:
                    out[w2] = cur
                elif w2 in out:
                    del out[w2]
    return normalize(Chain._raw(c.algebra, n + 1, out))


def sigma(c):
    """sigma = 1 - (db + bd)."""
    return c - as_coboundary_d(_b(c)) - _b(as_coboundary_d(c))


def pi_idempotent(c, k=None):
    """Pi = (1 - bd) sigma^k with k >= degree (default: the degree).
    Idempotent, commutes with b and d, kills degenerate words."""
    if k is None:
        k = c.degree
    if k < c.degree:
        raise ValueError("power k must be at least the chain degree")
    cur = c
    for _ in range(k):
        cur = sigma(cur)
    return cur - _b(as_coboundary_d(cur))


def modified_b_tilde(c):
    """b~ at degree n: b applied to the alternating binomial series
    sum_{k=1}^{n} (-1)^(k-1) C(n,k) (db)^(k-1)."""
    n = c.degree
    if n == 0:
        raise DegreeZero("b~ is undefined at degree 0")
    acc = zero_chain(c.algebra, n)
    power = c
    for k in range(1, n + 1):
        coeff = Fraction(comb(n, k))
        if k % 2 == 0:
            coeff = -coeff
        acc = acc + power.scale(coeff)
        if k < n:
            power = as_coboundary_d(_b(power))
            if power.is_zero():
                break
    return _b(acc)


def modified_d_tilde(c):
    """d~ at degree n: d applied to sum_{k=1}^{n+1} (-1)^(k-1) C(n+1,k)
    (bd)^(k-1).  The series runs one step past the degree; that is what
    makes b d~ + d~ b vanish on the Pi-range."""
    n = c.degree
    acc = zero_chain(c.algebra, n)
    power = c
    for k in range(1, n + 2):
        coeff = Fraction(comb(n + 1, k))
        if k % 2 == 0:
            coeff = -coeff
        acc = acc + power.scale(coeff)
        if k < n + 1:
            power = _b(as_coboundary_d(power))
            if power.is_zero():
                break
    return as_coboundary_d(acc)


def combinatorial_lemma_sums(n):
    """The two exact sums behind the modified-boundary telescoping:
    first = 2n + sum_{k=2}^{2n} (-1)^(k-1) C(2n,k) 2^(k-1)  (= 0),
    second = sum_{k=2}^{2n} (-1)^k C(2n,k) 2^(k-2)          (= n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    s1 = 2 * n
    s2 = 0
    for k in range(2, 2 * n + 1):
        c = comb(2 * n, k)
        s1 += (-1) ** (k - 1) * c * 2 ** (k - 1)
        s2 += (-1) ** k * c * 2 ** (k - 2)
    return s1, s2
