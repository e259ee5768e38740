# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels.  Keep this file line-for-line in sync with pure.py
(same algorithms, same iteration order) so both backends return identical
objects; only the module constant differs."""

from math import gcd

BACKEND = "fast"


def _normalize_row(row):
    """Divide a row by the gcd of its entries, leading coefficient > 0."""
    if not row:
        return row
    g = 0
    for v in row.values():
        g = gcd(g, v)
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        for c in list(row):
            row[c] //= g
    return row


def _eliminate(row, piv, c):
    """Cancel column c of row against pivot row piv (leading column c)."""
    rv = row.pop(c)
    pv = piv[c]
    g = gcd(rv, pv)
    a = pv // g
    b = rv // g
    for pc, pvv in piv.items():
        if pc == c:
            continue
        cur = row.get(pc, 0) * a - pvv * b
        if cur:
            row[pc] = cur
        elif pc in row:
            del row[pc]
    if a != 1:
        for rc in row:
            if rc not in piv or rc == c:
                row[rc] = row[rc] * a
    return row


def echelon_insert(pivots, row):
    """Reduce row against pivots and insert it if independent.

    pivots maps leading column -> normalized row.  Returns the new pivot
    column, or None when the row was dependent.  The row dict is consumed.
    """
    while row:
        c = min(row)
        piv = pivots.get(c)
        if piv is None:
            pivots[c] = _normalize_row(row)
            return c
        _eliminate(row, piv, c)
        _normalize_row(row)
    return None


def echelon_reduce(pivots, row):
    """Reduce row against pivots without inserting; returns the residual.

    Empty residual means the row lies in the pivot span.  Columns whose
    leading position misses every pivot stop the reduction (echelon
    structure makes further elimination impossible for membership).
    """
    while row:
        c = min(row)
        piv = pivots.get(c)
        if piv is None:
            return row
        _eliminate(row, piv, c)
        _normalize_row(row)
    return row


def echelon_rank(rows):
    """Rank of a list of integer sparse rows.  Rows are consumed."""
    pivots = {}
    for row in rows:
        if row:
            echelon_insert(pivots, row)
    return len(pivots)


def b_apply(terms, mulflat, dim, wrap):
    """Hochschild boundary on a degree-p term dict {word: coeff}.

    word is a tuple of p+1 basis indices; mulflat[i*dim+j] lists the
    nonzero (k, scalar) of e_i e_j.  wrap=False computes b'.
    """
    out = {}
    for word, coeff in terms.items():
        p = len(word) - 1
        sign = 1
        for i in range(p):
            head = word[:i]
            tail = word[i + 2:]
            for k, s in mulflat[word[i] * dim + word[i + 1]]:
                w2 = head + (k,) + tail
                cur = out.get(w2, 0) + coeff * s * sign
                if cur:
                    out[w2] = cur
                elif w2 in out:
                    del out[w2]
            sign = -sign
        if wrap and p >= 1:
            mid = word[1:p]
            for k, s in mulflat[word[p] * dim + word[0]]:
                w2 = (k,) + mid
                cur = out.get(w2, 0) + coeff * s * sign
                if cur:
                    out[w2] = cur
                elif w2 in out:
                    del out[w2]
    return out


def d_apply(terms, unit_items):
    """Unit-insertion coboundary on a term dict: alternating insertion of
    the unit (given as its sparse expansion) into every slot."""
    out = {}
    for word, coeff in terms.items():
        sign = 1
        for i in range(len(word) + 1):
            head = word[:i]
            tail = word[i:]
            for u, s in unit_items:
                w2 = head + (u,) + tail
                cur = out.get(w2, 0) + coeff * s * sign
                if cur:
                    out[w2] = cur
                elif w2 in out:
                    del out[w2]
            sign = -sign
    return out
