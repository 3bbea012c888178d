"""Exact linear algebra over integers and fractions."""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def clear_denominators(row):
    """Scale a Fraction row to coprime integers (sign preserved)."""
    den = 1
    for v in row:
        d = Fraction(v).denominator
        den = den * d // gcd(den, d)
    ints = [int(Fraction(v) * den) for v in row]
    return reduce_content(ints)


def reduce_content(ints):
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return list(ints)


def int_rank(rows):
    """Rank of an integer matrix, by fraction-free (Bareiss) elimination."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    nr, nc = len(m), len(m[0])
    rank = 0
    prev = 1
    for col in range(nc):
        piv = None
        for r in range(rank, nr):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][col]
        for r in range(rank + 1, nr):
            f = m[r][col]
            row = m[r]
            lead = m[rank]
            for c in range(col + 1, nc):
                row[c] = (p * row[c] - f * lead[c]) // prev
            row[col] = 0
        prev = p
        rank += 1
        if rank == nr:
            break
    return rank


def rref(rows):
    """Reduced row echelon form over Fractions; returns (rows, pivot_columns)."""
    m = [[Fraction(v) for v in r] for r in rows]
    if not m:
        return [], []
    nc = len(m[0])
    pivots = []
    r = 0
    for c in range(nc):
        piv = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace_int(rows):
    """Primitive integer basis of the right nullspace of an integer matrix."""
    if not rows:
        raise ValueError("nullspace of an empty matrix is ambiguous")
    nc = len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * nc
        vec[f] = Fraction(1)
        for i, p in enumerate(pivots):
            vec[p] = -red[i][f]
        basis.append(clear_denominators(vec))
    return basis


def solve(rows, rhs):
    """One exact solution of rows·x = rhs (free variables at 0), or None."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    nc = len(rows[0]) if rows else 0
    for r in red:
        if all(v == 0 for v in r[:nc]) and r[nc] != 0:
            return None
    x = [Fraction(0)] * nc
    for i, p in enumerate(pivots):
        if p == nc:
            return None
        x[p] = red[i][nc]
    return x


def inverse_and_det(rows):
    """(inverse, determinant) of a square Fraction matrix; det 0 -> (None, 0)."""
    n = len(rows)
    m = [[Fraction(v) for v in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(rows)]
    det = Fraction(1)
    for c in range(n):
        piv = None
        for i in range(c, n):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            return None, Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        m[c] = [v * inv for v in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return [r[n:] for r in m], det


def project_out_rowspace(vec, rows):
    """Component of vec orthogonal to the row space of ``rows`` (exact)."""
    basis, _ = rref(rows)
    if not basis:
        return [Fraction(v) for v in vec]
    # solve (B Bᵀ) z = B v, subtract Bᵀ z
    bv = [sum(r[i] * vec[i] for i in range(len(vec))) for r in basis]
    gram = [[sum(a * b for a, b in zip(r1, r2)) for r2 in basis] for r1 in basis]
    z = solve(gram, bv)
    out = [Fraction(v) for v in vec]
    for zi, r in zip(z, basis):
        for i in range(len(out)):
            out[i] -= zi * r[i]
    return out
