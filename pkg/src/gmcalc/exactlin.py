"""Exact linear algebra over the rationals.

Vectors are tuples of Fractions, matrices are tuples of row tuples.
Everything here is pure and deterministic; no floating point.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vec = tuple[Fraction, ...]
Mat = tuple[tuple[Fraction, ...], ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def vec(xs: Iterable) -> Vec:
    return tuple(frac(x) for x in xs)


def zeros(n: int) -> Vec:
    return (ZERO,) * n


def vadd(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vsub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vneg(u: Vec) -> Vec:
    return tuple(-a for a in u)


def vscale(c, u: Vec) -> Vec:
    c = frac(c)
    return tuple(c * a for a in u)


def dot(u: Vec, v: Vec) -> Fraction:
    return sum((a * b for a, b in zip(u, v, strict=True)), ZERO)


def is_zero_vec(u: Vec) -> bool:
    return all(a == 0 for a in u)


def mat(rows: Iterable[Iterable]) -> Mat:
    return tuple(vec(r) for r in rows)


def identity(n: int) -> Mat:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def transpose(m: Mat) -> Mat:
    return tuple(zip(*m)) if m else ()


def mat_vec(m: Mat, v: Vec) -> Vec:
    return tuple(dot(row, v) for row in m)


def mat_mul(a: Mat, b: Mat) -> Mat:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def det(m: Mat) -> Fraction:
    """Determinant by fraction Gaussian elimination with partial pivoting."""
    n = len(m)
    rows = [list(r) for r in m]
    sign = 1
    result = ONE
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            return ZERO
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            sign = -sign
        p = rows[col][col]
        result *= p
        for r in range(col + 1, n):
            if rows[r][col] != 0:
                f = rows[r][col] / p
                for c in range(col, n):
                    rows[r][c] -= f * rows[col][c]
    return result * sign


def rref(rows: Sequence[Vec]) -> list[Vec]:
    """Reduced row echelon form with zero rows dropped (canonical basis of the row space)."""
    work = [list(r) for r in rows]
    nrows = len(work)
    ncols = len(work[0]) if work else 0
    lead = 0
    out: list[list[Fraction]] = []
    for col in range(ncols):
        pivot = next((r for r in range(lead, nrows) if work[r][col] != 0), None)
        if pivot is None:
            continue
        work[lead], work[pivot] = work[pivot], work[lead]
        p = work[lead][col]
        work[lead] = [x / p for x in work[lead]]
        for r in range(nrows):
            if r != lead and work[r][col] != 0:
                f = work[r][col]
                work[r] = [a - f * b for a, b in zip(work[r], work[lead])]
        lead += 1
        if lead == nrows:
            break
    for r in range(lead):
        out.append(work[r])
    return [tuple(r) for r in out]


def rank(rows: Sequence[Vec]) -> int:
    return len(rref(rows)) if rows else 0


def kernel(rows: Sequence[Vec], n: int) -> list[Vec]:
    """Canonical basis of {x : row . x = 0 for every row}, vectors of length n."""
    red = rref(rows) if rows else []
    pivots = []
    for r in red:
        pivots.append(next(i for i, x in enumerate(r) if x != 0))
    free = [i for i in range(n) if i not in pivots]
    basis = []
    for f in free:
        x = [ZERO] * n
        x[f] = ONE
        for r, p in zip(red, pivots):
            x[p] = -r[f]
        basis.append(tuple(x))
    return basis


def solve(m: Mat, b: Vec) -> Vec | None:
    """One solution of m x = b, or None if inconsistent (m need not be square)."""
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    aug = [list(r) + [bv] for r, bv in zip(m, b, strict=True)]
    lead = 0
    pivots = []
    for col in range(ncols):
        pivot = next((r for r in range(lead, nrows) if aug[r][col] != 0), None)
        if pivot is None:
            continue
        aug[lead], aug[pivot] = aug[pivot], aug[lead]
        p = aug[lead][col]
        aug[lead] = [x / p for x in aug[lead]]
        for r in range(nrows):
            if r != lead and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * bb for a, bb in zip(aug[r], aug[lead])]
        pivots.append(col)
        lead += 1
    for r in range(lead, nrows):
        if aug[r][ncols] != 0:
            return None
    x = [ZERO] * ncols
    for r, p in enumerate(pivots):
        x[p] = aug[r][ncols]
    return tuple(x)


def mat_inv(m: Mat) -> Mat:
    n = len(m)
    aug = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def sym_pair(S: Mat, u: Vec, v: Vec) -> Fraction:
    return dot(mat_vec(S, u), v)


def gram_matrix(vectors: Sequence[Vec], S: Mat) -> Mat:
    return tuple(tuple(sym_pair(S, u, v) for v in vectors) for u in vectors)


def gram_det(vectors: Sequence[Vec], S: Mat) -> Fraction:
    if not vectors:
        return ONE
    return det(gram_matrix(vectors, S))


def project_onto(v: Vec, basis: Sequence[Vec], S: Mat) -> Vec:
    """Gram-orthogonal projection of v onto span(basis)."""
    if not basis:
        return zeros(len(v))
    g = gram_matrix(basis, S)
    rhs = tuple(sym_pair(S, b, v) for b in basis)
    coeff = solve(g, rhs)
    if coeff is None:
        raise ValueError("degenerate basis in projection")
    out = zeros(len(v))
    for c, b in zip(coeff, basis):
        out = vadd(out, vscale(c, b))
    return out


def coords_in_basis(v: Vec, basis: Sequence[Vec]) -> Vec | None:
    """Coordinates of v in the given basis of a subspace, or None if v is outside."""
    if not basis:
        return () if is_zero_vec(v) else None
    cols = transpose(tuple(basis))
    return solve(cols, v)


def primitive_ray(v: Vec) -> Vec:
    """Canonical representative of the ray through v: integral, coprime, first nonzero > 0."""
    if is_zero_vec(v):
        raise ValueError("zero vector has no ray")
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    ints = [x // g for x in ints]
    first = next(x for x in ints if x != 0)
    if first < 0:
        ints = [-x for x in ints]
    return tuple(Fraction(x) for x in ints)


def common_denominator(vectors: Sequence[Vec]) -> int:
    den = 1
    for v in vectors:
        for x in v:
            den = den * x.denominator // gcd(den, x.denominator)
    return den
