"""Exact dense linear algebra over a :class:`~arccat.fields.Field`.

Matrices are lists of row lists of field scalars.  Everything is computed by
fraction-free-naive Gaussian elimination, which is fast enough for the small
hom spaces appearing here and is exact over both the rationals and prime
fields.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

from .fields import Field

Matrix = List[List[object]]


def zero_matrix(field: Field, rows: int, cols: int) -> Matrix:
    z = field.zero()
    return [[z for _ in range(cols)] for _ in range(rows)]

def identity_matrix(field: Field, n: int) -> Matrix:
    m = zero_matrix(field, n, n)
    for i in range(n):
        m[i][i] = field.one()
    return m

def copy_matrix(m: Sequence[Sequence[object]]) -> Matrix:
    return [list(row) for row in m]

def mat_mul(field: Field, a: Matrix, b: Matrix) -> Matrix:
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = zero_matrix(field, rows, cols)
    for i in range(rows):
        arow = a[i]
        orow = out[i]
        for k in range(inner):
            aik = arow[k]
            if field.is_zero(aik):
                continue
            brow = b[k]
            for j in range(cols):
                orow[j] = field.add(orow[j], field.mul(aik, brow[j]))
    return out


def rref(field: Field, mat: Sequence[Sequence[object]]) -> Tuple[Matrix, List[int]]:
    """Reduced row-echelon form; returns (rref matrix, pivot column indices)."""
    m = copy_matrix(mat)
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        pivot_row = None
        for i in range(r, rows):
            if not field.is_zero(m[i][c]):
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(inv, x) for x in m[r]]
        for i in range(rows):
            if i != r and not field.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(field: Field, mat: Sequence[Sequence[object]]) -> int:
    if not mat or not mat[0]:
        return 0
    return len(rref(field, mat)[1])


def nullspace_basis(field: Field, mat: Sequence[Sequence[object]]) -> List[List[object]]:
    """Basis of the right kernel (solutions x of mat @ x = 0), as vectors."""
    if not mat:
        return []
    cols = len(mat[0])
    red, pivots = rref(field, mat)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = []
    for fc in free:
        vec = [field.zero()] * cols
        vec[fc] = field.one()
        for r, pc in enumerate(pivots):
            vec[pc] = field.neg(red[r][fc])
        basis.append(vec)
    return basis


def solve(field: Field, mat: Sequence[Sequence[object]], rhs: Sequence[object]):
    """One solution x of mat @ x = rhs, or None if inconsistent."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    aug = [list(mat[i]) + [rhs[i]] for i in range(rows)]
    red, pivots = rref(field, aug)
    if cols in pivots:
        return None
    x = [field.zero()] * cols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][cols]
    return x


def in_span(field: Field, vectors: Sequence[Sequence[object]], target: Sequence[object]) -> bool:
    """Whether target lies in the span of the given vectors."""
    if all(field.is_zero(t) for t in target):
        return True
    if not vectors:
        return False
    cols = [[v[i] for v in vectors] for i in range(len(target))]
    return solve(field, cols, list(target)) is not None
