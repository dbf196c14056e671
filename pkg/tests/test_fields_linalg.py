"""Exact field arithmetic and dense linear algebra."""

from fractions import Fraction

import pytest

from arccat.fields import QQ, PrimeField, parse_field
from arccat.linalg import (identity_matrix, in_span, mat_mul, nullspace_basis,
                           rank, rref, solve, zero_matrix)


def test_rationals_arithmetic():
    a, b = QQ.from_int(3), Fraction(1, 2)
    assert QQ.add(a, b) == Fraction(7, 2)
    assert QQ.mul(a, QQ.inv(b)) == 6
    assert QQ.is_zero(QQ.sub(a, a))
    assert QQ.neg(a) == -3


def test_prime_field_arithmetic():
    F = PrimeField(7)
    assert F.add(F.from_int(5), F.from_int(4)) == 2
    assert F.mul(F.inv(F.from_int(3)), F.from_int(3)) == F.one()
    assert F.is_zero(F.from_int(14))
    with pytest.raises(ZeroDivisionError):
        F.inv(F.zero())


def test_prime_field_rejects_composite():
    with pytest.raises(ValueError):
        PrimeField(6)
    with pytest.raises(ValueError):
        PrimeField(1)


def test_parse_field():
    assert parse_field("QQ") is QQ
    assert parse_field("GF(5)").p == 5
    assert parse_field("GF:11").p == 11
    with pytest.raises(ValueError):
        parse_field("R")


def frac_matrix(rows):
    return [[Fraction(x) for x in row] for row in rows]


def test_rref_and_rank():
    m = frac_matrix([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    r, pivots = rref(QQ, m)
    assert pivots == [0, 1]
    assert rank(QQ, m) == 2
    assert rank(QQ, identity_matrix(QQ, 4)) == 4
    assert rank(QQ, zero_matrix(QQ, 3, 5)) == 0


def test_nullspace_and_solve_consistency():
    m = frac_matrix([[1, 2, 3], [0, 1, 1]])
    null = nullspace_basis(QQ, m)
    assert len(null) == 1  # rank 2, 3 columns
    for vec in null:
        prod = mat_mul(QQ, m, [[x] for x in vec])
        assert all(QQ.is_zero(entry[0]) for entry in prod)
    b = [Fraction(6), Fraction(2)]
    x = solve(QQ, m, b)
    assert x is not None
    prod = mat_mul(QQ, m, [[v] for v in x])
    assert [row[0] for row in prod] == b


def test_solve_inconsistent():
    m = frac_matrix([[1, 1], [1, 1]])
    assert solve(QQ, m, [Fraction(0), Fraction(1)]) is None


def test_in_span():
    vecs = [[Fraction(1), Fraction(0)], [Fraction(1), Fraction(1)]]
    assert in_span(QQ, vecs, [Fraction(3), Fraction(2)])
    assert not in_span(QQ, vecs[:1], [Fraction(0), Fraction(1)])


def test_prime_field_linear_algebra():
    F = PrimeField(5)
    m = [[F.from_int(2), F.from_int(1)], [F.from_int(4), F.from_int(2)]]
    # second row = 2 x first row mod 5
    assert rank(F, m) == 1
    null = nullspace_basis(F, m)
    assert len(null) == 1
    for vec in null:
        prod = mat_mul(F, m, [[x] for x in vec])
        assert all(F.is_zero(e[0]) for e in prod)
