"""Generic A∞ machinery: composition evaluation, law checking, cohomology."""

import json
from fractions import Fraction

import pytest

from arccat.ainf import (AInfCategory, InhomogeneousInputError,
                         NotComposableError, check_ainf_equations,
                         default_max_len, hom_cohomology, mu_eval)
from arccat.circle import CyclicSet
from arccat.cs_categories import build_CS
from arccat.fields import QQ


class UnitsOnlyCategory(AInfCategory):
    """Two objects, only identity morphisms: every non-unit composition zero."""

    def __init__(self):
        self.field = QQ
        self.modulus = 2
        self.name = "units-only"

    def objects(self):
        return ["a", "b"]

    def hom_basis(self, x, y):
        return [("id", x)] if x == y else []

    def degree(self, x, y, label):
        return 0

    def unit(self, x):
        return {("id", x): QQ.one()}

    def is_unit_label(self, x, label):
        return True

    def mu_nonunit(self, seq, objs):
        return {}


def test_units_only_category_passes():
    r = check_ainf_equations(UnitsOnlyCategory(), max_len=6)
    assert r.ok
    assert r.checked > 0


def test_mu1_vanishes_on_multi_point_sets():
    for n in (2, 3, 4):
        C = build_CS(CyclicSet.equispaced(n))
        for i in range(n):
            x, y = C.object_at(i), C.object_at(i + 1)
            out = mu_eval(C, 1, ({("v", i): Fraction(1)},), (x, y))
            assert out == {}


def test_mu2_unit_laws_both_sides():
    C = build_CS(CyclicSet.equispaced(3))
    x, y = C.object_at(0), C.object_at(1)
    v = {("v", 0): Fraction(2)}
    unit_x, unit_y = C.unit(x), C.unit(y)
    # unit applied first: plain pass-through
    assert mu_eval(C, 2, (unit_x, v), (x, x, y)) == v
    # unit applied second: sign (-1)^{|a|}, and |v| = 1
    assert mu_eval(C, 2, (v, unit_y), (x, y, y)) == {("v", 0): Fraction(-2)}


def test_mu2_nonunits_vanish_for_three_points():
    C = build_CS(CyclicSet.equispaced(3))
    x, y, z = C.object_at(0), C.object_at(1), C.object_at(2)
    out = mu_eval(C, 2, ({("v", 0): Fraction(1)}, {("v", 1): Fraction(1)}), (x, y, z))
    assert out == {}


def test_mu_eval_validates_composability_and_homogeneity():
    C = build_CS(CyclicSet.equispaced(3))
    x, y = C.object_at(0), C.object_at(1)
    with pytest.raises(NotComposableError):
        mu_eval(C, 1, ({("v", 1): Fraction(1)},), (x, y))  # wrong hom space
    C1 = build_CS(CyclicSet.equispaced(1))
    p = C1.object_at(0)
    with pytest.raises(InhomogeneousInputError):
        mu_eval(C1, 1, ({("id", 0): Fraction(1), ("v", 0): Fraction(1)},), (p, p))


def test_default_max_len():
    C = build_CS(CyclicSet.equispaced(3))
    assert default_max_len(C) == 8


def test_check_flags_corrupted_full_cycle():
    C = build_CS(CyclicSet.equispaced(3), corrupt_sign_cycle=1)
    r = check_ainf_equations(C, max_len=8)
    assert not r.ok
    # the witness pinpoints a tuple containing the corrupted cycle
    joined = json.dumps([f.witness for f in r.failures])
    assert "('v', 1)" in joined


def test_candidate_windows_agree_with_dense_enumeration():
    def witness_set(result):
        return sorted(json.dumps(f.witness, sort_keys=True, default=str)
                      for f in result.failures)

    for n in (1, 2, 3):
        for corrupt in (None, 0):
            C = build_CS(CyclicSet.equispaced(n), corrupt_sign_cycle=corrupt)
            hooked = check_ainf_equations(C, max_len=2 * n + 2)
            D = build_CS(CyclicSet.equispaced(n), corrupt_sign_cycle=corrupt)
            D.inner_window_candidates = None
            dense = check_ainf_equations(D, max_len=2 * n + 2)
            assert hooked.checked == dense.checked
            assert witness_set(hooked) == witness_set(dense)


def test_hom_cohomology_single_point_acyclic():
    C = build_CS(CyclicSet.equispaced(1))
    p = C.object_at(0)
    assert hom_cohomology(C, p, p) == {}


def test_hom_cohomology_two_points():
    C = build_CS(CyclicSet.equispaced(2))
    s0, s1 = C.object_at(0), C.object_at(1)
    assert hom_cohomology(C, s0, s0) == {0: 1}
    assert hom_cohomology(C, s1, s1) == {0: 1}
    assert hom_cohomology(C, s0, s1) == {1: 1}
    assert hom_cohomology(C, s1, s0) == {1: 1}


def test_hom_cohomology_independent_of_basis_order():
    class ReversedBasis(type(build_CS(CyclicSet.equispaced(1)))):
        def hom_basis(self, x, y):
            return list(reversed(super().hom_basis(x, y)))

    C = build_CS(CyclicSet.equispaced(1))
    R = ReversedBasis(CyclicSet.equispaced(1))
    p = C.object_at(0)
    assert hom_cohomology(C, p, p) == hom_cohomology(R, p, p)
    r = check_ainf_equations(R, max_len=4)
    assert r.ok
