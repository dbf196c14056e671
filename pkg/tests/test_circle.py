"""Cyclic sets, monotone circle-map classes, point pairs, and path classes."""

import itertools
from fractions import Fraction
from math import comb

import pytest

from arccat.circle import (CyclicMorphism, CyclicSet, PathClass, PointPair,
                           alpha_weights, beta_weights, canonical_strands,
                           classify_and_factor, compose, compose_paths,
                           enumerate_morphisms, pushforward_pair,
                           pushforward_path)
from arccat.errors import (EmptySetError, MismatchError, NotComposableError,
                           NotMonotoneError)

# ---------------------------------------------------------------------------
# Cyclic sets
# ---------------------------------------------------------------------------


def test_cyclic_set_normalizes_dedupes_sorts():
    s = CyclicSet.of(["3/2", "0", "1/2", "1/2"])
    assert s.angles == (Fraction(0), Fraction(1, 2))
    assert s.size == 2


def test_cyclic_set_empty_rejected():
    with pytest.raises(EmptySetError):
        CyclicSet(())


def test_cyclic_set_parse_format_roundtrip():
    s = CyclicSet.parse("0,1/3,2/3")
    assert s.format() == "0,1/3,2/3"
    assert CyclicSet.parse(s.format()) == s


def test_equispaced():
    s = CyclicSet.equispaced(4)
    assert s.angles == (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))


def test_arc_index_half_open():
    s = CyclicSet.parse("0,1/2")
    assert s.arc_index(Fraction(0)) == 0
    assert s.arc_index(Fraction(1, 4)) == 0
    assert s.arc_index(Fraction(1, 2)) == 1
    assert s.arc_index(Fraction(3, 4)) == 1


# ---------------------------------------------------------------------------
# Cyclic morphisms: lifts, normalization, composition
# ---------------------------------------------------------------------------


def test_morphism_renormalizes_lift():
    f = CyclicMorphism(CyclicSet.equispaced(2), CyclicSet.equispaced(3), (4, 5))
    assert f.lift == (1, 2)
    g = CyclicMorphism(CyclicSet.equispaced(2), CyclicSet.equispaced(3), (-2, 0))
    assert g.lift == (1, 3)


def test_morphism_validation_errors():
    s2, s3 = CyclicSet.equispaced(2), CyclicSet.equispaced(3)
    with pytest.raises(MismatchError):
        CyclicMorphism(s2, s3, (0,))
    with pytest.raises(NotMonotoneError):
        CyclicMorphism(s2, s3, (2, 1))
    with pytest.raises(NotMonotoneError):
        CyclicMorphism(s2, s3, (0, 4))  # exceeds degree-one bound


def test_identity_and_composition_unit_laws():
    s = CyclicSet.equispaced(3)
    t = CyclicSet.equispaced(2)
    for f in enumerate_morphisms(s, t):
        assert compose(CyclicMorphism.identity(t), f) == f
        assert compose(f, CyclicMorphism.identity(s)) == f


def test_compose_rejects_mismatched():
    f = CyclicMorphism.identity(CyclicSet.equispaced(2))
    g = CyclicMorphism.identity(CyclicSet.equispaced(3))
    with pytest.raises(NotComposableError):
        compose(g, f)


def test_composition_associative_sizes_up_to_3():
    sets = [CyclicSet.equispaced(k) for k in (1, 2, 3)]
    for s, t, u, w in itertools.product(sets, repeat=4):
        for f in enumerate_morphisms(s, t):
            for g in enumerate_morphisms(t, u):
                gf = compose(g, f)
                for h in enumerate_morphisms(u, w):
                    assert compose(h, gf) == compose(compose(h, g), f)


# ---------------------------------------------------------------------------
# Enumeration counts (frozen oracle: m * C(m+n-1, n-1) classes from size n
# to size m, proven by stars-and-bars over normalized lifts; cross-checked
# against an independent lattice-path recursion)
# ---------------------------------------------------------------------------


def lattice_count(n, m):
    """Independent count of weakly increasing (a_0..a_{n-1}), 0 <= a_0 < m,
    a_{n-1} <= a_0 + m, by direct recursion."""

    def rec(prefix):
        if len(prefix) == n:
            return 1
        lo = prefix[-1]
        hi = prefix[0] + m
        return sum(rec(prefix + [v]) for v in range(lo, hi + 1))

    return sum(rec([a0]) for a0 in range(m))


@pytest.mark.parametrize("n,m,count", [
    (1, 1, 1), (2, 1, 2), (1, 2, 2),
    (2, 2, 6), (3, 1, 3), (1, 3, 3),
    (3, 2, 12), (2, 3, 12), (3, 3, 30),
    (4, 2, 20), (2, 4, 20), (4, 4, 140),
])
def test_enumeration_counts_frozen(n, m, count):
    morphisms = enumerate_morphisms(n, m)
    assert len(morphisms) == count
    assert count == m * comb(m + n - 1, n - 1)
    assert count == lattice_count(n, m)
    assert len(set(morphisms)) == count  # all distinct after normalization


def test_injective_count_sizes_up_to_5_is_129():
    total = 0
    for n in range(1, 6):
        for m in range(n, 6):
            injs = [f for f in enumerate_morphisms(n, m) if f.is_injective()]
            # frozen closed form: m * C(m-1, n-1)
            assert len(injs) == m * comb(m - 1, n - 1)
            total += len(injs)
    assert total == 129


def test_surjective_counts_cross_checked():
    def surj_count_direct(n, m):
        """Independent count: weakly increasing normalized lifts covering
        every residue class mod m."""
        count = 0
        for a0 in range(m):
            for rest in itertools.combinations_with_replacement(
                    range(a0, a0 + m + 1), n - 1):
                lift = (a0,) + rest
                if {x % m for x in lift} == set(range(m)):
                    count += 1
        return count

    for n in range(1, 5):
        for m in range(1, n + 1):
            surjs = [f for f in enumerate_morphisms(n, m) if f.is_surjective()]
            assert len(surjs) == surj_count_direct(n, m)


def test_injective_iff_distinct_image_points():
    for n, m in [(2, 3), (3, 3), (3, 4)]:
        for f in enumerate_morphisms(n, m):
            image_size = len({x % m for x in f.lift})
            assert f.is_injective() == (image_size == f.source.size)


# ---------------------------------------------------------------------------
# Factorization
# ---------------------------------------------------------------------------


def test_factorization_recomposes_sizes_up_to_4():
    for n in range(1, 5):
        for m in range(1, 5):
            for f in enumerate_morphisms(n, m):
                f_surj, f_inj, image = classify_and_factor(f)
                assert compose(f_inj, f_surj) == f
                assert f_surj.is_surjective()
                assert f_inj.is_injective()
                assert image.size == len({x % m for x in f.lift})


def test_factorization_of_extremes():
    s3, s1 = CyclicSet.equispaced(3), CyclicSet.equispaced(1)
    collapse = CyclicMorphism(s3, s1, (0, 0, 0))
    f_surj, f_inj, image = classify_and_factor(collapse)
    assert image == s1
    assert f_inj.is_identity()
    inj = CyclicMorphism(s1, s3, (1,))
    f_surj, f_inj, image = classify_and_factor(inj)
    assert f_surj.is_identity() is False or f_surj.source == f_surj.target
    assert image.angles == (Fraction(1, 3),)
    assert f_inj.lift == (1,)


# ---------------------------------------------------------------------------
# The canonical piecewise-linear representative
# ---------------------------------------------------------------------------


def test_pl_eval_interpolates_and_is_equivariant():
    f = CyclicMorphism(CyclicSet.equispaced(2), CyclicSet.equispaced(4), (0, 2))
    assert f.pl_eval(Fraction(0)) == 0
    assert f.pl_eval(Fraction(1, 2)) == Fraction(1, 2)
    assert f.pl_eval(Fraction(1, 4)) == Fraction(1, 4)
    for x in (Fraction(1, 8), Fraction(2, 3), Fraction(9, 10)):
        assert f.pl_eval(x + 1) == f.pl_eval(x) + 1
        assert f.pl_eval(x - 3) == f.pl_eval(x) - 3


def test_pl_eval_constant_on_collapsed_arcs():
    s2, s1 = CyclicSet.equispaced(2), CyclicSet.equispaced(1)
    f = CyclicMorphism(s2, s1, (0, 0))
    # both marked points to 0; the second arc absorbs the full turn
    assert f.pl_eval(Fraction(0)) == 0
    assert f.pl_eval(Fraction(1, 4)) == 0
    assert f.pl_eval(Fraction(1, 2)) == 0
    assert f.pl_eval(Fraction(3, 4)) == Fraction(1, 2)


def test_pl_eval_size_one_source():
    f = CyclicMorphism(CyclicSet.equispaced(1), CyclicSet.equispaced(2), (1,))
    assert f.pl_eval(Fraction(0)) == Fraction(1, 2)
    assert f.pl_eval(Fraction(1, 2)) == 1
    assert f.pl_eval(Fraction(99, 100)) < Fraction(3, 2)


# ---------------------------------------------------------------------------
# Point pairs, path classes, pushforwards
# ---------------------------------------------------------------------------


def test_point_pair_sorts_and_allows_coincident():
    p = PointPair.of("3/4", "1/4")
    assert p.points == (Fraction(1, 4), Fraction(3, 4))
    q = PointPair.of("1/4", "1/4")
    assert q.points == (Fraction(1, 4), Fraction(1, 4))


def test_canonical_strands_minimal_travel():
    start = PointPair.of(0, "1/2")
    end = PointPair.of("1/8", "5/8")
    strands = dict(canonical_strands(start, end))
    assert strands[Fraction(0)] == Fraction(1, 8)
    assert strands[Fraction(1, 2)] == Fraction(1, 8)


def test_path_reverse_is_involution_and_negates_displacement():
    gamma = PathClass(PointPair.of(0, "1/4"), PointPair.of("1/2", "3/4"), winding=1)
    rev = gamma.reverse()
    assert rev.reverse() == gamma
    assert rev.displacement() == -gamma.displacement()


def test_path_compose_with_reverse_is_constant():
    gamma = PathClass(PointPair.of(0, "1/3"), PointPair.of("1/6", "2/3"), winding=-2)
    loop = compose_paths(gamma.reverse(), gamma)
    assert loop == PathClass.constant(gamma.start)


def test_path_composition_adds_windings_on_loops():
    p = PointPair.of(0, "1/2")
    a = PathClass(p, p, winding=1)
    b = PathClass(p, p, winding=2)
    assert compose_paths(b, a) == PathClass(p, p, winding=3)


def test_pushforward_respects_identity_and_composition():
    s4 = CyclicSet.equispaced(4)
    ident = CyclicMorphism.identity(s4)
    gamma = PathClass(PointPair.of("1/8", "3/8"), PointPair.of("5/8", "7/8"), winding=1)
    assert pushforward_path(ident, gamma) == gamma

    f = CyclicMorphism(s4, CyclicSet.equispaced(2), (0, 0, 1, 1))
    g = CyclicMorphism(CyclicSet.equispaced(2), CyclicSet.equispaced(1), (0, 0))
    via_two = pushforward_path(g, pushforward_path(f, gamma))
    direct = pushforward_path(compose(g, f), gamma)
    assert via_two == direct


def test_pushforward_commutes_with_reversal():
    s3 = CyclicSet.equispaced(3)
    f = CyclicMorphism(s3, CyclicSet.equispaced(2), (0, 1, 1))
    gamma = PathClass(PointPair.of("1/6", "1/2"), PointPair.of("2/3", "5/6"), winding=0)
    assert pushforward_path(f, gamma.reverse()) == pushforward_path(f, gamma).reverse()


# ---------------------------------------------------------------------------
# Interval weights
# ---------------------------------------------------------------------------


def test_alpha_both_points_one_arc():
    s = CyclicSet.parse("0,1/2")
    assert alpha_weights(s, PointPair.of("1/4", "1/4")) == [2, 0]


def test_alpha_closed_open_boundary():
    s = CyclicSet.parse("0,1/2")
    assert alpha_weights(s, PointPair.of("1/2", "3/4")) == [0, 2]


def test_alpha_sums_to_two_various():
    s = CyclicSet.parse("0,1/5,2/5,4/5")
    for c in [PointPair.of(0, "1/2"), PointPair.of("1/10", "9/10"),
              PointPair.of("2/5", "2/5")]:
        a = alpha_weights(s, c)
        assert sum(a) == 2
        assert all(x in (0, 1, 2) for x in a)


def test_beta_constant_path_zero():
    s = CyclicSet.equispaced(3)
    gamma = PathClass.constant(PointPair.of("1/6", "1/2"))
    assert beta_weights(s, gamma) == [0, 0, 0]


def test_beta_winding_one_all_ones():
    s = CyclicSet.equispaced(4)
    p = PointPair.of("1/8", "5/8")
    assert beta_weights(s, PathClass(p, p, winding=1)) == [1, 1, 1, 1]


def test_beta_single_crossing():
    s = CyclicSet.parse("0,1/2")
    gamma = PathClass(PointPair.of(0, "1/4"), PointPair.of(0, "3/4"), winding=0)
    assert beta_weights(s, gamma) == [0, 1]


def test_beta_winding_difference_is_constant_vector():
    s = CyclicSet.parse("0,1/3,1/2,5/6")
    start, end = PointPair.of("1/4", "2/3"), PointPair.of("1/12", "11/12")
    base = beta_weights(s, PathClass(start, end, winding=0))
    for w in (-2, -1, 1, 3):
        shifted = beta_weights(s, PathClass(start, end, winding=w))
        assert [b - a for b, a in zip(shifted, base)] == [w] * s.size


def test_beta_additive_under_composition():
    s = CyclicSet.parse("0,1/4,1/2,3/4")
    g1 = PathClass(PointPair.of("1/8", "3/8"), PointPair.of("5/8", "7/8"), winding=1)
    g2 = PathClass(PointPair.of("5/8", "7/8"), PointPair.of("1/8", "1/16"), winding=-1)
    total = compose_paths(g2, g1)
    b1, b2 = beta_weights(s, g1), beta_weights(s, g2)
    assert beta_weights(s, total) == [x + y for x, y in zip(b1, b2)]


def test_alpha_shift_identity_under_pushforward():
    # alpha weights of the endpoints of a path differ by consecutive beta
    # differences: alpha_start[i] - alpha_end[i] = beta[i+1] - beta[i]
    s = CyclicSet.parse("0,1/3,2/3")
    start, end = PointPair.of("1/6", "1/2"), PointPair.of("5/6", "1/12")
    gamma = PathClass(start, end, winding=0)
    a0 = alpha_weights(s, start)
    a1 = alpha_weights(s, end)
    beta = beta_weights(s, gamma)
    n = s.size
    for i in range(n):
        assert a0[i] - a1[i] == beta[(i + 1) % n] - beta[i]
