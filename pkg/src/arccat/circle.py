"""Cyclic combinatorics on the circle.

The circle is R/Z with exact ``Fraction`` coordinates in [0, 1).  This module
provides:

* :class:`CyclicSet` — a finite nonempty subset of the circle;
* :class:`CyclicMorphism` — a homotopy class of weakly monotone degree-one
  circle maps sending one finite subset into another, encoded by an integer
  lift; composition, enumeration, and the canonical
  surjective-then-injective factorization;
* :class:`PointPair` — an unordered pair of circle points (possibly equal);
* :class:`PathClass` — a homotopy class of paths of point pairs, encoded by
  its endpoints and an integer winding relative to the canonical
  minimal-travel representative; composition, reversal, and pushforward
  along a cyclic morphism;
* interval multiplicity weights of a pair relative to a cyclic set
  (:func:`alpha_weights`) and signed crossing counts of a path
  (:func:`beta_weights`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple, Union

from .errors import EmptySetError, MismatchError, NotComposableError, NotMonotoneError

Angle = Fraction


def normalize_angle(a) -> Fraction:
    """Reduce a rational number mod 1 into [0, 1)."""
    f = Fraction(a)
    return f - (f.numerator // f.denominator)


def parse_angle(text: str) -> Fraction:
    return normalize_angle(Fraction(text.strip()))


def format_angle(a: Fraction) -> str:
    return str(Fraction(a))


def in_half_open_arc(x: Fraction, a: Fraction, b: Fraction) -> bool:
    """Whether x lies on the counterclockwise arc [a, b).

    When a == b the arc is the whole circle (it wraps all the way around),
    which is the convention needed for one-point cyclic sets.
    """
    if a == b:
        return True
    if a < b:
        return a <= x < b
    return x >= a or x < b


@dataclass(frozen=True)
class CyclicSet:
    """A finite nonempty set of circle points, stored sorted in [0, 1).

    Input angles are reduced mod 1, deduplicated, and sorted.
    """

    angles: Tuple[Fraction, ...]

    def __post_init__(self):
        angs = tuple(sorted({normalize_angle(a) for a in self.angles}))
        if not angs:
            raise EmptySetError("cyclic set must be nonempty")
        object.__setattr__(self, "angles", angs)

    @staticmethod
    def of(points: Iterable) -> "CyclicSet":
        return CyclicSet(tuple(Fraction(p) for p in points))

    @staticmethod
    def equispaced(size: int) -> "CyclicSet":
        if size < 1:
            raise ValueError("size must be >= 1")
        return CyclicSet(tuple(Fraction(i, size) for i in range(size)))

    @staticmethod
    def parse(text: str) -> "CyclicSet":
        return CyclicSet(tuple(parse_angle(t) for t in text.split(",") if t.strip()))

    @property
    def size(self) -> int:
        return len(self.angles)

    def index(self, angle: Fraction) -> int:
        a = normalize_angle(angle)
        try:
            return self.angles.index(a)
        except ValueError:
            raise KeyError(f"{a} is not a point of {self}") from None

    def succ(self, i: int) -> int:
        return (i + 1) % self.size

    def contains(self, angle) -> bool:
        return normalize_angle(angle) in self.angles

    def arc_index(self, x: Fraction) -> int:
        """Index i such that x lies on the arc [angles[i], angles[i+1])."""
        x = normalize_angle(x)
        for i in range(self.size):
            if in_half_open_arc(x, self.angles[i], self.angles[(i + 1) % self.size]):
                return i
        raise AssertionError("unreachable: arcs cover the circle")

    def format(self) -> str:
        return ",".join(format_angle(a) for a in self.angles)

    def __repr__(self) -> str:
        return f"CyclicSet({self.format()})"


@dataclass(frozen=True)
class CyclicMorphism:
    """A monotone degree-one circle-map class sending ``source`` into ``target``.

    Encoded by the integer lift ``(f(0), ..., f(n))`` of the induced map on
    indices, where source indices enumerate the points in increasing angle
    order.  The lift must be weakly increasing and satisfy
    ``f(n) <= f(0) + target.size`` (degree-one periodicity); it is then
    renormalized by a multiple of ``target.size`` so that
    ``0 <= f(0) < target.size`` (equivalent lifts describe the same class).
    The underlying point map sends source point ``i`` to target point
    ``f(i) mod target.size``.
    """

    source: CyclicSet
    target: CyclicSet
    lift: Tuple[int, ...]

    def __post_init__(self):
        lift = tuple(int(x) for x in self.lift)
        n, m = self.source.size, self.target.size
        if len(lift) != n:
            raise MismatchError(f"lift length {len(lift)} != source size {n}")
        if any(lift[i] > lift[i + 1] for i in range(n - 1)):
            raise NotMonotoneError(f"lift not weakly increasing: {lift}")
        if lift[-1] > lift[0] + m:
            raise NotMonotoneError(f"lift violates degree-one bound: {lift}")
        shift = (lift[0] // m) * m
        if shift:
            lift = tuple(x - shift for x in lift)
        object.__setattr__(self, "lift", lift)

    # -- basic structure ----------------------------------------------------

    @staticmethod
    def identity(s: CyclicSet) -> "CyclicMorphism":
        return CyclicMorphism(s, s, tuple(range(s.size)))

    def is_identity(self) -> bool:
        return self.source == self.target and self.lift == tuple(range(self.source.size))

    def lift_at(self, i: int) -> int:
        """The periodic extension of the lift at an arbitrary integer index."""
        q, r = divmod(i, self.source.size)
        return self.lift[r] + q * self.target.size

    def index_map(self, i: int) -> int:
        return self.lift[i % self.source.size] % self.target.size

    def apply_angle(self, a: Fraction) -> Fraction:
        i = self.source.index(a)
        return self.target.angles[self.index_map(i)]

    def is_injective(self) -> bool:
        n, m = self.source.size, self.target.size
        strict = all(self.lift[i] < self.lift[i + 1] for i in range(n - 1))
        return strict and (self.lift[-1] - self.lift[0] <= m - 1)

    def is_surjective(self) -> bool:
        m = self.target.size
        return {x % m for x in self.lift} == set(range(m))

    def format(self) -> str:
        return "lift=(" + ",".join(str(x) for x in self.lift) + ")"

    def __repr__(self) -> str:
        return (f"CyclicMorphism({self.source.format()} -> "
                f"{self.target.format()}, {self.format()})")

    # -- the canonical piecewise-linear representative ----------------------

    def lifted_target_angle(self, i: int) -> Fraction:
        """Real-valued lift of the image of source point i (i in Z)."""
        m = self.target.size
        v = self.lift_at(i)
        q, r = divmod(v, m)
        return self.target.angles[r] + q

    def pl_eval(self, x: Fraction) -> Fraction:
        """Evaluate the canonical piecewise-linear degree-one lift at real x.

        Breakpoints are the source points (plus integer translates); between
        consecutive breakpoints the map interpolates affinely between the
        lifted image values.  The result is equivariant: pl_eval(x+1) =
        pl_eval(x) + 1.
        """
        x = Fraction(x)
        a0 = self.source.angles[0]
        k = (x - a0).numerator // (x - a0).denominator  # floor(x - a0)
        y = x - k  # in [a0, a0 + 1)
        n = self.source.size
        ext_angles = list(self.source.angles) + [a0 + 1]
        i = max(j for j in range(n) if ext_angles[j] <= y)
        left_a, right_a = ext_angles[i], ext_angles[i + 1]
        left_v = self.lifted_target_angle(i)
        right_v = self.lifted_target_angle(i + 1) if i + 1 < n else self.lifted_target_angle(0) + 1
        if right_a == left_a:  # size-1 source: one breakpoint per period
            v = left_v
        else:
            v = left_v + (y - left_a) * (right_v - left_v) / (right_a - left_a)
        return v + k


def compose(g: CyclicMorphism, f: CyclicMorphism) -> CyclicMorphism:
    """The composite g after f (f: S -> T, g: T -> U)."""
    if f.target != g.source:
        raise NotComposableError(
            f"cannot compose: inner target {f.target.format()} != "
            f"inner source {g.source.format()}")
    raw = tuple(g.lift_at(f.lift[i]) for i in range(f.source.size))
    return CyclicMorphism(f.source, g.target, raw)


def _as_cyclic_set(arg: Union[CyclicSet, int]) -> CyclicSet:
    return CyclicSet.equispaced(arg) if isinstance(arg, int) else arg


def enumerate_morphisms(source: Union[CyclicSet, int],
                        target: Union[CyclicSet, int]) -> List[CyclicMorphism]:
    """All morphism classes from source to target, in lexicographic lift order.

    Integer arguments stand for the equispaced set of that size.
    """
    s, t = _as_cyclic_set(source), _as_cyclic_set(target)
    n, m = s.size, t.size
    out = []
    for a0 in range(m):
        for rest in itertools.combinations_with_replacement(range(a0, a0 + m + 1), n - 1):
            out.append(CyclicMorphism(s, t, (a0,) + rest))
    return out


def classify_and_factor(f: CyclicMorphism) -> Tuple[CyclicMorphism, CyclicMorphism, CyclicSet]:
    """Canonical factorization f = (injective) after (surjective).

    Returns ``(f_surj, f_inj, image)`` where ``image`` is the image subset of
    the target, ``f_surj : source ->> image`` carries the lift of f, and
    ``f_inj : image -> target`` is the inclusion with its identity-style lift.
    """
    t = f.target
    m = t.size
    image_indices = sorted({x % m for x in f.lift})
    image = CyclicSet(tuple(t.angles[j] for j in image_indices))
    q = image.size
    f_inj = CyclicMorphism(image, t, tuple(image_indices))
    pos = {j: p for p, j in enumerate(image_indices)}
    surj_lift = tuple(pos[x % m] + (x // m) * q for x in f.lift)
    f_surj = CyclicMorphism(f.source, image, surj_lift)
    # sanity: the factorization recomposes to f
    assert compose(f_inj, f_surj) == f
    assert f_surj.is_surjective() and f_inj.is_injective()
    return f_surj, f_inj, image


# ---------------------------------------------------------------------------
# Point pairs and path classes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PointPair:
    """An unordered pair of circle points; the two points may coincide."""

    points: Tuple[Fraction, Fraction]

    def __post_init__(self):
        pts = tuple(sorted(normalize_angle(p) for p in self.points))
        if len(pts) != 2:
            raise MismatchError("a point pair has exactly two points")
        object.__setattr__(self, "points", pts)

    @staticmethod
    def of(a, b) -> "PointPair":
        return PointPair((Fraction(a), Fraction(b)))

    @staticmethod
    def parse(text: str) -> "PointPair":
        parts = [parse_angle(t) for t in text.split(",") if t.strip()]
        if len(parts) != 2:
            raise ValueError(f"expected two angles, got {text!r}")
        return PointPair((parts[0], parts[1]))

    def format(self) -> str:
        return ",".join(format_angle(p) for p in self.points)

    def __repr__(self) -> str:
        return f"PointPair({self.format()})"


def _ccw_travel(a: Fraction, b: Fraction) -> Fraction:
    """Counterclockwise travel from a to b, in [0, 1)."""
    return normalize_angle(b - a)


def canonical_strands(start: PointPair, end: PointPair) -> List[Tuple[Fraction, Fraction]]:
    """The minimal-travel matching of start points to end points.

    Returns two ``(start_angle, ccw_travel)`` strands, travels in [0, 1).
    Of the two possible matchings the one with smaller total travel is
    chosen; ties go to the increasing-angle pairing.
    """
    (a1, a2), (b1, b2) = start.points, end.points
    straight = [(a1, _ccw_travel(a1, b1)), (a2, _ccw_travel(a2, b2))]
    crossed = [(a1, _ccw_travel(a1, b2)), (a2, _ccw_travel(a2, b1))]
    t_straight = straight[0][1] + straight[1][1]
    t_crossed = crossed[0][1] + crossed[1][1]
    return straight if t_straight <= t_crossed else crossed


def canonical_travel(start: PointPair, end: PointPair) -> Fraction:
    return sum(t for _, t in canonical_strands(start, end))


@dataclass(frozen=True)
class PathClass:
    """A homotopy class of paths of point pairs.

    The class is encoded by its endpoints and an integer ``winding``: the
    path is homotopic to the canonical minimal-travel representative followed
    by ``winding`` extra full counterclockwise circuits of one point
    (negative winding = clockwise circuits).
    """

    start: PointPair
    end: PointPair
    winding: int = 0

    @staticmethod
    def constant(pair: PointPair) -> "PathClass":
        return PathClass(pair, pair, 0)

    def displacement(self) -> Fraction:
        """Total counterclockwise travel of both points along the class."""
        return canonical_travel(self.start, self.end) + self.winding

    def reverse(self) -> "PathClass":
        w = -self.displacement() - canonical_travel(self.end, self.start)
        assert w.denominator == 1
        return PathClass(self.end, self.start, int(w))

    def __repr__(self) -> str:
        return f"PathClass({self.start.format()} -> {self.end.format()}, w={self.winding})"


def compose_paths(second: PathClass, first: PathClass) -> PathClass:
    """The concatenation (first, then second) of composable path classes."""
    if first.end != second.start:
        raise NotComposableError("paths not composable: endpoints disagree")
    w = (first.displacement() + second.displacement()
         - canonical_travel(first.start, second.end))
    assert w.denominator == 1
    return PathClass(first.start, second.end, int(w))


def pushforward_pair(f: CyclicMorphism, pair: PointPair) -> PointPair:
    """Image of a point pair under the canonical PL representative of f."""
    return PointPair(tuple(normalize_angle(f.pl_eval(p)) for p in pair.points))


def pushforward_path(f: CyclicMorphism, path: PathClass) -> PathClass:
    """Image of a path class under the canonical PL representative of f."""
    new_start = pushforward_pair(f, path.start)
    new_end = pushforward_pair(f, path.end)
    disp = Fraction(path.winding)
    for a, t in canonical_strands(path.start, path.end):
        disp += f.pl_eval(a + t) - f.pl_eval(a)
    w = disp - canonical_travel(new_start, new_end)
    assert w.denominator == 1
    return PathClass(new_start, new_end, int(w))


# ---------------------------------------------------------------------------
# Interval weights
# ---------------------------------------------------------------------------


def alpha_weights(s: CyclicSet, pair: PointPair) -> List[int]:
    """Multiplicity of the pair on each arc [s_i, s_{i+1}); sums to 2."""
    out = []
    for i in range(s.size):
        a, b = s.angles[i], s.angles[(i + 1) % s.size]
        out.append(sum(1 for p in pair.points if in_half_open_arc(p, a, b)))
    assert sum(out) == 2
    return out


def beta_weights(s: CyclicSet, path: PathClass) -> List[int]:
    """Signed count of forward crossings of each point of s along the path.

    A crossing of s_i is a passage from the arc before s_i to the arc
    starting at s_i (landing exactly on s_i counts as having crossed).  Each
    winding circuit contributes one crossing of every point; negative winding
    subtracts.
    """
    beta = [path.winding] * s.size
    for a, t in canonical_strands(path.start, path.end):
        for i, p in enumerate(s.angles):
            first = _ccw_travel(a, p)
            if first == 0:
                first = Fraction(1)  # starting on the point: next crossing is a full loop away
            if t >= first:
                extra = t - first
                beta[i] += extra.numerator // extra.denominator + 1
    return beta
