"""The arc A∞-categories attached to a finite circle subset.

For a cyclic set S with points s_0 < … < s_n, the category has one object
per point, a strict unit per object, and one extra degree-one generator
v_i : s_i → s_{i+1} per consecutive pair (indices mod n+1) — one generator
per complementary arc of the circle.  The only nonzero compositions of
non-unit generators are the full cycles

    mu_{n+1}(v_{i+n}, …, v_{i+1}, v_i) = id_{s_i}   (first-applied v_i),

absorbing the implicit invertible degree-2 scalar into the unit in
two-periodic mode.  Variants: a zero object can be adjoined (all hom spaces
to/from it vanish), and an integer-graded version replaces |v_i| = 1 by
|v_i| = 1 − α_i, where α_i is the multiplicity of a fixed unordered point
pair c on the arc [s_i, s_{i+1}).

`build_CS` / `build_CS0` / `build_CS_graded` are the public constructors;
`corrupt_sign_cycle` / `drop_cycle` are deliberate-mutation hooks used by the
sensitivity suites.
"""

from __future__ import annotations

from typing import List, Optional, Tuple

from .ainf import AInfCategory, Combo
from .circle import CyclicSet, PointPair, alpha_weights
from .fields import QQ, Field


class _ZeroObject:
    """The adjoined zero object (all hom spaces to and from it vanish)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "0"


ZERO_OBJECT = _ZeroObject()


class CSCategory(AInfCategory):
    """Arc category of a finite circle subset (see module docstring)."""

    def __init__(self, cyc: CyclicSet, field: Field = QQ, with_zero: bool = False,
                 grading: Optional[PointPair] = None,
                 corrupt_sign_cycle: Optional[int] = None,
                 drop_cycle: Optional[int] = None):
        self.cyc = cyc
        self.field = field
        self.with_zero = with_zero
        self.grading = grading
        self.modulus = 0 if grading is not None else 2
        self.corrupt_sign_cycle = corrupt_sign_cycle
        self.drop_cycle = drop_cycle
        self.alpha = alpha_weights(cyc, grading) if grading is not None else None
        self._index = {a: i for i, a in enumerate(cyc.angles)}
        mode = "gr" if grading is not None else "per"
        zero = ",0" if with_zero else ""
        self.name = f"arc-cat[{cyc.format()}{zero};{mode}]"

    # -- structure -----------------------------------------------------------

    @property
    def size(self) -> int:
        return self.cyc.size

    def objects(self) -> List[object]:
        objs: List[object] = list(self.cyc.angles)
        if self.with_zero:
            objs.append(ZERO_OBJECT)
        return objs

    def index_of(self, x) -> int:
        return self._index[x]

    def object_at(self, i: int):
        return self.cyc.angles[i % self.size]

    def hom_basis(self, x, y) -> List[object]:
        if x is ZERO_OBJECT or y is ZERO_OBJECT:
            return []
        i, j = self._index[x], self._index[y]
        if self.size == 1:
            return [("id", 0), ("v", 0)]
        if j == i:
            return [("id", i)]
        if j == (i + 1) % self.size:
            return [("v", i)]
        return []

    def degree(self, x, y, label) -> int:
        kind, i = label
        if kind == "id":
            return 0
        return 1 if self.alpha is None else 1 - self.alpha[i]

    def unit(self, x) -> Combo:
        if x is ZERO_OBJECT:
            return {}
        return {("id", self._index[x]): self.field.one()}

    def is_unit_label(self, x, label) -> bool:
        return label[0] == "id"

    def is_zero_object(self, x) -> bool:
        return x is ZERO_OBJECT

    def mu_nonunit(self, seq: Tuple, objs: Tuple) -> Combo:
        # all entries are v-generators here; the only support is a full cycle
        if len(seq) != self.size:
            return {}
        i0 = seq[0][1]
        for k, lbl in enumerate(seq):
            if lbl != ("v", (i0 + k) % self.size):
                return {}
        if self.drop_cycle == i0:
            return {}
        c = self.field.one()
        if self.corrupt_sign_cycle == i0:
            c = self.field.neg(c)
        return {("id", i0): c}

    def nonzero_mu_words(self):
        """Every basis word with nonzero composition, with its object chain.

        Used by the support-driven twisted-complex law engine: composition of
        twisted-complex homs is nonzero only when the interleaved base word
        (differential components plus one letter per argument) lies in this
        list.  The list may over-cover (mutated instances keep full coverage).
        """
        n = self.size
        out = []
        for a in range(n):
            x = self.object_at(a)
            y = self.object_at(a + 1)
            v = ("v", a)
            out.append(((("id", a), ("id", a)), (x, x, x)))
            out.append(((("id", a), v), (x, x, y)))
            out.append(((v, ("id", (a + 1) % n)), (x, y, y)))
        if n == 1:
            out.append(((("v", 0),), (self.object_at(0), self.object_at(0))))
        else:
            for a in range(n):
                word = tuple(("v", (a + t) % n) for t in range(n))
                chain = tuple(self.object_at(a + t) for t in range(n + 1))
                out.append((word, chain))
        return out

    # -- law-checker candidate windows ---------------------------------------

    def inner_window_candidates(self, seq, objs):
        d = len(seq)
        size = self.size
        out = []
        for n in range(d - 1):
            if seq[n][0] == "id" or seq[n + 1][0] == "id":
                out.append((n, 2))
        if size == 1:
            for n in range(d):
                if seq[n][0] == "v":
                    out.append((n, 1))
        elif d >= size:
            for n in range(d - size + 1):
                i0 = seq[n][1]
                if all(seq[n + k] == ("v", (i0 + k) % size) for k in range(size)):
                    out.append((n, size))
        return out


def build_CS(S: CyclicSet, field: Field = QQ, **mutations) -> CSCategory:
    """Two-periodic arc category of S."""
    return CSCategory(S, field=field, with_zero=False, **mutations)


def build_CS0(S: CyclicSet, field: Field = QQ, **mutations) -> CSCategory:
    """Two-periodic arc category of S with a zero object adjoined."""
    return CSCategory(S, field=field, with_zero=True, **mutations)


def build_CS_graded(S: CyclicSet, c: PointPair, field: Field = QQ,
                    with_zero: bool = False, **mutations) -> CSCategory:
    """Integer-graded arc category of S with generator degrees 1 − α_i.

    The α-weights are the multiplicities of the point pair c on the
    complementary arcs; they sum to 2, so the full-cycle composition has
    map-degree 1 − n exactly as the grading requires.
    """
    return CSCategory(S, field=field, with_zero=with_zero, grading=c, **mutations)


class PeriodicizedCategory(AInfCategory):
    """Two-periodic collapse of an integer-graded category.

    Same objects, labels, and structure constants; degrees are compared mod 2.
    """

    def __init__(self, base: AInfCategory):
        if base.modulus != 0:
            raise ValueError("periodicize expects an integer-graded category")
        self.base = base
        self.field = base.field
        self.modulus = 2
        self.name = f"per({base.name})"

    def objects(self):
        return self.base.objects()

    def hom_basis(self, x, y):
        return self.base.hom_basis(x, y)

    def degree(self, x, y, label):
        return self.base.degree(x, y, label)

    def unit(self, x):
        return self.base.unit(x)

    def is_unit_label(self, x, label):
        return self.base.is_unit_label(x, label)

    def is_zero_object(self, x):
        return self.base.is_zero_object(x)

    def mu_nonunit(self, seq, objs):
        return self.base.mu_nonunit(seq, objs)

    @property
    def nonzero_mu_words(self):
        return self.base.nonzero_mu_words

    @property
    def inner_window_candidates(self):
        return self.base.inner_window_candidates
