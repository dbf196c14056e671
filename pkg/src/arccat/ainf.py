"""Strictly unital A∞-categories and A∞-functors over an exact field.

Conventions
-----------

* A composition argument tuple is stored *first-applied first*: ``seq[0]`` is
  a morphism X_0 → X_1, ``seq[1]`` is X_1 → X_2, and so on.  The classical
  right-to-left display of a d-fold composition corresponds to ``reversed(seq)``.
* A morphism is a :data:`Combo`: a dict mapping hom-basis labels to nonzero
  field scalars (the empty dict is zero).  Basis labels are hashable values
  interpreted by the owning category.
* Degrees are integers; in two-periodic mode (``modulus == 2``) they are
  compared mod 2 and the implicit degree-2 invertible scalar is absorbed into
  basis labels.
* Strict unitality is centralized: :meth:`AInfCategory.mu` applies the unit
  rules (binary composition with a unit = ±identity on the other argument,
  all other arities with a unit = 0) itself, so concrete categories only
  describe compositions of non-unit generators.  Likewise
  :meth:`AInfFunctor.comp` centralizes unit behavior of functor components.

The quadratic A∞-equation checked here, written with first-applied-first
windows, is: for every argument tuple ``seq`` of length d,

    sum over 1 ≤ m ≤ d and 0 ≤ n ≤ d − m of
        (−1)^{|seq[0]| + … + |seq[n−1]| − n}
        · mu(seq[:n] + (mu(seq[n:n+m]),) + seq[n+m:])    =    0,

and the A∞-functor equation compares the partition sum
``sum mu(F(block_1), …, F(block_r))`` (no signs) against the window sum
``sum ± F(seq with an inner mu substituted)`` with the same signs as above.
"""

from __future__ import annotations

import itertools
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import (  # noqa: F401  (re-exported)
    InhomogeneousInputError,
    MismatchError,
    NotComposableError,
)
from .fields import Field
from .linalg import rank as matrix_rank
from .report import CheckResult, timed

Combo = Dict[object, object]  # basis label -> field scalar


# ---------------------------------------------------------------------------
# Combo helpers
# ---------------------------------------------------------------------------


def combo_add_into(field: Field, acc: Combo, label, coeff) -> None:
    cur = acc.get(label)
    if cur is None:
        if not field.is_zero(coeff):
            acc[label] = coeff
        return
    s = field.add(cur, coeff)
    if field.is_zero(s):
        del acc[label]
    else:
        acc[label] = s


def combo_scale(field: Field, combo: Combo, coeff) -> Combo:
    if field.is_zero(coeff):
        return {}
    return {l: field.mul(coeff, c) for l, c in combo.items()}


def combo_sub(field: Field, a: Combo, b: Combo) -> Combo:
    out = dict(a)
    for l, c in b.items():
        combo_add_into(field, out, l, field.neg(c))
    return out


# ---------------------------------------------------------------------------
# Categories
# ---------------------------------------------------------------------------


class AInfCategory:
    """Base class: finite-object strictly unital A∞-category.

    Subclasses implement the hom structure and the non-unit composition rule
    ``mu_nonunit``; everything else (units, degree assertions, law checking)
    is generic.
    """

    field: Field
    modulus: int  # 0 (integer grading) or 2 (two-periodic)
    name: str = "category"

    # -- structure hooks -----------------------------------------------------

    def objects(self) -> List[object]:
        raise NotImplementedError

    def hom_basis(self, x, y) -> List[object]:
        raise NotImplementedError

    def degree(self, x, y, label) -> int:
        raise NotImplementedError

    def unit(self, x) -> Combo:
        raise NotImplementedError

    def is_unit_label(self, x, label) -> bool:
        """Whether the label is the strict unit basis element at object x."""
        return False

    def is_zero_object(self, x) -> bool:
        """Whether x is an adjoined zero object (empty hom spaces)."""
        return False

    def mu_nonunit(self, seq: Tuple, objs: Tuple) -> Combo:
        """Composition of a unit-free basis tuple; see class docstring."""
        raise NotImplementedError

    # optional hook used by the law checker: windows (n, m) whose inner
    # composition could be nonzero.  Must be complete (may over-approximate).
    inner_window_candidates = None

    # optional hook replacing the dense law checker (support-driven engines).
    equation_check_hook = None

    # optional support data: callable yielding (word, object_chain) pairs
    # covering every basis word with nonzero composition (may over-cover).
    nonzero_mu_words = None

    # -- generic machinery ---------------------------------------------------

    def reduce_degree(self, k: int) -> int:
        return k % 2 if self.modulus == 2 else k

    def mu(self, seq: Sequence, objs: Sequence) -> Combo:
        """Composition of a basis tuple with centralized strict units.

        ``seq`` is first-applied-first; ``objs`` is the object chain, one
        longer than ``seq``.
        """
        d = len(seq)
        unit_at = [self.is_unit_label(objs[i], seq[i]) for i in range(d)]
        if any(unit_at):
            if d != 2:
                return {}
            if unit_at[0]:
                # the unit is composed first: mu_2(a, id_source) = a
                return {seq[1]: self.field.one()}
            # the unit is composed second: mu_2(id_target, a) = (−1)^{|a|} a
            dega = self.degree(objs[0], objs[1], seq[0])
            c = self.field.one() if dega % 2 == 0 else self.field.neg(self.field.one())
            return {seq[0]: c}
        out = self.mu_nonunit(tuple(seq), tuple(objs))
        if out:
            self._assert_mu_degree(seq, objs, out)
        return out

    def _assert_mu_degree(self, seq, objs, out: Combo) -> None:
        d = len(seq)
        expected = sum(self.degree(objs[i], objs[i + 1], seq[i]) for i in range(d)) + 2 - d
        for lbl in out:
            got = self.degree(objs[0], objs[-1], lbl)
            if self.reduce_degree(got - expected) != 0:
                raise AssertionError(
                    f"{self.name}: mu degree violation: output {lbl} has degree {got}, "
                    f"expected {expected} (mod {self.modulus}) on {seq}")

    def mu_combos(self, args: Sequence[Combo], objs: Sequence) -> Combo:
        """Multilinear extension of mu to combo-valued arguments."""
        total: Combo = {}
        if any(not a for a in args):
            return total
        for labels in itertools.product(*[list(a.items()) for a in args]):
            coeff = self.field.one()
            for _, c in labels:
                coeff = self.field.mul(coeff, c)
            val = self.mu(tuple(l for l, _ in labels), objs)
            for lbl, c in val.items():
                combo_add_into(self.field, total, lbl, self.field.mul(coeff, c))
        return total

    def hom_adjacency(self) -> Dict[object, List[Tuple[object, List[object]]]]:
        objs = self.objects()
        adj: Dict[object, List[Tuple[object, List[object]]]] = {}
        for x in objs:
            row = []
            for y in objs:
                basis = self.hom_basis(x, y)
                if basis:
                    row.append((y, basis))
            adj[x] = row
        return adj


def default_max_len(cat: AInfCategory) -> int:
    return 2 * len(cat.objects()) + 2


def mu_eval(cat: AInfCategory, d: int, args: Sequence[Combo], objs: Sequence) -> Combo:
    """Public multilinear composition with validation.

    ``args`` are homogeneous combos, first-applied first; ``objs`` is the
    object chain (length d+1).
    """
    if d != len(args) or len(objs) != d + 1:
        raise NotComposableError(f"expected {d} composable arguments with {d+1} objects")
    for i, a in enumerate(args):
        basis = set(cat.hom_basis(objs[i], objs[i + 1]))
        degs = set()
        for lbl in a:
            if lbl not in basis:
                raise NotComposableError(
                    f"label {lbl} not in hom({objs[i]}, {objs[i+1]})")
            degs.add(cat.reduce_degree(cat.degree(objs[i], objs[i + 1], lbl)))
        if len(degs) > 1:
            raise InhomogeneousInputError(f"argument {i} mixes degrees {degs}")
    return cat.mu_combos(args, objs)


# ---------------------------------------------------------------------------
# Law checking: the quadratic A∞-equations
# ---------------------------------------------------------------------------


def iter_composable_seqs(cat: AInfCategory, max_len: int,
                         objects: Optional[Sequence] = None,
                         unit_budget: Optional[int] = None):
    """Yield (objs, seq, degs) for every composable basis tuple up to max_len.

    ``unit_budget`` caps the number of unit entries per tuple (None = no cap).
    """
    objs_list = list(objects) if objects is not None else cat.objects()
    adj = {}
    for x in objs_list:
        row = []
        for y in objs_list:
            basis = cat.hom_basis(x, y)
            if basis:
                row.append((y, basis))
        adj[x] = row

    def extend(chain, seq, degs, units):
        if seq:
            yield tuple(chain), tuple(seq), tuple(degs)
        if len(seq) == max_len:
            return
        x = chain[-1]
        for y, basis in adj[x]:
            for lbl in basis:
                is_u = cat.is_unit_label(x, lbl)
                if is_u and unit_budget is not None and units >= unit_budget:
                    continue
                chain.append(y)
                seq.append(lbl)
                degs.append(cat.degree(x, y, lbl))
                yield from extend(chain, seq, degs, units + (1 if is_u else 0))
                chain.pop()
                seq.pop()
                degs.pop()

    for x0 in objs_list:
        yield from extend([x0], [], [], 0)


def equation_total(cat: AInfCategory, seq: Tuple, objs: Tuple, degs: Tuple) -> Combo:
    """Left-hand side of the quadratic A∞-equation on one basis tuple."""
    fld = cat.field
    d = len(seq)
    psum = [0] * (d + 1)
    for i in range(d):
        psum[i + 1] = psum[i] + degs[i]
    if cat.inner_window_candidates is not None:
        windows = cat.inner_window_candidates(seq, objs)
    else:
        windows = [(n, m) for m in range(1, d + 1) for n in range(0, d - m + 1)]
    total: Combo = {}
    for n, m in windows:
        inner = cat.mu(seq[n:n + m], objs[n:n + m + 1])
        if not inner:
            continue
        neg = (psum[n] - n) % 2 == 1
        head, tail = seq[:n], seq[n + m:]
        head_o, tail_o = objs[:n + 1], objs[n + m:]
        for lbl, coeff in inner.items():
            out = cat.mu(head + (lbl,) + tail, head_o + tail_o)
            if not out:
                continue
            c = fld.neg(coeff) if neg else coeff
            for l2, c2 in out.items():
                combo_add_into(fld, total, l2, fld.mul(c, c2))
    return total


def check_ainf_equations(cat: AInfCategory, max_len: Optional[int] = None,
                         objects: Optional[Sequence] = None,
                         unit_budget: Optional[int] = None,
                         force_dense: bool = False) -> CheckResult:
    """Verify the quadratic A∞-equations on every composable basis tuple.

    Categories may install ``equation_check_hook`` (an exact support-driven
    engine used for twisted-complex categories, where dense tuple enumeration
    is infeasible); ``force_dense`` bypasses it for cross-validation.
    """
    if cat.equation_check_hook is not None and not force_dense:
        return cat.equation_check_hook(max_len=max_len, objects=objects)
    if max_len is None:
        max_len = default_max_len(cat)
    result = CheckResult("ainf_equations", params={
        "category": cat.name, "max_len": max_len,
        "unit_budget": unit_budget, "field": cat.field.name})
    with timed(result):
        for objs, seq, degs in iter_composable_seqs(cat, max_len, objects, unit_budget):
            total = equation_total(cat, seq, objs, degs)
            result.checked += 1
            if total:
                result.fail("ainf_equation_violation",
                            objects=[str(o) for o in objs],
                            tuple=[str(t) for t in seq],
                            residue={str(k): str(v) for k, v in total.items()})
    return result


# ---------------------------------------------------------------------------
# Functors
# ---------------------------------------------------------------------------


class AInfFunctor:
    """Base class: strictly unital A∞-functor stored by generator components.

    Implementations provide the object map ``obj`` and the components
    ``comp_nonunit`` on unit-free basis tuples of the source; unit behavior
    (F_1(unit) = unit of the image, higher components vanish on tuples
    containing units) is centralized in :meth:`comp`.
    """

    source: AInfCategory
    target: AInfCategory
    name: str = "functor"

    def obj(self, x):
        raise NotImplementedError

    def comp_nonunit(self, seq: Tuple, objs: Tuple) -> Combo:
        raise NotImplementedError

    def extended(self):
        """Extension of this functor to twisted complexes over its source."""
        raise NotImplementedError(f"{self.name} does not support extension")

    def comp(self, seq: Sequence, objs: Sequence) -> Combo:
        d = len(seq)
        unit_at = [self.source.is_unit_label(objs[i], seq[i]) for i in range(d)]
        if any(unit_at):
            if d == 1:
                return self.target.unit(self.obj(objs[0]))
            return {}
        out = self.comp_nonunit(tuple(seq), tuple(objs))
        if out:
            self._assert_comp_degree(seq, objs, out)
        return out

    def _assert_comp_degree(self, seq, objs, out: Combo) -> None:
        d = len(seq)
        expected = sum(self.source.degree(objs[i], objs[i + 1], seq[i])
                       for i in range(d)) + 1 - d
        tx, ty = self.obj(objs[0]), self.obj(objs[-1])
        for lbl in out:
            got = self.target.degree(tx, ty, lbl)
            if self.target.reduce_degree(got - expected) != 0:
                raise AssertionError(
                    f"{self.name}: component degree violation: {lbl} has degree "
                    f"{got}, expected {expected} on {seq}")

    def comp_combo_slot(self, head: Tuple, head_objs: Tuple, slot: Combo,
                        tail: Tuple, tail_objs: Tuple) -> Combo:
        """Component applied to a tuple with one combo-valued slot (linear)."""
        total: Combo = {}
        for lbl, coeff in slot.items():
            val = self.comp(head + (lbl,) + tail, head_objs + tail_objs)
            for l2, c2 in val.items():
                combo_add_into(self.target.field, total, l2,
                               self.target.field.mul(coeff, c2))
        return total


def functor_partition_sum(F: AInfFunctor, seq: Tuple, objs: Tuple) -> Combo:
    """sum over partitions of mu_target(F(block_1), ..., F(block_r)).

    Partitions of the tuple into consecutive nonempty blocks, first-applied
    first; blocks with zero component value are skipped (they contribute 0).
    """
    d = len(seq)
    fld = F.target.field
    block_val: Dict[Tuple[int, int], Combo] = {}
    for i in range(d):
        for j in range(i + 1, d + 1):
            block_val[(i, j)] = F.comp(seq[i:j], objs[i:j + 1])

    total: Combo = {}

    def rec(start: int, blocks: List[Combo], chain: List):
        if start == d:
            val = F.target.mu_combos(blocks, chain)
            for lbl, c in val.items():
                combo_add_into(fld, total, lbl, c)
            return
        for end in range(start + 1, d + 1):
            v = block_val[(start, end)]
            if not v:
                continue
            blocks.append(v)
            chain.append(F.obj(objs[end]))
            rec(end, blocks, chain)
            blocks.pop()
            chain.pop()

    rec(0, [], [F.obj(objs[0])])
    return total


def functor_window_sum(F: AInfFunctor, seq: Tuple, objs: Tuple, degs: Tuple) -> Combo:
    """sum over windows of ±F(seq with an inner mu substituted)."""
    fld = F.target.field
    d = len(seq)
    psum = [0] * (d + 1)
    for i in range(d):
        psum[i + 1] = psum[i] + degs[i]
    if F.source.inner_window_candidates is not None:
        windows = F.source.inner_window_candidates(seq, objs)
    else:
        windows = [(n, m) for m in range(1, d + 1) for n in range(0, d - m + 1)]
    total: Combo = {}
    for n, m in windows:
        inner = F.source.mu(seq[n:n + m], objs[n:n + m + 1])
        if not inner:
            continue
        neg = (psum[n] - n) % 2 == 1
        val = F.comp_combo_slot(seq[:n], objs[:n + 1], inner, seq[n + m:], objs[n + m:])
        for lbl, c in val.items():
            combo_add_into(fld, total, lbl, fld.neg(c) if neg else c)
    return total


def check_functor(F: AInfFunctor, max_len: Optional[int] = None,
                  unit_budget: Optional[int] = None,
                  objects: Optional[Sequence] = None) -> CheckResult:
    """Verify the A∞-functor equations on composable source basis tuples.

    ``unit_budget`` caps units per tuple; with centralized strict-unit
    handling the equations on unit-heavy tuples are forced by the unit laws
    (validated exhaustively on small instances), so large suites cap units
    for speed without loss of coverage of the category-specific structure.
    """
    if max_len is None:
        max_len = default_max_len(F.source)
    result = CheckResult("functor_equations", params={
        "functor": F.name, "max_len": max_len, "unit_budget": unit_budget})
    fld = F.target.field
    with timed(result):
        for objs, seq, degs in iter_composable_seqs(F.source, max_len, objects, unit_budget):
            lhs = functor_partition_sum(F, seq, objs)
            rhs = functor_window_sum(F, seq, objs, degs)
            result.checked += 1
            diff = combo_sub(fld, lhs, rhs)
            if diff:
                result.fail("functor_equation_violation",
                            functor=F.name,
                            objects=[str(o) for o in objs],
                            tuple=[str(t) for t in seq],
                            lhs={str(k): str(v) for k, v in lhs.items()},
                            rhs={str(k): str(v) for k, v in rhs.items()})
    return result


class ComposedFunctor(AInfFunctor):
    """Composite of generator-level functors: apply F, then the extension of G.

    Components follow the partition formula (no signs): the d-th component is
    the sum over partitions of the argument tuple into consecutive blocks of
    the extended-G component applied to the tuple of F-block values.
    """

    def __init__(self, G: AInfFunctor, F: AInfFunctor):
        self.G = G
        self.F = F
        self.Gext = G.extended()
        self.source = F.source
        self.target = self.Gext.target
        self.name = f"({G.name} . {F.name})"
        self._obj_cache: Dict[object, object] = {}

    def obj(self, x):
        if x not in self._obj_cache:
            self._obj_cache[x] = self.Gext.obj(self.F.obj(x))
        return self._obj_cache[x]

    def comp_nonunit(self, seq: Tuple, objs: Tuple) -> Combo:
        d = len(seq)
        fld = self.target.field
        F = self.F
        block_val: Dict[Tuple[int, int], Combo] = {}
        for i in range(d):
            for j in range(i + 1, d + 1):
                block_val[(i, j)] = F.comp(seq[i:j], objs[i:j + 1])
        total: Combo = {}

        def rec(start: int, blocks: List[Combo], chain: List):
            if start == d:
                val = self.Gext.comp_combos(blocks, chain)
                for lbl, c in val.items():
                    combo_add_into(fld, total, lbl, c)
                return
            for end in range(start + 1, d + 1):
                v = block_val[(start, end)]
                if not v:
                    continue
                blocks.append(v)
                chain.append(F.obj(objs[end]))
                rec(end, blocks, chain)
                blocks.pop()
                chain.pop()

        rec(0, [], [F.obj(objs[0])])
        return total


def compose_functors(G: AInfFunctor, F: AInfFunctor) -> AInfFunctor:
    """G after F: F maps into twisted complexes over G's source."""
    return ComposedFunctor(G, F)


def functors_equal(F: AInfFunctor, G: AInfFunctor, max_len: int,
                   objects: Optional[Sequence] = None) -> CheckResult:
    """Structural equality of generator data: object maps and components.

    Components are compared on unit-free tuples: with centralized strict
    units, values on tuples containing units are forced by the object maps
    (single unit → unit of the image; otherwise zero), so comparing them
    would be vacuous.
    """
    result = CheckResult("functors_equal", params={
        "left": F.name, "right": G.name, "max_len": max_len})
    fld = F.target.field
    with timed(result):
        objs_list = list(objects) if objects is not None else F.source.objects()
        for x in objs_list:
            result.checked += 1
            if F.obj(x) != G.obj(x):
                result.fail("object_map_mismatch", object=str(x),
                            left=repr(F.obj(x)), right=repr(G.obj(x)))
        if not result.ok:
            return result
        for objs, seq, degs in iter_composable_seqs(F.source, max_len, objs_list,
                                                    unit_budget=0):
            a = F.comp(seq, objs)
            b = G.comp(seq, objs)
            result.checked += 1
            if combo_sub(fld, a, b):
                result.fail("component_mismatch",
                            objects=[str(o) for o in objs],
                            tuple=[str(t) for t in seq],
                            left={str(k): str(v) for k, v in a.items()},
                            right={str(k): str(v) for k, v in b.items()})
    return result


# ---------------------------------------------------------------------------
# Hom-complex cohomology
# ---------------------------------------------------------------------------


def hom_cohomology(cat: AInfCategory, x, y) -> Dict[int, int]:
    """Dimensions of the mu_1-cohomology of hom(x, y), per degree class.

    Returns {0: dim, 1: dim} in two-periodic mode, or a dict over the integer
    degrees appearing in the basis (plus neighbors) in graded mode; absent
    degrees have dimension 0.
    """
    fld = cat.field
    basis = list(cat.hom_basis(x, y))
    if not basis:
        return {}
    by_deg: Dict[int, List[object]] = {}
    for lbl in basis:
        k = cat.reduce_degree(cat.degree(x, y, lbl))
        by_deg.setdefault(k, []).append(lbl)

    def differential_matrix(k_from: int, k_to: int):
        dom = by_deg.get(k_from, [])
        cod = by_deg.get(k_to, [])
        if not dom or not cod:
            return None
        cod_index = {lbl: i for i, lbl in enumerate(cod)}
        cols = []
        for lbl in dom:
            img = cat.mu((lbl,), (x, y))
            col = [fld.zero()] * len(cod)
            for l2, c in img.items():
                col[cod_index[l2]] = c
            cols.append(col)
        return [[cols[j][i] for j in range(len(dom))] for i in range(len(cod))]

    def rank_of(k_from, k_to):
        m = differential_matrix(k_from, k_to)
        return matrix_rank(fld, m) if m is not None else 0

    out: Dict[int, int] = {}
    degrees = sorted(by_deg)
    for k in degrees:
        if cat.modulus == 2:
            prev, nxt = (k - 1) % 2, (k + 1) % 2
        else:
            prev, nxt = k - 1, k + 1
        dim = len(by_deg[k]) - rank_of(k, nxt) - rank_of(prev, k)
        if dim:
            out[k] = dim
    return out
