"""Orientation-free invariants extracted from triple linking data.

The central object is the :class:`TripleTable`: one sign per 3-subset of
lines.  Every table produced from geometry satisfies the four-line product
identity

    lk(a,b,c) * lk(a,b,d) * lk(a,c,d) * lk(b,c,d) = 1,

and externally supplied tables are rejected unless they do too.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    ClassTooSmall,
    Coplanar,
    InconsistentClassSign,
    LemmaViolation,
    NoExternalLine,
    TooFewLines,
    TooFewPoints,
    TooLarge,
)
from .geometry import (
    Configuration,
    OrientedLine,
    PointSet,
    Vec3,
    lk_pair,
    lk_triple,
    validate_pointset,
)

CANONICAL_MAX_N = 8  # the relabeling search is factorial


def _subsets3(n: int) -> tuple[tuple[int, int, int], ...]:
    return tuple(combinations(range(1, n + 1), 3))


@dataclass(frozen=True)
class TripleTable:
    """Signs of all 3-subsets of {1..n}, in lexicographic subset order."""

    n: int
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        expected = len(_subsets3(self.n))
        if len(self.signs) != expected:
            raise ValueError(f"expected {expected} entries for n={self.n}")
        if any(s not in (-1, 1) for s in self.signs):
            raise ValueError("table entries must be +1 or -1")

    @staticmethod
    def from_mapping(n: int, entries: Mapping[tuple[int, int, int], int],
                     validate: bool = True) -> "TripleTable":
        signs = tuple(entries[s] for s in _subsets3(n))
        table = TripleTable(n, signs)
        if validate:
            table.check_lemma()
        return table

    def subsets(self) -> tuple[tuple[int, int, int], ...]:
        return _subsets3(self.n)

    def index(self, i: int, j: int, k: int) -> int:
        return _subset_index(self.n)[tuple(sorted((i, j, k)))]

    def sign(self, i: int, j: int, k: int) -> int:
        return self.signs[self.index(i, j, k)]

    def negate(self) -> "TripleTable":
        return TripleTable(self.n, tuple(-s for s in self.signs))

    def relabel(self, perm: Sequence[int]) -> "TripleTable":
        """Table of the relabeled configuration: new label of line i is perm[i-1]."""
        idx = _subset_index(self.n)
        out = [0] * len(self.signs)
        for (i, j, k), s in zip(self.subsets(), self.signs):
            out[idx[tuple(sorted((perm[i - 1], perm[j - 1], perm[k - 1])))]] = s
        return TripleTable(self.n, tuple(out))

    def restrict(self, labels: Sequence[int]) -> "TripleTable":
        """Induced sub-table on the given labels, renumbered 1..len(labels)."""
        labels = sorted(labels)
        entries = {}
        for (a, b, c) in combinations(range(len(labels)), 3):
            entries[(a + 1, b + 1, c + 1)] = self.sign(labels[a], labels[b], labels[c])
        return TripleTable(len(labels), tuple(entries[s] for s in _subsets3(len(labels))))

    def check_lemma(self) -> None:
        for quad in combinations(range(1, self.n + 1), 4):
            product = 1
            for triple in combinations(quad, 3):
                product *= self.sign(*triple)
            if product != 1:
                raise LemmaViolation(quad)


_SUBSET_INDEX_CACHE: dict[int, dict[tuple[int, int, int], int]] = {}


def _subset_index(n: int) -> dict[tuple[int, int, int], int]:
    cached = _SUBSET_INDEX_CACHE.get(n)
    if cached is None:
        cached = {s: i for i, s in enumerate(_subsets3(n))}
        _SUBSET_INDEX_CACHE[n] = cached
    return cached


def triple_table(c: Configuration) -> TripleTable:
    """All triple linking signs of a configuration."""
    if c.n < 3:
        raise TooFewLines(f"need at least 3 lines, got {c.n}")
    pair = {}
    for i, j in combinations(range(1, c.n + 1), 2):
        pair[(i, j)] = lk_pair(c.line(i), c.line(j))
    signs = tuple(
        pair[(i, j)] * pair[(i, k)] * pair[(j, k)] for i, j, k in _subsets3(c.n)
    )
    return TripleTable(c.n, signs)


def triple_sum(t: TripleTable) -> int:
    """Sum of all C(n,3) signs; an isotopy invariant, negated by mirrors."""
    return sum(t.signs)


# -- chirality -----------------------------------------------------------------

class ObstructionKind(Enum):
    TRIPLE_COUNT_PARITY = "triple-count-parity"
    NONZERO_TRIPLE_SUM = "nonzero-triple-sum"


@dataclass(frozen=True)
class ChiralityVerdict:
    nonamphicheiral: bool
    reason: ObstructionKind | None = None
    value: int | None = None  # the nonzero sum, when that is the reason

    def describe(self) -> str:
        if not self.nonamphicheiral:
            return "inconclusive"
        if self.reason is ObstructionKind.TRIPLE_COUNT_PARITY:
            return "nonamphicheiral (odd number of triples)"
        return f"nonamphicheiral (triple sum {self.value} != 0)"


INCONCLUSIVE = ChiralityVerdict(False)


def chirality_certificate(c: Configuration) -> ChiralityVerdict:
    """Sound obstructions to a configuration being isotopic to its mirror image.

    With n = 3 mod 4 the number of triples n(n-1)(n-2)/6 is odd, so the
    triple sum cannot vanish; otherwise a nonzero triple sum is the
    obstruction.  No obstruction means the test is inconclusive, not that
    the configuration is amphicheiral.
    """
    return chirality_certificate_table(triple_table(c))


def chirality_certificate_table(t: TripleTable) -> ChiralityVerdict:
    if t.n % 4 == 3:
        return ChiralityVerdict(True, ObstructionKind.TRIPLE_COUNT_PARITY)
    total = triple_sum(t)
    if total != 0:
        return ChiralityVerdict(True, ObstructionKind.NONZERO_TRIPLE_SUM, total)
    return INCONCLUSIVE


# -- linking equivalence ---------------------------------------------------------

def _equivalent(t: TripleTable, a: int, b: int) -> bool:
    others = [x for x in range(1, t.n + 1) if x not in (a, b)]
    for x, y in combinations(others, 2):
        if t.sign(a, x, y) != t.sign(b, x, y):
            return False
    return True


def _partition(t: TripleTable) -> list[tuple[int, ...]]:
    # The relation is transitive for any table, so greedy grouping is sound.
    classes: list[list[int]] = []
    for a in range(1, t.n + 1):
        for cls in classes:
            if _equivalent(t, cls[0], a):
                cls.append(a)
                break
        else:
            classes.append([a])
    return [tuple(cls) for cls in classes]


def linking_equivalence_partition(t: TripleTable) -> list[tuple[int, ...]]:
    """Partition of labels by agreement on all triples with two outside lines.

    Lines that are isotopic within the configuration land in one part; the
    converse is not assumed.  Parts are ordered by their smallest label.
    """
    if t.n < 3:
        raise TooFewLines(f"need at least 3 lines, got {t.n}")
    return _partition(t)


def derived_table(t: TripleTable) -> tuple[TripleTable, list[tuple[int, ...]]]:
    """The table of one representative per linking-equivalence class.

    Returns the derived table (well defined: entries do not depend on the
    choice of representatives) together with the partition, whose k-th part
    corresponds to label k+1 of the derived table.
    """
    if t.n < 3:
        raise TooFewLines(f"need at least 3 lines, got {t.n}")
    parts = _partition(t)
    reps = [cls[0] for cls in parts]
    return t.restrict(reps), parts


def class_epsilon(t: TripleTable, cls: Iterable[int]) -> int:
    """The common sign of triples {a, b, x} with a, b in the class, x outside.

    Verified constant over every such choice; a failure means the input is
    not a genuine epsilon-class.
    """
    members = sorted(set(cls))
    if len(members) < 2:
        raise ClassTooSmall("epsilon is undefined for classes of size < 2")
    outside = [x for x in range(1, t.n + 1) if x not in members]
    if not outside:
        raise NoExternalLine("the class covers the whole configuration")
    value = None
    for a, b in combinations(members, 2):
        for x in outside:
            s = t.sign(a, b, x)
            if value is None:
                value = s
            elif s != value:
                raise InconsistentClassSign(
                    f"triples ({a},{b},{x}) disagree with earlier choices"
                )
    assert value is not None
    return value


# -- canonical form ---------------------------------------------------------------

_PERM_MATRIX_CACHE: dict[int, tuple[tuple[tuple[int, ...], ...], np.ndarray]] = {}


def _perm_matrix(n: int) -> tuple[tuple[tuple[int, ...], ...], np.ndarray]:
    """All permutations of 1..n with, per permutation, the induced map on 3-subsets.

    Row p of the matrix sends subset-index s to the index of the image of
    subset s under permutation p, so ``signs[matrix[p]]`` is the relabeled
    sign tuple.
    """
    cached = _PERM_MATRIX_CACHE.get(n)
    if cached is not None:
        return cached
    subsets = _subsets3(n)
    index = _subset_index(n)
    perms = tuple(permutations(range(1, n + 1)))
    matrix = np.empty((len(perms), len(subsets)), dtype=np.int32)
    for p, perm in enumerate(perms):
        for s, (i, j, k) in enumerate(subsets):
            image = tuple(sorted((perm[i - 1], perm[j - 1], perm[k - 1])))
            # row built so that row[s'] = index of preimage: we want the
            # relabeled table value at image position to be signs[s]
            matrix[p, index[image]] = s
    _PERM_MATRIX_CACHE[n] = (perms, matrix)
    return perms, matrix


def canonical_table(t: TripleTable) -> TripleTable:
    """Lexicographic minimum of the table over all n! relabelings.

    Two tables are isomorphic iff their canonical forms are equal.
    """
    if t.n > CANONICAL_MAX_N:
        raise TooLarge(f"canonical form search is limited to n <= {CANONICAL_MAX_N}")
    if t.n < 3:
        return t
    _, matrix = _perm_matrix(t.n)
    arr = np.asarray(t.signs, dtype=np.int8)
    rows = arr[matrix]
    order = np.lexsort(rows.T[::-1])
    best = rows[order[0]]
    return TripleTable(t.n, tuple(int(v) for v in best))


def canonical_signs(n: int, signs: tuple[int, ...]) -> tuple[int, ...]:
    """Canonical sign tuple without wrapping in a TripleTable (bulk use)."""
    if n < 3:
        return signs
    if n > CANONICAL_MAX_N:
        raise TooLarge(f"canonical form search is limited to n <= {CANONICAL_MAX_N}")
    _, matrix = _perm_matrix(n)
    rows = np.asarray(signs, dtype=np.int8)[matrix]
    order = np.lexsort(rows.T[::-1])
    return tuple(int(v) for v in rows[order[0]])


# -- nonsingular point sets ---------------------------------------------------------

def _pair_line(p: PointSet, i: int, j: int) -> OrientedLine:
    return OrientedLine(p.point(i), p.point(j) - p.point(i))


def skew_triple_terms(p: PointSet) -> Iterable[tuple[tuple[int, int], tuple[int, int], tuple[int, int]]]:
    """All unordered triples of pairwise disjoint point-pairs, as label pairs."""
    pairs = list(combinations(range(1, p.q + 1), 2))
    for a, b, c in combinations(pairs, 3):
        if len({*a, *b, *c}) == 6:
            yield (a, b, c)


def pointset_skew_triple_sum(p: PointSet) -> int:
    """Sum of triple signs over all triples of disjoint connecting lines.

    For q points the sum has C(q,2) C(q-2,2) C(q-4,2) / 6 terms; it vanishes
    for every point set that is isotopic to its mirror image.
    """
    validate_pointset(p)
    if p.q < 6:
        raise TooFewPoints(f"need at least 6 points, got {p.q}")
    total = 0
    for (a, b, c) in skew_triple_terms(p):
        total += lk_triple(_pair_line(p, *a), _pair_line(p, *b), _pair_line(p, *c))
    return total


def _perp_component(v: Vec3, axis: Vec3) -> Vec3:
    return v - axis.scale(v.dot(axis) / axis.dot(axis))


def _plane_basis(axis: Vec3) -> tuple[Vec3, Vec3]:
    for e in (Vec3.of(1, 0, 0), Vec3.of(0, 1, 0), Vec3.of(0, 0, 1)):
        u = axis.cross(e)
        if not u.is_zero():
            return u, axis.cross(u)
    raise ValueError("axis direction is zero")


def cyclic_order_around_axis(p: PointSet, i: int, j: int) -> list[int]:
    """Labels of the other points in the rotational order of the plane through axis ij.

    A plane through the axis sweeps half a turn to meet every other point
    once; the order is cyclic.  Ties would mean four coplanar points, which
    a valid point set excludes.
    """
    axis = p.point(j) - p.point(i)
    u, w = _plane_basis(axis)

    def direction(label: int) -> tuple[Fraction, Fraction]:
        r = _perp_component(p.point(label) - p.point(i), axis)
        x, y = r.dot(u), r.dot(w)
        # the plane through the axis is a direction mod pi: normalize into
        # the half-plane y > 0 (or y = 0, x > 0)
        if y < 0 or (y == 0 and x < 0):
            x, y = -x, -y
        return x, y

    labels = [x for x in range(1, p.q + 1) if x not in (i, j)]
    reps = {label: direction(label) for label in labels}

    def less(a: int, b: int) -> bool:
        (xa, ya), (xb, yb) = reps[a], reps[b]
        cross = xa * yb - ya * xb
        if cross == 0:
            raise Coplanar(i, j, a, b)
        return cross > 0

    # insertion sort with the exact comparator (q is tiny)
    ordered: list[int] = []
    for label in labels:
        k = 0
        while k < len(ordered) and less(ordered[k], label):
            k += 1
        ordered.insert(k, label)
    return ordered


def cyclic_triple_terms(p: PointSet) -> Iterable[tuple[tuple[int, int], tuple[int, int], tuple[int, int]]]:
    """Axis pair plus the two lines joining four successive points around it."""
    for i, j in combinations(range(1, p.q + 1), 2):
        ordered = cyclic_order_around_axis(p, i, j)
        m = len(ordered)
        for s in range(m):
            w = [ordered[(s + d) % m] for d in range(4)]
            yield ((i, j), (w[0], w[1]), (w[2], w[3]))


def pointset_cyclic_invariant(p: PointSet) -> int:
    """Sum of triple signs over all cyclic triples; (q-2) C(q,2) terms.

    Vanishes for point sets isotopic to their mirror image; for q = 3 mod 4
    (q >= 7) the term count is odd, so it cannot vanish.
    """
    validate_pointset(p)
    if p.q < 7:
        raise TooFewPoints(f"need at least 7 points, got {p.q}")
    total = 0
    for (axis, first, second) in cyclic_triple_terms(p):
        total += lk_triple(
            _pair_line(p, *axis), _pair_line(p, *first), _pair_line(p, *second)
        )
    return total


def podkorytov_exists(p: int, q: int) -> bool:
    """Whether an amphicheiral nonsingular set of p lines and q points exists.

    True iff (q <= 3 and p = 0 or 1 mod 4) or (q = 0 or 1 mod 4 and p even).
    """
    if p < 0 or q < 0:
        raise ValueError("counts must be nonnegative")
    if q <= 3 and p % 4 in (0, 1):
        return True
    return q % 4 in (0, 1) and p % 2 == 0
