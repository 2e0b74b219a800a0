"""Exact rational geometry of skew lines in 3-space.

Everything here is computed over ``fractions.Fraction``; no predicate ever
touches floating point, so sign tests are decisions, not estimates.

Linking convention
------------------
``lk_pair(a, b)`` is the sign of ``det(dir_a, dir_b, base_b - base_a)``.
The standard frame -- the x-axis oriented along +x together with the line
through (0, 0, 1) directed along +y -- has linking number +1.  Every other
module of the package is phrased in terms of this one choice.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence, Union

from .errors import (
    Collinear,
    Coplanar,
    DegenerateSystem,
    Duplicate,
    NotSkew,
    ParallelPlanes,
    Perpendicular,
    ZeroDirection,
)

RationalLike = Union[Fraction, int, str]


def rat(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction or "p/q" string to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact value {value!r}; use int or 'p/q'")
    return Fraction(value)


@dataclass(frozen=True)
class Vec3:
    x: Fraction
    y: Fraction
    z: Fraction

    @staticmethod
    def of(x: RationalLike, y: RationalLike, z: RationalLike) -> "Vec3":
        return Vec3(rat(x), rat(y), rat(z))

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Vec3":
        return Vec3(-self.x, -self.y, -self.z)

    def scale(self, s: RationalLike) -> "Vec3":
        s = rat(s)
        return Vec3(self.x * s, self.y * s, self.z * s)

    def dot(self, other: "Vec3") -> Fraction:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "Vec3") -> "Vec3":
        return Vec3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0 and self.z == 0

    def mirror_z(self) -> "Vec3":
        return Vec3(self.x, self.y, -self.z)

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.x, self.y, self.z)


def vec(x: RationalLike, y: RationalLike, z: RationalLike) -> Vec3:
    return Vec3.of(x, y, z)


def det3(a: Vec3, b: Vec3, c: Vec3) -> Fraction:
    """Determinant of the 3x3 matrix with rows a, b, c."""
    return (
        a.x * (b.y * c.z - b.z * c.y)
        - a.y * (b.x * c.z - b.z * c.x)
        + a.z * (b.x * c.y - b.y * c.x)
    )


def sign(value: Fraction) -> int:
    if value > 0:
        return 1
    if value < 0:
        return -1
    return 0


@dataclass(frozen=True)
class OrientedLine:
    """A line given by a base point and a nonzero direction.

    The direction carries the orientation; ``reverse`` flips it.
    """

    base: Vec3
    dir: Vec3

    def __post_init__(self) -> None:
        if self.dir.is_zero():
            raise ZeroDirection("line direction must be nonzero")

    def reverse(self) -> "OrientedLine":
        return OrientedLine(self.base, -self.dir)

    def point_at(self, t: RationalLike) -> Vec3:
        return self.base + self.dir.scale(t)

    def mirror_z(self) -> "OrientedLine":
        return OrientedLine(self.base.mirror_z(), self.dir.mirror_z())


def line(base: Sequence[RationalLike], direction: Sequence[RationalLike]) -> OrientedLine:
    """Convenience constructor from coordinate triples."""
    return OrientedLine(Vec3.of(*base), Vec3.of(*direction))


X_AXIS = line((0, 0, 0), (1, 0, 0))


def _skew_reason(a: OrientedLine, b: OrientedLine) -> str | None:
    if a.dir.cross(b.dir).is_zero():
        return "parallel"
    if det3(a.dir, b.dir, b.base - a.base) == 0:
        return "intersecting"
    return None


def skew(a: OrientedLine, b: OrientedLine) -> bool:
    """True iff the two lines neither intersect nor are parallel."""
    return _skew_reason(a, b) is None


def lk_pair(a: OrientedLine, b: OrientedLine) -> int:
    """Linking sign of an ordered pair of skew oriented lines.

    Antisymmetric under reversing one orientation, invariant under
    reversing both, and negated by the reflection z -> -z.
    """
    reason = _skew_reason(a, b)
    if reason is not None:
        raise NotSkew(1, 2, reason)
    return sign(det3(a.dir, b.dir, b.base - a.base))


def canonical_semiorientation(a: OrientedLine, b: OrientedLine) -> tuple[OrientedLine, OrientedLine]:
    """Reorient ``b`` so the pair carries its canonical semi-orientation.

    The result has ``dir_a . dir_b > 0``; together with its double reversal
    it forms the canonical semi-orientation of the pair.
    """
    reason = _skew_reason(a, b)
    if reason is not None:
        raise NotSkew(1, 2, reason)
    d = a.dir.dot(b.dir)
    if d == 0:
        raise Perpendicular("perpendicular pair has no canonical semi-orientation")
    return (a, b) if d > 0 else (a, b.reverse())


def lk_triple(a: OrientedLine, b: OrientedLine, c: OrientedLine) -> int:
    """Linking sign of an unordered triple: the product of its pair signs.

    Reversing any single orientation flips two factors, so the value does
    not depend on orientations at all; a mirror reflection negates it.
    """
    return lk_pair(a, b) * lk_pair(a, c) * lk_pair(b, c)


@dataclass(frozen=True)
class Configuration:
    """An ordered tuple of pairwise skew lines, labeled 1..n.

    Construction validates every pair and raises :class:`NotSkew` with the
    offending 1-based labels.
    """

    lines: tuple[OrientedLine, ...]

    def __post_init__(self) -> None:
        if not self.lines:
            raise ValueError("a configuration needs at least one line")
        object.__setattr__(self, "lines", tuple(self.lines))
        for (i, a), (j, b) in combinations(enumerate(self.lines, start=1), 2):
            reason = _skew_reason(a, b)
            if reason is not None:
                raise NotSkew(i, j, reason)

    @property
    def n(self) -> int:
        return len(self.lines)

    def line(self, label: int) -> OrientedLine:
        if not 1 <= label <= self.n:
            raise IndexError(f"label {label} out of range 1..{self.n}")
        return self.lines[label - 1]

    def relabel(self, perm: Sequence[int]) -> "Configuration":
        """New configuration whose line ``perm[i-1]`` is the old line ``i``."""
        out: list[OrientedLine | None] = [None] * self.n
        for old, new in enumerate(perm, start=1):
            out[new - 1] = self.lines[old - 1]
        return Configuration(tuple(out))  # type: ignore[arg-type]


def configuration(*lines_: OrientedLine) -> Configuration:
    return Configuration(tuple(lines_))


def mirror(c: Configuration) -> Configuration:
    """Reflect every line through the plane z = 0.

    An involution; every triple sign of the result is negated.
    """
    return Configuration(tuple(l.mirror_z() for l in c.lines))


@dataclass(frozen=True)
class PointSet:
    """An ordered tuple of points, labeled 1..q.  Validate separately."""

    points: tuple[Vec3, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(self.points))

    @property
    def q(self) -> int:
        return len(self.points)

    def point(self, label: int) -> Vec3:
        return self.points[label - 1]


def point_set(coords: Iterable[Sequence[RationalLike]]) -> PointSet:
    return PointSet(tuple(Vec3.of(*c) for c in coords))


def mirror_point_set(p: PointSet) -> PointSet:
    return PointSet(tuple(v.mirror_z() for v in p.points))


def validate_pointset(p: PointSet) -> PointSet:
    """Check nonsingularity exactly: points distinct, no 3 collinear, no 4 coplanar.

    Returns the set itself as certificate; raises :class:`Duplicate`,
    :class:`Collinear` or :class:`Coplanar` with 1-based labels.
    """
    pts = p.points
    q = len(pts)
    for i, j in combinations(range(q), 2):
        if pts[i] == pts[j]:
            raise Duplicate(i + 1, j + 1)
    for i, j, k in combinations(range(q), 3):
        if (pts[j] - pts[i]).cross(pts[k] - pts[i]).is_zero():
            raise Collinear(i + 1, j + 1, k + 1)
    for i, j, k, l in combinations(range(q), 4):
        if det3(pts[j] - pts[i], pts[k] - pts[i], pts[l] - pts[i]) == 0:
            raise Coplanar(i + 1, j + 1, k + 1, l + 1)
    return p


# -- parallelepiped of a triple ----------------------------------------------

def parallelepiped_of_triple(a: OrientedLine, b: OrientedLine, c: OrientedLine) -> tuple[Vec3, ...]:
    """The unique parallelepiped whose three pairwise skew edges extend to a, b, c.

    Returns its 8 vertices sorted lexicographically.  Each input line
    contains exactly one edge (two vertices).  Fails with
    :class:`ParallelPlanes` when the three directions are coplanar.
    """
    for (i, u), (j, v) in combinations(enumerate((a, b, c), start=1), 2):
        reason = _skew_reason(u, v)
        if reason is not None:
            raise NotSkew(i, j, reason)
    if det3(a.dir, b.dir, c.dir) == 0:
        raise ParallelPlanes("the three directions are linearly dependent")

    # Face planes: through each line, parallel to each other line.  Opposite
    # faces share the normal dir_u x dir_v.
    n_ab = a.dir.cross(b.dir)
    n_ac = a.dir.cross(c.dir)
    n_bc = b.dir.cross(c.dir)
    pairs = (
        (n_ab, (n_ab.dot(a.base), n_ab.dot(b.base))),
        (n_ac, (n_ac.dot(a.base), n_ac.dot(c.base))),
        (n_bc, (n_bc.dot(b.base), n_bc.dot(c.base))),
    )
    d = det3(n_ab, n_ac, n_bc)
    if d == 0:  # cannot occur once det(dirs) != 0, kept as a guard
        raise ParallelPlanes("degenerate face normals")

    vertices = []
    for o1 in pairs[0][1]:
        for o2 in pairs[1][1]:
            for o3 in pairs[2][1]:
                vertices.append(_solve3(n_ab, n_ac, n_bc, o1, o2, o3, d))
    vertices.sort(key=Vec3.as_tuple)
    return tuple(vertices)


def _solve3(r1: Vec3, r2: Vec3, r3: Vec3, o1: Fraction, o2: Fraction, o3: Fraction, d: Fraction) -> Vec3:
    # Cramer's rule for the system (r1; r2; r3) x = (o1; o2; o3).
    dx = det3(Vec3(o1, r1.y, r1.z), Vec3(o2, r2.y, r2.z), Vec3(o3, r3.y, r3.z))
    dy = det3(Vec3(r1.x, o1, r1.z), Vec3(r2.x, o2, r2.z), Vec3(r3.x, o3, r3.z))
    dz = det3(Vec3(r1.x, r1.y, o1), Vec3(r2.x, r2.y, o2), Vec3(r3.x, r3.y, o3))
    return Vec3(dx / d, dy / d, dz / d)


# -- quadrics ------------------------------------------------------------------

class LinePosition(Enum):
    DISJOINT = "disjoint"
    TANGENT = "tangent"
    TWO_POINTS = "two_points"
    CONTAINED = "contained"


@dataclass(frozen=True)
class Quadric:
    """A projective quadric surface as a symmetric 4x4 rational matrix, up to scale.

    The matrix is stored in a canonical scaling (integer entries with content
    1, first nonzero entry positive), so equal surfaces compare equal.
    """

    m: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        m = tuple(tuple(rat(v) for v in row) for row in self.m)
        if len(m) != 4 or any(len(row) != 4 for row in m):
            raise ValueError("quadric matrix must be 4x4")
        for i in range(4):
            for j in range(4):
                if m[i][j] != m[j][i]:
                    raise ValueError("quadric matrix must be symmetric")
        flat = [v for row in m for v in row]
        if all(v == 0 for v in flat):
            raise ValueError("quadric matrix must be nonzero")
        scale = _canonical_scale(flat)
        object.__setattr__(self, "m", tuple(tuple(v * scale for v in row) for row in m))

    def form(self, u: tuple[Fraction, ...], v: tuple[Fraction, ...]) -> Fraction:
        """The symmetric bilinear form u^T M v on homogeneous 4-vectors."""
        total = Fraction(0)
        for i in range(4):
            row = self.m[i]
            ui = u[i]
            if ui == 0:
                continue
            total += ui * sum(row[j] * v[j] for j in range(4))
        return total

    def evaluate(self, p: Vec3) -> Fraction:
        """Value of the quadratic form at an affine point (w = 1)."""
        h = (p.x, p.y, p.z, Fraction(1))
        return self.form(h, h)

    def contains_point(self, p: Vec3) -> bool:
        return self.evaluate(p) == 0


def _canonical_scale(flat: list[Fraction]) -> Fraction:
    from math import gcd

    denom_lcm = 1
    for v in flat:
        denom_lcm = denom_lcm * v.denominator // gcd(denom_lcm, v.denominator)
    nums = [int(v * denom_lcm) for v in flat]
    g = 0
    for value in nums:
        g = gcd(g, abs(value))
    scale = Fraction(denom_lcm, g)
    first = next(v for v in flat if v != 0)
    return -scale if first < 0 else scale


_QUADRIC_MONOMIALS = 10  # x2 y2 z2 xy xz yz x y z 1


def _monomial_row(p: Vec3) -> list[Fraction]:
    x, y, z = p.x, p.y, p.z
    return [x * x, y * y, z * z, x * y, x * z, y * z, x, y, z, Fraction(1)]


def quadric_through(a: OrientedLine, b: OrientedLine, c: OrientedLine) -> Quadric:
    """The quadric surface containing three pairwise skew lines.

    Three points per line give nine linear conditions on the ten quadric
    coefficients; a degree-2 form vanishing at three points of a line
    vanishes on the whole line.  The solution space must be exactly
    one-dimensional, otherwise :class:`DegenerateSystem` is raised.
    """
    for (i, u), (j, v) in combinations(enumerate((a, b, c), start=1), 2):
        reason = _skew_reason(u, v)
        if reason is not None:
            raise NotSkew(i, j, reason)
    if det3(a.dir, b.dir, c.dir) == 0:
        raise ParallelPlanes("the three directions are linearly dependent")

    rows = []
    for l in (a, b, c):
        for t in (0, 1, -1):
            rows.append(_monomial_row(l.point_at(t)))
    coeffs = _nullspace_vector(rows)

    q0, q1, q2, q3, q4, q5, q6, q7, q8, q9 = coeffs
    half = Fraction(1, 2)
    m = (
        (q0, q3 * half, q4 * half, q6 * half),
        (q3 * half, q1, q5 * half, q7 * half),
        (q4 * half, q5 * half, q2, q8 * half),
        (q6 * half, q7 * half, q8 * half, q9),
    )
    return Quadric(m)


def _nullspace_vector(rows: list[list[Fraction]]) -> list[Fraction]:
    """One basis vector of the nullspace of a matrix with exactly rank 9."""
    width = _QUADRIC_MONOMIALS
    mat = [row[:] for row in rows]
    pivot_cols: list[int] = []
    r = 0
    for col in range(width):
        pivot = next((i for i in range(r, len(mat)) if mat[i][col] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][col]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [v - f * w for v, w in zip(mat[i], mat[r])]
        pivot_cols.append(col)
        r += 1
    free_cols = [c for c in range(width) if c not in pivot_cols]
    if len(free_cols) != 1:
        raise DegenerateSystem(
            f"solution space has dimension {len(free_cols)}, expected 1"
        )
    free = free_cols[0]
    solution = [Fraction(0)] * width
    solution[free] = Fraction(1)
    for row_idx, col in enumerate(pivot_cols):
        solution[col] = -mat[row_idx][free]
    return solution


def line_quadric_position(q: Quadric, l: OrientedLine) -> LinePosition:
    """Classify a line against a quadric by the discriminant of its restriction.

    The restriction of the form to the projective line is a binary quadratic;
    it vanishes identically iff the line is contained in the surface.
    """
    u = (l.base.x, l.base.y, l.base.z, Fraction(1))
    w = (l.dir.x, l.dir.y, l.dir.z, Fraction(0))
    a = q.form(w, w)
    b = q.form(u, w)
    c = q.form(u, u)
    if a == 0 and b == 0 and c == 0:
        return LinePosition.CONTAINED
    disc = b * b - a * c
    if disc > 0:
        return LinePosition.TWO_POINTS
    if disc == 0:
        return LinePosition.TANGENT
    return LinePosition.DISJOINT


# -- affine maps ---------------------------------------------------------------

Mat3 = tuple[Vec3, Vec3, Vec3]  # rows


def mat3_apply(m: Mat3, v: Vec3) -> Vec3:
    return Vec3(m[0].dot(v), m[1].dot(v), m[2].dot(v))


def mat3_det(m: Mat3) -> Fraction:
    return det3(*m)


def affine_line(l: OrientedLine, m: Mat3, offset: Vec3) -> OrientedLine:
    return OrientedLine(mat3_apply(m, l.base) + offset, mat3_apply(m, l.dir))


def affine_configuration(c: Configuration, m: Mat3, offset: Vec3) -> Configuration:
    if mat3_det(m) == 0:
        raise ValueError("affine map must be invertible")
    return Configuration(tuple(affine_line(l, m, offset) for l in c.lines))
