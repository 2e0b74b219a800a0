"""Projection diagrams and the Drobotukhina bracket polynomial.

A configuration is projected along a generic direction to an arrangement of
projective lines; each pair crosses once and over/under is decided by exact
depth comparison.  The bracket is a Kauffman-style state sum over all
2^C(n,2) smoothings, with separate weights for contractible and
noncontractible loops in the projective plane.

The normalization of the published values is not specified anywhere in a
form this package could transcribe, so the convention is parameterized
(smoothing chirality, loop-count offset, noncontractible factor, global
unit) and pinned once by exact calibration against the known value for the
join jc(1,2,5,6,3,4).  The calibrated parameters are data, not code.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, count
from typing import Iterator, Mapping, Optional, Sequence

import numpy as np

from ._tracing import COMPILED_THRESHOLD, trace_states_compiled, trace_states_python
from .errors import (
    CalibrationAmbiguous,
    CalibrationNoMatch,
    DirectionSearchExhausted,
    NonGenericDirection,
)
from .geometry import Configuration, Vec3, det3, sign, vec

# -- sparse Laurent polynomials in one variable A -------------------------------


@dataclass(frozen=True)
class LaurentPoly:
    """Integer Laurent polynomial; terms (exponent, coefficient), exponents
    strictly decreasing, no zero coefficients."""

    terms: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        exps = [e for e, _ in self.terms]
        if any(c == 0 for _, c in self.terms) or exps != sorted(exps, reverse=True):
            raise ValueError("terms must be zero-free and sorted by decreasing exponent")

    @staticmethod
    def from_dict(coeffs: Mapping[int, int]) -> "LaurentPoly":
        return LaurentPoly(
            tuple((e, c) for e, c in sorted(coeffs.items(), reverse=True) if c != 0)
        )

    @staticmethod
    def from_pairs(pairs: Sequence[tuple[int, int]]) -> "LaurentPoly":
        """Build from (exponent, coefficient) pairs in any order."""
        acc: dict[int, int] = {}
        for e, c in pairs:
            acc[e] = acc.get(e, 0) + c
        return LaurentPoly.from_dict(acc)

    @staticmethod
    def monomial(coeff: int, exp: int) -> "LaurentPoly":
        return LaurentPoly(((exp, coeff),) if coeff else ())

    def as_dict(self) -> dict[int, int]:
        return dict(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        acc = self.as_dict()
        for e, c in other.terms:
            acc[e] = acc.get(e, 0) + c
        return LaurentPoly.from_dict(acc)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        acc: dict[int, int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                acc[e] = acc.get(e, 0) + c1 * c2
        return LaurentPoly.from_dict(acc)

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            raise ValueError("negative powers are not defined here")
        result = ONE
        for _ in range(n):
            result = result * self
        return result

    def shift(self, t: int) -> "LaurentPoly":
        """Multiply by A^t."""
        return LaurentPoly(tuple((e + t, c) for e, c in self.terms))

    def mirror(self) -> "LaurentPoly":
        """Substitute A -> A^-1 (the value of the mirror image)."""
        return LaurentPoly(tuple((-e, c) for e, c in reversed(self.terms)))

    @property
    def max_exp(self) -> Optional[int]:
        return self.terms[0][0] if self.terms else None

    @property
    def min_exp(self) -> Optional[int]:
        return self.terms[-1][0] if self.terms else None

    def text(self) -> str:
        """Render as "c*A^e" terms joined by " + " / " - ", constants bare."""
        if not self.terms:
            return "0"
        chunks: list[str] = []
        for e, c in self.terms:
            body = str(abs(c)) if e == 0 else f"{abs(c)}*A^{e}"
            if not chunks:
                chunks.append(body if c > 0 else f"-{body}")
            else:
                chunks.append(f" + {body}" if c > 0 else f" - {body}")
        return "".join(chunks)

    def __str__(self) -> str:
        return self.text()


ZERO = LaurentPoly()
ONE = LaurentPoly(((0, 1),))

# value of a disjoint contractible circle
DELTA = LaurentPoly.from_dict({2: -1, -2: -1})


def mirror_poly(p: LaurentPoly) -> LaurentPoly:
    return p.mirror()


# the known bracket value of the join jc(1,2,5,6,3,4); the calibration anchor
REFERENCE_JOIN_PERMUTATION = (1, 2, 5, 6, 3, 4)
REFERENCE_JOIN_POLYNOMIAL = LaurentPoly.from_pairs(
    [(13, 1), (11, 1), (7, 4), (5, 7), (3, 3), (-1, 2),
     (-3, 5), (-5, 3), (-9, 2), (-11, 3), (-13, 1)]
)

# candidate values for a noncontractible loop, tried during calibration
MU_CANDIDATES: tuple[tuple[str, LaurentPoly], ...] = (
    ("1", ONE),
    ("A^2+A^-2", LaurentPoly.from_dict({2: 1, -2: 1})),
    ("-A^2-A^-2", DELTA),
    ("A+A^-1", LaurentPoly.from_dict({1: 1, -1: 1})),
)

_UNIT_BOUND = 40  # |global unit exponent| searched during calibration


@dataclass(frozen=True)
class BracketConvention:
    """The four calibration parameters of the state sum.

    chirality_flip swaps which smoothing counts as the A-smoothing;
    loop_offset shifts the exponent of the per-loop factor delta, which
    counts every loop of a state (offset -1 is the usual delta^(loops - 1)
    normalization; every state has at least one loop, so the exponent never
    goes negative); noncontractible is an extra factor per noncontractible
    loop on top of its delta; unit_exponent is a global power of A.

    The per-loop factor must cover noncontractible loops as well: weighting
    only the contractible ones breaks invariance under triple-point moves
    of the projection direction for odd line counts.
    """

    chirality_flip: bool
    loop_offset: int
    noncontractible: LaurentPoly
    unit_exponent: int

    def __post_init__(self) -> None:
        if self.loop_offset not in (0, -1):
            raise ValueError("offset must be 0 or -1")

    def to_json(self) -> dict:
        return {
            "chirality_flip": self.chirality_flip,
            "loop_offset": self.loop_offset,
            "noncontractible": [[e, c] for e, c in self.noncontractible.terms],
            "unit_exponent": self.unit_exponent,
        }

    @staticmethod
    def from_json(data: Mapping) -> "BracketConvention":
        return BracketConvention(
            bool(data["chirality_flip"]),
            int(data["loop_offset"]),
            LaurentPoly.from_pairs([(int(e), int(c)) for e, c in data["noncontractible"]]),
            int(data["unit_exponent"]),
        )


# -- diagrams --------------------------------------------------------------------


@dataclass(frozen=True)
class Crossing:
    """One crossing of two projected lines.

    ``lines`` are 0-based indices (low, high); ``params`` the exact
    parameters of the crossing on each of the two lines; ``over`` the index
    of the line passing over; ``rotation`` the sign of
    det(dir_over, dir_under, view direction), which orients the smoothing
    rule.
    """

    lines: tuple[int, int]
    params: tuple[Fraction, Fraction]
    over: int
    rotation: int


@dataclass(frozen=True)
class Diagram:
    """A generic projection of a configuration to the projective plane.

    Every pair of lines crosses exactly once; each projected line closes up
    through one passage across the line at infinity.
    """

    n: int
    direction: Vec3
    crossings: tuple[Crossing, ...]
    line_order: tuple[tuple[int, ...], ...]  # crossing ids along each line


def project(c: Configuration, direction: Vec3) -> Diagram:
    """Project along ``direction``; raises NonGenericDirection when the view
    direction is parallel to a line, two projected lines are parallel, or
    crossings collide."""
    v = direction
    if v.is_zero():
        raise NonGenericDirection("zero vector")
    dirs = [l.dir for l in c.lines]
    for i, d in enumerate(dirs, start=1):
        if d.cross(v).is_zero():
            raise NonGenericDirection(f"parallel to line {i}")
    for (i, di), (j, dj) in combinations(enumerate(dirs, start=1), 2):
        if det3(di, dj, v) == 0:
            raise NonGenericDirection(f"lines {i} and {j} project to parallel lines")

    crossings: list[Crossing] = []
    per_line: list[list[tuple[Fraction, int]]] = [[] for _ in range(c.n)]
    for (i, a), (j, b) in combinations(enumerate(c.lines), 2):
        # a.base + s a.dir + lam v = b.base + t b.dir, solved by Cramer
        rhs = b.base - a.base
        d = det3(a.dir, -b.dir, v)
        s = det3(rhs, -b.dir, v) / d
        t = det3(a.dir, rhs, v) / d
        lam = det3(a.dir, -b.dir, rhs) / d
        # lam > 0 means the point of b sits farther along v: b passes over
        over = j if lam > 0 else i
        under = i + j - over
        rotation = sign(det3(c.lines[over].dir, c.lines[under].dir, v))
        idx = len(crossings)
        crossings.append(Crossing((i, j), (s, t), over, rotation))
        per_line[i].append((s, idx))
        per_line[j].append((t, idx))

    order: list[tuple[int, ...]] = []
    for i, entries in enumerate(per_line):
        params = [p for p, _ in entries]
        if len(set(params)) != len(params):
            raise NonGenericDirection(f"coincident crossings on line {i + 1}")
        entries.sort(key=lambda pc: pc[0])
        order.append(tuple(idx for _, idx in entries))
    return Diagram(c.n, v, tuple(crossings), tuple(order))


def _direction_candidates() -> Iterator[Vec3]:
    from math import gcd

    for radius in count(1):
        shell = []
        for x in range(-radius, radius + 1):
            for y in range(-radius, radius + 1):
                for z in range(-radius, radius + 1):
                    if max(abs(x), abs(y), abs(z)) != radius:
                        continue
                    if gcd(gcd(abs(x), abs(y)), abs(z)) != 1:
                        continue
                    first = next(v for v in (x, y, z) if v != 0)
                    if first < 0:
                        continue  # keep one representative per direction
                    shell.append((x, y, z))
        for x, y, z in sorted(shell):
            yield vec(x, y, z)


_DIRECTION_SEARCH_BOUND = 10_000


def find_generic_direction(c: Configuration) -> Vec3:
    """First small-integer direction, in a fixed deterministic order, that
    projects the configuration generically."""
    for tried, v in enumerate(_direction_candidates()):
        if tried >= _DIRECTION_SEARCH_BOUND:
            break
        try:
            project(c, v)
        except NonGenericDirection:
            continue
        return v
    raise DirectionSearchExhausted(
        f"no generic direction among the first {_DIRECTION_SEARCH_BOUND} candidates"
    )


# -- state sums -------------------------------------------------------------------


def _slot(crossing: int, is_high: int, side: int) -> int:
    return 4 * crossing + 2 * is_high + side


def _tracing_arrays(d: Diagram):
    n_cross = len(d.crossings)
    n_slots = 4 * n_cross
    seg_partner = np.zeros(n_slots, dtype=np.int64)
    seg_inf = np.zeros(n_slots, dtype=np.int64)
    for i in range(d.n):
        ids = d.line_order[i]
        slots = []
        for cid in ids:
            is_high = 1 if d.crossings[cid].lines[1] == i else 0
            slots.append((_slot(cid, is_high, 0), _slot(cid, is_high, 1)))
        for k in range(len(ids)):
            after = slots[k][1]
            before = slots[(k + 1) % len(ids)][0]
            seg_partner[after] = before
            seg_partner[before] = after
            if k == len(ids) - 1:  # the segment closing through infinity
                seg_inf[after] = 1
                seg_inf[before] = 1
    pair_a = np.zeros(n_slots, dtype=np.int64)
    pair_b = np.zeros(n_slots, dtype=np.int64)
    for cid, cr in enumerate(d.crossings):
        over_high = 1 if cr.over == cr.lines[1] else 0
        ob = _slot(cid, over_high, 0)
        oa = _slot(cid, over_high, 1)
        ub = _slot(cid, 1 - over_high, 0)
        ua = _slot(cid, 1 - over_high, 1)
        if cr.rotation > 0:
            first = ((oa, ub), (ob, ua))
            second = ((oa, ua), (ob, ub))
        else:
            first = ((oa, ua), (ob, ub))
            second = ((oa, ub), (ob, ua))
        for x, y in first:
            pair_a[x] = y
            pair_a[y] = x
        for x, y in second:
            pair_b[x] = y
            pair_b[y] = x
    return n_cross, seg_partner, seg_inf, pair_a, pair_b


@functools.lru_cache(maxsize=128)
def state_histogram(d: Diagram) -> tuple[tuple[tuple[int, int, int], int], ...]:
    """Counts of states by (first-kind smoothings, contractible loops,
    noncontractible loops); convention-independent."""
    n_cross = len(d.crossings)
    if n_cross == 0:
        # a single projective line: one state, one noncontractible loop
        return ((((0, 0, 1)), 1),)
    arrays = _tracing_arrays(d)
    counts = np.zeros((n_cross + 1, n_cross + d.n + 2, 2), dtype=np.int64)
    kernel = (
        trace_states_compiled
        if trace_states_compiled is not None and n_cross >= COMPILED_THRESHOLD
        else trace_states_python
    )
    kernel(*arrays, counts)
    out = []
    for num_a in range(counts.shape[0]):
        for loops_c in range(counts.shape[1]):
            for loops_nc in range(2):
                v = int(counts[num_a, loops_c, loops_nc])
                if v:
                    out.append(((num_a, loops_c, loops_nc), v))
    return tuple(out)


def _assemble(
    hist, n_cross: int, flip: bool, offset: int, mu: LaurentPoly, unit: int
) -> LaurentPoly:
    total = ZERO
    for (num_a, loops_c, loops_nc), cnt in hist:
        a = n_cross - num_a if flip else num_a
        delta_exp = max(loops_c + loops_nc + offset, 0)  # loops >= 1, no-op guard
        term = LaurentPoly.monomial(cnt, 2 * a - n_cross + unit)
        total = total + term * DELTA ** delta_exp * mu ** loops_nc
    return total


def state_sum(d: Diagram, convention: BracketConvention) -> LaurentPoly:
    """Evaluate the bracket state sum of a diagram under a convention."""
    return _assemble(
        state_histogram(d),
        len(d.crossings),
        convention.chirality_flip,
        convention.loop_offset,
        convention.noncontractible,
        convention.unit_exponent,
    )


# -- calibration -------------------------------------------------------------------


@dataclass(frozen=True)
class CalibrationResult:
    convention: BracketConvention
    matches: tuple[dict, ...]  # every grid point that reproduced the target
    note: str


def calibrate_full(
    reference: Optional[Configuration] = None,
    target: Optional[LaurentPoly] = None,
) -> CalibrationResult:
    """Search the convention grid for combinations reproducing the target.

    The reference defaults to the join jc(1,2,5,6,3,4) and the target to
    its known polynomial.  For a reference with an even number of lines no
    state contains a noncontractible loop (disjoint circles in the
    projective plane include at most one noncontractible member, and the
    total parity of infinity passages is even), so the noncontractible
    factor cannot be constrained; it is then fixed to 1, which gives a
    single projective line the bracket value A^unit.
    """
    if reference is None:
        from .constructions import jc

        reference = jc(REFERENCE_JOIN_PERMUTATION)
    if target is None:
        target = REFERENCE_JOIN_POLYNOMIAL

    d = project(reference, find_generic_direction(reference))
    hist = state_histogram(d)
    n_cross = len(d.crossings)

    matches = []
    nearest: list[tuple[str, LaurentPoly]] = []
    for flip in (False, True):
        for offset in (0, -1):
            for mu_name, mu in MU_CANDIDATES:
                base = _assemble(hist, n_cross, flip, offset, mu, unit=0)
                if not base or not target:
                    continue
                unit = target.max_exp - base.max_exp
                if abs(unit) > _UNIT_BOUND:
                    continue
                if base.shift(unit) == target:
                    matches.append(
                        {"chirality_flip": flip, "loop_offset": offset,
                         "noncontractible": mu_name, "unit_exponent": unit}
                    )
                elif mu_name == "1":
                    nearest.append((f"flip={flip} offset={offset}", base))
    if not matches:
        detail = "; ".join(f"{label}: {poly.text()}" for label, poly in nearest)
        raise CalibrationNoMatch(f"no convention reproduces the target; candidates: {detail}")

    cores = {(m["chirality_flip"], m["loop_offset"], m["unit_exponent"])
             for m in matches}
    if len(cores) > 1:
        raise CalibrationAmbiguous(f"multiple distinct conventions match: {sorted(cores)}")
    flip, offset, unit = next(iter(cores))

    mu_names = [m["noncontractible"] for m in matches]
    if len(matches) > 1:
        # the reference cannot see noncontractible loops; pick the neutral factor
        mu = ONE
        note = (
            "noncontractible factor unconstrained by the reference "
            f"(all of {mu_names} match); fixed to 1"
        )
    else:
        mu = dict(MU_CANDIDATES)[mu_names[0]]
        note = "convention uniquely determined"
    convention = BracketConvention(flip, offset, mu, unit)
    if state_sum(d, convention) != target:
        raise CalibrationNoMatch("internal check failed after grid search")
    return CalibrationResult(convention, tuple(matches), note)


def calibrate(
    reference: Optional[Configuration] = None,
    target: Optional[LaurentPoly] = None,
) -> BracketConvention:
    return calibrate_full(reference, target).convention


_DEFAULT_CONVENTION: Optional[BracketConvention] = None


def default_convention() -> BracketConvention:
    """The calibrated convention, computed once per process and cached."""
    global _DEFAULT_CONVENTION
    if _DEFAULT_CONVENTION is None:
        _DEFAULT_CONVENTION = calibrate()
    return _DEFAULT_CONVENTION


def drobotukhina(
    c: Configuration, convention: Optional[BracketConvention] = None
) -> LaurentPoly:
    """The bracket polynomial of a configuration under the calibrated
    convention: project along the first generic direction and evaluate the
    state sum.  A rigid-isotopy invariant of the configuration."""
    if convention is None:
        convention = default_convention()
    d = project(c, find_generic_direction(c))
    return state_sum(d, convention)
