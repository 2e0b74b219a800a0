"""Classification of join configurations and identification of inputs.

``classify_joins`` sweeps all permutations of a given size, builds the join
of each, and clusters by canonical triple table -- for joins, equality of
linking data decides rigid isotopy, so the clusters are the isotopy
classes.  One bracket polynomial is evaluated per cluster representative.

The module also carries the frozen regression data (symbol identities,
expected class counts, reference polynomials) and a runner for them.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Optional

from .bracket import (
    BracketConvention,
    LaurentPoly,
    REFERENCE_JOIN_PERMUTATION,
    REFERENCE_JOIN_POLYNOMIAL,
    default_convention,
    drobotukhina,
    mirror_poly,
)
from .errors import ComputationError, TooLarge
from .geometry import Configuration
from .invariants import (
    TripleTable,
    canonical_signs,
    canonical_table,
    podkorytov_exists,
    triple_sum,
    triple_table,
)
from .symbols import DecompSymbol, decompose, parse_symbol
from .constructions import jc, mirror_permutation

CLASSIFY_MAX_N = 7
ORDERED_MAX_N = 5


@dataclass(frozen=True)
class Profile:
    """The discriminating data of one configuration."""

    n: int
    canonical: TripleTable
    triple_sum: int
    symbol: Optional[DecompSymbol]  # None = not completely decomposable
    bracket: Optional[LaurentPoly]  # None when no calibration was supplied


@dataclass(frozen=True)
class JoinCluster:
    """One rigid-isotopy class of join configurations."""

    representative: tuple[int, ...]
    members: tuple[tuple[int, ...], ...]
    canonical: TripleTable
    symbol: Optional[DecompSymbol]
    triple_sum: int
    bracket: Optional[LaurentPoly]


@dataclass(frozen=True)
class IdentifyResult:
    profile: Profile
    cluster: Optional[JoinCluster]  # None = non-join or unknown


def _labeled_signs(sigma: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return sigma, triple_table(jc(sigma)).signs


def classify_joins(
    n: int,
    *,
    include_brackets: bool = True,
    convention: Optional[BracketConvention] = None,
    threads: Optional[int] = None,
) -> tuple[JoinCluster, ...]:
    """All rigid-isotopy classes of joins of n strands, built geometrically.

    Every permutation is realized, its triple table computed from the
    coordinates, and tables clustered by canonical form.  With brackets
    enabled, one polynomial is evaluated per cluster and asserted pairwise
    distinct -- an independent cross-check of the clustering.
    """
    if not 2 <= n <= CLASSIFY_MAX_N:
        raise TooLarge(f"join classification covers 2 <= n <= {CLASSIFY_MAX_N}")

    sigmas = [tuple(p) for p in permutations(range(1, n + 1))]
    if n == 2:
        # no triples; a single class
        empty = TripleTable(2, ())
        bracket = None
        if include_brackets:
            bracket = drobotukhina(jc((1, 2)), convention or default_convention())
        return (
            JoinCluster((1, 2), tuple(sorted(sigmas)), empty, decompose(empty), 0, bracket),
        )

    if threads and threads > 1:
        from multiprocessing import Pool

        with Pool(threads) as pool:
            labeled = pool.map(_labeled_signs, sigmas, chunksize=64)
    else:
        labeled = [_labeled_signs(s) for s in sigmas]

    by_signs: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for sigma, signs in labeled:
        by_signs.setdefault(signs, []).append(sigma)

    by_canon: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for signs, members in by_signs.items():
        by_canon.setdefault(canonical_signs(n, signs), []).extend(members)

    conv = None
    if include_brackets:
        conv = convention or default_convention()

    clusters = []
    for canon in sorted(by_canon):
        members = tuple(sorted(by_canon[canon]))
        table = TripleTable(n, canon)
        bracket = drobotukhina(jc(members[0]), conv) if conv is not None else None
        clusters.append(
            JoinCluster(members[0], members, table, decompose(table),
                        triple_sum(table), bracket)
        )

    if conv is not None:
        values = [cl.bracket for cl in clusters]
        if len(set(values)) != len(values):
            raise ComputationError(
                f"bracket polynomials fail to separate the {len(clusters)} "
                f"clusters of {n}-line joins"
            )
    return tuple(clusters)


_CLUSTER_CACHE: dict[int, tuple[JoinCluster, ...]] = {}


def _cached_clusters(n: int) -> tuple[JoinCluster, ...]:
    if n not in _CLUSTER_CACHE:
        _CLUSTER_CACHE[n] = classify_joins(n, include_brackets=False)
    return _CLUSTER_CACHE[n]


def profile(
    c: Configuration, convention: Optional[BracketConvention] = None
) -> Profile:
    """Invariant profile of a configuration; bracket only with a convention."""
    t = triple_table(c) if c.n >= 3 else TripleTable(c.n, ())
    canon = canonical_table(t)
    bracket = drobotukhina(c, convention) if convention is not None else None
    return Profile(c.n, canon, triple_sum(t), decompose(canon), bracket)


def identify(
    c: Configuration, convention: Optional[BracketConvention] = None
) -> IdentifyResult:
    """Match a configuration against the join classification of its size.

    A configuration whose canonical table appears in no join cluster is
    reported as non-join or unknown (cluster None).
    """
    if c.n > CLASSIFY_MAX_N:
        raise TooLarge(f"identification covers n <= {CLASSIFY_MAX_N}")
    prof = profile(c, convention)
    if c.n < 2:
        return IdentifyResult(prof, None)
    for cluster in _cached_clusters(c.n):
        if cluster.canonical == prof.canonical:
            return IdentifyResult(prof, cluster)
    return IdentifyResult(prof, None)


def ordered_join_classes(n: int) -> int:
    """Number of distinct labeled triple tables over all joins and relabelings."""
    if not 2 <= n <= ORDERED_MAX_N:
        raise TooLarge(f"ordered classification covers 2 <= n <= {ORDERED_MAX_N}")
    if n == 2:
        return 1
    base: set[tuple[int, ...]] = set()
    for sigma in permutations(range(1, n + 1)):
        base.add(triple_table(jc(sigma)).signs)
    seen: set[tuple[int, ...]] = set()
    relabelings = [tuple(p) for p in permutations(range(1, n + 1))]
    for signs in base:
        t = TripleTable(n, signs)
        for tau in relabelings:
            seen.add(t.relabel(tau).signs)
    return len(seen)


def five_line_sums() -> dict[JoinCluster, int]:
    """Triple sums of the seven five-line clusters (pairwise distinct)."""
    return {cluster: cluster.triple_sum for cluster in _cached_clusters(5)}


# -- frozen regression data ------------------------------------------------------

#: The printed symbol identities for six-line joins: permutation -> symbol.
JC_SYMBOL_IDENTITIES: tuple[tuple[tuple[int, ...], str], ...] = (
    ((1, 2, 3, 4, 5, 6), "<-6>"),
    ((6, 5, 4, 3, 2, 1), "<+6>"),
    ((1, 2, 3, 4, 6, 5), "<<+2>,<-4>>"),
    ((5, 6, 4, 3, 2, 1), "<<-2>,<+4>>"),
    ((1, 2, 3, 5, 6, 4), "<+<1>,<-2>,<-3>>"),
    ((4, 6, 5, 3, 2, 1), "<-<1>,<+2>,<+3>>"),
    ((1, 2, 4, 3, 6, 5), "<-<+2>,<+2>,<-2>>"),
    ((5, 6, 3, 4, 2, 1), "<+<+2>,<-2>,<-2>>"),
    ((1, 2, 5, 6, 3, 4), "<+<-2>,<-2>,<-2>>"),
    ((4, 3, 6, 5, 2, 1), "<-<+2>,<+2>,<+2>>"),
    ((1, 2, 3, 6, 5, 4), "<<+3>,<-3>>"),
    ((1, 2, 4, 6, 5, 3), "<<+<1>,<-2>>,<-<1>,<+2>>>"),
)

#: Mirror pairs of six-line joins (sigma and sigma o reverse).
MIRROR_JC_PAIRS: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...] = (
    ((1, 2, 3, 4, 5, 6), (6, 5, 4, 3, 2, 1)),
    ((1, 2, 3, 4, 6, 5), (5, 6, 4, 3, 2, 1)),
    ((1, 2, 3, 5, 6, 4), (4, 6, 5, 3, 2, 1)),
    ((1, 2, 4, 3, 6, 5), (5, 6, 3, 4, 2, 1)),
    ((1, 2, 5, 6, 3, 4), (4, 3, 6, 5, 2, 1)),
)

#: Six-line joins that are not completely decomposable.
NONDECOMPOSABLE_SIX_JOINS: tuple[tuple[int, ...], ...] = (
    (1, 3, 5, 2, 6, 4),  # amphicheiral, its own derived interlacing
    (1, 2, 4, 6, 3, 5),  # mirror pair with the next; derived = five-line type
    (5, 3, 6, 4, 2, 1),
)

EXPECTED_JOIN_CLASS_COUNTS = {2: 1, 3: 2, 4: 3, 5: 7, 6: 15, 7: 48}
EXPECTED_ORDERED_CLASS_COUNTS = {2: 1, 3: 2, 4: 8, 5: 64}
FIVE_LINE_SUM_EXTREMES = (-10, 10)

#: Known bracket values of the four six-line types that are not joins.
#: This package cannot rebuild them (no rational coordinates are available
#: for these types); they serve as cross-checks for user-supplied data.
NONJOIN_SIX_LINE_BRACKETS: dict[str, LaurentPoly] = {
    "M": LaurentPoly.from_pairs(
        [(15, -1), (11, 6), (9, 6), (7, -5), (5, -6), (3, 10), (1, 16),
         (-1, 1), (-3, -10), (-7, 10), (-9, 5)]
    ),
    "M_mirror": LaurentPoly.from_pairs(
        [(9, 5), (7, 10), (3, -10), (1, 1), (-1, 16), (-3, 10), (-5, -6),
         (-7, -5), (-9, 6), (-11, 6), (-15, -1)]
    ),
    "L": LaurentPoly.from_pairs(
        [(17, 1), (13, -5), (9, 15), (7, 10), (5, -13), (3, -12), (1, 15),
         (-1, 22), (-3, -1), (-5, -12), (-7, 1), (-9, 8), (-11, 3)]
    ),
}

PODKORYTOV_SAMPLES: tuple[tuple[int, int, bool], ...] = (
    (4, 0, True),
    (3, 0, False),
    (0, 6, False),
    (2, 1, True),
)


@dataclass(frozen=True)
class GoldenCheck:
    name: str
    passed: bool
    detail: str


def run_golden_checks(
    include_slow: bool = False,
    convention: Optional[BracketConvention] = None,
) -> list[GoldenCheck]:
    """Run every frozen regression; convention None calibrates in-process."""
    conv = convention or default_convention()
    checks: list[GoldenCheck] = []

    def add(name: str, passed: bool, detail: str = "") -> None:
        checks.append(GoldenCheck(name, passed, detail))

    for sigma, text in JC_SYMBOL_IDENTITIES:
        got = decompose(triple_table(jc(sigma)))
        want = parse_symbol(text).canonical()
        add(
            f"symbol jc{sigma}",
            got == want,
            f"got {got.render() if got else 'nondecomposable'}, want {want.render()}",
        )

    for sigma in NONDECOMPOSABLE_SIX_JOINS:
        got = decompose(triple_table(jc(sigma)))
        add(f"nondecomposable jc{sigma}", got is None,
            "decomposed unexpectedly" if got else "")

    sizes = (3, 4, 5, 6) + ((7,) if include_slow else ())
    for n in sizes:
        clusters = classify_joins(n, include_brackets=(n >= 4), convention=conv)
        add(
            f"join classes n={n}",
            len(clusters) == EXPECTED_JOIN_CLASS_COUNTS[n],
            f"got {len(clusters)}, want {EXPECTED_JOIN_CLASS_COUNTS[n]}",
        )

    for sigma, tau in MIRROR_JC_PAIRS:
        lhs = canonical_table(triple_table(jc(tau)))
        rhs = canonical_table(triple_table(jc(sigma)).negate())
        add(f"mirror pair jc{sigma}", lhs == rhs, "")

    value = drobotukhina(jc(REFERENCE_JOIN_PERMUTATION), conv)
    add("bracket reference value", value == REFERENCE_JOIN_POLYNOMIAL, value.text())
    mirrored = drobotukhina(jc(mirror_permutation(REFERENCE_JOIN_PERMUTATION)), conv)
    add(
        "bracket mirror value",
        mirrored == mirror_poly(REFERENCE_JOIN_POLYNOMIAL),
        mirrored.text(),
    )
    add(
        "published mirror pair M/M'",
        mirror_poly(NONJOIN_SIX_LINE_BRACKETS["M"]) == NONJOIN_SIX_LINE_BRACKETS["M_mirror"],
        "",
    )

    sums = sorted(five_line_sums().values())
    add(
        "five-line sums",
        len(set(sums)) == 7 and (sums[0], sums[-1]) == FIVE_LINE_SUM_EXTREMES,
        f"{sums}",
    )

    for n, want in sorted(EXPECTED_ORDERED_CLASS_COUNTS.items()):
        got = ordered_join_classes(n)
        add(f"ordered classes n={n}", got == want, f"got {got}, want {want}")

    for p, q, want in PODKORYTOV_SAMPLES:
        add(f"podkorytov p={p} q={q}", podkorytov_exists(p, q) is want, "")

    return checks
