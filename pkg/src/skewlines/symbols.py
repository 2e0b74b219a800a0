"""Decomposition symbols: nested <eps ...> notation for interlacings.

A symbol is a rooted tree.  Leaves stand for single lines; an internal node
with sign eps stands for a family of sub-interlacings carried by disjoint
hyperboloid tubes whose axis lines form a constant-sign family of sign eps.
Flat bundles are written ``<+3>``; nesting is written out, for example
``<+<1>,<-2>,<-3>>``.

``decompose`` inverts the notation: it repeatedly passes to the derived
interlacing (one representative per linking-equivalence class) and rebuilds
the tree bottom-up, verifying at the end that the emitted symbol reproduces
the input table exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import InconsistentClassSign, MissingSign, SymbolSyntaxError
from .invariants import TripleTable, _partition, _subsets3, class_epsilon

_SIGN_ORDER = {None: 0, 1: 1, -1: 2}
_SIGN_TEXT = {None: "", 1: "+", -1: "-"}


@dataclass(frozen=True)
class DecompSymbol:
    """A node of a decomposition symbol tree.

    ``children == ()`` marks a leaf (one line, never signed).  Internal
    nodes have at least two children and an optional sign; the sign may be
    omitted only where no triple ever queries it (a root with exactly two
    children, or a bare pair).
    """

    sign: Optional[int] = None
    children: tuple["DecompSymbol", ...] = ()

    def __post_init__(self) -> None:
        if self.sign not in (None, 1, -1):
            raise ValueError("sign must be +1, -1 or None")
        if not self.children and self.sign is not None:
            raise ValueError("a leaf carries no sign")
        if len(self.children) == 1:
            raise ValueError("an internal node needs at least two children")

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def leaf_count(self) -> int:
        if self.is_leaf:
            return 1
        return sum(ch.leaf_count() for ch in self.children)

    def sort_key(self):
        if self.is_leaf:
            return (1, 0, ())
        return (
            self.leaf_count(),
            _SIGN_ORDER[self.sign],
            tuple(ch.sort_key() for ch in self.children),
        )

    def canonical(self) -> "DecompSymbol":
        """Recursively sort children into the canonical order."""
        if self.is_leaf:
            return self
        kids = sorted((ch.canonical() for ch in self.children), key=DecompSymbol.sort_key)
        return DecompSymbol(self.sign, tuple(kids))

    def mirror(self) -> "DecompSymbol":
        """Negate every sign (the symbol of the mirror configuration)."""
        if self.is_leaf:
            return self
        s = None if self.sign is None else -self.sign
        return DecompSymbol(s, tuple(ch.mirror() for ch in self.children))

    def render(self) -> str:
        if self.is_leaf:
            return "<1>"
        body: str
        if all(ch.is_leaf for ch in self.children):
            body = str(len(self.children))
        else:
            body = ",".join(ch.render() for ch in self.children)
        return f"<{_SIGN_TEXT[self.sign]}{body}>"

    def __str__(self) -> str:
        return self.render()


LEAF = DecompSymbol()


def bundle(sign: Optional[int], count: int) -> DecompSymbol:
    """A flat family <sign count> of single lines."""
    if count == 1:
        if sign is not None:
            raise ValueError("a bundle of one line cannot carry a sign")
        return LEAF
    return DecompSymbol(sign, (LEAF,) * count)


def node(sign: Optional[int], *children: DecompSymbol) -> DecompSymbol:
    return DecompSymbol(sign, tuple(children))


# -- text grammar --------------------------------------------------------------
#
#   node  :=  "<" sign? body ">"
#   sign  :=  "+" | "-"
#   body  :=  integer            (a bundle of that many lines)
#          |  node ("," node)*


def parse_symbol(text: str) -> DecompSymbol:
    s = "".join(text.split())
    tree, pos = _parse_node(s, 0)
    if pos != len(s):
        raise SymbolSyntaxError(f"trailing characters at position {pos}: {s[pos:]!r}")
    return tree


def _parse_node(s: str, i: int) -> tuple[DecompSymbol, int]:
    if i >= len(s) or s[i] != "<":
        raise SymbolSyntaxError(f"expected '<' at position {i}")
    i += 1
    sign: Optional[int] = None
    if i < len(s) and s[i] in "+-":
        sign = 1 if s[i] == "+" else -1
        i += 1
    if i < len(s) and s[i].isdigit():
        j = i
        while j < len(s) and s[j].isdigit():
            j += 1
        count = int(s[i:j])
        if count < 1:
            raise SymbolSyntaxError("a bundle needs a positive count")
        if j >= len(s) or s[j] != ">":
            raise SymbolSyntaxError(f"expected '>' at position {j}")
        try:
            return bundle(sign, count), j + 1
        except ValueError as exc:
            raise SymbolSyntaxError(str(exc)) from exc
    children = []
    while True:
        child, i = _parse_node(s, i)
        children.append(child)
        if i < len(s) and s[i] == ",":
            i += 1
            continue
        if i < len(s) and s[i] == ">":
            break
        raise SymbolSyntaxError(f"expected ',' or '>' at position {i}")
    if len(children) == 1:
        raise SymbolSyntaxError("an internal node needs at least two children")
    return DecompSymbol(sign, tuple(children)), i + 1


# -- symbol -> table -------------------------------------------------------------

def _leaf_ancestries(s: DecompSymbol) -> list[tuple[tuple[tuple[int, ...], DecompSymbol], ...]]:
    """Per leaf (in DFS order): the chain of internal ancestors with positions.

    Positions (child-index paths) distinguish structurally equal siblings,
    which compare equal as values.
    """
    out: list[tuple[tuple[tuple[int, ...], DecompSymbol], ...]] = []

    def walk(nd: DecompSymbol, pos: tuple[int, ...], anc) -> None:
        if nd.is_leaf:
            out.append(anc)
            return
        anc2 = anc + (((pos), nd),)
        for idx, ch in enumerate(nd.children):
            walk(ch, pos + (idx,), anc2)

    walk(s, (), ())
    return out


def _deepest_pair_node(ancestries, a: int, b: int) -> tuple[int, DecompSymbol]:
    pa, pb = ancestries[a], ancestries[b]
    depth = 0
    while depth < len(pa) and depth < len(pb) and pa[depth][0] == pb[depth][0]:
        depth += 1
    # depth is the number of shared ancestors; the LCA is the last shared one
    return depth, pa[depth - 1][1]


def symbol_to_table(s: DecompSymbol) -> TripleTable:
    """The triple table a symbol denotes, on leaves labeled 1..n in DFS order.

    The entry of a 3-subset is the sign of the deepest node that is the
    least common ancestor of at least two of the three leaves.
    """
    ancestries = _leaf_ancestries(s)
    n = len(ancestries)
    signs = []
    for (i, j, k) in _subsets3(n):
        best_depth, best_node = max(
            _deepest_pair_node(ancestries, i - 1, j - 1),
            _deepest_pair_node(ancestries, i - 1, k - 1),
            _deepest_pair_node(ancestries, j - 1, k - 1),
            key=lambda t: t[0],
        )
        if best_node.sign is None:
            raise MissingSign(
                f"triple {(i, j, k)} needs the sign of node {best_node.render()}"
            )
        signs.append(best_node.sign)
    return TripleTable(n, tuple(signs))


# -- table -> symbol -------------------------------------------------------------
#
# Internal labeled trees:  ("leaf", label)  |  ("node", sign, [children])

_Labeled = tuple


def decompose(t: TripleTable) -> Optional[DecompSymbol]:
    """Decomposition symbol of a table, or None when not completely decomposable.

    Works by iterated derivation: split into linking-equivalence classes,
    decompose the derived table of class representatives, then hang the
    class bundles (signed with their epsilon) off its leaves.  The result
    is verified to reproduce the table exactly before it is returned.
    """
    labeled = _decompose_labeled(t, tuple(range(1, t.n + 1)))
    if labeled is None:
        return None
    rebuilt = _labeled_table(labeled, t.n)
    if rebuilt is None or rebuilt != t:
        return None
    return _strip(labeled).canonical()


def _decompose_labeled(t: TripleTable, labels: tuple[int, ...]) -> Optional[_Labeled]:
    n = t.n
    if n == 1:
        return ("leaf", labels[0])
    classes = _partition(t)
    if len(classes) == 1:
        if n == 2:
            return ("node", None, [("leaf", labels[0]), ("leaf", labels[1])])
        values = set(t.signs)
        if len(values) == 1:
            return ("node", t.signs[0], [("leaf", lab) for lab in labels])
        return None
    if all(len(cls) == 1 for cls in classes):
        return None  # the derived interlacing is the whole interlacing

    reps = [cls[0] for cls in classes]  # smallest member; already sorted
    derived = t.restrict(reps)
    skeleton = _decompose_labeled(derived, tuple(range(len(classes))))
    if skeleton is None:
        return None

    class_trees: list[_Labeled] = []
    for cls in classes:
        if len(cls) == 1:
            class_trees.append(("leaf", labels[cls[0] - 1]))
            continue
        try:
            eps = class_epsilon(t, cls)
        except InconsistentClassSign:
            return None
        sub = _decompose_labeled(t.restrict(cls), tuple(labels[m - 1] for m in cls))
        if sub is None or sub[0] != "node":
            return None
        _, sub_sign, sub_children = sub
        if sub_sign is None:
            sub = ("node", eps, sub_children)
        elif sub_sign != eps:
            return None
        class_trees.append(sub)

    return _substitute(skeleton, class_trees)


def _substitute(tree: _Labeled, class_trees: list[_Labeled]) -> _Labeled:
    if tree[0] == "leaf":
        return class_trees[tree[1]]
    return ("node", tree[1], [_substitute(ch, class_trees) for ch in tree[2]])


def _strip(tree: _Labeled) -> DecompSymbol:
    if tree[0] == "leaf":
        return LEAF
    return DecompSymbol(tree[1], tuple(_strip(ch) for ch in tree[2]))


def _labeled_table(tree: _Labeled, n: int) -> Optional[TripleTable]:
    """Table generated by a labeled tree under the LCA-sign semantics."""
    ancestry: dict[int, tuple[tuple[tuple[int, ...], Optional[int]], ...]] = {}

    def walk(nd: _Labeled, pos: tuple[int, ...], anc) -> None:
        if nd[0] == "leaf":
            ancestry[nd[1]] = anc
            return
        anc2 = anc + ((pos, nd[1]),)
        for idx, ch in enumerate(nd[2]):
            walk(ch, pos + (idx,), anc2)

    walk(tree, (), ())
    if sorted(ancestry) != list(range(1, n + 1)):
        return None

    def pair_depth(a: int, b: int) -> tuple[int, Optional[int]]:
        pa, pb = ancestry[a], ancestry[b]
        depth = 0
        while depth < len(pa) and depth < len(pb) and pa[depth][0] == pb[depth][0]:
            depth += 1
        return depth, pa[depth - 1][1]

    signs = []
    for (i, j, k) in _subsets3(n):
        _, s = max(pair_depth(i, j), pair_depth(i, k), pair_depth(j, k),
                   key=lambda t: t[0])
        if s is None:
            return None
        signs.append(s)
    return TripleTable(n, tuple(signs))
