"""Finite posets and finite topological spaces.

A finite topology is the same data as a preorder: the opens of the
Alexandroff topology of a poset are exactly its upsets, and the
specialization order (x <= y iff x lies in the closure of {y}) recovers
the poset.  Everything here is exhaustively verified at construction,
which is affordable because every space we build has a handful of
points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, NamedTuple


class NotT0Error(ValueError):
    """Raised when a space has two distinct points with identical closures."""


class PosetError(ValueError):
    """Raised when a relation fails to be a partial order."""


class TopologyError(ValueError):
    """Raised when a family of opens fails to be a topology."""


@dataclass(frozen=True)
class FinPoset:
    """A finite poset: opaque elements plus the full order relation.

    ``order`` holds every pair ``(lesser, greater)`` including the
    reflexive pairs.  Construction rejects anything that is not
    reflexive, antisymmetric and transitive.
    """

    elements: frozenset
    order: frozenset

    def __post_init__(self):
        for pair in self.order:
            if len(pair) != 2:
                raise PosetError(f"order entry {pair!r} is not a pair")
            a, b = pair
            if a not in self.elements or b not in self.elements:
                raise PosetError(f"order pair {pair!r} uses unknown elements")
        up = {x: set() for x in self.elements}
        for a, b in self.order:
            up[a].add(b)
        for x in self.elements:
            if x not in up[x]:
                raise PosetError(f"order is not reflexive at {x!r}")
        for a, b in self.order:
            if a != b and a in up[b]:
                raise PosetError(f"order is not antisymmetric on {a!r}, {b!r}")
        for a in self.elements:
            for b in up[a]:
                if not up[b] <= up[a]:
                    c = next(iter(up[b] - up[a]))
                    raise PosetError(
                        f"order is not transitive: {a!r} <= {b!r} <= {c!r}"
                    )

    @classmethod
    def from_pairs(cls, elements: Iterable, pairs: Iterable) -> "FinPoset":
        """Build a poset from generating strict/weak pairs.

        Takes the reflexive-transitive closure of ``pairs``; antisymmetry
        of the result is still checked.
        """
        elems = frozenset(elements)
        up = {x: {x} for x in elems}
        for a, b in pairs:
            if a not in elems or b not in elems:
                raise PosetError(f"pair ({a!r}, {b!r}) uses unknown elements")
            up[a].add(b)
        changed = True
        while changed:
            changed = False
            for x in elems:
                new = set(up[x])
                for y in up[x]:
                    new |= up[y]
                if new != up[x]:
                    up[x] = new
                    changed = True
        order = frozenset((a, b) for a in elems for b in up[a])
        return cls(elems, order)

    @cached_property
    def _up(self) -> dict:
        up = {x: set() for x in self.elements}
        for a, b in self.order:
            up[a].add(b)
        return {x: frozenset(s) for x, s in up.items()}

    @cached_property
    def _down(self) -> dict:
        down = {x: set() for x in self.elements}
        for a, b in self.order:
            down[b].add(a)
        return {x: frozenset(s) for x, s in down.items()}

    def leq(self, a, b) -> bool:
        return (a, b) in self.order

    def up(self, x) -> frozenset:
        """The upset of x: all y with x <= y."""
        return self._up[x]

    def down(self, x) -> frozenset:
        """The downset of x: all y with y <= x."""
        return self._down[x]

    @cached_property
    def heights(self) -> dict:
        """Height of every element: longest chain ending there."""
        h = {}

        def height_of(x):
            if x in h:
                return h[x]
            below = [y for y in self._down[x] if y != x]
            h[x] = 0 if not below else 1 + max(height_of(y) for y in below)
            return h[x]

        for x in self.elements:
            height_of(x)
        return h

    def height(self) -> int | None:
        """Height of the poset; None for the empty poset (undefined)."""
        if not self.elements:
            return None
        return max(self.heights.values())

    def level(self, k: int) -> frozenset:
        """All elements of height exactly k."""
        return frozenset(x for x, h in self.heights.items() if h == k)


class MultigraphLikeness(NamedTuple):
    ok: bool
    witness: Hashable | None


def is_multigraph_like(poset: FinPoset) -> MultigraphLikeness:
    """Check height <= 1 and |downset| <= 3 everywhere.

    On failure the witness is an offending element.
    """
    for x in sorted(poset.elements, key=repr):
        if poset.heights[x] > 1:
            return MultigraphLikeness(False, x)
        if len(poset.down(x)) > 3:
            return MultigraphLikeness(False, x)
    return MultigraphLikeness(True, None)


def is_connected_poset(poset: FinPoset) -> bool:
    """Connectivity of the comparability graph; the empty poset is disconnected."""
    if not poset.elements:
        return False
    start = next(iter(poset.elements))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in (poset.up(x) | poset.down(x)) - seen:
            seen.add(y)
            stack.append(y)
    return seen == poset.elements


@dataclass(frozen=True)
class FinSpace:
    """A finite topological space with its full family of opens.

    Construction verifies the family exhaustively: empty set and whole
    set present, closed under pairwise union and intersection (which for
    a finite family is closure under arbitrary union and finite
    intersection).
    """

    points: frozenset
    opens: frozenset

    # bit index per point, fixed by sorted repr for determinism
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {p: i for i, p in enumerate(sorted(self.points, key=repr))}
        object.__setattr__(self, "_index", index)
        masks = set()
        for u in self.opens:
            if not u <= self.points:
                raise TopologyError(f"open {set(u)!r} is not a subset of the points")
            masks.add(self._mask(u))
        if len(masks) != len(self.opens):
            raise TopologyError("duplicate opens")
        full = (1 << len(self.points)) - 1
        if 0 not in masks:
            raise TopologyError("the empty set is not open")
        if full not in masks:
            raise TopologyError("the whole set is not open")
        mask_list = sorted(masks)
        for i, a in enumerate(mask_list):
            for b in mask_list[i + 1:]:
                if a | b not in masks:
                    raise TopologyError("opens are not closed under union")
                if a & b not in masks:
                    raise TopologyError("opens are not closed under intersection")

    def _mask(self, subset: frozenset) -> int:
        m = 0
        for p in subset:
            m |= 1 << self._index[p]
        return m

    def closure(self, subset: frozenset) -> frozenset:
        """Smallest closed set containing ``subset``."""
        hole = frozenset().union(
            *(u for u in self.opens if not u & subset)
        ) if self.opens else frozenset()
        return self.points - frozenset(hole)


class SeparationAxioms(NamedTuple):
    t0: bool
    t1: bool
    t2: bool


def separation_axioms(space: FinSpace) -> SeparationAxioms:
    """Exhaustive T0/T1/T2 check; for finite spaces T1 and T2 both mean discrete."""
    pts = sorted(space.points, key=repr)
    t0 = t1 = t2 = True
    for i, x in enumerate(pts):
        for y in pts[i + 1:]:
            sep_x = any(x in u and y not in u for u in space.opens)
            sep_y = any(y in u and x not in u for u in space.opens)
            if not (sep_x or sep_y):
                t0 = False
            if not (sep_x and sep_y):
                t1 = False
            if not any(
                x in u and y in v and not u & v
                for u in space.opens
                for v in space.opens
            ):
                t2 = False
    return SeparationAxioms(t0, t1, t2)


def specialization_order(space: FinSpace) -> FinPoset:
    """The specialization order: x <= y iff x lies in the closure of {y}.

    Equivalently, every open containing x contains y.  Raises NotT0Error
    when the preorder is not antisymmetric, i.e. two points share their
    closure.
    """
    pts = sorted(space.points, key=repr)
    opens_by_point = {x: [u for u in space.opens if x in u] for x in pts}
    pairs = set()
    for x in pts:
        for y in pts:
            if all(y in u for u in opens_by_point[x]):
                pairs.add((x, y))
    for x in pts:
        for y in pts:
            if x != y and (x, y) in pairs and (y, x) in pairs:
                raise NotT0Error(
                    f"points {x!r} and {y!r} have identical closures"
                )
    return FinPoset(space.points, frozenset(pairs))


def alexandroff_space(poset: FinPoset) -> FinSpace:
    """The Alexandroff topology of a poset: opens are exactly the upsets."""
    elems = sorted(poset.elements, key=repr)
    n = len(elems)
    up_mask = [0] * n
    for i, x in enumerate(elems):
        for j, y in enumerate(elems):
            if poset.leq(x, y):
                up_mask[i] |= 1 << j
    opens = []
    for mask in range(1 << n):
        if all(up_mask[i] | mask == mask for i in range(n) if mask >> i & 1):
            opens.append(
                frozenset(elems[i] for i in range(n) if mask >> i & 1)
            )
    return FinSpace(poset.elements, frozenset(opens))
