"""The labeled invariant graph and the full invariant pair.

Vertices stand for quasi-centers (c), one-sided periodic orbits off the
boundary (n), boundary periodic orbits (b) and polycycles (d, pointing
at a diagram component).  Annulus edges carry the ordered pair of
attachment points (negative side, positive side); a polycycle attachment
also names which boundary circle of its neighborhood the annulus glues
to, by face index.  A valid pair consumes every attachment point exactly
once: each c/n/b vertex has one free boundary circle, and every face
circle of every polycycle bounds exactly one periodic annulus.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .diagram import (
    SaddleDiagram,
    Violation,
    diagram_components,
    faces_by_component,
    validate_diagram,
)
from .multigraph import Multigraph
from .topology import FinPoset

C, N, B, D = "c", "n", "b", "d"
LABELS = (C, N, B, D)


class PairValidationError(ValueError):
    """Raised when an operation requires a valid pair and gets violations."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(v.message for v in self.violations))


@dataclass(frozen=True)
class VertexNode:
    id: str
    label: str
    component: str | None = None  # diagram component id, only for label "d"


@dataclass(frozen=True)
class Attachment:
    vertex: str
    face: int | None = None  # face index within the component, only for "d" vertices

    def key(self) -> tuple:
        return (self.vertex, self.face)


@dataclass(frozen=True)
class AnnulusEdge:
    id: str
    neg: Attachment
    pos: Attachment


@dataclass(frozen=True)
class InvariantPair:
    """The complete invariant: labeled graph cross-referencing the diagram."""

    diagram: SaddleDiagram
    vertices: tuple
    annuli: tuple
    tori: int = 0

    def __post_init__(self):
        object.__setattr__(
            self, "vertices", tuple(sorted(self.vertices, key=lambda v: v.id))
        )
        object.__setattr__(
            self, "annuli", tuple(sorted(self.annuli, key=lambda a: a.id))
        )

    @cached_property
    def vertex_by_id(self) -> dict:
        return {v.id: v for v in self.vertices}

    @cached_property
    def annulus_by_id(self) -> dict:
        return {a.id: a for a in self.annuli}

    def saddle_count(self) -> int:
        return len(self.diagram.saddles)

    def center_count(self) -> int:
        return sum(1 for v in self.vertices if v.label == C)


def validate_pair(p: InvariantPair) -> list:
    """Check the whole model; empty list means valid.

    Beyond diagram validity: unique ids, labels resolve, polycycle
    vertices biject with diagram components, every attachment resolves,
    and the attachment matching is perfect.
    """
    violations = list(validate_diagram(p.diagram))

    def bad(kind, subject, rule, message):
        violations.append(Violation(kind, subject, rule, message))

    seen = set()
    for v in p.vertices:
        if v.id in seen:
            bad("vertex", v.id, "unique-id", f"duplicate vertex id {v.id!r}")
        seen.add(v.id)
    for a in p.annuli:
        if a.id in seen:
            bad("annulus", a.id, "unique-id",
                f"annulus id {a.id!r} collides with another id")
        seen.add(a.id)

    if not isinstance(p.tori, int) or p.tori < 0:
        bad("model", "", "tori", f"torus count {p.tori!r} must be a non-negative integer")

    if violations:
        return violations  # cross-references below assume a sane diagram

    comps = diagram_components(p.diagram)
    comp_ids = {c[0] for c in comps}
    faces = faces_by_component(p.diagram)

    comp_vertex = {}
    for v in p.vertices:
        if v.label not in LABELS:
            bad("vertex", v.id, "label", f"vertex {v.id!r} has unknown label {v.label!r}")
            continue
        if v.label == D:
            if v.component is None:
                bad("vertex", v.id, "component-ref",
                    f"polycycle vertex {v.id!r} names no diagram component")
            elif v.component not in comp_ids:
                bad("vertex", v.id, "component-ref",
                    f"vertex {v.id!r} references unknown component {v.component!r}")
            elif v.component in comp_vertex:
                bad("vertex", v.id, "component-ref",
                    f"components must label exactly one vertex;"
                    f" {v.component!r} labels both {comp_vertex[v.component]!r} and {v.id!r}")
            else:
                comp_vertex[v.component] = v.id
        elif v.component is not None:
            bad("vertex", v.id, "component-ref",
                f"vertex {v.id!r} has label {v.label!r} but names a component")
    for comp_id in sorted(comp_ids - set(comp_vertex)):
        bad("model", comp_id, "component-ref",
            f"diagram component {comp_id!r} is the label of no vertex")

    if violations:
        return violations

    use = {}  # attachment point key -> list of (annulus id, side)
    for a in p.annuli:
        for side, att in (("neg", a.neg), ("pos", a.pos)):
            v = p.vertex_by_id.get(att.vertex)
            if v is None:
                bad("annulus", a.id, "attachment",
                    f"annulus {a.id!r} {side} side references unknown vertex {att.vertex!r}")
                continue
            if v.label == D:
                if att.face is None:
                    bad("annulus", a.id, "attachment",
                        f"annulus {a.id!r} {side} side attaches to polycycle"
                        f" {v.id!r} without naming a face")
                    continue
                n_faces = len(faces.get(v.component, []))
                if not 0 <= att.face < n_faces:
                    bad("annulus", a.id, "attachment",
                        f"annulus {a.id!r} {side} side names face {att.face}"
                        f" of component {v.component!r} which has {n_faces} faces")
                    continue
            elif att.face is not None:
                bad("annulus", a.id, "attachment",
                    f"annulus {a.id!r} {side} side names a face on"
                    f" non-polycycle vertex {v.id!r}")
                continue
            use.setdefault(att.key(), []).append((a.id, side))

    for v in p.vertices:
        if v.label == D:
            for idx in range(len(faces.get(v.component, []))):
                users = use.get((v.id, idx), [])
                if not users:
                    bad("vertex", v.id, "matching",
                        f"face {idx} of component {v.component!r} bounds no annulus")
                elif len(users) > 1:
                    bad("vertex", v.id, "matching",
                        f"face {idx} of component {v.component!r} bounds"
                        f" {len(users)} annuli: {sorted(users)}")
        else:
            users = use.get((v.id, None), [])
            if not users:
                bad("vertex", v.id, "matching",
                    f"{v.label}-vertex {v.id!r} is attached to no annulus")
            elif len(users) > 1:
                bad("vertex", v.id, "matching",
                    f"{v.label}-vertex {v.id!r} is attached to {len(users)}"
                    f" annuli: {sorted(users)}")

    if not p.vertices and not p.annuli and p.tori == 0:
        bad("model", "", "nonempty", "model has no cells at all")

    return violations


def check_pair(p: InvariantPair) -> None:
    violations = validate_pair(p)
    if violations:
        raise PairValidationError(violations)


def to_extended_poset(p: InvariantPair) -> FinPoset:
    """Vertices at height 0, annuli above their endpoint vertices.

    Each periodic torus contributes one isolated height-0 point.
    """
    check_pair(p)
    elems = [("v", v.id) for v in p.vertices]
    pairs = []
    for a in p.annuli:
        elems.append(("a", a.id))
        pairs.append((("v", a.neg.vertex), ("a", a.id)))
        pairs.append((("v", a.pos.vertex), ("a", a.id)))
    for i in range(p.tori):
        elems.append(("t", i))
    return FinPoset.from_pairs(elems, pairs)


def reduced_label(p: InvariantPair) -> dict:
    """The unordered attachment pair of every annulus (order forgotten)."""
    check_pair(p)
    return {a.id: frozenset((a.neg.key(), a.pos.key())) for a in p.annuli}


@dataclass(frozen=True)
class SeparationReport:
    sv_t0: bool
    sv_t1: bool
    sv_t2: bool
    svex_t1: bool
    svex_t2: bool


def classify_separation(p: InvariantPair) -> SeparationReport:
    """Separation axioms of the orbit space and the extended orbit space.

    Models here always have every orbit proper, so the orbit space is T0.
    It is T1 exactly when there are no separatrices (empty diagram), and
    T2 when moreover there are at most two singular points (centers plus
    saddles).  The extended orbit space of such a model is always T2:
    polycycles are closed and the singular set is finite.
    """
    check_pair(p)
    sv_t1 = not p.diagram.saddles
    singular = p.center_count() + p.saddle_count()
    return SeparationReport(
        sv_t0=True,
        sv_t1=sv_t1,
        sv_t2=sv_t1 and singular <= 2,
        svex_t1=True,
        svex_t2=True,
    )


def underlying_multigraph(p: InvariantPair) -> Multigraph:
    """Strip all labels: the bare abstract multi-graph of the extended orbit space."""
    return Multigraph.from_poset(to_extended_poset(p))


def assembly_components(p: InvariantPair) -> list:
    """Connected pieces of the model, one per surface component.

    Returns ``(vertex_ids, annulus_ids)`` tuples sorted by least vertex
    id, followed by one ``(frozenset(), frozenset())`` placeholder per
    periodic torus.
    """
    parent = {v.id: v.id for v in p.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in p.annuli:
        x, y = find(a.neg.vertex), find(a.pos.vertex)
        if x != y:
            parent[max(x, y)] = min(x, y)

    members = {}
    for v in p.vertices:
        members.setdefault(find(v.id), set()).add(v.id)
    comps = []
    for root in sorted(members):
        vids = frozenset(members[root])
        aids = frozenset(a.id for a in p.annuli if find(a.neg.vertex) == root)
        comps.append((vids, aids))
    comps.extend((frozenset(), frozenset()) for _ in range(p.tori))
    return comps
