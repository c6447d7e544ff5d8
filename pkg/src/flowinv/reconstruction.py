"""Surface reconstruction from the invariant, and realization of graphs.

Pasting: every c/n/b vertex becomes a disk, Möbius collar or boundary
collar with one free circle, every polycycle becomes its ribbon
neighborhood with one circle per face, and every annulus edge is an
annulus glued between the circles its attachments name.  The result is
a closed or bounded surface per assembly component, classified by
orientability, genus and boundary count via the Euler characteristic.

Non-orientability enters exactly through n vertices: polycycle ribbons
are untwisted and every other piece is an annulus or disk, so a
component without Möbius collars assembles orientably.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import (
    Saddle,
    SaddleDiagram,
    Separatrix,
    diagram_components,
    faces_by_component,
)
from .graph import (
    AnnulusEdge,
    Attachment,
    InvariantPair,
    VertexNode,
    assembly_components,
    validate_pair,
)
from .isomorphism import InvalidPairError
from .multigraph import Multigraph

CENTER_DISK = "center_disk"
ANNULUS = "annulus"
MOBIUS_COLLAR = "mobius_collar"
BOUNDARY_COLLAR = "boundary_collar"
POLYCYCLE_NBHD = "polycycle_nbhd"
TORUS = "torus"


class ReconstructionError(ValueError):
    """Internal consistency failure while assembling a validated pair."""


class NotRealizableError(ValueError):
    """The input graph admits no realization (empty or trivial)."""


@dataclass(frozen=True)
class Cell:
    id: str
    kind: str
    circles: tuple  # circle ids; boundary collars list the surface rim first


@dataclass(frozen=True)
class CellModel:
    """The pasted decomposition: cells, a perfect matching on glueable circles,
    and the circles left as actual surface boundary."""

    cells: tuple
    gluings: frozenset      # frozensets of two circle ids
    boundary: frozenset     # circle ids on the surface boundary
    diagram: SaddleDiagram  # ribbon cores of the polycycle neighborhoods


@dataclass(frozen=True)
class ComponentSignature:
    """One surface component; for non-orientable components ``genus`` holds
    the crosscap count."""

    orientable: bool
    genus: int
    boundary: int
    euler: int


@dataclass(frozen=True)
class SurfaceSignature:
    components: tuple

    def summary_lines(self) -> list:
        return [
            f"component={i} orientable={'true' if c.orientable else 'false'}"
            f" genus={c.genus} boundary={c.boundary} chi={c.euler}"
            for i, c in enumerate(self.components)
        ]


def _checked(p: InvariantPair) -> None:
    violations = validate_pair(p)
    if violations:
        raise InvalidPairError(violations)


def chi_cells(p: InvariantPair) -> list:
    """Euler characteristic per assembly component.

    Disks contribute 1, polycycle neighborhoods V - E, annuli and collars
    0, and a periodic torus component 0.
    """
    _checked(p)
    comp_sizes = {
        comp_id: len(saddle_ids) - len(sep_ids)
        for comp_id, saddle_ids, sep_ids in diagram_components(p.diagram)
    }
    out = []
    for vertex_ids, _ in assembly_components(p):
        if not vertex_ids:
            out.append(0)  # periodic torus
            continue
        chi = 0
        for vid in vertex_ids:
            v = p.vertex_by_id[vid]
            if v.label == "c":
                chi += 1
            elif v.label == "d":
                chi += comp_sizes[v.component]
        out.append(chi)
    return out


def _circle_of_attachment(p: InvariantPair, att: Attachment) -> str:
    v = p.vertex_by_id[att.vertex]
    if v.label == "c":
        return f"disk:{v.id}:0"
    if v.label == "n":
        return f"mobius:{v.id}:0"
    if v.label == "b":
        return f"collar:{v.id}:0"
    return f"poly:{v.component}:{att.face}"


def build_cell_model(p: InvariantPair) -> CellModel:
    _checked(p)
    for s in p.diagram.saddles:
        if s.kind != "interior":
            raise ReconstructionError(f"unsupported saddle kind {s.kind!r}")
    cells = []
    boundary = set()
    for v in p.vertices:
        if v.label == "c":
            cells.append(Cell(f"disk:{v.id}", CENTER_DISK, (f"disk:{v.id}:0",)))
        elif v.label == "n":
            cells.append(Cell(f"mobius:{v.id}", MOBIUS_COLLAR, (f"mobius:{v.id}:0",)))
        elif v.label == "b":
            rim = f"collar:{v.id}:rim"
            boundary.add(rim)
            cells.append(Cell(f"collar:{v.id}", BOUNDARY_COLLAR,
                              (rim, f"collar:{v.id}:0")))
    faces = faces_by_component(p.diagram)
    for comp_id, _, _ in diagram_components(p.diagram):
        circles = tuple(
            f"poly:{comp_id}:{i}" for i in range(len(faces[comp_id]))
        )
        cells.append(Cell(f"poly:{comp_id}", POLYCYCLE_NBHD, circles))
    gluings = set()
    for a in p.annuli:
        neg, pos = f"ann:{a.id}:neg", f"ann:{a.id}:pos"
        cells.append(Cell(f"ann:{a.id}", ANNULUS, (neg, pos)))
        gluings.add(frozenset((neg, _circle_of_attachment(p, a.neg))))
        gluings.add(frozenset((pos, _circle_of_attachment(p, a.pos))))
    for i in range(p.tori):
        cells.append(Cell(f"torus:{i}", TORUS, ()))
    cells.sort(key=lambda c: c.id)
    return CellModel(tuple(cells), frozenset(gluings), frozenset(boundary),
                     p.diagram)


def extract_pair(cm: CellModel) -> InvariantPair:
    """Re-read the invariant off a cell model: the inverse of pasting.

    Works purely from cells, gluings and the ribbon cores; face indices
    come from the circle names of the polycycle cells.
    """
    partner = {}
    for pair in cm.gluings:
        a, b = tuple(pair)
        partner[a] = b
        partner[b] = a

    vertices = []
    annuli = []
    tori = 0
    circle_to_key = {}
    for cell in cm.cells:
        name = cell.id.split(":", 1)[1] if ":" in cell.id else cell.id
        if cell.kind == CENTER_DISK:
            vertices.append(VertexNode(name, "c"))
            circle_to_key[cell.circles[0]] = (name, None)
        elif cell.kind == MOBIUS_COLLAR:
            vertices.append(VertexNode(name, "n"))
            circle_to_key[cell.circles[0]] = (name, None)
        elif cell.kind == BOUNDARY_COLLAR:
            vertices.append(VertexNode(name, "b"))
            circle_to_key[cell.circles[1]] = (name, None)
        elif cell.kind == POLYCYCLE_NBHD:
            vertices.append(VertexNode(f"poly:{name}", "d", name))
            for circle in cell.circles:
                idx = int(circle.rsplit(":", 1)[1])
                circle_to_key[circle] = (f"poly:{name}", idx)
        elif cell.kind == TORUS:
            tori += 1
        elif cell.kind != ANNULUS:
            raise ReconstructionError(f"unknown cell kind {cell.kind!r}")
    for cell in cm.cells:
        if cell.kind != ANNULUS:
            continue
        aid = cell.id.split(":", 1)[1]
        neg_key = circle_to_key[partner[cell.circles[0]]]
        pos_key = circle_to_key[partner[cell.circles[1]]]
        annuli.append(AnnulusEdge(aid, Attachment(*neg_key), Attachment(*pos_key)))
    return InvariantPair(cm.diagram, tuple(vertices), tuple(annuli), tori)


def _component_signature(p: InvariantPair, vertex_ids,
                         comp_euler: int) -> ComponentSignature:
    if not vertex_ids:
        return ComponentSignature(True, 1, 0, 0)  # periodic torus
    labels = [p.vertex_by_id[v].label for v in vertex_ids]
    boundary = labels.count("b")
    orientable = "n" not in labels
    rest = 2 - comp_euler - boundary
    if orientable:
        if rest % 2:
            raise ReconstructionError(
                "non-integer genus: chi + boundary has odd parity"
            )
        genus = rest // 2
    else:
        genus = rest  # crosscap count
    if genus < 0 or (not orientable and genus == 0):
        raise ReconstructionError("impossible genus for assembled component")
    return ComponentSignature(orientable, genus, boundary, comp_euler)


def reconstruct(p: InvariantPair) -> tuple:
    """Paste the cell model and classify each surface component.

    Returns ``(CellModel, SurfaceSignature)``.
    """
    cm = build_cell_model(p)
    chis = chi_cells(p)
    sigs = []
    for (vertex_ids, _), chi in zip(assembly_components(p), chis):
        sigs.append(_component_signature(p, vertex_ids, chi))
    return cm, SurfaceSignature(tuple(sigs))


def cellmodel_euler(cm: CellModel) -> list:
    """Independent Euler count per component: tally actual cells.

    Every circle carries one vertex and one edge (glued circles counted
    once).  Interiors: a disk adds a face; an annulus or collar adds an
    edge and a face; a Möbius collar adds a vertex, two edges and a face;
    a polycycle neighborhood adds its core graph plus one edge and one
    face per boundary circle; a torus adds a vertex, two edges and a face.
    """
    circle_rep = {}
    for cell in cm.cells:
        for circle in cell.circles:
            circle_rep[circle] = circle
    for pair in cm.gluings:
        a, b = sorted(pair)
        circle_rep[b] = a

    def find(c):
        while circle_rep[c] != c:
            circle_rep[c] = circle_rep[circle_rep[c]]
            c = circle_rep[c]
        return c

    # component structure on cells through shared circles
    parent = {cell.id: cell.id for cell in cm.cells}

    def cfind(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    owner = {}
    for cell in cm.cells:
        for circle in cell.circles:
            rep = find(circle)
            if rep in owner:
                a, b = cfind(owner[rep]), cfind(cell.id)
                if a != b:
                    parent[max(a, b)] = min(a, b)
            else:
                owner[rep] = cell.id

    comp_saddle_counts = {}
    comp_sep_counts = {}
    for comp_id, saddle_ids, sep_ids in diagram_components(cm.diagram):
        comp_saddle_counts[comp_id] = len(saddle_ids)
        comp_sep_counts[comp_id] = len(sep_ids)

    counts = {}  # root cell -> [v, e, f]
    seen_circles = set()
    for cell in cm.cells:
        root = cfind(cell.id)
        tally = counts.setdefault(root, [0, 0, 0])
        for circle in cell.circles:
            rep = find(circle)
            if rep not in seen_circles:
                seen_circles.add(rep)
                tally[0] += 1
                tally[1] += 1
        if cell.kind == CENTER_DISK:
            tally[2] += 1
        elif cell.kind in (ANNULUS, BOUNDARY_COLLAR):
            tally[1] += 1
            tally[2] += 1
        elif cell.kind == MOBIUS_COLLAR:
            tally[0] += 1
            tally[1] += 2
            tally[2] += 1
        elif cell.kind == POLYCYCLE_NBHD:
            comp_id = cell.id.split(":", 1)[1]
            n_faces = len(cell.circles)
            tally[0] += comp_saddle_counts[comp_id]
            tally[1] += comp_sep_counts[comp_id] + n_faces
            tally[2] += n_faces
        elif cell.kind == TORUS:
            tally[0] += 1
            tally[1] += 2
            tally[2] += 1

    roots = sorted(counts)
    return [counts[r][0] - counts[r][1] + counts[r][2] for r in roots]


def realize_multigraph(g: Multigraph) -> InvariantPair:
    """A model whose extended orbit graph is the given multi-graph.

    Degree-1 vertices become centers.  A vertex of degree d >= 2 becomes
    a homoclinic flower on a (d-2)-saddle, whose neighborhood has exactly
    d boundary circles; every graph edge becomes an annulus between the
    circles reserved at its endpoints.  Requires a connected non-trivial
    graph (at least one edge).
    """
    if not g.vertices:
        raise NotRealizableError("empty graph")
    if not g.edges:
        raise NotRealizableError("trivial graph: no edges")
    if not g.is_connected():
        raise NotRealizableError("graph is not connected")

    saddles = []
    seps = []
    vertices = []
    slots = {}  # graph vertex -> list of free attachments
    for v in sorted(g.vertices, key=repr):
        deg = g.degree(v)
        if deg == 1:
            vertices.append(VertexNode(f"v_{v}", "c"))
            slots[v] = [Attachment(f"v_{v}")]
            continue
        k = deg - 2
        sid = f"s_{v}"
        loop_ids = [f"e_{v}_{j}" for j in range(k + 1)]
        rotation = []
        for eid in loop_ids:
            rotation.append((eid, "out"))
            rotation.append((eid, "in"))
        saddles.append(Saddle(sid, k, tuple(rotation)))
        seps.extend(Separatrix(eid, sid, sid) for eid in loop_ids)
        vertices.append(VertexNode(f"p_{v}", "d", sid))
        # the flower has deg faces; reserve them in face-index order
        slots[v] = [Attachment(f"p_{v}", i) for i in range(deg)]

    annuli = []
    for eid, ends in g.edges:
        if len(ends) == 1:
            (u,) = ends
            neg, pos = slots[u].pop(0), slots[u].pop(0)
        else:
            u, w = sorted(ends, key=repr)
            neg, pos = slots[u].pop(0), slots[w].pop(0)
        annuli.append(AnnulusEdge(f"a_{eid}", neg, pos))

    pair = InvariantPair(SaddleDiagram(tuple(saddles), tuple(seps)),
                         tuple(vertices), tuple(annuli))
    violations = validate_pair(pair)
    if violations:
        raise ReconstructionError(
            "realization produced an invalid pair: "
            + "; ".join(v.message for v in violations)
        )
    return pair
