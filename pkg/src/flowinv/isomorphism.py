"""Isomorphism of invariant pairs and deterministic canonical forms.

Two pairs are isomorphic when a relabeling of vertices/annuli and of
saddles/separatrices makes every label commute: vertex kinds match,
rotation words match up to cyclic shift, separatrix directions match,
ordered annulus labels match, and annulus attachments land on the
corresponding boundary circles.  Orientation reversal, when allowed, is
the single global involution that reverses every separatrix, reflects
every rotation word and swaps the negative/positive side of every
annulus at once.

``pair_isomorphic`` is an explicit backtracking search and
``canonical_form`` an independent refinement-plus-individualization
canonical labeling; the two are cross-checked against each other in the
test suite rather than sharing code.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from hashlib import sha256
from typing import NamedTuple

from .diagram import (
    OUT,
    Saddle,
    SaddleDiagram,
    Separatrix,
    component_of,
    diagram_components,
    faces_by_component,
    flip,
)
from .graph import (
    AnnulusEdge,
    Attachment,
    InvariantPair,
    VertexNode,
    assembly_components,
    validate_pair,
)

CANONICAL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class IsoMode:
    """Orientation handling: allow_reversal distinguishes ~ from ~_+."""

    allow_reversal: bool


ORIENTED = IsoMode(allow_reversal=False)
REVERSIBLE = IsoMode(allow_reversal=True)


class InvalidPairError(ValueError):
    """Input pair failed validation."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(v.message for v in violations))


class CyclicWitness(NamedTuple):
    shift: int
    reflected: bool


def cyclic_equivalent(w1, w2, allow_reflection: bool = False) -> CyclicWitness | None:
    """Shift (and reflection) carrying w1 onto w2, or None.

    ``CyclicWitness(shift, reflected)`` means: reverse w1 first when
    ``reflected``, then rotate left by ``shift`` to obtain w2.
    """
    w1, w2 = tuple(w1), tuple(w2)
    if len(w1) != len(w2):
        return None
    n = len(w1)
    if n == 0:
        return CyclicWitness(0, False)
    for shift in range(n):
        if all(w1[(i + shift) % n] == w2[i] for i in range(n)):
            return CyclicWitness(shift, False)
    if allow_reflection:
        rev = w1[::-1]
        for shift in range(n):
            if all(rev[(i + shift) % n] == w2[i] for i in range(n)):
                return CyclicWitness(shift, True)
    return None


@dataclass(frozen=True)
class PairWitness:
    """An explicit isomorphism: maps are from the first pair's ids to the second's.

    When ``reversed_orientation`` is set the maps carry the orientation
    reversal of the first pair onto the second.
    """

    saddles: dict
    separatrices: dict
    vertices: dict
    annuli: dict
    reversed_orientation: bool = False


# ---------------------------------------------------------------------------
# structural rewrites: relabel and reverse


def _face_index_of_darts(d: SaddleDiagram) -> dict:
    """frozenset of darts -> (component id, face index)."""
    out = {}
    for comp, faces in faces_by_component(d).items():
        for idx, f in enumerate(faces):
            out[frozenset(f.sides)] = (comp, idx)
    return out


def _component_face_key(p: InvariantPair, att: Attachment):
    comp = p.vertex_by_id[att.vertex].component
    return (comp, att.face)


def relabel_pair(p: InvariantPair, saddles: dict, separatrices: dict,
                 vertices: dict, annuli: dict) -> InvariantPair:
    """Rename every object; component references and face indices follow.

    Face indices are positional (faces ordered by least dart), so they
    must be recomputed in the renamed diagram.
    """
    old_faces = faces_by_component(p.diagram)
    new_diagram = SaddleDiagram(
        tuple(
            Saddle(saddles[s.id], s.k,
                   tuple((separatrices[sep], end) for sep, end in s.rotation),
                   s.kind)
            for s in p.diagram.saddles
        ),
        tuple(
            Separatrix(separatrices[e.id], saddles[e.source],
                       saddles[e.target], e.twisted)
            for e in p.diagram.separatrices
        ),
    )
    new_face_index = _face_index_of_darts(new_diagram)

    def map_attachment(att: Attachment) -> Attachment:
        v = p.vertex_by_id[att.vertex]
        if v.label != "d":
            return Attachment(vertices[att.vertex])
        face = old_faces[v.component][att.face]
        darts = frozenset((separatrices[sep], end) for sep, end in face.sides)
        _, idx = new_face_index[darts]
        return Attachment(vertices[att.vertex], idx)

    comp_rename = {}
    for comp_id, saddle_ids, _ in diagram_components(p.diagram):
        comp_rename[comp_id] = min(saddles[sid] for sid in saddle_ids)

    new_vertices = tuple(
        VertexNode(vertices[v.id], v.label,
                   comp_rename[v.component] if v.label == "d" else None)
        for v in p.vertices
    )
    new_annuli = tuple(
        AnnulusEdge(annuli[a.id], map_attachment(a.neg), map_attachment(a.pos))
        for a in p.annuli
    )
    return InvariantPair(new_diagram, new_vertices, new_annuli, p.tori)


def reverse_diagram(d: SaddleDiagram) -> SaddleDiagram:
    """Reverse every separatrix and reflect every rotation word."""
    return SaddleDiagram(
        tuple(
            Saddle(s.id, s.k,
                   tuple(flip(dart) for dart in reversed(s.rotation)),
                   s.kind)
            for s in d.saddles
        ),
        tuple(
            Separatrix(e.id, e.target, e.source, e.twisted)
            for e in d.separatrices
        ),
    )


@lru_cache(maxsize=65536)
def reverse_pair(p: InvariantPair) -> InvariantPair:
    """The orientation reversal of the whole model.

    Separatrices reverse, rotation words reflect, every annulus swaps its
    negative and positive side.  Boundary circles survive: a reversed
    face carries exactly the dart names of its original (each dart's end
    flag flips, but so does the naming of the separatrix ends, and the
    two cancel).  Values are immutable, so results are cached.
    """
    old_faces = faces_by_component(p.diagram)
    new_diagram = reverse_diagram(p.diagram)
    new_face_index = _face_index_of_darts(new_diagram)

    def map_attachment(att: Attachment) -> Attachment:
        v = p.vertex_by_id[att.vertex]
        if v.label != "d":
            return att
        face = old_faces[v.component][att.face]
        _, idx = new_face_index[frozenset(face.sides)]
        return Attachment(att.vertex, idx)

    new_annuli = tuple(
        AnnulusEdge(a.id, map_attachment(a.pos), map_attachment(a.neg))
        for a in p.annuli
    )
    return InvariantPair(new_diagram, p.vertices, new_annuli, p.tori)


# ---------------------------------------------------------------------------
# backtracking isomorphism search


def _component_profiles(d: SaddleDiagram) -> dict:
    faces = faces_by_component(d)
    out = {}
    for comp_id, saddle_ids, sep_ids in diagram_components(d):
        ks = tuple(sorted(d.saddle_by_id[s].k for s in saddle_ids))
        fs = tuple(sorted(
            (len(f.sides), f.flow_positive) for f in faces.get(comp_id, [])
        ))
        out[comp_id] = (ks, len(sep_ids), fs)
    return out


@lru_cache(maxsize=None)
def _pair_profile(p: InvariantPair) -> tuple:
    """A cheap isomorphism invariant; the first gate of the iso search."""
    comp_profiles = _component_profiles(p.diagram)
    faces = faces_by_component(p.diagram)

    def end_descriptor(att: Attachment):
        v = p.vertex_by_id[att.vertex]
        if v.label != "d":
            return ("leaf", v.label)
        face = faces[v.component][att.face]
        return ("face", comp_profiles[v.component],
                len(face.sides), face.flow_positive)

    return (
        p.tori,
        tuple(sorted(v.label for v in p.vertices)),
        tuple(sorted(comp_profiles.values())),
        tuple(sorted(
            (end_descriptor(a.neg), end_descriptor(a.pos)) for a in p.annuli
        )),
    )


def _diagram_maps(d1: SaddleDiagram, d2: SaddleDiagram):
    """Yield (saddle map, separatrix map) label-preserving diagram isomorphisms."""
    s1 = list(d1.saddles)
    s2 = list(d2.saddles)
    if len(s1) != len(s2) or len(d1.separatrices) != len(d2.separatrices):
        return
    smap, emap = {}, {}
    used_s, used_e_img = set(), set()

    def align(rot1, rot2, shift):
        """Extend emap along an aligned rotation; return trail or None."""
        trail = []
        n = len(rot1)
        for pos in range(n):
            e_a, f_a = rot1[pos]
            e_b, f_b = rot2[(pos + shift) % n]
            if f_a != f_b:
                break
            if e_a in emap:
                if emap[e_a] != e_b:
                    break
            elif e_b in used_e_img:
                break
            else:
                emap[e_a] = e_b
                used_e_img.add(e_b)
                trail.append(e_a)
        else:
            return trail
        for e_a in trail:
            used_e_img.discard(emap.pop(e_a))
        return None

    def endpoints_ok():
        for e in d1.separatrices:
            other = d2.sep_by_id[emap[e.id]]
            if smap[e.source] != other.source or smap[e.target] != other.target:
                return False
        return True

    def dfs(i):
        if i == len(s1):
            if endpoints_ok():
                yield dict(smap), dict(emap)
            return
        a = s1[i]
        for b in s2:
            if b.id in used_s or b.k != a.k:
                continue
            smap[a.id] = b.id
            used_s.add(b.id)
            for shift in range(len(b.rotation)):
                trail = align(a.rotation, b.rotation, shift)
                if trail is None:
                    continue
                yield from dfs(i + 1)
                for e_a in trail:
                    used_e_img.discard(emap.pop(e_a))
            used_s.discard(b.id)
            del smap[a.id]

    yield from dfs(0)


def _match_graph(p1, p2, smap, emap):
    """Extend a diagram isomorphism over vertices and annuli, or None."""
    d2_face_index = _face_index_of_darts(p2.diagram)
    faces1 = faces_by_component(p1.diagram)

    face_map = {}
    for comp, faces in faces1.items():
        for idx, f in enumerate(faces):
            darts = frozenset((emap[sep], end) for sep, end in f.sides)
            image = d2_face_index.get(darts)
            if image is None:
                return None
            face_map[(comp, idx)] = image

    comp2_of_saddle = component_of(p2.diagram)
    comp_map = {}
    for comp_id, saddle_ids, _ in diagram_components(p1.diagram):
        comp_map[comp_id] = comp2_of_saddle[smap[min(saddle_ids)]]
    d_vertex_2 = {v.component: v.id for v in p2.vertices if v.label == "d"}
    vmap = {}
    for v in p1.vertices:
        if v.label == "d":
            vmap[v.id] = d_vertex_2[comp_map[v.component]]

    leaf_map = {}
    used_leaf = set()
    amap = {}
    used_a = set()
    a1 = list(p1.annuli)

    def att_compatible(att_a: Attachment, att_b: Attachment, bind):
        """Check one side; a fresh leaf binding is applied and recorded."""
        va = p1.vertex_by_id[att_a.vertex]
        vb = p2.vertex_by_id[att_b.vertex]
        if va.label != vb.label:
            return False
        if va.label == "d":
            if vmap[att_a.vertex] != att_b.vertex:
                return False
            return face_map[_component_face_key(p1, att_a)] == \
                _component_face_key(p2, att_b)
        if att_a.vertex in leaf_map:
            return leaf_map[att_a.vertex] == att_b.vertex
        if att_b.vertex in used_leaf:
            return False
        leaf_map[att_a.vertex] = att_b.vertex
        used_leaf.add(att_b.vertex)
        bind.append((att_a.vertex, att_b.vertex))
        return True

    def dfs(i):
        if i == len(a1):
            return True
        a = a1[i]
        for b in p2.annuli:
            if b.id in used_a:
                continue
            bind = []
            if att_compatible(a.neg, b.neg, bind) and \
               att_compatible(a.pos, b.pos, bind):
                amap[a.id] = b.id
                used_a.add(b.id)
                if dfs(i + 1):
                    return True
                del amap[a.id]
                used_a.discard(b.id)
            for x, y in bind:
                del leaf_map[x]
                used_leaf.discard(y)
        return False

    if not dfs(0):
        return None
    vmap.update(leaf_map)
    return vmap, amap


def _find_direct_iso(p1: InvariantPair, p2: InvariantPair):
    if _pair_profile(p1) != _pair_profile(p2):
        return None
    for smap, emap in _diagram_maps(p1.diagram, p2.diagram):
        matched = _match_graph(p1, p2, smap, emap)
        if matched is not None:
            vmap, amap = matched
            return PairWitness(smap, emap, vmap, amap)
    return None


def pair_isomorphic(p1: InvariantPair, p2: InvariantPair,
                    mode: IsoMode = ORIENTED) -> PairWitness | None:
    """Search for an isomorphism of validated pairs; None if there is none.

    With ``mode.allow_reversal`` the global orientation reversal of the
    first pair is tried as well.
    """
    for p in (p1, p2):
        violations = validate_pair(p)
        if violations:
            raise InvalidPairError(violations)
    witness = _find_direct_iso(p1, p2)
    if witness is not None or not mode.allow_reversal:
        return witness
    witness = _find_direct_iso(reverse_pair(p1), p2)
    if witness is None:
        return None
    return PairWitness(witness.saddles, witness.separatrices,
                       witness.vertices, witness.annuli,
                       reversed_orientation=True)


def verify_witness(p1: InvariantPair, p2: InvariantPair, w: PairWitness) -> bool:
    """Apply a witness and compare the result with the second pair."""
    source = reverse_pair(p1) if w.reversed_orientation else p1
    return relabel_pair(source, w.saddles, w.separatrices,
                        w.vertices, w.annuli) == p2


# ---------------------------------------------------------------------------
# canonical form


@dataclass(frozen=True)
class CanonicalForm:
    """Deterministic bytes equal exactly for isomorphic pairs (per mode)."""

    blob: bytes

    def digest(self) -> str:
        return sha256(self.blob).hexdigest()


@dataclass(frozen=True)
class _ComponentData:
    """One assembly component handed to the canonical labeling engine."""

    saddles: tuple          # Saddle objects
    separatrices: tuple     # Separatrix objects
    faces: dict             # (component id, index) -> FaceCycle
    vertices: tuple         # VertexNode objects
    annuli: tuple           # AnnulusEdge objects
    vertex_component: dict  # d-vertex id -> diagram component id
    comp_members: dict      # diagram component id -> tuple of saddle ids


def _least_rotation(word: tuple) -> tuple:
    if not word:
        return word
    return min(word[i:] + word[:i] for i in range(len(word)))


class _CanonicalEngine:
    """Refinement plus individualization over one assembly component.

    Objects (saddles, separatrices, faces, vertices, annuli) are indexed
    once; a coloring is a flat list.  Refinement re-ranks structured
    signatures until the partition stabilizes (it can only split, so
    stability is just the color count not growing); the lexicographically
    least serialization over all discrete branch colorings is canonical.
    """

    def __init__(self, data: _ComponentData):
        self.data = data
        self.s_of = {s.id: i for i, s in enumerate(data.saddles)}
        base = len(data.saddles)
        self.e_of = {e.id: base + i for i, e in enumerate(data.separatrices)}
        base += len(data.separatrices)
        self.face_keys = sorted(data.faces)
        self.f_of = {key: base + i for i, key in enumerate(self.face_keys)}
        base += len(self.face_keys)
        self.v_of = {v.id: base + i for i, v in enumerate(data.vertices)}
        base += len(data.vertices)
        self.a_of = {a.id: base + i for i, a in enumerate(data.annuli)}
        self.n = base + len(data.annuli)

        # compiled structure, all in object indices
        self.sad_words = [
            [(end, self.e_of[sep]) for sep, end in s.rotation]
            for s in data.saddles
        ]
        self.sep_ends = [
            (self.s_of[e.source], self.s_of[e.target])
            for e in data.separatrices
        ]
        self.face_words = [
            [(end, self.e_of[sep]) for sep, end in data.faces[key].sides]
            for key in self.face_keys
        ]
        face_base = len(data.saddles) + len(data.separatrices)
        vertex_base = face_base + len(self.face_keys)
        self.face_att = [None] * len(self.face_keys)
        self.vertex_atts = [[] for _ in data.vertices]
        self.ann_ends = []
        for a in data.annuli:
            ends = []
            for side, att in ((0, a.neg), (1, a.pos)):
                v = self.v_of[att.vertex]
                self.vertex_atts[v - vertex_base].append(
                    (self.a_of[a.id], side))
                f = -1
                if att.face is not None:
                    comp = data.vertex_component[att.vertex]
                    f = self.f_of[(comp, att.face)]
                    self.face_att[f - face_base] = (self.a_of[a.id], side)
                ends.append((v, f))
            self.ann_ends.append(tuple(ends))
        self.vertex_members = []
        for v in data.vertices:
            if v.label == "d":
                self.vertex_members.append(
                    [self.s_of[sid] for sid in data.comp_members[v.component]]
                )
            else:
                self.vertex_members.append([])

    def initial_coloring(self) -> list:
        data = self.data
        keys = []
        for s in data.saddles:
            keys.append((0, s.k))
        for e in data.separatrices:
            keys.append((1, e.source == e.target))
        for key in self.face_keys:
            face = data.faces[key]
            keys.append((2, len(face.sides), face.flow_positive))
        for v in data.vertices:
            keys.append((3, v.label))
        for _ in data.annuli:
            keys.append((4,))
        rank = {k: i for i, k in enumerate(sorted(set(keys)))}
        return [rank[k] for k in keys]

    def refine(self, col: list) -> list:
        ncolors = len(set(col))
        while True:
            sigs = []
            i = 0
            for word in self.sad_words:
                w = tuple((end, col[e]) for end, e in word)
                sigs.append((0, col[i], _least_rotation(w)))
                i += 1
            for src, tgt in self.sep_ends:
                sigs.append((1, col[i], col[src], col[tgt]))
                i += 1
            for j, word in enumerate(self.face_words):
                w = tuple((end, col[e]) for end, e in word)
                att = self.face_att[j]
                att_sig = (col[att[0]], att[1]) if att else ()
                sigs.append((2, col[i], _least_rotation(w), att_sig))
                i += 1
            for j in range(len(self.vertex_atts)):
                atts = tuple(sorted(
                    (col[a], side) for a, side in self.vertex_atts[j]
                ))
                members = tuple(sorted(col[s] for s in self.vertex_members[j]))
                sigs.append((3, col[i], atts, members))
                i += 1
            for ends in self.ann_ends:
                sigs.append((4, col[i],
                             tuple((col[v], col[f] if f >= 0 else -1)
                                   for v, f in ends)))
                i += 1
            rank = {s: i for i, s in enumerate(sorted(set(sigs)))}
            new = [rank[s] for s in sigs]
            if len(rank) == ncolors:
                return new
            ncolors = len(rank)
            col = new

    def serialize(self, col: list) -> bytes:
        data = self.data
        s_pos = {s.id: col[self.s_of[s.id]] for s in data.saddles}
        s_idx = {sid: i for i, sid in
                 enumerate(sorted(s_pos, key=lambda x: s_pos[x]))}
        e_pos = {e.id: col[self.e_of[e.id]] for e in data.separatrices}
        e_idx = {eid: i for i, eid in
                 enumerate(sorted(e_pos, key=lambda x: e_pos[x]))}
        v_pos = {v.id: col[self.v_of[v.id]] for v in data.vertices}
        v_idx = {vid: i for i, vid in
                 enumerate(sorted(v_pos, key=lambda x: v_pos[x]))}
        a_pos = {a.id: col[self.a_of[a.id]] for a in data.annuli}
        a_ord = sorted(a_pos, key=lambda x: a_pos[x])
        s_ord = sorted(data.saddles, key=lambda s: s_idx[s.id])
        e_ord = sorted(data.separatrices, key=lambda e: e_idx[e.id])
        v_ord = sorted(data.vertices, key=lambda v: v_idx[v.id])

        comp_rank = {}
        face_rank = {}
        if data.saddles:
            ranked = sorted(
                data.comp_members,
                key=lambda c: min(s_idx[s] for s in data.comp_members[c]),
            )
            for i, comp_id in enumerate(ranked):
                comp_rank[comp_id] = i
            least_dart = {
                key: min((e_idx[sep], end) for sep, end in face.sides)
                for key, face in data.faces.items()
            }
            for comp_id in data.comp_members:
                local = [k for k in data.faces if k[0] == comp_id]
                for i, k in enumerate(sorted(local, key=lambda k: least_dart[k])):
                    face_rank[k] = i

        def rot_text(s: Saddle) -> str:
            word = tuple(
                f"{e_idx[sep]}{'o' if end == OUT else 'i'}"
                for sep, end in s.rotation
            )
            return ",".join(_least_rotation(word))

        def att_text(att: Attachment) -> str:
            if att.face is None:
                return str(v_idx[att.vertex])
            comp = data.vertex_component[att.vertex]
            return f"{v_idx[att.vertex]}#{face_rank[(comp, att.face)]}"

        def v_text(v: VertexNode) -> str:
            return v.label if v.label != "d" else f"d{comp_rank[v.component]}"

        by_id = {a.id: a for a in data.annuli}
        parts = [
            "k:" + ",".join(str(s.k) for s in s_ord),
            "r:" + ";".join(rot_text(s) for s in s_ord),
            "e:" + ";".join(
                f"{s_idx[e.source]}>{s_idx[e.target]}" for e in e_ord
            ),
            "v:" + ",".join(v_text(v) for v in v_ord),
            "a:" + ";".join(
                f"{att_text(by_id[aid].neg)}>{att_text(by_id[aid].pos)}"
                for aid in a_ord
            ),
        ]
        return "|".join(parts).encode("ascii")

    def canonical(self) -> bytes:
        fresh = self.n

        def search(col: list) -> bytes:
            col = self.refine(col)
            cells = {}
            for i, c in enumerate(col):
                cells.setdefault(c, []).append(i)
            split = [(c, members) for c, members in cells.items()
                     if len(members) > 1]
            if not split:
                return self.serialize(col)
            target = min(split)[1]
            best = None
            for i in target:
                col2 = list(col)
                col2[i] = fresh
                cand = search(col2)
                if best is None or cand < best:
                    best = cand
            return best

        return search(self.initial_coloring())


def _canonical_component(data: _ComponentData) -> bytes:
    return _CanonicalEngine(data).canonical()


def _component_data(p: InvariantPair, vertex_ids: frozenset,
                    annulus_ids: frozenset) -> _ComponentData:
    vertices = tuple(v for v in p.vertices if v.id in vertex_ids)
    annuli = tuple(a for a in p.annuli if a.id in annulus_ids)
    comp_ids = {v.component for v in vertices if v.label == "d"}
    comp_lookup = component_of(p.diagram)
    saddles = tuple(
        s for s in p.diagram.saddles if comp_lookup[s.id] in comp_ids
    )
    seps = tuple(
        e for e in p.diagram.separatrices if comp_lookup[e.id] in comp_ids
    )
    faces = {
        (comp, idx): face
        for comp, fs in faces_by_component(p.diagram).items()
        if comp in comp_ids
        for idx, face in enumerate(fs)
    }
    vertex_component = {
        v.id: v.component for v in vertices if v.label == "d"
    }
    comp_members = {
        comp_id: tuple(sorted(saddle_ids))
        for comp_id, saddle_ids, _ in diagram_components(p.diagram)
        if comp_id in comp_ids
    }
    return _ComponentData(saddles, seps, faces, vertices, annuli,
                          vertex_component, comp_members)


def _strict_canonical(p: InvariantPair) -> bytes:
    blobs = []
    for vertex_ids, annulus_ids in assembly_components(p):
        if not vertex_ids:
            blobs.append(b"T")
            continue
        blobs.append(_canonical_component(_component_data(p, vertex_ids,
                                                          annulus_ids)))
    head = bytes([CANONICAL_FORMAT_VERSION])
    return head + b"\n".join(sorted(blobs))


def _canonical_blob(p: InvariantPair, mode: IsoMode) -> bytes:
    """Canonical bytes of an already-validated pair."""
    blob = _strict_canonical(p)
    if mode.allow_reversal:
        blob = min(blob, _strict_canonical(reverse_pair(p)))
    return blob


def canonical_form(p: InvariantPair, mode: IsoMode = ORIENTED) -> CanonicalForm:
    """Canonical bytes: equal iff the pairs are isomorphic in the given mode."""
    violations = validate_pair(p)
    if violations:
        raise InvalidPairError(violations)
    return CanonicalForm(_canonical_blob(p, mode))


def canonical_diagram(d: SaddleDiagram, mode: IsoMode = ORIENTED) -> bytes:
    """Canonical bytes for a bare diagram (per-polycycle, sorted)."""

    def strict(diag: SaddleDiagram) -> bytes:
        fs = faces_by_component(diag)
        blobs = []
        for comp_id, saddle_ids, sep_ids in diagram_components(diag):
            data = _ComponentData(
                tuple(s for s in diag.saddles if s.id in saddle_ids),
                tuple(e for e in diag.separatrices if e.id in sep_ids),
                {(comp_id, i): f for i, f in enumerate(fs[comp_id])},
                (),
                (),
                {},
                {comp_id: tuple(sorted(saddle_ids))},
            )
            blobs.append(_canonical_component(data))
        return bytes([CANONICAL_FORMAT_VERSION]) + b"\n".join(sorted(blobs))

    blob = strict(d)
    if mode.allow_reversal:
        blob = min(blob, strict(reverse_diagram(d)))
    return blob
