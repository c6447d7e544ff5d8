"""Enumeration of models up to isomorphism within size bounds.

Each emitted model is connected: one compact surface.  That is either a
bare periodic torus, a single annulus between two fresh c/n/b vertices,
or a diagram-based model in which every boundary circle of every
polycycle neighborhood closes against another circle or a fresh c/n/b
vertex and the annuli join everything into one piece.  (Disconnected
pairs are still valid data; they are just not enumerated.)

Diagrams are generated by choosing a saddle degree multiset, fixing the
alternating out/in slot pattern around each saddle, and running over all
bijections from out-slots to in-slots; every valid diagram is a
relabeling of one of these.  Duplicates are removed by canonical form.

Generation order is deterministic; the optional ``rng`` argument
scrambles intermediate candidate order and must not change any result
(the determinism tests rely on exactly that).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from hashlib import sha256
from itertools import combinations_with_replacement, permutations, product

from .diagram import SaddleDiagram, Saddle, Separatrix, check_diagram, \
    diagram_components, faces_by_component
from .graph import AnnulusEdge, Attachment, InvariantPair, VertexNode, \
    assembly_components, check_pair
from .isomorphism import ORIENTED, IsoMode, _canonical_blob, canonical_diagram
from .reconstruction import reconstruct


@dataclass(frozen=True)
class EnumBounds:
    max_saddles: int = 0
    max_k_sum: int = 0
    max_centers: int = 0
    max_n: int = 0
    max_b: int = 0
    max_annuli: int = 0
    max_tori: int = 0
    closed_only: bool = False
    orientable_only: bool = False
    mode: IsoMode = ORIENTED

    def __post_init__(self):
        for name in ("max_saddles", "max_k_sum", "max_centers", "max_n",
                     "max_b", "max_annuli", "max_tori"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")


def _maybe_shuffle(items: list, rng: random.Random | None) -> list:
    if rng is not None:
        rng.shuffle(items)
    return items


def _degree_multisets(max_saddles: int, max_k_sum: int):
    out = [()]
    for count in range(1, max_saddles + 1):
        for ks in combinations_with_replacement(range(max_k_sum + 1), count):
            if sum(ks) <= max_k_sum:
                out.append(ks)
    return out


def _diagram_candidates(ks: tuple):
    """All diagrams over the given degree multiset.

    Each saddle's rotation is pinned to the pattern out,in,out,in,...;
    any valid rotation is a cyclic shift of that.  A diagram is then a
    bijection from out-slots to in-slots, so every valid diagram with
    these degrees is a relabeling of some candidate.
    """
    out_slots = []
    in_slots = []
    for i, k in enumerate(ks):
        for pos in range(2 * k + 2):
            (out_slots if pos % 2 == 0 else in_slots).append((i, pos))
    for image in permutations(in_slots):
        rotations = {i: [None] * (2 * k + 2) for i, k in enumerate(ks)}
        seps = []
        for j, (src, tgt) in enumerate(zip(out_slots, image)):
            eid = f"e{j}"
            seps.append(Separatrix(eid, f"s{src[0]}", f"s{tgt[0]}"))
            rotations[src[0]][src[1]] = (eid, "out")
            rotations[tgt[0]][tgt[1]] = (eid, "in")
        saddles = tuple(
            Saddle(f"s{i}", k, tuple(rotations[i])) for i, k in enumerate(ks)
        )
        yield SaddleDiagram(saddles, tuple(seps))


def enumerate_diagrams(bounds: EnumBounds, rng: random.Random | None = None):
    """All diagram classes within the bounds, exactly once per class.

    Emitted in increasing (saddle count, total k) order and by canonical
    bytes within a bucket.
    """
    found = {}
    for ks in _degree_multisets(bounds.max_saddles, bounds.max_k_sum):
        candidates = list(_diagram_candidates(ks))
        for d in _maybe_shuffle(candidates, rng):
            check_diagram(d)
            key = canonical_diagram(d, bounds.mode)
            if key not in found:
                found[key] = (((len(ks), sum(ks)), key), d)
    for _, d in sorted(found.values(), key=lambda item: item[0]):
        yield d


def _face_closures(points: list, max_annuli: int, rng: random.Random | None):
    """Partition boundary circles into circle-circle pairs and leaf singles."""
    results = []

    def recurse(remaining, pairs, singles):
        if len(pairs) + len(singles) > max_annuli:
            return
        if not remaining:
            results.append((tuple(pairs), tuple(singles)))
            return
        first, rest = remaining[0], remaining[1:]
        for i in range(len(rest)):
            recurse(rest[:i] + rest[i + 1:], pairs + [(first, rest[i])], singles)
        recurse(rest, pairs, singles + [first])

    recurse(points, [], [])
    return _maybe_shuffle(results, rng)


_LEAF_KINDS = ("c", "n", "b")


def _allowed_leaf_kinds(bounds: EnumBounds):
    return [k for k in _LEAF_KINDS
            if not (bounds.closed_only and k == "b")
            and not (bounds.orientable_only and k == "n")]


def _leaf_budget_ok(counts: dict, bounds: EnumBounds) -> bool:
    return (counts.get("c", 0) <= bounds.max_centers
            and counts.get("n", 0) <= bounds.max_n
            and counts.get("b", 0) <= bounds.max_b)


def _annulus_only_models(bounds: EnumBounds):
    """Connected models with no saddles: one annulus between two leaves."""
    if bounds.max_annuli < 1:
        return
    kinds = _allowed_leaf_kinds(bounds)
    for a, b in product(kinds, kinds):
        counts = {}
        for k in (a, b):
            counts[k] = counts.get(k, 0) + 1
        if not _leaf_budget_ok(counts, bounds):
            continue
        first = f"{a}0"
        second = f"{b}1" if a == b else f"{b}0"
        yield InvariantPair(
            SaddleDiagram.empty(),
            (VertexNode(first, a), VertexNode(second, b)),
            (AnnulusEdge("a0", Attachment(first), Attachment(second)),),
        )


def enumerate_pairs(bounds: EnumBounds, rng: random.Random | None = None):
    """All connected model classes within the bounds, exactly once per class.

    Emitted in increasing cell count and by canonical bytes within a
    bucket; every emitted pair validates.
    """
    found = {}

    def offer(pair: InvariantPair):
        check_pair(pair)
        if len(assembly_components(pair)) != 1:
            return
        key = _canonical_blob(pair, bounds.mode)
        if key not in found:
            ncells = len(pair.vertices) + len(pair.annuli) + pair.tori
            found[key] = ((ncells, key), pair)

    if bounds.max_tori >= 1:
        offer(InvariantPair(SaddleDiagram.empty(), (), (), 1))
    for pair in _annulus_only_models(bounds):
        offer(pair)

    single_kinds = _allowed_leaf_kinds(bounds)
    for diagram in enumerate_diagrams(bounds, rng):
        if not diagram.saddles:
            continue
        comps = diagram_components(diagram)
        faces = faces_by_component(diagram)
        face_points = [
            (comp_id, idx)
            for comp_id, _, _ in comps
            for idx in range(len(faces.get(comp_id, [])))
        ]
        d_vertices = tuple(
            VertexNode(f"p{i}", "d", comp_id)
            for i, (comp_id, _, _) in enumerate(comps)
        )
        vertex_of_comp = {comp_id: f"p{i}" for i, (comp_id, _, _) in enumerate(comps)}

        for pairs, singles in _face_closures(face_points, bounds.max_annuli, rng):
            # every component must reach another through face-face annuli
            if len(comps) > 1 and not _joins_components(comps, pairs):
                continue
            for kinds in product(single_kinds, repeat=len(singles)):
                counts = {}
                for k in kinds:
                    counts[k] = counts.get(k, 0) + 1
                if not _leaf_budget_ok(counts, bounds):
                    continue
                for orient in product((False, True),
                                      repeat=len(pairs) + len(singles)):
                    offer(_assemble(diagram, d_vertices, vertex_of_comp,
                                    pairs, singles, kinds, orient))

    for (_, key), pair in sorted(found.values(), key=lambda item: item[0]):
        yield pair


def _joins_components(comps, pairs) -> bool:
    """True when the face-face pairs connect all diagram components."""
    parent = {comp_id: comp_id for comp_id, _, _ in comps}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (c1, _), (c2, _) in pairs:
        a, b = find(c1), find(c2)
        if a != b:
            parent[max(a, b)] = min(a, b)
    return len({find(c) for c in parent}) == 1


def _assemble(diagram, d_vertices, vertex_of_comp, pairs, singles, kinds,
              orient) -> InvariantPair:
    """Build one concrete diagram-based candidate."""
    vertices = list(d_vertices)
    annuli = []
    counters = {"c": 0, "n": 0, "b": 0}

    def fresh_leaf(kind: str) -> Attachment:
        vid = f"{kind}{counters[kind]}"
        counters[kind] += 1
        vertices.append(VertexNode(vid, kind))
        return Attachment(vid)

    def face_att(point) -> Attachment:
        comp_id, idx = point
        return Attachment(vertex_of_comp[comp_id], idx)

    flip_iter = iter(orient)
    for fp1, fp2 in pairs:
        a, b = face_att(fp1), face_att(fp2)
        if next(flip_iter):
            a, b = b, a
        annuli.append(AnnulusEdge(f"a{len(annuli)}", a, b))
    for point, kind in zip(singles, kinds):
        a, b = face_att(point), fresh_leaf(kind)
        if next(flip_iter):
            a, b = b, a
        annuli.append(AnnulusEdge(f"a{len(annuli)}", a, b))
    return InvariantPair(diagram, tuple(vertices), tuple(annuli), 0)


@dataclass(frozen=True)
class ClassTable:
    """Counts of enumerated classes keyed by coarse surface data.

    Keys are (orientable, genus, boundary, saddle count); for models with
    several surface components the genus and boundary entries are sums
    over components and orientable means every component is.  Each key
    carries the sorted canonical digests of its classes.
    """

    entries: tuple  # sorted ((key), (digest, ...)) pairs

    def counts(self) -> dict:
        return {key: len(digests) for key, digests in self.entries}


def count_classes(bounds: EnumBounds, rng: random.Random | None = None) -> ClassTable:
    table = {}
    for pair in enumerate_pairs(bounds, rng):
        _, sig = reconstruct(pair)
        key = (
            all(c.orientable for c in sig.components),
            sum(c.genus for c in sig.components),
            sum(c.boundary for c in sig.components),
            len(pair.diagram.saddles),
        )
        digest = sha256(_canonical_blob(pair, bounds.mode)).hexdigest()
        table.setdefault(key, []).append(digest)
    entries = tuple(sorted(
        (key, tuple(sorted(digests))) for key, digests in table.items()
    ))
    return ClassTable(entries)
