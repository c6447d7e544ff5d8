"""Model files: strict JSON with source-located diagnostics, and DOT export.

The document format is versioned JSON with a fixed schema; unknown
fields, wrong types, duplicate keys and version mismatches are rejected
with the line and column of the offending value.  Semantic violations
(from pair validation) are mapped back to the source location of the
object that broke the rule.

The parser is hand-rolled because diagnostics need positions for every
value, which the stdlib decoder does not expose.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .diagram import Saddle, SaddleDiagram, Separatrix
from .graph import (
    AnnulusEdge,
    Attachment,
    InvariantPair,
    VertexNode,
    validate_pair,
)

FORMAT_VERSION = 1


@dataclass(frozen=True)
class Diagnostic:
    line: int
    col: int
    path: str
    rule: str
    message: str

    def render(self) -> str:
        return f"{self.line}:{self.col} {self.path}: {self.message} [{self.rule}]"


class ParseError(ValueError):
    """Malformed JSON text."""

    def __init__(self, message: str, line: int, col: int):
        self.line, self.col = line, col
        super().__init__(f"{line}:{col}: {message}")


class SchemaError(ValueError):
    """Well-formed JSON that does not match the document schema."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(d.render() for d in self.diagnostics))


class SemanticError(ValueError):
    """Schema-valid document whose model fails validation."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(d.render() for d in self.diagnostics))


class _Node:
    """A JSON value plus its source position; containers hold child nodes."""

    __slots__ = ("value", "line", "col")

    def __init__(self, value, line, col):
        self.value = value
        self.line = line
        self.col = col


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str):
        raise ParseError(message, self.line, self.col)

    def _advance(self, n: int):
        for _ in range(n):
            if self.text[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t\r\n":
            self._advance(1)

    def peek(self) -> str:
        if self.pos >= len(self.text):
            self.error("unexpected end of input")
        return self.text[self.pos]

    def expect(self, ch: str):
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            self.error(f"expected {ch!r}")
        self._advance(1)

    def parse_document(self) -> _Node:
        self.skip_ws()
        node = self.parse_value()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error("trailing content after document")
        return node

    def parse_value(self) -> _Node:
        ch = self.peek()
        if ch == "{":
            return self.parse_object()
        if ch == "[":
            return self.parse_array()
        if ch == '"':
            return self.parse_string()
        if ch in "-0123456789":
            return self.parse_number()
        for literal, value in (("true", True), ("false", False), ("null", None)):
            if self.text.startswith(literal, self.pos):
                node = _Node(value, self.line, self.col)
                self._advance(len(literal))
                return node
        self.error(f"unexpected character {ch!r}")

    def parse_object(self) -> _Node:
        node = _Node({}, self.line, self.col)
        self.expect("{")
        self.skip_ws()
        if self.peek() == "}":
            self._advance(1)
            return node
        while True:
            self.skip_ws()
            if self.peek() != '"':
                self.error("expected object key string")
            key_line, key_col = self.line, self.col
            key = self.parse_string().value
            if key in node.value:
                raise ParseError(f"duplicate key {key!r}", key_line, key_col)
            self.skip_ws()
            self.expect(":")
            self.skip_ws()
            node.value[key] = self.parse_value()
            self.skip_ws()
            if self.peek() == ",":
                self._advance(1)
                continue
            self.expect("}")
            return node

    def parse_array(self) -> _Node:
        node = _Node([], self.line, self.col)
        self.expect("[")
        self.skip_ws()
        if self.peek() == "]":
            self._advance(1)
            return node
        while True:
            self.skip_ws()
            node.value.append(self.parse_value())
            self.skip_ws()
            if self.peek() == ",":
                self._advance(1)
                continue
            self.expect("]")
            return node

    def parse_string(self) -> _Node:
        line, col = self.line, self.col
        self.expect('"')
        out = []
        while True:
            if self.pos >= len(self.text):
                self.error("unterminated string")
            ch = self.text[self.pos]
            if ch == '"':
                self._advance(1)
                return _Node("".join(out), line, col)
            if ch == "\\":
                if self.pos + 1 >= len(self.text):
                    self.error("unterminated escape")
                esc = self.text[self.pos + 1]
                mapping = {'"': '"', "\\": "\\", "/": "/", "b": "\b",
                           "f": "\f", "n": "\n", "r": "\r", "t": "\t"}
                if esc in mapping:
                    out.append(mapping[esc])
                    self._advance(2)
                elif esc == "u":
                    hexpart = self.text[self.pos + 2:self.pos + 6]
                    if len(hexpart) != 4:
                        self.error("unterminated unicode escape")
                    try:
                        out.append(chr(int(hexpart, 16)))
                    except ValueError:
                        self.error("invalid unicode escape")
                    self._advance(6)
                else:
                    self.error(f"invalid escape \\{esc}")
            elif ch in "\n\r":
                self.error("newline in string")
            else:
                out.append(ch)
                self._advance(1)

    def parse_number(self) -> _Node:
        line, col = self.line, self.col
        start = self.pos
        if self.peek() == "-":
            self._advance(1)
        while self.pos < len(self.text) and self.text[self.pos] in "0123456789":
            self._advance(1)
        is_float = False
        if self.pos < len(self.text) and self.text[self.pos] == ".":
            is_float = True
            self._advance(1)
            while self.pos < len(self.text) and self.text[self.pos] in "0123456789":
                self._advance(1)
        if self.pos < len(self.text) and self.text[self.pos] in "eE":
            is_float = True
            self._advance(1)
            if self.pos < len(self.text) and self.text[self.pos] in "+-":
                self._advance(1)
            while self.pos < len(self.text) and self.text[self.pos] in "0123456789":
                self._advance(1)
        raw = self.text[start:self.pos]
        if raw in ("", "-"):
            raise ParseError("invalid number", line, col)
        try:
            value = float(raw) if is_float else int(raw)
        except ValueError:
            raise ParseError(f"invalid number {raw!r}", line, col)
        return _Node(value, line, col)


class _Walker:
    """Strict schema traversal over position-carrying nodes."""

    def __init__(self):
        self.diagnostics = []

    def fail(self, node: _Node, path: str, rule: str, message: str):
        self.diagnostics.append(
            Diagnostic(node.line, node.col, path, rule, message)
        )
        raise SchemaError(self.diagnostics)

    def obj(self, node: _Node, path: str, required: tuple, optional: tuple = ()):
        if not isinstance(node.value, dict):
            self.fail(node, path, "type", "expected an object")
        for key in node.value:
            if key not in required and key not in optional:
                self.fail(node.value[key], f"{path}.{key}", "unknown-field",
                          f"unknown field {key!r}")
        for key in required:
            if key not in node.value:
                self.fail(node, path, "missing-field",
                          f"missing required field {key!r}")
        return node.value

    def string(self, node: _Node, path: str) -> str:
        if not isinstance(node.value, str):
            self.fail(node, path, "type", "expected a string")
        return node.value

    def integer(self, node: _Node, path: str, minimum: int | None = None) -> int:
        if not isinstance(node.value, int) or isinstance(node.value, bool):
            self.fail(node, path, "type", "expected an integer")
        if minimum is not None and node.value < minimum:
            self.fail(node, path, "range", f"expected an integer >= {minimum}")
        return node.value

    def boolean(self, node: _Node, path: str) -> bool:
        if not isinstance(node.value, bool):
            self.fail(node, path, "type", "expected a boolean")
        return node.value

    def array(self, node: _Node, path: str) -> list:
        if not isinstance(node.value, list):
            self.fail(node, path, "type", "expected an array")
        return node.value


def _read_model(node: _Node, walker: _Walker):
    """Build the pair plus a map from semantic subjects to positions."""
    top = walker.obj(node, "$", ("version", "diagram", "graph"))
    version = walker.integer(top["version"], "$.version")
    if version != FORMAT_VERSION:
        walker.fail(top["version"], "$.version", "version",
                    f"unsupported version {version}; this tool reads"
                    f" version {FORMAT_VERSION}")

    positions = {}

    dia = walker.obj(top["diagram"], "$.diagram", ("saddles", "separatrices"))
    saddles = []
    for i, snode in enumerate(walker.array(dia["saddles"], "$.diagram.saddles")):
        path = f"$.diagram.saddles[{i}]"
        fields = walker.obj(snode, path, ("id", "kind", "k", "rotation"))
        sid = walker.string(fields["id"], path + ".id")
        kind = walker.string(fields["kind"], path + ".kind")
        if kind not in ("interior", "boundary"):
            walker.fail(fields["kind"], path + ".kind", "enum",
                        "kind must be 'interior' or 'boundary'")
        k = walker.integer(fields["k"], path + ".k", minimum=0)
        rotation = []
        for j, dnode in enumerate(walker.array(fields["rotation"],
                                               path + ".rotation")):
            dpath = f"{path}.rotation[{j}]"
            dart = walker.obj(dnode, dpath, ("sep", "end"))
            sep = walker.string(dart["sep"], dpath + ".sep")
            end = walker.string(dart["end"], dpath + ".end")
            if end not in ("out", "in"):
                walker.fail(dart["end"], dpath + ".end", "enum",
                            "end must be 'out' or 'in'")
            rotation.append((sep, end))
        saddles.append(Saddle(sid, k, tuple(rotation), kind))
        positions[("saddle", sid)] = (snode.line, snode.col, path)

    separatrices = []
    for i, enode in enumerate(walker.array(dia["separatrices"],
                                           "$.diagram.separatrices")):
        path = f"$.diagram.separatrices[{i}]"
        fields = walker.obj(enode, path, ("id", "source", "target"),
                            optional=("twisted",))
        eid = walker.string(fields["id"], path + ".id")
        twisted = False
        if "twisted" in fields:
            twisted = walker.boolean(fields["twisted"], path + ".twisted")
        separatrices.append(Separatrix(
            eid,
            walker.string(fields["source"], path + ".source"),
            walker.string(fields["target"], path + ".target"),
            twisted,
        ))
        positions[("separatrix", eid)] = (enode.line, enode.col, path)

    gr = walker.obj(top["graph"], "$.graph", ("vertices", "annuli", "tori"))
    vertices = []
    for i, vnode in enumerate(walker.array(gr["vertices"], "$.graph.vertices")):
        path = f"$.graph.vertices[{i}]"
        fields = walker.obj(vnode, path, ("id", "label"), optional=("component",))
        vid = walker.string(fields["id"], path + ".id")
        label = walker.string(fields["label"], path + ".label")
        if label not in ("c", "n", "b", "polycycle"):
            walker.fail(fields["label"], path + ".label", "enum",
                        "label must be 'c', 'n', 'b' or 'polycycle'")
        component = None
        if "component" in fields:
            component = walker.string(fields["component"], path + ".component")
        if label == "polycycle" and component is None:
            walker.fail(vnode, path, "missing-field",
                        "polycycle vertices must name their component")
        if label != "polycycle" and component is not None:
            walker.fail(fields["component"], path + ".component",
                        "unknown-field",
                        "only polycycle vertices carry a component")
        vertices.append(VertexNode(vid, "d" if label == "polycycle" else label,
                                   component))
        positions[("vertex", vid)] = (vnode.line, vnode.col, path)

    def read_attachment(anode: _Node, path: str) -> Attachment:
        fields = walker.obj(anode, path, ("vertex",), optional=("face",))
        vertex = walker.string(fields["vertex"], path + ".vertex")
        face = None
        if "face" in fields:
            face = walker.integer(fields["face"], path + ".face", minimum=0)
        return Attachment(vertex, face)

    annuli = []
    for i, anode in enumerate(walker.array(gr["annuli"], "$.graph.annuli")):
        path = f"$.graph.annuli[{i}]"
        fields = walker.obj(anode, path, ("id", "neg", "pos"))
        aid = walker.string(fields["id"], path + ".id")
        annuli.append(AnnulusEdge(
            aid,
            read_attachment(fields["neg"], path + ".neg"),
            read_attachment(fields["pos"], path + ".pos"),
        ))
        positions[("annulus", aid)] = (anode.line, anode.col, path)

    tori = walker.integer(gr["tori"], "$.graph.tori", minimum=0)
    positions[("model", "")] = (node.line, node.col, "$")

    pair = InvariantPair(SaddleDiagram(tuple(saddles), tuple(separatrices)),
                         tuple(vertices), tuple(annuli), tori)
    return pair, positions


def parse_model(text: str) -> InvariantPair:
    """Parse and fully validate one model document.

    Raises ParseError (syntax), SchemaError (structure) or SemanticError
    (model rule violations, with source positions).
    """
    root = _Reader(text).parse_document()
    pair, positions = _read_model(root, _Walker())
    violations = validate_pair(pair)
    if violations:
        diags = []
        for v in violations:
            line, col, path = positions.get(
                (v.kind, v.subject), positions[("model", "")]
            )
            diags.append(Diagnostic(line, col, path, v.rule, v.message))
        raise SemanticError(diags)
    return pair


def _document_of(p: InvariantPair) -> dict:
    return {
        "version": FORMAT_VERSION,
        "diagram": {
            "saddles": [
                {
                    "id": s.id,
                    "kind": s.kind,
                    "k": s.k,
                    "rotation": [
                        {"sep": sep, "end": end} for sep, end in s.rotation
                    ],
                }
                for s in p.diagram.saddles
            ],
            "separatrices": [
                {"id": e.id, "source": e.source, "target": e.target}
                | ({"twisted": True} if e.twisted else {})
                for e in p.diagram.separatrices
            ],
        },
        "graph": {
            "vertices": [
                {"id": v.id, "label": "polycycle" if v.label == "d" else v.label}
                | ({"component": v.component} if v.label == "d" else {})
                for v in p.vertices
            ],
            "annuli": [
                {
                    "id": a.id,
                    "neg": {"vertex": a.neg.vertex}
                    | ({"face": a.neg.face} if a.neg.face is not None else {}),
                    "pos": {"vertex": a.pos.vertex}
                    | ({"face": a.pos.face} if a.pos.face is not None else {}),
                }
                for a in p.annuli
            ],
            "tori": p.tori,
        },
    }


def serialize_model(p: InvariantPair, compact: bool = False) -> str:
    """Deterministic canonical-field-order document text.

    Object lists are ordered by id (the pair stores them that way), so
    serializing equal pairs yields byte-identical text.
    """
    doc = _document_of(p)
    if compact:
        return json.dumps(doc, separators=(",", ":"))
    return json.dumps(doc, indent=2) + "\n"


def _dot_quote(s: str) -> str:
    escaped = s.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def export_dot(p: InvariantPair, which: str = "graph") -> str:
    """Graphviz text for the labeled graph or the saddle diagram."""
    if which == "graph":
        lines = ["graph invariant {"]
        for v in p.vertices:
            label = v.label if v.label != "d" else f"polycycle:{v.component}"
            lines.append(f"  {_dot_quote(v.id)} [label={_dot_quote(label)}];")
        for i in range(p.tori):
            lines.append(
                f"  {_dot_quote(f'torus{i}')} [label=\"torus\" shape=doublecircle];"
            )
        for a in p.annuli:
            def att(x):
                return x.vertex if x.face is None else f"{x.vertex}#{x.face}"
            label = f"{a.id}: neg={att(a.neg)} pos={att(a.pos)}"
            lines.append(
                f"  {_dot_quote(a.neg.vertex)} -- {_dot_quote(a.pos.vertex)}"
                f" [label={_dot_quote(label)}];"
            )
        lines.append("}")
        return "\n".join(lines) + "\n"
    if which == "diagram":
        lines = ["digraph diagram {"]
        for s in p.diagram.saddles:
            rot = ",".join(
                f"{sep}{'+' if end == 'out' else '-'}" for sep, end in s.rotation
            )
            label = f"{s.id} k={s.k} rot=({rot})"
            lines.append(f"  {_dot_quote(s.id)} [label={_dot_quote(label)}];")
        for e in p.diagram.separatrices:
            lines.append(
                f"  {_dot_quote(e.source)} -> {_dot_quote(e.target)}"
                f" [label={_dot_quote(e.id)}];"
            )
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown export target {which!r}")
