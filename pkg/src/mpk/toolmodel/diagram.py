"""Headless diagrams: nodes with displays, edges with labels, and the maplets
tying them to model elements."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union


@dataclass
class Text:
    text: str = ""


@dataclass
class NameBox:
    name: Text = field(default_factory=Text)
    tag: Text = field(default_factory=Text)


@dataclass
class AttBox:
    id: int
    name: Text = field(default_factory=Text)
    type: Text = field(default_factory=Text)
    tag: Text = field(default_factory=Text)


@dataclass
class Box:
    children: list = field(default_factory=list)


@dataclass
class ClassBox(Box):
    """A box whose first child is its name box and whose other children are attribute boxes."""

    @property
    def name_box(self) -> NameBox:
        return next(c for c in self.children if isinstance(c, NameBox))

    @property
    def att_boxes(self) -> list[AttBox]:
        return [c for c in self.children if isinstance(c, AttBox)]


Display = Union[Box, Text, ClassBox, NameBox, AttBox]

ATTRIBUTE_EDGE = "attribute"
INHERITANCE_EDGE = "inheritance"


@dataclass
class Node:
    id: int
    display: Display


@dataclass
class Edge:
    id: int
    kind: str
    source: int
    target: int
    labels: list[tuple[str, str]] = field(default_factory=list)


@dataclass
class Diagram:
    nodes: dict[int, Node] = field(default_factory=dict)
    edges: dict[int, Edge] = field(default_factory=dict)
    next_id: int = 1

    def fresh_id(self) -> int:
        i = self.next_id
        self.next_id += 1
        return i

    def class_boxes(self) -> list[int]:
        return [n.id for n in self.nodes.values() if isinstance(n.display, ClassBox)]

    def class_box(self, node: int) -> Optional[ClassBox]:
        n = self.nodes.get(node)
        return n.display if n is not None and isinstance(n.display, ClassBox) else None

    def att_edges(self) -> list[int]:
        return [e.id for e in self.edges.values() if e.kind == ATTRIBUTE_EDGE]

    def find_att_box(self, box_id: int) -> Optional[tuple[int, AttBox]]:
        for n in self.nodes.values():
            if isinstance(n.display, ClassBox):
                for b in n.display.att_boxes:
                    if b.id == box_id:
                        return n.id, b
        return None


@dataclass
class ClassBoxXClass:
    class_box: int
    cls: int
    att_boxes: list[tuple[int, int]] = field(default_factory=list)  # (attBox id, attribute)


@dataclass
class DiagramXPackage:
    package: int
    diagram: Diagram
    class_boxes: list[ClassBoxXClass] = field(default_factory=list)
    att_edges: list[tuple[int, int]] = field(default_factory=list)  # (edge id, attribute)

    def for_class(self, cls: int) -> Optional[ClassBoxXClass]:
        for m in self.class_boxes:
            if m.cls == cls:
                return m
        return None

    def for_box(self, node: int) -> Optional[ClassBoxXClass]:
        for m in self.class_boxes:
            if m.class_box == node:
                return m
        return None

    def is_class(self, node: int, cls: Optional[int]) -> bool:
        return any(m.class_box == node and m.cls == cls for m in self.class_boxes)

    def boxed_attributes(self) -> list[int]:
        return [a for m in self.class_boxes for _, a in m.att_boxes]

    def edge_attributes(self) -> list[int]:
        return [a for _, a in self.att_edges]


def display_json(d: Display, with_ids: bool = True) -> dict:
    if isinstance(d, ClassBox):
        nb = d.name_box
        return {
            "kind": "ClassBox",
            "name": nb.name.text,
            "tag": nb.tag.text,
            "attBoxes": [display_json(b, with_ids) for b in d.att_boxes],
        }
    if isinstance(d, AttBox):
        out = {"kind": "AttBox", "name": d.name.text, "type": d.type.text, "tag": d.tag.text}
        if with_ids:
            out["id"] = d.id
        return out
    if isinstance(d, NameBox):
        return {"kind": "NameBox", "name": d.name.text, "tag": d.tag.text}
    if isinstance(d, Text):
        return {"kind": "Text", "text": d.text}
    return {"kind": "Box", "children": [display_json(c, with_ids) for c in d.children]}


def diagram_json(diagram: Diagram, with_ids: bool = True) -> dict:
    """Deterministic dump. Without ids, nodes are keyed by display name so that
    diagrams built through different event orders can be compared."""
    if with_ids:
        return {
            "nodes": [{"id": n.id, "display": display_json(n.display)}
                      for n in sorted(diagram.nodes.values(), key=lambda n: n.id)],
            "edges": [{"id": e.id, "kind": e.kind, "source": e.source, "target": e.target,
                       "labels": [list(lb) for lb in e.labels]}
                      for e in sorted(diagram.edges.values(), key=lambda e: e.id)],
        }

    def label(node_id):
        n = diagram.nodes.get(node_id)
        if n is not None and isinstance(n.display, ClassBox):
            return n.display.name_box.name.text
        return f"?{node_id}"

    nodes = sorted((display_json(n.display, False) for n in diagram.nodes.values()),
                   key=lambda j: repr(j))
    edges = sorted(({"kind": e.kind, "source": label(e.source), "target": label(e.target),
                     "labels": [list(lb) for lb in e.labels]}
                    for e in diagram.edges.values()), key=lambda j: repr(j))
    return {"nodes": nodes, "edges": edges}
