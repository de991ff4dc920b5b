"""A modelling tool over one package: palette, diagram and the mapping that keeps
them synchronized.

Diagram events mutate the model through the kernel and update the diagram
themselves; while they run, the tool's own daemon ignores the echoes. Model
events arriving from anywhere else are reconciled into the diagram.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Optional, Union

from ..errors import (
    CyclicInheritance,
    NotAPackage,
    TagError,
    ToolError,
    TypeNotOnDiagram,
    UnknownButton,
    UnknownNode,
)
from ..kernel.store import ChangeEvent, ChangeKind, Store
from ..kernel.values import Ref, ids_of
from .diagram import (
    ATTRIBUTE_EDGE,
    INHERITANCE_EDGE,
    AttBox,
    ClassBox,
    ClassBoxXClass,
    Diagram,
    DiagramXPackage,
    Edge,
    NameBox,
    Node,
    Text,
)


@dataclass(frozen=True)
class Button:
    name: str
    cls: int


@dataclass
class Group:
    name: str
    buttons: list[Button] = field(default_factory=list)


# -- diagram events -----------------------------------------------------------

@dataclass(frozen=True)
class CreateNodeAt:
    button: str


@dataclass(frozen=True)
class DeleteNode:
    node: int


@dataclass(frozen=True)
class EditNodeName:
    node: int
    text: str


@dataclass(frozen=True)
class AddAttBox:
    node: int
    name: str
    type_name: str
    button: str = "Attribute"


@dataclass(frozen=True)
class EditAttBox:
    node: int
    index: int
    name: str
    type_name: str


@dataclass(frozen=True)
class DrawEdge:
    kind: str
    source: int
    target: int
    name: Optional[str] = None
    button: Optional[str] = None


@dataclass(frozen=True)
class DeleteEdge:
    edge: int


DiagramEvent = Union[CreateNodeAt, DeleteNode, EditNodeName, AddAttBox, EditAttBox,
                     DrawEdge, DeleteEdge]


def derive_palette(store: Store, package: int) -> list[Group]:
    """One group per meta-package in the ancestry of the package's meta-package."""
    mp = store.meta_package(package)
    if mp is None:
        return []
    return [
        Group(store.name(p), [Button(store.name(c), c) for c in store.palette_elements(p)])
        for p in sorted(store.all_parents(mp))
    ]


class Tool:
    def __init__(self, store: Store, package: int):
        if package not in store or not store.is_package(package):
            raise NotAPackage(f"element {package} is not a package")
        self.store = store
        self.package = package
        self.palette: list[Group] = []
        self.diagram = Diagram()
        self.mapping = DiagramXPackage(package, self.diagram)
        self.mode: Optional[Button] = None
        self.echoes_suppressed = 0
        self._diagram_origin = False
        self._reconcile()
        self.daemon = store.add_daemon(self._on_model_event)

    def close(self):
        self.store.remove_daemon(self.daemon)

    # -- lookups ----------------------------------------------------------

    def button(self, name: str) -> Button:
        for g in self.palette:
            for b in g.buttons:
                if b.name == name:
                    return b
        raise UnknownButton(f"no button {name!r} on the palette")

    def class_of_node(self, node: int) -> int:
        m = self.mapping.for_box(node)
        if m is None or self.diagram.class_box(node) is None:
            raise UnknownNode(f"no class node {node}")
        return m.cls

    def node_of_class(self, cls: int) -> Optional[int]:
        m = self.mapping.for_class(cls)
        return m.class_box if m is not None else None

    def resolve_type(self, name: str) -> int:
        s = self.store
        scope = list(s.classes(self.package))
        mp = s.meta_package(self.package)
        if mp is not None:
            for p in sorted(s.all_parents(mp), reverse=True):
                scope.extend(ids_of(s.get_slot(p, "elements")))
        for c in scope:
            if s.name(c) == name and s.is_class(c):
                return c
        raise ToolError(f"unknown type {name!r}")

    # -- display construction ---------------------------------------------

    def _type_text(self, attr: int) -> str:
        t = self.store.attribute_type(attr)
        return self.store.name(t) if t is not None and t in self.store else ""

    def _att_tag(self, attr: int) -> str:
        return self.store.tag(attr, self.store.builtin("Attribute"))

    def _new_att_box(self, attr: int) -> AttBox:
        return AttBox(self.diagram.fresh_id(), Text(self.store.name(attr)),
                      Text(self._type_text(attr)), Text(self._att_tag(attr)))

    def _add_class_box(self, cls: int) -> int:
        s = self.store
        node = self.diagram.fresh_id()
        box = ClassBox([NameBox(Text(s.name(cls)), Text(s.tag(cls, s.builtin("Class"))))])
        self.diagram.nodes[node] = Node(node, box)
        self.mapping.class_boxes.append(ClassBoxXClass(node, cls))
        return node

    def _add_att_box(self, cls: int, attr: int) -> int:
        m = self.mapping.for_class(cls)
        box = self._new_att_box(attr)
        self.diagram.class_box(m.class_box).children.append(box)
        m.att_boxes.append((box.id, attr))
        return box.id

    def _remove_att_box(self, m: ClassBoxXClass, box_id: int):
        m.att_boxes = [(b, a) for b, a in m.att_boxes if b != box_id]
        cb = self.diagram.class_box(m.class_box)
        if cb is not None:
            cb.children = [c for c in cb.children if not (isinstance(c, AttBox) and c.id == box_id)]

    def _add_att_edge(self, attr: int, source: int, target: int) -> int:
        eid = self.diagram.fresh_id()
        self.diagram.edges[eid] = Edge(eid, ATTRIBUTE_EDGE, source, target,
                                       [(self._att_tag(attr), self.store.name(attr))])
        self.mapping.att_edges.append((eid, attr))
        return eid

    def _remove_edge(self, eid: int):
        self.diagram.edges.pop(eid, None)
        self.mapping.att_edges = [(e, a) for e, a in self.mapping.att_edges if e != eid]

    def _remove_class_box(self, m: ClassBoxXClass):
        self.diagram.nodes.pop(m.class_box, None)
        self.mapping.class_boxes.remove(m)
        for e in list(self.diagram.edges.values()):
            if m.class_box in (e.source, e.target):
                self._remove_edge(e.id)

    # -- model -> diagram ---------------------------------------------------

    def _reconcile(self):
        """Bring the diagram back in line with the package after model changes."""
        s = self.store
        self.palette = derive_palette(s, self.package)
        classes = set(s.classes(self.package))
        for m in list(self.mapping.class_boxes):
            if m.cls not in classes:
                self._remove_class_box(m)
        mapped = {m.cls for m in self.mapping.class_boxes}
        for c in sorted(classes - mapped):
            self._add_class_box(c)

        # attribute edges survive only while owner and type both have boxes
        for eid, attr in list(self.mapping.att_edges):
            edge = self.diagram.edges.get(eid)
            owner = s.owner(attr) if attr in s else None
            src = self.node_of_class(owner) if owner is not None else None
            tgt = self.node_of_class(s.attribute_type(attr)) if attr in s else None
            if edge is None or src is None or tgt is None:
                self._remove_edge(eid)
            else:
                edge.source, edge.target = src, tgt

        on_edges = set(self.mapping.edge_attributes())
        for m in self.mapping.class_boxes:
            owned = ids_of(s.get_slot(m.cls, "attributes"))
            for box_id, attr in list(m.att_boxes):
                if attr not in owned:
                    self._remove_att_box(m, box_id)
            boxed = {a for _, a in m.att_boxes}
            for attr in owned:
                if attr not in boxed and attr not in on_edges:
                    self._add_att_box(m.cls, attr)

        for e in list(self.diagram.edges.values()):
            if e.kind == INHERITANCE_EDGE:
                ms, mt = self.mapping.for_box(e.source), self.mapping.for_box(e.target)
                if ms is None or mt is None or mt.cls not in s.parents(ms.cls):
                    self._remove_edge(e.id)
        self._refresh_texts()

    def _refresh_texts(self):
        s = self.store
        for m in self.mapping.class_boxes:
            cb = self.diagram.class_box(m.class_box)
            nb = cb.name_box
            nb.name.text = s.name(m.cls)
            nb.tag.text = s.tag(m.cls, s.builtin("Class"))
            boxes = {b.id: b for b in cb.att_boxes}
            for box_id, attr in m.att_boxes:
                b = boxes[box_id]
                b.name.text = s.name(attr)
                b.type.text = self._type_text(attr)
                b.tag.text = self._att_tag(attr)
        for eid, attr in self.mapping.att_edges:
            self.diagram.edges[eid].labels = [(self._att_tag(attr), s.name(attr))]

    def _relevant(self, ev: ChangeEvent) -> bool:
        if ev.kind is ChangeKind.ELEMENT_REMOVED:
            return True
        if ev.kind is ChangeKind.ELEMENT_ADDED:
            return False
        subj = ev.subject
        if subj == self.package or self.mapping.for_class(subj) is not None:
            return True
        if subj in self.mapping.boxed_attributes() or subj in self.mapping.edge_attributes():
            return True
        # renaming a class that some shown attribute uses as its type
        return ev.slot == "name" and any(
            self.store.attribute_type(a) == subj
            for a in self.mapping.boxed_attributes() + self.mapping.edge_attributes()
            if a in self.store
        )

    def _on_model_event(self, ev: ChangeEvent):
        if self._diagram_origin:
            self.echoes_suppressed += 1
            return
        self.apply_model_event(ev)

    def apply_model_event(self, ev: ChangeEvent):
        if self._relevant(ev):
            self._reconcile()

    @contextmanager
    def _from_diagram(self):
        self._diagram_origin = True
        try:
            yield
        finally:
            self._diagram_origin = False

    # -- diagram -> model ---------------------------------------------------

    def apply(self, ev: DiagramEvent):
        """Apply a diagram event; returns the id of any node, box or edge it creates."""
        handler = getattr(self, "_on_" + type(ev).__name__)
        return handler(ev)

    def _use(self, name: str, kind: str) -> Button:
        b = self.button(name)
        if not self.store.is_subclass(b.cls, self.store.builtin(kind)):
            raise TagError(f"button {name!r} does not create a kind of {kind}")
        self.mode = b
        return b

    def _on_CreateNodeAt(self, ev: CreateNodeAt) -> int:
        b = self._use(ev.button, "Class")
        s = self.store
        with self._from_diagram():
            cls = s.new_instance(b.cls)
            s.add_to(self.package, "elements", cls)
        return self._add_class_box(cls)

    def _on_DeleteNode(self, ev: DeleteNode):
        cls = self.class_of_node(ev.node)
        s = self.store
        with self._from_diagram():
            for attr in ids_of(s.get_slot(cls, "attributes")):
                s.delete(attr)
            s.delete(cls)
        self._remove_class_box(self.mapping.for_class(cls))
        # cascades: attributes typed by the class lose their type, edges to it go
        self._reconcile()

    def _on_EditNodeName(self, ev: EditNodeName):
        cls = self.class_of_node(ev.node)
        with self._from_diagram():
            self.store.set_slot(cls, "name", ev.text)
        self._refresh_texts()

    def _on_AddAttBox(self, ev: AddAttBox) -> int:
        cls = self.class_of_node(ev.node)
        b = self._use(ev.button, "Attribute")
        typ = self.resolve_type(ev.type_name)
        s = self.store
        with self._from_diagram():
            attr = s.new_instance(b.cls)
            s.set_slot(attr, "name", ev.name)
            s.set_slot(attr, "type", Ref(typ))
            s.add_to(cls, "attributes", attr)
        return self._add_att_box(cls, attr)

    def _on_EditAttBox(self, ev: EditAttBox):
        cls = self.class_of_node(ev.node)
        m = self.mapping.for_class(cls)
        if not 0 <= ev.index < len(m.att_boxes):
            raise UnknownNode(f"node {ev.node} has no attribute box {ev.index}")
        _, attr = m.att_boxes[ev.index]
        typ = self.resolve_type(ev.type_name)
        with self._from_diagram():
            self.store.set_slot(attr, "name", ev.name)
            self.store.set_slot(attr, "type", Ref(typ))
        self._refresh_texts()

    def _on_DrawEdge(self, ev: DrawEdge) -> int:
        src = self.class_of_node(ev.source)
        tgt = self.class_of_node(ev.target)
        s = self.store
        if ev.kind == ATTRIBUTE_EDGE:
            if not ev.name:
                raise ToolError("an attribute edge needs a name")
            b = self._use(ev.button or "Attribute", "Attribute")
            with self._from_diagram():
                attr = s.new_instance(b.cls)
                s.set_slot(attr, "name", ev.name)
                s.set_slot(attr, "type", Ref(tgt))
                s.add_to(src, "attributes", attr)
            return self._add_att_edge(attr, ev.source, ev.target)
        if ev.kind == INHERITANCE_EDGE:
            if tgt in s.parents(src):
                raise ToolError(f"{s.name(src)} already inherits from {s.name(tgt)}")
            if src in s.all_parents(tgt):
                raise CyclicInheritance(f"{s.name(tgt) or tgt} already inherits from "
                                        f"{s.name(src) or src}")
            with self._from_diagram():
                s.add_to(src, "parents", tgt)
            eid = self.diagram.fresh_id()
            self.diagram.edges[eid] = Edge(eid, INHERITANCE_EDGE, ev.source, ev.target)
            return eid
        raise ToolError(f"unknown edge kind {ev.kind!r}")

    def _on_DeleteEdge(self, ev: DeleteEdge):
        edge = self.diagram.edges.get(ev.edge)
        if edge is None:
            raise UnknownNode(f"no edge {ev.edge}")
        s = self.store
        if edge.kind == ATTRIBUTE_EDGE:
            attr = next(a for e, a in self.mapping.att_edges if e == ev.edge)
            with self._from_diagram():
                s.delete(attr)
            self._remove_edge(ev.edge)
        else:
            src = self.class_of_node(edge.source)
            tgt = self.class_of_node(edge.target)
            with self._from_diagram():
                s.remove_from(src, "parents", tgt)
            self._remove_edge(ev.edge)

    # -- representation -----------------------------------------------------

    def toggle_attribute_representation(self, attr: int):
        """Show a boxed attribute as an edge, or an edge attribute as a box."""
        s = self.store
        for eid, a in self.mapping.att_edges:
            if a == attr:
                self._remove_edge(eid)
                self._add_att_box(s.owner(attr), attr)
                return
        for m in self.mapping.class_boxes:
            for box_id, a in m.att_boxes:
                if a == attr:
                    tgt = self.node_of_class(s.attribute_type(attr))
                    if tgt is None:
                        raise TypeNotOnDiagram(
                            f"type of {s.name(attr)!r} has no class box on the diagram")
                    self._remove_att_box(m, box_id)
                    self._add_att_edge(attr, m.class_box, tgt)
                    return
        raise ToolError(f"attribute {attr} is not shown on the diagram")


def open_tool(store: Store, package: int) -> Tool:
    return Tool(store, package)
