"""Seeded generator of valid tool event sequences, mixing diagram and model events."""

from __future__ import annotations

import random
from typing import Callable, Optional

from ..kernel.values import Ref, ids_of
from .diagram import ATTRIBUTE_EDGE, INHERITANCE_EDGE
from .script import (
    ModelAddTo,
    ModelDelete,
    ModelNew,
    ModelRemoveFrom,
    ModelSetSlot,
    Toggle,
    perform,
)
from .tool import (
    AddAttBox,
    CreateNodeAt,
    DeleteEdge,
    DeleteNode,
    DrawEdge,
    EditAttBox,
    EditNodeName,
    Tool,
)

PRIMITIVES = ("String", "Integer", "Boolean")


class EventGenerator:
    """Proposes one event at a time that is valid for the tool's current state.

    Names come from a counter so that every class and attribute name stays
    unique and type names resolve unambiguously.
    """

    def __init__(self, rng: random.Random):
        self.rng = rng
        self.counter = 0

    def fresh(self, prefix: str) -> str:
        self.counter += 1
        return f"{prefix}{self.counter}"

    def _buttons(self, tool: Tool, kind: str) -> list[str]:
        s = tool.store
        k = s.builtin(kind)
        return [b.name for g in tool.palette for b in g.buttons if s.is_subclass(b.cls, k)]

    def _type_names(self, tool: Tool) -> list[str]:
        s = tool.store
        names = [s.name(c) for c in s.classes(tool.package) if s.name(c)]
        return list(PRIMITIVES) + sorted(names)

    def _attributes(self, tool: Tool) -> list[int]:
        s = tool.store
        return sorted(a for c in s.classes(tool.package)
                      for a in ids_of(s.get_slot(c, "attributes")))

    def propose(self, tool: Tool):
        s, rng = tool.store, self.rng
        nodes = sorted(tool.diagram.class_boxes())
        classes = sorted(s.classes(tool.package))
        attrs = self._attributes(tool)
        class_buttons = self._buttons(tool, "Class")
        att_buttons = self._buttons(tool, "Attribute")
        options: list[Callable[[], Optional[object]]] = []

        if class_buttons:
            options.append(lambda: CreateNodeAt(rng.choice(class_buttons)))
            options.append(lambda: ModelNew(
                s.builtin(rng.choice(["Class", "EntityBean"]) if "EntityBean" in class_buttons
                          else "Class"),
                (("name", self.fresh("M")),)))
        if nodes:
            options.append(lambda: EditNodeName(rng.choice(nodes), self.fresh("C")))
            options.append(lambda: DeleteNode(rng.choice(nodes)))
            if att_buttons:
                options.append(lambda: AddAttBox(rng.choice(nodes), self.fresh("a"),
                                                 rng.choice(self._type_names(tool)),
                                                 rng.choice(att_buttons)))
                options.append(lambda: DrawEdge(ATTRIBUTE_EDGE, rng.choice(nodes),
                                                rng.choice(nodes), self.fresh("e"),
                                                rng.choice(att_buttons)))
            options.append(lambda: self._edit_att_box(tool, nodes))
            options.append(lambda: self._inheritance(tool, nodes))
        if tool.diagram.edges:
            options.append(lambda: DeleteEdge(rng.choice(sorted(tool.diagram.edges))))
        if attrs:
            options.append(lambda: self._toggle(tool, attrs))
            options.append(lambda: ModelSetSlot(rng.choice(attrs), "name", self.fresh("r")))
            options.append(lambda: ModelSetSlot(
                rng.choice(attrs), "type",
                Ref(rng.choice(classes + [s.builtin(p) for p in PRIMITIVES]))))
            options.append(lambda: ModelDelete(rng.choice(attrs)))
        if classes:
            options.append(lambda: ModelSetSlot(rng.choice(classes), "name", self.fresh("N")))
            options.append(lambda: ModelNew(
                s.builtin("Attribute"),
                (("name", self.fresh("m")),
                 ("type", Ref(rng.choice(classes + [s.builtin("String")])))),
                rng.choice(classes), "attributes"))
            options.append(lambda: ModelDelete(rng.choice(classes)))
            options.append(lambda: self._model_parents(tool, classes))

        for _ in range(20):
            ev = rng.choice(options)()
            if ev is not None:
                return ev
        return CreateNodeAt(class_buttons[0]) if class_buttons else None

    def _edit_att_box(self, tool: Tool, nodes):
        candidates = [n for n in nodes if tool.mapping.for_box(n).att_boxes]
        if not candidates:
            return None
        n = self.rng.choice(candidates)
        i = self.rng.randrange(len(tool.mapping.for_box(n).att_boxes))
        return EditAttBox(n, i, self.fresh("a"), self.rng.choice(self._type_names(tool)))

    def _inheritance(self, tool: Tool, nodes):
        s = tool.store
        src, tgt = self.rng.choice(nodes), self.rng.choice(nodes)
        cs, ct = tool.class_of_node(src), tool.class_of_node(tgt)
        if ct in s.parents(cs) or cs in s.all_parents(ct):
            return None
        return DrawEdge(INHERITANCE_EDGE, src, tgt)

    def _toggle(self, tool: Tool, attrs):
        a = self.rng.choice(attrs)
        if a in tool.mapping.edge_attributes():
            return Toggle(a)
        t = tool.store.attribute_type(a)
        if t is None or tool.node_of_class(t) is None:
            return None
        return Toggle(a)

    def _model_parents(self, tool: Tool, classes):
        s = tool.store
        c = self.rng.choice(classes)
        current = ids_of(s.get_slot(c, "parents"))
        if current and self.rng.random() < 0.5:
            return ModelRemoveFrom(c, "parents", self.rng.choice(current))
        p = self.rng.choice(classes)
        if p in current or c in s.all_parents(p):
            return None
        return ModelAddTo(c, "parents", p)


def random_run(tool: Tool, rng: random.Random, length: int,
               after_step: Optional[Callable[[int, object], None]] = None) -> list:
    """Generate and apply ``length`` events, calling ``after_step`` after each one."""
    gen = EventGenerator(rng)
    applied = []
    for i in range(length):
        ev = gen.propose(tool)
        if ev is None:
            break
        perform(tool, ev)
        applied.append(ev)
        if after_step is not None:
            after_step(i, ev)
    return applied
