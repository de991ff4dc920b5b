"""Headless modelling tool: palette, diagram, mapping, daemons and sync checks."""

from .diagram import (
    ATTRIBUTE_EDGE,
    INHERITANCE_EDGE,
    AttBox,
    Box,
    ClassBox,
    ClassBoxXClass,
    Diagram,
    DiagramXPackage,
    Edge,
    NameBox,
    Node,
    Text,
    diagram_json,
    display_json,
)
from .fuzz import EventGenerator, random_run
from .script import (
    ModelAddTo,
    ModelDelete,
    ModelNew,
    ModelRemoveFrom,
    ModelSetSlot,
    Toggle,
    event_from_json,
    event_to_json,
    perform,
    read_script,
)
from .sync import Violation, one_to_one_violations, sync_check
from .tool import (
    AddAttBox,
    Button,
    CreateNodeAt,
    DeleteEdge,
    DeleteNode,
    DrawEdge,
    EditAttBox,
    EditNodeName,
    Group,
    Tool,
    derive_palette,
    open_tool,
)

__all__ = [
    "ATTRIBUTE_EDGE", "INHERITANCE_EDGE",
    "AddAttBox", "AttBox", "Box", "Button", "ClassBox", "ClassBoxXClass", "CreateNodeAt",
    "DeleteEdge", "DeleteNode", "Diagram", "DiagramXPackage", "DrawEdge", "Edge",
    "EditAttBox", "EditNodeName", "EventGenerator", "Group", "ModelAddTo", "ModelDelete",
    "ModelNew", "ModelRemoveFrom", "ModelSetSlot", "NameBox", "Node", "Text", "Toggle",
    "Tool", "Violation",
    "derive_palette", "diagram_json", "display_json", "event_from_json", "event_to_json",
    "one_to_one_violations", "open_tool", "perform", "random_run", "read_script",
    "sync_check",
]
