"""JSON-lines event scripts for a tool, covering both diagram and model events.

Diagram events::

    {"ev": "createNode", "button": "EntityBean"}
    {"ev": "editName", "node": 3, "text": "Order"}
    {"ev": "addAttBox", "node": 3, "name": "id", "type": "Integer", "button": "BeanAttribute"}
    {"ev": "editAttBox", "node": 3, "index": 0, "name": "key", "type": "String"}
    {"ev": "drawEdge", "kind": "attribute", "source": 3, "target": 5, "name": "customer"}
    {"ev": "deleteEdge", "edge": 7}
    {"ev": "deleteNode", "node": 3}
    {"ev": "toggle", "attribute": 60}

Model events (elements are ids or names)::

    {"ev": "model.setSlot", "element": 55, "slot": "name", "value": {"s": "X"}}
    {"ev": "model.new", "class": "EntityBean", "slots": {"name": {"s": "Y"}}}
    {"ev": "model.new", "class": "Attribute", "owner": "Y", "slot": "attributes",
     "slots": {"name": {"s": "a"}, "type": {"r": 7}}}
    {"ev": "model.addTo", "element": "Y", "slot": "parents", "member": "X"}
    {"ev": "model.removeFrom", "element": "Y", "slot": "parents", "member": "X"}
    {"ev": "model.delete", "element": "Y"}
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Iterable, Iterator, Optional, Union

from ..errors import ToolError, UnknownElement
from ..kernel.values import Value, from_json, ids_of, to_json
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

ElementRef = Union[int, str]


@dataclass(frozen=True)
class Toggle:
    attribute: ElementRef


@dataclass(frozen=True)
class ModelSetSlot:
    element: ElementRef
    slot: str
    value: Value


@dataclass(frozen=True)
class ModelNew:
    cls: ElementRef
    slots: tuple = ()  # (slot, value) pairs
    owner: Optional[ElementRef] = None  # defaults to the tool's package
    slot: str = "elements"


@dataclass(frozen=True)
class ModelAddTo:
    element: ElementRef
    slot: str
    member: ElementRef


@dataclass(frozen=True)
class ModelRemoveFrom:
    element: ElementRef
    slot: str
    member: ElementRef


@dataclass(frozen=True)
class ModelDelete:
    element: ElementRef


_DIAGRAM = {
    "createNode": (CreateNodeAt, {"button": "button"}),
    "deleteNode": (DeleteNode, {"node": "node"}),
    "editName": (EditNodeName, {"node": "node", "text": "text"}),
    "addAttBox": (AddAttBox, {"node": "node", "name": "name", "type": "type_name",
                              "button": "button"}),
    "editAttBox": (EditAttBox, {"node": "node", "index": "index", "name": "name",
                                "type": "type_name"}),
    "drawEdge": (DrawEdge, {"kind": "kind", "source": "source", "target": "target",
                            "name": "name", "button": "button"}),
    "deleteEdge": (DeleteEdge, {"edge": "edge"}),
    "toggle": (Toggle, {"attribute": "attribute"}),
}


def event_from_json(obj: dict):
    kind = obj.get("ev")
    if kind in _DIAGRAM:
        cls, fields = _DIAGRAM[kind]
        kwargs = {attr: obj[key] for key, attr in fields.items() if key in obj}
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ToolError(f"bad {kind} event: {exc}") from None
    try:
        if kind == "model.setSlot":
            return ModelSetSlot(obj["element"], obj["slot"], from_json(obj["value"]))
        if kind == "model.new":
            slots = tuple((k, from_json(v)) for k, v in obj.get("slots", {}).items())
            return ModelNew(obj["class"], slots, obj.get("owner"), obj.get("slot", "elements"))
        if kind == "model.addTo":
            return ModelAddTo(obj["element"], obj["slot"], obj["member"])
        if kind == "model.removeFrom":
            return ModelRemoveFrom(obj["element"], obj["slot"], obj["member"])
        if kind == "model.delete":
            return ModelDelete(obj["element"])
    except KeyError as exc:
        raise ToolError(f"{kind} event is missing {exc}") from None
    except ValueError as exc:
        raise ToolError(f"{kind} event: {exc}") from None
    raise ToolError(f"unknown event {kind!r}")


def event_to_json(ev) -> dict:
    if isinstance(ev, ModelSetSlot):
        return {"ev": "model.setSlot", "element": ev.element, "slot": ev.slot,
                "value": to_json(ev.value)}
    if isinstance(ev, ModelNew):
        out = {"ev": "model.new", "class": ev.cls,
               "slots": {k: to_json(v) for k, v in ev.slots}}
        if ev.owner is not None:
            out["owner"] = ev.owner
        if ev.slot != "elements":
            out["slot"] = ev.slot
        return out
    if isinstance(ev, ModelAddTo):
        return {"ev": "model.addTo", "element": ev.element, "slot": ev.slot, "member": ev.member}
    if isinstance(ev, ModelRemoveFrom):
        return {"ev": "model.removeFrom", "element": ev.element, "slot": ev.slot,
                "member": ev.member}
    if isinstance(ev, ModelDelete):
        return {"ev": "model.delete", "element": ev.element}
    for kind, (cls, fields) in _DIAGRAM.items():
        if isinstance(ev, cls):
            data = asdict(ev)
            out = {"ev": kind}
            for key, attr in fields.items():
                if data[attr] is not None:
                    out[key] = data[attr]
            return out
    raise ToolError(f"cannot serialise {ev!r}")


def read_script(lines: Iterable[str]) -> Iterator:
    for n, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ToolError(f"line {n}: {exc.msg}") from None
        if not isinstance(obj, dict):
            raise ToolError(f"line {n}: an event must be a JSON object")
        yield event_from_json(obj)


def resolve(tool: Tool, ref: ElementRef) -> int:
    """An element id, or the name of a class or attribute in the tool's package,
    falling back to the meta-package ancestry."""
    s = tool.store
    if isinstance(ref, int) and not isinstance(ref, bool):
        if ref not in s:
            raise UnknownElement(ref)
        return ref
    if ref == s.name(tool.package):
        return tool.package
    for c in s.classes(tool.package):
        if s.name(c) == ref:
            return c
    for c in s.classes(tool.package):
        for a in ids_of(s.get_slot(c, "attributes")):
            if s.name(a) == ref:
                return a
    try:
        return tool.resolve_type(ref)
    except ToolError:
        raise ToolError(f"no element named {ref!r}") from None


def perform(tool: Tool, ev):
    """Apply one scripted event; diagram events go through the tool, model events
    straight to the store so the tool sees them through its daemon."""
    s = tool.store
    if isinstance(ev, Toggle):
        return tool.toggle_attribute_representation(resolve(tool, ev.attribute))
    if isinstance(ev, ModelSetSlot):
        return s.set_slot(resolve(tool, ev.element), ev.slot, ev.value)
    if isinstance(ev, ModelNew):
        eid = s.new_instance(resolve(tool, ev.cls))
        for slot, v in ev.slots:
            s.set_slot(eid, slot, v)
        owner = tool.package if ev.owner is None else resolve(tool, ev.owner)
        s.add_to(owner, ev.slot, eid)
        return eid
    if isinstance(ev, ModelAddTo):
        return s.add_to(resolve(tool, ev.element), ev.slot, resolve(tool, ev.member))
    if isinstance(ev, ModelRemoveFrom):
        return s.remove_from(resolve(tool, ev.element), ev.slot, resolve(tool, ev.member))
    if isinstance(ev, ModelDelete):
        return s.delete(resolve(tool, ev.element))
    return tool.apply(ev)

