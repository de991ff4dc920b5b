"""Executable synchronization constraints between a tool's diagram and its package."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable

from ..errors import MpkError
from ..kernel.values import ids_of
from .diagram import ClassBox, NameBox
from .tool import Tool, derive_palette


@dataclass(frozen=True)
class Violation:
    constraint: str
    detail: str

    def to_json(self) -> dict:
        return {"constraint": self.constraint, "detail": self.detail}


def one_to_one_violations(maplets: Iterable[tuple]) -> tuple[list, list]:
    """Domain elements mapped to several ranges, and ranges mapped from several domains.

    This is the intended reading of the uniqueness rule: each domain element
    maps to at most one range element and each range element from at most one
    domain element.
    """
    fwd: dict = defaultdict(set)
    back: dict = defaultdict(set)
    for d, r in maplets:
        fwd[d].add(r)
        back[r].add(d)
    return ([d for d, rs in fwd.items() if len(rs) > 1],
            [r for r, ds in back.items() if len(ds) > 1])


def sync_check(tool: Tool) -> list[Violation]:
    out: list[Violation] = []
    s, d, m = tool.store, tool.diagram, tool.mapping

    def fail(name, detail):
        out.append(Violation(name, detail))

    # palette
    try:
        expected = derive_palette(s, tool.package)
    except MpkError as exc:
        fail("PaletteGroups", f"cannot derive palette: {exc}")
        expected = None
    if expected is not None:
        have = {g.name: sorted(b.name for b in g.buttons) for g in tool.palette}
        want = {g.name: sorted(b.name for b in g.buttons) for g in expected}
        if set(have) != set(want):
            fail("PaletteGroups", f"groups {sorted(have)} != meta-packages {sorted(want)}")
        for name in sorted(set(have) & set(want)):
            if have[name] != want[name]:
                fail("PaletteButtons", f"group {name}: {have[name]} != {want[name]}")

    classes = set(s.classes(tool.package))
    class_boxes = set(d.class_boxes())

    if len(classes) != len(class_boxes):
        fail("NodeCount", f"{len(classes)} classes but {len(class_boxes)} class nodes")

    if m.package != tool.package or m.diagram is not d:
        fail("MappingCommutes", "mapping does not refer to the tool's package and diagram")

    for e in d.edges.values():
        if e.source not in d.nodes or e.target not in d.nodes:
            fail("EdgeEndpoints", f"edge {e.id} has a dangling endpoint")

    # uniqueness of every maplet family
    families = [("ClassBox_X_Class", [(x.class_box, x.cls) for x in m.class_boxes]),
                ("AttEdge_X_Attribute", list(m.att_edges))]
    for x in m.class_boxes:
        families.append((f"AttBox_X_Attribute[{x.class_box}]", list(x.att_boxes)))
    for fam, maplets in families:
        doms, rngs = one_to_one_violations(maplets)
        for dup in doms:
            fail("OneToOneDomain", f"{fam}: {dup} maps to several elements")
        for dup in rngs:
            fail("OneToOneRange", f"{fam}: {dup} is mapped from several elements")

    mapped_classes = {x.cls for x in m.class_boxes}
    mapped_boxes = {x.class_box for x in m.class_boxes}
    if mapped_classes != classes:
        fail("ClassBoxTotality",
             f"package classes {sorted(classes)} != mapped classes {sorted(mapped_classes)}")
    if mapped_boxes != class_boxes:
        fail("ClassBoxTotality",
             f"diagram class boxes {sorted(class_boxes)} != mapped boxes {sorted(mapped_boxes)}")

    package_attributes: set[int] = set()
    for c in classes:
        package_attributes.update(ids_of(s.get_slot(c, "attributes")))

    edge_ids = {e for e, _ in m.att_edges}
    if edge_ids != set(d.att_edges()):
        fail("AttEdgeMembership",
             f"mapped edges {sorted(edge_ids)} != diagram attribute edges {sorted(d.att_edges())}")
    stray = {a for _, a in m.att_edges} - package_attributes
    if stray:
        fail("AttEdgeSubset", f"edges show attributes outside the package: {sorted(stray)}")

    attr_cls = s.builtin("Attribute")
    class_cls = s.builtin("Class")
    for x in m.class_boxes:
        cb = d.class_box(x.class_box)
        if cb is None or x.cls not in s:
            continue
        nb = cb.name_box
        if nb.name.text != s.name(x.cls):
            fail("ClassNameSync", f"box {x.class_box} shows {nb.name.text!r}, "
                                  f"class is {s.name(x.cls)!r}")
        if nb.tag.text != s.tag(x.cls, class_cls):
            fail("ClassTagSync", f"box {x.class_box} tag {nb.tag.text!r} != "
                                 f"{s.tag(x.cls, class_cls)!r}")
        owned = set(ids_of(s.get_slot(x.cls, "attributes")))
        extra = {a for _, a in x.att_boxes} - owned
        if extra:
            fail("AttBoxSubset", f"box {x.class_box} shows foreign attributes {sorted(extra)}")
        shown = {b.id: b for b in cb.att_boxes}
        if {b for b, _ in x.att_boxes} != set(shown):
            fail("AttBoxTotality", f"box {x.class_box}: mapped attribute boxes differ from "
                                   f"its attribute boxes")
        for box_id, attr in x.att_boxes:
            b = shown.get(box_id)
            if b is None or attr not in s:
                continue
            if b.name.text != s.name(attr):
                fail("AttNameSync", f"attribute box {box_id} shows {b.name.text!r}")
            t = s.attribute_type(attr)
            tname = s.name(t) if t is not None and t in s else ""
            if b.type.text != tname:
                fail("AttTypeSync", f"attribute box {box_id} type {b.type.text!r} != {tname!r}")
            if b.tag.text != s.tag(attr, attr_cls):
                fail("AttTagSync", f"attribute box {box_id} tag {b.tag.text!r}")

    for eid, attr in m.att_edges:
        e = d.edges.get(eid)
        if e is None or attr not in s:
            continue
        if not m.is_class(e.source, s.owner(attr)):
            fail("AttEdgeSource", f"edge {eid} does not start at the owner of {s.name(attr)!r}")
        if not m.is_class(e.target, s.attribute_type(attr)):
            fail("AttEdgeTarget", f"edge {eid} does not end at the type of {s.name(attr)!r}")
        want = [(s.tag(attr, attr_cls), s.name(attr))]
        if list(e.labels) != want:
            fail("AttEdgeLabelSync", f"edge {eid} labels {e.labels} != {want}")

    on_edges = [a for _, a in m.att_edges]
    in_boxes = [a for x in m.class_boxes for _, a in x.att_boxes]
    if set(on_edges) | set(in_boxes) != package_attributes:
        missing = package_attributes - set(on_edges) - set(in_boxes)
        fail("AttributePartition", f"attributes not shown: {sorted(missing)}; shown but "
                                   f"not in package: {sorted(set(on_edges + in_boxes) - package_attributes)}")
    both = set(on_edges) & set(in_boxes)
    if both or len(set(on_edges)) != len(on_edges) or len(set(in_boxes)) != len(in_boxes):
        fail("AttributeExclusive", f"attributes shown more than once: {sorted(both)}")

    for n in d.nodes.values():
        if isinstance(n.display, ClassBox) and sum(
                isinstance(c, NameBox) for c in n.display.children) != 1:
            fail("ClassBoxShape", f"node {n.id} must have exactly one name box")
    return out
