"""The element store: every class, package, attribute and instance is an Element."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional

from ..errors import (
    CyclicInheritance,
    MpkError,
    NotAClass,
    NotAPackage,
    ReentrantMutation,
    TypeMismatch,
    UnknownDaemon,
    UnknownElement,
    UnknownSlot,
)
from .values import Ref, Value, ids_of, is_collection, same, show

# Named builtins live at fixed ids inside the reserved block 1..32.
BUILTIN_IDS = {
    "Element": 1,
    "Class": 2,
    "Package": 3,
    "Attribute": 4,
    "Constraint": 5,
    "Enum": 6,
    "String": 7,
    "Integer": 8,
    "Boolean": 9,
    "XCore": 10,
    "Beans": 11,
    "BeanContainer": 12,
    "Persistent": 13,
    "EntityBean": 14,
    "BeanAttribute": 15,
}
RESERVED_IDS = 32

# Attribute modifier marking a collection-valued slot.
MANY = "*"


class ChangeKind(enum.Enum):
    ELEMENT_ADDED = "ElementAdded"
    ELEMENT_REMOVED = "ElementRemoved"
    SLOT_CHANGED = "SlotChanged"


@dataclass(frozen=True)
class ChangeEvent:
    kind: ChangeKind
    subject: int
    slot: Optional[str] = None
    old: Value = None
    new: Value = None


@dataclass
class Element:
    id: int
    of: int
    slots: dict = field(default_factory=dict)


Daemon = Callable[[ChangeEvent], None]


class Store:
    """Single-writer object store. Build one with :func:`mpk.kernel.bootstrap`."""

    def __init__(self):
        self.elements: dict[int, Element] = {}
        self.next_id = RESERVED_IDS + 1
        self.builtins = dict(BUILTIN_IDS)
        self.first_user_id = self.next_id
        self._daemons: dict[int, Daemon] = {}
        self._next_daemon = 1
        self._dispatching = False
        self._parents_cache: dict[int, frozenset] = {}

    # -- raw access -------------------------------------------------------

    def __contains__(self, eid) -> bool:
        return eid in self.elements

    def element(self, eid: int) -> Element:
        try:
            return self.elements[eid]
        except KeyError:
            raise UnknownElement(eid) from None

    def of(self, eid: int) -> int:
        return self.element(eid).of

    def builtin(self, name: str) -> int:
        return self.builtins[name]

    def get_slot(self, eid: int, slot: str) -> Value:
        e = self.element(eid)
        try:
            return e.slots[slot]
        except KeyError:
            raise UnknownSlot(eid, slot) from None

    def has_slot(self, eid: int, slot: str) -> bool:
        return slot in self.element(eid).slots

    def name(self, eid: int) -> str:
        v = self.element(eid).slots.get("name")
        return v if isinstance(v, str) else ""

    def find(self, name: str, among) -> Optional[int]:
        """First element (ascending id) in ``among`` with the given name."""
        for eid in sorted(among):
            if self.name(eid) == name:
                return eid
        return None

    # -- reflection -------------------------------------------------------

    def parents(self, cid: int) -> list[int]:
        return ids_of(self.element(cid).slots.get("parents", frozenset()))

    def all_parents(self, cid: int) -> frozenset:
        """Reflexive-transitive closure of ``parents``, as ElementIds."""
        cached = self._parents_cache.get(cid)
        if cached is not None:
            return cached
        result: set[int] = set()
        on_path: set[int] = set()

        def walk(c):
            if c in on_path:
                raise CyclicInheritance(f"inheritance cycle through {self.name(c) or c}")
            if c in result:
                return
            on_path.add(c)
            for p in self.parents(c):
                walk(p)
            on_path.discard(c)
            result.add(c)

        walk(cid)
        frozen = frozenset(result)
        self._parents_cache[cid] = frozen
        return frozen

    def is_kind_of(self, eid: int, cid: int) -> bool:
        """Every element is a kind of Element, whatever its class declares."""
        self.element(cid)
        return cid == self.builtins["Element"] or cid in self.all_parents(self.of(eid))

    def is_class(self, eid: int) -> bool:
        return self.is_kind_of(eid, self.builtins["Class"])

    def is_package(self, eid: int) -> bool:
        return self.is_kind_of(eid, self.builtins["Package"])

    def is_subclass(self, cid: int, ancestor: int) -> bool:
        return ancestor in self.all_parents(cid)

    def _require_package(self, pid):
        if not self.is_package(pid):
            raise NotAPackage(f"element {pid} is not a package")

    def modelling_elements(self, pid: int) -> list[int]:
        """Members of the package that are classes, ascending id."""
        self._require_package(pid)
        return [e for e in ids_of(self.get_slot(pid, "elements")) if self.is_class(e)]

    def palette_elements(self, pid: int) -> list[int]:
        """Members that are kinds of Package, Class or Attribute (the palette reading)."""
        self._require_package(pid)
        kinds = [self.builtins[k] for k in ("Package", "Class", "Attribute")]
        return [
            e for e in ids_of(self.get_slot(pid, "elements"))
            if any(self.is_kind_of(e, k) for k in kinds)
        ]

    def classes(self, pid: int) -> list[int]:
        return self.modelling_elements(pid)

    def tag(self, eid: int, expected: int) -> str:
        self.element(expected)
        of = self.of(eid)
        return "" if of == expected else self.name(of)

    def is_meta_package(self, pid: int) -> bool:
        self._require_package(pid)
        return self.builtins["XCore"] in self.all_parents(pid)

    def meta_package(self, pid: int) -> Optional[int]:
        v = self.get_slot(pid, "metaPackage")
        return v.id if isinstance(v, Ref) else None

    def schema(self, cid: int) -> dict[str, int]:
        """Slot name -> Attribute id over the class and all its ancestors."""
        out: dict[str, int] = {}
        for c in sorted(self.all_parents(cid)):
            for a in ids_of(self.element(c).slots.get("attributes", frozenset())):
                out.setdefault(self.name(a), a)
        return out

    def owner(self, attr: int) -> Optional[int]:
        """The class whose ``attributes`` slot contains ``attr``."""
        r = Ref(attr)
        for e in self.elements.values():
            atts = e.slots.get("attributes")
            if isinstance(atts, frozenset) and r in atts and self.is_class(e.id):
                return e.id
        return None

    def attribute_type(self, attr: int) -> Optional[int]:
        t = self.element(attr).slots.get("type")
        return t.id if isinstance(t, Ref) else None

    def is_many(self, attr: int) -> bool:
        return MANY in self.element(attr).slots.get("modifiers", frozenset())

    def default_for(self, attr: int) -> Value:
        if self.is_many(attr):
            return frozenset()
        t = self.attribute_type(attr)
        return {
            self.builtins["String"]: "",
            self.builtins["Integer"]: 0,
            self.builtins["Boolean"]: False,
        }.get(t)

    # -- mutation ---------------------------------------------------------

    def _mutating(self):
        if self._dispatching:
            raise ReentrantMutation("daemons must not mutate the store")
        self._parents_cache.clear()

    def _allocate(self) -> int:
        eid = self.next_id
        self.next_id += 1
        return eid

    def new_instance(self, cid: int) -> int:
        self.element(cid)
        if not self.is_class(cid):
            raise NotAClass(f"element {cid} is not a class")
        schema = self.schema(cid)
        self._mutating()
        eid = self._allocate()
        self.elements[eid] = Element(eid, cid, {n: self.default_for(a) for n, a in schema.items()})
        self._fire(ChangeEvent(ChangeKind.ELEMENT_ADDED, eid))
        return eid

    def check_value(self, attr: int, v: Value):
        many = self.is_many(attr)
        t = self.attribute_type(attr)
        label = self.name(attr)
        if many:
            if not isinstance(v, frozenset):
                raise TypeMismatch(f"slot {label!r} expects a set, got {show(v)}")
            for x in v:
                self._check_scalar(label, t, x, allow_null=False)
        else:
            self._check_scalar(label, t, v, allow_null=True)

    def _check_scalar(self, label, t, v, allow_null):
        b = self.builtins
        ok: bool
        if t == b["String"]:
            ok = isinstance(v, str)
        elif t == b["Integer"]:
            ok = isinstance(v, int) and not isinstance(v, bool)
        elif t == b["Boolean"]:
            ok = isinstance(v, bool)
        elif v is None:
            ok = allow_null
        elif isinstance(v, Ref):
            ok = v.id in self.elements and (
                t is None or t == b["Element"] or self.is_kind_of(v.id, t)
            )
        else:
            ok = False
        if not ok:
            tname = self.name(t) if t is not None else "untyped"
            raise TypeMismatch(f"slot {label!r} of type {tname} cannot hold {show(v)}")

    def set_slot(self, eid: int, slot: str, v: Value):
        e = self.element(eid)
        if slot not in e.slots:
            raise UnknownSlot(eid, slot)
        attr = self.schema(e.of).get(slot)
        if attr is not None:
            self.check_value(attr, v)
        self._mutating()
        old = e.slots[slot]
        e.slots[slot] = v
        self._fire(ChangeEvent(ChangeKind.SLOT_CHANGED, eid, slot, old, v))

    def add_to(self, eid: int, slot: str, member: int):
        self.set_slot(eid, slot, self.get_slot(eid, slot) | {Ref(member)})

    def remove_from(self, eid: int, slot: str, member: int):
        self.set_slot(eid, slot, self.get_slot(eid, slot) - {Ref(member)})

    def delete(self, eid: int):
        """Remove an element, dropping it from every set and nulling dangling refs."""
        self.element(eid)
        if eid < self.first_user_id:
            raise MpkError(f"cannot delete bootstrap element {eid}")
        r = Ref(eid)
        for other in sorted(self.elements):
            if other == eid:
                continue
            for slot, v in sorted(self.elements[other].slots.items()):
                if v == r:
                    self._raw_set(other, slot, None)
                elif is_collection(v) and any(same(x, r) for x in v):
                    if isinstance(v, frozenset):
                        self._raw_set(other, slot, v - {r})
                    else:
                        self._raw_set(other, slot, tuple(x for x in v if not same(x, r)))
        self._mutating()
        del self.elements[eid]
        self._fire(ChangeEvent(ChangeKind.ELEMENT_REMOVED, eid))

    def _raw_set(self, eid, slot, v):
        self._mutating()
        e = self.elements[eid]
        old = e.slots[slot]
        e.slots[slot] = v
        self._fire(ChangeEvent(ChangeKind.SLOT_CHANGED, eid, slot, old, v))

    # -- daemons ----------------------------------------------------------

    def add_daemon(self, hook: Daemon) -> int:
        did = self._next_daemon
        self._next_daemon += 1
        self._daemons[did] = hook
        return did

    def remove_daemon(self, did: int):
        if did not in self._daemons:
            raise UnknownDaemon(f"no daemon {did}")
        del self._daemons[did]

    def _fire(self, ev: ChangeEvent):
        self._dispatching = True
        try:
            for hook in list(self._daemons.values()):
                hook(ev)
        finally:
            self._dispatching = False
