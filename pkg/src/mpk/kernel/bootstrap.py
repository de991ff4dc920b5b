"""Construction of the self-describing core and the Beans meta-package."""

from __future__ import annotations

from .store import MANY, RESERVED_IDS, Element, Store
from .values import Ref, refs

# (class, attribute, type, many)
_CORE_ATTRIBUTES = [
    ("Class", "name", "String", False),
    ("Class", "parents", "Class", True),
    ("Class", "attributes", "Attribute", True),
    ("Class", "constraints", "Constraint", True),
    ("Class", "isabstract", "Boolean", False),
    ("Package", "elements", "Element", True),
    ("Package", "metaPackage", "Package", False),
    ("Attribute", "name", "String", False),
    ("Attribute", "type", "Class", False),
    ("Attribute", "modifiers", "String", True),
    ("Constraint", "name", "String", False),
    ("Constraint", "body", "String", False),
    ("Constraint", "failMsg", "String", False),
    ("Enum", "elements", "Element", True),
    ("Persistent", "persistAs", "String", False),
    ("BeanAttribute", "isId", "Boolean", False),
]

_PARENTS = {
    "Element": [],
    "Class": ["Element"],
    "Package": ["Class"],
    "Attribute": ["Element"],
    "Constraint": ["Element"],
    "Enum": ["Class"],
    "String": ["Element"],
    "Integer": ["Element"],
    "Boolean": ["Element"],
    "BeanContainer": ["Package"],
    "Persistent": ["Element"],
    "EntityBean": ["Class", "Persistent"],
    "BeanAttribute": ["Attribute", "Persistent"],
}

_XCORE_CLASSES = ["Element", "Class", "Package", "Attribute", "Constraint",
                  "Enum", "String", "Integer", "Boolean"]
_BEANS_CLASSES = ["BeanContainer", "Persistent", "EntityBean", "BeanAttribute"]

# Constraint bodies are prefix expressions; see mpk.constraints.expr.
CORE_CONSTRAINTS = [
    ("Enum", "EnumMembers",
     "(forAll (e) (nav self elements) (= (nav e of) self))",
     "Every member of an enumeration must be an instance of it."),
    ("Element", "EnumInstances",
     "(implies (= (nav (nav self of) of) Enum) (includes (nav (nav self of) elements) self))",
     "An instance of an enumeration must be one of its members."),
    ("Persistent", "HasName",
     '(<> persistAs "")',
     "Must specify a persistent name."),
    ("EntityBean", "OneId",
     "(not (exists (a1 a2) attributes (and (<> a1 a2) (and (nav a1 isId) (nav a2 isId)))))",
     "Cannot have multiple ids."),
]


def bootstrap() -> Store:
    """Build a store holding XCore and Beans with their well-formedness rules."""
    s = Store()
    b = s.builtins
    empty = frozenset()

    def class_slots(name):
        return {
            "name": name,
            "parents": refs(b[p] for p in _PARENTS.get(name, [])),
            "attributes": empty,
            "constraints": empty,
            "isabstract": name in ("Element", "Persistent"),
        }

    for name in _XCORE_CLASSES + _BEANS_CLASSES:
        s.elements[b[name]] = Element(b[name], b["Class"], class_slots(name))
    for name, parents, members in (
        ("XCore", [], _XCORE_CLASSES),
        ("Beans", ["XCore"], _BEANS_CLASSES),
    ):
        slots = class_slots(name)
        slots["parents"] = refs(b[p] for p in parents)
        slots["elements"] = refs(b[m] for m in members)
        slots["metaPackage"] = Ref(b["XCore"])
        s.elements[b[name]] = Element(b[name], b["Package"], slots)

    s.next_id = RESERVED_IDS + 1
    for cls, att, typ, many in _CORE_ATTRIBUTES:
        aid = s._allocate()
        s.elements[aid] = Element(aid, b["Attribute"], {
            "name": att,
            "type": Ref(b[typ]),
            "modifiers": frozenset({MANY}) if many else empty,
        })
        owner = s.elements[b[cls]]
        owner.slots["attributes"] = owner.slots["attributes"] | {Ref(aid)}
    for cls, cname, body, msg in CORE_CONSTRAINTS:
        cid = s._allocate()
        s.elements[cid] = Element(cid, b["Constraint"], {
            "name": cname, "body": body, "failMsg": msg,
        })
        owner = s.elements[b[cls]]
        owner.slots["constraints"] = owner.slots["constraints"] | {Ref(cid)}
    s.first_user_id = s.next_id
    s._parents_cache.clear()
    return s
