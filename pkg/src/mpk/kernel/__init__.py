"""Meta-circular element store: XCore, the Beans meta-package, reflection."""

from .bootstrap import CORE_CONSTRAINTS, bootstrap
from .snapshot import dump, dumps, load, loads
from .store import (
    BUILTIN_IDS,
    MANY,
    RESERVED_IDS,
    ChangeEvent,
    ChangeKind,
    Element,
    Store,
)
from .values import Ref, Value, ordered, same, sort_key

__all__ = [
    "BUILTIN_IDS", "CORE_CONSTRAINTS", "MANY", "RESERVED_IDS",
    "ChangeEvent", "ChangeKind", "Element", "Ref", "Store", "Value",
    "bootstrap", "dump", "dumps", "load", "loads", "ordered", "same", "sort_key",
]
