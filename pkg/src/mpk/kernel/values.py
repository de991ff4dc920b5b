"""Slot values.

Scalars are plain Python objects (``str``, ``int``, ``bool``, ``None`` for the
null value). References to elements are :class:`Ref`; unordered collections
are ``frozenset`` and ordered ones ``tuple``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Iterable

Value = Any


@dataclass(frozen=True, order=True)
class Ref:
    id: int

    def __repr__(self):
        return f"Ref({self.id})"


def is_collection(v: Value) -> bool:
    return isinstance(v, (frozenset, tuple))


def sort_key(v: Value):
    """Total order over values; sets iterate by this (ascending ElementId for refs)."""
    if v is None:
        return (0,)
    if isinstance(v, bool):
        return (1, v)
    if isinstance(v, int):
        return (2, v)
    if isinstance(v, str):
        return (3, v)
    if isinstance(v, Ref):
        return (4, v.id)
    if isinstance(v, frozenset):
        return (5, tuple(sorted(sort_key(x) for x in v)))
    if isinstance(v, tuple):
        return (6, tuple(sort_key(x) for x in v))
    raise TypeError(f"not a slot value: {v!r}")


def same(a: Value, b: Value) -> bool:
    """Structural equality that keeps booleans and integers apart."""
    return sort_key(a) == sort_key(b)


def ordered(v: Value) -> list:
    """Members of a collection in deterministic iteration order."""
    if isinstance(v, frozenset):
        return sorted(v, key=sort_key)
    return list(v)


def make_set(items: Iterable[Value]) -> frozenset:
    return frozenset(items)


def refs(ids: Iterable[int]) -> frozenset:
    return frozenset(Ref(i) for i in ids)


def ids_of(v: Value) -> list[int]:
    """ElementIds of the refs in a collection, ascending."""
    return sorted(x.id for x in v if isinstance(x, Ref))


def to_json(v: Value):
    if v is None:
        return None
    if isinstance(v, bool):
        return {"b": v}
    if isinstance(v, int):
        return {"i": v}
    if isinstance(v, str):
        return {"s": v}
    if isinstance(v, Ref):
        return {"r": v.id}
    if isinstance(v, frozenset):
        return {"set": [to_json(x) for x in ordered(v)]}
    if isinstance(v, tuple):
        return {"seq": [to_json(x) for x in v]}
    raise TypeError(f"not a slot value: {v!r}")


def from_json(j) -> Value:
    if j is None:
        return None
    if not isinstance(j, dict) or len(j) != 1:
        raise ValueError(f"malformed value: {json.dumps(j)}")
    (tag, payload), = j.items()
    if tag == "s" and isinstance(payload, str):
        return payload
    if tag == "b" and isinstance(payload, bool):
        return payload
    if tag == "i" and isinstance(payload, int) and not isinstance(payload, bool):
        return payload
    if tag == "r" and isinstance(payload, int):
        return Ref(payload)
    if tag == "set" and isinstance(payload, list):
        return frozenset(from_json(x) for x in payload)
    if tag == "seq" and isinstance(payload, list):
        return tuple(from_json(x) for x in payload)
    raise ValueError(f"malformed value: {json.dumps(j)}")


def show(v: Value) -> str:
    """Short human-readable rendering used in messages."""
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, Ref):
        return f"#{v.id}"
    if isinstance(v, frozenset):
        return "Set{" + ", ".join(show(x) for x in ordered(v)) + "}"
    if isinstance(v, tuple):
        return "Seq{" + ", ".join(show(x) for x in v) + "}"
    return str(v)
