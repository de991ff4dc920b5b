"""Lossless JSON snapshots of a store."""

from __future__ import annotations

import json

from .store import RESERVED_IDS, Element, Store
from .values import from_json, to_json


def dump(store: Store) -> dict:
    return {
        "nextId": store.next_id,
        "elements": [
            {
                "id": e.id,
                "of": e.of,
                "slots": {k: to_json(v) for k, v in sorted(e.slots.items())},
            }
            for e in sorted(store.elements.values(), key=lambda e: e.id)
        ],
    }


def dumps(store: Store) -> str:
    return json.dumps(dump(store), indent=1, sort_keys=True)


def load(doc: dict) -> Store:
    from .bootstrap import bootstrap

    store = Store()
    # the bootstrap boundary is fixed, so recover it from a fresh build
    store.first_user_id = bootstrap().first_user_id
    for item in doc["elements"]:
        eid = int(item["id"])
        store.elements[eid] = Element(
            eid, int(item["of"]), {k: from_json(v) for k, v in item["slots"].items()}
        )
    store.next_id = int(doc["nextId"])
    if store.next_id <= max(store.elements, default=RESERVED_IDS):
        raise ValueError("nextId must exceed every element id")
    return store


def loads(text: str) -> Store:
    return load(json.loads(text))
