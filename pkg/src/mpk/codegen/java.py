"""Java persistence-entity emitters for the Beans language."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from ..errors import EmptyName, MpkError, UnmappableType
from ..kernel.store import Store
from ..kernel.values import Ref, ids_of
from .template import OutputSink, compile_template, render

ENTITY = compile_template(
    '@Entity\n'
    '@Table(name="<persistAs>")\n'
    'public class <name> {\n'
    '<@for a in attributes when (isKindOf a BeanAttribute) margin 4>'
    '\nprivate <a.typeName()> <a.name>;'
    '<@end>'
    '<@for a in attributes when (isKindOf a BeanAttribute) margin 4>'
    '\n\n<a.code()>'
    '<@end>'
    '\n}\n'
)

ATTRIBUTE = compile_template(
    '<@if isId>@Id\n<@end>'
    '@Column(name="<persistAs>")'
    '<@if canGet><getCode()><@end>'
    '<@if canSet><setCode()><@end>'
)

GETTER = compile_template(
    '\npublic <typeName()> get<Name>() {\n'
    '    return <name>;\n'
    '}'
)

SETTER = compile_template(
    '\npublic void set<Name>(<typeName()> <name>) {\n'
    '    this.<name> = <name>;\n'
    '}'
)

_JAVA_TYPES = {"Integer": "int", "String": "String", "Boolean": "boolean"}


def type_name(store: Store, attr: int) -> str:
    t = store.attribute_type(attr)
    if t is None:
        raise UnmappableType(f"attribute {store.name(attr)!r} has no type")
    for builtin, java in _JAVA_TYPES.items():
        if t == store.builtin(builtin):
            return java
    if store.is_kind_of(t, store.builtin("EntityBean")):
        return store.name(t)
    raise UnmappableType(f"no Java type for {store.name(t) or t} "
                         f"(attribute {store.name(attr)!r})")


def upper_initial(name: str) -> str:
    if not name:
        raise EmptyName("cannot capitalise an empty name")
    return name[0].upper() + name[1:]


def can_get(store: Store, attr: int) -> bool:
    mods = store.get_slot(attr, "modifiers")
    return "?" in mods or not ({"?", "!"} & mods)


def can_set(store: Store, attr: int) -> bool:
    mods = store.get_slot(attr, "modifiers")
    return "!" in mods or not ({"?", "!"} & mods)


def _ops(sink: OutputSink):
    def typename(store, target):
        return type_name(store, target.id)

    def code(store, target):
        code_bean_attribute(store, target.id, sink)

    return {"typeName": typename, "code": code}


def code_bean_attribute(store: Store, attr: int, sink: OutputSink):
    if not store.is_kind_of(attr, store.builtin("BeanAttribute")):
        raise MpkError(f"element {attr} is not a bean attribute")
    name = store.name(attr)
    env = {
        "name": name,
        "Name": upper_initial(name),
        "canGet": can_get(store, attr),
        "canSet": can_set(store, attr),
    }
    ops = _ops(sink)

    def get_code(st, target):
        render(st, GETTER, env, target, sink, ops)

    def set_code(st, target):
        render(st, SETTER, env, target, sink, ops)

    ops["getCode"] = get_code
    ops["setCode"] = set_code
    render(store, ATTRIBUTE, env, Ref(attr), sink, ops)


def code_entity_bean(store: Store, eid: int, sink: OutputSink):
    if not store.is_kind_of(eid, store.builtin("EntityBean")):
        raise MpkError(f"element {eid} is not an entity bean")
    render(store, ENTITY, {}, Ref(eid), sink, _ops(sink))


def entity_source(store: Store, eid: int) -> str:
    sink = OutputSink()
    code_entity_bean(store, eid, sink)
    return sink.text()


def entity_beans(store: Store, pid: int) -> list[int]:
    eb = store.builtin("EntityBean")
    return [c for c in ids_of(store.get_slot(pid, "elements")) if store.is_kind_of(c, eb)]


def generate(store: Store, packages: Iterable[int], out_dir: Path) -> list[dict]:
    """Write one ``<Name>.java`` per entity bean of the packages plus ``manifest.json``.

    Attribute types are checked and every file rendered before anything is
    written, so a failure leaves ``out_dir`` untouched.
    """
    beans = [eid for pid in packages for eid in entity_beans(store, pid)]
    ba = store.builtin("BeanAttribute")
    for eid in beans:
        for a in ids_of(store.get_slot(eid, "attributes")):
            if store.is_kind_of(a, ba):
                type_name(store, a)
    sources = [(eid, entity_source(store, eid)) for eid in beans]
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = []
    for eid, text in sources:
        fname = f"{store.name(eid)}.java"
        (out_dir / fname).write_text(text, encoding="utf-8")
        manifest.append({"class": store.name(eid), "file": fname,
                         "table": store.get_slot(eid, "persistAs")})
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return manifest


def normalize(text: str) -> str:
    """Strip each line's indentation and trailing blanks; collapse runs of blank lines."""
    out: list[str] = []
    for line in text.strip().splitlines():
        line = line.strip()
        if not line and out and not out[-1]:
            continue
        out.append(line)
    return "\n".join(out)
