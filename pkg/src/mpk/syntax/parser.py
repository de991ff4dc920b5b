"""Readers for the ``@Package`` and ``@BeanContainer`` forms.

Both forms are parsed into the same :class:`PackageDef` tree and built by one
builder, so a bean container is exactly the package definition it expands to
plus a few slot assignments (``persistAs``, ``isId``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..errors import DuplicateEntity, ParseError, UnknownMetaclass, UnknownType
from ..kernel.store import Store
from ..kernel.values import Ref, ids_of
from .lexer import Kind, Token, tokenize

Span = tuple[int, int]


@dataclass
class NameRef:
    name: str
    span: Span


@dataclass
class AttrDef:
    name: str
    span: Span
    metaclass: Optional[NameRef] = None
    type: Optional[NameRef] = None
    slots: dict = field(default_factory=dict)


@dataclass
class ClassDef:
    name: str
    span: Span
    metaclass: Optional[NameRef] = None
    isabstract: bool = False
    extends: list[NameRef] = field(default_factory=list)
    attributes: list[AttrDef] = field(default_factory=list)
    slots: dict = field(default_factory=dict)


@dataclass
class PackageDef:
    name: str
    span: Span
    metaclass: Optional[NameRef] = None
    metapackage: Optional[NameRef] = None
    classes: list[ClassDef] = field(default_factory=list)


@dataclass
class BeanAtt:
    name: str
    span: Span
    is_id: bool
    persist_as: Optional[str]
    type: NameRef


@dataclass
class BeanEntity:
    name: str
    span: Span
    persist_as: Optional[str]
    super: Optional[NameRef]
    atts: list[BeanAtt] = field(default_factory=list)


@dataclass
class BeanDslAst:
    name: str
    span: Span
    entities: list[BeanEntity] = field(default_factory=list)


class _Cursor:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self, offset=0) -> Optional[Token]:
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else None

    def end_span(self) -> Span:
        if self.tokens:
            last = self.tokens[-1]
            width = len(last.lexeme) + (last.kind is Kind.AT_NAME)
            return (last.span[0], last.span[1] + width - 1)
        return (1, 1)

    def fail(self, expected: str):
        tok = self.peek()
        if tok is None:
            raise ParseError(f"expected {expected}, found end of input", self.end_span())
        raise ParseError(f"expected {expected}, found {tok.lexeme!r}", tok.span)

    def at(self, kind: Kind, lexeme: Optional[str] = None) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind is kind and (lexeme is None or tok.lexeme == lexeme)

    def accept(self, kind: Kind, lexeme: Optional[str] = None) -> Optional[Token]:
        if self.at(kind, lexeme):
            self.pos += 1
            return self.tokens[self.pos - 1]
        return None

    def expect(self, kind: Kind, lexeme: Optional[str] = None, what: Optional[str] = None) -> Token:
        tok = self.accept(kind, lexeme)
        if tok is None:
            self.fail(what or (repr(lexeme) if lexeme else kind.value))
        return tok

    def name(self, what="a name") -> NameRef:
        tok = self.expect(Kind.NAME, what=what)
        return NameRef(tok.lexeme, tok.span)

    def keyword(self, word) -> Optional[Token]:
        return self.accept(Kind.KEYWORD, word)

    def finish(self):
        if self.peek() is not None:
            self.fail("end of input")


# -- @Package ---------------------------------------------------------------

def read_package(text: str) -> PackageDef:
    cur = _Cursor(text)
    head = cur.expect(Kind.AT_NAME, "Package", "@Package")
    pkg = PackageDef(cur.name("a package name").name, head.span)
    while True:
        if cur.keyword("metaclass"):
            pkg.metaclass = cur.name("a metaclass name")
        elif cur.keyword("metapackage"):
            pkg.metapackage = cur.name("a metapackage name")
        else:
            break
    while cur.at(Kind.AT_NAME, "Class"):
        pkg.classes.append(_read_class(cur))
    cur.expect(Kind.KEYWORD, "end", "@Class or end")
    cur.finish()
    return pkg


def _read_class(cur: _Cursor) -> ClassDef:
    head = cur.expect(Kind.AT_NAME, "Class")
    c = ClassDef(cur.name("a class name").name, head.span)
    while True:
        if cur.keyword("metaclass"):
            c.metaclass = cur.name("a metaclass name")
        elif cur.keyword("isabstract"):
            c.isabstract = True
        elif cur.keyword("extends"):
            c.extends.append(cur.name("a class name"))
        else:
            break
    while cur.at(Kind.AT_NAME, "Attribute"):
        c.attributes.append(_read_attribute(cur))
    cur.expect(Kind.KEYWORD, "end", "@Attribute or end")
    return c


def _read_attribute(cur: _Cursor) -> AttrDef:
    head = cur.expect(Kind.AT_NAME, "Attribute")
    a = AttrDef(cur.name("an attribute name").name, head.span)
    while True:
        if cur.keyword("metaclass"):
            a.metaclass = cur.name("a metaclass name")
        elif cur.accept(Kind.SYMBOL, ":"):
            a.type = cur.name("a type name")
        else:
            break
    cur.expect(Kind.KEYWORD, "end", "end")
    return a


# -- @BeanContainer ---------------------------------------------------------

def read_beans(text: str) -> BeanDslAst:
    cur = _Cursor(text)
    head = cur.expect(Kind.AT_NAME, "BeanContainer", "@BeanContainer")
    ast = BeanDslAst(cur.name("a container name").name, head.span)
    seen: dict[str, Span] = {}
    while cur.at(Kind.KEYWORD, "entity"):
        ent = _read_entity(cur)
        if ent.name in seen:
            raise DuplicateEntity(f"entity {ent.name} already defined", ent.span)
        seen[ent.name] = ent.span
        ast.entities.append(ent)
    cur.expect(Kind.KEYWORD, "end", "entity or end")
    cur.finish()
    return ast


def _persist(cur: _Cursor) -> Optional[str]:
    if cur.accept(Kind.SYMBOL, "("):
        name = cur.name("a persistent name").name
        cur.expect(Kind.SYMBOL, ")", "')'")
        return name
    return None


def _read_entity(cur: _Cursor) -> BeanEntity:
    head = cur.expect(Kind.KEYWORD, "entity")
    name = cur.name("an entity name")
    persist = _persist(cur)
    sup = None
    if cur.accept(Kind.SYMBOL, "["):
        sup = cur.name("a super type")
        cur.expect(Kind.SYMBOL, "]", "']'")
    elif cur.keyword("extends"):
        sup = cur.name("a super type")
    ent = BeanEntity(name.name, head.span, persist, sup)
    names: set[str] = set()
    while cur.at(Kind.NAME) or cur.at(Kind.SYMBOL, "*"):
        att = _read_att(cur)
        if att.name in names:
            raise DuplicateEntity(f"attribute {att.name} already defined in {ent.name}", att.span)
        names.add(att.name)
        ent.atts.append(att)
    # an entity's own `end` may be omitted before the next entity; the final
    # token of the form always closes the container
    if cur.at(Kind.KEYWORD, "end") and cur.pos != len(cur.tokens) - 1:
        cur.pos += 1
    return ent


def _read_att(cur: _Cursor) -> BeanAtt:
    star = cur.accept(Kind.SYMBOL, "*")
    name = cur.name("an attribute name")
    persist = _persist(cur)
    cur.expect(Kind.SYMBOL, ":", "':'")
    typ = cur.name("a type name")
    return BeanAtt(name.name, star.span if star else name.span, star is not None, persist, typ)


def desugar(ast: BeanDslAst) -> PackageDef:
    """The ``@Package`` definition a bean container stands for."""
    pkg = PackageDef(ast.name, ast.span,
                     NameRef("BeanContainer", ast.span), NameRef("Beans", ast.span))
    for ent in ast.entities:
        c = ClassDef(ent.name, ent.span, NameRef("EntityBean", ent.span),
                     extends=[ent.super] if ent.super else [],
                     slots={"persistAs": ent.persist_as or ""})
        for att in ent.atts:
            slots = {"persistAs": att.persist_as or ""}
            if att.is_id:
                slots["isId"] = True
            c.attributes.append(AttrDef(att.name, att.span,
                                        NameRef("BeanAttribute", att.span), att.type, slots))
        pkg.classes.append(c)
    return pkg


# -- building ---------------------------------------------------------------

class _Resolver:
    def __init__(self, store: Store, pkg: PackageDef):
        self.store = store
        s = store
        self.xcore = s.builtin("XCore")
        if pkg.metapackage is None:
            self.metapackage = self.xcore
        else:
            mp = s.find(pkg.metapackage.name,
                        [e for e in s.elements if s.is_package(e) and s.is_meta_package(e)])
            if mp is None:
                raise ParseError(f"unknown metapackage {pkg.metapackage.name}", pkg.metapackage.span)
            self.metapackage = mp
        # language scope: classes of the metapackage and its ancestors, then XCore
        self.scope: list[int] = []
        for p in sorted(s.all_parents(self.metapackage), reverse=True):
            self.scope.extend(ids_of(s.get_slot(p, "elements")))
        self.scope.extend(ids_of(s.get_slot(self.xcore, "elements")))

    def lookup(self, name: str) -> Optional[int]:
        for eid in self.scope:
            if self.store.name(eid) == name:
                return eid
        return None

    def metaclass(self, ref: Optional[NameRef], default: str) -> int:
        base = self.store.builtin(default)
        if ref is None:
            return base
        cid = self.lookup(ref.name)
        if cid is None or not self.store.is_class(cid) or not self.store.is_subclass(cid, base):
            raise UnknownMetaclass(f"unknown metaclass {ref.name}", ref.span)
        return cid


def _check_unique(pkg: PackageDef):
    seen = set()
    for c in pkg.classes:
        if c.name in seen:
            raise DuplicateEntity(f"class {c.name} already defined", c.span)
        seen.add(c.name)
        attrs = set()
        for a in c.attributes:
            if a.name in attrs:
                raise DuplicateEntity(f"attribute {a.name} already defined in {c.name}", a.span)
            attrs.add(a.name)


def build(store: Store, pkg: PackageDef) -> int:
    """Instantiate a package definition. Every name is resolved before any mutation."""
    _check_unique(pkg)
    r = _Resolver(store, pkg)
    local = {c.name: i for i, c in enumerate(pkg.classes)}

    def resolve_type(ref: NameRef):
        if ref.name in local:
            return ("local", local[ref.name])
        cid = r.lookup(ref.name)
        if cid is None or not store.is_class(cid):
            raise UnknownType(f"unknown type {ref.name}", ref.span)
        return ("store", cid)

    pkg_meta = r.metaclass(pkg.metaclass, "Package")
    plans = []
    for c in pkg.classes:
        meta = r.metaclass(c.metaclass, "Class")
        supers = [resolve_type(x) for x in c.extends]
        atts = []
        for a in c.attributes:
            atts.append((a, r.metaclass(a.metaclass, "Attribute"),
                         resolve_type(a.type) if a.type else None))
        plans.append((c, meta, supers, atts))

    pid = store.new_instance(pkg_meta)
    store.set_slot(pid, "name", pkg.name)
    store.set_slot(pid, "metaPackage", Ref(r.metapackage))
    made: list[int] = []
    for c, meta, _, _ in plans:
        cid = store.new_instance(meta)
        store.set_slot(cid, "name", c.name)
        if c.isabstract:
            store.set_slot(cid, "isabstract", True)
        store.add_to(pid, "elements", cid)
        made.append(cid)

    def target(t):
        return made[t[1]] if t[0] == "local" else t[1]

    for cid, (c, _, supers, atts) in zip(made, plans):
        if supers:
            store.set_slot(cid, "parents", frozenset(Ref(target(t)) for t in supers))
        for a, meta, typ in atts:
            aid = store.new_instance(meta)
            store.set_slot(aid, "name", a.name)
            if typ is not None:
                store.set_slot(aid, "type", Ref(target(typ)))
            for slot, v in a.slots.items():
                store.set_slot(aid, slot, v)
            store.add_to(cid, "attributes", aid)
        for slot, v in c.slots.items():
            store.set_slot(cid, slot, v)
    return pid


def parse_package_def(store: Store, text: str) -> int:
    return build(store, read_package(text))


def parse_bean_container(store: Store, text: str) -> int:
    return build(store, desugar(read_beans(text)))
