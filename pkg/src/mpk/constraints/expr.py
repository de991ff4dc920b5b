"""Expression AST for constraints, navigation and template holes.

The text form is parenthesised prefix notation::

    (forAll (e) (nav self elements) (= (nav e of) self))

Atoms are ``self``, names, integers, JSON-style strings, ``true``, ``false``
and ``null``. ``(set ...)``/``(seq ...)`` build literal collections.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Union

from ..errors import ExprSyntaxError
from ..kernel.values import Ref, Value, ordered

BINARY_OPS = ("=", "<>", "and", "or", "implies", "+")
BINDER_OPS = ("forAll", "exists", "select")
UNARY_CALLS = ("size", "of", "name", "allParents", "modellingElements",
               "classes", "attributes", "nodes")
ARG_CALLS = ("includes", "subSet", "isKindOf", "tag")
CALL_OPS = UNARY_CALLS + ARG_CALLS + BINDER_OPS + ("iterate",)


@dataclass(frozen=True)
class SelfRef:
    def __str__(self):
        return "self"


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Nav:
    target: "Expr"
    slot: str

    def __str__(self):
        return f"(nav {self.target} {self.slot})"


@dataclass(frozen=True)
class Call:
    target: "Expr"
    op: str
    binders: tuple = ()
    args: tuple = ()

    def __str__(self):
        if self.op in BINDER_OPS or self.op == "iterate":
            head = f"({self.op} ({' '.join(self.binders)}) {self.target}"
        else:
            head = f"({self.op} {self.target}"
        return head + "".join(f" {a}" for a in self.args) + ")"


@dataclass(frozen=True)
class Bin:
    op: str
    lhs: "Expr"
    rhs: "Expr"

    def __str__(self):
        return f"({self.op} {self.lhs} {self.rhs})"


@dataclass(frozen=True)
class Not:
    operand: "Expr"

    def __str__(self):
        return f"(not {self.operand})"


@dataclass(frozen=True)
class Lit:
    value: Value

    def __str__(self):
        return _lit_text(self.value)


Expr = Union[SelfRef, Var, Nav, Call, Bin, Not, Lit]


def _lit_text(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, Ref):
        return f"(ref {v.id})"
    if isinstance(v, frozenset):
        return "(set" + "".join(" " + _lit_text(x) for x in ordered(v)) + ")"
    if isinstance(v, tuple):
        return "(seq" + "".join(" " + _lit_text(x) for x in v) + ")"
    raise ExprSyntaxError(f"cannot write literal {v!r}")


_TOKEN = re.compile(r'\s*(?:(\()|(\))|("(?:[^"\\]|\\.)*")|([^\s()"]+))')
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")
_INT = re.compile(r"-?\d+$")


def _read_tree(text: str):
    pos = 0
    stack: list[list] = [[]]
    while True:
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ExprSyntaxError(f"bad character at offset {pos}: {text[pos:pos + 10]!r}")
            break
        pos = m.end()
        if m.group(1):
            stack.append([])
        elif m.group(2):
            if len(stack) == 1:
                raise ExprSyntaxError(f"unbalanced ')' at offset {pos - 1}")
            done = stack.pop()
            stack[-1].append(done)
        elif m.group(3):
            stack[-1].append(("str", json.loads(m.group(3))))
        else:
            stack[-1].append(m.group(4))
    if len(stack) != 1:
        raise ExprSyntaxError("unbalanced '('")
    if len(stack[0]) != 1:
        raise ExprSyntaxError("expected exactly one expression")
    return stack[0][0]


def parse_expr(text: str) -> Expr:
    return _build(_read_tree(text))


def _literal(tree):
    e = _build(tree)
    if not isinstance(e, Lit):
        raise ExprSyntaxError(f"collection literals may only hold literals, got {e}")
    return e.value


def _name(tree, what):
    if not isinstance(tree, str) or not _NAME.match(tree):
        raise ExprSyntaxError(f"expected {what}, got {tree!r}")
    return tree


def _build(tree) -> Expr:
    if isinstance(tree, tuple):
        return Lit(tree[1])
    if isinstance(tree, str):
        if tree == "self":
            return SelfRef()
        if tree in ("true", "false"):
            return Lit(tree == "true")
        if tree == "null":
            return Lit(None)
        if _INT.match(tree):
            return Lit(int(tree))
        return Var(_name(tree, "a name"))
    if not tree:
        raise ExprSyntaxError("empty form ()")
    head, *rest = tree
    if not isinstance(head, str):
        raise ExprSyntaxError(f"form must start with an operator, got {head!r}")

    def arity(n):
        if len(rest) != n:
            raise ExprSyntaxError(f"({head} ...) takes {n} operands, got {len(rest)}")

    if head == "set":
        return Lit(frozenset(_literal(x) for x in rest))
    if head == "seq":
        return Lit(tuple(_literal(x) for x in rest))
    if head == "ref":
        arity(1)
        if not (isinstance(rest[0], str) and _INT.match(rest[0])):
            raise ExprSyntaxError("(ref N) needs an integer id")
        return Lit(Ref(int(rest[0])))
    if head == "nav":
        arity(2)
        return Nav(_build(rest[0]), _name(rest[1], "a slot name"))
    if head == "not":
        arity(1)
        return Not(_build(rest[0]))
    if head in BINARY_OPS:
        arity(2)
        return Bin(head, _build(rest[0]), _build(rest[1]))
    if head in BINDER_OPS or head == "iterate":
        arity(3 if head in BINDER_OPS else 4)
        if not isinstance(rest[0], list):
            raise ExprSyntaxError(f"({head} ...) needs a binder list")
        binders = tuple(_name(b, "a binder") for b in rest[0])
        if not binders or (head == "iterate" and len(binders) != 2):
            raise ExprSyntaxError(f"bad binder list for {head}: {binders}")
        if head == "select" and len(binders) != 1:
            raise ExprSyntaxError(f"{head} takes one binder")
        return Call(_build(rest[1]), head, binders, tuple(_build(a) for a in rest[2:]))
    if not rest:
        raise ExprSyntaxError(f"({head}) needs a target")
    _name(head, "an operator")
    return Call(_build(rest[0]), head, (), tuple(_build(a) for a in rest[1:]))


def to_text(expr: Expr) -> str:
    return str(expr)
