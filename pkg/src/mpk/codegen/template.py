"""Margin-aware code templates.

Literal text is copied to the output; every newline it contains is followed by
the current margin. Holes hold expressions whose string or integer value is
written in place. Text form::

    class <n> {
    <@for a in attributes when (isKindOf a BeanAttribute) margin 4>
    private <a.typeName()> <a.name>;<@end>
    }

A hole is either a prefix expression ``<(...)>`` or a dotted path such as
``<a.name>``; a trailing ``()`` on a path segment calls that operation.
``<<`` writes a literal ``<``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

from ..constraints.evaluate import ExtraOp, eval_expr
from ..constraints.expr import Call, Expr, Nav, SelfRef, Var, parse_expr
from ..errors import MpkError, RenderError
from ..kernel.store import Store
from ..kernel.values import Value, is_collection, ordered, show


@dataclass(frozen=True)
class Literal:
    text: str


@dataclass(frozen=True)
class Hole:
    expr: Expr
    pos: Optional[tuple[int, int]] = None


@dataclass(frozen=True)
class ForPart:
    binder: str
    collection: Expr
    body: "Template"
    guard: Optional[Expr] = None
    pos: Optional[tuple[int, int]] = None


@dataclass(frozen=True)
class IfPart:
    cond: Expr
    then: "Template"
    pos: Optional[tuple[int, int]] = None


Part = Union[Literal, Hole, ForPart, IfPart]


@dataclass(frozen=True)
class Template:
    parts: tuple = ()
    margin: int = 0

    def __post_init__(self):
        if self.margin < 0:
            raise ValueError("margin must be non-negative")


@dataclass
class OutputSink:
    """Collects output; text following a newline is indented by the margin that
    was current when the newline was written. Blank lines stay empty."""

    chunks: list[str] = field(default_factory=list)
    margins: list[int] = field(default_factory=lambda: [0])
    pending: Optional[int] = None

    @property
    def margin(self) -> int:
        return self.margins[-1]

    def push(self, m: int):
        self.margins.append(self.margin + m)

    def pop(self):
        self.margins.pop()

    def write(self, text: str):
        lines = text.split("\n")
        for i, line in enumerate(lines):
            if i:
                self.chunks.append("\n")
                self.pending = self.margin
            if line:
                if self.pending:
                    self.chunks.append(" " * self.pending)
                self.pending = None
                self.chunks.append(line)

    def text(self) -> str:
        return "".join(self.chunks)


def _where(pos) -> str:
    return f" at {pos[0]}:{pos[1]}" if pos else ""


def render(store: Store, t: Template, env: Optional[Mapping[str, Value]] = None,
           self_val: Value = None, sink: Optional[OutputSink] = None,
           extra_ops: Optional[Mapping[str, ExtraOp]] = None) -> OutputSink:
    sink = sink if sink is not None else OutputSink()
    _render(store, t, dict(env or {}), self_val, sink, extra_ops or {})
    return sink


def _eval(store, expr, env, self_val, extra_ops, pos):
    try:
        return eval_expr(store, expr, env, self_val, extra_ops)
    except MpkError as exc:
        raise RenderError(f"template expression {expr} failed{_where(pos)}: {exc}") from exc


def _render(store, t: Template, env, self_val, sink: OutputSink, extra_ops):
    sink.push(t.margin)
    try:
        for part in t.parts:
            if isinstance(part, Literal):
                sink.write(part.text)
            elif isinstance(part, Hole):
                v = _eval(store, part.expr, env, self_val, extra_ops, part.pos)
                if v is None:
                    continue
                if isinstance(v, bool) or not isinstance(v, (str, int)):
                    raise RenderError(f"hole {part.expr}{_where(part.pos)} produced {show(v)}")
                sink.write(str(v))
            elif isinstance(part, ForPart):
                coll = _eval(store, part.collection, env, self_val, extra_ops, part.pos)
                if not is_collection(coll):
                    raise RenderError(f"@for over non-collection {show(coll)}{_where(part.pos)}")
                for member in ordered(coll):
                    inner = dict(env)
                    inner[part.binder] = member
                    if part.guard is not None:
                        ok = _eval(store, part.guard, inner, self_val, extra_ops, part.pos)
                        if ok is not True:
                            if ok is not False:
                                raise RenderError(f"non-boolean guard{_where(part.pos)}")
                            continue
                    _render(store, part.body, inner, self_val, sink, extra_ops)
            elif isinstance(part, IfPart):
                ok = _eval(store, part.cond, env, self_val, extra_ops, part.pos)
                if not isinstance(ok, bool):
                    raise RenderError(f"non-boolean condition{_where(part.pos)}")
                if ok:
                    _render(store, part.then, env, self_val, sink, extra_ops)
    finally:
        sink.pop()


# -- text form --------------------------------------------------------------

_PATH_SEGMENT = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(\(\))?$")


def hole_expr(text: str) -> Expr:
    text = text.strip()
    if text.startswith("("):
        return parse_expr(text)
    segments = text.split(".")
    expr: Optional[Expr] = None
    for i, seg in enumerate(segments):
        m = _PATH_SEGMENT.match(seg)
        if not m:
            raise RenderError(f"bad template expression {text!r}")
        name, call = m.group(1), m.group(2)
        if i == 0:
            if call:
                expr = Call(SelfRef(), name)
            else:
                expr = SelfRef() if name == "self" else Var(name)
        elif call:
            expr = Call(expr, name)
        else:
            expr = Nav(expr, name)
    return expr


def _line_col(text, offset):
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def _scan_tag(text, start):
    """Index of the ``>`` closing a tag opened at ``start`` (skipping nested parens/strings)."""
    depth = 0
    i = start + 1
    in_str = False
    while i < len(text):
        ch = text[i]
        if in_str:
            if ch == "\\":
                i += 1
            elif ch == '"':
                in_str = False
        elif ch == '"':
            in_str = True
        elif ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == ">" and depth == 0:
            return i
        i += 1
    raise RenderError(f"unterminated '<' at {_line_col(text, start)}")


def _split_top(text, word):
    """Split at the first top-level occurrence of `` word ``."""
    depth = 0
    in_str = False
    needle = f" {word} "
    for i, ch in enumerate(text):
        if in_str:
            if ch == '"':
                in_str = False
            continue
        if ch == '"':
            in_str = True
        elif ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and text.startswith(needle, i):
            return text[:i], text[i + len(needle):]
    return text, None


def compile_template(text: str, margin: int = 0) -> Template:
    parts, i, closer = _compile(text, 0, margin)
    if closer is not None:
        raise RenderError(f"unmatched <@end> at {_line_col(text, closer)}")
    return Template(tuple(parts), margin)


def _compile(text, i, margin):
    parts: list[Part] = []
    buf: list[str] = []

    def flush():
        if buf:
            parts.append(Literal("".join(buf)))
            buf.clear()

    while i < len(text):
        ch = text[i]
        if ch != "<":
            buf.append(ch)
            i += 1
            continue
        if text.startswith("<<", i):
            buf.append("<")
            i += 2
            continue
        end = _scan_tag(text, i)
        body = text[i + 1:end]
        pos = _line_col(text, i)
        flush()
        if body.strip() == "@end":
            return parts, end + 1, i
        if body.startswith("@for ") or body.startswith("@if "):
            kind, rest = body[1:].split(" ", 1)
            rest, m = _split_top(rest.strip() + " ", "margin")
            inner_margin = int(m) if m is not None else 0
            inner, j, closer = _compile(text, end + 1, inner_margin)
            if closer is None:
                raise RenderError(f"<@{kind}> at {pos} is never closed")
            tmpl = Template(tuple(inner), inner_margin)
            if kind == "for":
                binder, _, rest = rest.strip().partition(" in ")
                coll, guard = _split_top(rest.strip() + " ", "when")
                parts.append(ForPart(binder.strip(), hole_expr(coll), tmpl,
                                     hole_expr(guard) if guard else None, pos))
            else:
                parts.append(IfPart(hole_expr(rest), tmpl, pos))
            i = j
            continue
        parts.append(Hole(hole_expr(body), pos))
        i = end + 1
    flush()
    return parts, i, None
