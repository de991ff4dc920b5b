"""Exception hierarchy shared by every layer of the workbench."""

from __future__ import annotations


class MpkError(Exception):
    """Base class for all workbench errors."""


# kernel

class UnknownElement(MpkError):
    def __init__(self, eid):
        super().__init__(f"unknown element {eid}")
        self.eid = eid


class NotAClass(MpkError):
    pass


class NotAPackage(MpkError):
    pass


class UnknownSlot(MpkError):
    def __init__(self, eid, slot, expr=None):
        msg = f"element {eid} has no slot {slot!r}"
        if expr is not None:
            msg += f" (in {expr})"
        super().__init__(msg)
        self.eid = eid
        self.slot = slot
        self.expr = expr


class TypeMismatch(MpkError):
    pass


class CyclicInheritance(MpkError):
    pass


class UnknownDaemon(MpkError):
    pass


class ReentrantMutation(MpkError):
    pass


# constraint engine

class EvalError(MpkError):
    """Evaluation failure carrying the offending sub-expression."""

    def __init__(self, message, expr=None):
        if expr is not None:
            message = f"{message} (in {expr})"
        super().__init__(message)
        self.expr = expr


class UnboundVar(EvalError):
    pass


class EvalTypeError(EvalError):
    pass


class ExprSyntaxError(MpkError):
    pass


# syntax

class SyntaxProblem(MpkError):
    """Any error raised while reading concrete syntax; carries a 1-based span."""

    def __init__(self, message, span=None):
        self.span = span
        self.message = message
        if span is not None:
            message = f"{span[0]}:{span[1]}: {message}"
        super().__init__(message)


class LexError(SyntaxProblem):
    pass


class ParseError(SyntaxProblem):
    pass


class UnknownMetaclass(SyntaxProblem):
    pass


class UnknownType(SyntaxProblem):
    pass


class DuplicateEntity(SyntaxProblem):
    pass


class UnknownForm(SyntaxProblem):
    pass


# codegen

class UnmappableType(MpkError):
    pass


class EmptyName(MpkError):
    pass


class RenderError(MpkError):
    pass


# tool model

class ToolError(MpkError):
    pass


class UnknownButton(ToolError):
    pass


class UnknownNode(ToolError):
    pass


class TagError(ToolError):
    pass


class TypeNotOnDiagram(ToolError):
    pass
