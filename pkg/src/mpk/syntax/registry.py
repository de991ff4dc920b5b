from __future__ import annotations

from typing import Callable

from ..errors import ParseError, UnknownForm
from ..kernel.store import Store
from .lexer import Kind, tokenize
from .parser import parse_bean_container, parse_package_def

FormParser = Callable[[Store, str], int]


class SyntaxRegistry:
    """Maps top-level ``@Name`` forms to the parser that reads them."""

    def __init__(self):
        self.forms: dict[str, FormParser] = {}

    def register(self, name: str, parser: FormParser):
        self.forms[name] = parser

    def __contains__(self, name):
        return name in self.forms


def default_registry() -> SyntaxRegistry:
    reg = SyntaxRegistry()
    reg.register("Package", parse_package_def)
    reg.register("BeanContainer", parse_bean_container)
    return reg


def parse(store: Store, registry: SyntaxRegistry, text: str) -> int:
    tokens = tokenize(text)
    if not tokens or tokens[0].kind is not Kind.AT_NAME:
        span = tokens[0].span if tokens else (1, 1)
        raise ParseError("expected a top-level @Name form", span)
    head = tokens[0]
    if head.lexeme not in registry:
        raise UnknownForm(f"no syntax registered for @{head.lexeme}", head.span)
    return registry.forms[head.lexeme](store, text)
