"""Textual concrete syntax: the generic package form and the bean DSL."""

from .lexer import Kind, Token, tokenize
from .parser import (
    BeanDslAst,
    PackageDef,
    build,
    desugar,
    parse_bean_container,
    parse_package_def,
    read_beans,
    read_package,
)
from .pretty import pretty_print
from .registry import SyntaxRegistry, default_registry, parse

__all__ = [
    "BeanDslAst", "Kind", "PackageDef", "SyntaxRegistry", "Token", "build",
    "default_registry", "desugar", "parse", "parse_bean_container", "parse_package_def",
    "pretty_print", "read_beans", "read_package", "tokenize",
]
