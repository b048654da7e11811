"""Lexing, parsing and pretty-printing of ``.acm`` model text."""

from . import ast
from .lexer import Token, lex
from .parser import parse_expr, parse_expr_list, parse_model, parse_source
from .printer import format_expr, pretty_print

__all__ = [
    "Token", "ast", "format_expr", "lex", "parse_expr", "parse_expr_list",
    "parse_model", "parse_source", "pretty_print",
]
