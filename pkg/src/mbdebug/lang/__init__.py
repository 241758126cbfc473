"""Frontend for the analyzed language: parsing, typing, lowering, test suites."""

from mbdebug.lang.ast import Program
from mbdebug.lang.errors import LangError, ParseError, TypeError_, UnresolvedName
from mbdebug.lang.parser import parse_program_text
from mbdebug.lang.typecheck import check_program
from mbdebug.lang.ir import IRProgram, Label
from mbdebug.lang.lower import lower_to_ir
from mbdebug.lang.testsuite import TestCase, parse_test_suite
from mbdebug.lang.pretty import pretty_print


def parse_program(text: str) -> Program:
    """Parse and type-check source text into a resolved program."""
    prog = parse_program_text(text)
    check_program(prog)
    return prog


__all__ = [
    "Program",
    "IRProgram",
    "Label",
    "TestCase",
    "LangError",
    "ParseError",
    "TypeError_",
    "UnresolvedName",
    "parse_program",
    "lower_to_ir",
    "parse_test_suite",
    "pretty_print",
]
