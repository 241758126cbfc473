"""Test-suite files: sectioned key/value text.

Format::

    [test <name>]
    target = <method-declaration line>          # optional if entry lines exist
    entry.<line>.<var> = <literal>              # concrete entry binding
    expect.<line>.<path> = <literal or expr>    # expected value at a label
    assert.<line> = sometime|always <expr>      # intermediate assertion

Lines are the display labels of the program: a method's entry label is its
declaration line, its exit label the closing-brace line. Paths may traverse
heap state (``items[0].value``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from mbdebug.lang import ast
from mbdebug.lang.errors import LangError, ParseError
from mbdebug.lang.ir import IRProgram, MethodIR
from mbdebug.lang.parser import parse_expr_text
from mbdebug.lang.typecheck import ClassTable, Scope, check_expr


@dataclass
class Expectation:
    line: int
    path: ast.Expr  # typed lvalue-like expression
    expected: ast.Expr  # typed expression
    text: str

    @property
    def is_exit(self) -> bool:
        return getattr(self, "_is_exit", False)


@dataclass
class SuiteAssertion:
    line: int
    flavor: str
    cond: ast.Expr
    text: str


@dataclass
class TestCase:
    name: str
    method: tuple[str, str]
    entry: dict[str, object]  # param name -> concrete value
    expectations: list[Expectation] = field(default_factory=list)
    assertions: list[SuiteAssertion] = field(default_factory=list)


def _parse_literal(text: str, line_no: int):
    text = text.strip()
    if text == "true":
        return True
    if text == "false":
        return False
    if text == "null":
        return None
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return Fraction(text)
    except ValueError:
        pass
    try:
        return Fraction(str(float(text)))
    except ValueError:
        raise ParseError(f"malformed value literal {text!r}", line_no)


def parse_test_suite(text: str, program: IRProgram) -> list[TestCase]:
    """Parse and resolve a suite against a lowered program."""
    cases: list[TestCase] = []
    current: dict | None = None

    def finish() -> None:
        if current is None:
            return
        cases.append(_resolve_case(current, program))

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[test ") and line.endswith("]"):
            finish()
            current = {"name": line[6:-1].strip(), "line_no": line_no,
                       "target": None, "entries": [], "expects": [], "asserts": []}
            continue
        if current is None:
            raise ParseError("content before any [test ...] section", line_no)
        if "=" not in line:
            raise ParseError(f"expected key = value, found {line!r}", line_no)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "target":
            current["target"] = (int(value), line_no)
        elif key.startswith("entry."):
            parts = key.split(".")
            if len(parts) != 3:
                raise ParseError(f"malformed entry key {key!r}", line_no)
            current["entries"].append((int(parts[1]), parts[2],
                                       _parse_literal(value, line_no), line_no))
        elif key.startswith("expect."):
            _, label, path = key.split(".", 2)
            current["expects"].append((int(label), path, value, line_no))
        elif key.startswith("assert."):
            _, label = key.split(".", 1)
            flavor, _, cond = value.partition(" ")
            if flavor not in ("sometime", "always"):
                raise ParseError("assertion must start with sometime|always", line_no)
            current["asserts"].append((int(label), flavor, cond.strip(), line_no))
        else:
            raise ParseError(f"unknown key {key!r}", line_no)
    finish()
    return cases


def _method_scope(program: IRProgram, mir: MethodIR) -> Scope:
    table = ClassTable(program.source)
    cls = program.source.cls(mir.class_name)
    mdecl = program.source.method(mir.class_name, mir.name)
    scope = Scope(table, cls, mdecl)
    # expectation expressions may mention locals; declare them all
    for name, ty in mir.local_types.items():
        if name.startswith("$") or name == "this":
            continue
        if any(p.name == name for p in mdecl.params):
            continue
        scope.locals[0][name] = ty
    return scope


def _known_lines(mir: MethodIR) -> set[int]:
    return {lbl.line for lbl in mir.stmts}


def _resolve_case(raw: dict, program: IRProgram) -> TestCase:
    target_line = None
    if raw["target"] is not None:
        target_line = raw["target"][0]
    elif raw["entries"]:
        target_line = raw["entries"][0][0]
    if target_line is None:
        raise ParseError(f"test {raw['name']} names no target method", raw["line_no"])
    mir = program.method_by_line(target_line)
    if mir is None:
        raise LangError(f"no method is declared at label {target_line}", raw["line_no"])

    entry: dict[str, object] = {}
    for line, var, value, line_no in raw["entries"]:
        if line != target_line:
            raise LangError(f"entry label {line} does not match target {target_line}",
                            line_no)
        param = next((p for p in mir.params if p.name == var), None)
        if param is None:
            raise LangError(f"method {mir.qualified()} has no parameter {var}", line_no)
        if not _literal_matches(param.ty, value):
            raise LangError(f"value {value!r} does not fit parameter {var}: {param.ty}",
                            line_no)
        if param.ty == ast.FLOAT and isinstance(value, int):
            value = Fraction(value)
        entry[var] = value
    missing = [p.name for p in mir.params if p.name not in entry]
    if missing:
        raise LangError(f"test {raw['name']} misses entry bindings for {missing}",
                        raw["line_no"])

    scope = _method_scope(program, mir)
    known = _known_lines(mir)

    case = TestCase(name=raw["name"], method=mir.key, entry=entry)
    for line, path_text, value_text, line_no in raw["expects"]:
        if line not in known:
            raise LangError(f"unknown label {line} in expectation", line_no)
        try:
            path = parse_expr_text(path_text, line_no)
            check_expr(scope, path)
        except LangError as err:
            raise LangError(f"bad expectation path {path_text!r}: {err.msg}", line_no)
        expected = parse_expr_text(value_text, line_no)
        check_expr(scope, expected)
        exp = Expectation(line=line, path=path, expected=expected,
                          text=f"{path_text} == {value_text}")
        exp._is_exit = (line == mir.end_line)
        case.expectations.append(exp)
    for line, flavor, cond_text, line_no in raw["asserts"]:
        if line not in known:
            raise LangError(f"unknown label {line} in assertion", line_no)
        cond = parse_expr_text(cond_text, line_no)
        check_expr(scope, cond)
        case.assertions.append(SuiteAssertion(line=line, flavor=flavor, cond=cond,
                                              text=cond_text))
    return case


def _literal_matches(ty: ast.Type, value: object) -> bool:
    if ty == ast.INT:
        return isinstance(value, int) and not isinstance(value, bool)
    if ty == ast.FLOAT:
        return isinstance(value, (int, Fraction)) and not isinstance(value, bool)
    if ty == ast.BOOLEAN:
        return isinstance(value, bool)
    return value is None  # references accept only null literals
