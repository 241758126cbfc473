"""Labeled three-address intermediate representation with per-method CFGs.

Every IR statement carries a unique label whose display form is the source
line number; primed labels mark synthesized insertion points. Assertion
conditions stay as typed expression trees so that contract and
instrumentation checks never add diagnosable statements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from mbdebug.lang import ast


@dataclass(frozen=True, order=True)
class Label:
    line: int
    idx: int = 0
    prime: bool = False

    def __str__(self) -> str:
        return f"{self.line}'" if self.prime else str(self.line)

    def __repr__(self) -> str:
        p = "'" if self.prime else ""
        return f"L{self.line}{p}.{self.idx}"


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    value: object  # int | Fraction | bool | None
    ty: ast.Type

    def __str__(self) -> str:
        if self.value is None:
            return "null"
        if isinstance(self.value, bool):
            return "true" if self.value else "false"
        return str(self.value)


Operand = Var | Const


@dataclass
class IRStmt:
    label: Label = field(kw_only=True)
    line: int = field(kw_only=True)
    synthetic: bool = field(default=False, kw_only=True)
    instrumentation: bool = field(default=False, kw_only=True)

    @property
    def kind(self) -> str:
        return type(self).__name__


@dataclass
class Nop(IRStmt):
    note: str = ""


@dataclass
class Assign(IRStmt):
    dst: str = ""
    src: Operand = None  # type: ignore[assignment]


@dataclass
class BinOp(IRStmt):
    dst: str = ""
    op: str = ""
    a: Operand = None  # type: ignore[assignment]
    b: Operand = None  # type: ignore[assignment]
    integral: bool = True


@dataclass
class UnOp(IRStmt):
    dst: str = ""
    op: str = ""
    a: Operand = None  # type: ignore[assignment]
    integral: bool = True


@dataclass
class New(IRStmt):
    dst: str = ""
    class_name: str = ""


@dataclass
class NewArray(IRStmt):
    dst: str = ""
    elem: ast.Type = None  # type: ignore[assignment]
    lengths: list[Operand] = field(default_factory=list)


@dataclass
class FieldRead(IRStmt):
    dst: str = ""
    obj: Operand = None  # type: ignore[assignment]
    fname: str = ""


@dataclass
class FieldWrite(IRStmt):
    obj: Operand = None  # type: ignore[assignment]
    fname: str = ""
    src: Operand = None  # type: ignore[assignment]


@dataclass
class ArrayRead(IRStmt):
    dst: str = ""
    arr: Operand = None  # type: ignore[assignment]
    idx: Operand = None  # type: ignore[assignment]


@dataclass
class ArrayWrite(IRStmt):
    arr: Operand = None  # type: ignore[assignment]
    idx: Operand = None  # type: ignore[assignment]
    src: Operand = None  # type: ignore[assignment]


@dataclass
class CallIR(IRStmt):
    dst: str | None = None
    recv: Operand = None  # type: ignore[assignment]
    recv_class: str = ""
    method: str = ""
    args: list[Operand] = field(default_factory=list)


@dataclass
class Branch(IRStmt):
    cond: Operand = None  # type: ignore[assignment]
    then_target: Label = None  # type: ignore[assignment]
    else_target: Label = None  # type: ignore[assignment]
    loop_header: bool = False


@dataclass
class Return(IRStmt):
    src: Operand | None = None


@dataclass
class AssertIR(IRStmt):
    flavor: str = "always"
    cond: ast.Expr = None  # type: ignore[assignment]
    origin: str = "source"  # source | contract | spec | expectation


@dataclass
class MethodIR:
    class_name: str
    name: str
    params: list[ast.Param]
    return_type: ast.Type
    decl_line: int
    end_line: int
    entry: Label
    exit: Label
    stmts: dict[Label, IRStmt]
    succ: dict[Label, tuple[Label, ...]]
    local_types: dict[str, ast.Type]
    pre: ast.Expr | None
    post: ast.Expr | None

    @property
    def key(self) -> tuple[str, str]:
        return (self.class_name, self.name)

    def qualified(self) -> str:
        return f"{self.class_name}.{self.name}"

    def preds(self) -> dict[Label, tuple[Label, ...]]:
        out: dict[Label, list[Label]] = {l: [] for l in self.stmts}
        for src, targets in self.succ.items():
            for t in targets:
                out[t].append(src)
        return {l: tuple(sorted(v)) for l, v in out.items()}

    def order(self) -> list[Label]:
        return sorted(self.stmts)


@dataclass
class ClassInfo:
    name: str
    fields: dict[str, ast.Type]
    methods: list[str]
    decl: ast.ClassDecl


@dataclass
class IRProgram:
    classes: dict[str, ClassInfo]
    methods: dict[tuple[str, str], MethodIR]
    source: ast.Program
    source_map: dict[Label, int]

    def method_by_line(self, line: int) -> MethodIR | None:
        for m in self.methods.values():
            if m.decl_line == line:
                return m
        return None

    def method_containing(self, line: int) -> MethodIR | None:
        for m in self.methods.values():
            if m.decl_line <= line <= m.end_line:
                return m
        return None

    def field_type(self, class_name: str, fname: str) -> ast.Type | None:
        ci = self.classes.get(class_name)
        return None if ci is None else ci.fields.get(fname)


def operand_of_const(value, ty: ast.Type) -> Const:
    if ty == ast.FLOAT and isinstance(value, int):
        value = Fraction(value)
    return Const(value, ty)
