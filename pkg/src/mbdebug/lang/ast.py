"""Abstract syntax for the analyzed language.

Nodes carry source positions; the type checker annotates expressions with
``ty`` and names with ``binding`` in place. Compound assignments and
increment statements are desugared by the parser, so the AST has a single
assignment form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Type:
    pass


@dataclass(frozen=True)
class PrimType(Type):
    name: str  # int | float | boolean | void

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class ClassType(Type):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class ArrayType(Type):
    elem: Type

    def __str__(self) -> str:
        return f"{self.elem}[]"


@dataclass(frozen=True)
class NullType(Type):
    def __str__(self) -> str:
        return "null"


INT = PrimType("int")
FLOAT = PrimType("float")
BOOLEAN = PrimType("boolean")
VOID = PrimType("void")
NULL_T = NullType()


def is_numeric(t: Type) -> bool:
    return t in (INT, FLOAT)


def is_ref(t: Type) -> bool:
    return isinstance(t, (ClassType, ArrayType, NullType))


def assignable(target: Type, value: Type) -> bool:
    if target == value:
        return True
    if target == FLOAT and value == INT:
        return True
    if is_ref(target) and isinstance(value, NullType):
        return True
    return False


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------


@dataclass
class Expr:
    line: int = field(default=0, kw_only=True)
    col: int = field(default=0, kw_only=True)
    ty: Type | None = field(default=None, kw_only=True, compare=False)


@dataclass
class IntLit(Expr):
    value: int = 0


@dataclass
class FloatLit(Expr):
    value: Fraction = Fraction(0)


@dataclass
class BoolLit(Expr):
    value: bool = False


@dataclass
class NullLit(Expr):
    pass


@dataclass
class Name(Expr):
    name: str = ""
    # ('local', ty) | ('param', ty) | ('field', ty) — set during checking
    binding: tuple | None = field(default=None, compare=False)


@dataclass
class This(Expr):
    pass


@dataclass
class FieldAccess(Expr):
    obj: Expr = None  # type: ignore[assignment]
    fname: str = ""


@dataclass
class Index(Expr):
    arr: Expr = None  # type: ignore[assignment]
    index: Expr = None  # type: ignore[assignment]


@dataclass
class Call(Expr):
    receiver: Expr | None = None
    method: str = ""
    args: list[Expr] = field(default_factory=list)


@dataclass
class Binary(Expr):
    op: str = ""
    left: Expr = None  # type: ignore[assignment]
    right: Expr = None  # type: ignore[assignment]


@dataclass
class Unary(Expr):
    op: str = ""
    operand: Expr = None  # type: ignore[assignment]


@dataclass
class NewObject(Expr):
    class_name: str = ""


@dataclass
class NewArray(Expr):
    elem: Type = None  # type: ignore[assignment]
    dims: list[Expr] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Statements
# ---------------------------------------------------------------------------


@dataclass
class Stmt:
    line: int = field(default=0, kw_only=True)


@dataclass
class Block(Stmt):
    stmts: list[Stmt] = field(default_factory=list)


@dataclass
class VarDecl(Stmt):
    name: str = ""
    declared: Type = None  # type: ignore[assignment]
    init: Expr = None  # type: ignore[assignment]


@dataclass
class Assign(Stmt):
    target: Expr = None  # type: ignore[assignment]
    value: Expr = None  # type: ignore[assignment]


@dataclass
class CallStmt(Stmt):
    call: Call = None  # type: ignore[assignment]


@dataclass
class While(Stmt):
    cond: Expr = None  # type: ignore[assignment]
    body: Block = None  # type: ignore[assignment]


@dataclass
class If(Stmt):
    cond: Expr = None  # type: ignore[assignment]
    then: Block = None  # type: ignore[assignment]
    els: Block | None = None


@dataclass
class Return(Stmt):
    value: Expr | None = None


@dataclass
class AssertStmt(Stmt):
    flavor: str = "always"  # sometime | always
    cond: Expr = None  # type: ignore[assignment]


# ---------------------------------------------------------------------------
# Declarations
# ---------------------------------------------------------------------------


@dataclass
class FieldDecl:
    name: str
    ty: Type
    line: int


@dataclass
class Param:
    name: str
    ty: Type


@dataclass
class MethodDecl:
    name: str
    params: list[Param]
    return_type: Type
    body: Block
    line: int
    end_line: int
    pre: Expr | None = None
    post: Expr | None = None


@dataclass
class ClassDecl:
    name: str
    fields: list[FieldDecl]
    methods: list[MethodDecl]
    line: int


@dataclass
class Program:
    classes: list[ClassDecl]

    def cls(self, name: str) -> ClassDecl:
        for c in self.classes:
            if c.name == name:
                return c
        raise KeyError(name)

    def method(self, class_name: str, method_name: str) -> MethodDecl:
        for m in self.cls(class_name).methods:
            if m.name == method_name:
                return m
        raise KeyError(f"{class_name}.{method_name}")


def collect_statements(block: Block) -> list[Stmt]:
    """All statement nodes reachable from a block, nested blocks included."""
    out: list[Stmt] = []
    for s in block.stmts:
        out.append(s)
        if isinstance(s, While):
            out.append(s.body)
            out.extend(collect_statements(s.body))
        elif isinstance(s, If):
            out.append(s.then)
            out.extend(collect_statements(s.then))
            if s.els is not None:
                out.append(s.els)
                out.extend(collect_statements(s.els))
    return out


def strip_positions(node):
    """Structural copy with line/col zeroed, for round-trip comparisons."""
    import copy
    import dataclasses

    node = copy.deepcopy(node)

    def walk(n):
        if isinstance(n, Type):
            return
        if dataclasses.is_dataclass(n) and not isinstance(n, type):
            for f in dataclasses.fields(n):
                v = getattr(n, f.name)
                if f.name in ("line", "col", "end_line") and isinstance(v, int):
                    setattr(n, f.name, 0)
                elif f.name in ("ty", "binding"):
                    continue
                else:
                    walk(v)
        elif isinstance(n, list):
            for x in n:
                walk(x)

    walk(node)
    return node
