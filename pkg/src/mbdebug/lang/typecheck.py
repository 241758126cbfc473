"""Name resolution and static type checking.

Annotates every expression with ``ty`` and every ``Name`` with its binding
(local, param, or field). Locals require an initializer, so definite
assignment holds by construction.
"""

from __future__ import annotations

from mbdebug.lang import ast
from mbdebug.lang.errors import TypeError_, UnresolvedName

NUMERIC_OPS = {"+", "-", "*", "/", "%"}
CMP_OPS = {"<", "<=", ">", ">="}
EQ_OPS = {"==", "!="}
BOOL_OPS = {"&&", "||"}


class ClassTable:
    def __init__(self, program: ast.Program):
        self.classes: dict[str, ast.ClassDecl] = {}
        for c in program.classes:
            if c.name in self.classes:
                raise TypeError_(f"duplicate class {c.name}", c.line)
            self.classes[c.name] = c
        for c in program.classes:
            seen_fields: set[str] = set()
            for f in c.fields:
                if f.name in seen_fields:
                    raise TypeError_(f"duplicate field {f.name} in {c.name}", f.line)
                seen_fields.add(f.name)
                self._check_type_exists(f.ty, f.line)
            seen_methods: set[str] = set()
            for m in c.methods:
                if m.name in seen_methods:
                    raise TypeError_(f"duplicate method {m.name} in {c.name}", m.line)
                seen_methods.add(m.name)

    def _check_type_exists(self, t: ast.Type, line: int) -> None:
        base = t
        while isinstance(base, ast.ArrayType):
            base = base.elem
        if isinstance(base, ast.ClassType) and base.name not in self.classes:
            raise UnresolvedName(f"unknown class {base.name}", line)

    def field_type(self, class_name: str, field: str) -> ast.Type | None:
        c = self.classes.get(class_name)
        if c is None:
            return None
        for f in c.fields:
            if f.name == field:
                return f.ty
        return None

    def method_decl(self, class_name: str, method: str) -> ast.MethodDecl | None:
        c = self.classes.get(class_name)
        if c is None:
            return None
        for m in c.methods:
            if m.name == method:
                return m
        return None


class Scope:
    def __init__(self, table: ClassTable, cls: ast.ClassDecl, method: ast.MethodDecl,
                 include_locals: bool = True):
        self.table = table
        self.cls = cls
        self.method = method
        self.include_locals = include_locals
        self.locals: list[dict[str, ast.Type]] = [{}]

    def push(self) -> None:
        self.locals.append({})

    def pop(self) -> None:
        self.locals.pop()

    def declare(self, name: str, ty: ast.Type, line: int) -> None:
        for frame in self.locals:
            if name in frame:
                raise TypeError_(f"duplicate local {name}", line)
        if any(p.name == name for p in self.method.params):
            raise TypeError_(f"local {name} shadows a parameter", line)
        self.locals[-1][name] = ty

    def lookup(self, name: str) -> tuple[str, ast.Type] | None:
        if self.include_locals:
            for frame in reversed(self.locals):
                if name in frame:
                    return ("local", frame[name])
        for p in self.method.params:
            if p.name == name:
                return ("param", p.ty)
        ft = self.table.field_type(self.cls.name, name)
        if ft is not None:
            return ("field", ft)
        return None


def check_program(program: ast.Program) -> ClassTable:
    table = ClassTable(program)
    for c in program.classes:
        for m in c.methods:
            _check_method(table, c, m)
    return table


def _check_method(table: ClassTable, cls: ast.ClassDecl, m: ast.MethodDecl) -> None:
    scope = Scope(table, cls, m)
    for p in m.params:
        table._check_type_exists(p.ty, m.line)
    _check_block(scope, m.body)
    if m.return_type != ast.VOID and not _ends_with_return(m.body):
        raise TypeError_(f"method {m.name} must end with a return", m.end_line)
    contract_scope = Scope(table, cls, m, include_locals=False)
    if m.pre is not None:
        _require(check_expr(contract_scope, m.pre), ast.BOOLEAN, m.pre)
    if m.post is not None:
        _require(check_expr(contract_scope, m.post), ast.BOOLEAN, m.post)


def _ends_with_return(block: ast.Block) -> bool:
    if not block.stmts:
        return False
    last = block.stmts[-1]
    if isinstance(last, ast.Return):
        return True
    if isinstance(last, ast.If) and last.els is not None:
        return _ends_with_return(last.then) and _ends_with_return(last.els)
    return False


def _check_block(scope: Scope, block: ast.Block) -> None:
    scope.push()
    for s in block.stmts:
        _check_stmt(scope, s)
    scope.pop()


def _check_stmt(scope: Scope, s: ast.Stmt) -> None:
    if isinstance(s, ast.VarDecl):
        scope.table._check_type_exists(s.declared, s.line)
        ity = check_expr(scope, s.init)
        if not ast.assignable(s.declared, ity):
            raise TypeError_(
                f"cannot initialize {s.declared} {s.name} with {ity}", s.line)
        scope.declare(s.name, s.declared, s.line)
    elif isinstance(s, ast.Assign):
        tty = check_expr(scope, s.target, lvalue=True)
        vty = check_expr(scope, s.value)
        if not ast.assignable(tty, vty):
            raise TypeError_(f"cannot assign {vty} to {tty}", s.line)
    elif isinstance(s, ast.CallStmt):
        check_expr(scope, s.call)
    elif isinstance(s, ast.While):
        _require(check_expr(scope, s.cond), ast.BOOLEAN, s.cond)
        _check_block(scope, s.body)
    elif isinstance(s, ast.If):
        _require(check_expr(scope, s.cond), ast.BOOLEAN, s.cond)
        _check_block(scope, s.then)
        if s.els is not None:
            _check_block(scope, s.els)
    elif isinstance(s, ast.Return):
        want = scope.method.return_type
        if s.value is None:
            if want != ast.VOID:
                raise TypeError_(f"missing return value of type {want}", s.line)
        else:
            got = check_expr(scope, s.value)
            if want == ast.VOID:
                raise TypeError_("void method cannot return a value", s.line)
            if not ast.assignable(want, got):
                raise TypeError_(f"cannot return {got} from method of type {want}", s.line)
    elif isinstance(s, ast.AssertStmt):
        _require(check_expr(scope, s.cond), ast.BOOLEAN, s.cond)
    elif isinstance(s, ast.Block):
        _check_block(scope, s)
    else:
        raise TypeError_(f"unknown statement {type(s).__name__}", s.line)


def _require(got: ast.Type, want: ast.Type, node: ast.Expr) -> None:
    if got != want:
        raise TypeError_(f"expected {want}, got {got}", node.line, node.col)


def check_expr(scope: Scope, e: ast.Expr, lvalue: bool = False) -> ast.Type:
    ty = _expr_type(scope, e, lvalue)
    e.ty = ty
    return ty


def _expr_type(scope: Scope, e: ast.Expr, lvalue: bool) -> ast.Type:
    if isinstance(e, ast.IntLit):
        return ast.INT
    if isinstance(e, ast.FloatLit):
        return ast.FLOAT
    if isinstance(e, ast.BoolLit):
        return ast.BOOLEAN
    if isinstance(e, ast.NullLit):
        return ast.NULL_T
    if isinstance(e, ast.This):
        return ast.ClassType(scope.cls.name)
    if isinstance(e, ast.Name):
        hit = scope.lookup(e.name)
        if hit is None:
            raise UnresolvedName(f"unknown name {e.name}", e.line, e.col)
        e.binding = hit
        return hit[1]
    if isinstance(e, ast.FieldAccess):
        oty = check_expr(scope, e.obj)
        if isinstance(oty, ast.ArrayType):
            if e.fname != "length":
                raise UnresolvedName(f"arrays have no field {e.fname}", e.line, e.col)
            if lvalue:
                raise TypeError_("array length is not assignable", e.line, e.col)
            return ast.INT
        if not isinstance(oty, ast.ClassType):
            raise TypeError_(f"field access on non-object type {oty}", e.line, e.col)
        ft = scope.table.field_type(oty.name, e.fname)
        if ft is None:
            raise UnresolvedName(f"class {oty.name} has no field {e.fname}", e.line, e.col)
        return ft
    if isinstance(e, ast.Index):
        aty = check_expr(scope, e.arr)
        if not isinstance(aty, ast.ArrayType):
            raise TypeError_(f"indexing non-array type {aty}", e.line, e.col)
        _require(check_expr(scope, e.index), ast.INT, e.index)
        return aty.elem
    if isinstance(e, ast.Call):
        return _check_call(scope, e)
    if isinstance(e, ast.Binary):
        return _check_binary(scope, e)
    if isinstance(e, ast.Unary):
        oty = check_expr(scope, e.operand)
        if e.op == "-":
            if not ast.is_numeric(oty):
                raise TypeError_(f"unary - on {oty}", e.line, e.col)
            return oty
        if e.op == "!":
            _require(oty, ast.BOOLEAN, e.operand)
            return ast.BOOLEAN
        raise TypeError_(f"unknown unary operator {e.op}", e.line, e.col)
    if isinstance(e, ast.NewObject):
        if e.class_name not in scope.table.classes:
            raise UnresolvedName(f"unknown class {e.class_name}", e.line, e.col)
        return ast.ClassType(e.class_name)
    if isinstance(e, ast.NewArray):
        scope.table._check_type_exists(e.elem, e.line)
        for d in e.dims:
            _require(check_expr(scope, d), ast.INT, d)
        ty: ast.Type = e.elem
        for _ in e.dims:
            ty = ast.ArrayType(ty)
        return ty
    raise TypeError_(f"unknown expression {type(e).__name__}", e.line, e.col)


def _check_call(scope: Scope, e: ast.Call) -> ast.Type:
    # pow builtin: bare pow(a, b) or Math.pow(a, b)
    is_math = isinstance(e.receiver, ast.Name) and e.receiver.name == "Math" \
        and scope.lookup("Math") is None
    if e.method == "pow" and (e.receiver is None or is_math):
        if len(e.args) != 2:
            raise TypeError_("pow takes two arguments", e.line, e.col)
        t0 = check_expr(scope, e.args[0])
        t1 = check_expr(scope, e.args[1])
        if not (ast.is_numeric(t0) and t1 == ast.INT):
            raise TypeError_("pow expects numeric base and int exponent", e.line, e.col)
        e.receiver = None
        return t0
    if e.receiver is None:
        recv_cls = scope.cls.name
    else:
        rty = check_expr(scope, e.receiver)
        if not isinstance(rty, ast.ClassType):
            raise TypeError_(f"method call on non-object type {rty}", e.line, e.col)
        recv_cls = rty.name
    decl = scope.table.method_decl(recv_cls, e.method)
    if decl is None:
        raise UnresolvedName(f"class {recv_cls} has no method {e.method}", e.line, e.col)
    if len(e.args) != len(decl.params):
        raise TypeError_(
            f"{recv_cls}.{e.method} expects {len(decl.params)} arguments, got {len(e.args)}",
            e.line, e.col)
    for arg, p in zip(e.args, decl.params):
        aty = check_expr(scope, arg)
        if not ast.assignable(p.ty, aty):
            raise TypeError_(f"argument {p.name}: cannot pass {aty} as {p.ty}",
                             arg.line, arg.col)
    return decl.return_type


def _check_binary(scope: Scope, e: ast.Binary) -> ast.Type:
    lt = check_expr(scope, e.left)
    rt = check_expr(scope, e.right)
    if e.op in NUMERIC_OPS or e.op == "pow":
        if not (ast.is_numeric(lt) and ast.is_numeric(rt)):
            raise TypeError_(f"operator {e.op} on {lt} and {rt}", e.line, e.col)
        if e.op == "%" and (lt != ast.INT or rt != ast.INT):
            raise TypeError_("% requires int operands", e.line, e.col)
        return ast.FLOAT if ast.FLOAT in (lt, rt) else ast.INT
    if e.op in CMP_OPS:
        if not (ast.is_numeric(lt) and ast.is_numeric(rt)):
            raise TypeError_(f"comparison {e.op} on {lt} and {rt}", e.line, e.col)
        return ast.BOOLEAN
    if e.op in EQ_OPS:
        ok = (ast.is_numeric(lt) and ast.is_numeric(rt)) or lt == rt \
            or (ast.is_ref(lt) and ast.is_ref(rt))
        if not ok:
            raise TypeError_(f"cannot compare {lt} with {rt}", e.line, e.col)
        return ast.BOOLEAN
    if e.op in BOOL_OPS:
        _require(lt, ast.BOOLEAN, e.left)
        _require(rt, ast.BOOLEAN, e.right)
        return ast.BOOLEAN
    raise TypeError_(f"unknown operator {e.op}", e.line, e.col)
