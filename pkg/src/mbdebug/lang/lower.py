"""Lowering from the typed AST to labeled three-address IR.

Compound expressions are decomposed into temporaries whose labels share the
parent statement's source line, so a diagnosis component (one source
statement) covers all of its pieces. Contract pre/post conditions become
always-assertions at the method entry/exit labels.
"""

from __future__ import annotations

from mbdebug.lang import ast, ir
from mbdebug.lang.typecheck import ClassTable, check_program


class _MethodLowerer:
    def __init__(self, table: ClassTable, cls: ast.ClassDecl, m: ast.MethodDecl):
        self.table = table
        self.cls = cls
        self.m = m
        self.stmts: dict[ir.Label, ir.IRStmt] = {}
        self.succ: dict[ir.Label, list[ir.Label]] = {}
        self.line_counters: dict[int, int] = {}
        self.temp_n = 0
        self.local_types: dict[str, ast.Type] = {}
        self.pending: list[ir.Label] = []  # labels whose successor is the next stmt

    def alloc(self, line: int) -> ir.Label:
        idx = self.line_counters.get(line, 0)
        self.line_counters[line] = idx + 1
        return ir.Label(line, idx)

    def temp(self, ty: ast.Type) -> str:
        self.temp_n += 1
        name = f"$t{self.temp_n}"
        self.local_types[name] = ty
        return name

    def emit(self, stmt: ir.IRStmt) -> ir.Label:
        lbl = stmt.label
        self.stmts[lbl] = stmt
        self.succ[lbl] = []
        for p in self.pending:
            self.succ[p].append(lbl)
        self.pending = [lbl]
        return lbl

    # -- expressions -------------------------------------------------------

    def lower_expr(self, e: ast.Expr, line: int) -> ir.Operand:
        if isinstance(e, ast.IntLit):
            return ir.Const(e.value, ast.INT)
        if isinstance(e, ast.FloatLit):
            return ir.Const(e.value, ast.FLOAT)
        if isinstance(e, ast.BoolLit):
            return ir.Const(e.value, ast.BOOLEAN)
        if isinstance(e, ast.NullLit):
            return ir.Const(None, ast.NULL_T)
        if isinstance(e, ast.This):
            return ir.Var("this")
        if isinstance(e, ast.Name):
            kind, ty = e.binding
            if kind in ("local", "param"):
                return ir.Var(e.name)
            dst = self.temp(ty)
            self.emit(ir.FieldRead(dst=dst, obj=ir.Var("this"), fname=e.name,
                                   label=self.alloc(line), line=line))
            return ir.Var(dst)
        if isinstance(e, ast.FieldAccess):
            obj = self.lower_expr(e.obj, line)
            dst = self.temp(e.ty)
            self.emit(ir.FieldRead(dst=dst, obj=obj, fname=e.fname,
                                   label=self.alloc(line), line=line))
            return ir.Var(dst)
        if isinstance(e, ast.Index):
            arr = self.lower_expr(e.arr, line)
            idx = self.lower_expr(e.index, line)
            dst = self.temp(e.ty)
            self.emit(ir.ArrayRead(dst=dst, arr=arr, idx=idx,
                                   label=self.alloc(line), line=line))
            return ir.Var(dst)
        if isinstance(e, ast.Call):
            return self.lower_call(e, line, want_result=True)
        if isinstance(e, ast.Binary):
            a = self.lower_expr(e.left, line)
            b = self.lower_expr(e.right, line)
            op = _OP_MAP[e.op]
            integral = e.left.ty == ast.INT and e.right.ty == ast.INT
            dst = self.temp(e.ty)
            self.emit(ir.BinOp(dst=dst, op=op, a=a, b=b, integral=integral,
                               label=self.alloc(line), line=line))
            return ir.Var(dst)
        if isinstance(e, ast.Unary):
            a = self.lower_expr(e.operand, line)
            op = "neg" if e.op == "-" else "not"
            dst = self.temp(e.ty)
            self.emit(ir.UnOp(dst=dst, op=op, a=a, integral=e.operand.ty == ast.INT,
                              label=self.alloc(line), line=line))
            return ir.Var(dst)
        if isinstance(e, ast.NewObject):
            dst = self.temp(e.ty)
            self.emit(ir.New(dst=dst, class_name=e.class_name,
                             label=self.alloc(line), line=line))
            return ir.Var(dst)
        if isinstance(e, ast.NewArray):
            dims = [self.lower_expr(d, line) for d in e.dims]
            dst = self.temp(e.ty)
            self.emit(ir.NewArray(dst=dst, elem=e.elem, lengths=dims,
                                  label=self.alloc(line), line=line))
            return ir.Var(dst)
        raise AssertionError(f"unhandled expression {type(e).__name__}")

    def lower_call(self, e: ast.Call, line: int, want_result: bool) -> ir.Operand:
        if e.method == "pow" and e.receiver is None and len(e.args) == 2 \
                and self.table.method_decl(self.cls.name, "pow") is None:
            a = self.lower_expr(e.args[0], line)
            b = self.lower_expr(e.args[1], line)
            dst = self.temp(e.ty)
            integral = e.args[0].ty == ast.INT
            self.emit(ir.BinOp(dst=dst, op="pow", a=a, b=b, integral=integral,
                               label=self.alloc(line), line=line))
            return ir.Var(dst)
        if e.receiver is None:
            recv: ir.Operand = ir.Var("this")
            recv_cls = self.cls.name
        else:
            recv = self.lower_expr(e.receiver, line)
            recv_cls = e.receiver.ty.name  # type: ignore[union-attr]
        args = [self.lower_expr(a, line) for a in e.args]
        dst = self.temp(e.ty) if want_result and e.ty != ast.VOID else None
        self.emit(ir.CallIR(dst=dst, recv=recv, recv_class=recv_cls, method=e.method,
                            args=args, label=self.alloc(line), line=line))
        return ir.Var(dst) if dst else ir.Const(None, ast.NULL_T)

    # -- statements ----------------------------------------------------------

    def lower_block(self, block: ast.Block) -> None:
        for s in block.stmts:
            self.lower_stmt(s)

    def lower_stmt(self, s: ast.Stmt) -> None:
        if isinstance(s, ast.VarDecl):
            self.local_types[s.name] = s.declared
            src = self.lower_expr(s.init, s.line)
            self.emit(ir.Assign(dst=s.name, src=src, label=self.alloc(s.line), line=s.line))
        elif isinstance(s, ast.Assign):
            self.lower_assign(s)
        elif isinstance(s, ast.CallStmt):
            self.lower_call(s.call, s.line, want_result=False)
        elif isinstance(s, ast.While):
            self.lower_while(s)
        elif isinstance(s, ast.If):
            self.lower_if(s)
        elif isinstance(s, ast.Return):
            src = None if s.value is None else self.lower_expr(s.value, s.line)
            self.emit(ir.Return(src=src, label=self.alloc(s.line), line=s.line))
            self.pending = []  # wired to the exit sequence later
        elif isinstance(s, ast.AssertStmt):
            self.emit(ir.AssertIR(flavor=s.flavor, cond=s.cond, origin="source",
                                  label=self.alloc(s.line), line=s.line))
        elif isinstance(s, ast.Block):
            self.lower_block(s)
        else:
            raise AssertionError(f"unhandled statement {type(s).__name__}")

    def lower_assign(self, s: ast.Assign) -> None:
        t = s.target
        if isinstance(t, ast.Name) and t.binding[0] in ("local", "param"):
            src = self.lower_expr(s.value, s.line)
            self.emit(ir.Assign(dst=t.name, src=src, label=self.alloc(s.line), line=s.line))
        elif isinstance(t, ast.Name):  # implicit this-field
            src = self.lower_expr(s.value, s.line)
            self.emit(ir.FieldWrite(obj=ir.Var("this"), fname=t.name, src=src,
                                    label=self.alloc(s.line), line=s.line))
        elif isinstance(t, ast.FieldAccess):
            obj = self.lower_expr(t.obj, s.line)
            src = self.lower_expr(s.value, s.line)
            self.emit(ir.FieldWrite(obj=obj, fname=t.fname, src=src,
                                    label=self.alloc(s.line), line=s.line))
        elif isinstance(t, ast.Index):
            arr = self.lower_expr(t.arr, s.line)
            idx = self.lower_expr(t.index, s.line)
            src = self.lower_expr(s.value, s.line)
            self.emit(ir.ArrayWrite(arr=arr, idx=idx, src=src,
                                    label=self.alloc(s.line), line=s.line))
        else:
            raise AssertionError("invalid assignment target")

    def lower_while(self, s: ast.While) -> None:
        # Entry of the condition region; the back edge returns here so the
        # condition temporaries are re-evaluated each iteration.
        cond_entry_pending = self.pending
        anchor = ir.Nop(note="loop", label=self.alloc(s.line), line=s.line, synthetic=True)
        self.emit(anchor)
        cond_start = anchor.label
        cond = self.lower_expr(s.cond, s.line)
        br = ir.Branch(cond=cond, then_target=None, else_target=None, loop_header=True,
                       label=self.alloc(s.line), line=s.line)
        self.emit(br)
        del cond_entry_pending
        # body
        self.pending = []
        body_anchor = ir.Nop(note="body", label=self.alloc(s.line), line=s.line,
                             synthetic=True)
        self.emit(body_anchor)
        self.lower_block(s.body)
        for p in self.pending:
            self.succ[p].append(cond_start)
        br.then_target = body_anchor.label
        # exit: successors of the branch get patched when the next stmt is emitted
        join = ir.Nop(note="loop-exit", label=self.alloc(s.line), line=s.line,
                      synthetic=True)
        self.stmts[join.label] = join
        self.succ[join.label] = []
        br.else_target = join.label
        self.succ[br.label] = [br.then_target, br.else_target]
        self.pending = [join.label]

    def lower_if(self, s: ast.If) -> None:
        cond = self.lower_expr(s.cond, s.line)
        br = ir.Branch(cond=cond, then_target=None, else_target=None,
                       label=self.alloc(s.line), line=s.line)
        self.emit(br)
        join = ir.Nop(note="join", label=self.alloc(s.line), line=s.line, synthetic=True)

        self.pending = []
        then_anchor = ir.Nop(note="then", label=self.alloc(s.line), line=s.line,
                             synthetic=True)
        self.emit(then_anchor)
        self.lower_block(s.then)
        then_exits = self.pending

        self.pending = []
        if s.els is not None:
            else_anchor = ir.Nop(note="else", label=self.alloc(s.line), line=s.line,
                                 synthetic=True)
            self.emit(else_anchor)
            self.lower_block(s.els)
            else_target = else_anchor.label
            else_exits = self.pending
        else:
            else_target = join.label
            else_exits = []

        br.then_target = then_anchor.label
        br.else_target = else_target
        self.succ[br.label] = [br.then_target, br.else_target]
        self.stmts[join.label] = join
        self.succ[join.label] = []
        for p in then_exits + else_exits:
            self.succ[p].append(join.label)
        self.pending = [join.label]

    # -- whole method ----------------------------------------------------------

    def lower(self) -> ir.MethodIR:
        m = self.m
        entry_stmt: ir.IRStmt
        if m.pre is not None:
            entry_stmt = ir.AssertIR(flavor="always", cond=m.pre, origin="contract",
                                     label=ir.Label(m.line, 0), line=m.line)
        else:
            entry_stmt = ir.Nop(note="entry", label=ir.Label(m.line, 0), line=m.line,
                                synthetic=True)
        self.line_counters[m.line] = 1
        self.stmts[entry_stmt.label] = entry_stmt
        self.succ[entry_stmt.label] = []
        self.pending = [entry_stmt.label]

        self.lower_block(m.body)
        body_exits = self.pending

        exit_seq: list[ir.IRStmt] = []
        if m.post is not None:
            exit_seq.append(ir.AssertIR(flavor="always", cond=m.post, origin="contract",
                                        label=self.alloc(m.end_line), line=m.end_line))
        exit_nop = ir.Nop(note="exit", label=self.alloc(m.end_line), line=m.end_line,
                          synthetic=True)
        exit_seq.append(exit_nop)
        prev: ir.Label | None = None
        for stmt in exit_seq:
            self.stmts[stmt.label] = stmt
            self.succ[stmt.label] = []
            if prev is not None:
                self.succ[prev].append(stmt.label)
            prev = stmt.label
        first_exit = exit_seq[0].label
        for p in body_exits:
            self.succ[p].append(first_exit)
        for lbl, stmt in self.stmts.items():
            if isinstance(stmt, ir.Return):
                self.succ[lbl] = [first_exit]

        for p in m.params:
            self.local_types[p.name] = p.ty
        self.local_types["this"] = ast.ClassType(self.cls.name)

        return ir.MethodIR(
            class_name=self.cls.name,
            name=m.name,
            params=list(m.params),
            return_type=m.return_type,
            decl_line=m.line,
            end_line=m.end_line,
            entry=entry_stmt.label,
            exit=exit_nop.label,
            stmts=self.stmts,
            succ={l: tuple(v) for l, v in self.succ.items()},
            local_types=self.local_types,
            pre=m.pre,
            post=m.post,
        )


_OP_MAP = {
    "+": "add", "-": "sub", "*": "mul", "/": "div", "%": "mod",
    "<": "lt", "<=": "le", ">": "gt", ">=": "ge", "==": "eq", "!=": "ne",
    "&&": "and", "||": "or", "pow": "pow",
}


def lower_to_ir(program: ast.Program, table: ClassTable | None = None) -> ir.IRProgram:
    """Lower a type-checked program; total on well-typed input."""
    if table is None:
        table = check_program(program)
    classes = {
        c.name: ir.ClassInfo(
            name=c.name,
            fields={f.name: f.ty for f in c.fields},
            methods=[m.name for m in c.methods],
            decl=c,
        )
        for c in program.classes
    }
    methods = {}
    source_map = {}
    for c in program.classes:
        for m in c.methods:
            mir = _MethodLowerer(table, c, m).lower()
            methods[mir.key] = mir
            for lbl in mir.stmts:
                source_map[lbl] = lbl.line
    return ir.IRProgram(classes=classes, methods=methods, source=program,
                        source_map=source_map)
