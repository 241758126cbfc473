"""Source rendering of a parsed program; reparsing yields the same AST."""

from __future__ import annotations

from fractions import Fraction

from mbdebug.lang import ast

_PREC = {
    "||": 1, "&&": 2, "==": 3, "!=": 3,
    "<": 4, "<=": 4, ">": 4, ">=": 4,
    "+": 5, "-": 5, "*": 6, "/": 6, "%": 6,
}


def _float_str(v: Fraction) -> str:
    num, den = v.numerator, v.denominator
    scale = 0
    while den % 2 == 0:
        den //= 2
        scale += 1
    pow5 = 0
    while den % 5 == 0:
        den //= 5
        pow5 += 1
    if den != 1:
        raise ValueError(f"float literal {v} is not decimal-representable")
    digits = max(scale, pow5, 1)
    scaled = v * 10 ** digits
    whole, frac = divmod(int(scaled), 10 ** digits)
    return f"{whole}.{str(frac).rjust(digits, '0')}"


def expr_str(e: ast.Expr, parent_prec: int = 0) -> str:
    if isinstance(e, ast.IntLit):
        return str(e.value)
    if isinstance(e, ast.FloatLit):
        return _float_str(e.value)
    if isinstance(e, ast.BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, ast.NullLit):
        return "null"
    if isinstance(e, ast.This):
        return "this"
    if isinstance(e, ast.Name):
        return e.name
    if isinstance(e, ast.FieldAccess):
        return f"{expr_str(e.obj, 9)}.{e.fname}"
    if isinstance(e, ast.Index):
        return f"{expr_str(e.arr, 9)}[{expr_str(e.index)}]"
    if isinstance(e, ast.Call):
        args = ", ".join(expr_str(a) for a in e.args)
        if e.receiver is None:
            return f"{e.method}({args})"
        return f"{expr_str(e.receiver, 9)}.{e.method}({args})"
    if isinstance(e, ast.Binary):
        p = _PREC[e.op]
        s = f"{expr_str(e.left, p)} {e.op} {expr_str(e.right, p + 1)}"
        return f"({s})" if p < parent_prec else s
    if isinstance(e, ast.Unary):
        return f"{e.op}{expr_str(e.operand, 8)}"
    if isinstance(e, ast.NewObject):
        return f"new {e.class_name}()"
    if isinstance(e, ast.NewArray):
        dims = "".join(f"[{expr_str(d)}]" for d in e.dims)
        return f"new {e.elem}{dims}"
    raise AssertionError(type(e).__name__)


def _stmt_lines(s: ast.Stmt, indent: int) -> list[str]:
    pad = "  " * indent
    if isinstance(s, ast.VarDecl):
        return [f"{pad}{s.declared} {s.name} = {expr_str(s.init)};"]
    if isinstance(s, ast.Assign):
        return [f"{pad}{expr_str(s.target)} = {expr_str(s.value)};"]
    if isinstance(s, ast.CallStmt):
        return [f"{pad}{expr_str(s.call)};"]
    if isinstance(s, ast.While):
        out = [f"{pad}while ({expr_str(s.cond)}) {{"]
        for st in s.body.stmts:
            out.extend(_stmt_lines(st, indent + 1))
        out.append(f"{pad}}}")
        return out
    if isinstance(s, ast.If):
        out = [f"{pad}if ({expr_str(s.cond)}) {{"]
        for st in s.then.stmts:
            out.extend(_stmt_lines(st, indent + 1))
        if s.els is not None:
            out.append(f"{pad}}} else {{")
            for st in s.els.stmts:
                out.extend(_stmt_lines(st, indent + 1))
        out.append(f"{pad}}}")
        return out
    if isinstance(s, ast.Return):
        if s.value is None:
            return [f"{pad}return;"]
        return [f"{pad}return {expr_str(s.value)};"]
    if isinstance(s, ast.AssertStmt):
        return [f"{pad}assert {s.flavor} {expr_str(s.cond)};"]
    if isinstance(s, ast.Block):
        out = [f"{pad}{{"]
        for st in s.stmts:
            out.extend(_stmt_lines(st, indent + 1))
        out.append(f"{pad}}}")
        return out
    raise AssertionError(type(s).__name__)


def pretty_print(program: ast.Program) -> str:
    lines: list[str] = []
    for c in program.classes:
        lines.append(f"class {c.name} {{")
        for f in c.fields:
            lines.append(f"  {f.ty} {f.name};")
        for m in c.methods:
            if m.pre is not None or m.post is not None:
                lines.append("  /**")
                if m.pre is not None:
                    lines.append(f"   * @pre: {expr_str(m.pre)}")
                if m.post is not None:
                    lines.append(f"   * @post: {expr_str(m.post)}")
                lines.append("   */")
            params = ", ".join(f"{p.ty} {p.name}" for p in m.params)
            lines.append(f"  {m.return_type} {m.name}({params}) {{")
            for st in m.body.stmts:
                lines.extend(_stmt_lines(st, 2))
            lines.append("  }")
        lines.append("}")
    return "\n".join(lines) + "\n"
