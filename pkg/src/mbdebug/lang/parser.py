"""Lexer and recursive-descent parser.

Doc comments (``/** ... */``) carry ``@pre``/``@post`` contract clauses and
attach to methods: a comment containing ``@pre`` binds to the next method,
a post-only comment binds to the preceding method when one exists. Compound
assignments (``k *= d``) and increments (``i++``) are desugared here.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from mbdebug.lang import ast
from mbdebug.lang.errors import ParseError

KEYWORDS = {
    "class", "int", "float", "boolean", "void", "new", "while", "if", "else",
    "return", "assert", "sometime", "always", "true", "false", "null", "this",
}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<linecomment>//[^\n]*)
  | (?P<doccomment>/\*\*.*?\*/)
  | (?P<blockcomment>/\*.*?\*/)
  | (?P<float>\d+\.\d*[fF]?|\.\d+[fF]?|\d+[fF])
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>\|\||&&|==|!=|<=|>=|\+\+|--|\*=|/=|\+=|-=|%=|[-+*/%<>=!.,;(){}\[\]])
    """,
    re.VERBOSE | re.DOTALL,
)


@dataclass
class Token:
    kind: str  # int | float | ident | kw | op | eof
    text: str
    line: int
    col: int


@dataclass
class DocComment:
    text: str
    line: int
    end_line: int


def tokenize(text: str) -> tuple[list[Token], list[DocComment]]:
    tokens: list[Token] = []
    docs: list[DocComment] = []
    pos = 0
    line = 1
    line_start = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            col = pos - line_start + 1
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        tok = m.group()
        col = pos - line_start + 1
        if kind == "doccomment":
            docs.append(DocComment(tok, line, line + tok.count("\n")))
        elif kind == "int":
            tokens.append(Token("int", tok, line, col))
        elif kind == "float":
            tokens.append(Token("float", tok, line, col))
        elif kind == "ident":
            tokens.append(Token("kw" if tok in KEYWORDS else "ident", tok, line, col))
        elif kind == "op":
            tokens.append(Token("op", tok, line, col))
        nl = tok.count("\n")
        if nl:
            line += nl
            line_start = pos + tok.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens, docs


_CONTRACT_RE = re.compile(r"@(pre|post)\s*:", re.IGNORECASE)


def _parse_contracts(doc: DocComment) -> dict[str, str]:
    """Extract @pre/@post expression texts from a doc comment."""
    body = doc.text
    body = body[3:-2]  # strip /** and */
    body = "\n".join(re.sub(r"^\s*\*\s?", "", ln) for ln in body.split("\n"))
    out: dict[str, str] = {}
    matches = list(_CONTRACT_RE.finditer(body))
    for i, m in enumerate(matches):
        end = matches[i + 1].start() if i + 1 < len(matches) else len(body)
        out[m.group(1).lower()] = body[m.end():end].strip()
    return out


class Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    # -- token helpers ----------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        return self.toks[min(self.i + ahead, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.peek().text == text and self.peek().kind in ("op", "kw")

    def accept(self, text: str) -> Token | None:
        if self.at(text):
            return self.next()
        return None

    def expect(self, text: str) -> Token:
        t = self.peek()
        if not self.at(text):
            raise ParseError(f"expected {text!r}, found {t.text!r}", t.line, t.col)
        return self.next()

    def expect_ident(self) -> Token:
        t = self.peek()
        if t.kind != "ident":
            raise ParseError(f"expected identifier, found {t.text!r}", t.line, t.col)
        return self.next()

    # -- types -------------------------------------------------------------

    def looks_like_type(self) -> bool:
        t = self.peek()
        return (t.kind == "kw" and t.text in ("int", "float", "boolean", "void")) or t.kind == "ident"

    def parse_type(self) -> ast.Type:
        t = self.next()
        if t.text == "int":
            ty: ast.Type = ast.INT
        elif t.text == "float":
            ty = ast.FLOAT
        elif t.text == "boolean":
            ty = ast.BOOLEAN
        elif t.text == "void":
            ty = ast.VOID
        elif t.kind == "ident":
            ty = ast.ClassType(t.text)
        else:
            raise ParseError(f"expected type, found {t.text!r}", t.line, t.col)
        while self.at("[") and self.peek(1).text == "]":
            self.next()
            self.next()
            ty = ast.ArrayType(ty)
        return ty

    # -- expressions --------------------------------------------------------

    def parse_expr(self) -> ast.Expr:
        return self._parse_or()

    def _bin(self, sub, ops):
        left = sub()
        while self.peek().kind == "op" and self.peek().text in ops:
            t = self.next()
            right = sub()
            left = ast.Binary(op=t.text, left=left, right=right, line=t.line, col=t.col)
        return left

    def _parse_or(self):
        return self._bin(self._parse_and, {"||"})

    def _parse_and(self):
        return self._bin(self._parse_equality, {"&&"})

    def _parse_equality(self):
        return self._bin(self._parse_relational, {"==", "!="})

    def _parse_relational(self):
        return self._bin(self._parse_additive, {"<", "<=", ">", ">="})

    def _parse_additive(self):
        return self._bin(self._parse_multiplicative, {"+", "-"})

    def _parse_multiplicative(self):
        return self._bin(self._parse_unary, {"*", "/", "%"})

    def _parse_unary(self):
        t = self.peek()
        if t.text in ("-", "!"):
            self.next()
            operand = self._parse_unary()
            return ast.Unary(op=t.text, operand=operand, line=t.line, col=t.col)
        return self._parse_postfix()

    def _parse_postfix(self):
        e = self._parse_primary()
        while True:
            if self.at("."):
                self.next()
                name = self.expect_ident()
                if self.at("("):
                    args = self._parse_args()
                    e = ast.Call(receiver=e, method=name.text, args=args,
                                 line=name.line, col=name.col)
                else:
                    e = ast.FieldAccess(obj=e, fname=name.text, line=name.line, col=name.col)
            elif self.at("["):
                t = self.next()
                idx = self.parse_expr()
                self.expect("]")
                e = ast.Index(arr=e, index=idx, line=t.line, col=t.col)
            else:
                return e

    def _parse_args(self) -> list[ast.Expr]:
        self.expect("(")
        args = []
        if not self.at(")"):
            args.append(self.parse_expr())
            while self.accept(","):
                args.append(self.parse_expr())
        self.expect(")")
        return args

    def _parse_primary(self):
        t = self.peek()
        if t.kind == "int":
            self.next()
            return ast.IntLit(value=int(t.text), line=t.line, col=t.col)
        if t.kind == "float":
            self.next()
            txt = t.text.rstrip("fF")
            if "." not in txt:
                txt += "."
            whole, frac = txt.split(".")
            num = int(whole or "0") * 10 ** len(frac) + int(frac or "0")
            return ast.FloatLit(value=Fraction(num, 10 ** len(frac)), line=t.line, col=t.col)
        if t.text == "true" or t.text == "false":
            self.next()
            return ast.BoolLit(value=t.text == "true", line=t.line, col=t.col)
        if t.text == "null":
            self.next()
            return ast.NullLit(line=t.line, col=t.col)
        if t.text == "this":
            self.next()
            return ast.This(line=t.line, col=t.col)
        if t.text == "new":
            self.next()
            head = self.next()
            if head.kind == "ident" and self.at("("):
                self.expect("(")
                self.expect(")")
                return ast.NewObject(class_name=head.text, line=t.line, col=t.col)
            if head.text == "int":
                elem: ast.Type = ast.INT
            elif head.text == "float":
                elem = ast.FLOAT
            elif head.text == "boolean":
                elem = ast.BOOLEAN
            elif head.kind == "ident":
                elem = ast.ClassType(head.text)
            else:
                raise ParseError(f"expected element type after 'new', found {head.text!r}",
                                 head.line, head.col)
            dims = []
            self.expect("[")
            dims.append(self.parse_expr())
            self.expect("]")
            while self.at("[") and self.peek(1).text != "]":
                self.next()
                dims.append(self.parse_expr())
                self.expect("]")
            return ast.NewArray(elem=elem, dims=dims, line=t.line, col=t.col)
        if t.text == "(":
            self.next()
            e = self.parse_expr()
            self.expect(")")
            return e
        if t.kind == "ident":
            self.next()
            if self.at("("):
                args = self._parse_args()
                return ast.Call(receiver=None, method=t.text, args=args, line=t.line, col=t.col)
            return ast.Name(name=t.text, line=t.line, col=t.col)
        if t.kind == "kw" and t.text in ("int", "float", "boolean"):
            # e.g. `new int[3]` reaches parse_type elsewhere; a bare type here
            # is an error
            raise ParseError(f"unexpected type keyword {t.text!r} in expression", t.line, t.col)
        raise ParseError(f"unexpected token {t.text!r}", t.line, t.col)

    # -- statements ----------------------------------------------------------

    def parse_block(self) -> ast.Block:
        open_tok = self.expect("{")
        stmts = []
        while not self.at("}"):
            stmts.append(self.parse_stmt())
        self.expect("}")
        return ast.Block(stmts=stmts, line=open_tok.line)

    def _is_decl_start(self) -> bool:
        t = self.peek()
        if t.kind == "kw" and t.text in ("int", "float", "boolean"):
            return True
        if t.kind == "ident":
            nxt = self.peek(1)
            if nxt.kind == "ident":
                return True
            if nxt.text == "[" and self.peek(2).text == "]":
                return True
        return False

    def parse_stmt(self) -> ast.Stmt:
        t = self.peek()
        if t.text == "while":
            self.next()
            self.expect("(")
            cond = self.parse_expr()
            self.expect(")")
            body = self.parse_block()
            return ast.While(cond=cond, body=body, line=t.line)
        if t.text == "if":
            self.next()
            self.expect("(")
            cond = self.parse_expr()
            self.expect(")")
            then = self.parse_block()
            els = None
            if self.accept("else"):
                if self.at("if"):
                    inner = self.parse_stmt()
                    els = ast.Block(stmts=[inner], line=inner.line)
                else:
                    els = self.parse_block()
            return ast.If(cond=cond, then=then, els=els, line=t.line)
        if t.text == "return":
            self.next()
            value = None if self.at(";") else self.parse_expr()
            self.expect(";")
            return ast.Return(value=value, line=t.line)
        if t.text == "assert":
            self.next()
            flavor_tok = self.next()
            if flavor_tok.text not in ("sometime", "always"):
                raise ParseError("expected 'sometime' or 'always' after assert",
                                 flavor_tok.line, flavor_tok.col)
            cond = self.parse_expr()
            self.expect(";")
            return ast.AssertStmt(flavor=flavor_tok.text, cond=cond, line=t.line)
        if self._is_decl_start():
            declared = self.parse_type()
            name = self.expect_ident()
            eq = self.expect("=")
            init = self.parse_expr()
            self.expect(";")
            del eq
            return ast.VarDecl(name=name.text, declared=declared, init=init, line=t.line)
        # assignment / call / increment
        target = self._parse_postfix()
        if self.at("++") or self.at("--"):
            op = self.next()
            self.expect(";")
            delta = ast.IntLit(value=1, line=op.line)
            bop = "+" if op.text == "++" else "-"
            value = ast.Binary(op=bop, left=_copy_expr(target), right=delta, line=op.line)
            return ast.Assign(target=target, value=value, line=t.line)
        if self.peek().text in ("=", "+=", "-=", "*=", "/=", "%="):
            op = self.next()
            value = self.parse_expr()
            self.expect(";")
            if op.text != "=":
                value = ast.Binary(op=op.text[0], left=_copy_expr(target), right=value,
                                   line=op.line)
            return ast.Assign(target=target, value=value, line=t.line)
        self.expect(";")
        if not isinstance(target, ast.Call):
            raise ParseError("expression statement must be a method call", t.line, t.col)
        return ast.CallStmt(call=target, line=t.line)

    # -- declarations ----------------------------------------------------------

    def parse_program(self, docs: list[DocComment]) -> ast.Program:
        classes = []
        while not self.peek().kind == "eof":
            classes.append(self.parse_class(docs))
        return ast.Program(classes=classes)

    def parse_class(self, docs: list[DocComment]) -> ast.ClassDecl:
        kw = self.expect("class")
        name = self.expect_ident()
        self.expect("{")
        fields: list[ast.FieldDecl] = []
        methods: list[ast.MethodDecl] = []
        while not self.at("}"):
            t = self.peek()
            ty = self.parse_type()
            ident = self.expect_ident()
            if self.at("("):
                m = self._parse_method(ty, ident)
                methods.append(m)
            else:
                fields.append(ast.FieldDecl(name=ident.text, ty=ty, line=t.line))
                while self.accept(","):
                    extra = self.expect_ident()
                    fields.append(ast.FieldDecl(name=extra.text, ty=ty, line=extra.line))
                self.expect(";")
        close = self.expect("}")
        cls = ast.ClassDecl(name=name.text, fields=fields, methods=methods, line=kw.line)
        inside = [d for d in docs if kw.line <= d.line and d.end_line <= close.line]
        self._attach_contracts(cls, inside)
        return cls

    def _parse_method(self, rty: ast.Type, ident: Token) -> ast.MethodDecl:
        self.expect("(")
        params = []
        if not self.at(")"):
            pty = self.parse_type()
            pname = self.expect_ident()
            params.append(ast.Param(pname.text, pty))
            while self.accept(","):
                pty = self.parse_type()
                pname = self.expect_ident()
                params.append(ast.Param(pname.text, pty))
        self.expect(")")
        if not self.at("{"):
            t = self.peek()
            raise ParseError(f"expected method body, found {t.text!r}", t.line, t.col)
        body = self.parse_block()
        end_line = self.toks[self.i - 1].line  # the closing brace
        return ast.MethodDecl(name=ident.text, params=params, return_type=rty,
                              body=body, line=ident.line, end_line=end_line)

    def _attach_contracts(self, cls: ast.ClassDecl, docs: list[DocComment]) -> None:
        methods = sorted(cls.methods, key=lambda m: m.line)
        for doc in docs:
            clauses = _parse_contracts(doc)
            if not clauses:
                continue
            after = [m for m in methods if m.line > doc.end_line]
            before = [m for m in methods if m.end_line < doc.line]
            target = None
            if "pre" in clauses and after:
                target = after[0]
            elif set(clauses) == {"post"} and before:
                target = before[-1]
            elif after:
                target = after[0]
            if target is None:
                continue
            if "pre" in clauses and target.pre is None:
                target.pre = parse_expr_text(clauses["pre"], doc.line)
            if "post" in clauses and target.post is None:
                target.post = parse_expr_text(clauses["post"], doc.line)


def _copy_expr(e: ast.Expr) -> ast.Expr:
    import copy

    return copy.deepcopy(e)


def parse_expr_text(text: str, line: int = 1) -> ast.Expr:
    """Parse a standalone expression (contracts, test expectations)."""
    tokens, _ = tokenize(text)
    for t in tokens:
        t.line = line
    p = Parser(tokens)
    e = p.parse_expr()
    if p.peek().kind != "eof":
        t = p.peek()
        raise ParseError(f"trailing input {t.text!r} after expression", line, t.col)
    return e


def parse_program_text(text: str) -> ast.Program:
    """Parse source text into an untyped program."""
    tokens, docs = tokenize(text)
    parser = Parser(tokens)
    return parser.parse_program(docs)
