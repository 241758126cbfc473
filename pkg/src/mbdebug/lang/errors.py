"""Frontend error types; every error carries a source location."""

from __future__ import annotations


class LangError(Exception):
    def __init__(self, msg: str, line: int, col: int = 0):
        super().__init__(f"{line}:{col}: {msg}")
        self.msg = msg
        self.line = line
        self.col = col


class ParseError(LangError):
    pass


class UnresolvedName(LangError):
    pass


class TypeError_(LangError):
    pass
