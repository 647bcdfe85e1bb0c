"""Tokenizers for the brace and indentation dialects.

Both lexers emit the same scalar tokens (IDENT, NUMBER, STRING, PUNCT);
the indentation lexer additionally emits NEWLINE/INDENT/DEDENT using a
Python-style offside rule: any consistent increase opens a block, dedents
must return to a column already on the stack, and tabs in leading
whitespace are rejected.  Newlines inside (), [] and {} are continuations
and produce no layout tokens.

Keywords are contextual: every word lexes as IDENT and the parser matches
text, which lets ``geo`` serve both as a keyword and a declaration name.

The ``where`` slot has no expression grammar, so after ``where :`` (brace)
or ``where =`` at the start of a statement the lexer captures raw text up
to the statement terminator and emits a single RAWEXPR token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

IDENT = "IDENT"
NUMBER = "NUMBER"
STRING = "STRING"
PUNCT = "PUNCT"
RAWEXPR = "RAWEXPR"
NEWLINE = "NEWLINE"
INDENT = "INDENT"
DEDENT = "DEDENT"
EOF = "EOF"

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER_RE = re.compile(r"[+-]?[0-9]+(\.[0-9]+)?([eE][+-]?[0-9]+)?")

_UNESCAPE = {"n": "\n", "t": "\t", "r": "\r"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


class ParseError(Exception):
    """Lexical or syntactic rejection; carries the offending span."""

    def __init__(
        self,
        message: str,
        line: int,
        col: int,
        expected: str | None = None,
        found: str | None = None,
    ) -> None:
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col
        self.expected = expected
        self.found = found


class _Scanner:
    """Shared character-level machinery; dialect classes drive layout."""

    def __init__(self, text: str, dialect: str) -> None:
        self.text = text
        self.dialect = dialect
        self.pos = 0
        self.line = 1
        self.col = 1
        self.tokens: list[Token] = []
        self.depth = 0  # bracket nesting; layout is suspended inside

    def error(self, message: str, line: int | None = None, col: int | None = None) -> ParseError:
        return ParseError(message, line or self.line, col or self.col)

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self, k: int = 0) -> str:
        i = self.pos + k
        return self.text[i] if i < len(self.text) else ""

    def advance(self) -> str:
        c = self.text[self.pos]
        self.pos += 1
        if c == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return c

    def emit(self, kind: str, text: str, line: int, col: int) -> None:
        self.tokens.append(Token(kind, text, line, col))

    def last_significant(self) -> Token | None:
        for tok in reversed(self.tokens):
            if tok.kind not in (NEWLINE, INDENT, DEDENT):
                return tok
        return None

    def scan_string(self) -> None:
        line, col = self.line, self.col
        quote = self.advance()
        chars: list[str] = []
        while True:
            if self.at_end():
                raise self.error("unterminated string", line, col)
            c = self.advance()
            if c == quote:
                break
            if c == "\n" and self.dialect == "indent":
                raise self.error("unterminated string", line, col)
            if c == "\\":
                if self.at_end():
                    raise self.error("unterminated string", line, col)
                e = self.advance()
                chars.append(_UNESCAPE.get(e, e))
            else:
                chars.append(c)
        self.emit(STRING, "".join(chars), line, col)

    def scan_number(self) -> None:
        line, col = self.line, self.col
        m = _NUMBER_RE.match(self.text, self.pos)
        assert m is not None
        lexeme = m.group(0)
        for _ in lexeme:
            self.advance()
        self.emit(NUMBER, lexeme, line, col)

    def scan_ident(self) -> Token:
        line, col = self.line, self.col
        m = _IDENT_RE.match(self.text, self.pos)
        assert m is not None
        word = m.group(0)
        for _ in word:
            self.advance()
        tok = Token(IDENT, word, line, col)
        self.tokens.append(tok)
        return tok

    def skip_line_comment(self) -> None:
        while not self.at_end() and self.peek() != "\n":
            self.advance()

    def skip_block_comment(self) -> None:
        line, col = self.line, self.col
        self.advance()
        self.advance()
        start_line = line
        while True:
            if self.at_end():
                raise self.error("unterminated block comment", line, col)
            if self.peek() == "*" and self.peek(1) == "/":
                self.advance()
                self.advance()
                return
            c = self.advance()
            if c == "\n" and self.dialect == "indent" and self.depth == 0:
                raise self.error(
                    "block comment may not span lines in indentation syntax",
                    start_line,
                    col,
                )

    def scan_raw_expr(self, terminators: str) -> None:
        """Capture unparsed text (``where`` body) up to a depth-0 terminator."""
        line, col = self.line, self.col
        chars: list[str] = []
        depth = 0
        while not self.at_end():
            c = self.peek()
            if depth == 0 and c in terminators:
                break
            if c == "/" and self.peek(1) == "/":
                break
            self.advance()
            if c in "([{":
                depth += 1
            elif c in ")]}":
                depth -= 1
            chars.append(c)
        self.emit(RAWEXPR, "".join(chars).strip(), line, col)

    def maybe_enter_where(self, sep: str, terminators: str) -> None:
        """After an at-statement-start ``where``, eat the separator and raw text."""
        while True:
            if self.peek() == " " or self.peek() == "\t":
                self.advance()
            elif self.peek() == "/" and self.peek(1) == "/":
                self.skip_line_comment()
            elif self.peek() == "/" and self.peek(1) == "*":
                self.skip_block_comment()
            else:
                break
        if self.peek() == sep:
            line, col = self.line, self.col
            self.advance()
            self.emit(PUNCT, sep, line, col)
            self.scan_raw_expr(terminators)


_BRACE_PUNCT = set("{}()[]:;,")


def lex_brace(text: str) -> list[Token]:
    s = _Scanner(text, "brace")
    while not s.at_end():
        c = s.peek()
        if c in " \t\r\n":
            s.advance()
        elif c == "/" and s.peek(1) == "/":
            s.skip_line_comment()
        elif c == "/" and s.peek(1) == "*":
            s.skip_block_comment()
        elif c in "\"'":
            s.scan_string()
        elif _NUMBER_RE.match(text, s.pos) and (c.isdigit() or s.peek(1).isdigit()):
            s.scan_number()
        elif _IDENT_RE.match(text, s.pos):
            tok = s.scan_ident()
            if tok.text == "where":
                prev = s.tokens[-2] if len(s.tokens) >= 2 else None
                at_stmt_start = prev is None or (
                    prev.kind == PUNCT and prev.text in "{};"
                )
                if at_stmt_start:
                    s.maybe_enter_where(":", ";")
        elif c in _BRACE_PUNCT:
            line, col = s.line, s.col
            s.advance()
            s.emit(PUNCT, c, line, col)
        else:
            raise s.error(f"unexpected character {c!r}")
    s.emit(EOF, "", s.line, s.col)
    return s.tokens


_INDENT_PUNCT = set("{}()[]:,=")


def lex_indent(text: str) -> list[Token]:
    s = _Scanner(text, "indent")
    stack = [0]
    line_has_tokens = False

    def close_line() -> None:
        nonlocal line_has_tokens
        if line_has_tokens and s.depth == 0:
            s.emit(NEWLINE, "", s.line, s.col)
            line_has_tokens = False

    def handle_line_start() -> None:
        nonlocal line_has_tokens
        while True:
            line, col = s.line, s.col
            width = 0
            while not s.at_end() and s.peek() in " \t":
                if s.peek() == "\t":
                    raise s.error("tab in leading whitespace", s.line, s.col)
                s.advance()
                width += 1
            if s.at_end():
                return
            c = s.peek()
            if c == "\n":
                s.advance()
                continue
            if c == "\r" and s.peek(1) == "\n":
                s.advance()
                s.advance()
                continue
            if c == "/" and s.peek(1) == "/":
                s.skip_line_comment()
                continue
            break
        if width > stack[-1]:
            stack.append(width)
            s.emit(INDENT, "", line, col)
        else:
            while width < stack[-1]:
                stack.pop()
                s.emit(DEDENT, "", line, col)
            if width != stack[-1]:
                raise s.error("inconsistent dedent", line, col)
        line_has_tokens = False

    handle_line_start()
    while not s.at_end():
        c = s.peek()
        if c == "\n" or (c == "\r" and s.peek(1) == "\n"):
            s.advance()
            if c == "\r":
                s.advance()
            if s.depth == 0:
                close_line()
                handle_line_start()
            continue
        if c in " \t\r":
            s.advance()
        elif c == "/" and s.peek(1) == "/":
            s.skip_line_comment()
        elif c == "/" and s.peek(1) == "*":
            s.skip_block_comment()
        elif c in "\"'":
            s.scan_string()
            line_has_tokens = True
        elif _NUMBER_RE.match(text, s.pos) and (c.isdigit() or s.peek(1).isdigit()):
            s.scan_number()
            line_has_tokens = True
        elif _IDENT_RE.match(text, s.pos):
            tok = s.scan_ident()
            if tok.text == "where" and not line_has_tokens and s.depth == 0:
                line_has_tokens = True
                s.maybe_enter_where("=", "\n")
            else:
                line_has_tokens = True
        elif c in _INDENT_PUNCT:
            line, col = s.line, s.col
            s.advance()
            s.emit(PUNCT, c, line, col)
            line_has_tokens = True
            if c in "([{":
                s.depth += 1
            elif c in ")]}":
                if s.depth == 0:
                    raise s.error(f"unbalanced {c!r}", line, col)
                s.depth -= 1
        else:
            raise s.error(f"unexpected character {c!r}")
    close_line()
    while len(stack) > 1:
        stack.pop()
        s.emit(DEDENT, "", s.line, s.col)
    s.emit(EOF, "", s.line, s.col)
    return s.tokens
