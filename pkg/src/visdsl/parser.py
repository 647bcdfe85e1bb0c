"""Recursive-descent parsers for both surface syntaxes.

``parse_brace`` and ``parse_indent`` produce identical ASTs for
equivalent input.  Parsing is strict and single-error: the first
violation raises :class:`ParseError` with the offending span.  Shapes the
grammar admits but the language forbids (empty programs, layers without
``mark``/``from``, duplicate view ids, malformed links) parse fine and are
rejected by the verifier; duplicate *data source* names are a parse error
because the AST's ordered map cannot represent them.
"""

from __future__ import annotations

import math
import re

from . import lexer
from .ast import (
    BindAction,
    DATA_CTORS,
    DataDecl,
    InteractionDecl,
    LayerDecl,
    LinkDecl,
    Program,
    SelectionDecl,
    ViewDecl,
)
from .lexer import ParseError, Token

# Words with structural meaning; they cannot name a data source, with the
# grammar's single documented exception of "geo".
RESERVED = {
    "vis", "data", "view", "layer", "selections", "interactions",
    "link", "select", "on", "bind", "from", "mark", "encode", "style",
    "where", "img", "tbl", "net", "func", "true", "false", "null",
}

_LAYER_KEYS = ("from", "geo", "mark", "encode", "style", "where")


def _to_number(tok: Token) -> int | float:
    text = tok.text
    if "." in text or "e" in text or "E" in text:
        value: int | float = float(text)
        if not math.isfinite(value):
            raise ParseError("number out of range", tok.line, tok.col)
    else:
        value = int(text)
    return value


class _Parser:
    def __init__(self, tokens: list[Token], dialect: str) -> None:
        self.tokens = tokens
        self.dialect = dialect
        self.pos = 0

    # -- token plumbing ----------------------------------------------------

    def peek(self, k: int = 0) -> Token:
        i = min(self.pos + k, len(self.tokens) - 1)
        return self.tokens[i]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != lexer.EOF:
            self.pos += 1
        return tok

    def fail(self, expected: str) -> ParseError:
        tok = self.peek()
        found = tok.text if tok.text else tok.kind
        return ParseError(
            f"expected {expected}, found {found!r}",
            tok.line,
            tok.col,
            expected=expected,
            found=found,
        )

    def at_punct(self, ch: str) -> bool:
        tok = self.peek()
        return tok.kind == lexer.PUNCT and tok.text == ch

    def at_word(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == lexer.IDENT and tok.text == word

    def expect_punct(self, ch: str) -> Token:
        if not self.at_punct(ch):
            raise self.fail(f"'{ch}'")
        return self.advance()

    def expect_word(self, word: str) -> Token:
        if not self.at_word(word):
            raise self.fail(f"'{word}'")
        return self.advance()

    def expect_kind(self, kind: str, what: str) -> Token:
        if self.peek().kind != kind:
            raise self.fail(what)
        return self.advance()

    # -- layout helpers ----------------------------------------------------

    def end_stmt(self) -> None:
        if self.dialect == "brace":
            self.expect_punct(";")
        else:
            self.expect_kind(lexer.NEWLINE, "end of line")

    def open_block(self) -> bool:
        """Consume a block opener; returns False for a valid-but-empty block."""
        if self.dialect == "brace":
            self.expect_punct("{")
            return True
        self.expect_punct(":")
        self.expect_kind(lexer.NEWLINE, "end of line")
        if self.peek().kind == lexer.INDENT:
            self.advance()
            return True
        return False

    def at_block_end(self) -> bool:
        if self.dialect == "brace":
            return self.at_punct("}") or self.peek().kind == lexer.EOF
        return self.peek().kind in (lexer.DEDENT, lexer.EOF)

    def close_block(self) -> None:
        if self.dialect == "brace":
            self.expect_punct("}")
        elif self.peek().kind == lexer.DEDENT:
            self.advance()
        elif self.peek().kind != lexer.EOF:
            raise self.fail("dedent")

    def arg_sep(self) -> str | None:
        if self.at_punct(":"):
            return ":"
        if self.dialect == "indent" and self.at_punct("="):
            return "="
        return None

    # -- values --------------------------------------------------------------

    def parse_value(self) -> object:
        tok = self.peek()
        if tok.kind == lexer.STRING:
            return self.advance().text
        if tok.kind == lexer.NUMBER:
            return _to_number(self.advance())
        if tok.kind == lexer.IDENT and tok.text in ("true", "false", "null"):
            self.advance()
            return {"true": True, "false": False, "null": None}[tok.text]
        if self.at_punct("{"):
            return self.parse_obj()
        if self.at_punct("["):
            return self.parse_arr()
        raise self.fail("a value")

    def parse_obj(self) -> dict:
        self.expect_punct("{")
        obj: dict = {}
        if not self.at_punct("}"):
            while True:
                key, value = self.parse_named_arg()
                obj[key] = value
                if self.at_punct(","):
                    self.advance()
                else:
                    break
        self.expect_punct("}")
        return obj

    def parse_arr(self) -> list:
        self.expect_punct("[")
        items: list = []
        if not self.at_punct("]"):
            while True:
                items.append(self.parse_value())
                if self.at_punct(","):
                    self.advance()
                else:
                    break
        self.expect_punct("]")
        return items

    def parse_named_arg(self) -> tuple[str, object]:
        key = self.expect_kind(lexer.IDENT, "an argument name").text
        if self.arg_sep() is None:
            raise self.fail("':'" if self.dialect == "brace" else "'=' or ':'")
        self.advance()
        return key, self.parse_value()

    def parse_arg_list(self) -> dict:
        args: dict = {}
        while True:
            key, value = self.parse_named_arg()
            args[key] = value
            if self.at_punct(","):
                self.advance()
            else:
                return args

    def parse_call_args(self, require: bool) -> dict:
        self.expect_punct("(")
        args: dict = {}
        if require or not self.at_punct(")"):
            args = self.parse_arg_list()
        self.expect_punct(")")
        return args

    # -- declarations --------------------------------------------------------

    def parse_data_ctor(self) -> DataDecl:
        tok = self.expect_kind(lexer.IDENT, "a data constructor")
        if tok.text not in DATA_CTORS:
            raise ParseError(
                f"unknown data constructor '{tok.text}'", tok.line, tok.col
            )
        ctor = tok.text
        self.expect_punct("(")
        path: str | None = None
        args: dict = {}
        if ctor == "func":
            if not self.at_punct(")"):
                args = self.parse_arg_list()
        else:
            path = self.expect_kind(lexer.STRING, "a path string").text
            if self.at_punct(","):
                self.advance()
                args = self.parse_arg_list()
        self.expect_punct(")")
        return DataDecl(ctor=ctor, path=path, args=args)

    def parse_data_block(self, data: dict) -> None:
        self.expect_word("data")
        if not self.open_block():
            return
        while not self.at_block_end():
            tok = self.expect_kind(lexer.IDENT, "a data source name")
            if tok.text in RESERVED and tok.text != "geo":
                raise ParseError(
                    f"'{tok.text}' cannot name a data source", tok.line, tok.col
                )
            self.expect_punct(":" if self.dialect == "brace" else "=")
            decl = self.parse_data_ctor()
            self.end_stmt()
            if tok.text in data:
                raise ParseError(
                    f"duplicate data source '{tok.text}'", tok.line, tok.col
                )
            data[tok.text] = decl
        self.close_block()

    def parse_source_ref(self) -> str:
        tok = self.peek()
        if tok.kind == lexer.IDENT and (tok.text not in RESERVED or tok.text == "geo"):
            return self.advance().text
        raise self.fail("a data source name")

    def parse_layer(self) -> LayerDecl:
        self.expect_word("layer")
        fields: dict = {}
        if self.open_block():
            while not self.at_block_end():
                self.parse_layer_stmt(fields)
            self.close_block()
        return LayerDecl(
            source=fields.get("from"),
            mark=fields.get("mark"),
            geo=fields.get("geo"),
            encode=fields.get("encode", {}),
            style=fields.get("style", {}),
            where=fields.get("where"),
        )

    def parse_layer_stmt(self, fields: dict) -> None:
        tok = self.peek()
        if tok.kind != lexer.IDENT or tok.text not in _LAYER_KEYS:
            raise self.fail("a layer property (from, geo, mark, encode, style, where)")
        key = self.advance().text
        sep = ":" if self.dialect == "brace" else "="
        if key == "where":
            self.expect_punct(sep)
            fields[key] = self.expect_kind(lexer.RAWEXPR, "an expression").text
            self.end_stmt()
            return
        if key in ("encode", "style"):
            if self.dialect == "indent" and self.at_punct(":"):
                self.advance()
                if self.at_punct("{"):
                    fields[key] = self.parse_obj()
                    self.end_stmt()
                else:
                    self.expect_kind(lexer.NEWLINE, "end of line")
                    obj: dict = {}
                    if self.peek().kind == lexer.INDENT:
                        self.advance()
                        while not self.at_block_end():
                            k, v = self.parse_named_arg()
                            obj[k] = v
                            self.expect_kind(lexer.NEWLINE, "end of line")
                        self.close_block()
                    fields[key] = obj
                return
            self.expect_punct(sep)
            fields[key] = self.parse_obj()
            self.end_stmt()
            return
        self.expect_punct(sep)
        if key in ("from", "geo"):
            fields[key] = self.parse_source_ref()
        else:  # mark
            fields[key] = self.expect_kind(lexer.IDENT, "a mark name").text
        self.end_stmt()

    def parse_link(self) -> LinkDecl:
        self.expect_word("link")
        args = self.parse_call_args(require=True)
        self.end_stmt()
        return LinkDecl(args=args)

    def parse_selections_block(self, selections: list) -> None:
        self.expect_word("selections")
        if not self.open_block():
            return
        while not self.at_block_end():
            self.expect_word("select")
            args = self.parse_call_args(require=True)
            self.end_stmt()
            selections.append(SelectionDecl(args=args))
        self.close_block()

    def parse_interactions(self) -> tuple[InteractionDecl, ...]:
        self.expect_word("interactions")
        decls: list[InteractionDecl] = []
        if not self.open_block():
            return ()
        while not self.at_block_end():
            self.expect_word("on")
            self.expect_punct("(")
            event = self.expect_kind(lexer.STRING, "an event name").text
            self.expect_punct(")")
            actions: list[BindAction] = []
            if self.open_block():
                while not self.at_block_end():
                    self.expect_word("bind")
                    self.expect_punct("(")
                    sel = self.expect_kind(lexer.STRING, "a selection name").text
                    args: dict = {}
                    if self.at_punct(","):
                        self.advance()
                        args = self.parse_arg_list()
                    self.expect_punct(")")
                    self.end_stmt()
                    actions.append(BindAction(selection=sel, args=args))
                self.close_block()
            decls.append(InteractionDecl(event=event, actions=tuple(actions)))
        self.close_block()
        return tuple(decls)

    def parse_view(self) -> ViewDecl:
        self.expect_word("view")
        view_id = self.expect_kind(lexer.STRING, "a view name").text
        layers: list[LayerDecl] = []
        links: list[LinkDecl] = []
        interactions: list[InteractionDecl] = []
        if self.open_block():
            while not self.at_block_end():
                if self.at_word("layer"):
                    layers.append(self.parse_layer())
                elif self.at_word("link"):
                    links.append(self.parse_link())
                elif self.at_word("interactions"):
                    interactions.extend(self.parse_interactions())
                else:
                    raise self.fail("'layer', 'link' or 'interactions'")
            self.close_block()
        return ViewDecl(
            id=view_id,
            layers=tuple(layers),
            links=tuple(links),
            interactions=tuple(interactions),
        )

    def parse_program(self) -> Program:
        self.expect_word("vis")
        data: dict = {}
        views: list[ViewDecl] = []
        selections: list[SelectionDecl] = []
        if self.open_block():
            while not self.at_block_end():
                if self.at_word("data"):
                    self.parse_data_block(data)
                elif self.at_word("view"):
                    views.append(self.parse_view())
                elif self.at_word("selections"):
                    self.parse_selections_block(selections)
                else:
                    raise self.fail("'data', 'view' or 'selections'")
            self.close_block()
        while self.peek().kind in (lexer.NEWLINE, lexer.DEDENT):
            self.advance()
        if self.peek().kind != lexer.EOF:
            raise self.fail("end of input")
        return Program(data=data, views=tuple(views), selections=tuple(selections))


def parse_brace(text: str) -> Program:
    """Parse brace-dialect source text into a :class:`Program`."""
    return _Parser(lexer.lex_brace(text), "brace").parse_program()


def parse_indent(text: str) -> Program:
    """Parse indentation-dialect source text into a :class:`Program`."""
    return _Parser(lexer.lex_indent(text), "indent").parse_program()


_COMMENT_OR_WS = re.compile(r"(?:\s+|//[^\n]*|/\*.*?\*/)+", re.S)


def detect_syntax(text: str) -> str:
    """Return "brace" or "indent" by inspecting the token after ``vis``."""
    pos = 0
    m = _COMMENT_OR_WS.match(text, pos)
    if m:
        pos = m.end()
    if not text.startswith("vis", pos) or re.match(
        r"[A-Za-z0-9_]", text[pos + 3 : pos + 4] or ""
    ):
        line = text.count("\n", 0, pos) + 1
        raise ParseError("expected 'vis' at start of program", line, 1)
    pos += 3
    m = _COMMENT_OR_WS.match(text, pos)
    if m:
        pos = m.end()
    return "brace" if text.startswith("{", pos) else "indent"
