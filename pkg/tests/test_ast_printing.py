from __future__ import annotations

import random

from visdsl.ast import (
    DataDecl,
    LayerDecl,
    Program,
    ViewDecl,
    ast_equal,
)
from visdsl.generator import generate_program
from visdsl.parser import parse_brace, parse_indent
from visdsl.printer import print_brace, print_indent

from .conftest import TEASER_BRACE, TEASER_INDENT


def minimal_program() -> Program:
    return Program(
        data={"s": DataDecl("img", "p.vti", {})},
        views=(
            ViewDecl(id="v", layers=(LayerDecl(source="s", mark="volume"),)),
        ),
    )


def test_brace_print_contains_canonical_statements(teaser_program):
    text = print_brace(teaser_program)
    assert "mark: volume;" in text
    assert 'encode: { field: "vorticity" };' in text


def test_brace_print_of_linked_program_contains_link_call():
    from .conftest import HEAD_LINKED

    program = parse_indent(HEAD_LINKED)
    text = print_brace(program)
    assert 'link(slice: "xy_link", axes: ["XY"], views: ["volume_slice", "slice_xy"]);' in text


def test_minimal_program_brace_line_count():
    # One statement per line and closing braces on their own lines: the
    # smallest program (1 source, 1 view, 1 layer with from+mark) is 11 lines.
    text = print_brace(minimal_program())
    assert len(text.rstrip("\n").split("\n")) == 11
    assert ast_equal(parse_brace(text), minimal_program())


def test_minimal_program_indent_line_count():
    text = print_indent(minimal_program())
    assert len(text.rstrip("\n").split("\n")) == 7
    assert ast_equal(parse_indent(text), minimal_program())


def test_listing_roundtrip_is_byte_stable():
    # Parsing the indentation listing and brace-printing it must reproduce
    # the canonical brace form byte-for-byte (and re-parse equal).
    program = parse_indent(TEASER_INDENT)
    assert print_brace(program) == TEASER_BRACE
    assert print_indent(parse_brace(TEASER_BRACE)) == TEASER_INDENT


def test_printing_is_deterministic(teaser_program):
    assert print_brace(teaser_program) == print_brace(teaser_program)
    assert print_indent(teaser_program) == print_indent(teaser_program)


def test_ast_equal_reflexive_and_parse_equivalence(teaser_program):
    assert ast_equal(teaser_program, teaser_program)
    assert ast_equal(parse_brace(TEASER_BRACE), parse_indent(TEASER_INDENT))


def test_ast_equal_detects_single_style_change():
    a = parse_indent(TEASER_INDENT)
    changed = TEASER_INDENT.replace('field = "vorticity"', 'field = "pp"')
    b = parse_indent(changed)
    assert not ast_equal(a, b)


def test_ast_equal_is_an_equivalence_relation():
    rng = random.Random(7)
    programs = [generate_program(rng)[0] for _ in range(10)]
    for p in programs:
        assert ast_equal(p, p)
    for p in programs:
        q = parse_brace(print_brace(p))
        assert ast_equal(p, q) and ast_equal(q, p)
        r = parse_indent(print_indent(q))
        assert ast_equal(q, r)
        assert ast_equal(p, r)


def test_ast_equal_distinguishes_bool_from_number():
    base = minimal_program()
    a = Program(
        data=base.data,
        views=(
            ViewDecl(
                id="v",
                layers=(
                    LayerDecl(source="s", mark="volume", style={"opacity": True}),
                ),
            ),
        ),
    )
    b = Program(
        data=base.data,
        views=(
            ViewDecl(
                id="v",
                layers=(
                    LayerDecl(source="s", mark="volume", style={"opacity": 1}),
                ),
            ),
        ),
    )
    assert not ast_equal(a, b)


def test_encode_key_order_is_significant():
    a = parse_brace('vis { data { t: tbl("a.csv"); } view "v" { layer { from: t; mark: points; encode: { x: "c1", y: "c2" }; } } }')
    b = parse_brace('vis { data { t: tbl("a.csv"); } view "v" { layer { from: t; mark: points; encode: { y: "c2", x: "c1" }; } } }')
    assert not ast_equal(a, b)


def test_numbers_roundtrip_without_loss():
    src = 'vis { data { t: tbl("a.csv", scale: 10.09, count: 42, tiny: 1.5e-7, neg: -3.25); } view "v" { layer { from: t; mark: histogram; encode: { x: "c" }; } } }'
    p = parse_brace(src)
    args = p.data["t"].args
    assert args["scale"] == 10.09 and args["count"] == 42
    assert args["tiny"] == 1.5e-7 and args["neg"] == -3.25
    again = parse_brace(print_brace(p))
    assert ast_equal(p, again)


def test_plus_signed_numbers_normalize_away():
    p = parse_brace('vis { data { t: tbl("a.csv", n: +5); } view "v" { layer { from: t; mark: histogram; encode: { x: "c" }; } } }')
    assert p.data["t"].args["n"] == 5
    assert "+5" not in print_brace(p)
