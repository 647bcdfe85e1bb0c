"""Canonical pretty-printers for both surface syntaxes.

The canonical form is fixed so golden files are byte-stable:

* 2-space indentation, one statement per line, no alignment padding;
* comments are never emitted (they are discarded at parse time);
* block order inside ``vis``: data, selections, views;
* statement order inside a layer: from, geo, mark, encode, style, where;
* inside a view: links, then layers, then interactions;
* brace dialect separates names from values with ``:`` and terminates
  statements with ``;``; the indentation dialect uses ``=`` and newlines,
  with ``encode``/``style`` printed in block form;
* strings print double-quoted, numbers in shortest round-trip form,
  a leading ``+`` never appears.
"""

from __future__ import annotations

from .ast import (
    BindAction,
    DataDecl,
    InteractionDecl,
    LayerDecl,
    LinkDecl,
    Program,
    SelectionDecl,
    ViewDecl,
)

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t", "\r": "\\r"}


def _string(s: str) -> str:
    return '"' + "".join(_ESCAPES.get(c, c) for c in s) + '"'


def _number(x: int | float) -> str:
    if isinstance(x, int):
        return str(x)
    return repr(x)


def _value(v: object, sep: str) -> str:
    """Render one grammar value; ``sep`` is ':' (brace) or '=' (indent)."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, str):
        return _string(v)
    if isinstance(v, (int, float)):
        return _number(v)
    if isinstance(v, dict):
        if not v:
            return "{}"
        inner = ", ".join(f"{k}{sep} {_value(x, sep)}" for k, x in v.items())
        return "{ " + inner + " }"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_value(x, sep) for x in v) + "]"
    raise TypeError(f"unprintable value: {type(v).__name__}")


def _call_args(args: dict, dialect: str) -> str:
    # Call arguments are packed: brace "k: v", indent "k=v" (Listing style).
    if dialect == "brace":
        return ", ".join(f"{k}: {_value(v, ':')}" for k, v in args.items())
    return ", ".join(f"{k}={_value(v, '=')}" for k, v in args.items())


def _ctor(decl: DataDecl, dialect: str) -> str:
    parts = []
    if decl.path is not None:
        parts.append(_string(decl.path))
    if decl.args:
        parts.append(_call_args(decl.args, dialect))
    return f"{decl.ctor}({', '.join(parts)})"


def print_brace(program: Program) -> str:
    """Render ``program`` in the brace dialect (re-parses to an equal AST)."""
    out: list[str] = ["vis {"]

    def line(depth: int, text: str) -> None:
        out.append("  " * depth + text)

    if program.data:
        line(1, "data {")
        for name, decl in program.data.items():
            line(2, f"{name}: {_ctor(decl, 'brace')};")
        line(1, "}")

    if program.selections:
        line(1, "selections {")
        for sel in program.selections:
            line(2, f"select({_call_args(sel.args, 'brace')});")
        line(1, "}")

    for view in program.views:
        line(1, f"view {_string(view.id)} {{")
        for link in view.links:
            line(2, f"link({_call_args(link.args, 'brace')});")
        for layer in view.layers:
            line(2, "layer {")
            if layer.source is not None:
                line(3, f"from: {layer.source};")
            if layer.geo is not None:
                line(3, f"geo: {layer.geo};")
            if layer.mark is not None:
                line(3, f"mark: {layer.mark};")
            if layer.encode:
                line(3, f"encode: {_value(layer.encode, ':')};")
            if layer.style:
                line(3, f"style: {_value(layer.style, ':')};")
            if layer.where is not None:
                line(3, f"where: {layer.where};")
            line(2, "}")
        if view.interactions:
            line(2, "interactions {")
            for inter in view.interactions:
                line(3, f"on({_string(inter.event)}) {{")
                for act in inter.actions:
                    args = _call_args(act.args, "brace")
                    tail = f", {args}" if args else ""
                    line(4, f"bind({_string(act.selection)}{tail});")
                line(3, "}")
            line(2, "}")
        line(1, "}")

    out.append("}")
    return "\n".join(out) + "\n"


def print_indent(program: Program) -> str:
    """Render ``program`` in the indentation dialect."""
    out: list[str] = ["vis:"]

    def line(depth: int, text: str) -> None:
        out.append("  " * depth + text)

    def pairs(depth: int, mapping: dict) -> None:
        for k, v in mapping.items():
            line(depth, f"{k} = {_value(v, '=')}")

    if program.data:
        line(1, "data:")
        for name, decl in program.data.items():
            line(2, f"{name} = {_ctor(decl, 'indent')}")

    if program.selections:
        line(1, "selections:")
        for sel in program.selections:
            line(2, f"select({_call_args(sel.args, 'indent')})")

    for view in program.views:
        line(1, f"view {_string(view.id)}:")
        for link in view.links:
            line(2, f"link({_call_args(link.args, 'indent')})")
        for layer in view.layers:
            line(2, "layer:")
            if layer.source is not None:
                line(3, f"from = {layer.source}")
            if layer.geo is not None:
                line(3, f"geo = {layer.geo}")
            if layer.mark is not None:
                line(3, f"mark = {layer.mark}")
            if layer.encode:
                line(3, "encode:")
                pairs(4, layer.encode)
            if layer.style:
                line(3, "style:")
                pairs(4, layer.style)
            if layer.where is not None:
                line(3, f"where = {layer.where}")
        if view.interactions:
            line(2, "interactions:")
            for inter in view.interactions:
                line(3, f"on({_string(inter.event)}):")
                for act in inter.actions:
                    args = _call_args(act.args, "indent")
                    tail = f", {args}" if args else ""
                    line(4, f"bind({_string(act.selection)}{tail})")

    return "\n".join(out) + "\n"
