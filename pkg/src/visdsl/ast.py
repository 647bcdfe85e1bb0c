"""Abstract syntax tree shared by both surface syntaxes.

Both parsers lower to these nodes; the printers and every later pipeline
stage consume them.  Nodes are immutable values: ordered maps are plain
dicts (insertion order is significant for ``encode``/``style`` and for the
data block, because deterministic printing and IR emission depend on it),
sequences are tuples.  Source locations are deliberately not stored, so
two parses of equivalent programs compare equal.

``Value`` is the JSON-like scalar/composite union of the grammar:
str, int, float, bool, None, dict (ordered object) and list (array).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

Value = Union[str, int, float, bool, None, dict, list]

DATA_CTORS = ("img", "tbl", "net", "geo", "func")

LINK_KINDS = ("selection", "tf", "slice")


@dataclass(frozen=True)
class DataDecl:
    """One named data source; ``path`` is absent only for ``func``."""

    ctor: str
    path: str | None = None
    args: dict = field(default_factory=dict)


@dataclass(frozen=True)
class LayerDecl:
    """One visual representation inside a view.

    ``source``/``mark`` are optional here because the grammar admits layers
    without them (``layerStmt*``); the verifier rejects such layers.
    ``where`` holds the raw, unparsed filter text.
    """

    source: str | None = None
    mark: str | None = None
    geo: str | None = None
    encode: dict = field(default_factory=dict)
    style: dict = field(default_factory=dict)
    where: str | None = None


@dataclass(frozen=True)
class LinkDecl:
    """A ``link(...)`` declaration, kept as its raw ordered argument map.

    Exactly-one-of selection/tf/slice is a verifier rule, so malformed
    links must be representable here.
    """

    args: dict = field(default_factory=dict)

    def kinds(self) -> tuple[str, ...]:
        return tuple(k for k in self.args if k in LINK_KINDS)

    @property
    def kind(self) -> str | None:
        ks = self.kinds()
        return ks[0] if len(ks) == 1 else None

    @property
    def payload(self) -> Value:
        k = self.kind
        return self.args.get(k) if k else None

    @property
    def views(self) -> tuple[str, ...]:
        v = self.args.get("views")
        if isinstance(v, list):
            return tuple(x for x in v if isinstance(x, str))
        return ()

    @property
    def target(self) -> str | None:
        t = self.args.get("target")
        return t if isinstance(t, str) else None

    @property
    def axes(self) -> tuple[str, ...] | None:
        a = self.args.get("axes")
        if a is None:
            return None
        if isinstance(a, str):
            return (a,)
        if isinstance(a, list):
            return tuple(x for x in a if isinstance(x, str))
        return ()


@dataclass(frozen=True)
class SelectionDecl:
    """A ``select(...)`` declaration; ``name`` is required by the verifier."""

    args: dict = field(default_factory=dict)

    @property
    def name(self) -> str | None:
        n = self.args.get("name")
        return n if isinstance(n, str) else None


@dataclass(frozen=True)
class BindAction:
    selection: str
    args: dict = field(default_factory=dict)


@dataclass(frozen=True)
class InteractionDecl:
    """An ``on("<event>") { bind(...)* }`` block; only "brush" is defined."""

    event: str
    actions: tuple[BindAction, ...] = ()


@dataclass(frozen=True)
class ViewDecl:
    id: str
    layers: tuple[LayerDecl, ...] = ()
    links: tuple[LinkDecl, ...] = ()
    interactions: tuple[InteractionDecl, ...] = ()


@dataclass(frozen=True)
class Program:
    """A whole ``vis`` program.

    ``data`` keys are unique by construction (the parsers reject duplicate
    source declarations); duplicate view ids are representable and flagged
    by the verifier.
    """

    data: dict = field(default_factory=dict)
    views: tuple[ViewDecl, ...] = ()
    selections: tuple[SelectionDecl, ...] = ()


def _canon(x: object) -> object:
    # Bool before int: True must not equal 1 structurally.
    if isinstance(x, bool):
        return ("b", x)
    if isinstance(x, (int, float)):
        return ("n", float(x))
    if isinstance(x, str) or x is None:
        return x
    if isinstance(x, dict):
        return ("map", tuple((k, _canon(v)) for k, v in x.items()))
    if isinstance(x, (list, tuple)):
        return ("arr", tuple(_canon(v) for v in x))
    if isinstance(
        x,
        (
            Program,
            DataDecl,
            ViewDecl,
            LayerDecl,
            LinkDecl,
            SelectionDecl,
            InteractionDecl,
            BindAction,
        ),
    ):
        fields = tuple(
            (name, _canon(getattr(x, name))) for name in x.__dataclass_fields__
        )
        return (type(x).__name__, fields)
    raise TypeError(f"non-AST value in program: {type(x).__name__}")


def ast_equal(a: Program, b: Program) -> bool:
    """Deep structural equality.

    Ordered-map key order is significant everywhere (data block, ctor
    args, encode, style): deterministic emission depends on it.  Numeric
    values compare by value (5 equals 5.0) but bool never equals a number.
    """
    return _canon(a) == _canon(b)
