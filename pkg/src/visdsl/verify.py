"""Verification stage: AST -> typed ProgramSpec, or a list of diagnostics.

All structural checks run before any backend decision: source and
selection references, mark existence, mark/data-kind and channel/type
compatibility, per-view backend homogeneity and layerability, link shape,
and the 1-9 view cardinality.  Checks accumulate; the stage never stops
at the first error and never raises for invalid programs.

Backend knowledge used here is limited to the capability table's
spatial/chart classes; rendering backends are assigned later.
``bubble`` layers are normalized to ``points`` plus a ``size`` encoding.
Layer ids are assigned in declaration order as ``viewId:markType#index``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ast import LinkDecl, Program, SelectionDecl
from .capabilities import (
    CAPABILITIES,
    CHART,
    SPATIAL,
    can_layer,
    capability,
    normalize_mark,
)
from .probe import DatasetMeta, VariableDesc

MAX_VIEWS = 9

_CTOR_KINDS = {
    "img": "ImageData",
    "tbl": "Table",
    "net": "Network",
    "geo": "GeoJSON",
    "func": "Procedural",
}

_AXIS_NAMES = ("XY", "XZ", "YZ", "oblique")

_FUNC_REQUIRED_ARGS = ("dims", "range", "equations")


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    path: str
    severity: str = "error"

    def to_dict(self) -> dict:
        return {"code": self.code, "message": self.message, "path": self.path}


@dataclass(frozen=True)
class SpecSource:
    name: str
    kind: str
    path: str | None
    args: dict


@dataclass(frozen=True)
class SpecLayer:
    id: str
    mark: str
    source: str
    geo: str | None
    encode: dict
    style: dict
    where: str | None


@dataclass(frozen=True)
class SpecView:
    id: str
    layers: tuple[SpecLayer, ...]
    links: tuple[LinkDecl, ...]
    interactions: tuple = ()


@dataclass(frozen=True)
class ProgramSpec:
    data: dict  # source name -> SpecSource
    views: tuple[SpecView, ...]
    selections: tuple[SelectionDecl, ...]


@dataclass
class _Collector:
    diagnostics: list[Diagnostic] = field(default_factory=list)

    def error(self, code: str, message: str, path: str) -> None:
        self.diagnostics.append(Diagnostic(code=code, message=message, path=path))


def synthesize_func_meta(args: dict, name: str, out: _Collector) -> DatasetMeta:
    """Build Procedural metadata from func() args (dims, range, equations)."""
    for arg in _FUNC_REQUIRED_ARGS:
        if arg not in args:
            out.error(
                "func-missing-arg",
                f"procedural source '{name}' is missing required arg '{arg}'",
                f"data/{name}",
            )
    dims = args.get("dims")
    dimensions = None
    if isinstance(dims, list) and len(dims) == 3 and all(
        isinstance(d, int) and not isinstance(d, bool) and d >= 1 for d in dims
    ):
        dimensions = (dims[0], dims[1], dims[2])
    elif "dims" in args:
        out.error(
            "func-missing-arg",
            f"procedural source '{name}' has malformed dims {dims!r}",
            f"data/{name}",
        )
    rng = args.get("range")
    vrange = None
    if (
        isinstance(rng, list)
        and len(rng) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in rng)
        and rng[0] <= rng[1]
    ):
        vrange = (float(rng[0]), float(rng[1]))
    elif "range" in args:
        out.error(
            "func-missing-arg",
            f"procedural source '{name}' has malformed range {rng!r}",
            f"data/{name}",
        )
    equations = args.get("equations")
    names: list[str] = []
    if isinstance(equations, dict):
        names = [k for k in equations]
    elif isinstance(equations, list):
        names = [f"f{i}" for i in range(len(equations))]
    elif "equations" in args:
        out.error(
            "func-missing-arg",
            f"procedural source '{name}' has malformed equations {equations!r}",
            f"data/{name}",
        )
    variables = tuple(
        VariableDesc(name=n, data_type="number", range=vrange) for n in names
    )
    return DatasetMeta(kind="Procedural", variables=variables, dimensions=dimensions)


def check_mark_encoding(
    mark: str, encode: dict, meta: DatasetMeta, path: str = ""
) -> list[Diagnostic]:
    """Validate one layer's encode block against its mark and metadata."""
    out = _Collector()
    cap = capability(mark)
    if cap is None:
        raise ValueError(f"unknown mark '{mark}'")

    if meta.kind not in cap.data_kinds:
        out.error(
            "mark-data-mismatch",
            f"mark '{mark}' cannot render {meta.kind} data"
            f" (accepts {', '.join(cap.data_kinds)})",
            path,
        )

    for channel in cap.required:
        if channel not in encode:
            out.error(
                "missing-required-channel",
                f"mark '{mark}' requires encode channel '{channel}'",
                path,
            )

    allowed = set(cap.required) | set(cap.optional)
    for channel, value in encode.items():
        if channel not in allowed:
            out.error(
                "unknown-channel",
                f"mark '{mark}' has no encode channel '{channel}'",
                path,
            )
            continue
        fields = value if isinstance(value, list) else [value]
        for f in fields:
            if not isinstance(f, str):
                out.error(
                    "invalid-encoding",
                    f"channel '{channel}' must reference a field by name,"
                    f" got {f!r}",
                    path,
                )
                continue
            var = meta.variable(f)
            if var is None:
                out.error(
                    "unknown-field",
                    f"channel '{channel}' references unknown field '{f}'",
                    path,
                )
                continue
            accepted = cap.channel_types.get(channel)
            if accepted and var.data_type not in accepted:
                out.error(
                    "channel-type-mismatch",
                    f"channel '{channel}' of mark '{mark}' does not accept"
                    f" {var.data_type} field '{f}'",
                    path,
                )
    return out.diagnostics


def _check_style(mark: str, style: dict, path: str, out: _Collector) -> None:
    cap = CAPABILITIES[mark]
    for key in style:
        if key not in cap.styles:
            out.error(
                "unknown-style",
                f"mark '{mark}' has no style property '{key}'",
                path,
            )


def _view_backend_classes(view_layers: list[SpecLayer]) -> set[str]:
    return {CAPABILITIES[l.mark].backend_class for l in view_layers}


def check_links_and_selections(
    program: Program,
    views: tuple[SpecView, ...],
    view_classes: dict,
    out: _Collector,
) -> None:
    declared_selections = {s.name for s in program.selections if s.name}

    for sel in program.selections:
        if sel.name is None:
            out.error(
                "selection-missing-name",
                "select(...) requires a 'name' argument",
                "selections",
            )
    seen: set[str] = set()
    for sel in program.selections:
        if sel.name and sel.name in seen:
            out.error(
                "duplicate-selection",
                f"selection '{sel.name}' is declared more than once",
                "selections",
            )
        if sel.name:
            seen.add(sel.name)

    known_views = {v.id for v in views}

    for view in views:
        for i, link in enumerate(view.links):
            path = f"view {view.id}/link#{i}"
            kinds = link.kinds()
            if len(kinds) != 1:
                got = ", ".join(kinds) if kinds else "none"
                out.error(
                    "link-kind",
                    f"link must specify exactly one of selection, tf, slice"
                    f" (got {got})",
                    path,
                )
                continue
            kind = kinds[0]
            if not isinstance(link.args[kind], str):
                out.error(
                    "link-kind",
                    f"link {kind} payload must be a string identifier",
                    path,
                )
            members = list(link.views)
            if link.target is not None:
                if kind != "selection":
                    out.error(
                        "link-arg",
                        "'target' is valid only on selection links",
                        path,
                    )
                members.append(link.target)
            for member in members:
                if member not in known_views:
                    out.error(
                        "unknown-view",
                        f"link references unknown view '{member}'",
                        path,
                    )
            if kind == "slice":
                axes = link.axes
                if axes is None:
                    out.error(
                        "slice-needs-axes",
                        "slice links require an 'axes' argument",
                        path,
                    )
                else:
                    for axis in axes:
                        if axis not in _AXIS_NAMES:
                            out.error(
                                "invalid-axis",
                                f"invalid slice axis '{axis}'"
                                f" (one of {', '.join(_AXIS_NAMES)})",
                                path,
                            )
            elif link.axes is not None:
                out.error(
                    "link-arg", "'axes' is valid only on slice links", path
                )
            if kind == "selection":
                payload = link.args[kind]
                if isinstance(payload, str) and payload not in declared_selections:
                    out.error(
                        "undeclared-selection",
                        f"link references undeclared selection '{payload}'",
                        path,
                    )
            member_classes = {
                view_classes[m] for m in members if m in view_classes
            }
            if len(member_classes) > 1:
                out.error(
                    "cross-backend-link",
                    "linked views must share one backend class",
                    path,
                )
            elif member_classes == {CHART} and kind in ("tf", "slice"):
                out.error(
                    "link-needs-spatial",
                    f"{kind} links coordinate spatial views only",
                    path,
                )
            elif member_classes == {SPATIAL} and kind == "selection":
                out.error(
                    "selection-needs-chart",
                    "selection links coordinate chart views only",
                    path,
                )

    for view in views:
        for inter_i, inter in enumerate(view.interactions):
            path = f"view {view.id}/interactions#{inter_i}"
            if inter.event != "brush":
                out.error(
                    "unknown-event",
                    f"unknown interaction event '{inter.event}'",
                    path,
                )
            for act in inter.actions:
                if act.selection not in declared_selections:
                    out.error(
                        "undeclared-selection",
                        f"bind references undeclared selection '{act.selection}'",
                        path,
                    )


def verify(
    program: Program, metas: dict
) -> tuple[ProgramSpec | None, list[Diagnostic]]:
    """Check ``program`` against ``metas`` (source name -> DatasetMeta).

    Procedural sources may be absent from ``metas``; their metadata is
    synthesized from the declaration args.  Returns ``(spec, [])`` on
    success and ``(None, diagnostics)`` otherwise, with a deterministic
    diagnostic order.
    """
    out = _Collector()

    if not program.data:
        out.error("no-data", "a program requires at least one data source", "data")

    resolved_metas: dict[str, DatasetMeta] = {}
    sources: dict[str, SpecSource] = {}
    for name, decl in program.data.items():
        kind = _CTOR_KINDS[decl.ctor]
        if decl.ctor == "func":
            meta = synthesize_func_meta(decl.args, name, out)
        else:
            meta = metas.get(name)
            if meta is None:
                raise ValueError(f"no DatasetMeta provided for source '{name}'")
            if meta.kind != kind:
                out.error(
                    "source-kind-mismatch",
                    f"source '{name}' is declared {decl.ctor} ({kind}) but probed"
                    f" as {meta.kind}",
                    f"data/{name}",
                )
        resolved_metas[name] = meta
        sources[name] = SpecSource(
            name=name, kind=kind, path=decl.path, args=dict(decl.args)
        )

    seen_views: set[str] = set()
    spec_views: list[SpecView] = []
    view_classes: dict[str, str] = {}
    for view in program.views:
        vpath = f"view {view.id}"
        if view.id in seen_views:
            out.error(
                "duplicate-view-id",
                f"view id '{view.id}' is declared more than once",
                vpath,
            )
        seen_views.add(view.id)

        if not view.layers:
            out.error("empty-view", f"view '{view.id}' has no layers", vpath)

        spec_layers: list[SpecLayer] = []
        for index, layer in enumerate(view.layers):
            lpath = f"{vpath}/layer#{index}"
            ok = True
            if layer.source is None:
                out.error(
                    "missing-from",
                    f"layer #{index} of view '{view.id}' lacks a 'from' source",
                    lpath,
                )
                ok = False
            elif layer.source not in sources:
                out.error(
                    "unknown-source",
                    f"layer references unknown data source '{layer.source}'",
                    lpath,
                )
                ok = False
            if layer.mark is None:
                out.error(
                    "missing-mark",
                    f"layer #{index} of view '{view.id}' lacks a 'mark'",
                    lpath,
                )
                ok = False
            elif capability(layer.mark) is None:
                out.error(
                    "unknown-mark", f"unknown mark '{layer.mark}'", lpath
                )
                ok = False
            if layer.geo is not None:
                if layer.geo not in sources:
                    out.error(
                        "unknown-source",
                        f"layer references unknown geo source '{layer.geo}'",
                        lpath,
                    )
                    ok = False
                elif sources[layer.geo].kind != "GeoJSON":
                    out.error(
                        "geo-kind-mismatch",
                        f"geo reference '{layer.geo}' is not a GeoJSON source",
                        lpath,
                    )
            if not ok:
                continue

            mark = normalize_mark(layer.mark)
            encode = dict(layer.encode)
            out.diagnostics.extend(
                check_mark_encoding(layer.mark, encode, resolved_metas[layer.source], lpath)
            )
            _check_style(layer.mark, layer.style, lpath, out)
            if mark == "choropleth" and layer.geo is None and (
                sources[layer.source].kind != "GeoJSON"
            ):
                out.error(
                    "choropleth-needs-geo",
                    "choropleth layers need a GeoJSON source via 'from' or 'geo'",
                    lpath,
                )
            spec_layers.append(
                SpecLayer(
                    id=f"{view.id}:{mark}#{index}",
                    mark=mark,
                    source=layer.source,
                    geo=layer.geo,
                    encode=encode,
                    style=dict(layer.style),
                    where=layer.where,
                )
            )

        classes = _view_backend_classes(spec_layers)
        if len(classes) > 1:
            out.error(
                "mixed-backend",
                f"view '{view.id}' mixes spatial and chart marks",
                vpath,
            )
        elif classes:
            view_classes[view.id] = classes.pop()
        for i in range(len(spec_layers)):
            for j in range(i + 1, len(spec_layers)):
                a, b = spec_layers[i].mark, spec_layers[j].mark
                if CAPABILITIES[a].backend_class == CAPABILITIES[b].backend_class and not can_layer(a, b):
                    out.error(
                        "not-layerable",
                        f"marks '{a}' and '{b}' cannot share a view",
                        vpath,
                    )

        spec_views.append(
            SpecView(
                id=view.id,
                layers=tuple(spec_layers),
                links=view.links,
                interactions=view.interactions,
            )
        )

    check_links_and_selections(program, tuple(spec_views), view_classes, out)

    if not 1 <= len(program.views) <= MAX_VIEWS:
        out.error(
            "view-count",
            f"programs support 1 to {MAX_VIEWS} views, got {len(program.views)}",
            "views",
        )

    if out.diagnostics:
        return None, out.diagnostics
    spec = ProgramSpec(
        data=sources,
        views=tuple(spec_views),
        selections=program.selections,
    )
    return spec, []
