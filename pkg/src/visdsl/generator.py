"""Seeded random generator of valid programs with matching metadata.

Used by the property suites: every generated (Program, metas) pair
respects the capability table (marks, channels, types, layering, link
rules), so it must survive the whole parse -> verify -> realize -> emit
pipeline with zero diagnostics.  Generation is driven entirely by the
supplied ``random.Random``, so a seed pins the corpus.
"""

from __future__ import annotations

import random

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
from .probe import DatasetMeta, VariableDesc

_WORDS = (
    "alpha", "beta", "gamma", "delta", "omega", "kappa", "sigma", "theta",
    "north", "south", "east", "west", "inner", "outer", "upper", "lower",
)

_PALETTES = ("viridis", "inferno", "magma", "plasma", "turbo", "Greens")

_CHART_TABLE_MARKS = (
    "points", "bubble", "hexbin", "heatmap", "histogram", "kde", "boxplot",
    "violin", "ridgeline", "line", "band", "bar", "pie", "chord", "sankey",
    "parallel_coordinates",
)


def _num(rng: random.Random, lo: float, hi: float, places: int = 3) -> float:
    return round(rng.uniform(lo, hi), places)


def _numvar(rng: random.Random, name: str) -> VariableDesc:
    lo = _num(rng, -50, 50)
    hi = lo + _num(rng, 0.5, 40)
    return VariableDesc(
        name=name,
        data_type="number",
        range=(lo, hi),
        count=rng.randint(20, 500),
        stddev=_num(rng, 0.05, 8, 4),
    )


def _catvar(rng: random.Random, name: str) -> VariableDesc:
    cats = tuple(sorted(rng.sample(_WORDS, rng.randint(2, 5))))
    return VariableDesc(
        name=name, data_type="string", categories=cats, count=rng.randint(20, 500)
    )


def _image_meta(rng: random.Random) -> DatasetMeta:
    dims = tuple(rng.randint(2, 9) for _ in range(3))
    names = ["ux", "uy", "uz"] + [f"s{i}" for i in range(rng.randint(1, 3))]
    return DatasetMeta(
        kind="ImageData",
        dimensions=dims,  # type: ignore[arg-type]
        variables=tuple(_numvar(rng, n) for n in names),
    )


def _table_meta(rng: random.Random) -> DatasetMeta:
    numeric = [f"c{i}" for i in range(rng.randint(3, 6))]
    cats = [f"g{i}" for i in range(2)]
    variables = [_numvar(rng, n) for n in numeric] + [_catvar(rng, n) for n in cats]
    return DatasetMeta(kind="Table", variables=tuple(variables))


def _network_meta(rng: random.Random) -> DatasetMeta:
    return DatasetMeta(
        kind="Network",
        variables=(
            _catvar(rng, "node.id"),
            _catvar(rng, "node.group"),
            _catvar(rng, "link.source"),
            _catvar(rng, "link.target"),
            _numvar(rng, "link.value"),
        ),
    )


def _geo_meta(rng: random.Random) -> DatasetMeta:
    return DatasetMeta(
        kind="GeoJSON",
        variables=(_catvar(rng, "region"), _numvar(rng, "score")),
        feature_count=rng.randint(3, 250),
    )


def _numeric_names(meta: DatasetMeta) -> list[str]:
    return [v.name for v in meta.variables if v.data_type == "number"]


def _string_names(meta: DatasetMeta) -> list[str]:
    return [v.name for v in meta.variables if v.data_type == "string"]


def _spatial_layer(rng: random.Random, src: str, mark: str, meta: DatasetMeta) -> LayerDecl:
    encode: dict = {}
    style: dict = {}
    numeric = _numeric_names(meta)
    has_velocity = {"ux", "uy", "uz"} <= set(numeric)
    if mark in ("volume", "isosurface", "slice") and rng.random() < 0.5:
        encode["field"] = rng.choice(numeric)
    if mark == "volume":
        if rng.random() < 0.4:
            style["sample_distance"] = _num(rng, 0.1, 2, 2)
        if rng.random() < 0.4:
            style["palette"] = rng.choice(_PALETTES)
    elif mark == "isosurface":
        if rng.random() < 0.4:
            style["iso_value"] = _num(rng, 0, 10, 2)
        if rng.random() < 0.3:
            style["color"] = "#aa66cc"
        if rng.random() < 0.3:
            style["opacity"] = _num(rng, 0.1, 1.0, 2)
    elif mark == "slice":
        roll = rng.random()
        if roll < 0.5:
            style["axes"] = rng.sample(["XY", "XZ", "YZ"], rng.randint(1, 2))
        elif roll < 0.65:
            style["axes"] = ["oblique"]
            if rng.random() < 0.5:
                style["is3DPlane"] = rng.random() < 0.5
        if rng.random() < 0.3:
            style["palette"] = rng.choice(_PALETTES)
    elif mark == "streamline":
        encode = {"vx": "ux", "vy": "uy", "vz": "uz"}
        if rng.random() < 0.5:
            style["seed_count"] = rng.randint(10, 400)
        if rng.random() < 0.3:
            style["integration_step"] = _num(rng, 0.1, 2, 2)
        if rng.random() < 0.3:
            style["tube_radius"] = _num(rng, 0, 2, 2)
    elif mark == "lic":
        encode = {"vx": "ux", "vy": "uy"}
        if rng.random() < 0.5:
            style["number_of_steps"] = rng.randint(10, 200)
        if rng.random() < 0.3:
            style["lic_intensity"] = _num(rng, 0.1, 1, 2)
    assert mark not in ("streamline", "lic") or has_velocity
    where = None
    if rng.random() < 0.1:
        where = f"{rng.choice(numeric)} > {_num(rng, 0, 1, 2)}"
    return LayerDecl(source=src, mark=mark, encode=encode, style=style, where=where)


def _spatial_view(
    rng: random.Random, view_id: str, src: str, meta: DatasetMeta
) -> ViewDecl:
    numeric = set(_numeric_names(meta))
    has_velocity = {"ux", "uy", "uz"} <= numeric
    n_layers = rng.choices((1, 2, 3), weights=(6, 3, 1))[0]
    if n_layers == 1:
        pool = ["volume", "isosurface", "slice"]
        if has_velocity:
            pool += ["streamline", "lic"]
        marks = [rng.choice(pool)]
    else:
        pool = ["volume", "isosurface", "slice"]
        if has_velocity:
            pool.append("streamline")
        marks = rng.sample(pool, min(n_layers, len(pool)))
    layers = tuple(_spatial_layer(rng, src, m, meta) for m in marks)
    return ViewDecl(id=view_id, layers=layers)


def _chart_encode(rng: random.Random, mark: str, meta: DatasetMeta) -> dict:
    numeric = _numeric_names(meta)
    strings = _string_names(meta)
    pick_num = lambda: rng.choice(numeric)
    pick_str = lambda: rng.choice(strings)
    encode: dict
    if mark in ("points", "hexbin"):
        encode = {"x": pick_num(), "y": pick_num()}
        if mark == "points" and rng.random() < 0.3:
            encode["color"] = pick_str()
    elif mark == "bubble":
        encode = {"x": pick_num(), "y": pick_num(), "size": pick_num()}
    elif mark == "heatmap":
        encode = {"x": pick_str(), "y": pick_str(), "color": pick_num()}
    elif mark in ("histogram", "kde"):
        encode = {"x": pick_num()}
    elif mark in ("boxplot", "violin"):
        encode = {"x": pick_str(), "y": pick_num()}
    elif mark == "ridgeline":
        encode = {"x": pick_num(), "y": pick_str()}
    elif mark == "line":
        encode = {"x": pick_num(), "y": pick_num()}
        if rng.random() < 0.25:
            encode["color"] = pick_str()
    elif mark == "band":
        encode = {"x": pick_num(), "y0": pick_num(), "y1": pick_num()}
    elif mark == "bar":
        encode = {"x": pick_str(), "y": pick_num()}
    elif mark == "pie":
        encode = {"label": pick_str(), "value": pick_num()}
    elif mark in ("chord", "sankey"):
        encode = {"source": pick_str(), "target": pick_str(), "value": pick_num()}
    elif mark == "parallel_coordinates":
        dims = rng.sample(numeric, min(len(numeric), rng.randint(2, 3)))
        encode = {"dimensions": dims}
    elif mark == "force_graph":
        encode = {"source": "link.source", "target": "link.target"}
        if rng.random() < 0.4:
            encode["value"] = "link.value"
    elif mark == "choropleth":
        encode = {"region": pick_str(), "value": pick_num()}
    else:
        raise AssertionError(mark)
    return encode


_CHART_STYLE_SAMPLES = {
    "points": {"radius": (1, 8, 0), "fill_color": "#2ca02c"},
    "hexbin": {"radius": (5, 20, 0)},
    "histogram": {"bins": (5, 80, 0), "fill_color": "#ff7f0e"},
    "kde": {"bandwidth": (0.1, 4, 2), "stroke_width": (1, 4, 1)},
    "line": {"stroke_width": (1, 5, 1), "stroke_color": "#d62728"},
    "bar": {"fill_color": "#9467bd"},
    "pie": {"inner_radius": (0, 60, 0)},
    "sankey": {"node_width": (10, 40, 0)},
    "force_graph": {"node_radius": (2, 12, 0)},
    "choropleth": {"stroke_width": (0, 2, 1)},
}


def _chart_style(rng: random.Random, mark: str) -> dict:
    style: dict = {}
    for key, spec in _CHART_STYLE_SAMPLES.get(mark, {}).items():
        if rng.random() < 0.35:
            if isinstance(spec, tuple):
                lo, hi, places = spec
                value = round(rng.uniform(lo, hi), int(places))
                style[key] = int(value) if places == 0 else value
            else:
                style[key] = spec
    return style


def _chart_view(
    rng: random.Random,
    view_id: str,
    sources: dict,
    metas: dict,
) -> ViewDecl:
    table_sources = [n for n, d in sources.items() if d.ctor == "tbl"]
    net_sources = [n for n, d in sources.items() if d.ctor == "net"]
    geo_sources = [n for n, d in sources.items() if d.ctor == "geo"]

    options: list[str] = []
    if table_sources:
        options.extend(_CHART_TABLE_MARKS)
        if geo_sources:
            options.append("choropleth")
    if net_sources:
        options.append("force_graph")
    if not options and geo_sources:
        options.append("choropleth")
    mark = rng.choice(options)

    geo = None
    if mark == "force_graph":
        src = rng.choice(net_sources)
    elif mark == "choropleth" and not table_sources:
        src = rng.choice(geo_sources)
    else:
        src = rng.choice(table_sources)
        if mark == "choropleth":
            geo = rng.choice(geo_sources)
    meta = metas[src]

    layers = [
        LayerDecl(
            source=src,
            mark=mark,
            geo=geo,
            encode=_chart_encode(rng, mark, meta),
            style=_chart_style(rng, mark),
        )
    ]
    if mark == "histogram" and rng.random() < 0.3:
        layers.append(
            LayerDecl(source=src, mark="kde", encode={"x": layers[0].encode["x"]})
        )
    elif mark == "line" and rng.random() < 0.25:
        layers.append(
            LayerDecl(source=src, mark="band", encode=_chart_encode(rng, "band", meta))
        )
    return ViewDecl(id=view_id, layers=tuple(layers))


def generate_program(rng: random.Random) -> tuple[Program, dict]:
    """One valid program plus the DatasetMeta map its sources probe to."""
    sources: dict[str, DataDecl] = {}
    metas: dict[str, DatasetMeta] = {}
    n_sources = rng.randint(1, 3)
    kinds = [rng.choices(("img", "tbl", "net", "geo", "func"), weights=(3, 4, 1, 1, 1))[0]
             for _ in range(n_sources)]
    for i, ctor in enumerate(kinds):
        name = f"src{i}"
        if ctor == "img":
            metas[name] = _image_meta(rng)
            sources[name] = DataDecl("img", f"{name}.vti", {"format": "vti"})
        elif ctor == "tbl":
            metas[name] = _table_meta(rng)
            sources[name] = DataDecl("tbl", f"{name}.csv", {"format": "csv"})
        elif ctor == "net":
            metas[name] = _network_meta(rng)
            sources[name] = DataDecl("net", f"{name}.json", {"format": "json"})
        elif ctor == "geo":
            metas[name] = _geo_meta(rng)
            sources[name] = DataDecl("geo", f"{name}.geojson", {"format": "geojson"})
        else:
            dims = [rng.randint(4, 16) for _ in range(3)]
            sources[name] = DataDecl(
                "func",
                None,
                {
                    "equations": {"q": "sin(x) * cos(y)"},
                    "dims": dims,
                    "range": [0, _num(rng, 0.5, 5, 2)],
                },
            )
            metas[name] = DatasetMeta(
                kind="Procedural",
                dimensions=tuple(dims),  # type: ignore[arg-type]
                variables=(
                    VariableDesc(name="q", data_type="number", range=(0.0, 1.0)),
                ),
            )

    spatial_sources = [n for n, d in sources.items() if d.ctor in ("img", "func")]
    chartable = any(d.ctor in ("tbl", "net", "geo") for d in sources.values())

    n_views = rng.choices(
        (1, 2, 3, 4, 5, 6, 7, 8, 9),
        weights=(28, 28, 20, 10, 6, 4, 2, 1, 1),
    )[0]
    views: list[ViewDecl] = []
    for i in range(n_views):
        view_id = f"{rng.choice(_WORDS)}_{i}"
        want_spatial = spatial_sources and (not chartable or rng.random() < 0.45)
        if want_spatial:
            src = rng.choice(spatial_sources)
            views.append(_spatial_view(rng, view_id, src, metas[src]))
        else:
            views.append(_chart_view(rng, view_id, sources, metas))

    selections: list[SelectionDecl] = []
    views_by_class: dict[str, list[int]] = {"spatial": [], "chart": []}
    for idx, view in enumerate(views):
        mark = view.layers[0].mark
        is_spatial = mark in ("volume", "isosurface", "slice", "streamline", "lic")
        views_by_class["spatial" if is_spatial else "chart"].append(idx)

    # Brush coordination between two chart views sharing a source.
    chart_idx = views_by_class["chart"]
    if len(chart_idx) >= 2 and rng.random() < 0.5:
        a, b = chart_idx[0], chart_idx[1]
        src_a = views[a].layers[0].source
        if any(l.source == src_a for l in views[b].layers):
            sel = SelectionDecl(args={"name": "sel0"})
            selections.append(sel)
            views[a] = ViewDecl(
                id=views[a].id,
                layers=views[a].layers,
                links=views[a].links
                + (
                    LinkDecl(
                        args={
                            "selection": "sel0",
                            "views": [views[a].id, views[b].id],
                        }
                    ),
                ),
                interactions=(
                    InteractionDecl(
                        event="brush", actions=(BindAction(selection="sel0"),)
                    ),
                ),
            )

    # Transfer-function and slice-index coordination between spatial views.
    spatial_idx = views_by_class["spatial"]
    if len(spatial_idx) >= 2 and rng.random() < 0.5:
        a, b = spatial_idx[0], spatial_idx[1]
        links = [
            LinkDecl(
                args={
                    "tf": f"{views[a].layers[0].source}_shared",
                    "views": [views[a].id, views[b].id],
                }
            )
        ]
        if any(l.mark == "slice" for l in views[a].layers) and any(
            l.mark == "slice" for l in views[b].layers
        ):
            links.append(
                LinkDecl(
                    args={
                        "slice": "slice_link_0",
                        "axes": ["XY"],
                        "views": [views[a].id, views[b].id],
                    }
                )
            )
        views[a] = ViewDecl(
            id=views[a].id,
            layers=views[a].layers,
            links=views[a].links + tuple(links),
            interactions=views[a].interactions,
        )

    program = Program(
        data=sources, views=tuple(views), selections=tuple(selections)
    )
    return program, metas
