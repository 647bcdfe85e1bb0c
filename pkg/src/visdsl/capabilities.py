"""Static mark capability table.

One entry per mark name: backend class, accepted data kinds, required and
optional encode channels with per-channel accepted variable types, the
allowed style keys, and which marks may share a view.  ``bubble`` is an
alias for ``points`` plus a required ``size`` channel and is normalized
away during verification, so 23 names describe 22 marks.

Layering follows the mark tables: every spatial mark except lic layers
with the other spatial marks, and chart layering is limited to the listed
pairs (histogram+kde, line+band, points/hexbin over choropleth, ...).
"""

from __future__ import annotations

from dataclasses import dataclass, field

SPATIAL = "spatial"
CHART = "chart"

IMAGE_KINDS = ("ImageData", "Procedural")

NUM = ("number",)
NUM_DATE = ("number", "date")
ANY_FIELD = ("number", "string", "boolean", "date")
DISCRETE = ("number", "string", "date")
CATEGORICAL = ("string",)


@dataclass(frozen=True)
class MarkCapability:
    name: str
    backend_class: str
    data_kinds: tuple[str, ...]
    required: tuple[str, ...] = ()
    optional: tuple[str, ...] = ()
    channel_types: dict = field(default_factory=dict)
    styles: tuple[str, ...] = ()
    layerable_with: tuple[str, ...] = ()
    alias_of: str | None = None


def _spatial(name: str, **kw) -> MarkCapability:
    others = tuple(
        m for m in ("volume", "isosurface", "slice", "streamline") if m != name
    )
    kw.setdefault("layerable_with", others)
    return MarkCapability(name=name, backend_class=SPATIAL, data_kinds=IMAGE_KINDS, **kw)


def _chart(name: str, **kw) -> MarkCapability:
    kw.setdefault("data_kinds", ("Table",))
    return MarkCapability(name=name, backend_class=CHART, **kw)


CAPABILITIES: dict[str, MarkCapability] = {
    cap.name: cap
    for cap in (
        _spatial(
            "volume",
            optional=("field",),
            channel_types={"field": NUM},
            styles=("sample_distance", "palette", "ctf", "otf"),
        ),
        _spatial(
            "isosurface",
            optional=("field",),
            channel_types={"field": NUM},
            styles=("iso_value", "color", "opacity"),
        ),
        _spatial(
            "slice",
            optional=("field",),
            channel_types={"field": NUM},
            styles=("axes", "palette", "ctf", "quaternion", "offset", "is3DPlane"),
        ),
        _spatial(
            "streamline",
            required=("vx", "vy", "vz"),
            channel_types={"vx": NUM, "vy": NUM, "vz": NUM},
            styles=(
                "seed_bounds",
                "seed_count",
                "integration_step",
                "max_steps",
                "color",
                "tube_radius",
            ),
        ),
        MarkCapability(
            name="lic",
            backend_class=SPATIAL,
            data_kinds=IMAGE_KINDS,
            required=("vx", "vy"),
            channel_types={"vx": NUM, "vy": NUM},
            styles=("number_of_steps", "step_size", "enhanced_lic", "lic_intensity"),
            layerable_with=(),
        ),
        _chart(
            "points",
            required=("x", "y"),
            optional=("color", "size"),
            channel_types={"x": NUM_DATE, "y": NUM_DATE, "color": ANY_FIELD, "size": NUM},
            styles=("radius", "fill_color"),
            layerable_with=("hexbin", "choropleth"),
        ),
        _chart(
            "bubble",
            required=("x", "y", "size"),
            optional=("color",),
            channel_types={"x": NUM_DATE, "y": NUM_DATE, "color": ANY_FIELD, "size": NUM},
            styles=("radius", "fill_color"),
            layerable_with=("hexbin", "choropleth"),
            alias_of="points",
        ),
        _chart(
            "hexbin",
            required=("x", "y"),
            optional=("color",),
            channel_types={"x": NUM_DATE, "y": NUM_DATE, "color": NUM},
            styles=("radius", "color_scheme"),
            layerable_with=("points", "choropleth"),
        ),
        _chart(
            "heatmap",
            required=("x", "y"),
            optional=("color",),
            channel_types={"x": DISCRETE, "y": DISCRETE, "color": NUM},
            styles=("color_scheme",),
        ),
        _chart(
            "histogram",
            required=("x",),
            channel_types={"x": NUM},
            styles=("bins", "fill_color", "stroke_color"),
            layerable_with=("kde", "histogram"),
        ),
        _chart(
            "kde",
            required=("x",),
            channel_types={"x": NUM},
            styles=("bandwidth", "stroke_width", "stroke_color"),
            layerable_with=("histogram",),
        ),
        _chart(
            "boxplot",
            required=("x", "y"),
            optional=("color",),
            channel_types={"x": DISCRETE, "y": NUM, "color": ANY_FIELD},
            styles=("width", "fill_color", "stroke_color", "stroke_width"),
        ),
        _chart(
            "violin",
            required=("x", "y"),
            optional=("color",),
            channel_types={"x": DISCRETE, "y": NUM, "color": ANY_FIELD},
            styles=(
                "bandwidth",
                "fill_color",
                "stroke_color",
                "stroke_width",
                "show_median",
            ),
        ),
        _chart(
            "ridgeline",
            required=("x", "y"),
            optional=("color",),
            channel_types={"x": NUM, "y": CATEGORICAL, "color": ANY_FIELD},
            styles=(
                "bandwidth",
                "fill_color",
                "stroke_color",
                "stroke_width",
                "overlap",
                "height",
            ),
        ),
        _chart(
            "line",
            required=("x", "y"),
            optional=("color",),
            channel_types={"x": DISCRETE, "y": NUM, "color": ANY_FIELD},
            styles=("stroke_width", "stroke_color"),
            layerable_with=("line", "band"),
        ),
        _chart(
            "band",
            required=("x", "y0", "y1"),
            optional=("color", "opacity"),
            channel_types={
                "x": DISCRETE,
                "y0": NUM,
                "y1": NUM,
                "color": ANY_FIELD,
                "opacity": NUM,
            },
            styles=("fill_color", "fill_opacity", "stroke_color", "stroke_width"),
            layerable_with=("line",),
        ),
        _chart(
            "bar",
            required=("x", "y"),
            optional=("color",),
            channel_types={"x": DISCRETE, "y": NUM, "color": ANY_FIELD},
            styles=("fill_color", "stroke_color"),
        ),
        _chart(
            "pie",
            required=("label", "value"),
            optional=("color",),
            channel_types={"label": DISCRETE, "value": NUM, "color": ANY_FIELD},
            styles=("inner_radius", "outer_radius"),
        ),
        _chart(
            "chord",
            required=("source", "target", "value"),
            optional=("group",),
            channel_types={
                "source": DISCRETE,
                "target": DISCRETE,
                "value": NUM,
                "group": DISCRETE,
            },
            styles=("pad_angle", "inner_radius", "outer_radius"),
        ),
        _chart(
            "sankey",
            required=("source", "target", "value"),
            optional=("node",),
            channel_types={
                "source": DISCRETE,
                "target": DISCRETE,
                "value": NUM,
                "node": DISCRETE,
            },
            styles=(
                "node_width",
                "node_padding",
                "link_opacity",
                "align",
                "link_color",
            ),
        ),
        _chart(
            "force_graph",
            data_kinds=("Network",),
            required=("source", "target"),
            optional=("value", "color"),
            channel_types={
                "source": DISCRETE,
                "target": DISCRETE,
                "value": NUM,
                "color": ANY_FIELD,
            },
            styles=(
                "node_radius",
                "link_distance",
                "link_strength",
                "charge_strength",
                "stroke_width",
                "stroke_opacity",
                "fill_color",
                "stroke_color",
                "color_scheme",
            ),
        ),
        _chart(
            "choropleth",
            data_kinds=("Table", "GeoJSON"),
            required=("region", "value"),
            optional=("color",),
            channel_types={"region": DISCRETE, "value": NUM, "color": NUM},
            styles=("color_scheme", "stroke_color", "stroke_width", "projection"),
            layerable_with=("points", "hexbin"),
        ),
        _chart(
            "parallel_coordinates",
            required=("dimensions",),
            optional=("color",),
            channel_types={"dimensions": NUM, "color": ANY_FIELD},
            styles=("stroke_width", "stroke_opacity", "color_scheme"),
        ),
    )
}

MARK_NAMES = tuple(CAPABILITIES)

# Distinct marks: aliases collapse (bubble is points + size).
MARK_COUNT = len({c.alias_of or c.name for c in CAPABILITIES.values()})

SPATIAL_MARKS = tuple(
    n for n, c in CAPABILITIES.items() if c.backend_class == SPATIAL
)
CHART_MARKS = tuple(n for n, c in CAPABILITIES.items() if c.backend_class == CHART)


def capability(mark: str) -> MarkCapability | None:
    return CAPABILITIES.get(mark)


def normalize_mark(mark: str) -> str:
    cap = CAPABILITIES.get(mark)
    return cap.alias_of if cap and cap.alias_of else mark


def backend_class_of(mark: str) -> str:
    return CAPABILITIES[mark].backend_class


def can_layer(a: str, b: str) -> bool:
    """True when marks ``a`` and ``b`` may share a view (order-independent)."""
    ca, cb = CAPABILITIES.get(a), CAPABILITIES.get(b)
    if ca is None or cb is None:
        return False
    return b in ca.layerable_with or a in cb.layerable_with
