"""Realization stage: verified ProgramSpec -> fully-defaulted RenderIR.

Every view gets a backend, every omitted style a deterministic value,
every mark its generated-control set, and every declared link a runtime
coordination binding.  The output is a pure function of (spec, metas):
repeated runs produce identical structures, and the canonical JSON
emission is byte-identical.

Rounding: computed defaults are rounded to 4 decimals, except opacity
transfer function interior stop positions which use 2 (the precision of
their documented worked values).  First/last transfer function stops are
pinned exactly to the probed [min, max].  Author-specified style values
pass through untouched.

Backend tags serialize as the wire constants "d3", "vtkjs" and "multi".
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .capabilities import CAPABILITIES, CHART, SPATIAL
from .palettes import CATEGORY10, PALETTES, PALETTE_NAMES, categorical_colors
from .probe import DatasetMeta
from .verify import ProgramSpec, SpecLayer, SpecView, _Collector, synthesize_func_meta

WIRE_TAGS = {CHART: "d3", SPATIAL: "vtkjs", "multi": "multi"}
_WIRE_TO_CLASS = {v: k for k, v in WIRE_TAGS.items()}

ISOSURFACE_COLOR = "#cccccc"
STREAMLINE_COLOR = "#ffffff"
DEFAULT_SCHEME = "viridis"

SAMPLE_DISTANCE_SLIDER = {"min": 0.1, "max": 2, "default": 0.7, "step": 0.01}

_AXIS_DIM = {"XY": 2, "XZ": 1, "YZ": 0}

CHART_STYLE_DEFAULTS: dict[str, dict] = {
    "points": {"radius": 3, "fill_color": "#1f77b4"},
    "hexbin": {"radius": 10, "color_scheme": DEFAULT_SCHEME},
    "heatmap": {"color_scheme": DEFAULT_SCHEME},
    "histogram": {"bins": 30, "fill_color": "#1f77b4", "stroke_color": "#ffffff"},
    "kde": {"stroke_width": 1.5, "stroke_color": "#1f77b4"},
    "boxplot": {
        "width": 0.5,
        "fill_color": "#1f77b4",
        "stroke_color": "#333333",
        "stroke_width": 1,
    },
    "violin": {
        "fill_color": "#1f77b4",
        "stroke_color": "#333333",
        "stroke_width": 1,
        "show_median": True,
    },
    "ridgeline": {
        "fill_color": "#1f77b4",
        "stroke_color": "#ffffff",
        "stroke_width": 1,
        "overlap": 0.7,
        "height": 60,
    },
    "line": {"stroke_width": 1.5, "stroke_color": "#1f77b4"},
    "band": {
        "fill_color": "#1f77b4",
        "fill_opacity": 0.3,
        "stroke_color": "#1f77b4",
        "stroke_width": 1,
    },
    "bar": {"fill_color": "#1f77b4", "stroke_color": "#ffffff"},
    "pie": {"inner_radius": 0, "outer_radius": 120},
    "chord": {"pad_angle": 0.05, "inner_radius": 190, "outer_radius": 200},
    "sankey": {
        "node_width": 24,
        "node_padding": 8,
        "link_opacity": 0.5,
        "align": "justify",
        "link_color": "source",
    },
    "force_graph": {
        "node_radius": 5,
        "link_distance": 30,
        "link_strength": 1.0,
        "charge_strength": -30,
        "stroke_width": 1.5,
        "stroke_opacity": 0.6,
        "fill_color": "#1f77b4",
        "stroke_color": "#999999",
        "color_scheme": "category10",
    },
    "choropleth": {
        "color_scheme": "Greens",
        "stroke_color": "#ffffff",
        "stroke_width": 0.5,
        "projection": "mercator",
    },
    "parallel_coordinates": {
        "stroke_width": 1,
        "stroke_opacity": 0.5,
        "color_scheme": "category10",
    },
}

# Which numeric field feeds the density bandwidth rule, per mark.
_BANDWIDTH_FIELD = {"kde": "x", "violin": "y", "ridgeline": "x"}


@dataclass(frozen=True)
class RenderIR:
    backend: str  # chart | spatial | multi
    views: tuple = ()
    links: tuple = ()
    sources: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "backend": WIRE_TAGS[self.backend],
            "views": list(self.views),
            "links": list(self.links),
            "sources": dict(self.sources),
        }

    @staticmethod
    def from_dict(doc: dict) -> "RenderIR":
        return RenderIR(
            backend=_WIRE_TO_CLASS[doc["backend"]],
            views=tuple(doc.get("views", [])),
            links=tuple(doc.get("links", [])),
            sources=dict(doc.get("sources", {})),
        )


def _round(x: float, places: int = 4) -> float:
    return round(float(x), places)


def route_backend(view: SpecView) -> str:
    """Backend class of a verified (hence homogeneous) view."""
    classes = {CAPABILITIES[layer.mark].backend_class for layer in view.layers}
    return classes.pop() if classes else CHART


def _first_number_field(meta: DatasetMeta) -> str | None:
    for var in meta.variables:
        if var.data_type == "number":
            return var.name
    return None


def _field_range(meta: DatasetMeta, name: str | None) -> tuple[float, float]:
    if name is not None:
        var = meta.variable(name)
        if var is not None and var.range is not None:
            return var.range
    return (0.0, 1.0)


def ctf_stops(palette: str, lo: float, hi: float) -> list[dict]:
    """Palette anchors mapped linearly onto [lo, hi]; endpoints exact."""
    anchors = PALETTES.get(palette, PALETTES[DEFAULT_SCHEME])
    n = len(anchors)
    stops = []
    for i, (r, g, b) in enumerate(anchors):
        if i == 0:
            s: float = lo
        elif i == n - 1:
            s = hi
        else:
            s = min(max(_round(lo + (hi - lo) * i / (n - 1)), lo), hi)
        stops.append({"r": _round(r), "g": _round(g), "b": _round(b), "s": s})
    return stops


def otf_stops(lo: float, hi: float) -> list[dict]:
    """Opacity ramp at relative positions {0, 0.35, 1} with alphas {0, 0.3, 0.9}."""
    mid = min(max(_round(lo + 0.35 * (hi - lo), 2), lo), hi)
    return [
        {"a": 0, "s": lo},
        {"a": 0.3, "s": mid},
        {"a": 0.9, "s": hi},
    ]


def _silverman_bandwidth(meta: DatasetMeta, field_name: str | None) -> float:
    var = meta.variable(field_name) if field_name else None
    if var is None or var.stddev is None or not var.count:
        return 1.0
    if var.stddev == 0:
        return 0.0
    return _round(1.06 * var.stddev * var.count ** (-1 / 5))


def _merge_style(mark: str, style: dict, defaults: dict) -> dict:
    """Author values win byte-for-byte; defaults fill the remaining keys."""
    merged: dict = {}
    for key in CAPABILITIES[mark].styles:
        if key in style:
            merged[key] = style[key]
        elif key in defaults:
            merged[key] = defaults[key]
    return merged


def resolve_spatial_defaults(
    layer: SpecLayer,
    meta: DatasetMeta,
    url: str | None = None,
    has_siblings: bool = False,
) -> dict:
    """Realize one spatial layer: concrete values for every style slot.

    Streamline seed bounds stay null (resolved at mount, over the full
    extent) unless the author set them.
    """
    mark = layer.mark
    out: dict = {"type": mark, "id": layer.id, "from": layer.source}

    if mark in ("volume", "isosurface", "slice"):
        fname = layer.encode.get("field") or _first_number_field(meta)
        lo, hi = _field_range(meta, fname)
        out["field"] = fname
        out["url"] = url
        out["range"] = [lo, hi]

    if mark == "volume":
        style = _merge_style(mark, layer.style, {
            "sample_distance": 0.7,
            "palette": DEFAULT_SCHEME,
        })
        style.setdefault("ctf", ctf_stops(style["palette"], lo, hi))
        style.setdefault("otf", otf_stops(lo, hi))
        style = {k: style[k] for k in CAPABILITIES[mark].styles}
        out["sampleDistance"] = style["sample_distance"]
        out["ctf"] = style["ctf"]
        out["otf"] = style["otf"]
        out["_palette"] = style["palette"]
        out["style"] = style
        return out

    if mark == "isosurface":
        style = _merge_style(mark, layer.style, {
            "iso_value": _round(lo + (hi - lo) / 3),
            "color": ISOSURFACE_COLOR,
            "opacity": 1.0,
        })
        out["iso_value"] = style["iso_value"]
        out["color"] = style["color"]
        out["opacity"] = style["opacity"]
        out["style"] = style
        return out

    if mark == "slice":
        axes = layer.style.get("axes", ["XY"])
        if isinstance(axes, str):
            axes = [axes]
        style = _merge_style(mark, layer.style, {
            "palette": DEFAULT_SCHEME,
            "quaternion": [0, 0, 0, 1],
            "offset": 0.0,
        })
        style["axes"] = list(axes)
        style.setdefault("ctf", ctf_stops(style["palette"], lo, hi))
        # A lone slice layer with a single axis renders as a flat image;
        # any sibling layer or extra axis forces the 3D scene.  A single
        # oblique plane stays 2D unless the author forces is3DPlane.
        mode3d = has_siblings or len(axes) != 1
        if "is3DPlane" in layer.style:
            is3d_plane = layer.style["is3DPlane"]
            if "oblique" in axes and is3d_plane:
                mode3d = True
        else:
            is3d_plane = bool(mode3d and "oblique" in axes)
        style["is3DPlane"] = is3d_plane
        style = {k: style[k] for k in CAPABILITIES[mark].styles}
        out["axes"] = style["axes"]
        out["mode"] = "3d" if mode3d else "2d"
        out["ctf"] = style["ctf"]
        out["_palette"] = style["palette"]
        out["style"] = style
        return out

    if mark == "streamline":
        style = _merge_style(mark, layer.style, {
            "seed_bounds": None,
            "seed_count": 100,
            "integration_step": 0.5,
            "max_steps": 1000,
            "color": STREAMLINE_COLOR,
            "tube_radius": 0,
        })
        out["encode"] = dict(layer.encode)
        out["url"] = url
        out["integrator"] = {
            "step": style["integration_step"],
            "max_steps": style["max_steps"],
        }
        region: dict = {"type": "box"}
        if style["seed_bounds"] is not None:
            region["bounds"] = style["seed_bounds"]
        out["seedSpec"] = {"n": style["seed_count"], "region": region}
        out["style"] = style
        return out

    if mark == "lic":
        style = _merge_style(mark, layer.style, {
            "number_of_steps": 50,
            "step_size": 1.0,
            "enhanced_lic": True,
            "lic_intensity": 0.8,
        })
        out["encode"] = dict(layer.encode)
        out["url"] = url
        out["style"] = style
        return out

    raise ValueError(f"not a spatial mark: {mark}")


def _domains(layer: SpecLayer, meta: DatasetMeta) -> dict:
    domains: dict = {}
    for channel, value in layer.encode.items():
        names = value if isinstance(value, list) else [value]
        spans = []
        for name in names:
            var = meta.variable(name) if isinstance(name, str) else None
            if var is None:
                continue
            if var.range is not None:
                spans.append(list(var.range))
            elif var.categories is not None:
                spans.append(list(var.categories))
        if not spans:
            continue
        if isinstance(value, list):
            domains[channel] = {n: s for n, s in zip(names, spans)}
        else:
            domains[channel] = spans[0]
    return domains


def _color_scale(layer: SpecLayer, meta: DatasetMeta, style: dict) -> dict | None:
    color = layer.encode.get("color")
    if not isinstance(color, str):
        return None
    var = meta.variable(color)
    if var is None:
        return None
    if var.data_type == "number" and var.range is not None:
        return {
            "field": color,
            "type": "linear",
            "domain": list(var.range),
            "scheme": style.get("color_scheme", DEFAULT_SCHEME),
        }
    categories = tuple(var.categories or ())
    assignment = categorical_colors(categories)
    return {
        "field": color,
        "type": "categorical",
        "domain": sorted(categories),
        "range": [assignment[c] for c in sorted(categories)],
    }


def resolve_chart_defaults(
    layer: SpecLayer,
    meta: DatasetMeta,
    url: str | None = None,
    geo_url: str | None = None,
) -> dict:
    """Realize one chart layer: style defaults, scales, color assignment."""
    mark = layer.mark
    defaults = dict(CHART_STYLE_DEFAULTS.get(mark, {}))
    if mark in _BANDWIDTH_FIELD:
        fname = layer.encode.get(_BANDWIDTH_FIELD[mark])
        if isinstance(fname, list):
            fname = fname[0] if fname else None
        defaults["bandwidth"] = _silverman_bandwidth(meta, fname)
    style = _merge_style(mark, layer.style, defaults)

    out: dict = {
        "type": mark,
        "id": layer.id,
        "from": layer.source,
        "data": url,
        "encoding": dict(layer.encode),
        "style": style,
    }
    if layer.geo is not None:
        out["geo"] = layer.geo
        out["geo_data"] = geo_url
    if layer.where is not None:
        out["where"] = layer.where
    domains = _domains(layer, meta)
    if domains:
        out["domains"] = domains
    scale = _color_scale(layer, meta, style)
    if scale is not None:
        out["color_scale"] = scale
    return out


# -- controls -----------------------------------------------------------------


def _slider(value, lo, hi, step, edits=None, **flags) -> dict:
    ctl = {"kind": "slider", "value": value, "min": lo, "max": hi, "step": step}
    if edits:
        ctl["edits"] = edits
    ctl.update({k: True for k, v in flags.items() if v})
    return ctl


def _color_ctl(value, edits=None) -> dict:
    ctl = {"kind": "color", "value": value}
    if edits:
        ctl["edits"] = edits
    return ctl


def _layer_controls(layer: dict, meta: DatasetMeta) -> dict:
    mark = layer["type"]
    style = layer.get("style", {})
    controls: dict = {}

    if mark == "isosurface":
        lo, hi = layer["range"]
        step = _round((hi - lo) / 100) or 0.01
        controls["isoValue"] = _slider(style["iso_value"], lo, hi, step, "iso_value")
        controls["color"] = {
            "kind": "rgba",
            "value": style["color"],
            "opacity": style["opacity"],
            "edits": "color",
        }
        controls["materialPreset"] = {
            "kind": "dropdown",
            "value": "matte",
            "options": ["matte", "glossy", "metallic", "custom"],
            "deferred": True,
        }
        for name, value in (("specular", 0.3), ("diffuse", 0.7), ("ambient", 0.2)):
            controls[name] = _slider(value, 0, 1, 0.01, deferred=True)
    elif mark == "slice":
        dims = meta.dimensions or (1, 1, 1)
        for axis in layer["axes"]:
            if axis in _AXIS_DIM:
                extent = dims[_AXIS_DIM[axis]]
                controls[f"sliceIndex{axis}"] = _slider(
                    extent // 2, 0, max(extent - 1, 0), 1
                )
                controls[f"visibility{axis}"] = {
                    "kind": "toggle",
                    "value": True,
                    "deferred": True,
                }
        lo, hi = layer["range"]
        controls["colorRange"] = {
            "kind": "range",
            "value": [lo, hi],
            "min": lo,
            "max": hi,
            "deferred": True,
        }
        if "oblique" in layer["axes"]:
            controls["rotationGizmo"] = {"kind": "gizmo", "deferred": True}
            controls["obliqueOffset"] = _slider(
                style["offset"], -1, 1, 0.01, deferred=True
            )
    elif mark == "streamline":
        dims = meta.dimensions or (1, 1, 1)
        controls["color"] = _color_ctl(style["color"], "color")
        controls["count"] = _slider(style["seed_count"], 1, 1000, 1, "seed_count")
        controls["integrationStep"] = _slider(
            style["integration_step"], 0.01, 5, 0.01, "integration_step", confirm=True
        )
        controls["maxSteps"] = _slider(style["max_steps"], 10, 10000, 10, "max_steps")
        controls["tubeRadius"] = _slider(style["tube_radius"], 0, 5, 0.1, "tube_radius")
        for axis_name, dim in zip(("seedBoxX", "seedBoxY", "seedBoxZ"), dims):
            controls[axis_name] = {
                "kind": "range",
                "min": 0,
                "max": dim,
                "deferred": True,
                "confirm": True,
            }
        controls["recalculate"] = {"kind": "button", "deferred": True}
    elif mark == "lic":
        controls["stepCount"] = _slider(
            style["number_of_steps"], 1, 500, 1, "number_of_steps"
        )
        controls["stepSize"] = _slider(style["step_size"], 0.1, 10, 0.1, "step_size")
        controls["enhancedLic"] = {
            "kind": "toggle",
            "value": style["enhanced_lic"],
            "edits": "enhanced_lic",
        }
        controls["licIntensity"] = _slider(
            style["lic_intensity"], 0, 1, 0.01, "lic_intensity"
        )
    elif mark == "histogram":
        controls["bins"] = _slider(style["bins"], 5, 100, 1, "bins")
        controls["fillColor"] = _color_ctl(style["fill_color"], "fill_color")
    elif mark == "kde":
        controls["strokeColor"] = _color_ctl(style["stroke_color"], "stroke_color")
    elif mark in ("points", "line", "bar", "boxplot", "violin", "ridgeline"):
        scale = layer.get("color_scale")
        if scale is not None and scale["type"] == "categorical":
            controls["categories"] = {
                "kind": "categories",
                "value": dict(zip(scale["domain"], scale["range"])),
            }
        elif mark in ("line",):
            controls["strokeColor"] = _color_ctl(style["stroke_color"], "stroke_color")
        else:
            controls["fillColor"] = _color_ctl(style["fill_color"], "fill_color")
    elif mark == "band":
        controls["fillColor"] = _color_ctl(style["fill_color"], "fill_color")
    elif mark in ("hexbin", "choropleth"):
        controls["palette"] = {
            "kind": "dropdown",
            "value": style["color_scheme"],
            "options": list(PALETTE_NAMES),
            "edits": "color_scheme",
        }
    elif mark == "heatmap":
        controls["palette"] = {
            "kind": "dropdown",
            "value": style["color_scheme"],
            "options": list(PALETTE_NAMES),
            "edits": "color_scheme",
        }
        controls["flipX"] = {"kind": "toggle", "value": False}
        controls["flipY"] = {"kind": "toggle", "value": False}
    elif mark in ("pie", "chord"):
        scale = layer.get("color_scale")
        domain: list = []
        if scale is not None and scale["type"] == "categorical":
            domain = scale["domain"]
        controls["categories"] = {
            "kind": "categories",
            "value": dict(zip(domain, CATEGORY10)) if domain else {},
        }
    elif mark == "sankey":
        controls["linkColorMode"] = {
            "kind": "dropdown",
            "value": style["link_color"],
            "options": ["static", "source", "target", "interpolate"],
            "edits": "link_color",
        }
    elif mark == "force_graph":
        controls["nodeRadius"] = _slider(style["node_radius"], 1, 30, 1, "node_radius")
        controls["linkDistance"] = _slider(
            style["link_distance"], 5, 200, 1, "link_distance"
        )
        controls["linkStrength"] = _slider(
            style["link_strength"], 0, 2, 0.01, "link_strength"
        )
        controls["chargeStrength"] = _slider(
            style["charge_strength"], -200, 0, 1, "charge_strength"
        )
        controls["pathFields"] = {"kind": "fields", "value": [], "deferred": True}
        scale = layer.get("color_scale")
        if scale is not None and scale["type"] == "categorical":
            controls["categories"] = {
                "kind": "categories",
                "value": dict(zip(scale["domain"], scale["range"])),
            }
    elif mark == "parallel_coordinates":
        scale = layer.get("color_scale")
        if scale is not None and scale["type"] == "categorical":
            controls["categories"] = {
                "kind": "categories",
                "value": dict(zip(scale["domain"], scale["range"])),
            }
        else:
            controls["palette"] = {
                "kind": "dropdown",
                "value": style["color_scheme"],
                "options": list(PALETTE_NAMES),
                "edits": "color_scheme",
            }
    return controls


_CHART_COLOR_SURFACE = {
    "histogram": ("bins", "fill_color"),
    "points": ("fill_color",),
    "kde": ("stroke_color",),
    "line": ("stroke_color",),
    "bar": ("fill_color",),
    "boxplot": ("fill_color",),
    "violin": ("fill_color",),
    "ridgeline": ("fill_color",),
    "band": ("fill_color",),
    "hexbin": ("color_scheme",),
    "heatmap": ("color_scheme",),
    "choropleth": ("color_scheme",),
    "parallel_coordinates": ("color_scheme",),
    "sankey": ("link_color",),
    "force_graph": ("fill_color",),
}


def build_controls(
    view_layers: list[dict],
    backend_class: str,
    metas_by_layer: dict,
    view_mode: str,
) -> dict:
    """Assemble the per-view control specification.

    Spatial views carry the implicit camera, the shared transfer-function
    editors when a tf-capable layer is present, and per-layer controls;
    chart views mirror their color-ish defaults under ``colors``.
    """
    controls: dict = {}
    if backend_class == SPATIAL:
        controls["camera"] = {"mode": "2d" if view_mode == "2d" else "trackball"}
        tf_layer = next(
            (l for l in view_layers if l["type"] in ("volume", "slice")), None
        )
        volume = next((l for l in view_layers if l["type"] == "volume"), None)
        if volume is not None:
            slider = dict(SAMPLE_DISTANCE_SLIDER)
            slider["default"] = volume["sampleDistance"]
            controls["sampleDistance"] = slider
        if tf_layer is not None:
            controls["palette"] = tf_layer["_palette"]
            controls["ctf_stops"] = tf_layer["ctf"]
            if volume is not None:
                controls["otf_stops"] = volume["otf"]
    else:
        colors: dict = {}
        for layer in view_layers:
            surface = _CHART_COLOR_SURFACE.get(layer["type"], ())
            entry = {
                k: layer["style"][k] for k in surface if k in layer["style"]
            }
            colors[layer["id"]] = entry
        controls["colors"] = colors
        controls["palette"] = DEFAULT_SCHEME

    controls["layerControls"] = {
        layer["id"]: _layer_controls(layer, metas_by_layer[layer["id"]])
        for layer in view_layers
    }
    return controls


# -- links ---------------------------------------------------------------------


def compile_links(spec: ProgramSpec) -> list[dict]:
    """Lower declared links and interactions to runtime coordination specs.

    Selection links become brush-filter channels (emitters are the views
    whose interactions bind the selection); tf and slice links become
    shared-tf and slice-index channels.  Point-highlight channels are
    generated automatically for force_graph and heatmap views, and a
    shared-color channel is added when brush-linked views color-encode
    the same field of the same source.
    """
    bindings: list[dict] = []

    emitters_by_selection: dict[str, list[str]] = {}
    for view in spec.views:
        for inter in view.interactions:
            for act in inter.actions:
                emitters_by_selection.setdefault(act.selection, [])
                if view.id not in emitters_by_selection[act.selection]:
                    emitters_by_selection[act.selection].append(view.id)

    for view in spec.views:
        for link in view.links:
            kind = link.kind
            if kind is None:
                continue
            members = list(link.views)
            if link.target is not None and link.target not in members:
                members.append(link.target)
            payload = link.payload if isinstance(link.payload, str) else ""
            if kind == "selection":
                binding = {
                    "kind": "brush-filter",
                    "channel": payload,
                    "emitters": emitters_by_selection.get(payload, []),
                    "members": members,
                }
            elif kind == "tf":
                binding = {"kind": "shared-tf", "channel": payload, "members": members}
            else:
                binding = {
                    "kind": "slice-index",
                    "channel": payload,
                    "members": members,
                    "axes": list(link.axes or ()),
                }
            bindings.append(binding)

    # Automatic point selection for force-directed graphs and heatmaps.
    auto_marks = {"force_graph", "heatmap"}
    chart_views = [
        v for v in spec.views
        if v.layers and CAPABILITIES[v.layers[0].mark].backend_class == CHART
    ]
    for view in spec.views:
        marks = {layer.mark for layer in view.layers}
        if not (marks & auto_marks):
            continue
        sources = {layer.source for layer in view.layers}
        followers = [
            v.id
            for v in chart_views
            if v.id != view.id and any(l.source in sources for l in v.layers)
        ]
        bindings.append(
            {
                "kind": "point-highlight",
                "channel": f"point_{view.id}",
                "emitters": [view.id],
                "members": [view.id, *followers],
            }
        )

    # Shared categorical color across brush-linked views of one source.
    for binding in list(bindings):
        if binding["kind"] != "brush-filter":
            continue
        fields_seen: dict[tuple[str, str], list[str]] = {}
        for view in spec.views:
            if view.id not in binding["members"]:
                continue
            for layer in view.layers:
                color = layer.encode.get("color")
                if isinstance(color, str):
                    key = (layer.source, color)
                    fields_seen.setdefault(key, [])
                    if view.id not in fields_seen[key]:
                        fields_seen[key].append(view.id)
        for (source, color_field), members in fields_seen.items():
            if len(members) >= 2:
                bindings.append(
                    {
                        "kind": "shared-color",
                        "channel": f"color_{source}_{color_field}",
                        "members": members,
                    }
                )
    return bindings


# -- top level -------------------------------------------------------------------


def _resolved_meta(spec: ProgramSpec, metas: dict, name: str) -> DatasetMeta:
    source = spec.data[name]
    if source.kind == "Procedural":
        return synthesize_func_meta(source.args, name, _Collector())
    return metas[name]


def realize(spec: ProgramSpec, metas: dict) -> RenderIR:
    """Assign backends, resolve defaults, build controls, compile links."""
    links = compile_links(spec)
    channel_members: dict[str, list] = {}
    for binding in links:
        for member in binding["members"]:
            channel_members.setdefault(member, []).append(binding["channel"])

    realized_views = []
    classes = set()
    for view in spec.views:
        backend_class = route_backend(view)
        classes.add(backend_class)
        metas_by_layer: dict[str, DatasetMeta] = {}
        layers: list[dict] = []

        slice_only = (
            len(view.layers) == 1
            and view.layers[0].mark == "slice"
        )
        lic_only = all(layer.mark == "lic" for layer in view.layers)

        for layer in view.layers:
            meta = _resolved_meta(spec, metas, layer.source)
            metas_by_layer[layer.id] = meta
            url = spec.data[layer.source].path
            if backend_class == SPATIAL:
                realized = resolve_spatial_defaults(
                    layer, meta, url=url, has_siblings=len(view.layers) > 1
                )
            else:
                geo_url = (
                    spec.data[layer.geo].path if layer.geo in spec.data else None
                )
                realized = resolve_chart_defaults(
                    layer, meta, url=url, geo_url=geo_url
                )
            layers.append(realized)

        if backend_class == SPATIAL:
            if slice_only:
                view_mode = layers[0]["mode"]
            elif lic_only and view.layers:
                view_mode = "2d"
            else:
                view_mode = "3d"
        else:
            view_mode = "flat"

        controls = build_controls(layers, backend_class, metas_by_layer, view_mode)
        view_dict: dict = {
            "viewId": view.id,
            "backend": WIRE_TAGS[backend_class],
        }
        if backend_class == SPATIAL:
            view_dict["mode"] = view_mode
        view_dict["layers"] = layers
        view_dict["controls"] = controls
        view_dict["linkBindings"] = channel_members.get(view.id, [])
        realized_views.append(view_dict)

    backend = "multi" if len(classes) > 1 else (classes.pop() if classes else CHART)

    sources = {}
    for name, source in spec.data.items():
        fmt = source.args.get("format")
        if not isinstance(fmt, str):
            fmt = _infer_format(source.path, source.kind)
        sources[name] = {"kind": source.kind, "format": fmt, "url": source.path}

    return RenderIR(
        backend=backend,
        views=tuple(realized_views),
        links=tuple(links),
        sources=sources,
    )


def _infer_format(path: str | None, kind: str) -> str:
    if path:
        lowered = path.lower()
        for ext in ("vti", "csv", "geojson", "json"):
            if lowered.endswith("." + ext):
                return ext
    return {
        "ImageData": "vti",
        "Table": "csv",
        "Network": "json",
        "GeoJSON": "geojson",
        "Procedural": "func",
    }[kind]
