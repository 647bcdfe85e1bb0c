from __future__ import annotations

import random

import pytest

from visdsl.capabilities import CAPABILITIES
from visdsl.generator import generate_program
from visdsl.parser import parse_brace, parse_indent
from visdsl.probe import DatasetMeta, VariableDesc
from visdsl.realize import (
    ctf_stops,
    otf_stops,
    realize,
    route_backend,
)
from visdsl.verify import verify

from .conftest import TEASER_INDENT


def _num(name, rng=(0.0, 10.0), count=100, stddev=2.0):
    return VariableDesc(
        name=name, data_type="number", range=rng, count=count, stddev=stddev
    )


def _cat(name, cats):
    return VariableDesc(name=name, data_type="string", categories=cats, count=60)


IMG_META = DatasetMeta(
    kind="ImageData",
    dimensions=(10, 12, 14),
    variables=(_num("ux"), _num("uy"), _num("uz"), _num("density", (0.0, 300.0))),
)

TBL_META = DatasetMeta(
    kind="Table",
    variables=(
        _num("c1"),
        _num("c2", (5.0, 9.0)),
        _cat("species", ("setosa", "versicolor", "virginica")),
    ),
)


def _realized(source_text, metas):
    program = parse_brace(source_text)
    spec, diags = verify(program, metas)
    assert diags == [], [d.message for d in diags]
    return realize(spec, metas).to_dict()


def _spatial_view(layer_body: str) -> str:
    return (
        'vis { data { v: img("a.vti", format: "vti"); } '
        f'view "sp" {{ {layer_body} }} }}'
    )


def test_route_backend_by_mark_class(teaser_metas):
    program = parse_indent(TEASER_INDENT)
    spec, _ = verify(program, teaser_metas)
    assert route_backend(spec.views[0]) == "spatial"
    assert route_backend(spec.views[1]) == "chart"
    ir = realize(spec, teaser_metas)
    assert ir.backend == "multi"
    doc = ir.to_dict()
    assert doc["backend"] == "multi"
    assert doc["views"][0]["backend"] == "vtkjs"
    assert doc["views"][1]["backend"] == "d3"


def test_teaser_worked_values(teaser_metas):
    program = parse_indent(TEASER_INDENT)
    spec, _ = verify(program, teaser_metas)
    doc = realize(spec, teaser_metas).to_dict()
    volume = doc["views"][0]["layers"][0]
    assert volume["field"] == "vorticity"
    assert volume["sampleDistance"] == 0.7
    assert volume["range"] == [0.0, 28.82]
    assert volume["otf"] == [
        {"a": 0, "s": 0.0},
        {"a": 0.3, "s": 10.09},
        {"a": 0.9, "s": 28.82},
    ]
    assert volume["_palette"] == "viridis"
    head = volume["ctf"][0]
    assert (head["r"], head["g"], head["b"]) == (0.267, 0.0049, 0.3294)
    controls = doc["views"][0]["controls"]
    assert controls["sampleDistance"] == {
        "min": 0.1, "max": 2, "default": 0.7, "step": 0.01,
    }
    stream = doc["views"][0]["layers"][1]
    assert stream["integrator"] == {"step": 0.5, "max_steps": 1000}
    assert stream["seedSpec"] == {"n": 100, "region": {"type": "box"}}
    lc = controls["layerControls"]["volume_streamline:streamline#1"]
    assert lc["seedBoxX"]["max"] == 65
    hist_controls = doc["views"][1]["controls"]["colors"]["histogram:histogram#0"]
    assert hist_controls == {"bins": 30, "fill_color": "#1f77b4"}


def test_transfer_function_endpoints_pin_to_range():
    stops = ctf_stops("viridis", 2.5, 9.75)
    assert stops[0]["s"] == 2.5 and stops[-1]["s"] == 9.75
    assert all(a["s"] <= b["s"] for a, b in zip(stops, stops[1:]))
    ramp = otf_stops(2.5, 9.75)
    assert ramp[0]["s"] == 2.5 and ramp[-1]["s"] == 9.75
    assert [s["a"] for s in ramp] == [0, 0.3, 0.9]


def test_otf_relative_position():
    ramp = otf_stops(0.0, 28.82)
    assert ramp[1]["s"] == pytest.approx(0.35 * 28.82, abs=0.01)


def test_isosurface_default_third_of_range():
    doc = _realized(_spatial_view(
        'layer { from: v; mark: isosurface; encode: { field: "density" }; }'
    ), {"v": IMG_META})
    layer = doc["views"][0]["layers"][0]
    assert layer["iso_value"] == 100.0
    assert layer["opacity"] == 1.0
    assert layer["style"]["color"] == layer["color"]


def test_user_override_dominates():
    doc = _realized(_spatial_view(
        'layer { from: v; mark: streamline; encode: { vx: "ux", vy: "uy", vz: "uz" }; '
        'style: { seed_count: 250 }; }'
    ), {"v": IMG_META})
    layer = doc["views"][0]["layers"][0]
    assert layer["seedSpec"]["n"] == 250
    assert layer["style"]["seed_count"] == 250
    assert layer["style"]["integration_step"] == 0.5
    assert layer["style"]["max_steps"] == 1000
    assert layer["style"]["tube_radius"] == 0
    assert layer["style"]["color"] == "#ffffff"


def test_slice_mode_rules():
    single = _realized(_spatial_view(
        'layer { from: v; mark: slice; }'
    ), {"v": IMG_META})
    assert single["views"][0]["layers"][0]["axes"] == ["XY"]
    assert single["views"][0]["layers"][0]["mode"] == "2d"
    assert single["views"][0]["mode"] == "2d"
    assert single["views"][0]["controls"]["camera"] == {"mode": "2d"}

    multi_axis = _realized(_spatial_view(
        'layer { from: v; mark: slice; style: { axes: ["XY", "XZ"] }; }'
    ), {"v": IMG_META})
    assert multi_axis["views"][0]["layers"][0]["mode"] == "3d"

    with_sibling = _realized(_spatial_view(
        'layer { from: v; mark: volume; } layer { from: v; mark: slice; }'
    ), {"v": IMG_META})
    assert with_sibling["views"][0]["layers"][1]["mode"] == "3d"
    assert with_sibling["views"][0]["controls"]["camera"] == {"mode": "trackball"}

    oblique = _realized(_spatial_view(
        'layer { from: v; mark: slice; style: { axes: ["oblique"] }; }'
    ), {"v": IMG_META})
    assert oblique["views"][0]["layers"][0]["mode"] == "2d"
    assert oblique["views"][0]["layers"][0]["style"]["is3DPlane"] is False

    forced = _realized(_spatial_view(
        'layer { from: v; mark: slice; style: { axes: ["oblique"], is3DPlane: true }; }'
    ), {"v": IMG_META})
    assert forced["views"][0]["layers"][0]["mode"] == "3d"


def test_slice_index_controls_follow_dimensions():
    doc = _realized(_spatial_view(
        'layer { from: v; mark: slice; style: { axes: ["XY", "YZ"] }; }'
    ), {"v": IMG_META})
    lc = doc["views"][0]["controls"]["layerControls"]["sp:slice#0"]
    # XY slices index along z (14 samples), YZ along x (10 samples).
    assert lc["sliceIndexXY"]["max"] == 13 and lc["sliceIndexXY"]["value"] == 7
    assert lc["sliceIndexYZ"]["max"] == 9 and lc["sliceIndexYZ"]["value"] == 5


def test_lic_defaults_and_controls():
    doc = _realized(_spatial_view(
        'layer { from: v; mark: lic; encode: { vx: "ux", vy: "uy" }; }'
    ), {"v": IMG_META})
    layer = doc["views"][0]["layers"][0]
    assert layer["style"] == {
        "number_of_steps": 50,
        "step_size": 1.0,
        "enhanced_lic": True,
        "lic_intensity": 0.8,
    }
    lc = doc["views"][0]["controls"]["layerControls"]["sp:lic#0"]
    assert len(lc) == 4
    assert not any(ctl.get("deferred") for ctl in lc.values())
    assert doc["views"][0]["mode"] == "2d"


def test_streamline_controls_inventory():
    doc = _realized(_spatial_view(
        'layer { from: v; mark: streamline; encode: { vx: "ux", vy: "uy", vz: "uz" }; }'
    ), {"v": IMG_META})
    lc = doc["views"][0]["controls"]["layerControls"]["sp:streamline#0"]
    assert list(lc) == [
        "color", "count", "integrationStep", "maxSteps", "tubeRadius",
        "seedBoxX", "seedBoxY", "seedBoxZ", "recalculate",
    ]
    deferred = [k for k, ctl in lc.items() if ctl.get("deferred")]
    assert deferred == ["seedBoxX", "seedBoxY", "seedBoxZ", "recalculate"]
    confirm = [k for k, ctl in lc.items() if ctl.get("confirm")]
    assert confirm == ["integrationStep", "seedBoxX", "seedBoxY", "seedBoxZ"]


def test_histogram_controls_inventory():
    doc = _realized(
        'vis { data { t: tbl("a.csv"); } view "h" { layer { from: t; mark: histogram; encode: { x: "c1" }; } } }',
        {"t": TBL_META},
    )
    lc = doc["views"][0]["controls"]["layerControls"]["h:histogram#0"]
    assert list(lc) == ["bins", "fillColor"]
    assert lc["bins"] == {
        "kind": "slider", "value": 30, "min": 5, "max": 100, "step": 1,
        "edits": "bins",
    }


def test_chart_explicit_fill_preserved():
    doc = _realized(
        'vis { data { t: tbl("a.csv"); } view "b" { layer { from: t; mark: bar; encode: { x: "species", y: "c1" }; style: { fill_color: "#123456" }; } } }',
        {"t": TBL_META},
    )
    assert doc["views"][0]["layers"][0]["style"]["fill_color"] == "#123456"


def test_categorical_colors_lexicographic():
    doc = _realized(
        'vis { data { t: tbl("a.csv"); } view "p" { layer { from: t; mark: points; encode: { x: "c1", y: "c2", color: "species" }; } } }',
        {"t": TBL_META},
    )
    scale = doc["views"][0]["layers"][0]["color_scale"]
    assert scale["type"] == "categorical"
    assert scale["domain"] == ["setosa", "versicolor", "virginica"]
    assert scale["range"] == ["#1f77b4", "#ff7f0e", "#2ca02c"]


def test_kde_bandwidth_silverman():
    doc = _realized(
        'vis { data { t: tbl("a.csv"); } view "k" { layer { from: t; mark: kde; encode: { x: "c2" }; } } }',
        {"t": TBL_META},
    )
    bw = doc["views"][0]["layers"][0]["style"]["bandwidth"]
    assert bw == pytest.approx(1.06 * 2.0 * 100 ** (-1 / 5), abs=1e-4)


def test_domains_derived_from_ranges():
    doc = _realized(
        'vis { data { t: tbl("a.csv"); } view "p" { layer { from: t; mark: points; encode: { x: "c1", y: "c2" }; } } }',
        {"t": TBL_META},
    )
    domains = doc["views"][0]["layers"][0]["domains"]
    assert domains["x"] == [0.0, 10.0]
    assert domains["y"] == [5.0, 9.0]


def test_compile_links_slice_channel(teaser_metas):
    from .conftest import HEAD_LINKED

    head_meta = DatasetMeta(
        kind="ImageData", dimensions=(64, 64, 93), variables=(_num("scalars"),)
    )
    program = parse_indent(HEAD_LINKED)
    spec, _ = verify(program, {"vol": head_meta})
    doc = realize(spec, {"vol": head_meta}).to_dict()
    kinds = {l["kind"]: l for l in doc["links"]}
    assert kinds["slice-index"]["channel"] == "xy_link"
    assert kinds["slice-index"]["axes"] == ["XY"]
    assert kinds["slice-index"]["members"] == ["volume_slice", "slice_xy"]
    assert kinds["shared-tf"]["channel"] == "head.vti_shared"
    assert set(doc["views"][0]["linkBindings"]) == {"xy_link", "head.vti_shared"}


def test_compile_links_brush_emitter():
    src = (
        'vis { data { t: tbl("a.csv"); } '
        'selections { select(name: "sel"); } '
        'view "scatter" { link(selection: "sel", target: "hist", views: ["scatter"]); '
        'layer { from: t; mark: points; encode: { x: "c1", y: "c2" }; } '
        'interactions { on("brush") { bind("sel"); } } } '
        'view "hist" { layer { from: t; mark: histogram; encode: { x: "c1" }; } } }'
    )
    doc = _realized(src, {"t": TBL_META})
    brush = [l for l in doc["links"] if l["kind"] == "brush-filter"][0]
    assert brush["channel"] == "sel"
    assert brush["emitters"] == ["scatter"]
    assert brush["members"] == ["scatter", "hist"]


def test_auto_point_selection_for_force_graph():
    net_meta = DatasetMeta(
        kind="Network",
        variables=(
            _cat("link.source", ("a", "b")),
            _cat("link.target", ("b", "c")),
            _num("link.value"),
        ),
    )
    src = (
        'vis { data { n: net("net.json"); } '
        'view "graph" { layer { from: n; mark: force_graph; encode: { source: "link.source", target: "link.target" }; } } }'
    )
    doc = _realized(src, {"n": net_meta})
    auto = [l for l in doc["links"] if l["kind"] == "point-highlight"]
    assert len(auto) == 1
    assert auto[0]["emitters"] == ["graph"]


def test_no_links_no_bindings_for_plain_charts():
    doc = _realized(
        'vis { data { t: tbl("a.csv"); } view "h" { layer { from: t; mark: histogram; encode: { x: "c1" }; } } }',
        {"t": TBL_META},
    )
    assert doc["links"] == []


def test_default_completeness_every_mark():
    # Every style key materializes for an empty-style layer, except the
    # documented resolve-at-mount exception (streamline seed bounds).
    rng = random.Random(5150)
    seen: set[str] = set()
    for _ in range(400):
        program, metas = generate_program(rng)
        spec, diags = verify(program, metas)
        assert diags == []
        doc = realize(spec, metas).to_dict()
        for view in doc["views"]:
            for layer in view["layers"]:
                mark = "points" if layer["type"] == "points" else layer["type"]
                seen.add(mark)
                style = layer["style"]
                for key in CAPABILITIES[mark].styles:
                    assert key in style, (mark, key)
                    if key == "seed_bounds":
                        continue
                    assert style[key] is not None, (mark, key)
    assert len(seen) >= 15


def test_realize_deterministic(teaser_metas):
    program = parse_indent(TEASER_INDENT)
    spec, _ = verify(program, teaser_metas)
    assert realize(spec, teaser_metas).to_dict() == realize(spec, teaser_metas).to_dict()
