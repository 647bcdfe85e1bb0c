from __future__ import annotations

import random

import pytest

from visdsl.capabilities import (
    CAPABILITIES,
    CHART_MARKS,
    MARK_COUNT,
    MARK_NAMES,
    SPATIAL_MARKS,
    can_layer,
)
from visdsl.generator import generate_program
from visdsl.parser import parse_brace, parse_indent
from visdsl.probe import DatasetMeta, VariableDesc
from visdsl.verify import check_mark_encoding, verify

from .conftest import HEAD_LINKED, TEASER_INDENT


def _num(name, rng=(0.0, 10.0)):
    return VariableDesc(name=name, data_type="number", range=rng, count=50, stddev=1.0)


def _cat(name, cats=("a", "b")):
    return VariableDesc(name=name, data_type="string", categories=cats, count=50)


IMG_META = DatasetMeta(
    kind="ImageData",
    dimensions=(8, 8, 8),
    variables=(_num("ux"), _num("uy"), _num("uz"), _num("vorticity")),
)

TBL_META = DatasetMeta(
    kind="Table",
    variables=(_num("c1"), _num("c2"), _cat("g1"), _num("vorticity")),
)


def codes(diags):
    return [d.code for d in diags]


def test_capability_table_shape():
    assert len(MARK_NAMES) == 23  # 22 marks; bubble aliases points
    assert MARK_COUNT == 22
    assert set(SPATIAL_MARKS) == {"volume", "isosurface", "slice", "streamline", "lic"}
    assert len(CHART_MARKS) == 18
    assert CAPABILITIES["bubble"].alias_of == "points"


def test_layering_rules_mirror_the_mark_tables():
    assert not can_layer("lic", "volume")
    assert not can_layer("lic", "slice")
    assert can_layer("histogram", "kde")
    assert can_layer("histogram", "histogram")
    assert can_layer("volume", "streamline")
    assert can_layer("points", "choropleth")
    assert not can_layer("heatmap", "bar")
    assert not can_layer("volume", "volume")


def test_teaser_layer_ids(teaser_metas):
    program = parse_indent(TEASER_INDENT)
    spec, diags = verify(program, teaser_metas)
    assert diags == []
    ids = [l.id for v in spec.views for l in v.layers]
    assert ids == [
        "volume_streamline:volume#0",
        "volume_streamline:streamline#1",
        "histogram:histogram#0",
    ]
    assert spec.data["vol"].kind == "ImageData"
    assert spec.data["sample"].kind == "Table"


def test_unknown_source_is_diagnosed():
    src = 'vis { data { t: tbl("a.csv"); } view "v" { layer { from: ghost; mark: histogram; encode: { x: "c1" }; } } }'
    _, diags = verify(parse_brace(src), {"t": TBL_META})
    assert "unknown-source" in codes(diags)
    assert any("ghost" in d.message for d in diags)


def test_mixed_backend_view_is_diagnosed():
    src = (
        'vis { data { v: img("a.vti"); t: tbl("a.csv"); } '
        'view "v" { layer { from: v; mark: volume; } layer { from: t; mark: histogram; encode: { x: "c1" }; } } }'
    )
    _, diags = verify(parse_brace(src), {"v": IMG_META, "t": TBL_META})
    assert "mixed-backend" in codes(diags)


def test_empty_program_fails_verification():
    _, diags = verify(parse_brace("vis { }"), {})
    assert "no-data" in codes(diags)
    assert "view-count" in codes(diags)


def test_check_mark_encoding_streamline_ok():
    diags = check_mark_encoding(
        "streamline", {"vx": "ux", "vy": "uy", "vz": "uz"}, IMG_META
    )
    assert diags == []


def test_check_mark_encoding_volume_empty_defaults_later():
    assert check_mark_encoding("volume", {}, IMG_META) == []


def test_check_mark_encoding_points_missing_y():
    diags = check_mark_encoding("points", {"x": "c1"}, TBL_META)
    assert codes(diags) == ["missing-required-channel"]
    assert "'y'" in diags[0].message


def test_check_mark_encoding_volume_on_table():
    diags = check_mark_encoding("volume", {}, TBL_META)
    assert "mark-data-mismatch" in codes(diags)


def test_check_mark_encoding_string_into_numeric_channel():
    diags = check_mark_encoding("histogram", {"x": "g1"}, TBL_META)
    assert "channel-type-mismatch" in codes(diags)


def test_check_mark_encoding_unknown_field():
    diags = check_mark_encoding("histogram", {"x": "nope"}, TBL_META)
    assert "unknown-field" in codes(diags)


def test_bubble_normalizes_to_points_with_size():
    src = 'vis { data { t: tbl("a.csv"); } view "v" { layer { from: t; mark: bubble; encode: { x: "c1", y: "c2", size: "vorticity" }; } } }'
    spec, diags = verify(parse_brace(src), {"t": TBL_META})
    assert diags == []
    assert spec.views[0].layers[0].mark == "points"
    assert spec.views[0].layers[0].id == "v:points#0"


def test_bubble_requires_size():
    src = 'vis { data { t: tbl("a.csv"); } view "v" { layer { from: t; mark: bubble; encode: { x: "c1", y: "c2" }; } } }'
    _, diags = verify(parse_brace(src), {"t": TBL_META})
    assert "missing-required-channel" in codes(diags)


def test_head_linked_program_verifies(teaser_metas):
    head_meta = DatasetMeta(
        kind="ImageData", dimensions=(64, 64, 93), variables=(_num("scalars"),)
    )
    spec, diags = verify(parse_indent(HEAD_LINKED), {"vol": head_meta})
    assert diags == []


def test_link_with_multiple_kinds():
    src = (
        'vis { data { v: img("a.vti"); } '
        'view "a" { link(tf: "t0", slice: "s0", views: ["a"]); layer { from: v; mark: volume; } } }'
    )
    _, diags = verify(parse_brace(src), {"v": IMG_META})
    assert "link-kind" in codes(diags)


def test_slice_link_requires_axes():
    src = (
        'vis { data { v: img("a.vti"); } '
        'view "a" { link(slice: "s0", views: ["a", "b"]); layer { from: v; mark: slice; } } '
        'view "b" { layer { from: v; mark: slice; } } }'
    )
    _, diags = verify(parse_brace(src), {"v": IMG_META})
    assert "slice-needs-axes" in codes(diags)


def test_invalid_axis_name():
    src = (
        'vis { data { v: img("a.vti"); } '
        'view "a" { link(slice: "s0", axes: ["QQ"], views: ["a", "b"]); layer { from: v; mark: slice; } } '
        'view "b" { layer { from: v; mark: slice; } } }'
    )
    _, diags = verify(parse_brace(src), {"v": IMG_META})
    assert "invalid-axis" in codes(diags)


def test_cross_backend_link():
    src = (
        'vis { data { v: img("a.vti"); t: tbl("a.csv"); } '
        'selections { select(name: "s0"); } '
        'view "a" { link(selection: "s0", views: ["a", "b"]); layer { from: v; mark: volume; } } '
        'view "b" { layer { from: t; mark: histogram; encode: { x: "c1" }; } } }'
    )
    _, diags = verify(parse_brace(src), {"v": IMG_META, "t": TBL_META})
    assert "cross-backend-link" in codes(diags)


def test_tf_link_between_chart_views():
    src = (
        'vis { data { t: tbl("a.csv"); } '
        'view "a" { link(tf: "t0", views: ["a", "b"]); layer { from: t; mark: histogram; encode: { x: "c1" }; } } '
        'view "b" { layer { from: t; mark: histogram; encode: { x: "c2" }; } } }'
    )
    _, diags = verify(parse_brace(src), {"t": TBL_META})
    assert "link-needs-spatial" in codes(diags)


def test_selection_link_between_spatial_views():
    src = (
        'vis { data { v: img("a.vti"); } '
        'selections { select(name: "s0"); } '
        'view "a" { link(selection: "s0", views: ["a", "b"]); layer { from: v; mark: volume; } } '
        'view "b" { layer { from: v; mark: isosurface; } } }'
    )
    _, diags = verify(parse_brace(src), {"v": IMG_META})
    assert "selection-needs-chart" in codes(diags)


def test_undeclared_selection_in_link_and_bind():
    src = (
        'vis { data { t: tbl("a.csv"); } '
        'view "a" { link(selection: "nope", views: ["a", "b"]); layer { from: t; mark: points; encode: { x: "c1", y: "c2" }; } '
        'interactions { on("brush") { bind("missing"); } } } '
        'view "b" { layer { from: t; mark: histogram; encode: { x: "c1" }; } } }'
    )
    _, diags = verify(parse_brace(src), {"t": TBL_META})
    assert codes(diags).count("undeclared-selection") == 2


def test_unknown_view_in_link():
    src = (
        'vis { data { v: img("a.vti"); } '
        'view "a" { link(tf: "t0", views: ["a", "zz"]); layer { from: v; mark: volume; } } }'
    )
    _, diags = verify(parse_brace(src), {"v": IMG_META})
    assert "unknown-view" in codes(diags)


def test_view_count_bound():
    views = " ".join(
        f'view "v{i}" {{ layer {{ from: t; mark: histogram; encode: {{ x: "c1" }}; }} }}'
        for i in range(10)
    )
    src = f'vis {{ data {{ t: tbl("a.csv"); }} {views} }}'
    _, diags = verify(parse_brace(src), {"t": TBL_META})
    assert "view-count" in codes(diags)


def test_duplicate_view_id():
    src = (
        'vis { data { t: tbl("a.csv"); } '
        'view "a" { layer { from: t; mark: histogram; encode: { x: "c1" }; } } '
        'view "a" { layer { from: t; mark: histogram; encode: { x: "c2" }; } } }'
    )
    _, diags = verify(parse_brace(src), {"t": TBL_META})
    assert "duplicate-view-id" in codes(diags)


def test_not_layerable_marks():
    src = (
        'vis { data { v: img("a.vti"); } '
        'view "a" { layer { from: v; mark: lic; encode: { vx: "ux", vy: "uy" }; } layer { from: v; mark: volume; } } }'
    )
    _, diags = verify(parse_brace(src), {"v": IMG_META})
    assert "not-layerable" in codes(diags)


def test_unknown_mark_and_missing_mark():
    src = (
        'vis { data { t: tbl("a.csv"); } '
        'view "a" { layer { from: t; mark: sparkline; } layer { from: t; } } }'
    )
    _, diags = verify(parse_brace(src), {"t": TBL_META})
    assert "unknown-mark" in codes(diags)
    assert "missing-mark" in codes(diags)


def test_func_source_synthesizes_meta():
    src = (
        'vis { data { f: func(equations: { q: "sin(x)" }, dims: [8, 8, 8], range: [0, 2]); } '
        'view "a" { layer { from: f; mark: volume; encode: { field: "q" }; } } }'
    )
    spec, diags = verify(parse_brace(src), {})
    assert diags == []
    assert spec.data["f"].kind == "Procedural"


def test_func_missing_args_diagnosed():
    src = 'vis { data { f: func(dims: [8, 8, 8]); } view "a" { layer { from: f; mark: volume; } } }'
    _, diags = verify(parse_brace(src), {})
    missing = [d for d in diags if d.code == "func-missing-arg"]
    assert len(missing) == 2  # range and equations


def test_unknown_style_key():
    src = 'vis { data { t: tbl("a.csv"); } view "a" { layer { from: t; mark: histogram; encode: { x: "c1" }; style: { glow: true }; } } }'
    _, diags = verify(parse_brace(src), {"t": TBL_META})
    assert "unknown-style" in codes(diags)


def test_choropleth_needs_geo():
    src = 'vis { data { t: tbl("a.csv"); } view "a" { layer { from: t; mark: choropleth; encode: { region: "g1", value: "c1" }; } } }'
    _, diags = verify(parse_brace(src), {"t": TBL_META})
    assert "choropleth-needs-geo" in codes(diags)


def test_diagnostics_are_order_stable():
    src = (
        'vis { data { t: tbl("a.csv"); } '
        'view "v" { layer { from: ghost; mark: sparkline; } layer { from: t; mark: points; encode: { x: "c1" }; } } }'
    )
    program = parse_brace(src)
    first = codes(verify(program, {"t": TBL_META})[1])
    second = codes(verify(program, {"t": TBL_META})[1])
    assert first == second


def test_verify_never_touches_the_realizer():
    import visdsl.verify as verify_mod

    assert not any("realize" in name for name in vars(verify_mod))


def test_generator_valid_programs_verify_clean():
    rng = random.Random(2024)
    for _ in range(100):
        program, metas = generate_program(rng)
        _, diags = verify(program, metas)
        assert diags == [], codes(diags)
