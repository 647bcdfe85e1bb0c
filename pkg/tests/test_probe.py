from __future__ import annotations

import json

import numpy as np
import pytest

from visdsl.probe import (
    InputTooLargeError,
    MAX_INPUT_BYTES,
    ProbeError,
    probe_bytes,
    probe_geo,
    probe_network,
    probe_table,
    probe_vti,
)

from .vti_util import write_vti


def test_teaser_vti_dimensions_and_variables(teaser_vti_bytes):
    meta = probe_vti(teaser_vti_bytes)
    assert meta.kind == "ImageData"
    assert meta.dimensions == (65, 65, 65)
    assert meta.variable_names() == ("ux", "uy", "uz", "vorticity", "pp", "critq")
    assert all(v.data_type == "number" for v in meta.variables)


def test_teaser_vorticity_range_is_pinned(teaser_vti_bytes):
    meta = probe_vti(teaser_vti_bytes)
    assert meta.variable("vorticity").range == (0.0, 28.82)


@pytest.mark.parametrize("fmt", ["ascii", "binary", "appended"])
def test_vti_encodings_agree(fmt):
    rng = np.random.default_rng(5)
    arrays = {
        "a": rng.uniform(-3, 9, 4 * 3 * 2).astype("<f4"),
        "b": rng.integers(0, 255, 4 * 3 * 2).astype("<u1"),
        "c": rng.uniform(0, 1, 4 * 3 * 2).astype("<f8"),
    }
    meta = probe_vti(write_vti((4, 3, 2), arrays, fmt=fmt))
    assert meta.dimensions == (4, 3, 2)
    for name, values in arrays.items():
        var = meta.variable(name)
        # Brute-force oracle: scan the raw array directly.
        assert var.range == (float(values.min()), float(values.max()))
        assert var.count == values.size


def test_vti_uint64_header():
    arrays = {"a": np.arange(8, dtype="<f4")}
    meta = probe_vti(write_vti((2, 2, 2), arrays, fmt="appended", header_type="UInt64"))
    assert meta.variable("a").range == (0.0, 7.0)


def test_single_voxel_constant_range():
    meta = probe_vti(write_vti((1, 1, 1), {"a": np.array([5.0], dtype="<f8")}, fmt="ascii"))
    assert meta.dimensions == (1, 1, 1)
    assert meta.variable("a").range == (5.0, 5.0)


def test_vti_array_length_must_match_dimensions():
    doc = write_vti((2, 2, 2), {"a": np.arange(8, dtype="<f4")}, fmt="ascii")
    bad = doc.replace(b'WholeExtent="0 1 0 1 0 1"', b'WholeExtent="0 2 0 1 0 1"')
    with pytest.raises(ProbeError):
        probe_vti(bad)


def test_vti_extent_hi_below_lo_rejected():
    doc = write_vti((2, 2, 2), {"a": np.arange(8, dtype="<f4")}, fmt="ascii")
    bad = doc.replace(b'WholeExtent="0 1 0 1 0 1"', b'WholeExtent="1 0 0 1 0 1"', 1)
    with pytest.raises(ProbeError) as err:
        probe_vti(bad)
    assert "hi < lo" in str(err.value)


def test_compressed_vti_rejected_with_clear_error():
    doc = write_vti(
        (2, 2, 2),
        {"a": np.arange(8, dtype="<f4")},
        fmt="ascii",
        compressor="vtkZLibDataCompressor",
    )
    with pytest.raises(ProbeError) as err:
        probe_vti(doc)
    assert err.value.code == "unsupported-encoding"
    assert "compressed" in str(err.value)


def test_malformed_xml_rejected():
    with pytest.raises(ProbeError) as err:
        probe_vti(b"<VTKFile type='ImageData'><oops>")
    assert err.value.code == "malformed-vti"


def test_input_cap_is_enforced():
    with pytest.raises(InputTooLargeError) as err:
        probe_vti(b"x" * (MAX_INPUT_BYTES + 1))
    assert err.value.code == "input-too-large"


def test_csv_teaser_header_types(teaser_csv_bytes):
    meta = probe_table(teaser_csv_bytes, "csv")
    assert meta.kind == "Table"
    assert meta.variable_names() == ("ux", "uy", "uz", "vorticity", "pp", "critq")
    assert all(v.data_type == "number" for v in meta.variables)
    assert meta.variable("vorticity").range == (0.0, 28.82)


def test_csv_single_text_column():
    meta = probe_table(b"name\nada\ngrace\nada\n", "csv")
    var = meta.variable("name")
    assert var.data_type == "string"
    assert var.range is None
    assert var.categories == ("ada", "grace")


def test_csv_mixed_cells_fall_back_to_string():
    meta = probe_table(b"c\n1\n2\nx\n", "csv")
    assert meta.variable("c").data_type == "string"


def test_csv_date_column():
    meta = probe_table(b"d\n2024-01-01\n2024-06-30\n", "csv")
    assert meta.variable("d").data_type == "date"


def test_csv_null_cells_excluded_from_range_but_counted():
    meta = probe_table(b"c\n1\n\n5\n", "csv")
    var = meta.variable("c")
    assert var.data_type == "number"
    assert var.range == (1.0, 5.0)
    assert var.count == 2


def test_csv_no_zero_filtering():
    meta = probe_table(b"c\n0\n0\n3\n", "csv")
    assert meta.variable("c").range == (0.0, 3.0)
    assert meta.variable("c").count == 3


def test_empty_csv_rejected():
    with pytest.raises(ProbeError) as err:
        probe_table(b"", "csv")
    assert err.value.code == "empty-input"


def test_ragged_csv_rejected():
    with pytest.raises(ProbeError) as err:
        probe_table(b"a,b\n1,2\n3\n", "csv")
    assert err.value.code == "ragged-csv"


def test_json_table():
    doc = json.dumps([
        {"a": 1, "b": "x", "flag": True},
        {"a": 4.5, "b": "y", "flag": False},
    ]).encode()
    meta = probe_table(doc, "json")
    assert meta.variable("a").data_type == "number"
    assert meta.variable("a").range == (1.0, 4.5)
    assert meta.variable("b").data_type == "string"
    assert meta.variable("flag").data_type == "boolean"


def test_network_field_union():
    doc = json.dumps(
        {
            "nodes": [{"id": "a", "group": 1}],
            "links": [{"source": "a", "target": "b", "value": 2}],
        }
    ).encode()
    meta = probe_network(doc)
    assert meta.kind == "Network"
    assert meta.variable_names() == (
        "node.id",
        "node.group",
        "link.source",
        "link.target",
        "link.value",
    )


def test_network_empty_arrays_valid():
    meta = probe_network(b'{"nodes": [], "links": []}')
    assert meta.variables == ()


def test_network_heterogeneous_nodes_take_key_union():
    doc = json.dumps(
        {
            "nodes": [{"id": "a"}, {"id": "b", "weight": 3}, {"extra": "x"}],
            "links": [],
        }
    ).encode()
    meta = probe_network(doc)
    # Oracle: set union over all entries, first-appearance order.
    assert meta.variable_names() == ("node.id", "node.weight", "node.extra")


def test_network_requires_nodes_and_links():
    with pytest.raises(ProbeError):
        probe_network(b'{"nodes": []}')


def _feature(props) -> dict:
    return {"type": "Feature", "properties": props, "geometry": None}


def test_geo_feature_count_and_properties():
    doc = json.dumps(
        {
            "type": "FeatureCollection",
            "features": [_feature({"ISO_A3": c}) for c in ("USA", "DEU", "JPN")],
        }
    ).encode()
    meta = probe_geo(doc)
    assert meta.kind == "GeoJSON"
    assert meta.feature_count == 3
    assert meta.variable_names() == ("ISO_A3",)


def test_geo_large_feature_count():
    doc = json.dumps(
        {
            "type": "FeatureCollection",
            "features": [_feature({"ISO_A3": f"C{i:03}"}) for i in range(249)],
        }
    ).encode()
    assert probe_geo(doc).feature_count == 249


def test_geo_heterogeneous_properties_take_union():
    doc = json.dumps(
        {
            "type": "FeatureCollection",
            "features": [_feature({"a": 1}), _feature({"b": "x"})],
        }
    ).encode()
    assert probe_geo(doc).variable_names() == ("a", "b")


def test_geo_requires_feature_collection():
    with pytest.raises(ProbeError):
        probe_geo(b'{"type": "Feature"}')


def test_meta_retains_no_raw_records(teaser_vti_bytes):
    # Aggregates only: no field of the metadata may hold per-record data.
    meta = probe_vti(teaser_vti_bytes)
    doc = meta.to_dict()
    assert set(doc) <= {"kind", "dimensions", "variables", "feature_count", "crs"}
    for var in doc["variables"]:
        assert set(var) <= {
            "name", "data_type", "range", "categories", "count", "stddev"
        }
        if "range" in var:
            assert len(var["range"]) == 2


def test_probe_bytes_json_sniffing():
    net = b'{"nodes": [], "links": []}'
    assert probe_bytes(net, "json").kind == "Network"
    table = b'[{"a": 1}]'
    assert probe_bytes(table, "json").kind == "Table"
    geo = json.dumps({"type": "FeatureCollection", "features": []}).encode()
    assert probe_bytes(geo, "json").kind == "GeoJSON"
