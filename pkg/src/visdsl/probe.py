"""Dataset metadata extraction for the four supported file formats.

Probing reads whole files but keeps only metadata: variable names, types,
numeric [min, max] ranges, volume dimensions, feature counts, and the
aggregate facts later stages need for deterministic defaults (distinct
category values for string columns, count/stddev for numeric ones).  Raw
records are never retained.

VTI support covers uncompressed VTK XML ImageData with inline ASCII,
inline base64, or appended (raw/base64) point-data arrays in the scalar
types Float32/Float64/UInt8/Int16/UInt16, little-endian.  Compressed
files are rejected with a distinct error, as is any input over the
100 MB cap.
"""

from __future__ import annotations

import base64
import csv
import io
import json
import math
import re
import struct
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from datetime import date, datetime

import numpy as np

MAX_INPUT_BYTES = 100 * 1024 * 1024

_VTI_DTYPES = {
    "Float32": np.dtype("<f4"),
    "Float64": np.dtype("<f8"),
    "UInt8": np.dtype("<u1"),
    "Int16": np.dtype("<i2"),
    "UInt16": np.dtype("<u2"),
}

_DECIMAL_RE = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?\Z")


class ProbeError(Exception):
    """Input cannot be probed; ``code`` is a stable machine identifier."""

    def __init__(self, code: str, message: str) -> None:
        super().__init__(message)
        self.code = code


class InputTooLargeError(ProbeError):
    def __init__(self, size: int) -> None:
        super().__init__(
            "input-too-large",
            f"input is {size} bytes, exceeding the 100 MB cap",
        )


def _check_cap(data: bytes) -> None:
    if len(data) > MAX_INPUT_BYTES:
        raise InputTooLargeError(len(data))


@dataclass(frozen=True)
class VariableDesc:
    """One field/column: its type plus the aggregate facts kept about it."""

    name: str
    data_type: str  # number | string | boolean | date
    range: tuple[float, float] | None = None
    categories: tuple[str, ...] | None = None
    count: int | None = None
    stddev: float | None = None

    def to_dict(self) -> dict:
        out: dict = {"name": self.name, "data_type": self.data_type}
        if self.range is not None:
            out["range"] = list(self.range)
        if self.categories is not None:
            out["categories"] = list(self.categories)
        if self.count is not None:
            out["count"] = self.count
        if self.stddev is not None:
            out["stddev"] = self.stddev
        return out


@dataclass(frozen=True)
class DatasetMeta:
    kind: str  # ImageData | Table | Network | GeoJSON | Procedural
    variables: tuple[VariableDesc, ...] = ()
    dimensions: tuple[int, int, int] | None = None
    feature_count: int | None = None
    crs: str | None = None

    def variable(self, name: str) -> VariableDesc | None:
        for var in self.variables:
            if var.name == name:
                return var
        return None

    def variable_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.dimensions is not None:
            out["dimensions"] = list(self.dimensions)
        out["variables"] = [v.to_dict() for v in self.variables]
        if self.feature_count is not None:
            out["feature_count"] = self.feature_count
        if self.crs is not None:
            out["crs"] = self.crs
        return out


# -- VTI ------------------------------------------------------------------


def _split_appended(data: bytes) -> tuple[bytes, bytes | None, str]:
    """Separate the XML document from the <AppendedData> blob.

    Raw-encoded appended data is not valid XML, so the blob is excised
    before parsing and returned separately (without the leading '_').
    """
    m = re.search(rb"<AppendedData[^>]*>", data)
    if m is None:
        return data, None, ""
    end = data.rfind(b"</AppendedData>")
    if end < 0:
        raise ProbeError("malformed-vti", "unterminated AppendedData section")
    section = data[m.end() : end]
    us = section.find(b"_")
    if us < 0:
        raise ProbeError("malformed-vti", "AppendedData lacks leading underscore")
    blob = section[us + 1 :]
    enc_m = re.search(rb'encoding\s*=\s*"([^"]*)"', m.group(0))
    encoding = enc_m.group(1).decode("ascii") if enc_m else "base64"
    xml_doc = data[: m.end()] + data[end:]
    return xml_doc, blob, encoding


def _read_header(buf: bytes, offset: int, header_type: str) -> tuple[int, int]:
    if header_type == "UInt64":
        if offset + 8 > len(buf):
            raise ProbeError("malformed-vti", "appended data header out of bounds")
        return struct.unpack_from("<Q", buf, offset)[0], 8
    if offset + 4 > len(buf):
        raise ProbeError("malformed-vti", "appended data header out of bounds")
    return struct.unpack_from("<I", buf, offset)[0], 4


def _decode_array(
    elem: ET.Element,
    dtype: np.dtype,
    blob: bytes | None,
    blob_encoding: str,
    header_type: str,
) -> np.ndarray:
    fmt = elem.get("format", "ascii")
    if fmt == "ascii":
        text = elem.text or ""
        try:
            return np.array(text.split(), dtype=dtype)
        except ValueError as exc:
            raise ProbeError("malformed-vti", f"bad ascii array data: {exc}") from exc
    if fmt == "binary":
        raw = base64.b64decode("".join((elem.text or "").split()))
        nbytes, hsize = _read_header(raw, 0, header_type)
        payload = raw[hsize : hsize + nbytes]
        if len(payload) != nbytes:
            raise ProbeError("malformed-vti", "truncated inline binary array")
        return np.frombuffer(payload, dtype=dtype)
    if fmt == "appended":
        if blob is None:
            raise ProbeError("malformed-vti", "appended array without AppendedData")
        if blob_encoding != "raw":
            raise ProbeError(
                "unsupported-encoding",
                f"unsupported AppendedData encoding '{blob_encoding}'",
            )
        offset = int(elem.get("offset", "0"))
        nbytes, hsize = _read_header(blob, offset, header_type)
        payload = blob[offset + hsize : offset + hsize + nbytes]
        if len(payload) != nbytes:
            raise ProbeError("malformed-vti", "truncated appended array")
        return np.frombuffer(payload, dtype=dtype)
    raise ProbeError("unsupported-encoding", f"unsupported DataArray format '{fmt}'")


def probe_vti(data: bytes) -> DatasetMeta:
    """Probe a VTK XML ImageData document."""
    _check_cap(data)
    xml_doc, blob, blob_encoding = _split_appended(data)
    try:
        root = ET.fromstring(xml_doc)
    except ET.ParseError as exc:
        raise ProbeError("malformed-vti", f"not well-formed XML: {exc}") from exc
    if root.tag != "VTKFile" or root.get("type") != "ImageData":
        raise ProbeError("malformed-vti", "root element is not a VTKFile/ImageData")
    if root.get("compressor"):
        raise ProbeError(
            "unsupported-encoding",
            "compressed VTI input is not supported; rewrite uncompressed",
        )
    byte_order = root.get("byte_order", "LittleEndian")
    if byte_order != "LittleEndian":
        raise ProbeError(
            "unsupported-encoding", f"unsupported byte order '{byte_order}'"
        )
    header_type = root.get("header_type", "UInt32")
    if header_type not in ("UInt32", "UInt64"):
        raise ProbeError("unsupported-encoding", f"header_type '{header_type}'")

    image = root.find("ImageData")
    if image is None:
        raise ProbeError("malformed-vti", "missing ImageData element")
    extent_text = image.get("WholeExtent", "")
    try:
        extent = [int(x) for x in extent_text.split()]
    except ValueError:
        extent = []
    if len(extent) != 6:
        raise ProbeError("malformed-vti", f"bad WholeExtent {extent_text!r}")
    dims = []
    for axis in range(3):
        lo, hi = extent[2 * axis], extent[2 * axis + 1]
        if hi < lo:
            raise ProbeError("malformed-vti", f"extent axis {axis} has hi < lo")
        dims.append(hi - lo + 1)
    n_points = dims[0] * dims[1] * dims[2]

    piece = image.find("Piece")
    point_data = piece.find("PointData") if piece is not None else None
    variables: list[VariableDesc] = []
    if point_data is not None:
        for elem in point_data.findall("DataArray"):
            name = elem.get("Name", "")
            vtype = elem.get("type", "")
            if vtype not in _VTI_DTYPES:
                raise ProbeError(
                    "unsupported-encoding", f"unsupported scalar type '{vtype}'"
                )
            ncomp = int(elem.get("NumberOfComponents", "1"))
            if ncomp != 1:
                raise ProbeError(
                    "unsupported-encoding",
                    f"array '{name}' has {ncomp} components; only scalars supported",
                )
            arr = _decode_array(elem, _VTI_DTYPES[vtype], blob, blob_encoding, header_type)
            if arr.size != n_points:
                raise ProbeError(
                    "malformed-vti",
                    f"array '{name}' has {arr.size} values for {n_points} points",
                )
            variables.append(
                VariableDesc(
                    name=name,
                    data_type="number",
                    range=(float(arr.min()), float(arr.max())),
                    count=int(arr.size),
                    stddev=float(arr.std()),
                )
            )
    return DatasetMeta(
        kind="ImageData",
        variables=tuple(variables),
        dimensions=(dims[0], dims[1], dims[2]),
    )


# -- tables ----------------------------------------------------------------


def _is_decimal(cell: str) -> bool:
    return bool(_DECIMAL_RE.match(cell.strip()))


def _is_iso_date(cell: str) -> bool:
    text = cell.strip()
    try:
        date.fromisoformat(text)
        return True
    except ValueError:
        pass
    try:
        datetime.fromisoformat(text)
        return True
    except ValueError:
        return False


def _column_desc(name: str, cells: list[str]) -> VariableDesc:
    nonempty = [c for c in cells if c.strip() != ""]
    if not nonempty:
        return VariableDesc(name=name, data_type="string", categories=(), count=0)
    if all(_is_decimal(c) for c in nonempty):
        values = [float(c) for c in nonempty]
        return VariableDesc(
            name=name,
            data_type="number",
            range=(min(values), max(values)),
            count=len(values),
            stddev=_stddev(values),
        )
    if all(_is_iso_date(c) for c in nonempty):
        return VariableDesc(name=name, data_type="date", count=len(nonempty))
    return VariableDesc(
        name=name,
        data_type="string",
        categories=tuple(sorted({c for c in nonempty})),
        count=len(nonempty),
    )


def _stddev(values: list[float]) -> float:
    n = len(values)
    mean = sum(values) / n
    return math.sqrt(sum((v - mean) ** 2 for v in values) / n)


def probe_table(data: bytes, format: str = "csv") -> DatasetMeta:
    """Probe a CSV (header row) or JSON (array of flat objects) table."""
    _check_cap(data)
    if format == "csv":
        return _probe_csv(data)
    if format == "json":
        return _probe_json_table(data)
    raise ProbeError("unsupported-format", f"unsupported table format '{format}'")


def _probe_csv(data: bytes) -> DatasetMeta:
    text = data.decode("utf-8-sig")
    if not text.strip():
        raise ProbeError("empty-input", "CSV input is empty")
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r != []]
    if not rows:
        raise ProbeError("empty-input", "CSV input has no header row")
    header = rows[0]
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ProbeError(
                "ragged-csv", f"row {i} has {len(row)} cells, header has {len(header)}"
            )
    columns = list(zip(*rows[1:])) if len(rows) > 1 else [()] * len(header)
    variables = tuple(
        _column_desc(name, list(col)) for name, col in zip(header, columns)
    )
    return DatasetMeta(kind="Table", variables=variables)


def _json_fields(records: list[dict]) -> list[str]:
    names: list[str] = []
    for rec in records:
        for key in rec:
            if key not in names:
                names.append(key)
    return names


def _json_column_desc(name: str, records: list[dict]) -> VariableDesc:
    values = [rec[name] for rec in records if name in rec and rec[name] is not None]
    if not values:
        return VariableDesc(name=name, data_type="string", categories=(), count=0)
    if all(isinstance(v, bool) for v in values):
        return VariableDesc(name=name, data_type="boolean", count=len(values))
    if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values):
        nums = [float(v) for v in values]
        return VariableDesc(
            name=name,
            data_type="number",
            range=(min(nums), max(nums)),
            count=len(nums),
            stddev=_stddev(nums),
        )
    if all(isinstance(v, str) for v in values):
        return _column_desc(name, list(values))
    return VariableDesc(
        name=name,
        data_type="string",
        categories=tuple(sorted({str(v) for v in values})),
        count=len(values),
    )


def _probe_json_table(data: bytes) -> DatasetMeta:
    try:
        doc = json.loads(data.decode("utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ProbeError("malformed-json", str(exc)) from exc
    if not isinstance(doc, list) or not all(isinstance(r, dict) for r in doc):
        raise ProbeError("malformed-json", "JSON table must be an array of objects")
    if not doc:
        raise ProbeError("empty-input", "JSON table has no rows")
    variables = tuple(_json_column_desc(n, doc) for n in _json_fields(doc))
    return DatasetMeta(kind="Table", variables=variables)


# -- networks ----------------------------------------------------------------


def probe_network(data: bytes) -> DatasetMeta:
    """Probe node-link JSON: field union over nodes and links, prefixed."""
    _check_cap(data)
    try:
        doc = json.loads(data.decode("utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ProbeError("malformed-json", str(exc)) from exc
    if not isinstance(doc, dict):
        raise ProbeError("malformed-network", "network root must be an object")
    nodes = doc.get("nodes")
    links = doc.get("links")
    if not isinstance(nodes, list) or not isinstance(links, list):
        raise ProbeError(
            "malformed-network", "network JSON requires 'nodes' and 'links' arrays"
        )
    variables: list[VariableDesc] = []
    for prefix, records in (("node.", nodes), ("link.", links)):
        recs = [r for r in records if isinstance(r, dict)]
        for name in _json_fields(recs):
            desc = _json_column_desc(name, recs)
            variables.append(
                VariableDesc(
                    name=prefix + name,
                    data_type=desc.data_type,
                    range=desc.range,
                    categories=desc.categories,
                    count=desc.count,
                    stddev=desc.stddev,
                )
            )
    return DatasetMeta(kind="Network", variables=tuple(variables))


# -- geojson ----------------------------------------------------------------


def probe_geo(data: bytes) -> DatasetMeta:
    """Probe a GeoJSON FeatureCollection: property-key union, feature count."""
    _check_cap(data)
    try:
        doc = json.loads(data.decode("utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ProbeError("malformed-json", str(exc)) from exc
    if not isinstance(doc, dict) or doc.get("type") != "FeatureCollection":
        raise ProbeError("malformed-geojson", "root is not a FeatureCollection")
    features = doc.get("features", [])
    if not isinstance(features, list):
        raise ProbeError("malformed-geojson", "'features' must be an array")
    props = [
        f.get("properties", {})
        for f in features
        if isinstance(f, dict) and isinstance(f.get("properties", {}), dict)
    ]
    variables = tuple(_json_column_desc(n, props) for n in _json_fields(props))
    crs = None
    crs_obj = doc.get("crs")
    if isinstance(crs_obj, dict):
        crs = crs_obj.get("properties", {}).get("name")
    return DatasetMeta(
        kind="GeoJSON",
        variables=variables,
        feature_count=len(features),
        crs=crs,
    )


# -- dispatch ----------------------------------------------------------------

_EXT_FORMATS = {
    ".vti": "vti",
    ".csv": "csv",
    ".json": "json",
    ".geojson": "geojson",
}


def probe_bytes(data: bytes, format: str) -> DatasetMeta:
    """Probe ``data`` as the named format (vti, csv, json, geojson)."""
    if format == "vti":
        return probe_vti(data)
    if format == "csv":
        return probe_table(data, "csv")
    if format == "geojson":
        return probe_geo(data)
    if format == "json":
        return _probe_any_json(data)
    raise ProbeError("unsupported-format", f"unsupported format '{format}'")


def _probe_any_json(data: bytes) -> DatasetMeta:
    """Sniff a JSON payload: network, FeatureCollection, or flat table."""
    _check_cap(data)
    try:
        doc = json.loads(data.decode("utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ProbeError("malformed-json", str(exc)) from exc
    if isinstance(doc, dict) and "nodes" in doc and "links" in doc:
        return probe_network(data)
    if isinstance(doc, dict) and doc.get("type") == "FeatureCollection":
        return probe_geo(data)
    return _probe_json_table(data)


def format_for_name(name: str) -> str:
    for ext, fmt in _EXT_FORMATS.items():
        if name.lower().endswith(ext):
            return fmt
    raise ProbeError("unsupported-format", f"cannot infer format of '{name}'")


def probe_file(path: str) -> DatasetMeta:
    with open(path, "rb") as f:
        data = f.read()
    return probe_bytes(data, format_for_name(path))
