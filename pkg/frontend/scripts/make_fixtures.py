#!/usr/bin/env python3
"""Generate small HTML bundle fixtures for the runtime tests.

Uses the installed visdsl package so the fixtures are exactly what the
compiler emits (tiny volumes keep them a few kilobytes).
"""

from __future__ import annotations

import base64
import struct
from pathlib import Path

import numpy as np

from visdsl.emit import EmitOptions, emit_html
from visdsl.parser import parse_indent
from visdsl.probe import probe_bytes
from visdsl.realize import realize
from visdsl.verify import verify

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

TEASER = """vis:
  data:
    vol = img("taylorgreen_9.vti", format="vti")
    sample = tbl("tg9_sample.csv", format="csv")
  view "volume_streamline":
    layer:
      from = vol
      mark = volume
      encode:
        field = "vorticity"
    layer:
      from = vol
      mark = streamline
      encode:
        vx = "ux"
        vy = "uy"
        vz = "uz"
  view "histogram":
    layer:
      from = sample
      mark = histogram
      encode:
        x = "vorticity"
"""

LINKED = """vis:
  data:
    vol = img("head.vti", format="vti")
  view "volume_slice":
    link(slice="xy_link", axes=["XY"], views=["volume_slice", "slice_xy"])
    link(tf="head.vti_shared", views=["volume_slice", "slice_xy"])
    layer:
      from = vol
      mark = volume
    layer:
      from = vol
      mark = slice
      style:
        axes = ["XY"]
  view "slice_xy":
    layer:
      from = vol
      mark = slice
      style:
        axes = ["XY"]
"""

BRUSH = """vis:
  data:
    t = tbl("points.csv", format="csv")
  selections:
    select(name="sel0")
  view "scatter":
    link(selection="sel0", views=["scatter", "hist"])
    layer:
      from = t
      mark = points
      encode:
        x = "a"
        y = "b"
    interactions:
      on("brush"):
        bind("sel0")
  view "hist":
    layer:
      from = t
      mark = histogram
      encode:
        x = "a"
"""

QUAD = """vis:
  data:
    t = tbl("points.csv", format="csv")
  view "v1":
    layer:
      from = t
      mark = histogram
      encode:
        x = "a"
  view "v2":
    layer:
      from = t
      mark = points
      encode:
        x = "a"
        y = "b"
  view "v3":
    layer:
      from = t
      mark = line
      encode:
        x = "a"
        y = "b"
  view "v4":
    layer:
      from = t
      mark = bar
      encode:
        x = "g"
        y = "b"
"""


def small_vti(dims: tuple[int, int, int], names: list[str], vort_hi: float = 28.82) -> bytes:
    nx, ny, nz = dims
    n = nx * ny * nz
    rng = np.random.default_rng(7)
    parts = [
        f'<VTKFile type="ImageData" version="1.0" byte_order="LittleEndian" header_type="UInt32">\n'
        f'  <ImageData WholeExtent="0 {nx-1} 0 {ny-1} 0 {nz-1}" Origin="0 0 0" Spacing="1 1 1">\n'
        f'    <Piece Extent="0 {nx-1} 0 {ny-1} 0 {nz-1}">\n'
        "      <PointData>\n"
    ]
    for name in names:
        if name == "vorticity":
            arr = np.linspace(0.0, vort_hi, n, dtype="<f8")
            type_name = "Float64"
        else:
            arr = rng.uniform(-1, 1, n).astype("<f4")
            type_name = "Float32"
        payload = arr.tobytes()
        stream = struct.pack("<I", len(payload)) + payload
        body = base64.b64encode(stream).decode("ascii")
        parts.append(
            f'        <DataArray type="{type_name}" Name="{name}" format="binary">{body}</DataArray>\n'
        )
    parts.append("      </PointData>\n    </Piece>\n  </ImageData>\n</VTKFile>\n")
    return "".join(parts).encode()


def points_csv(rows: int = 40) -> bytes:
    rng = np.random.default_rng(11)
    lines = ["a,b,g"]
    for i in range(rows):
        lines.append(
            f"{round(float(rng.uniform(0, 10)), 3)},"
            f"{round(float(rng.uniform(-5, 5)), 3)},"
            f"{'x' if i % 2 else 'y'}"
        )
    return ("\n".join(lines) + "\n").encode()


def bundle(source: str, data: dict[str, bytes]) -> str:
    program = parse_indent(source)
    metas = {}
    for name, decl in program.data.items():
        fmt = decl.args.get("format", "csv")
        metas[name] = probe_bytes(data[decl.path], fmt)
    spec, diags = verify(program, {n: metas[n] for n in program.data})
    assert not diags, [d.message for d in diags]
    ir = realize(spec, {n: metas[n] for n in program.data})
    payload = {name: data[decl.path] for name, decl in program.data.items()}
    return emit_html(ir, payload, EmitOptions(runtime_js="/* runtime injected by tests */")).html


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    vti_names = ["ux", "uy", "uz", "vorticity", "pp", "critq"]
    teaser_vti = small_vti((9, 9, 9), vti_names)
    sample_csv = points_csv()
    # Reuse the header the teaser program expects.
    sample = b"ux,uy,uz,vorticity,pp,critq\n" + b"\n".join(
        b"0.1,0.2,0.3," + str(round(v, 3)).encode() + b",0.5,0.6"
        for v in np.linspace(0, 28.82, 50)
    ) + b"\n"
    (OUT / "teaser.html").write_text(
        bundle(TEASER, {"taylorgreen_9.vti": teaser_vti, "tg9_sample.csv": sample}),
        encoding="utf-8",
    )
    # A live variant with the built runtime inlined, for whole-bundle tests.
    dist = Path(__file__).resolve().parent.parent / "dist" / "runtime.js"
    if dist.exists():
        program = parse_indent(TEASER)
        data = {"taylorgreen_9.vti": teaser_vti, "tg9_sample.csv": sample}
        metas = {
            name: probe_bytes(data[decl.path], decl.args.get("format", "csv"))
            for name, decl in program.data.items()
        }
        spec, diags = verify(program, metas)
        assert not diags
        ir = realize(spec, metas)
        payload = {name: data[decl.path] for name, decl in program.data.items()}
        html = emit_html(
            ir, payload, EmitOptions(runtime_js=dist.read_text("utf-8"))
        ).html
        (OUT / "teaser_live.html").write_text(html, encoding="utf-8")
    head_vti = small_vti((8, 8, 12), ["scalars"])
    (OUT / "linked.html").write_text(
        bundle(LINKED, {"head.vti": head_vti}), encoding="utf-8"
    )
    (OUT / "brush.html").write_text(
        bundle(BRUSH, {"points.csv": sample_csv}), encoding="utf-8"
    )
    (OUT / "quad.html").write_text(
        bundle(QUAD, {"points.csv": sample_csv}), encoding="utf-8"
    )
    print(f"fixtures written to {OUT}")


if __name__ == "__main__":
    main()
