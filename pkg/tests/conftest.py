from __future__ import annotations

import numpy as np
import pytest

from visdsl.parser import parse_indent
from visdsl.probe import probe_table, probe_vti

from .vti_util import write_vti

# The running-example program in both surface syntaxes.
TEASER_INDENT = """vis:
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

TEASER_BRACE = """vis {
  data {
    vol: img("taylorgreen_9.vti", format: "vti");
    sample: tbl("tg9_sample.csv", format: "csv");
  }
  view "volume_streamline" {
    layer {
      from: vol;
      mark: volume;
      encode: { field: "vorticity" };
    }
    layer {
      from: vol;
      mark: streamline;
      encode: { vx: "ux", vy: "uy", vz: "uz" };
    }
  }
  view "histogram" {
    layer {
      from: sample;
      mark: histogram;
      encode: { x: "vorticity" };
    }
  }
}
"""

# Volume + axial slice, and its linked two-view extension.
HEAD_SINGLE_VIEW = """vis:
  data:
    vol = img("head.vti", format="vti")
  view "volume_slice":
    layer:
      from = vol
      mark = volume
    layer:
      from = vol
      mark = slice
      style:
        axes = ["XY"]
"""

HEAD_LINKED = """vis:
  data:
    vol = img("head.vti", format="vti")
  view "volume_slice":
    link(slice="xy_link", axes=["XY"],
         views=["volume_slice", "slice_xy"])
    link(tf="head.vti_shared",
         views=["volume_slice", "slice_xy"])
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

TEASER_CSV_HEADER = "ux,uy,uz,vorticity,pp,critq"


def make_teaser_vti() -> bytes:
    """65^3 volume with the six flow arrays; vorticity spans [0, 28.82]."""
    n = 65 * 65 * 65
    rng = np.random.default_rng(20990)
    arrays = {
        "ux": rng.uniform(-1, 1, n).astype("<f4"),
        "uy": rng.uniform(-1, 1, n).astype("<f4"),
        "uz": rng.uniform(-1, 1, n).astype("<f4"),
        "vorticity": np.linspace(0.0, 28.82, n, dtype="<f8"),
        "pp": rng.uniform(-0.5, 0.5, n).astype("<f4"),
        "critq": rng.uniform(0, 3, n).astype("<f4"),
    }
    return write_vti((65, 65, 65), arrays, fmt="appended")


def make_teaser_csv(rows: int = 200) -> bytes:
    rng = np.random.default_rng(414)
    lines = [TEASER_CSV_HEADER]
    vort = np.linspace(0.0, 28.82, rows)
    for i in range(rows):
        vals = [
            round(rng.uniform(-1, 1), 4),
            round(rng.uniform(-1, 1), 4),
            round(rng.uniform(-1, 1), 4),
            round(float(vort[i]), 4),
            round(rng.uniform(-0.5, 0.5), 4),
            round(rng.uniform(0, 3), 4),
        ]
        lines.append(",".join(str(v) for v in vals))
    return ("\n".join(lines) + "\n").encode("utf-8")


@pytest.fixture(scope="session")
def teaser_vti_bytes() -> bytes:
    return make_teaser_vti()


@pytest.fixture(scope="session")
def teaser_csv_bytes() -> bytes:
    return make_teaser_csv()


@pytest.fixture(scope="session")
def teaser_metas(teaser_vti_bytes, teaser_csv_bytes) -> dict:
    return {
        "vol": probe_vti(teaser_vti_bytes),
        "sample": probe_table(teaser_csv_bytes, "csv"),
    }


@pytest.fixture()
def teaser_program():
    return parse_indent(TEASER_INDENT)


@pytest.fixture(scope="session")
def teaser_data_dir(tmp_path_factory, teaser_vti_bytes, teaser_csv_bytes):
    d = tmp_path_factory.mktemp("teaser_data")
    (d / "taylorgreen_9.vti").write_bytes(teaser_vti_bytes)
    (d / "tg9_sample.csv").write_bytes(teaser_csv_bytes)
    (d / "teaser.rvn").write_text(TEASER_INDENT, encoding="utf-8")
    return d
