from __future__ import annotations

import json
import re

import pytest

from visdsl.emit import (
    Bundle,
    DATA_ELEMENT_PREFIX,
    EmitError,
    EmitOptions,
    IR_ELEMENT_ID,
    emit_html,
    emit_ir_json,
    layout_grid,
    parse_ir_json,
)
from visdsl.parser import parse_indent
from visdsl.realize import realize
from visdsl.verify import verify

from .conftest import TEASER_INDENT


@pytest.fixture()
def teaser_ir(teaser_metas):
    program = parse_indent(TEASER_INDENT)
    spec, diags = verify(program, teaser_metas)
    assert diags == []
    return realize(spec, teaser_metas)


def test_ir_json_roundtrip(teaser_ir):
    blob = emit_ir_json(teaser_ir)
    assert blob.endswith(b"\n")
    again = parse_ir_json(blob)
    assert again == teaser_ir


def test_ir_json_is_byte_deterministic(teaser_ir):
    assert emit_ir_json(teaser_ir) == emit_ir_json(teaser_ir)


def test_ir_json_contains_worked_values(teaser_ir):
    text = emit_ir_json(teaser_ir).decode()
    assert '"backend": "multi"' in text
    assert '"sampleDistance": 0.7' in text
    assert '"volume_streamline:volume#0"' in text


@pytest.mark.parametrize(
    "n,shape",
    [(1, (1, 1)), (2, (2, 1)), (3, (2, 2)), (4, (2, 2)), (5, (3, 2)),
     (7, (3, 3)), (9, (3, 3))],
)
def test_layout_grid_formula(n, shape):
    assert layout_grid(n) == shape


def test_layout_grid_bounds():
    with pytest.raises(EmitError):
        layout_grid(0)
    with pytest.raises(EmitError):
        layout_grid(10)


def _teaser_data(teaser_vti_bytes, teaser_csv_bytes) -> dict:
    return {"vol": teaser_vti_bytes, "sample": teaser_csv_bytes}


def test_embedded_bundle_is_standalone(teaser_ir, teaser_vti_bytes, teaser_csv_bytes):
    bundle = emit_html(teaser_ir, _teaser_data(teaser_vti_bytes, teaser_csv_bytes))
    assert isinstance(bundle, Bundle)
    html = bundle.html
    assert f'id="{IR_ELEMENT_ID}"' in html
    assert f'id="{DATA_ELEMENT_PREFIX}vol"' in html
    assert f'id="{DATA_ELEMENT_PREFIX}sample"' in html
    # Standalone: nothing refers to an absolute network location.
    assert "http://" not in html and "https://" not in html
    assert all(ref["mode"].startswith("inline") for ref in bundle.data_refs)
    # Two views -> 2x1 grid.
    assert "repeat(2, 1fr)" in html


def test_embedded_ir_roundtrips_from_html(teaser_ir, teaser_vti_bytes, teaser_csv_bytes):
    bundle = emit_html(teaser_ir, _teaser_data(teaser_vti_bytes, teaser_csv_bytes))
    m = re.search(
        rf'<script type="application/json" id="{IR_ELEMENT_ID}">(.*?)</script>',
        bundle.html,
        re.S,
    )
    assert m is not None
    doc = json.loads(m.group(1).replace("<\\/", "</"))
    assert parse_ir_json((json.dumps(doc) + "\n").encode()) == teaser_ir


def test_no_embed_references_relative_urls(teaser_ir):
    bundle = emit_html(teaser_ir, options=EmitOptions(embed_data=False))
    assert all(ref["mode"] == "relative-url" for ref in bundle.data_refs)
    assert "taylorgreen_9.vti" in bundle.html  # via the embedded IR urls
    assert f'id="{DATA_ELEMENT_PREFIX}vol"' not in bundle.html


def test_missing_data_source_is_an_error(teaser_ir, teaser_csv_bytes):
    with pytest.raises(EmitError) as err:
        emit_html(teaser_ir, {"sample": teaser_csv_bytes})
    assert "vol" in str(err.value)


def test_inline_cap_is_enforced(teaser_ir, teaser_csv_bytes, monkeypatch):
    monkeypatch.setattr("visdsl.emit.MAX_INPUT_BYTES", 64)
    with pytest.raises(EmitError) as err:
        emit_html(teaser_ir, {"vol": b"x" * 65, "sample": teaser_csv_bytes})
    assert "100 MB" in str(err.value)


def test_html_pure_function_of_inputs(teaser_ir, teaser_vti_bytes, teaser_csv_bytes):
    data = _teaser_data(teaser_vti_bytes, teaser_csv_bytes)
    a = emit_html(teaser_ir, data, EmitOptions(runtime_js="// rt"))
    b = emit_html(teaser_ir, data, EmitOptions(runtime_js="// rt"))
    assert a.html == b.html
    c = emit_html(teaser_ir, data, EmitOptions(runtime_js="// other"))
    assert a.html != c.html


def test_script_closing_tags_are_escaped(teaser_ir):
    payload = b'a,b\n1,"</script><script>alert(1)</script>"\n'
    bundle = emit_html(
        teaser_ir,
        {"vol": b"fake", "sample": payload},
    )
    body = bundle.html.split(f'id="{DATA_ELEMENT_PREFIX}sample"', 1)[1]
    block = body.split("</script>", 1)[0]
    assert "</script" not in block
