"""Canonical IR serialization and self-contained HTML bundling.

``emit_ir_json`` is the golden-file surface: fixed schema key order,
UTF-8, 2-space indentation, newline-terminated, byte-identical across
runs.  ``emit_html`` produces a standalone document: a responsive grid
sized by ``layout_grid``, the IR embedded in a fixed-id JSON block, the
runtime script inlined, and data either inlined (base64 for binary
formats, JSON-string text otherwise) or referenced by relative URL.
"""

from __future__ import annotations

import base64
import html as html_escape
import json
import math
from dataclasses import dataclass
from importlib import resources

from .probe import MAX_INPUT_BYTES
from .realize import RenderIR

IR_ELEMENT_ID = "visdsl-ir"
DATA_ELEMENT_PREFIX = "visdsl-data-"

_BINARY_FORMATS = {"vti"}

_MEDIA_TYPES = {
    "vti": "application/octet-stream",
    "csv": "text/csv",
    "json": "application/json",
    "geojson": "application/geo+json",
    "func": "application/x-procedural",
}


class EmitError(Exception):
    pass


@dataclass(frozen=True)
class Bundle:
    html: str
    embedded_ir: bytes
    data_refs: tuple = ()


@dataclass(frozen=True)
class EmitOptions:
    embed_data: bool = True
    title: str = "visdsl bundle"
    runtime_js: str | None = None


def emit_ir_json(ir: RenderIR) -> bytes:
    """Serialize the IR canonically (deterministic bytes)."""
    text = json.dumps(ir.to_dict(), indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


def parse_ir_json(data: bytes) -> RenderIR:
    return RenderIR.from_dict(json.loads(data.decode("utf-8")))


def layout_grid(n: int) -> tuple[int, int]:
    """Grid shape for ``n`` views: near-square, row-major fill."""
    if not 1 <= n <= 9:
        raise EmitError(f"view count {n} outside the supported 1..9 range")
    columns = math.ceil(math.sqrt(n))
    rows = math.ceil(n / columns)
    return columns, rows


def _default_runtime() -> str:
    return (
        resources.files("visdsl").joinpath("runtime_stub.js").read_text("utf-8")
    )


def _script_safe(text: str) -> str:
    # Script elements end at "</script"; JSON escaping keeps payloads inert.
    return text.replace("</", "<\\/")


def _data_block(name: str, fmt: str, payload: bytes) -> tuple[str, str]:
    if fmt in _BINARY_FORMATS:
        body = base64.b64encode(payload).decode("ascii")
        encoding = "base64"
    else:
        body = _script_safe(json.dumps(payload.decode("utf-8")))
        encoding = "json"
    block = (
        f'<script type="text/plain" id="{DATA_ELEMENT_PREFIX}{html_escape.escape(name)}" '
        f'data-format="{fmt}" data-encoding="{encoding}">{body}</script>'
    )
    return block, encoding


_PAGE = """<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>{title}</title>
<style>
body {{ margin: 0; font-family: system-ui, sans-serif; background: #fafafa; }}
#visdsl-grid {{
  display: grid;
  grid-template-columns: repeat({columns}, 1fr);
  grid-template-rows: repeat({rows}, minmax(240px, 1fr));
  gap: 8px; padding: 8px; box-sizing: border-box;
  width: 100vw; min-height: 100vh;
}}
.visdsl-cell {{ background: #fff; border: 1px solid #ddd; border-radius: 4px;
  position: relative; overflow: hidden; display: flex; flex-direction: column; }}
.visdsl-view-title {{ font-size: 12px; color: #555; padding: 4px 8px; }}
.visdsl-view-body {{ flex: 1; position: relative; }}
</style>
</head>
<body>
<div id="visdsl-grid">
{cells}
</div>
<script type="application/json" id="{ir_id}">{ir_json}</script>
{data_blocks}
<script>
{runtime}
</script>
</body>
</html>
"""


def emit_html(
    ir: RenderIR,
    data: dict | None = None,
    options: EmitOptions | None = None,
) -> Bundle:
    """Bundle the IR, data and runtime into one HTML document.

    ``data`` maps source name to payload bytes; with ``embed_data`` off
    the document references each source's url relatively and ``data`` may
    be omitted.
    """
    options = options or EmitOptions()
    data = data or {}
    doc = ir.to_dict()
    views = doc["views"]
    columns, rows = layout_grid(len(views))

    cells = "\n".join(
        f'<div class="visdsl-cell" id="visdsl-view-{html_escape.escape(v["viewId"])}"></div>'
        for v in views
    )

    data_refs: list[dict] = []
    blocks: list[str] = []
    for name, source in doc["sources"].items():
        fmt = source["format"]
        if fmt == "func":
            continue
        media = _MEDIA_TYPES.get(fmt, "application/octet-stream")
        if options.embed_data:
            if name not in data:
                raise EmitError(f"no data provided for source '{name}'")
            payload = data[name]
            if len(payload) > MAX_INPUT_BYTES:
                raise EmitError(
                    f"inline payload for '{name}' exceeds the 100 MB cap"
                )
            block, _ = _data_block(name, fmt, payload)
            blocks.append(block)
            data_refs.append(
                {"source": name, "mode": "inline-base64" if fmt in _BINARY_FORMATS else "inline-text", "media_type": media}
            )
        else:
            data_refs.append(
                {"source": name, "mode": "relative-url", "media_type": media}
            )

    ir_bytes = emit_ir_json(ir)
    page = _PAGE.format(
        title=html_escape.escape(options.title),
        columns=columns,
        rows=rows,
        cells=cells,
        ir_id=IR_ELEMENT_ID,
        ir_json=_script_safe(ir_bytes.decode("utf-8").rstrip("\n")),
        data_blocks="\n".join(blocks),
        runtime=options.runtime_js if options.runtime_js is not None else _default_runtime(),
    )
    return Bundle(html=page, embedded_ir=ir_bytes, data_refs=tuple(data_refs))
