"""Conversational session schema: gated population and DSL translation.

A session starts from uploaded files (probed into the data block) and
advances through a fixed node sequence; each node's gate re-validates the
provider's proposed delta before committing it.  A failed gate leaves the
schema bit-identical and returns the clarification text shown to the
user.  Language-model calls sit behind the ``ProposalProvider`` callable;
tests and the CLI replay scripted proposals.

The schema serializes with the exact field names of its JSON shape
(task_summary, data, views, selections, linking, plus slice_linking and
tf_linking only when populated).  Providers receive only this snapshot:
variable names, types and dimensions, never values or ranges.

``schema_to_dsl`` is deterministic: source names are sanitized to valid
identifiers (alias map recorded), views and layers lower in order, and
linking groups lower to link/select/interactions constructs, filtered to
the members that verify cleanly.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field as dc_field
from typing import Callable

from .ast import (
    BindAction,
    DataDecl,
    InteractionDecl,
    LayerDecl,
    LinkDecl,
    Program,
    SelectionDecl,
    ViewDecl,
)
from .capabilities import CAPABILITIES, MARK_NAMES, can_layer, capability
from .parser import RESERVED
from .probe import DatasetMeta, ProbeError, format_for_name, probe_bytes

NODE_SEQUENCE = (
    "TaskDefinition",
    "Data",
    "ViewLayer",
    "Mark",
    "Encode",
    "SelectionsLinking",
)

_KIND_CTORS = {
    "ImageData": "img",
    "Table": "tbl",
    "Network": "net",
    "GeoJSON": "geo",
    "Procedural": "func",
}

_CHANNEL_HINTS = {
    "x": "numerical or categorical",
    "y": "numerical",
    "y0": "numerical",
    "y1": "numerical",
    "color": "categorical",
    "size": "numerical",
    "value": "numerical",
    "label": "categorical",
    "source": "categorical",
    "target": "categorical",
    "node": "categorical",
    "group": "categorical",
    "region": "categorical",
    "dimensions": "numerical columns",
    "field": "numerical",
    "vx": "numerical",
    "vy": "numerical",
    "vz": "numerical",
    "opacity": "numerical",
}

_NO_ENCODE_REQUIRED = {"volume", "slice", "isosurface"}

_AXIS_NAMES = {"XY", "XZ", "YZ", "oblique"}

MSG_DATA_UNCLEAR = "Please specify the dataset (file path or URL) you want to use."

MSG_MULTI_DATASET = (
    "You have multiple datasets: {names}. Each view uses exactly one dataset; "
    "multiple views can share the same dataset. Please specify which dataset "
    "each view uses."
)

MSG_SINGLE_DATASET = (
    "Please specify which dataset this view should use (or multiple views can "
    "share the same dataset)."
)

MSG_MARK_MISSING = (
    "You must specify the type of visualization (chart type) you want. "
    "Supported types: {types}. For example: \"I want a histogram of b\", "
    "\"make a scatterplot of x and y\", \"show a heatmap of a, b, and c\"."
)

MSG_MARK_UNSUPPORTED = "{explanation}. The mark type must be one of: {types}."

MSG_ENCODE_UNDERSPECIFIED = (
    "The variable encoding underspecified check is not satisfied.\n{details}"
)

MSG_ENCODE_INVALID = "This combination isn't allowed:\n{details}"

MSG_ENCODE_NEEDED = "I need a few more details to complete.\n{details}"


class SessionError(Exception):
    pass


@dataclass
class SessionSchema:
    task_summary: str = ""
    data: dict = dc_field(default_factory=dict)
    views: list = dc_field(default_factory=list)
    selections: list = dc_field(default_factory=list)
    linking: dict = dc_field(default_factory=dict)
    slice_linking: list = dc_field(default_factory=list)
    tf_linking: list = dc_field(default_factory=list)

    def to_dict(self) -> dict:
        out = {
            "task_summary": self.task_summary,
            "data": copy.deepcopy(self.data),
            "views": copy.deepcopy(self.views),
            "selections": copy.deepcopy(self.selections),
            "linking": copy.deepcopy(self.linking),
        }
        if self.slice_linking:
            out["slice_linking"] = copy.deepcopy(self.slice_linking)
        if self.tf_linking:
            out["tf_linking"] = copy.deepcopy(self.tf_linking)
        return out

    @staticmethod
    def from_dict(doc: dict) -> "SessionSchema":
        return SessionSchema(
            task_summary=doc.get("task_summary", ""),
            data=copy.deepcopy(doc.get("data", {})),
            views=copy.deepcopy(doc.get("views", [])),
            selections=copy.deepcopy(doc.get("selections", [])),
            linking=copy.deepcopy(doc.get("linking", {})),
            slice_linking=copy.deepcopy(doc.get("slice_linking", [])),
            tf_linking=copy.deepcopy(doc.get("tf_linking", [])),
        )


@dataclass(frozen=True)
class Proposal:
    delta: dict = dc_field(default_factory=dict)
    claim: str = "Enough"
    clarification: str | None = None


# (node id, schema snapshot, user turn text) -> Proposal
ProposalProvider = Callable[[str, dict, str], Proposal]


@dataclass(frozen=True)
class GateResult:
    status: str  # Enough | NotEnough
    clarification: str | None = None
    schema_delta: dict = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "Enough"


@dataclass
class Session:
    schema: SessionSchema
    metas: dict
    cursor_index: int = 0

    @property
    def cursor(self) -> str:
        return NODE_SEQUENCE[min(self.cursor_index, len(NODE_SEQUENCE) - 1)]

    @property
    def complete(self) -> bool:
        return self.cursor_index >= len(NODE_SEQUENCE)

    def snapshot(self) -> dict:
        return self.schema.to_dict()

    def advance(self) -> None:
        self.cursor_index += 1
        # The Data node is satisfied at upload time; never rest on it.
        if not self.complete and self.cursor == "Data":
            self.cursor_index += 1


def init_session(uploads: list[tuple[str, bytes]]) -> Session:
    """Probe uploads into the data block; the session starts at TaskDefinition."""
    if not uploads:
        raise SessionError(
            "cannot begin a session without at least one uploaded data file"
        )
    schema = SessionSchema()
    metas: dict[str, DatasetMeta] = {}
    for name, payload in uploads:
        try:
            fmt = format_for_name(name)
            meta = probe_bytes(payload, fmt)
        except ProbeError as exc:
            raise SessionError(f"cannot initialize session from '{name}': {exc}") from exc
        metas[name] = meta
        entry: dict = {
            "type": _KIND_CTORS[meta.kind],
            "path": name,
            "args": {"format": fmt},
            "variables": [
                {"name": v.name, "data_type": v.data_type} for v in meta.variables
            ],
        }
        if meta.kind == "ImageData" and meta.dimensions is not None:
            entry["dimensions"] = list(meta.dimensions)
        schema.data[name] = entry
    return Session(schema=schema, metas=metas)


# -- gate helpers ---------------------------------------------------------------


def _source_kind(schema: SessionSchema, name: str) -> str | None:
    entry = schema.data.get(name)
    if entry is None:
        return None
    for kind, ctor in _KIND_CTORS.items():
        if ctor == entry.get("type"):
            return kind
    return None


def _source_variables(session: Session, name: str) -> DatasetMeta | None:
    return session.metas.get(name)


def _dataset_message(schema: SessionSchema) -> str:
    names = list(schema.data)
    if len(names) > 1:
        return MSG_MULTI_DATASET.format(names=", ".join(names))
    return MSG_SINGLE_DATASET


def _gate_task(session: Session, delta: dict, user_text: str) -> GateResult:
    summary = delta.get("task_summary") or user_text.strip()
    if not summary:
        return GateResult("NotEnough", clarification=MSG_DATA_UNCLEAR)
    session.schema.task_summary = summary
    return GateResult("Enough", schema_delta={"task_summary": summary})


def _gate_viewlayer(session: Session, delta: dict) -> GateResult:
    schema = session.schema
    views = copy.deepcopy(delta.get("views", schema.views))
    if not views:
        return GateResult("NotEnough", clarification=_dataset_message(schema))
    if len(views) > 9:
        return GateResult(
            "NotEnough",
            clarification=(
                f"You have {len(views)} views; at most 9 views are supported. "
                "Please consolidate your request."
            ),
        )
    source_names = list(schema.data)
    seen: set[str] = set()
    for view in views:
        view_id = view.get("view_id") or f"view_{len(seen) + 1}"
        base = view_id
        suffix = 2
        while view_id in seen:
            view_id = f"{base}_{suffix}"
            suffix += 1
        view["view_id"] = view_id
        seen.add(view_id)
        layers = view.get("layers") or []
        if not layers:
            return GateResult("NotEnough", clarification=_dataset_message(schema))
        for layer in layers:
            layer.setdefault("geo", "")
            layer.setdefault("mark", layer.get("mark", ""))
            layer.setdefault("encode", {})
            layer.setdefault("style", {})
            src = layer.get("from", "")
            if src not in schema.data:
                if len(source_names) == 1:
                    layer["from"] = source_names[0]
                else:
                    return GateResult(
                        "NotEnough", clarification=_dataset_message(schema)
                    )
        kinds = {
            "spatial" if _source_kind(schema, l["from"]) in ("ImageData", "Procedural")
            else "chart"
            for l in layers
        }
        if len(kinds) > 1:
            return GateResult(
                "NotEnough",
                clarification=(
                    f"View '{view_id}' mixes image data with tabular data; all "
                    "layers in a view must share a compatible backend. Please "
                    "split them into separate views."
                ),
            )
        view.setdefault("links_out", [])
        view.setdefault("interactions", {})
    session.schema.views = views
    return GateResult("Enough", schema_delta={"views": views})


def _gate_mark(session: Session, delta: dict) -> GateResult:
    schema = session.schema
    views = copy.deepcopy(delta.get("views", schema.views))
    types = ", ".join(MARK_NAMES)
    for view in views:
        marks: list[str] = []
        for layer in view.get("layers", []):
            mark = (layer.get("mark") or "").strip()
            if not mark:
                return GateResult(
                    "NotEnough",
                    clarification=MSG_MARK_MISSING.format(types=types),
                )
            if capability(mark) is None:
                return GateResult(
                    "NotEnough",
                    clarification=MSG_MARK_UNSUPPORTED.format(
                        explanation=f"'{mark}' is not a supported mark type",
                        types=types,
                    ),
                )
            kind = _source_kind(schema, layer.get("from", ""))
            cap = CAPABILITIES[mark]
            if kind is not None and kind not in cap.data_kinds:
                return GateResult(
                    "NotEnough",
                    clarification=MSG_MARK_UNSUPPORTED.format(
                        explanation=(
                            f"'{mark}' cannot render the {kind} source "
                            f"'{layer.get('from', '')}'"
                        ),
                        types=types,
                    ),
                )
            layer["mark"] = mark
            marks.append(mark)
        for i in range(len(marks)):
            for j in range(i + 1, len(marks)):
                if not can_layer(marks[i], marks[j]):
                    return GateResult(
                        "NotEnough",
                        clarification=MSG_MARK_UNSUPPORTED.format(
                            explanation=(
                                f"Marks '{marks[i]}' and '{marks[j]}' cannot be "
                                "layered in one view"
                            ),
                            types=types,
                        ),
                    )
    session.schema.views = views
    return GateResult("Enough", schema_delta={"views": views})


def _describe_encoded(value, meta: DatasetMeta | None) -> str:
    if isinstance(value, list):
        if meta is not None:
            numeric = [v.name for v in meta.variables if v.data_type == "number"]
            if numeric and set(value) == set(numeric):
                return "all numerical variables"
        return ", ".join(str(v) for v in value)
    return str(value)


def _encode_details(session: Session, view: dict, layer: dict, missing: list[str]) -> str:
    meta = _source_variables(session, layer.get("from", ""))
    mark = layer.get("mark", "")
    cap = capability(mark)
    already = [
        f"{ch} ({_describe_encoded(val, meta)})"
        for ch, val in layer.get("encode", {}).items()
    ]
    needed = [f"{ch} ({_CHANNEL_HINTS.get(ch, 'variable')})" for ch in missing]
    optional = [
        f"{ch} ({_CHANNEL_HINTS.get(ch, 'variable')})"
        for ch in (cap.optional if cap else ())
        if ch not in layer.get("encode", {})
    ]
    first = missing[0] if missing else "x"
    lines = [
        f"View '{view.get('view_id', '')}' ({mark}): "
        f"Already specified: {', '.join(already) if already else 'nothing'}. "
        f"Still needed: {', '.join(needed)}. "
        f"Optionally: {', '.join(optional) if optional else 'nothing'}. "
        f"Please specify the {first} variable (e.g. 'along d', "
        "'plot them along x', or 'x is d')."
    ]
    if meta is not None:
        lines.append(
            "Available variables: " + ", ".join(v.name for v in meta.variables)
        )
    return "\n".join(lines)


def _gate_encode(session: Session, delta: dict) -> GateResult:
    schema = session.schema
    views = copy.deepcopy(delta.get("views", schema.views))
    for view in views:
        for layer in view.get("layers", []):
            mark = layer.get("mark", "")
            cap = capability(mark)
            if cap is None:
                continue
            meta = _source_variables(session, layer.get("from", ""))
            encode = layer.get("encode", {}) or {}
            kind = _source_kind(schema, layer.get("from", ""))
            if kind is not None and kind not in cap.data_kinds:
                return GateResult(
                    "NotEnough",
                    clarification=MSG_ENCODE_UNDERSPECIFIED.format(
                        details=(
                            f"View '{view.get('view_id', '')}' ({mark}): the mark "
                            f"cannot render {kind} data."
                        )
                    ),
                )
            invalid: list[str] = []
            for channel, value in encode.items():
                if channel not in set(cap.required) | set(cap.optional):
                    invalid.append(f"channel '{channel}' is not valid for {mark}")
                    continue
                names = value if isinstance(value, list) else [value]
                for name in names:
                    if not isinstance(name, str):
                        invalid.append(
                            f"channel '{channel}' must name a variable, got {name!r}"
                        )
                        continue
                    var = meta.variable(name) if meta else None
                    if var is None:
                        invalid.append(
                            f"variable '{name}' does not exist in "
                            f"'{layer.get('from', '')}'"
                        )
                        continue
                    accepted = cap.channel_types.get(channel)
                    if accepted and var.data_type not in accepted:
                        invalid.append(
                            f"channel '{channel}' does not accept {var.data_type} "
                            f"variable '{name}'"
                        )
            for key in layer.get("style", {}) or {}:
                if key not in cap.styles:
                    invalid.append(f"style '{key}' is not valid for {mark}")
            if invalid:
                details = (
                    f"View '{view.get('view_id', '')}' ({mark}): "
                    + "; ".join(invalid)
                    + "."
                )
                return GateResult(
                    "NotEnough",
                    clarification=MSG_ENCODE_INVALID.format(details=details),
                )
            if mark in _NO_ENCODE_REQUIRED:
                continue
            missing = [ch for ch in cap.required if ch not in encode]
            if missing:
                return GateResult(
                    "NotEnough",
                    clarification=MSG_ENCODE_NEEDED.format(
                        details=_encode_details(session, view, layer, missing)
                    ),
                )
    session.schema.views = views
    return GateResult("Enough", schema_delta={"views": views})


def _gate_selections(session: Session, delta: dict) -> GateResult:
    applied: dict = {}
    for key in ("selections", "linking", "slice_linking", "tf_linking"):
        if key in delta:
            setattr(session.schema, key, copy.deepcopy(delta[key]))
            applied[key] = delta[key]
    return GateResult("Enough", schema_delta=applied)


def apply_node(session: Session, node: str, proposal: Proposal, user_text: str = "") -> GateResult:
    """Run one node's gate over a proposed delta; commit only on Enough."""
    if node != session.cursor:
        raise SessionError(
            f"node '{node}' applied while the session cursor is at "
            f"'{session.cursor}'"
        )
    if proposal.claim != "Enough":
        return GateResult(
            "NotEnough",
            clarification=proposal.clarification or _dataset_message(session.schema),
        )
    if node == "TaskDefinition":
        result = _gate_task(session, proposal.delta, user_text)
    elif node == "Data":
        result = GateResult("Enough")
    elif node == "ViewLayer":
        result = _gate_viewlayer(session, proposal.delta)
    elif node == "Mark":
        result = _gate_mark(session, proposal.delta)
    elif node == "Encode":
        result = _gate_encode(session, proposal.delta)
    elif node == "SelectionsLinking":
        result = _gate_selections(session, proposal.delta)
    else:
        raise SessionError(f"unknown node '{node}'")
    if result.passed:
        session.advance()
    return result


def validate_schema(session: Session) -> dict:
    """Per-node pass/fail over the current schema, without mutating it."""
    report: dict = {}
    probe = Session(
        schema=SessionSchema.from_dict(session.schema.to_dict()),
        metas=session.metas,
    )
    report["TaskDefinition"] = {"ok": bool(probe.schema.task_summary)}
    report["Data"] = {"ok": bool(probe.schema.data)}
    for node, gate in (
        ("ViewLayer", _gate_viewlayer),
        ("Mark", _gate_mark),
        ("Encode", _gate_encode),
    ):
        result = gate(probe, {})
        entry: dict = {"ok": result.passed}
        if not result.passed:
            entry["clarification"] = result.clarification
        report[node] = entry
    report["SelectionsLinking"] = {"ok": True}
    return report


# -- schema -> DSL ----------------------------------------------------------------


def source_aliases(schema: SessionSchema) -> dict:
    """Sanitized identifier per source name, in data-block order."""
    aliases: dict[str, str] = {}
    taken: set[str] = set()
    for name in schema.data:
        base = name
        for ext in (".vti", ".csv", ".json", ".geojson"):
            if base.lower().endswith(ext):
                base = base[: -len(ext)]
                break
        ident = "".join(c if c.isalnum() or c == "_" else "_" for c in base)
        if not ident or ident[0].isdigit():
            ident = "d_" + ident
        if ident in RESERVED and ident != "geo":
            ident += "_src"
        candidate = ident
        suffix = 2
        while candidate in taken:
            candidate = f"{ident}_{suffix}"
            suffix += 1
        taken.add(candidate)
        aliases[name] = candidate
    return aliases


def _schema_view_class(schema: SessionSchema, view: dict) -> str:
    for layer in view.get("layers", []):
        kind = _source_kind(schema, layer.get("from", ""))
        if kind in ("ImageData", "Procedural"):
            return "spatial"
    return "chart"


def schema_to_dsl(schema: SessionSchema) -> Program:
    """Translate a completed schema into a program, deterministically.

    Linking groups are lowered defensively: members are filtered to
    declared views of the matching backend class, and groups left with
    fewer than two members are dropped, so the emitted constructs always
    verify.
    """
    aliases = source_aliases(schema)
    data = {
        aliases[name]: DataDecl(
            ctor=entry.get("type", "tbl"),
            path=None if entry.get("type") == "func" else entry.get("path"),
            args=dict(entry.get("args", {})),
        )
        for name, entry in schema.data.items()
    }

    view_class: dict[str, str] = {}
    for view in schema.views:
        view_class[view.get("view_id", "")] = _schema_view_class(schema, view)

    extra_links: dict[str, list[LinkDecl]] = {}
    extra_interactions: dict[str, list[InteractionDecl]] = {}
    selections: list[SelectionDecl] = []
    declared: set[str] = set()

    def _members(ids, cls: str) -> list[str]:
        return [
            v for v in ids or [] if v in view_class and view_class[v] == cls
        ]

    linking = schema.linking or {}
    sel_name = linking.get("selection_name") or ""
    linked = _members(linking.get("linked_view_ids"), "chart")
    if sel_name and len(linked) >= 2:
        if sel_name not in declared:
            selections.append(SelectionDecl(args={"name": sel_name}))
            declared.add(sel_name)
        extra_links.setdefault(linked[0], []).append(
            LinkDecl(args={"selection": sel_name, "views": list(linked)})
        )
        bind_views = [
            s.get("bind_view")
            for s in schema.selections
            if s.get("name") == sel_name and s.get("bind_view") in view_class
        ]
        bind_view = bind_views[0] if bind_views else linked[0]
        extra_interactions.setdefault(bind_view, []).append(
            InteractionDecl(event="brush", actions=(BindAction(selection=sel_name),))
        )

    for group in schema.slice_linking or []:
        members = _members(group.get("linked_view_ids"), "spatial")
        axes = group.get("axes", "XY")
        if isinstance(axes, str):
            axes = [axes]
        axes = [a for a in axes if a in _AXIS_NAMES] or ["XY"]
        link_id = group.get("slice_link_id") or "slice_link"
        if len(members) >= 2:
            extra_links.setdefault(members[0], []).append(
                LinkDecl(
                    args={"slice": link_id, "axes": axes, "views": list(members)}
                )
            )

    for group in schema.tf_linking or []:
        members = _members(group.get("linked_view_ids"), "spatial")
        link_id = group.get("tf_link_id") or "tf_link"
        if len(members) >= 2:
            extra_links.setdefault(members[0], []).append(
                LinkDecl(args={"tf": link_id, "views": list(members)})
            )

    views: list[ViewDecl] = []
    for view in schema.views:
        view_id = view.get("view_id", "")
        layers = []
        for layer in view.get("layers", []):
            geo = layer.get("geo") or None
            layers.append(
                LayerDecl(
                    source=aliases.get(layer.get("from", ""), layer.get("from", "")),
                    mark=layer.get("mark") or None,
                    geo=aliases.get(geo) if geo else None,
                    encode=dict(layer.get("encode", {}) or {}),
                    style=dict(layer.get("style", {}) or {}),
                )
            )
        views.append(
            ViewDecl(
                id=view_id,
                layers=tuple(layers),
                links=tuple(extra_links.get(view_id, [])),
                interactions=tuple(extra_interactions.get(view_id, [])),
            )
        )

    return Program(data=data, views=tuple(views), selections=tuple(selections))


# -- scripted replay ----------------------------------------------------------------


class QueueProvider:
    """Provider replaying queued proposals; one pop per node attempt.

    An exhausted queue yields an empty Enough proposal, so gates evaluate
    whatever the schema already holds (the echo fallback for the task
    summary comes from the gate using the user's turn text).
    """

    def __init__(self) -> None:
        self.queue: list[dict] = []

    def feed(self, proposals: list[dict]) -> None:
        self.queue = list(proposals)

    def __call__(self, node: str, snapshot: dict, user_text: str) -> Proposal:
        if not self.queue:
            return Proposal(delta={})
        turn = self.queue.pop(0)
        return Proposal(
            delta=turn.get("delta", {}),
            claim=turn.get("claim", "Enough"),
            clarification=turn.get("clarification"),
        )


def echo_provider() -> ProposalProvider:
    """Fallback provider: summarizes by echoing the user's turn."""

    def provide(node: str, snapshot: dict, user_text: str) -> Proposal:
        if node == "TaskDefinition":
            return Proposal(delta={"task_summary": user_text.strip()})
        return Proposal(delta={})

    return provide


@dataclass
class TurnRecord:
    node: str
    user_text: str
    result: GateResult


def run_turn(
    session: Session,
    provider: ProposalProvider,
    user_text: str,
    max_steps: int = 20,
) -> list[TurnRecord]:
    """Advance nodes on one user turn until a gate asks for clarification."""
    records: list[TurnRecord] = []
    steps = 0
    while not session.complete and steps < max_steps:
        steps += 1
        node = session.cursor
        proposal = provider(node, session.snapshot(), user_text)
        result = apply_node(session, node, proposal, user_text)
        records.append(TurnRecord(node=node, user_text=user_text, result=result))
        if not result.passed:
            break
    return records


def run_session(
    session: Session, provider: ProposalProvider, user_texts: list[str]
) -> list[TurnRecord]:
    records: list[TurnRecord] = []
    for text in user_texts:
        if session.complete:
            break
        records.extend(run_turn(session, provider, text))
    return records


def replay_script(
    script: dict, base_dir: str = "."
) -> tuple[Session, Program, list[TurnRecord]]:
    """Drive a session from a scripted file.

    Script shape: ``{"uploads": [{"name", "file"|"text"}], "turns":
    [{"text": ..., "proposals": [{"delta", "claim"?}, ...]}]}``.  Each
    turn's proposals feed the provider queue for that user message.
    """
    import os

    uploads = []
    for up in script.get("uploads", []):
        name = up["name"]
        if "file" in up:
            with open(os.path.join(base_dir, up["file"]), "rb") as f:
                payload = f.read()
        else:
            payload = up.get("text", "").encode("utf-8")
        uploads.append((name, payload))
    session = init_session(uploads)
    provider = QueueProvider()
    records: list[TurnRecord] = []
    for turn in script.get("turns", []):
        if session.complete:
            break
        provider.feed(turn.get("proposals", []))
        records.extend(run_turn(session, provider, turn.get("text", "")))
    if not session.complete:
        pending = [r.result.clarification for r in records if not r.result.passed]
        raise SessionError(
            "session did not complete; last clarification: "
            + json.dumps(pending[-1] if pending else None)
        )
    program = schema_to_dsl(session.schema)
    return session, program, records
