"""Deterministic compiler toolchain for a cross-domain visualization DSL.

Two surface syntaxes (brace and indentation) share one AST; verification
lowers it to a typed spec, realization resolves every default into a
backend-routed render IR, and the emitter produces canonical JSON plus a
self-contained HTML bundle.  A gated conversational session schema and a
multi-view prompt-compliance metric round out the toolchain.
"""

from .ast import (
    BindAction,
    DataDecl,
    InteractionDecl,
    LayerDecl,
    LinkDecl,
    Program,
    SelectionDecl,
    ViewDecl,
    ast_equal,
)
from .emit import Bundle, EmitOptions, emit_html, emit_ir_json, layout_grid
from .lexer import ParseError
from .metrics import (
    Aggregate,
    GraderRecord,
    PromptResult,
    ViewCriteria,
    aggregate,
    correlations,
    krippendorff_alpha,
    vmpc,
)
from .parser import detect_syntax, parse_brace, parse_indent
from .printer import print_brace, print_indent
from .probe import (
    DatasetMeta,
    ProbeError,
    VariableDesc,
    probe_bytes,
    probe_geo,
    probe_network,
    probe_table,
    probe_vti,
)
from .realize import RenderIR, realize, route_backend
from .session import (
    GateResult,
    Proposal,
    Session,
    SessionSchema,
    apply_node,
    init_session,
    schema_to_dsl,
    validate_schema,
)
from .verify import Diagnostic, ProgramSpec, verify

__all__ = [
    "BindAction", "DataDecl", "InteractionDecl", "LayerDecl", "LinkDecl",
    "Program", "SelectionDecl", "ViewDecl", "ast_equal",
    "Bundle", "EmitOptions", "emit_html", "emit_ir_json", "layout_grid",
    "ParseError",
    "Aggregate", "GraderRecord", "PromptResult", "ViewCriteria",
    "aggregate", "correlations", "krippendorff_alpha", "vmpc",
    "detect_syntax", "parse_brace", "parse_indent",
    "print_brace", "print_indent",
    "DatasetMeta", "ProbeError", "VariableDesc", "probe_bytes",
    "probe_geo", "probe_network", "probe_table", "probe_vti",
    "RenderIR", "realize", "route_backend",
    "GateResult", "Proposal", "Session", "SessionSchema",
    "apply_node", "init_session", "schema_to_dsl", "validate_schema",
    "Diagnostic", "ProgramSpec", "verify",
]

__version__ = "0.1.0"
