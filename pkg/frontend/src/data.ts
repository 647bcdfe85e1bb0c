/** Embedded data-block decoding and a small CSV/JSON table reader. */

import type { RenderIR } from "./types";

export const IR_ELEMENT_ID = "visdsl-ir";
export const DATA_ELEMENT_PREFIX = "visdsl-data-";

export interface TableData {
  columns: string[];
  rows: Record<string, string | number | null>[];
}

export interface DataPayload {
  format: string;
  text?: string;
  bytes?: Uint8Array;
}

export function readEmbeddedIR(doc: Document): RenderIR | null {
  const node = doc.getElementById(IR_ELEMENT_ID);
  if (!node || !node.textContent) return null;
  return JSON.parse(node.textContent) as RenderIR;
}

export function readDataBlocks(doc: Document): Map<string, DataPayload> {
  const blocks = new Map<string, DataPayload>();
  const nodes = doc.querySelectorAll(`script[id^="${DATA_ELEMENT_PREFIX}"]`);
  nodes.forEach((node) => {
    const source = node.id.slice(DATA_ELEMENT_PREFIX.length);
    const format = node.getAttribute("data-format") ?? "csv";
    const encoding = node.getAttribute("data-encoding") ?? "json";
    const raw = node.textContent ?? "";
    if (encoding === "base64") {
      const binary = atob(raw.trim());
      const bytes = new Uint8Array(binary.length);
      for (let i = 0; i < binary.length; i++) bytes[i] = binary.charCodeAt(i);
      blocks.set(source, { format, bytes });
    } else {
      // Text payloads are JSON-string encoded to stay <script>-safe.
      blocks.set(source, { format, text: JSON.parse(raw) as string });
    }
  });
  return blocks;
}

/** RFC-4180-ish CSV: quoted fields, escaped quotes, header row. */
export function parseCsv(text: string): TableData {
  const rows: string[][] = [];
  let field = "";
  let record: string[] = [];
  let inQuotes = false;
  const pushField = () => {
    record.push(field);
    field = "";
  };
  const pushRecord = () => {
    if (record.length > 1 || record[0] !== "") rows.push(record);
    record = [];
  };
  for (let i = 0; i < text.length; i++) {
    const c = text[i];
    if (inQuotes) {
      if (c === '"') {
        if (text[i + 1] === '"') {
          field += '"';
          i++;
        } else {
          inQuotes = false;
        }
      } else {
        field += c;
      }
    } else if (c === '"') {
      inQuotes = true;
    } else if (c === ",") {
      pushField();
    } else if (c === "\n") {
      pushField();
      pushRecord();
    } else if (c !== "\r") {
      field += c;
    }
  }
  if (field !== "" || record.length) {
    pushField();
    pushRecord();
  }
  const columns = rows.length ? rows[0] : [];
  const out: TableData = { columns, rows: [] };
  for (let r = 1; r < rows.length; r++) {
    const rec: Record<string, string | number | null> = {};
    columns.forEach((col, i) => {
      const cell = rows[r][i] ?? "";
      if (cell === "") {
        rec[col] = null;
      } else {
        const num = Number(cell);
        rec[col] = Number.isFinite(num) && cell.trim() !== "" ? num : cell;
      }
    });
    out.rows.push(rec);
  }
  return out;
}

export function tableFromPayload(payload: DataPayload): TableData | null {
  if (payload.text === undefined) return null;
  if (payload.format === "csv") return parseCsv(payload.text);
  if (payload.format === "json") {
    const doc = JSON.parse(payload.text);
    if (Array.isArray(doc)) {
      const columns: string[] = [];
      for (const row of doc) {
        for (const key of Object.keys(row)) {
          if (!columns.includes(key)) columns.push(key);
        }
      }
      return { columns, rows: doc };
    }
  }
  return null;
}
