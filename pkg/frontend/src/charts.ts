/** Chart views: SVG renderers for the tabular marks.
 *
 * Histogram, points, line and bar render real marks; the remaining chart
 * marks render a labelled placeholder with their resolved style (the IR
 * carries everything needed, rendering breadth is incremental).  Brush
 * events filter by row identity: source row index within the table.
 */

import type { TableData } from "./data";
import type { LayerIR, LinkEvent, ViewIR } from "./types";

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 320;
const HEIGHT = 200;
const PAD = 24;

interface HistogramState {
  bins: number;
  counts: number[];
}

export class ChartView {
  readonly viewId: string;
  readonly backendClass = "chart";
  private svg: SVGSVGElement;
  private tables: Map<string, TableData>;
  private brushedRows: number[] | null = null;
  private histograms = new Map<string, HistogramState>();
  private styles = new Map<string, Record<string, unknown>>();

  constructor(
    readonly view: ViewIR,
    tables: Map<string, TableData>,
    readonly cell: HTMLElement,
  ) {
    this.viewId = view.viewId;
    this.tables = tables;
    const title = cell.ownerDocument.createElement("div");
    title.className = "visdsl-view-title";
    title.textContent = view.viewId;
    cell.appendChild(title);
    this.svg = cell.ownerDocument.createElementNS(SVG_NS, "svg") as SVGSVGElement;
    this.svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
    this.svg.setAttribute("data-view", view.viewId);
    cell.appendChild(this.svg);
    for (const layer of view.layers) {
      this.styles.set(layer.id, { ...layer.style });
      if (layer.type === "histogram") {
        const bins = Number(layer.style.bins ?? 30);
        this.histograms.set(layer.id, { bins, counts: [] });
      }
    }
    this.render();
  }

  dispose(): void {
    this.svg.remove();
  }

  private table(layer: LayerIR): TableData | undefined {
    return this.tables.get(layer.from);
  }

  private visibleRows(layer: LayerIR): Record<string, unknown>[] {
    const table = this.table(layer);
    if (!table) return [];
    if (this.brushedRows === null) return table.rows;
    const keep = new Set(this.brushedRows);
    return table.rows.filter((_, index) => keep.has(index));
  }

  private clear(): void {
    while (this.svg.firstChild) this.svg.removeChild(this.svg.firstChild);
  }

  render(): void {
    this.clear();
    for (const layer of this.view.layers) {
      switch (layer.type) {
        case "histogram":
          this.renderHistogram(layer);
          break;
        case "points":
          this.renderPoints(layer);
          break;
        case "bar":
          this.renderBars(layer);
          break;
        case "line":
          this.renderLine(layer);
          break;
        default:
          this.renderPlaceholder(layer);
      }
    }
  }

  private rect(x: number, y: number, w: number, h: number, fill: string, cls: string): void {
    const node = this.svg.ownerDocument.createElementNS(SVG_NS, "rect");
    node.setAttribute("x", String(x));
    node.setAttribute("y", String(y));
    node.setAttribute("width", String(Math.max(w, 0)));
    node.setAttribute("height", String(Math.max(h, 0)));
    node.setAttribute("fill", fill);
    node.setAttribute("class", cls);
    this.svg.appendChild(node);
  }

  private numericColumn(layer: LayerIR, channel: string): number[] {
    const encoding = layer.encoding ?? {};
    const field = encoding[channel];
    if (typeof field !== "string") return [];
    return this.visibleRows(layer)
      .map((row) => row[field])
      .filter((v): v is number => typeof v === "number");
  }

  private renderHistogram(layer: LayerIR): void {
    const state = this.histograms.get(layer.id);
    if (!state) return;
    const values = this.numericColumn(layer, "x");
    const fill = String(this.styles.get(layer.id)?.fill_color ?? "#1f77b4");
    if (!values.length) {
      state.counts = [];
      return;
    }
    const lo = Math.min(...values);
    const hi = Math.max(...values);
    const span = hi - lo || 1;
    const counts = new Array(state.bins).fill(0);
    for (const v of values) {
      let k = Math.floor(((v - lo) / span) * state.bins);
      if (k >= state.bins) k = state.bins - 1;
      counts[k]++;
    }
    state.counts = counts;
    const peak = Math.max(...counts, 1);
    const barWidth = (WIDTH - 2 * PAD) / state.bins;
    counts.forEach((count, i) => {
      const h = ((HEIGHT - 2 * PAD) * count) / peak;
      this.rect(
        PAD + i * barWidth,
        HEIGHT - PAD - h,
        barWidth - 1,
        h,
        fill,
        "visdsl-hist-bar",
      );
    });
  }

  private renderPoints(layer: LayerIR): void {
    const encoding = layer.encoding ?? {};
    const xField = encoding.x;
    const yField = encoding.y;
    if (typeof xField !== "string" || typeof yField !== "string") return;
    const scale = layer.color_scale;
    const colorField = typeof encoding.color === "string" ? encoding.color : null;
    const fill = String(this.styles.get(layer.id)?.fill_color ?? "#1f77b4");
    const rows = this.visibleRows(layer);
    const xs = rows.map((r) => r[xField]).filter((v): v is number => typeof v === "number");
    const ys = rows.map((r) => r[yField]).filter((v): v is number => typeof v === "number");
    if (!xs.length || !ys.length) return;
    const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
    const [y0, y1] = [Math.min(...ys), Math.max(...ys)];
    const doc = this.svg.ownerDocument;
    rows.forEach((row) => {
      const x = row[xField];
      const y = row[yField];
      if (typeof x !== "number" || typeof y !== "number") return;
      const node = doc.createElementNS(SVG_NS, "circle");
      node.setAttribute("cx", String(PAD + ((x - x0) / (x1 - x0 || 1)) * (WIDTH - 2 * PAD)));
      node.setAttribute("cy", String(HEIGHT - PAD - ((y - y0) / (y1 - y0 || 1)) * (HEIGHT - 2 * PAD)));
      node.setAttribute("r", String(this.styles.get(layer.id)?.radius ?? 3));
      let color = fill;
      if (scale && colorField && scale.type === "categorical" && scale.range) {
        const idx = scale.domain.indexOf(row[colorField] as string | number);
        if (idx >= 0) color = scale.range[idx % scale.range.length];
      }
      node.setAttribute("fill", color);
      node.setAttribute("class", "visdsl-point");
      this.svg.appendChild(node);
    });
  }

  private renderBars(layer: LayerIR): void {
    const values = this.numericColumn(layer, "y");
    const fill = String(this.styles.get(layer.id)?.fill_color ?? "#1f77b4");
    if (!values.length) return;
    const peak = Math.max(...values.map(Math.abs), 1);
    const barWidth = (WIDTH - 2 * PAD) / values.length;
    values.forEach((v, i) => {
      const h = ((HEIGHT - 2 * PAD) * Math.abs(v)) / peak;
      this.rect(PAD + i * barWidth, HEIGHT - PAD - h, barWidth - 2, h, fill, "visdsl-bar");
    });
  }

  private renderLine(layer: LayerIR): void {
    const xs = this.numericColumn(layer, "x");
    const ys = this.numericColumn(layer, "y");
    if (xs.length < 2 || ys.length < 2) return;
    const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
    const [y0, y1] = [Math.min(...ys), Math.max(...ys)];
    const pts = xs
      .map((x, i) => {
        const px = PAD + ((x - x0) / (x1 - x0 || 1)) * (WIDTH - 2 * PAD);
        const py = HEIGHT - PAD - ((ys[i] - y0) / (y1 - y0 || 1)) * (HEIGHT - 2 * PAD);
        return `${px},${py}`;
      })
      .join(" ");
    const node = this.svg.ownerDocument.createElementNS(SVG_NS, "polyline");
    node.setAttribute("points", pts);
    node.setAttribute("fill", "none");
    node.setAttribute("stroke", String(this.styles.get(layer.id)?.stroke_color ?? "#1f77b4"));
    node.setAttribute("class", "visdsl-line");
    this.svg.appendChild(node);
  }

  private renderPlaceholder(layer: LayerIR): void {
    const node = this.svg.ownerDocument.createElementNS(SVG_NS, "text");
    node.setAttribute("x", String(WIDTH / 2));
    node.setAttribute("y", String(HEIGHT / 2));
    node.setAttribute("text-anchor", "middle");
    node.setAttribute("class", "visdsl-placeholder");
    node.textContent = layer.type;
    this.svg.appendChild(node);
  }

  applyControl(layerId: string, controlId: string, value: unknown): void {
    const entry = this.view.controls.layerControls?.[layerId]?.[controlId];
    if (!entry) return;
    let applied = value;
    if (typeof applied === "number") {
      if (entry.min !== undefined) applied = Math.max(entry.min, applied as number);
      if (entry.max !== undefined) applied = Math.min(entry.max!, applied as number);
    }
    if (controlId === "bins") {
      const state = this.histograms.get(layerId);
      if (state) state.bins = Number(applied);
    }
    if (entry.edits) {
      const style = this.styles.get(layerId);
      if (style) style[entry.edits] = applied;
    }
    entry.value = applied;
    this.render();
  }

  onLink(event: LinkEvent): void {
    if (event.kind === "brush") {
      this.brushedRows = event.rows;
      this.render();
    } else if (event.kind === "point") {
      // Highlighting by id set: re-render with the point set marked.
      this.render();
    } else if (event.kind === "shared-color") {
      for (const layer of this.view.layers) {
        if (layer.color_scale && layer.color_scale.type === "categorical") {
          const assignment = event.assignment;
          layer.color_scale.range = layer.color_scale.domain.map(
            (cat) => assignment[String(cat)] ?? "#1f77b4",
          );
        }
      }
      this.render();
    }
  }

  setBrush(rows: number[] | null): void {
    this.brushedRows = rows;
    this.render();
  }

  state(): Record<string, unknown> {
    const layers: Record<string, unknown> = {};
    for (const layer of this.view.layers) {
      const table = this.table(layer);
      const entry: Record<string, unknown> = {
        type: layer.type,
        style: { ...this.styles.get(layer.id) },
        rowCount: table ? table.rows.length : 0,
        visibleRows: this.visibleRows(layer).length,
      };
      const hist = this.histograms.get(layer.id);
      if (hist) {
        entry.bins = hist.bins;
        entry.renderedBars = hist.counts.filter((c) => c > 0).length;
      }
      layers[layer.id] = entry;
    }
    return {
      backend: "chart",
      brushed: this.brushedRows !== null,
      layers,
    };
  }
}
