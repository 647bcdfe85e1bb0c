/** Spatial views: state-faithful interpretation of volume/slice/contour
 * layers.
 *
 * The full ray-casting stack is out of reach in a headless DOM, so
 * spatial views keep the complete rendering state (palette, transfer
 * function stops, sample distance, per-axis slice indices, staged
 * integration parameters) authoritative and draw a structural
 * placeholder.  Control edits and link events mutate exactly the state a
 * GPU backend would read.
 */

import type { ColorStop, ControlEntry, LinkEvent, OpacityStop, ViewIR } from "./types";

export class SpatialView {
  readonly viewId: string;
  readonly backendClass = "spatial";
  palette: string;
  ctf: ColorStop[];
  otf: OpacityStop[];
  sampleDistance: number | null;
  cameraMode: string;
  sliceIndex: Record<string, number> = {};
  private staged = new Map<string, Map<string, unknown>>();
  private controlValues = new Map<string, Map<string, unknown>>();
  private body: HTMLElement;

  constructor(readonly view: ViewIR, readonly cell: HTMLElement) {
    this.viewId = view.viewId;
    const controls = view.controls;
    this.palette = controls.palette ?? "viridis";
    this.ctf = controls.ctf_stops ? [...controls.ctf_stops] : [];
    this.otf = controls.otf_stops ? [...controls.otf_stops] : [];
    this.sampleDistance = controls.sampleDistance?.default ?? null;
    this.cameraMode = controls.camera?.mode ?? "trackball";

    for (const [layerId, entries] of Object.entries(controls.layerControls ?? {})) {
      const values = new Map<string, unknown>();
      for (const [controlId, entry] of Object.entries(entries)) {
        if (entry.value !== undefined) values.set(controlId, entry.value);
        const m = controlId.match(/^sliceIndex(XY|XZ|YZ)$/);
        if (m && typeof entry.value === "number") {
          this.sliceIndex[m[1]] = entry.value;
        }
      }
      this.controlValues.set(layerId, values);
    }

    const doc = cell.ownerDocument;
    const title = doc.createElement("div");
    title.className = "visdsl-view-title";
    title.textContent = view.viewId;
    cell.appendChild(title);
    this.body = doc.createElement("div");
    this.body.className = "visdsl-spatial-body";
    this.body.setAttribute("data-camera", this.cameraMode);
    cell.appendChild(this.body);
    this.render();
  }

  dispose(): void {
    this.body.remove();
  }

  render(): void {
    const doc = this.body.ownerDocument;
    while (this.body.firstChild) this.body.removeChild(this.body.firstChild);
    for (const layer of this.view.layers) {
      const node = doc.createElement("div");
      node.className = `visdsl-spatial-layer visdsl-${layer.type}`;
      node.setAttribute("data-layer", layer.id);
      const bits = [layer.type];
      if (layer.field) bits.push(String(layer.field));
      if (layer.type === "slice" && layer.axes) {
        const indices = (layer.axes as string[])
          .filter((a) => a in this.sliceIndex)
          .map((a) => `${a}:${this.sliceIndex[a]}`)
          .join(" ");
        bits.push(indices);
      }
      if (layer.type === "volume") bits.push(this.palette);
      node.textContent = bits.join(" | ");
      this.body.appendChild(node);
    }
  }

  private controlEntry(layerId: string, controlId: string): ControlEntry | undefined {
    return this.view.controls.layerControls?.[layerId]?.[controlId];
  }

  /** View-level control ids: sampleDistance, palette; others are per-layer. */
  applyControl(controlId: string, value: unknown, layerId?: string): void {
    if (controlId === "sampleDistance") {
      const spec = this.view.controls.sampleDistance;
      let v = Number(value);
      if (spec) v = Math.min(spec.max, Math.max(spec.min, v));
      this.sampleDistance = v;
      this.render();
      return;
    }
    if (controlId === "palette") {
      this.palette = String(value);
      this.render();
      return;
    }
    if (controlId === "ctf_stops") {
      this.ctf = value as ColorStop[];
      this.render();
      return;
    }
    if (controlId === "otf_stops") {
      this.otf = value as OpacityStop[];
      this.render();
      return;
    }
    if (!layerId) return;
    const entry = this.controlEntry(layerId, controlId);
    if (!entry) return;
    let applied = value;
    if (typeof applied === "number") {
      if (entry.min !== undefined) applied = Math.max(entry.min, applied as number);
      if (entry.max !== undefined) applied = Math.min(entry.max!, applied as number);
    }
    if (entry.kind === "button") {
      if (controlId === "recalculate") this.commitStaged(layerId);
      return;
    }
    if (entry.confirm) {
      // Expensive controls stage until the user confirms.
      if (!this.staged.has(layerId)) this.staged.set(layerId, new Map());
      this.staged.get(layerId)!.set(controlId, applied);
      return;
    }
    this.commitControl(layerId, controlId, applied);
  }

  private commitControl(layerId: string, controlId: string, value: unknown): void {
    this.controlValues.get(layerId)?.set(controlId, value);
    const entry = this.controlEntry(layerId, controlId);
    if (entry) entry.value = value;
    const m = controlId.match(/^sliceIndex(XY|XZ|YZ)$/);
    if (m && typeof value === "number") this.sliceIndex[m[1]] = value;
    this.render();
  }

  private commitStaged(layerId: string): void {
    const staged = this.staged.get(layerId);
    if (!staged) return;
    staged.forEach((value, controlId) => this.commitControl(layerId, controlId, value));
    staged.clear();
  }

  stagedControls(layerId: string): Record<string, unknown> {
    const staged = this.staged.get(layerId);
    return staged ? Object.fromEntries(staged) : {};
  }

  controlValue(layerId: string, controlId: string): unknown {
    return this.controlValues.get(layerId)?.get(controlId);
  }

  onLink(event: LinkEvent): void {
    if (event.kind === "slice-index") {
      let index = event.index;
      for (const layer of this.view.layers) {
        if (layer.type !== "slice") continue;
        const entry = this.controlEntry(layer.id, `sliceIndex${event.axis}`);
        if (entry) {
          if (entry.min !== undefined) index = Math.max(entry.min, index);
          if (entry.max !== undefined) index = Math.min(entry.max, index);
          this.commitControl(layer.id, `sliceIndex${event.axis}`, index);
          return;
        }
      }
      this.sliceIndex[event.axis] = index;
      this.render();
    } else if (event.kind === "shared-tf") {
      if (event.palette) this.palette = event.palette;
      if (event.ctf) this.ctf = [...event.ctf];
      if (event.otf) this.otf = [...event.otf];
      this.render();
    }
  }

  state(): Record<string, unknown> {
    const layers: Record<string, unknown> = {};
    for (const layer of this.view.layers) {
      layers[layer.id] = {
        type: layer.type,
        field: layer.field ?? null,
        staged: this.stagedControls(layer.id),
        controls: Object.fromEntries(this.controlValues.get(layer.id) ?? []),
      };
    }
    return {
      backend: "spatial",
      camera: this.cameraMode,
      palette: this.palette,
      sampleDistance: this.sampleDistance,
      sliceIndex: { ...this.sliceIndex },
      ctfStops: this.ctf.length,
      otfStops: this.otf.length,
      layers,
    };
  }
}
