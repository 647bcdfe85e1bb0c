/** Mounting, control application and link propagation over a parsed IR. */

import { ChartView } from "./charts";
import { buildControlPanel } from "./controls";
import {
  DataPayload,
  TableData,
  readDataBlocks,
  readEmbeddedIR,
  tableFromPayload,
} from "./data";
import { LinkBus } from "./links";
import { SpatialView } from "./spatial";
import type { LinkEvent, RenderIR, ViewIR } from "./types";

export type MountedView = ChartView | SpatialView;

export class Runtime {
  readonly ir: RenderIR;
  readonly views = new Map<string, MountedView>();
  readonly bus = new LinkBus();
  private container: HTMLElement;
  private tables = new Map<string, TableData>();
  private errors = new Map<string, string>();

  constructor(ir: RenderIR, container: HTMLElement, data?: Map<string, DataPayload>) {
    this.ir = ir;
    this.container = container;
    if (data) {
      data.forEach((payload, source) => {
        const table = tableFromPayload(payload);
        if (table) this.tables.set(source, table);
      });
    }
    this.mountAll();
  }

  private cellFor(view: ViewIR): HTMLElement {
    const doc = this.container.ownerDocument;
    let cell = doc.getElementById(`visdsl-view-${view.viewId}`);
    if (!cell) {
      cell = doc.createElement("div");
      cell.className = "visdsl-cell";
      cell.id = `visdsl-view-${view.viewId}`;
      this.container.appendChild(cell);
    }
    return cell as HTMLElement;
  }

  private mountAll(): void {
    for (const view of this.ir.views) {
      const cell = this.cellFor(view);
      try {
        const mounted =
          view.backend === "vtkjs"
            ? new SpatialView(view, cell)
            : new ChartView(view, this.tables, cell);
        this.views.set(view.viewId, mounted);
        const panel = buildControlPanel(
          cell.ownerDocument,
          view,
          (layerId, controlId, value) =>
            this.applyControl(view.viewId, controlId, value, layerId ?? undefined),
        );
        cell.appendChild(panel);
      } catch (err) {
        // A failed view must not take down its siblings.
        this.errors.set(view.viewId, String(err));
        const note = cell.ownerDocument.createElement("div");
        note.className = "visdsl-view-error";
        note.textContent = `failed to mount ${view.viewId}: ${String(err)}`;
        cell.appendChild(note);
      }
    }
    for (const binding of this.ir.links) {
      for (const member of binding.members) {
        const view = this.views.get(member);
        if (!view) continue;
        this.bus.subscribe(binding.channel, member, (event) => view.onLink(event));
      }
    }
  }

  unmount(): void {
    this.views.forEach((view) => {
      view.dispose();
      this.bus.unsubscribe(view.viewId);
    });
    this.views.clear();
    this.container
      .querySelectorAll(".visdsl-view-title, .visdsl-controls, .visdsl-view-error")
      .forEach((node) => node.remove());
  }

  applyControl(
    viewId: string,
    controlId: string,
    value: unknown,
    layerId?: string,
  ): void {
    const view = this.views.get(viewId);
    if (!view) return;
    if (view instanceof SpatialView) {
      view.applyControl(controlId, value, layerId);
    } else if (layerId) {
      view.applyControl(layerId, controlId, value);
    }
  }

  propagateLink(channel: string, event: Omit<LinkEvent, "channel">): void {
    this.bus.publish({ ...event, channel } as LinkEvent);
  }

  state(): Record<string, unknown> {
    const views: Record<string, unknown> = {};
    this.views.forEach((view, id) => {
      views[id] = view.state();
    });
    this.errors.forEach((message, id) => {
      views[id] = { error: message };
    });
    return {
      backend: this.ir.backend,
      views,
      channels: this.bus.channels(),
    };
  }
}

export interface BootResult {
  runtime: Runtime | null;
  error?: string;
}

/** Boot from a bundle document: embedded IR block + data blocks. */
export function boot(doc: Document): BootResult {
  const ir = readEmbeddedIR(doc);
  if (!ir) return { runtime: null, error: "no embedded IR block" };
  const grid =
    doc.getElementById("visdsl-grid") ?? (doc.body as unknown as HTMLElement);
  const data = readDataBlocks(doc);
  const runtime = new Runtime(ir, grid as HTMLElement, data);
  (doc.defaultView as unknown as Record<string, unknown> | null | undefined) &&
    ((doc.defaultView as unknown as Record<string, unknown>)["visdslState"] = () =>
      runtime.state());
  (globalThis as Record<string, unknown>)["visdslState"] = () => runtime.state();
  return { runtime };
}
