/** Bundle entry point: boots on DOM ready and exposes the runtime API. */

import { boot, Runtime } from "./runtime";

export { ChartView } from "./charts";
export { LinkBus } from "./links";
export { SpatialView } from "./spatial";
export { boot, Runtime } from "./runtime";
export { parseCsv, readDataBlocks, readEmbeddedIR } from "./data";
export type { LinkEvent, RenderIR, ViewIR } from "./types";

declare const document: Document | undefined;

if (typeof document !== "undefined") {
  const start = () => {
    boot(document!);
  };
  if (document.readyState === "loading") {
    document.addEventListener("DOMContentLoaded", start);
  } else {
    start();
  }
}
