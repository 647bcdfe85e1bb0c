/** Control panel DOM: one input per generated control, wired back to the
 * owning view.  Deferred controls are rendered but marked; confirm
 * controls stage their value until the layer's confirm button fires.
 */

import type { ControlEntry, ViewIR } from "./types";

export type ControlSink = (
  layerId: string | null,
  controlId: string,
  value: unknown,
) => void;

function inputFor(
  doc: Document,
  controlId: string,
  entry: ControlEntry,
  onChange: (value: unknown) => void,
): HTMLElement {
  const wrap = doc.createElement("label");
  wrap.className = "visdsl-control";
  wrap.setAttribute("data-control", controlId);
  if (entry.deferred) wrap.setAttribute("data-deferred", "true");
  if (entry.confirm) wrap.setAttribute("data-confirm", "true");
  const caption = doc.createElement("span");
  caption.textContent = controlId;
  wrap.appendChild(caption);

  const kind = entry.kind ?? "slider";
  if (kind === "button") {
    const button = doc.createElement("button");
    button.textContent = controlId;
    button.addEventListener("click", () => onChange(true));
    wrap.appendChild(button);
    return wrap;
  }
  const input = doc.createElement("input");
  if (kind === "slider") {
    input.type = "range";
    if (entry.min !== undefined) input.min = String(entry.min);
    if (entry.max !== undefined) input.max = String(entry.max);
    if (entry.step !== undefined) input.step = String(entry.step);
    input.value = String(entry.value ?? 0);
    input.addEventListener("input", () => onChange(Number(input.value)));
  } else if (kind === "color" || kind === "rgba") {
    input.type = "color";
    input.value = String(entry.value ?? "#000000");
    input.addEventListener("input", () => onChange(input.value));
  } else if (kind === "toggle") {
    input.type = "checkbox";
    input.checked = Boolean(entry.value);
    input.addEventListener("change", () => onChange(input.checked));
  } else if (kind === "dropdown") {
    const select = doc.createElement("select");
    for (const option of entry.options ?? []) {
      const node = doc.createElement("option");
      node.value = option;
      node.textContent = option;
      if (option === entry.value) node.selected = true;
      select.appendChild(node);
    }
    select.addEventListener("change", () => onChange(select.value));
    wrap.appendChild(select);
    return wrap;
  } else {
    input.type = "text";
    input.value = entry.value === undefined ? "" : String(entry.value);
    input.addEventListener("change", () => onChange(input.value));
  }
  wrap.appendChild(input);
  return wrap;
}

export function buildControlPanel(
  doc: Document,
  view: ViewIR,
  sink: ControlSink,
): HTMLElement {
  const panel = doc.createElement("div");
  panel.className = "visdsl-controls";
  panel.setAttribute("data-view", view.viewId);

  const controls = view.controls;
  if (controls.sampleDistance) {
    const spec = controls.sampleDistance;
    panel.appendChild(
      inputFor(
        doc,
        "sampleDistance",
        {
          kind: "slider",
          value: spec.default,
          min: spec.min,
          max: spec.max,
          step: spec.step,
        },
        (value) => sink(null, "sampleDistance", value),
      ),
    );
  }
  if (controls.palette !== undefined && controls.camera) {
    panel.appendChild(
      inputFor(
        doc,
        "palette",
        {
          kind: "dropdown",
          value: controls.palette,
          options: [
            "viridis", "inferno", "magma", "plasma", "turbo",
            "grayscale", "Greens", "RdYlBu",
          ],
        },
        (value) => sink(null, "palette", value),
      ),
    );
  }
  for (const [layerId, entries] of Object.entries(controls.layerControls ?? {})) {
    for (const [controlId, entry] of Object.entries(entries)) {
      panel.appendChild(
        inputFor(doc, controlId, entry, (value) => sink(layerId, controlId, value)),
      );
    }
  }
  return panel;
}
