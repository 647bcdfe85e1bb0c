/** Shapes of the embedded render IR (the compiler's wire contract). */

export interface ColorStop {
  r: number;
  g: number;
  b: number;
  s: number;
}

export interface OpacityStop {
  a: number;
  s: number;
}

export interface LinkBinding {
  kind: string; // brush-filter | point-highlight | shared-color | shared-tf | slice-index
  channel: string;
  members: string[];
  emitters?: string[];
  axes?: string[];
}

export interface LayerIR {
  type: string;
  id: string;
  from: string;
  url?: string | null;
  data?: string | null;
  field?: string | null;
  range?: [number, number];
  axes?: string[];
  mode?: string;
  encoding?: Record<string, string | string[]>;
  encode?: Record<string, string | string[]>;
  style: Record<string, unknown>;
  domains?: Record<string, unknown>;
  color_scale?: {
    field: string;
    type: string;
    domain: (string | number)[];
    range?: string[];
    scheme?: string;
  };
  ctf?: ColorStop[];
  otf?: OpacityStop[];
  _palette?: string;
  sampleDistance?: number;
  seedSpec?: { n: number; region: Record<string, unknown> };
  integrator?: { step: number; max_steps: number };
  [key: string]: unknown;
}

export interface ControlEntry {
  kind?: string;
  value?: unknown;
  min?: number;
  max?: number;
  step?: number;
  options?: string[];
  edits?: string;
  deferred?: boolean;
  confirm?: boolean;
  [key: string]: unknown;
}

export interface ViewControls {
  camera?: { mode: string };
  sampleDistance?: { min: number; max: number; default: number; step: number };
  palette?: string;
  ctf_stops?: ColorStop[];
  otf_stops?: OpacityStop[];
  colors?: Record<string, Record<string, unknown>>;
  layerControls?: Record<string, Record<string, ControlEntry>>;
}

export interface ViewIR {
  viewId: string;
  backend: "d3" | "vtkjs";
  mode?: string;
  layers: LayerIR[];
  controls: ViewControls;
  linkBindings: string[];
}

export interface SourceIR {
  kind: string;
  format: string;
  url: string | null;
}

export interface RenderIR {
  backend: "d3" | "vtkjs" | "multi";
  views: ViewIR[];
  links: LinkBinding[];
  sources: Record<string, SourceIR>;
}

export type LinkEvent =
  | { kind: "slice-index"; channel: string; origin: string; axis: string; index: number }
  | { kind: "brush"; channel: string; origin: string; rows: number[] | null }
  | { kind: "point"; channel: string; origin: string; ids: (string | number)[] | null }
  | {
      kind: "shared-tf";
      channel: string;
      origin: string;
      palette?: string;
      ctf?: ColorStop[];
      otf?: OpacityStop[];
    }
  | { kind: "shared-color"; channel: string; origin: string; assignment: Record<string, string> };
