/**
 * Layout document types and parsing.
 *
 * The document is the JSON artifact the layout engine writes (schema
 * version 1). The viewer consumes nothing else: all geometry is already in
 * rendered space, set membership is stored per vertex, and per-edge line
 * orders are the bottom-to-top stacking of parallel strokes.
 */

export const SCHEMA_VERSION = 1;

export interface ElementRecord {
  id: number;
  name: string;
}

export interface SetRecord {
  id: number;
  name: string;
}

export interface VertexRecord {
  id: number;
  x: number;
  y: number;
  radius: number;
  sets: number[];
}

export interface EdgeRecord {
  u: number;
  v: number;
  lines: number[];
}

export interface LineRecord {
  set: number;
  color: string;
  stations: number[];
  terminus_sides: number[];
}

export interface LabelRecord {
  vertex: number;
  text: string;
  full_text: string;
  x: number;
  y: number;
  angle: number;
  leftward: boolean;
  size: number;
}

export interface LayoutDocument {
  schema_version: number;
  elements: ElementRecord[];
  sets: SetRecord[];
  vertices: VertexRecord[];
  edges: EdgeRecord[];
  lines: LineRecord[];
  labels: LabelRecord[];
  font_size: number;
  label_fallback: boolean;
  metrics: Record<string, unknown>;
  provenance: Record<string, unknown>;
}

export class DocumentError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "DocumentError";
  }
}

const REQUIRED_FIELDS = [
  "elements",
  "sets",
  "vertices",
  "edges",
  "lines",
  "labels",
  "font_size",
  "label_fallback",
  "metrics",
] as const;

function isRecord(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

function asArray(value: unknown, field: string): Record<string, unknown>[] {
  if (!Array.isArray(value)) {
    throw new DocumentError(`field '${field}' must be an array`);
  }
  for (const entry of value) {
    if (!isRecord(entry)) {
      throw new DocumentError(`field '${field}' must contain objects`);
    }
  }
  return value as Record<string, unknown>[];
}

/** Parse and cross-validate a serialized layout document. */
export function parseDocument(text: string): LayoutDocument {
  let payload: unknown;
  try {
    payload = JSON.parse(text);
  } catch (exc) {
    const msg = exc instanceof Error ? exc.message : String(exc);
    throw new DocumentError(`malformed document JSON: ${msg}`);
  }
  if (!isRecord(payload)) {
    throw new DocumentError("document root must be an object");
  }
  const version = payload["schema_version"];
  if (version !== SCHEMA_VERSION) {
    throw new DocumentError(
      `unsupported schema_version ${JSON.stringify(version)}, expected ${SCHEMA_VERSION}`,
    );
  }
  for (const key of REQUIRED_FIELDS) {
    if (!(key in payload)) {
      throw new DocumentError(`missing field '${key}'`);
    }
  }

  const elements = asArray(payload["elements"], "elements");
  const sets = asArray(payload["sets"], "sets");
  const vertices = asArray(payload["vertices"], "vertices");
  const edges = asArray(payload["edges"], "edges");
  const lines = asArray(payload["lines"], "lines");
  const labels = asArray(payload["labels"], "labels");

  const elemIds = new Set(elements.map((e) => e["id"] as number));
  const setIds = new Set(sets.map((s) => s["id"] as number));
  const vertexIds = new Set(vertices.map((v) => v["id"] as number));

  for (const id of vertexIds) {
    if (!elemIds.has(id)) {
      throw new DocumentError(`vertex ${id} references an unknown element id`);
    }
  }
  for (const v of vertices) {
    const bad = (v["sets"] as number[]).filter((s) => !setIds.has(s));
    if (bad.length) {
      throw new DocumentError(`vertex ${v["id"]} references unknown sets ${JSON.stringify(bad)}`);
    }
  }
  for (const e of edges) {
    if (!vertexIds.has(e["u"] as number) || !vertexIds.has(e["v"] as number)) {
      throw new DocumentError(`edge (${e["u"]}, ${e["v"]}) references unknown vertices`);
    }
    const bad = (e["lines"] as number[]).filter((s) => !setIds.has(s));
    if (bad.length) {
      throw new DocumentError(
        `edge (${e["u"]}, ${e["v"]}) references unknown lines ${JSON.stringify(bad)}`,
      );
    }
  }
  for (const ln of lines) {
    if (!setIds.has(ln["set"] as number)) {
      throw new DocumentError(`line references unknown set ${ln["set"]}`);
    }
    const bad = (ln["stations"] as number[]).filter((v) => !vertexIds.has(v));
    if (bad.length) {
      throw new DocumentError(
        `line ${ln["set"]} references unknown stations ${JSON.stringify(bad)}`,
      );
    }
  }
  for (const lab of labels) {
    if (!vertexIds.has(lab["vertex"] as number)) {
      throw new DocumentError(`label references unknown vertex ${lab["vertex"]}`);
    }
  }

  return {
    schema_version: version,
    elements: elements as unknown as ElementRecord[],
    sets: sets as unknown as SetRecord[],
    vertices: vertices as unknown as VertexRecord[],
    edges: edges as unknown as EdgeRecord[],
    lines: lines as unknown as LineRecord[],
    labels: labels as unknown as LabelRecord[],
    font_size: payload["font_size"] as number,
    label_fallback: payload["label_fallback"] as boolean,
    metrics: (payload["metrics"] ?? {}) as Record<string, unknown>,
    provenance: (payload["provenance"] ?? {}) as Record<string, unknown>,
  };
}

/** Lookup tables the viewer and the set algebra share. */
export interface DocumentIndex {
  doc: LayoutDocument;
  setById: Map<number, SetRecord>;
  vertexById: Map<number, VertexRecord>;
  lineBySet: Map<number, LineRecord>;
  labelByVertex: Map<number, LabelRecord>;
  /** set id -> ids of member vertices */
  members: Map<number, Set<number>>;
  /** vertex id -> ids of sets it belongs to */
  memberSets: Map<number, Set<number>>;
  allVertices: Set<number>;
  allSets: Set<number>;
}

export function indexDocument(doc: LayoutDocument): DocumentIndex {
  const setById = new Map(doc.sets.map((s) => [s.id, s]));
  const vertexById = new Map(doc.vertices.map((v) => [v.id, v]));
  const lineBySet = new Map(doc.lines.map((ln) => [ln.set, ln]));
  const labelByVertex = new Map(doc.labels.map((lab) => [lab.vertex, lab]));
  const members = new Map<number, Set<number>>();
  for (const s of doc.sets) {
    members.set(s.id, new Set());
  }
  const memberSets = new Map<number, Set<number>>();
  for (const v of doc.vertices) {
    memberSets.set(v.id, new Set(v.sets));
    for (const s of v.sets) {
      members.get(s)?.add(v.id);
    }
  }
  return {
    doc,
    setById,
    vertexById,
    lineBySet,
    labelByVertex,
    members,
    memberSets,
    allVertices: new Set(vertexById.keys()),
    allSets: new Set(setById.keys()),
  };
}
