/**
 * Selection state and emphasis algebra.
 *
 * The emphasized station set is a pure function of (document, selection):
 * nothing here touches the DOM or mutates the document. Five set-operation
 * modes filter by the chosen sets; hover mode emphasizes whatever is under
 * the pointer. Mode emphasis and hover emphasis are exclusive: while a
 * set-operation mode is active, hover state is ignored.
 */

import type { DocumentIndex } from "./document.js";

export type Mode =
  | "hover"
  | "intersection"
  | "union"
  | "complement"
  | "symmetric-difference"
  | "subtract";

export const MODES: readonly Mode[] = [
  "hover",
  "intersection",
  "union",
  "complement",
  "symmetric-difference",
  "subtract",
];

export type HoverTarget =
  | { kind: "vertex"; id: number }
  | { kind: "line"; id: number }
  | null;

export interface SelectionState {
  mode: Mode;
  /** primary group of set ids */
  selected: number[];
  /** second group, only meaningful (and only allowed) in subtract mode */
  secondary: number[];
  hovered: HoverTarget;
}

/** Opacity applied to everything outside the emphasized subset. */
export const DIM_OPACITY = 0.15;

export function emptySelection(mode: Mode = "hover"): SelectionState {
  return { mode, selected: [], secondary: [], hovered: null };
}

/** Enforce the selection invariants; throws on a malformed state. */
export function checkSelection(state: SelectionState): SelectionState {
  if (!MODES.includes(state.mode)) {
    throw new Error(`unknown mode '${state.mode}'`);
  }
  if (state.secondary.length > 0 && state.mode !== "subtract") {
    throw new Error("secondary set group is only allowed in subtract mode");
  }
  return state;
}

function unionOf(index: DocumentIndex, setIds: number[]): Set<number> {
  const out = new Set<number>();
  for (const sid of setIds) {
    for (const v of index.members.get(sid) ?? []) {
      out.add(v);
    }
  }
  return out;
}

function intersectionOf(index: DocumentIndex, setIds: number[]): Set<number> {
  if (setIds.length === 0) {
    return new Set();
  }
  let out = new Set(index.members.get(setIds[0]) ?? []);
  for (const sid of setIds.slice(1)) {
    const next = index.members.get(sid) ?? new Set<number>();
    out = new Set([...out].filter((v) => next.has(v)));
  }
  return out;
}

function difference(a: Set<number>, b: Set<number>): Set<number> {
  return new Set([...a].filter((v) => !b.has(v)));
}

/**
 * Stations emphasized by a hover target.
 *
 * Hovering a line emphasizes its stations; hovering a station emphasizes
 * every set it belongs to, so the result is the union of those sets'
 * stations. No target means nothing is filtered: everything stays at full
 * opacity. Legend entries are proxies for their lines and produce line
 * targets.
 */
export function hoverEmphasis(index: DocumentIndex, target: HoverTarget): Set<number> {
  if (target === null) {
    return new Set(index.allVertices);
  }
  if (target.kind === "line") {
    return new Set(index.members.get(target.id) ?? []);
  }
  const sets = index.memberSets.get(target.id);
  if (sets === undefined) {
    return new Set();
  }
  const out = unionOf(index, [...sets]);
  out.add(target.id);
  return out;
}

/**
 * Stations emphasized by the current selection.
 *
 * With an empty primary group no filter is active and every station is
 * emphasized, whatever the mode; the combo box alone should not blank the
 * map. Otherwise: intersection keeps stations in every chosen set, union in
 * at least one, complement those in none, symmetric-difference the union
 * minus the intersection, and subtract the primary union minus the
 * secondary union.
 */
export function emphasisSet(index: DocumentIndex, state: SelectionState): Set<number> {
  checkSelection(state);
  if (state.mode === "hover") {
    return hoverEmphasis(index, state.hovered);
  }
  if (state.selected.length === 0) {
    return new Set(index.allVertices);
  }
  switch (state.mode) {
    case "intersection":
      return intersectionOf(index, state.selected);
    case "union":
      return unionOf(index, state.selected);
    case "complement":
      return difference(index.allVertices, unionOf(index, state.selected));
    case "symmetric-difference":
      return difference(
        unionOf(index, state.selected),
        intersectionOf(index, state.selected),
      );
    case "subtract":
      return difference(
        unionOf(index, state.selected),
        unionOf(index, state.secondary),
      );
  }
  return new Set(index.allVertices);
}

/**
 * Lines kept at full opacity for the current selection.
 *
 * Hover has explicit rules: a hovered line is the only emphasized line, a
 * hovered station emphasizes the lines it belongs to, no hover emphasizes
 * everything. In the set-operation modes a line stays emphasized while it
 * still covers at least one emphasized station, so strokes fade exactly
 * where no station of interest remains.
 */
export function emphasisLines(index: DocumentIndex, state: SelectionState): Set<number> {
  checkSelection(state);
  if (state.mode === "hover") {
    if (state.hovered === null) {
      return new Set(index.allSets);
    }
    if (state.hovered.kind === "line") {
      return new Set([state.hovered.id]);
    }
    return new Set(index.memberSets.get(state.hovered.id) ?? []);
  }
  if (state.selected.length === 0) {
    return new Set(index.allSets);
  }
  const emphasized = emphasisSet(index, state);
  const out = new Set<number>();
  for (const [sid, stations] of index.members) {
    for (const v of stations) {
      if (emphasized.has(v)) {
        out.add(sid);
        break;
      }
    }
  }
  return out;
}
