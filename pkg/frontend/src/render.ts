/**
 * Pure geometry for the SVG view: stroke placement for parallel lines,
 * document bounds, and the viewBox math behind pan and zoom. Everything
 * here is data in, data out, so it is testable without a DOM.
 */

import type { LayoutDocument } from "./document.js";

/** Stroke width of one metro line, matching the engine's rendered scale. */
export const STROKE = 8;

export interface ViewBox {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface StrokeSegment {
  line: number;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
}

/**
 * One offset segment per line of every edge. Lines sharing an edge run in
 * parallel, stacked perpendicular to the edge in the stored bottom-to-top
 * order, centered on the edge axis.
 */
export function edgeStrokes(doc: LayoutDocument): StrokeSegment[] {
  const pos = new Map(doc.vertices.map((v) => [v.id, { x: v.x, y: v.y }]));
  const out: StrokeSegment[] = [];
  for (const e of doc.edges) {
    const a = pos.get(e.u);
    const b = pos.get(e.v);
    if (!a || !b) continue;
    const dx = b.x - a.x;
    const dy = b.y - a.y;
    const len = Math.hypot(dx, dy);
    if (len < 1e-9) continue;
    const nx = -dy / len;
    const ny = dx / len;
    const half = (e.lines.length - 1) / 2;
    e.lines.forEach((line, i) => {
      const off = (i - half) * STROKE;
      out.push({
        line,
        x1: a.x + nx * off,
        y1: a.y + ny * off,
        x2: b.x + nx * off,
        y2: b.y + ny * off,
      });
    });
  }
  return out;
}

/** Bounding viewBox over stations, strokes, and label extents. */
export function documentBounds(doc: LayoutDocument, margin = 60): ViewBox {
  const xs: number[] = [];
  const ys: number[] = [];
  for (const v of doc.vertices) {
    xs.push(v.x - v.radius, v.x + v.radius);
    ys.push(v.y - v.radius, v.y + v.radius);
  }
  for (const s of edgeStrokes(doc)) {
    xs.push(s.x1 - STROKE, s.x2 - STROKE, s.x1 + STROKE, s.x2 + STROKE);
    ys.push(s.y1 - STROKE, s.y2 - STROKE, s.y1 + STROKE, s.y2 + STROKE);
  }
  for (const lab of doc.labels) {
    const w = 0.6 * lab.size * lab.text.length;
    xs.push(lab.leftward ? lab.x - w : lab.x + w, lab.x);
    ys.push(lab.y - 1.2 * lab.size, lab.y + 1.2 * lab.size);
  }
  if (xs.length === 0) {
    return { x: -margin, y: -margin, w: 2 * margin, h: 2 * margin };
  }
  const x0 = Math.min(...xs) - margin;
  const y0 = Math.min(...ys) - margin;
  const x1 = Math.max(...xs) + margin;
  const y1 = Math.max(...ys) + margin;
  return { x: x0, y: y0, w: x1 - x0, h: y1 - y0 };
}

/**
 * Zoom about an anchor given as fractions of the box (fx, fy in [0, 1]).
 * The document point under the anchor stays fixed; factor > 1 zooms out.
 */
export function zoomViewBox(vb: ViewBox, factor: number, fx: number, fy: number): ViewBox {
  const ax = vb.x + fx * vb.w;
  const ay = vb.y + fy * vb.h;
  const w = vb.w * factor;
  const h = vb.h * factor;
  return { x: ax - fx * w, y: ay - fy * h, w, h };
}

/** Shift by a screen-space delta, given the on-screen size of the box. */
export function panViewBox(
  vb: ViewBox,
  dxPx: number,
  dyPx: number,
  clientW: number,
  clientH: number,
): ViewBox {
  return {
    x: vb.x - (dxPx * vb.w) / clientW,
    y: vb.y - (dyPx * vb.h) / clientH,
    w: vb.w,
    h: vb.h,
  };
}

export function viewBoxAttr(vb: ViewBox): string {
  return `${vb.x} ${vb.y} ${vb.w} ${vb.h}`;
}
