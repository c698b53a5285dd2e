/**
 * Interactive SVG viewer for a layout document.
 *
 * Renders stations, parallel line strokes, and labels from the stored
 * geometry, then layers the interaction on top: pan and zoom on the canvas,
 * hover emphasis, a clickable legend, a mode selector for the five
 * set-operation filters, and tooltips with the unabbreviated station names.
 * The document itself is never mutated.
 */

import type { LayoutDocument, DocumentIndex } from "./document.js";
import { indexDocument } from "./document.js";
import type { HoverTarget, Mode, SelectionState } from "./algebra.js";
import {
  DIM_OPACITY,
  MODES,
  emphasisLines,
  emphasisSet,
  emptySelection,
} from "./algebra.js";
import type { ViewBox } from "./render.js";
import {
  STROKE,
  documentBounds,
  edgeStrokes,
  panViewBox,
  viewBoxAttr,
  zoomViewBox,
} from "./render.js";

const SVG_NS = "http://www.w3.org/2000/svg";

const MODE_LABELS: Record<Mode, string> = {
  hover: "Hover",
  intersection: "Intersection",
  union: "Union",
  complement: "Complement",
  "symmetric-difference": "Symmetric difference",
  subtract: "Subtract (Alt-click the group to remove)",
};

const STYLE = `
.smv-root { display: flex; flex-direction: column; gap: 8px; height: 100%; font: 13px/1.4 system-ui, sans-serif; }
.smv-toolbar { display: flex; gap: 12px; align-items: center; }
.smv-body { display: flex; gap: 12px; flex: 1; min-height: 0; }
.smv-canvas { flex: 1; border: 1px solid #ccc; border-radius: 4px; background: #fafafa; cursor: grab; min-width: 0; }
.smv-canvas.smv-panning { cursor: grabbing; }
.smv-legend { width: 220px; overflow-y: auto; display: flex; flex-direction: column; gap: 2px; }
.smv-legend-row { display: flex; gap: 8px; align-items: center; padding: 3px 6px; border-radius: 4px; cursor: pointer; user-select: none; }
.smv-legend-row:hover { background: #eee; }
.smv-legend-row.smv-selected { background: #dde8f8; }
.smv-legend-row.smv-secondary { background: #f8dddd; }
.smv-swatch { width: 18px; height: 8px; border-radius: 4px; flex: none; }
.smv-status { color: #666; padding: 4px 6px; }
.smv-tooltip { position: fixed; pointer-events: none; background: #222; color: #fff; padding: 3px 8px; border-radius: 4px; font-size: 12px; display: none; z-index: 10; }
`;

export class MetroViewer {
  readonly doc: LayoutDocument;

  private index: DocumentIndex;
  private state: SelectionState;
  private svg: SVGSVGElement;
  private viewBox: ViewBox;
  private homeBox: ViewBox;
  private tooltip: HTMLDivElement;
  private status: HTMLElement;
  private strokeEls: { el: SVGLineElement; line: number }[] = [];
  private stationEls = new Map<number, SVGCircleElement>();
  private labelEls = new Map<number, SVGTextElement>();
  private legendRows = new Map<number, HTMLElement>();

  constructor(container: HTMLElement, doc: LayoutDocument) {
    this.doc = doc;
    this.index = indexDocument(doc);
    this.state = emptySelection();
    this.homeBox = documentBounds(doc);
    this.viewBox = { ...this.homeBox };

    const root = document.createElement("div");
    root.className = "smv-root";
    const style = document.createElement("style");
    style.textContent = STYLE;
    root.appendChild(style);

    root.appendChild(this.buildToolbar());

    const body = document.createElement("div");
    body.className = "smv-body";
    this.svg = this.buildSvg();
    body.appendChild(this.svg);
    const legend = this.buildLegend();
    body.appendChild(legend);
    this.status = document.createElement("div");
    this.status.className = "smv-status";
    legend.appendChild(this.status);
    root.appendChild(body);

    this.tooltip = document.createElement("div");
    this.tooltip.className = "smv-tooltip";
    root.appendChild(this.tooltip);

    container.appendChild(root);
    this.wirePanZoom();
    this.applyEmphasis();
  }

  /** Current selection, exposed for tests and external toolbars. */
  selection(): SelectionState {
    return {
      mode: this.state.mode,
      selected: [...this.state.selected],
      secondary: [...this.state.secondary],
      hovered: this.state.hovered,
    };
  }

  setMode(mode: Mode): void {
    this.state.mode = mode;
    if (mode !== "subtract") {
      this.state.secondary = [];
    }
    if (mode !== "hover") {
      this.state.hovered = null;
    }
    this.applyEmphasis();
  }

  toggleSet(setId: number, secondary = false): void {
    const group =
      secondary && this.state.mode === "subtract"
        ? this.state.secondary
        : this.state.selected;
    const at = group.indexOf(setId);
    if (at >= 0) {
      group.splice(at, 1);
    } else {
      group.push(setId);
      const other =
        group === this.state.selected ? this.state.secondary : this.state.selected;
      const dup = other.indexOf(setId);
      if (dup >= 0) other.splice(dup, 1);
    }
    this.applyEmphasis();
  }

  hover(target: HoverTarget): void {
    this.state.hovered = target;
    if (this.state.mode === "hover") {
      this.applyEmphasis();
    }
  }

  resetView(): void {
    this.viewBox = { ...this.homeBox };
    this.svg.setAttribute("viewBox", viewBoxAttr(this.viewBox));
  }

  private buildToolbar(): HTMLElement {
    const bar = document.createElement("div");
    bar.className = "smv-toolbar";
    const label = document.createElement("label");
    label.textContent = "Mode: ";
    const select = document.createElement("select");
    for (const mode of MODES) {
      const opt = document.createElement("option");
      opt.value = mode;
      opt.textContent = MODE_LABELS[mode];
      select.appendChild(opt);
    }
    select.addEventListener("change", () => this.setMode(select.value as Mode));
    label.appendChild(select);
    bar.appendChild(label);

    const reset = document.createElement("button");
    reset.textContent = "Reset view";
    reset.addEventListener("click", () => this.resetView());
    bar.appendChild(reset);
    return bar;
  }

  private buildSvg(): SVGSVGElement {
    const svg = document.createElementNS(SVG_NS, "svg");
    svg.classList.add("smv-canvas");
    svg.setAttribute("viewBox", viewBoxAttr(this.viewBox));

    const colorOf = new Map(this.doc.lines.map((ln) => [ln.set, ln.color]));
    for (const seg of edgeStrokes(this.doc)) {
      const el = document.createElementNS(SVG_NS, "line");
      el.setAttribute("x1", String(seg.x1));
      el.setAttribute("y1", String(seg.y1));
      el.setAttribute("x2", String(seg.x2));
      el.setAttribute("y2", String(seg.y2));
      el.setAttribute("stroke", colorOf.get(seg.line) ?? "#999999");
      el.setAttribute("stroke-width", String(STROKE));
      el.setAttribute("stroke-linecap", "round");
      el.addEventListener("mouseenter", () => this.hover({ kind: "line", id: seg.line }));
      el.addEventListener("mouseleave", () => this.hover(null));
      svg.appendChild(el);
      this.strokeEls.push({ el, line: seg.line });
    }

    for (const v of this.doc.vertices) {
      const el = document.createElementNS(SVG_NS, "circle");
      el.setAttribute("cx", String(v.x));
      el.setAttribute("cy", String(v.y));
      el.setAttribute("r", String(v.radius));
      el.setAttribute("fill", "#ffffff");
      el.setAttribute("stroke", "#333333");
      el.setAttribute("stroke-width", "2");
      el.addEventListener("mouseenter", (ev) => {
        this.hover({ kind: "vertex", id: v.id });
        this.showTooltip(v.id, ev);
      });
      el.addEventListener("mouseleave", () => {
        this.hover(null);
        this.hideTooltip();
      });
      svg.appendChild(el);
      this.stationEls.set(v.id, el);
    }

    for (const lab of this.doc.labels) {
      const el = document.createElementNS(SVG_NS, "text");
      el.setAttribute("x", String(lab.x));
      el.setAttribute("y", String(lab.y));
      el.setAttribute("text-anchor", lab.leftward ? "end" : "start");
      el.setAttribute("dominant-baseline", "middle");
      el.setAttribute("font-size", String(lab.size));
      el.setAttribute("font-family", "Helvetica, Arial, sans-serif");
      el.setAttribute("fill", "#111111");
      if (lab.angle) {
        el.setAttribute("transform", `rotate(${lab.angle} ${lab.x} ${lab.y})`);
      }
      el.textContent = lab.text;
      el.addEventListener("mouseenter", (ev) => this.showTooltip(lab.vertex, ev));
      el.addEventListener("mouseleave", () => this.hideTooltip());
      svg.appendChild(el);
      this.labelEls.set(lab.vertex, el);
    }
    return svg;
  }

  private buildLegend(): HTMLElement {
    const legend = document.createElement("div");
    legend.className = "smv-legend";
    for (const ln of this.doc.lines) {
      const row = document.createElement("div");
      row.className = "smv-legend-row";
      const swatch = document.createElement("span");
      swatch.className = "smv-swatch";
      swatch.style.background = ln.color;
      row.appendChild(swatch);
      const name = document.createElement("span");
      name.textContent = this.index.setById.get(ln.set)?.name ?? String(ln.set);
      row.appendChild(name);
      // the legend row is a proxy for its line, for hover and for selection
      row.addEventListener("mouseenter", () => this.hover({ kind: "line", id: ln.set }));
      row.addEventListener("mouseleave", () => this.hover(null));
      row.addEventListener("click", (ev) => this.toggleSet(ln.set, ev.altKey));
      legend.appendChild(row);
      this.legendRows.set(ln.set, row);
    }
    return legend;
  }

  private wirePanZoom(): void {
    let panning = false;
    let lastX = 0;
    let lastY = 0;
    this.svg.addEventListener("mousedown", (ev) => {
      panning = true;
      lastX = ev.clientX;
      lastY = ev.clientY;
      this.svg.classList.add("smv-panning");
    });
    this.svg.addEventListener("mousemove", (ev) => {
      if (!panning) return;
      this.viewBox = panViewBox(
        this.viewBox,
        ev.clientX - lastX,
        ev.clientY - lastY,
        this.svg.clientWidth || 1,
        this.svg.clientHeight || 1,
      );
      lastX = ev.clientX;
      lastY = ev.clientY;
      this.svg.setAttribute("viewBox", viewBoxAttr(this.viewBox));
    });
    const stop = () => {
      panning = false;
      this.svg.classList.remove("smv-panning");
    };
    this.svg.addEventListener("mouseup", stop);
    this.svg.addEventListener("mouseleave", stop);
    this.svg.addEventListener("wheel", (ev) => {
      ev.preventDefault();
      const rect = this.svg.getBoundingClientRect();
      const fx = rect.width ? (ev.clientX - rect.left) / rect.width : 0.5;
      const fy = rect.height ? (ev.clientY - rect.top) / rect.height : 0.5;
      const factor = ev.deltaY < 0 ? 1 / 1.1 : 1.1;
      this.viewBox = zoomViewBox(this.viewBox, factor, fx, fy);
      this.svg.setAttribute("viewBox", viewBoxAttr(this.viewBox));
    });
  }

  private showTooltip(vertexId: number, ev: MouseEvent): void {
    const lab = this.index.labelByVertex.get(vertexId);
    const name = lab?.full_text ?? this.index.vertexById.get(vertexId)?.id;
    if (name === undefined) return;
    const sets = [...(this.index.memberSets.get(vertexId) ?? [])]
      .map((s) => this.index.setById.get(s)?.name ?? String(s))
      .join(", ");
    this.tooltip.textContent = sets ? `${name} (${sets})` : String(name);
    this.tooltip.style.left = `${ev.clientX + 12}px`;
    this.tooltip.style.top = `${ev.clientY + 12}px`;
    this.tooltip.style.display = "block";
  }

  private hideTooltip(): void {
    this.tooltip.style.display = "none";
  }

  private applyEmphasis(): void {
    const stations = emphasisSet(this.index, this.state);
    const lines = emphasisLines(this.index, this.state);
    for (const { el, line } of this.strokeEls) {
      el.setAttribute("opacity", lines.has(line) ? "1" : String(DIM_OPACITY));
    }
    for (const [id, el] of this.stationEls) {
      el.setAttribute("opacity", stations.has(id) ? "1" : String(DIM_OPACITY));
    }
    for (const [id, el] of this.labelEls) {
      el.setAttribute("opacity", stations.has(id) ? "1" : String(DIM_OPACITY));
    }
    for (const [sid, row] of this.legendRows) {
      row.classList.toggle("smv-selected", this.state.selected.includes(sid));
      row.classList.toggle("smv-secondary", this.state.secondary.includes(sid));
    }
    this.status.textContent =
      `${stations.size} of ${this.index.allVertices.size} stations emphasized`;
  }
}
