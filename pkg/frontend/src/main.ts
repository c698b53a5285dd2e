/**
 * Entry point: load a layout document from the `?doc=` URL parameter or a
 * local file picker, then mount the viewer. Loading is asynchronous with a
 * visible loading / error state; nothing is ever written back anywhere.
 */

import { parseDocument } from "./document.js";
import { MetroViewer } from "./viewer.js";

function setStatus(host: HTMLElement, text: string): void {
  host.textContent = text;
}

function mount(host: HTMLElement, statusEl: HTMLElement, text: string): void {
  try {
    const doc = parseDocument(text);
    host.innerHTML = "";
    new MetroViewer(host, doc);
    setStatus(statusEl, `${doc.vertices.length} stations, ${doc.lines.length} lines`);
  } catch (exc) {
    setStatus(statusEl, exc instanceof Error ? exc.message : String(exc));
  }
}

async function loadUrl(host: HTMLElement, statusEl: HTMLElement, url: string): Promise<void> {
  setStatus(statusEl, `loading ${url} ...`);
  try {
    const resp = await fetch(url);
    if (!resp.ok) {
      throw new Error(`fetch failed: ${resp.status} ${resp.statusText}`);
    }
    mount(host, statusEl, await resp.text());
  } catch (exc) {
    setStatus(statusEl, exc instanceof Error ? exc.message : String(exc));
  }
}

export function boot(root: HTMLElement): void {
  const bar = document.createElement("div");
  bar.style.cssText = "display:flex;gap:12px;align-items:center;padding:8px 0;";
  const picker = document.createElement("input");
  picker.type = "file";
  picker.accept = ".json,application/json";
  bar.appendChild(picker);
  const statusEl = document.createElement("span");
  bar.appendChild(statusEl);
  root.appendChild(bar);

  const host = document.createElement("div");
  host.style.cssText = "height:calc(100vh - 70px);";
  root.appendChild(host);

  picker.addEventListener("change", () => {
    const file = picker.files?.[0];
    if (!file) return;
    setStatus(statusEl, `reading ${file.name} ...`);
    file
      .text()
      .then((text) => mount(host, statusEl, text))
      .catch((exc) => setStatus(statusEl, String(exc)));
  });

  const fromUrl = new URLSearchParams(window.location.search).get("doc");
  if (fromUrl) {
    void loadUrl(host, statusEl, fromUrl);
  } else {
    setStatus(statusEl, "pick a layout document (.json) to view");
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  boot(document.getElementById("app") as HTMLElement);
}
