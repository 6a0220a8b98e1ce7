/** Page bootstrap: file picker and drag-and-drop for viewer bundles.
 * Fully static; no network calls.
 */

import { createApp, App } from "./app.js";
import { BundleError, parseBundle } from "./bundle.js";

let app: App | null = null;

function banner(): HTMLElement {
  let node = document.getElementById("gdaf-banner");
  if (!node) {
    node = document.createElement("div");
    node.id = "gdaf-banner";
    node.className = "banner hidden";
    document.body.prepend(node);
  }
  return node;
}

function showError(message: string): void {
  const node = banner();
  node.textContent = message;
  node.classList.remove("hidden");
}

function clearError(): void {
  banner().classList.add("hidden");
}

export function loadText(text: string): void {
  let parsed: unknown;
  try {
    parsed = JSON.parse(text);
  } catch (exc) {
    showError(`Not a JSON file: ${(exc as Error).message}`);
    return;
  }
  let bundle;
  try {
    bundle = parseBundle(parsed);
  } catch (exc) {
    if (exc instanceof BundleError) {
      showError(`Malformed viewer bundle: ${exc.message}`);
      return; // no partial state: the previous app (if any) stays intact
    }
    throw exc;
  }
  clearError();
  const root = document.getElementById("gdaf-root");
  if (!root) return;
  if (app) app.destroy();
  app = createApp(root, bundle);
}

function loadFile(file: File): void {
  file
    .text()
    .then(loadText)
    .catch((exc) => showError(`Could not read ${file.name}: ${exc}`));
}

function init(): void {
  const picker = document.getElementById("gdaf-file") as HTMLInputElement | null;
  picker?.addEventListener("change", () => {
    const file = picker.files?.[0];
    if (file) loadFile(file);
  });

  document.body.addEventListener("dragover", (ev) => ev.preventDefault());
  document.body.addEventListener("drop", (ev) => {
    ev.preventDefault();
    const file = ev.dataTransfer?.files?.[0];
    if (file) loadFile(file);
  });
}

if (typeof document !== "undefined") {
  if (document.readyState === "loading") {
    document.addEventListener("DOMContentLoaded", init);
  } else {
    init();
  }
}
