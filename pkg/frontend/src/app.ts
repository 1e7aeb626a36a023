/**
 * Browser entry point: binds the console state machine to the page.
 *
 * This is the only module that touches the DOM. Everything it renders
 * comes back from the controller as HTML strings, so the interesting
 * logic stays testable without a browser.
 */

import { ConsultClient } from "./api.js";
import { ConsultationConsole, type View } from "./controller.js";

function region(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (el === null) {
    throw new Error(`missing page region #${id}`);
  }
  return el;
}

function makeView(): View {
  const evidence = region("evidence");
  const diagnoses = region("diagnoses");
  const drawer = region("drawer");
  const overlay = region("overlay");
  const toasts = region("toasts");
  return {
    evidence: (html) => {
      evidence.innerHTML = html;
    },
    diagnoses: (html) => {
      diagnoses.innerHTML = html;
    },
    drawer: (html) => {
      drawer.innerHTML = html;
    },
    overlay: (html) => {
      overlay.innerHTML = html;
    },
    toast: (message) => {
      const note = document.createElement("div");
      note.className = "toast";
      note.textContent = message;
      toasts.appendChild(note);
      setTimeout(() => note.remove(), 6000);
    },
  };
}

function panelEdit(console_: ConsultationConsole, row: HTMLElement): void {
  const frame = row.dataset.frame;
  const select = row.querySelector<HTMLSelectElement>('[data-role="element"]');
  const degree = row.querySelector<HTMLInputElement>('[data-role="degree"]');
  if (frame !== undefined && select !== null && degree !== null) {
    console_.setEntry(frame, select.value, degree.value);
  }
}

export function boot(base: string): ConsultationConsole {
  const client = new ConsultClient(base);
  const console_ = new ConsultationConsole(client, makeView());

  document.addEventListener("click", (event) => {
    const target = event.target;
    if (!(target instanceof HTMLElement)) return;
    const button = target.closest<HTMLElement>("[data-action]");
    if (button === null || button.hasAttribute("disabled")) return;
    switch (button.dataset.action) {
      case "commit-evidence":
        void console_.commitEvidence();
        break;
      case "whatif":
        void console_.whatif();
        break;
      case "commit-whatif":
        void console_.commitWhatif();
        break;
      case "discard-whatif":
        console_.discardWhatif();
        break;
      case "explain":
        if (button.dataset.hypothesis !== undefined) {
          void console_.explain(button.dataset.hypothesis);
        }
        break;
      case "expand":
        void console_.expand();
        break;
    }
  });

  document.addEventListener("change", (event) => {
    const target = event.target;
    if (!(target instanceof HTMLElement)) return;
    const row = target.closest<HTMLElement>(".evidence-row");
    if (row !== null) {
      panelEdit(console_, row);
    }
  });

  void console_.start().catch((error: unknown) => {
    region("diagnoses").textContent =
      `could not reach the consultation service: ${String(error)}`;
  });
  return console_;
}

boot(window.location.origin);
