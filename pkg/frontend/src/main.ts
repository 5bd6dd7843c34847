/**
 * Entry point: session setup form, the panel, and (for agent sessions)
 * the model inspector.  Lamps render exclusively from the event stream;
 * a click only posts the move and re-enables the button when the
 * response arrives.  Nothing beyond the five lamps and the counters is
 * shown for human sessions: that is the test.
 */

import { SessionClient } from "./client.js";
import { emptyViewModel, foldRecord } from "./fold.js";
import { renderModel } from "./inspector.js";
import { MOVE_NAMES } from "./encode.js";
import { mountPanel } from "./panel.js";
import type { PanelViewModel } from "./types.js";

function el<T extends HTMLElement>(selector: string): T {
  const found = document.querySelector<T>(selector);
  if (!found) {
    throw new Error(`missing element: ${selector}`);
  }
  return found;
}

function start(): void {
  const form = el<HTMLFormElement>("#setup");
  const panelRoot = el<HTMLElement>("#panel");
  const inspectorRoot = el<HTMLElement>("#inspector");
  const inspectorWrap = el<HTMLElement>("#inspector-wrap");

  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    const base = (el<HTMLInputElement>("#server").value || "").replace(/\/$/, "");
    const seed = Number(el<HTMLInputElement>("#seed").value || "0");
    const mode = el<HTMLSelectElement>("#mode").value as "human" | "agent";
    const world = Number(el<HTMLSelectElement>("#world").value);

    const client = new SessionClient(base);
    const sessionId = await client.createSession({ worldId: world, seed, mode });

    let vm: PanelViewModel = emptyViewModel();
    let inFlight = false;

    const panel = mountPanel(panelRoot, async (move) => {
      if (inFlight) {
        return; // clicks are serialized
      }
      inFlight = true;
      panel.setBusy(true);
      try {
        await client.postStep(sessionId, mode === "human" ? move : undefined);
      } catch {
        vm = { ...vm, connection: "disconnected" };
        panel.render(vm);
      } finally {
        inFlight = false;
        if (vm.connection !== "disconnected") {
          panel.setBusy(false);
        }
      }
      if (mode === "agent") {
        inspectorRoot.innerHTML = renderModel(await client.getModel(sessionId));
      }
    });
    panel.render(vm);

    const moveName = el<HTMLElement>(".move-name");
    panelRoot.addEventListener("change", () => {
      moveName.textContent = MOVE_NAMES[panel.currentMove()];
    });

    client.openEvents(
      sessionId,
      (record) => {
        vm = foldRecord(vm, record);
        panel.render(vm);
      },
      (status) => {
        vm = { ...vm, connection: status };
        panel.render(vm);
      },
    );

    inspectorWrap.hidden = mode !== "agent";
    if (mode === "agent") {
      inspectorRoot.innerHTML = renderModel(await client.getModel(sessionId));
    }
  });
}

start();
