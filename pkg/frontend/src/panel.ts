/**
 * DOM glue for the test panel: five lamps, three checkboxes, one button.
 * All state comes from the view model; the only extra behavior here is
 * the 400 ms visual flash on the event lamps (the model keeps one-step
 * semantics regardless of how long the highlight glows).
 */

import { moveFromCheckboxes } from "./encode.js";
import type { PanelViewModel } from "./types.js";

export const FLASH_MS = 400;

const LAMP_ORDER = ["cross", "o", "victory", "loss", "badMove"] as const;
const LAMP_LABELS: Record<(typeof LAMP_ORDER)[number], string> = {
  cross: "Cross",
  o: "O",
  victory: "Victory",
  loss: "Loss",
  badMove: "Bad Move",
};
const FLASH_LAMPS: readonly (typeof LAMP_ORDER)[number][] = ["victory", "loss", "badMove"];

export interface PanelHandle {
  render(vm: PanelViewModel): void;
  setBusy(busy: boolean): void;
  readonly currentMove: () => number;
}

export function mountPanel(
  root: HTMLElement,
  onNextStep: (move: number) => void,
): PanelHandle {
  root.innerHTML = `
    <div class="lamps">
      ${LAMP_ORDER.map(
        (name) =>
          `<div class="lamp" data-lamp="${name}"><span class="bulb"></span><label>${LAMP_LABELS[name]}</label></div>`,
      ).join("")}
    </div>
    <div class="controls">
      <label><input type="checkbox" data-bit="0"> b0</label>
      <label><input type="checkbox" data-bit="1"> b1</label>
      <label><input type="checkbox" data-bit="2"> b2</label>
      <button class="next-step">Next Step</button>
      <span class="move-name"></span>
    </div>
    <div class="scorecard">
      <span data-score="victories">victories 0</span>
      <span data-score="losses">losses 0</span>
      <span data-score="draws">draws 0</span>
      <span data-score="badMoves">bad moves 0</span>
      <span class="step-index">step 0</span>
      <span class="connection">connecting</span>
    </div>`;

  const boxes = Array.from(
    root.querySelectorAll<HTMLInputElement>("input[data-bit]"),
  );
  const button = root.querySelector<HTMLButtonElement>("button.next-step")!;
  const flashTimers = new Map<string, number>();

  const currentMove = () =>
    moveFromCheckboxes(boxes[0].checked, boxes[1].checked, boxes[2].checked);

  button.addEventListener("click", () => onNextStep(currentMove()));

  function render(vm: PanelViewModel): void {
    for (const name of LAMP_ORDER) {
      const el = root.querySelector<HTMLElement>(`[data-lamp="${name}"]`)!;
      const on = vm.lamps[name];
      el.classList.toggle("on", on);
      if (on && FLASH_LAMPS.includes(name)) {
        el.classList.add("flash");
        const pending = flashTimers.get(name);
        if (pending !== undefined) {
          clearTimeout(pending);
        }
        flashTimers.set(
          name,
          setTimeout(() => el.classList.remove("flash"), FLASH_MS) as unknown as number,
        );
      }
    }
    for (const key of ["victories", "losses", "draws", "badMoves"] as const) {
      const label = key === "badMoves" ? "bad moves" : key;
      root.querySelector(`[data-score="${key}"]`)!.textContent =
        `${label} ${vm.scorecard[key]}`;
    }
    root.querySelector(".step-index")!.textContent = `step ${vm.stepIndex}`;
    root.querySelector(".connection")!.textContent = vm.connection;
    if (vm.connection === "disconnected") {
      button.disabled = true;
    }
  }

  return {
    render,
    setBusy(busy: boolean) {
      button.disabled = busy;
    },
    currentMove,
  };
}
