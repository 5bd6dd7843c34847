/**
 * Read-only view of the learned model (agent sessions): the three
 * automata with their rules, the constant rules, winning sets, and the
 * belief grid.  Pure string rendering so it is trivially testable.
 */

import { MOVE_NAMES } from "./encode.js";
import type { AutomatonDoc, BeliefDoc, ModelDocument, RuleDoc } from "./types.js";

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

function describeRule(rule: RuleDoc): string {
  const condition = rule.condition ? `sees ${rule.condition} and ` : "";
  const outcome = rule.value ? "bad move" : "fine";
  return `state ${rule.state}: ${condition}${MOVE_NAMES[rule.action]} → ${outcome} (n=${rule.support})`;
}

function renderAutomaton(name: string, doc: AutomatonDoc): string {
  const symbols = doc.relevant
    .map((s) => (s.kind === "action" ? MOVE_NAMES[s.action] : `${s.lamp} lamp`))
    .join(", ");
  const transitions = doc.delta
    .map((row, state) => `<tr><td>${state}</td>${row.map((target) => `<td>${target}</td>`).join("")}</tr>`)
    .join("");
  const rules = doc.rules
    .filter((rule) => rule.value)
    .map((rule) => `<li>${escapeHtml(describeRule(rule))}</li>`)
    .join("");
  return `
    <section class="automaton" data-name="${name}">
      <h3>${name} (${doc.n_states} states)</h3>
      <p>guards: ${escapeHtml(symbols) || "none"}</p>
      <table><tbody>${transitions}</tbody></table>
      <ul>${rules}</ul>
    </section>`;
}

function renderBelief(belief: BeliefDoc): string {
  const marks = belief.known_cells.map((value) =>
    value === null ? "?" : value === 1 ? "X" : value === 2 ? "O" : "·",
  );
  const grid = [0, 3, 6]
    .map(
      (row) =>
        `<tr>${marks
          .slice(row, row + 3)
          .map((mark) => `<td class="belief-cell">${mark}</td>`)
          .join("")}</tr>`,
    )
    .join("");
  return `
    <section class="belief">
      <h3>belief (${belief.candidates} candidate${belief.candidates === 1 ? "" : "s"})</h3>
      <table><tbody>${grid}</tbody></table>
    </section>`;
}

export function renderModel(doc: ModelDocument): string {
  const parts: string[] = [`<p class="phase">phase: ${escapeHtml(doc.phase)} after ${doc.steps} steps</p>`];

  const automata = Object.entries(doc.automata);
  if (automata.length === 0) {
    parts.push('<p class="empty">no automata learned yet</p>');
  } else {
    for (const [name, automaton] of automata) {
      parts.push(renderAutomaton(name, automaton));
    }
  }

  if (doc.constant_rules.length > 0) {
    const items = doc.constant_rules
      .filter((rule) => rule.value)
      .map((rule) => {
        const condition = rule.condition ? `sees ${rule.condition} and ` : "";
        return `<li>${escapeHtml(`${condition}${MOVE_NAMES[rule.action]} → bad move (n=${rule.support})`)}</li>`;
      })
      .join("");
    parts.push(`<section class="constant-rules"><h3>constant rules</h3><ul>${items}</ul></section>`);
  }

  if (doc.winning_sets.length === 0) {
    parts.push('<p class="empty">no winning sets discovered yet</p>');
  } else {
    const items = doc.winning_sets
      .map((w) => `<li class="side-${w.side}">${w.side}: {${w.cells.join(", ")}}</li>`)
      .join("");
    parts.push(`<section class="winning-sets"><h3>winning sets (${doc.winning_sets.length})</h3><ul>${items}</ul></section>`);
  }

  const formulas = Object.entries(doc.formulas);
  if (formulas.length > 0) {
    const items = formulas
      .map(([name, report]) => `<li>${escapeHtml(name)}: ${report.holds ? "holds" : "falsified"}</li>`)
      .join("");
    parts.push(`<section class="formulas"><h3>first-order checks</h3><ul>${items}</ul></section>`);
  }

  if (doc.belief) {
    parts.push(renderBelief(doc.belief));
  }
  return parts.join("\n");
}
