/**
 * The panel state is a pure fold over the event stream.  Delivery is
 * at-least-once, so records at an index we already folded are dropped;
 * the lamp state is simply the last folded record's bits (the one-step
 * flash semantics live in the data; any blinking is a rendering concern).
 */

import type { LampBits, PanelViewModel, ScoreCard, StepRecord } from "./types.js";

export function emptyScoreCard(): ScoreCard {
  return { victories: 0, losses: 0, draws: 0, badMoves: 0 };
}

export function emptyViewModel(): PanelViewModel {
  return {
    lamps: { cross: false, o: false, victory: false, loss: false, badMove: false },
    stepIndex: 0,
    scorecard: emptyScoreCard(),
    connection: "connecting",
  };
}

function lampsOf(bits: LampBits) {
  return {
    cross: bits[0] === 1,
    o: bits[1] === 1,
    victory: bits[2] === 1,
    loss: bits[3] === 1,
    badMove: bits[4] === 1,
  };
}

/** Same counting rule as the agent's scorer: a double flash is one draw. */
export function scoreRecord(card: ScoreCard, lamps: LampBits): ScoreCard {
  const [, , victory, loss, bad] = lamps;
  return {
    victories: card.victories + (victory === 1 && loss !== 1 ? 1 : 0),
    losses: card.losses + (loss === 1 && victory !== 1 ? 1 : 0),
    draws: card.draws + (victory === 1 && loss === 1 ? 1 : 0),
    badMoves: card.badMoves + (bad === 1 ? 1 : 0),
  };
}

export function foldRecord(vm: PanelViewModel, record: StepRecord): PanelViewModel {
  if (record.t < vm.stepIndex) {
    return vm; // duplicate delivery
  }
  if (record.t > vm.stepIndex) {
    throw new Error(`event gap: expected step ${vm.stepIndex}, got ${record.t}`);
  }
  return {
    lamps: lampsOf(record.lamps),
    stepIndex: vm.stepIndex + 1,
    scorecard: scoreRecord(vm.scorecard, record.lamps),
    connection: vm.connection,
  };
}

export function foldAll(records: Iterable<StepRecord>, start?: PanelViewModel): PanelViewModel {
  let vm = start ?? emptyViewModel();
  for (const r of records) {
    vm = foldRecord(vm, r);
  }
  return vm;
}

export function scorecardFold(records: Iterable<StepRecord>): ScoreCard {
  let card = emptyScoreCard();
  for (const r of records) {
    card = scoreRecord(card, r.lamps);
  }
  return card;
}
