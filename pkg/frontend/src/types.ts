/** Wire types shared with the session service (schemas are frozen there). */

/** Lamp bits in trace order: cross, o, victory, loss, bad move. */
export type LampBits = [number, number, number, number, number];

/** One line of the trace / one event-stream message. */
export interface StepRecord {
  t: number;
  move: number;
  lamps: LampBits;
}

export interface TraceHeader {
  world: number;
  seed: number;
}

export interface ScoreCard {
  victories: number;
  losses: number;
  draws: number;
  badMoves: number;
}

export type ConnectionStatus = "connecting" | "connected" | "disconnected";

export interface LampState {
  cross: boolean;
  o: boolean;
  victory: boolean;
  loss: boolean;
  badMove: boolean;
}

/**
 * Everything the panel renders.  This is a pure fold over received
 * StepRecords: same stream in, same pixels out.
 */
export interface PanelViewModel {
  lamps: LampState;
  stepIndex: number; // number of records folded so far
  scorecard: ScoreCard;
  connection: ConnectionStatus;
}

/** The learned-model document served by GET /sessions/{id}/model. */
export interface ModelDocument {
  phase: string;
  steps: number;
  automata: Record<string, AutomatonDoc>;
  constant_rules: ConstantRuleDoc[];
  winning_sets: WinningSetDoc[];
  formulas: Record<string, { holds: boolean; counterexample: unknown }>;
  belief: BeliefDoc | null;
}

export interface AutomatonDoc {
  n_states: number;
  relevant: ({ kind: "action"; action: number } | { kind: "lamp"; lamp: string })[];
  delta: number[][];
  rules: RuleDoc[];
}

export interface RuleDoc {
  state: number;
  action: number;
  lamp: string;
  value: boolean;
  support: number;
  confidence: number;
  condition: string | null;
}

export interface ConstantRuleDoc {
  action: number;
  condition: string | null;
  lamp: string;
  value: boolean;
  support: number;
}

export interface WinningSetDoc {
  cells: number[];
  side: "cross" | "o";
}

export interface BeliefDoc {
  candidates: number;
  known_cells: (number | null)[];
  eye: [number, number];
  over: boolean;
}
