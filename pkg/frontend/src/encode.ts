/** Checkbox-to-move encoding: move = b0 + 2*b1 + 4*b2, frozen wire format. */

export const MOVE_NAMES = [
  "Left",
  "Right",
  "Up",
  "Down",
  "Put cross",
  "New game",
  "Unused 6",
  "Unused 7",
] as const;

export function moveFromCheckboxes(b0: boolean, b1: boolean, b2: boolean): number {
  return (b0 ? 1 : 0) + (b1 ? 2 : 0) + (b2 ? 4 : 0);
}

export function checkboxesFromMove(move: number): [boolean, boolean, boolean] {
  if (!Number.isInteger(move) || move < 0 || move > 7) {
    throw new RangeError(`move out of range: ${move}`);
  }
  return [(move & 1) !== 0, (move & 2) !== 0, (move & 4) !== 0];
}
