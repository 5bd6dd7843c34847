"""Exact belief over the hidden board.

Per-cell nondeterministic tracking would lose the "Tom answers with
exactly one O" correlation, so the belief is the literal set of candidate
boards consistent with every lamp seen since the last reset, conditioned
on the induced level-1 states for the eye position and set phase.  The
per-cell view the planner wants is the known_cells projection.

An empty candidate set is a hard error on purpose: it means some learned
rule is wrong, and that signal must surface instead of being repaired.
"""

from __future__ import annotations

from dataclasses import dataclass

from .world import Board, Cell, EMPTY_BOARD, LampView, Move, Phase
from .planner import LineModel

MAX_CANDIDATES = 8 * 7 * 6 * 5  # 4 unobserved Tom replies at worst


class BeliefContradiction(Exception):
    """No candidate board survives the observation: the model is wrong."""


@dataclass(frozen=True)
class BeliefState:
    candidates: frozenset[Board]
    eye: tuple[int, int]
    phase_over: bool

    @property
    def phase(self) -> Phase:
        return Phase.OVER if self.phase_over else Phase.PLAYING

    def known_cells(self) -> tuple[int | None, ...]:
        """Cell value where every candidate agrees, else None (unknown)."""
        first = next(iter(self.candidates))
        known: list[int | None] = list(first)
        for b in self.candidates:
            for i in range(9):
                if known[i] is not None and b[i] != known[i]:
                    known[i] = None
        return tuple(known)


def belief_init(eye: tuple[int, int] = (1, 1)) -> BeliefState:
    return BeliefState(candidates=frozenset([EMPTY_BOARD]), eye=eye, phase_over=False)


def _eye_cell(eye: tuple[int, int]) -> int:
    col, row = eye
    return (row - 1) * 3 + (col - 1)


def _completes_o_line(board: Board, cell: int, lines: LineModel | None) -> bool:
    if lines is None:
        return False
    return any(
        cell in ws and all(board[c] == Cell.O for c in ws if c != cell)
        for ws in lines.o_sets
    )


def belief_step(
    b: BeliefState,
    move: Move,
    lamps: LampView,
    eye: tuple[int, int],
    over: bool,
    lines: LineModel | None = None,
) -> BeliefState:
    """Advance the belief by one observed step.

    `eye` and `over` are the level-1 readings after the step (induced
    states mapped to coordinates/phase, or oracle values in tests).
    `lines` enables the end-of-set filters once winning sets are learned;
    without it the belief stays sound, just looser.
    """
    move = Move(move)
    candidates = set(b.candidates)

    if not lamps.bad_move:
        if move == Move.NEW_GAME:
            return belief_init(eye)
        if move == Move.PUT_CROSS:
            cell = _eye_cell(b.eye)
            # The mark landed, so the cell had to be empty.
            candidates = {c for c in candidates if c[cell] == Cell.EMPTY}
            candidates = {c[:cell] + (Cell.CROSS,) + c[cell + 1 :] for c in candidates}
            # Tom answers unless the cross itself decided the set (victory
            # flash without loss) or filled the board (draw on the cross).
            agent_ended = (lamps.victory and not lamps.loss) or not any(
                Cell.EMPTY in c for c in candidates
            )
            if not agent_ended:
                # Tom answered with one O on some empty cell.
                branched = set()
                for c in candidates:
                    for i, v in enumerate(c):
                        if v != Cell.EMPTY:
                            continue
                        if lines is not None:
                            finishes = _completes_o_line(c, i, lines)
                            if lamps.loss and not lamps.victory:
                                if not finishes:
                                    continue  # a loss flash means the O closed a line
                            elif finishes:
                                continue  # a closed line would have flashed loss
                        branched.add(c[:i] + (Cell.O,) + c[i + 1 :])
                candidates = branched

    # The two yellow lamps always describe the cell now under the eye,
    # bad moves included.
    cell = _eye_cell(eye)
    if lamps.cross:
        expected = Cell.CROSS
    elif lamps.o:
        expected = Cell.O
    else:
        expected = Cell.EMPTY
    candidates = {c for c in candidates if c[cell] == expected}

    if not candidates:
        raise BeliefContradiction(
            f"no board explains move={move.name} lamps={lamps.bits()} at eye={eye}"
        )
    return BeliefState(candidates=frozenset(candidates), eye=eye, phase_over=over)
