"""Shared fixtures: seeded traces, instrumented runs, mutant worlds.

Oracle tests are allowed to look at the hidden WorldState; everything the
learners consume still goes through the trace representation only.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import pytest

from lampworld import induction, traces
from lampworld.planner import LineModel
from lampworld.world import (
    Cell,
    LampView,
    LINES,
    Move,
    Outcome,
    Phase,
    WorldState,
    initial_state,
    line_winner,
    rng_next,
    step,
    view,
)

ACCEPTANCE_WORLD_SEED = 7
ACCEPTANCE_MOVE_SEED = 123


@dataclass
class InstrumentedRun:
    trace: traces.Trace
    states: list[WorldState]  # state after each step, aligned with records


def instrumented_random_run(
    world_seed: int, n_steps: int, move_seed: int
) -> InstrumentedRun:
    rng = random.Random(move_seed)
    s = initial_state(world_seed)
    trace = traces.Trace(world_id=2, seed=world_seed)
    states = []
    for t in range(n_steps):
        m = Move(rng.randrange(8))
        s, lamps = step(s, m)
        traces.append(trace, traces.StepRecord(t, m, lamps))
        states.append(s)
    return InstrumentedRun(trace, states)


@pytest.fixture(scope="session")
def gt_lines() -> LineModel:
    sets = tuple(frozenset(l) for l in LINES)
    return LineModel(cross_sets=sets, o_sets=sets)


@pytest.fixture(scope="session")
def run20k() -> InstrumentedRun:
    return instrumented_random_run(ACCEPTANCE_WORLD_SEED, 20_000, ACCEPTANCE_MOVE_SEED)


@pytest.fixture(scope="session")
def level1(run20k) -> induction.Level1Model:
    return induction.induce_level1(run20k.trace)


def completed_random_sets(seed: int, count: int) -> list[tuple[tuple, Outcome]]:
    """Final boards and outcomes of `count` randomly played sets."""
    rng = random.Random(seed)
    s = initial_state(seed)
    out = []
    while len(out) < count:
        s2, lamps = step(s, Move(rng.randrange(8)))
        if lamps.victory or lamps.loss:
            out.append((s2.board, s2.last_outcome))
        s = s2
    return out


# ---------------------------------------------------------------------------
# Mutant worlds.  Each reuses the real geometry but breaks one law; they
# exist to prove the formula suite can catch a world that lies.


def _end_of_set(board) -> Outcome | None:
    w = line_winner(board)
    if w == Cell.CROSS:
        return Outcome.VICTORY
    if w == Cell.O:
        return Outcome.LOSS
    if Cell.EMPTY not in board:
        return Outcome.DRAW
    return None


def _flash(outcome: Outcome | None) -> tuple[bool, bool]:
    if outcome == Outcome.VICTORY:
        return True, False
    if outcome == Outcome.LOSS:
        return False, True
    if outcome == Outcome.DRAW:
        return True, True
    return False, False


class MutantWorld:
    """Random-play driver over a mutated transition rule.

    kind: "two_o"        — Tom answers with two O marks when he can;
          "spontaneous"  — an O pops up on its own every few quiet steps;
          "fading"       — the oldest mark evaporates every few steps.
    """

    def __init__(self, kind: str, seed: int):
        self.kind = kind
        self.rng_state = seed & (2**64 - 1)
        self.board = (Cell.EMPTY,) * 9
        self.eye = (1, 1)
        self.over = False
        self.quiet_steps = 0
        self.mark_order: list[int] = []

    def _draw(self, n: int) -> int:
        self.rng_state, z = rng_next(self.rng_state)
        return z % n

    def _place_o(self) -> None:
        empties = [i for i, c in enumerate(self.board) if c == Cell.EMPTY]
        cell = empties[self._draw(len(empties))]
        b = list(self.board)
        b[cell] = Cell.O
        self.board = tuple(b)
        self.mark_order.append(cell)

    def step(self, move: Move) -> LampView:
        bad = False
        victory = loss = False
        deltas = {Move.LEFT: (-1, 0), Move.RIGHT: (1, 0), Move.UP: (0, -1), Move.DOWN: (0, 1)}
        if move in deltas:
            dc, dr = deltas[move]
            col, row = self.eye[0] + dc, self.eye[1] + dr
            if 1 <= col <= 3 and 1 <= row <= 3:
                self.eye = (col, row)
            else:
                bad = True
        elif move == Move.PUT_CROSS:
            cell = (self.eye[1] - 1) * 3 + (self.eye[0] - 1)
            if self.over or self.board[cell] != Cell.EMPTY:
                bad = True
            else:
                b = list(self.board)
                b[cell] = Cell.CROSS
                self.board = tuple(b)
                self.mark_order.append(cell)
                outcome = _end_of_set(self.board)
                if outcome is None:
                    self._place_o()
                    if self.kind == "two_o" and _end_of_set(self.board) is None:
                        if Cell.EMPTY in self.board:
                            self._place_o()
                    outcome = _end_of_set(self.board)
                if outcome is not None:
                    self.over = True
                    victory, loss = _flash(outcome)
        elif move == Move.NEW_GAME:
            if self.over:
                self.board = (Cell.EMPTY,) * 9
                self.over = False
                self.mark_order = []
            else:
                bad = True
        else:
            bad = True

        if not bad and not self.over and move != Move.PUT_CROSS:
            self.quiet_steps += 1
            if self.kind == "spontaneous" and self.quiet_steps % 5 == 0:
                if Cell.EMPTY in self.board:
                    self._place_o()
                    if _end_of_set(self.board) is not None:
                        self.over = True
                        victory, loss = _flash(_end_of_set(self.board))
            if self.kind == "fading" and self.quiet_steps % 5 == 0 and self.mark_order:
                cell = self.mark_order.pop(0)
                b = list(self.board)
                b[cell] = Cell.EMPTY
                self.board = tuple(b)

        cell = (self.eye[1] - 1) * 3 + (self.eye[0] - 1)
        return LampView(
            cross=self.board[cell] == Cell.CROSS,
            o=self.board[cell] == Cell.O,
            victory=victory,
            loss=loss,
            bad_move=bad,
        )


def run_mutant(kind: str, seed: int, n_steps: int, move_seed: int):
    """Trace plus ground-truth board history from a mutated world."""
    world = MutantWorld(kind, seed)
    rng = random.Random(move_seed)
    trace = traces.Trace(world_id=2, seed=seed)
    history = []
    for t in range(n_steps):
        m = Move(rng.randrange(8))
        lamps = world.step(m)
        traces.append(trace, traces.StepRecord(t, m, lamps))
        history.append(world.board)
    return trace, history
