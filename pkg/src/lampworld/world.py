"""Hidden tick-tack-toe world: full game state plus the five-lamp view.

World 2 is the partially observable variant: the player only ever sees
five lamps (cross, O, victory, loss, bad move) while moving a one-cell
"eye" over a hidden 3x3 board and playing crosses against Tom, a built-in
opponent that answers every successful cross with one O placed uniformly
at random on an empty cell.  World 1 is the same game with the whole
state exposed, used as an easier fixture.

All transitions are pure: ``step`` maps (state, move) to a new state and
the lamp view for that step.  Illegal moves never raise; they light the
bad-move lamp and return the state unchanged, RNG included.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import IntEnum

MASK64 = (1 << 64) - 1

# SplitMix64 constants; the world RNG is a single 64-bit word advanced by
# the golden gamma, mixed on output.  One draw per Tom response, no draws
# anywhere else.
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def rng_next(state: int) -> tuple[int, int]:
    """Advance the 64-bit RNG word once and return (new_state, output)."""
    state = (state + _GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    z = z ^ (z >> 31)
    return state, z


class Cell(IntEnum):
    EMPTY = 0
    CROSS = 1
    O = 2


class Move(IntEnum):
    """Checkbox encoding b0 + 2*b1 + 4*b2, frozen as part of the wire format."""

    LEFT = 0
    RIGHT = 1
    UP = 2
    DOWN = 3
    PUT_CROSS = 4
    NEW_GAME = 5
    UNUSED6 = 6
    UNUSED7 = 7


class Phase(IntEnum):
    PLAYING = 0
    OVER = 1


class Outcome(IntEnum):
    NONE = 0
    VICTORY = 1
    LOSS = 2
    DRAW = 3


Board = tuple[int, ...]  # 9 cells, id = (row-1)*3 + (col-1), row-major

EMPTY_BOARD: Board = (Cell.EMPTY,) * 9

# The 8 geometric winning triples (rows, columns, diagonals).  Learning
# code never reads this; it is the ground truth for oracles and for the
# end-of-set check here.
LINES: tuple[tuple[int, int, int], ...] = (
    (0, 1, 2),
    (3, 4, 5),
    (6, 7, 8),
    (0, 3, 6),
    (1, 4, 7),
    (2, 5, 8),
    (0, 4, 8),
    (2, 4, 6),
)


def cell_id(col: int, row: int) -> int:
    return (row - 1) * 3 + (col - 1)


def line_winner(board: Board) -> int:
    """Return Cell.CROSS or Cell.O if that side holds a full line, else Cell.EMPTY."""
    for a, b, c in LINES:
        v = board[a]
        if v != Cell.EMPTY and board[b] == v and board[c] == v:
            return v
    return Cell.EMPTY


def board_full(board: Board) -> bool:
    return Cell.EMPTY not in board


@dataclass(frozen=True)
class LampView:
    """The five-bit observation.

    cross/o reflect the cell under the eye (level lamps); victory, loss
    and bad_move are one-step flashes caused by the step just taken.  A
    simultaneous victory+loss flash signals a drawn set.
    """

    cross: bool = False
    o: bool = False
    victory: bool = False
    loss: bool = False
    bad_move: bool = False

    def bits(self) -> tuple[int, int, int, int, int]:
        return (
            int(self.cross),
            int(self.o),
            int(self.victory),
            int(self.loss),
            int(self.bad_move),
        )

    @classmethod
    def from_bits(cls, bits) -> "LampView":
        cross, o, victory, loss, bad = (bool(b) for b in bits)
        return cls(cross=cross, o=o, victory=victory, loss=loss, bad_move=bad)


@dataclass(frozen=True)
class Events:
    """Flash events produced by a single step."""

    victory: bool = False
    loss: bool = False
    bad_move: bool = False


NO_EVENTS = Events()


@dataclass(frozen=True)
class WorldState:
    board: Board
    eye_col: int
    eye_row: int
    phase: Phase
    last_outcome: Outcome
    rng: int

    @property
    def eye_cell(self) -> int:
        return cell_id(self.eye_col, self.eye_row)


@dataclass(frozen=True)
class World1Observation:
    """Full-state view for World 1: distinct public states map to distinct
    observations, so the view is injective over reachable states."""

    board: Board
    eye_col: int
    eye_row: int
    phase: Phase
    last_outcome: Outcome


def initial_state(seed: int) -> WorldState:
    """Start of a session: empty board, eye at (1,1), RNG word = seed."""
    return WorldState(
        board=EMPTY_BOARD,
        eye_col=1,
        eye_row=1,
        phase=Phase.PLAYING,
        last_outcome=Outcome.NONE,
        rng=seed & MASK64,
    )


def view(s: WorldState, events: Events = NO_EVENTS) -> LampView:
    """Lamp view of a state: cell lamps from the eye, flashes from `events`."""
    under_eye = s.board[s.eye_cell]
    return LampView(
        cross=under_eye == Cell.CROSS,
        o=under_eye == Cell.O,
        victory=events.victory,
        loss=events.loss,
        bad_move=events.bad_move,
    )


def world1_view(s: WorldState) -> World1Observation:
    return World1Observation(
        board=s.board,
        eye_col=s.eye_col,
        eye_row=s.eye_row,
        phase=s.phase,
        last_outcome=s.last_outcome,
    )


def _bad(s: WorldState) -> tuple[WorldState, LampView]:
    return s, view(s, Events(bad_move=True))


# Eye deltas: Up decreases the row (row 1 is the top edge).
_EYE_DELTAS = {
    Move.LEFT: (-1, 0),
    Move.RIGHT: (1, 0),
    Move.UP: (0, -1),
    Move.DOWN: (0, 1),
}


def step(s: WorldState, d: Move) -> tuple[WorldState, LampView]:
    """Apply one move.  Every rule of the hidden game lives here.

    Navigation shifts the eye (in or out of a running set; the board
    stays observable after a set ends).  A successful PUT_CROSS places
    the agent's cross and, if that neither wins nor fills the board,
    Tom immediately answers with one random O.  NEW_GAME is only legal
    once the set is over and clears the board without moving the eye.
    Anything illegal flashes bad_move and changes nothing.
    """
    d = Move(d)

    if d in _EYE_DELTAS:
        dc, dr = _EYE_DELTAS[d]
        col, row = s.eye_col + dc, s.eye_row + dr
        if not (1 <= col <= 3 and 1 <= row <= 3):
            return _bad(s)
        s2 = replace(s, eye_col=col, eye_row=row)
        return s2, view(s2)

    if d == Move.PUT_CROSS:
        if s.phase != Phase.PLAYING or s.board[s.eye_cell] != Cell.EMPTY:
            return _bad(s)
        board = list(s.board)
        board[s.eye_cell] = Cell.CROSS

        if line_winner(tuple(board)) == Cell.CROSS:
            s2 = replace(s, board=tuple(board), phase=Phase.OVER, last_outcome=Outcome.VICTORY)
            return s2, view(s2, Events(victory=True))
        if Cell.EMPTY not in board:
            s2 = replace(s, board=tuple(board), phase=Phase.OVER, last_outcome=Outcome.DRAW)
            return s2, view(s2, Events(victory=True, loss=True))

        # Tom's reply: one RNG draw, uniform over the empty cells.
        empties = [i for i, c in enumerate(board) if c == Cell.EMPTY]
        rng, z = rng_next(s.rng)
        board[empties[z % len(empties)]] = Cell.O
        new_board = tuple(board)

        if line_winner(new_board) == Cell.O:
            s2 = replace(s, board=new_board, phase=Phase.OVER, last_outcome=Outcome.LOSS, rng=rng)
            return s2, view(s2, Events(loss=True))
        if Cell.EMPTY not in new_board:
            s2 = replace(s, board=new_board, phase=Phase.OVER, last_outcome=Outcome.DRAW, rng=rng)
            return s2, view(s2, Events(victory=True, loss=True))
        s2 = replace(s, board=new_board, rng=rng)
        return s2, view(s2)

    if d == Move.NEW_GAME:
        if s.phase != Phase.OVER:
            return _bad(s)
        s2 = replace(s, board=EMPTY_BOARD, phase=Phase.PLAYING, last_outcome=Outcome.NONE)
        return s2, view(s2)

    # UNUSED6 / UNUSED7 are never legal.
    return _bad(s)
