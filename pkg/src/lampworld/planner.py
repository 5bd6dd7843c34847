"""Move choice by exact game-tree search over the learned model.

The tree is tiny, so both search modes are exact and use Fraction
arithmetic: expectimax (Tom modelled as uniform random, the default) and
minimax (adversarial variant).  Values are always from the agent's
(cross) perspective: victory +1, loss -1, draw 0.  Ties break toward the
smallest cell id, which makes every policy here deterministic.

Planning happens at cell granularity; navigation is value-neutral and is
emitted as macro expansions (shortest eye path, columns before rows).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .world import Cell, Move, Phase, Board

Value = Fraction

WIN: Value = Fraction(1)
LOSS: Value = Fraction(-1)
DRAW: Value = Fraction(0)


@dataclass(frozen=True)
class LineModel:
    """Winning 3-subsets per side, as the planner consumes them.

    Built either from learned winning sets (rules module) or from ground
    truth in oracle tests.  The two sides are kept separate because they
    are discovered separately.
    """

    cross_sets: tuple[frozenset[int], ...]
    o_sets: tuple[frozenset[int], ...]

    @classmethod
    def from_winning_sets(cls, winning_sets) -> "LineModel":
        cross, o = [], []
        for ws in winning_sets:
            (cross if ws.side == Cell.CROSS else o).append(frozenset(ws.cells))
        return cls(tuple(sorted(cross, key=sorted)), tuple(sorted(o, key=sorted)))


def _winner(board: Board, lines: LineModel) -> int:
    for ws in lines.cross_sets:
        if all(board[c] == Cell.CROSS for c in ws):
            return Cell.CROSS
    for ws in lines.o_sets:
        if all(board[c] == Cell.O for c in ws):
            return Cell.O
    return Cell.EMPTY


def terminal_value(board: Board, lines: LineModel) -> Value | None:
    w = _winner(board, lines)
    if w == Cell.CROSS:
        return WIN
    if w == Cell.O:
        return LOSS
    if Cell.EMPTY not in board:
        return DRAW
    return None


class Searcher:
    """Exact search over boards under a fixed line model, memoized."""

    def __init__(self, lines: LineModel):
        self.lines = lines
        self._exp: dict[tuple[Board, int], tuple[Value, int | None]] = {}
        self._min: dict[tuple[Board, int], tuple[Value, int | None]] = {}
        self._dist: dict[tuple[Board, int], tuple[Value, Value, Value]] = {}

    def expectimax(self, board: Board, side: int) -> tuple[Value, int | None]:
        """Value and best cell with `side` to move; Tom nodes average."""
        key = (board, side)
        hit = self._exp.get(key)
        if hit is not None:
            return hit
        tv = terminal_value(board, self.lines)
        if tv is not None:
            result = (tv, None)
        elif side == Cell.CROSS:
            best_v, best_c = None, None
            for c in _empties(board):
                v, _ = self.expectimax(_place(board, c, Cell.CROSS), Cell.O)
                if best_v is None or v > best_v:
                    best_v, best_c = v, c
            result = (best_v, best_c)
        else:
            empties = _empties(board)
            total = Fraction(0)
            for c in empties:
                v, _ = self.expectimax(_place(board, c, Cell.O), Cell.CROSS)
                total += v
            result = (total / len(empties), None)
        self._exp[key] = result
        return result

    def minimax(self, board: Board, side: int) -> tuple[Value, int | None]:
        """As expectimax, but Tom nodes minimize (and report their argmin)."""
        key = (board, side)
        hit = self._min.get(key)
        if hit is not None:
            return hit
        tv = terminal_value(board, self.lines)
        if tv is not None:
            result = (tv, None)
        else:
            mark = Cell.CROSS if side == Cell.CROSS else Cell.O
            opp = Cell.O if side == Cell.CROSS else Cell.CROSS
            best_v, best_c = None, None
            for c in _empties(board):
                v, _ = self.minimax(_place(board, c, mark), opp)
                if best_v is None or (v > best_v if side == Cell.CROSS else v < best_v):
                    best_v, best_c = v, c
            result = (best_v, best_c)
        self._min[key] = result
        return result

    def outcome_distribution(self, board: Board, side: int) -> tuple[Value, Value, Value]:
        """(P(victory), P(loss), P(draw)) when the agent follows the
        expectimax-argmax policy and Tom plays uniformly at random."""
        key = (board, side)
        hit = self._dist.get(key)
        if hit is not None:
            return hit
        tv = terminal_value(board, self.lines)
        if tv is not None:
            result = (
                Fraction(int(tv == WIN)),
                Fraction(int(tv == LOSS)),
                Fraction(int(tv == DRAW)),
            )
        elif side == Cell.CROSS:
            _, best = self.expectimax(board, side)
            result = self.outcome_distribution(_place(board, best, Cell.CROSS), Cell.O)
        else:
            empties = _empties(board)
            p = Fraction(1, len(empties))
            w = l = dr = Fraction(0)
            for c in empties:
                cw, cl, cd = self.outcome_distribution(_place(board, c, Cell.O), Cell.CROSS)
                w += p * cw
                l += p * cl
                dr += p * cd
            result = (w, l, dr)
        self._dist[key] = result
        return result


def _empties(board: Board) -> list[int]:
    return [i for i, c in enumerate(board) if c == Cell.EMPTY]


def _place(board: Board, cell: int, mark: int) -> Board:
    return board[:cell] + (mark,) + board[cell + 1 :]


_searchers: dict[LineModel, Searcher] = {}


def _searcher(lines: LineModel) -> Searcher:
    s = _searchers.get(lines)
    if s is None:
        s = _searchers[lines] = Searcher(lines)
    return s


def expectimax(board: Board, side: int, lines: LineModel) -> tuple[Value, int | None]:
    return _searcher(lines).expectimax(board, side)


def minimax(board: Board, side: int, lines: LineModel) -> tuple[Value, int | None]:
    return _searcher(lines).minimax(board, side)


def outcome_distribution(board: Board, side: int, lines: LineModel) -> tuple[Value, Value, Value]:
    return _searcher(lines).outcome_distribution(board, side)


def cell_coords(cell: int) -> tuple[int, int]:
    return cell % 3 + 1, cell // 3 + 1


def navigate(eye: tuple[int, int], target: tuple[int, int]) -> list[Move]:
    """Shortest legal eye path, column moves first, then row moves."""
    moves: list[Move] = []
    col, row = eye
    tc, tr = target
    while col < tc:
        moves.append(Move.RIGHT)
        col += 1
    while col > tc:
        moves.append(Move.LEFT)
        col -= 1
    while row < tr:
        moves.append(Move.DOWN)
        row += 1
    while row > tr:
        moves.append(Move.UP)
        row -= 1
    return moves


class MacroKind(Enum):
    OBSERVE_CELL = "observe"
    MARK_CELL = "mark"
    NEW_GAME = "new_game"


@dataclass(frozen=True)
class MacroAction:
    kind: MacroKind
    cell: int | None
    expansion: tuple[Move, ...]


@dataclass(frozen=True)
class AbstractState:
    """What the planner sees: the belief projection, never the raw board."""

    known: tuple[int | None, ...]  # Cell value per id, None = unknown
    eye: tuple[int, int]
    phase: Phase


def plan(belief, lines: LineModel) -> MacroAction:
    """Pick the next macro from an exact belief.

    Once the set is over the only useful move is NEW_GAME.  While playing,
    if every candidate board votes for the same mark, mark it; otherwise
    some unknown cell could change the choice, so go look at the nearest
    cell the candidates disagree on (those are exactly the value-relevant
    ones: each holds a possible Tom reply).
    """
    if belief.phase == Phase.OVER:
        return MacroAction(MacroKind.NEW_GAME, None, (Move.NEW_GAME,))

    searcher = _searcher(lines)
    votes = {searcher.expectimax(b, Cell.CROSS)[1] for b in belief.candidates}
    if len(votes) == 1:
        cell = votes.pop()
        path = navigate(belief.eye, cell_coords(cell))
        return MacroAction(MacroKind.MARK_CELL, cell, (*path, Move.PUT_CROSS))

    known = belief.known_cells()
    unknown = [c for c in range(9) if known[c] is None]
    ec, er = belief.eye
    cell = min(unknown, key=lambda c: (abs(cell_coords(c)[0] - ec) + abs(cell_coords(c)[1] - er), c))
    path = navigate(belief.eye, cell_coords(cell))
    return MacroAction(MacroKind.OBSERVE_CELL, cell, tuple(path))
