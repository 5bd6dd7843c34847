"""First-order checks over traces and discovery of the winning 3-subsets.

Formulas are universally quantified implications over moments T >= 1 and
cells A, B, evaluated by exhaustive grounding against a per-moment cell
history (ground truth in oracle tests, belief projections live).  The
flagship is O-uniqueness: whenever an O appears in two cells at the same
moment, they are the same cell — Tom answers with exactly one O.

Winning sets are found the blunt way: all 84 possible 3-subsets per side,
kept only when every completed set agrees that a monochromatic subset
means that side just won, with at least one positive sighting.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .traces import Trace
from .world import Board, Cell, Move, Outcome

# Per-moment resolved board: value per cell, None where not (yet) known.
CellHistory = Sequence[Sequence[Optional[int]]]

MIN_COMPLETED_SETS = 100  # before discovery output is trusted
STABLE_SETS = 50  # unchanged suffix that declares convergence


@dataclass(frozen=True)
class Atom:
    """One predicate application.

    Cell arguments are variable names ("A"/"B"); `time` is the moment the
    atom looks at, either the quantified T or its predecessor.
    """

    predicate: str  # isO | isCross | appearO | appearCross | playedMove | lampOn
    cell: Optional[str] = None
    time: str = "T"  # "T" | "prev"
    move: Optional[Move] = None
    lamp: Optional[str] = None


@dataclass(frozen=True)
class Literal:
    atom: Atom
    negated: bool = False


@dataclass(frozen=True)
class Formula:
    """forall T>=1, forall cells: conjunction of literals -> conclusion.

    conclusion None encodes the equality conclusion A=B.
    """

    name: str
    antecedents: tuple[Literal, ...]
    conclusion: Optional[Literal] = None

    def variables(self) -> tuple[str, ...]:
        literals = list(self.antecedents)
        if self.conclusion is not None:
            literals.append(self.conclusion)
        used = {lit.atom.cell for lit in literals if lit.atom.cell}
        if self.conclusion is None:
            used |= {"A", "B"}
        return tuple(sorted(used))


class Unresolved(Exception):
    """A needed cell value was not observable at this moment."""


def _cell_value(history: CellHistory, t: int, cell: int) -> int:
    v = history[t][cell]
    if v is None:
        raise Unresolved
    return v


def _eval_atom(atom: Atom, trace: Trace, history: CellHistory, t: int, env: dict) -> bool:
    at = t if atom.time == "T" else t - 1
    if atom.predicate == "isO":
        return _cell_value(history, at, env[atom.cell]) == Cell.O
    if atom.predicate == "isCross":
        return _cell_value(history, at, env[atom.cell]) == Cell.CROSS
    if atom.predicate == "appearO":
        c = env[atom.cell]
        return (
            _cell_value(history, at, c) == Cell.O
            and _cell_value(history, at - 1, c) != Cell.O
        )
    if atom.predicate == "appearCross":
        c = env[atom.cell]
        return (
            _cell_value(history, at, c) == Cell.CROSS
            and _cell_value(history, at - 1, c) != Cell.CROSS
        )
    if atom.predicate == "playedMove":
        return trace.records[at].move == atom.move
    if atom.predicate == "lampOn":
        return bool(getattr(trace.records[at].lamps, atom.lamp))
    raise ValueError(f"unknown predicate {atom.predicate}")


@dataclass(frozen=True)
class EvalReport:
    holds: bool
    counterexample: Optional[tuple[int, Optional[int], Optional[int]]] = None
    unresolved_moments: tuple[int, ...] = ()


def eval_formula(formula: Formula, trace: Trace, history: CellHistory) -> EvalReport:
    """Ground the formula over every moment and every cell assignment.

    Groundings touching an unresolved cell are skipped and their moments
    reported; the first counterexample (T, A, B) ends the search.
    """
    variables = formula.variables()
    assignments = [
        dict(zip(variables, vals))
        for vals in itertools.product(range(9), repeat=len(variables))
    ] or [{}]
    unresolved: list[int] = []
    for t in range(1, len(trace.records)):
        hit_unresolved = False
        for env in assignments:
            try:
                if not all(
                    _eval_atom(l.atom, trace, history, t, env) != l.negated
                    for l in formula.antecedents
                ):
                    continue
                if formula.conclusion is None:
                    ok = env["A"] == env["B"]
                else:
                    ok = (
                        _eval_atom(formula.conclusion.atom, trace, history, t, env)
                        != formula.conclusion.negated
                    )
            except Unresolved:
                hit_unresolved = True
                continue
            if not ok:
                return EvalReport(
                    holds=False,
                    counterexample=(t, env.get("A"), env.get("B")),
                    unresolved_moments=tuple(unresolved),
                )
        if hit_unresolved:
            unresolved.append(t)
    return EvalReport(holds=True, unresolved_moments=tuple(unresolved))


def standard_formula_suite() -> list[Formula]:
    """O-uniqueness plus the mark bookkeeping Tom is supposed to obey."""
    appear_a = Literal(Atom("appearO", cell="A"))
    no_new_game = Literal(Atom("playedMove", move=Move.NEW_GAME), negated=True)
    calm_prev = (
        Literal(Atom("lampOn", lamp="victory", time="prev"), negated=True),
        Literal(Atom("lampOn", lamp="loss", time="prev"), negated=True),
    )
    return [
        Formula(
            name="o_appears_in_one_cell",
            antecedents=(appear_a, Literal(Atom("appearO", cell="B"))),
            conclusion=None,
        ),
        Formula(
            name="o_appears_only_on_put_cross",
            antecedents=(appear_a,),
            conclusion=Literal(Atom("playedMove", move=Move.PUT_CROSS)),
        ),
        Formula(
            name="o_never_appears_on_bad_move",
            antecedents=(appear_a,),
            conclusion=Literal(Atom("lampOn", lamp="bad_move"), negated=True),
        ),
        Formula(
            name="o_marks_persist",
            antecedents=(Literal(Atom("isO", cell="A", time="prev")), *calm_prev, no_new_game),
            conclusion=Literal(Atom("isO", cell="A")),
        ),
        Formula(
            name="cross_marks_persist",
            antecedents=(Literal(Atom("isCross", cell="A", time="prev")), *calm_prev, no_new_game),
            conclusion=Literal(Atom("isCross", cell="A")),
        ),
    ]


# ---------------------------------------------------------------------------
# Winning sets


@dataclass(frozen=True)
class WinningSet:
    cells: frozenset[int]
    side: int  # Cell.CROSS or Cell.O

    def to_dict(self) -> dict:
        return {"cells": sorted(self.cells), "side": "cross" if self.side == Cell.CROSS else "o"}


@dataclass(frozen=True)
class DiscoveryResult:
    winning_sets: tuple[WinningSet, ...]
    undecided: tuple[WinningSet, ...]  # candidates never seen monochromatic
    uncovered: tuple[int, ...]  # completed-set indices no accepted subset explains

    def sets_for(self, side: int) -> list[frozenset[int]]:
        return [w.cells for w in self.winning_sets if w.side == side]


def _favors(outcome: Outcome, side: int) -> bool:
    return (outcome == Outcome.VICTORY and side == Cell.CROSS) or (
        outcome == Outcome.LOSS and side == Cell.O
    )


def discover_winning_sets(
    completed_sets: Sequence[tuple[Board, Outcome]],
    min_sets: int = MIN_COMPLETED_SETS,
    excluded: frozenset[tuple[int, frozenset[int]]] = frozenset(),
) -> DiscoveryResult:
    """Consistency-screen all C(9,3)=84 subsets per side.

    A subset survives screening when every monochromatic sighting
    coincided with that side winning; it is accepted once some win is
    explained by it alone.  Every won set ends with a true winning subset
    monochromatic (that is why the set ended), so an impostor subset can
    only ever appear alongside a real one and never becomes necessary.
    Survivors never sighted at all, or sighted only in shared company,
    stay undecided.  The uncovered list flags won sets no accepted subset
    explains; nonempty means discovery has not converged.

    `excluded` carries (side, cells) pairs refuted by evidence outside the
    final boards (e.g. a subset seen held mid-set while play continued).
    """
    if len(completed_sets) < min_sets:
        raise ValueError(
            f"need at least {min_sets} completed sets, got {len(completed_sets)}"
        )
    triples = [frozenset(c) for c in itertools.combinations(range(9), 3)]
    survivors: dict[int, list[frozenset[int]]] = {}
    undecided: list[WinningSet] = []
    for side in (Cell.CROSS, Cell.O):
        survivors[side] = []
        for cells in triples:
            if (side, cells) in excluded:
                continue
            refuted = False
            for board, outcome in completed_sets:
                if all(board[c] == side for c in cells) and not _favors(outcome, side):
                    refuted = True
                    break
            if not refuted:
                survivors[side].append(cells)

    accepted: list[WinningSet] = []
    for side in (Cell.CROSS, Cell.O):
        necessary: set[frozenset[int]] = set()
        for board, outcome in completed_sets:
            if not _favors(outcome, side):
                continue
            monos = [
                cells
                for cells in survivors[side]
                if all(board[c] == side for c in cells)
            ]
            if len(monos) == 1:
                necessary.add(monos[0])
        for cells in survivors[side]:
            if cells in necessary:
                accepted.append(WinningSet(cells, side))
            else:
                undecided.append(WinningSet(cells, side))

    uncovered = []
    for i, (board, outcome) in enumerate(completed_sets):
        for side in (Cell.CROSS, Cell.O):
            if _favors(outcome, side) and not any(
                w.side == side and all(board[c] == side for c in w.cells)
                for w in accepted
            ):
                uncovered.append(i)
    return DiscoveryResult(
        winning_sets=tuple(accepted),
        undecided=tuple(undecided),
        uncovered=tuple(uncovered),
    )
