"""The step device's life: explore, consolidate a model, then exploit it.

The agent touches the world only through (move out, lamp view in).  It
explores at random (suppressing moves its constant rules already call
bad), induces the level-1 automata from its own trace, then plays guided
games whose finished boards it resolves by sweeping the eye — the reason
the world keeps the board visible after a set ends — until the winning
sets stop changing.  From then on it tracks an exact belief and plays
expectimax macros.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from . import belief as belief_mod
from . import induction, planner, rules
from .traces import StepRecord, Trace, append
from .world import Cell, LampView, Move, Outcome


class AgentError(Exception):
    pass


class AgentPhase(Enum):
    EXPLORE = "explore"
    CONSOLIDATE = "consolidate"
    EXPLOIT = "exploit"


@dataclass
class Budgets:
    explore_steps: int = 20_000
    guided_max_steps: int = 40_000
    exploit_sets: int = 1_000
    scorecard_window: int = 1_000
    remine_every: int = 1_000  # constant-rule refresh cadence while exploring


@dataclass(frozen=True)
class ScoreCard:
    window_start: int
    window_end: int
    victories: int
    losses: int
    draws: int
    bad_moves: int

    def csv_row(self) -> str:
        return (
            f"{self.window_start},{self.window_end},{self.victories},"
            f"{self.losses},{self.draws},{self.bad_moves}"
        )


SCORECARD_CSV_HEADER = "window_start,window_end,victories,losses,draws,bad_moves"


def score(trace: Trace, window: tuple[int, int]) -> ScoreCard:
    """Count flashes in [start, end); a double flash is one draw."""
    start, end = window
    victories = losses = draws = bad = 0
    for r in trace.records[start:end]:
        l = r.lamps
        if l.victory and l.loss:
            draws += 1
        elif l.victory:
            victories += 1
        elif l.loss:
            losses += 1
        if l.bad_move:
            bad += 1
    return ScoreCard(start, min(end, len(trace.records)), victories, losses, draws, bad)


class Agent:
    """One life.  Feed it the current lamp view, get the next move.

    The observation passed to act() is the view produced by the previous
    step (all lamps off at the very start); the agent ingests that result
    before choosing.  All randomness comes from its own seeded stream.
    """

    def __init__(self, seed: int, budgets: Optional[Budgets] = None):
        self.budgets = budgets or Budgets()
        self.rng = random.Random((seed ^ 0x6C078965) & (2**64 - 1))
        self.phase = AgentPhase.EXPLORE
        self.records: list[StepRecord] = []
        self.last_move: Optional[Move] = None
        self.shown = LampView()

        self.constant_rules: tuple[induction.PeculiarityRule, ...] = ()
        self.model: Optional[induction.Level1Model] = None
        self.l1: tuple[int, int, int] = (0, 0, 0)
        self.belief: Optional[belief_mod.BeliefState] = None
        self.lines: Optional[planner.LineModel] = None
        self.discovery: Optional[rules.DiscoveryResult] = None
        self.formula_reports: dict[str, rules.EvalReport] = {}
        self.known_history: list[tuple[Optional[int], ...]] = []

        self.completed_sets: list[tuple[tuple[int, ...], Outcome]] = []
        self._midset_refuted: set[tuple[int, frozenset]] = set()
        self._last_accepted: Optional[frozenset] = None
        self._stable_for = 0
        self._pending_outcome: Optional[Outcome] = None
        self._explore_budget = self.budgets.explore_steps
        self._extended = False
        self._macro: list[Move] = []
        self.contradictions = 0

    # -- main entry ---------------------------------------------------------

    def act(self, observation: LampView) -> Move:
        self._ingest(observation)
        if self.phase is AgentPhase.EXPLORE:
            move = self._explore_move()
        elif self.phase is AgentPhase.CONSOLIDATE:
            move = self._guided_move()
        else:
            move = self._exploit_move()
        self.last_move = move
        return move

    # -- bookkeeping --------------------------------------------------------

    def _ingest(self, observation: LampView) -> None:
        if self.last_move is None:
            self.shown = observation
            return
        record = StepRecord(len(self.records), self.last_move, observation)
        self.records.append(record)
        self.shown = observation

        if self.model is not None:
            self.l1 = self.model.advance(self.l1, record.move, record.lamps)
            try:
                self.belief = belief_mod.belief_step(
                    self.belief,
                    record.move,
                    record.lamps,
                    self.model.eye(self.l1),
                    self.model.is_over(self.l1),
                    self.lines,
                )
            except belief_mod.BeliefContradiction:
                self.contradictions += 1
                self._fall_back()
                return
            self.known_history.append(self.belief.known_cells())
            if self.phase is AgentPhase.CONSOLIDATE:
                self._refute_quiet_monochromes(record.lamps)
            if observation.victory or observation.loss:
                if observation.victory and observation.loss:
                    self._pending_outcome = Outcome.DRAW
                elif observation.victory:
                    self._pending_outcome = Outcome.VICTORY
                else:
                    self._pending_outcome = Outcome.LOSS

        if (
            self.phase is AgentPhase.EXPLORE
            and len(self.records) % self.budgets.remine_every == 0
        ):
            self.constant_rules = tuple(
                induction.mine_constant_rules(self._trace())
            )
        if self.phase is AgentPhase.EXPLORE and len(self.records) >= self._explore_budget:
            self._consolidate()

    def _trace(self) -> Trace:
        t = Trace(world_id=2, seed=0)
        t.records = self.records
        return t

    def _fall_back(self) -> None:
        """A learned rule was falsified: rebuild the model from scratch."""
        self.phase = AgentPhase.CONSOLIDATE
        self.completed_sets = []
        self._midset_refuted = set()
        self._last_accepted = None
        self._stable_for = 0
        self.discovery = None
        self.lines = None
        self._macro = []
        self._consolidate()

    def _consolidate(self) -> None:
        trace = self._trace()
        try:
            self.model = induction.induce_level1(trace)
        except induction.InsufficientExploration as e:
            if not self._extended:
                self._extended = True
                self._explore_budget += self.budgets.explore_steps
                self.phase = AgentPhase.EXPLORE
                return
            raise AgentError(f"induction failed twice: {e}") from e
        self.constant_rules = self.model.constant_rules
        self.phase = AgentPhase.CONSOLIDATE
        self._replay_belief()

    def _replay_belief(self) -> None:
        """Re-track state and belief over everything seen so far."""
        self.l1 = self.model.start()
        self.belief = belief_mod.belief_init()
        self.known_history = []
        self._pending_outcome = None
        for r in self.records:
            self.l1 = self.model.advance(self.l1, r.move, r.lamps)
            try:
                self.belief = belief_mod.belief_step(
                    self.belief,
                    r.move,
                    r.lamps,
                    self.model.eye(self.l1),
                    self.model.is_over(self.l1),
                    self.lines,
                )
            except belief_mod.BeliefContradiction as e:
                raise AgentError(f"induced model contradicts its own trace: {e}") from e
            self.known_history.append(self.belief.known_cells())
            if r.lamps.victory and r.lamps.loss:
                self._pending_outcome = Outcome.DRAW
            elif r.lamps.victory:
                self._pending_outcome = Outcome.VICTORY
            elif r.lamps.loss:
                self._pending_outcome = Outcome.LOSS

    # -- exploration --------------------------------------------------------

    def _legal_candidates(self) -> list[Move]:
        moves = []
        for m in Move:
            if self.model is not None:
                if self.model.predicted_bad(self.l1, self.shown, m):
                    continue
            elif induction.constant_rules_predict_bad(self.constant_rules, self.shown, m):
                continue
            moves.append(m)
        return moves or list(Move)

    def _explore_move(self) -> Move:
        return self.rng.choice(self._legal_candidates())

    # -- guided games: finish sets, read the final board, log it ------------

    def _guided_move(self) -> Move:
        if self._macro:
            return self._macro.pop(0)
        known = self.belief.known_cells()
        unknown = [c for c in range(9) if known[c] is None]
        if unknown:
            # Go look at Tom's latest reply (or the unread end position):
            # fully resolved boards are what screen the candidate subsets.
            target = min(unknown, key=lambda c: (self._distance(c), c))
            self._macro = list(
                planner.navigate(self.model.eye(self.l1), planner.cell_coords(target))
            )
            return self._macro.pop(0)
        if self.model.is_over(self.l1):
            if self._pending_outcome is not None:
                self._log_completed(tuple(known))
            if self.phase is AgentPhase.EXPLOIT:
                return self._exploit_move()
            return Move.NEW_GAME
        return self.rng.choice(self._legal_candidates())

    def _distance(self, cell: int) -> int:
        ec, er = self.model.eye(self.l1)
        cc, cr = planner.cell_coords(cell)
        return abs(cc - ec) + abs(cr - er)

    def _refute_quiet_monochromes(self, lamps: LampView) -> None:
        """A subset seen fully held by a side while the set keeps running
        cannot be a winning set: occupying one ends the set on the spot."""
        if lamps.victory or lamps.loss or self.model.is_over(self.l1):
            return
        known = self.known_history[-1]
        for cells in _TRIPLES:
            vals = {known[c] for c in cells}
            if len(vals) == 1:
                side = vals.pop()
                if side in (Cell.CROSS, Cell.O):
                    self._midset_refuted.add((side, cells))

    def _log_completed(self, board: tuple[int, ...]) -> None:
        outcome = self._pending_outcome
        self._pending_outcome = None
        self.completed_sets.append((board, outcome))

        result = rules.discover_winning_sets(
            self.completed_sets, min_sets=1, excluded=frozenset(self._midset_refuted)
        )
        accepted = frozenset((w.side, w.cells) for w in result.winning_sets)
        if accepted == self._last_accepted and not result.uncovered:
            self._stable_for += 1
        else:
            self._stable_for = 0
        self._last_accepted = accepted

        if (
            len(self.completed_sets) >= rules.MIN_COMPLETED_SETS
            and self._stable_for >= rules.STABLE_SETS
        ):
            self.discovery = result
            self._finish_consolidation()

    def _finish_consolidation(self) -> None:
        trace = self._trace()
        for f in rules.standard_formula_suite():
            report = rules.eval_formula(f, trace, self.known_history)
            self.formula_reports[f.name] = report
            if not report.holds:
                raise AgentError(
                    f"formula {f.name} falsified at {report.counterexample}"
                )
        self.lines = planner.LineModel.from_winning_sets(self.discovery.winning_sets)
        self.phase = AgentPhase.EXPLOIT
        self._macro = []

    # -- exploitation -------------------------------------------------------

    def _exploit_move(self) -> Move:
        if not self._macro:
            macro = planner.plan(self.belief, self.lines)
            self._macro = list(macro.expansion)
        return self._macro.pop(0)

    # -- reporting ----------------------------------------------------------

    def model_document(self) -> dict:
        """The learned-model JSON document served to the UI."""
        doc: dict = {
            "phase": self.phase.value,
            "steps": len(self.records),
            "automata": {},
            "constant_rules": [],
            "winning_sets": [],
            "formulas": {},
            "belief": None,
        }
        if self.model is not None:
            doc["automata"] = {
                "column": self.model.column.to_dict(),
                "row": self.model.row.to_dict(),
                "game_over": self.model.game_over.to_dict(),
            }
            doc["constant_rules"] = [
                {
                    "action": int(r.action),
                    "condition": r.condition,
                    "lamp": r.lamp,
                    "value": r.value,
                    "support": r.support,
                }
                for r in self.model.constant_rules
            ]
        elif self.constant_rules:
            doc["constant_rules"] = [
                {
                    "action": int(r.action),
                    "condition": r.condition,
                    "lamp": r.lamp,
                    "value": r.value,
                    "support": r.support,
                }
                for r in self.constant_rules
            ]
        if self.discovery is not None:
            doc["winning_sets"] = [w.to_dict() for w in self.discovery.winning_sets]
        doc["formulas"] = {
            name: {
                "holds": rep.holds,
                "counterexample": rep.counterexample,
                "unresolved_moments": len(rep.unresolved_moments),
            }
            for name, rep in self.formula_reports.items()
        }
        if self.belief is not None:
            doc["belief"] = {
                "candidates": len(self.belief.candidates),
                "known_cells": [
                    None if v is None else int(v) for v in self.belief.known_cells()
                ],
                "eye": list(self.belief.eye),
                "over": self.belief.phase_over,
            }
        return doc


_TRIPLES = [frozenset(c) for c in itertools.combinations(range(9), 3)]


@dataclass
class LifecycleResult:
    trace: Trace
    scorecards: list[ScoreCard]
    model: dict
    exploit_start: int
    exploit_scorecard: ScoreCard
    agent: Agent


def lifecycle(seed: int, budgets: Optional[Budgets] = None) -> LifecycleResult:
    """Run one whole life against a fresh world and report the paper's
    success metrics per window."""
    from .world import initial_state, step

    budgets = budgets or Budgets()
    agent = Agent(seed, budgets)
    trace = Trace(world_id=2, seed=seed)
    s = initial_state(seed)
    shown = LampView()
    exploit_start: Optional[int] = None
    exploit_sets = 0
    hard_cap = budgets.explore_steps * 2 + budgets.guided_max_steps + budgets.exploit_sets * 80

    t = 0
    while True:
        if t > hard_cap:
            raise AgentError(f"no convergence after {t} steps (phase {agent.phase.value})")
        if (
            agent.phase is AgentPhase.CONSOLIDATE
            and exploit_start is None
            and len(agent.records) > agent._explore_budget + budgets.guided_max_steps
        ):
            raise AgentError("guided exploration budget exhausted before convergence")
        move = agent.act(shown)
        s, lamps = step(s, move)
        append(trace, StepRecord(t, move, lamps))
        shown = lamps
        if exploit_start is None and agent.phase is AgentPhase.EXPLOIT:
            exploit_start = t  # the step that was just taken already exploited
        if exploit_start is not None and (lamps.victory or lamps.loss):
            exploit_sets += 1
            if exploit_sets >= budgets.exploit_sets:
                break
        t += 1

    agent.act(shown)  # ingest the final record so reports include it

    cards = [
        score(trace, (w, min(w + budgets.scorecard_window, len(trace.records))))
        for w in range(0, len(trace.records), budgets.scorecard_window)
    ]
    return LifecycleResult(
        trace=trace,
        scorecards=cards,
        model=agent.model_document(),
        exploit_start=exploit_start,
        exploit_scorecard=score(trace, (exploit_start, len(trace.records))),
        agent=agent,
    )
