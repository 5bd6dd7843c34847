"""Automaton class enumeration, run semantics, mining, level-1 recovery."""

import itertools
import random

import numpy as np
import pytest

from lampworld import induction, traces
from lampworld.induction import (
    Automaton,
    GuardSymbol,
    InsufficientExploration,
    Level1Model,
    SYMBOLS,
    SymbolKind,
    canonicalize,
    enumerate_candidates,
    fired_symbols,
    induce_level1,
    is_canonical,
    mine,
    mine_constant_rules,
    run_automaton,
)
from lampworld.traces import StepRecord, Trace
from lampworld.world import Cell, LampView, Move, Phase, initial_state, step

from conftest import instrumented_random_run

# Hand-coded truths (canonical form: BFS numbering from state 0).
COLUMN_TRUTH = Automaton(
    n_states=3,
    relevant=(SYMBOLS[Move.LEFT], SYMBOLS[Move.RIGHT]),
    delta=((0, 1), (0, 2), (1, 2)),
)
GAME_OVER_TRUTH = Automaton(
    n_states=2,
    relevant=(SYMBOLS[Move.NEW_GAME], SYMBOLS[8], SYMBOLS[9]),  # new-game, victory, loss
    delta=((0, 1, 1), (0, 1, 1)),
)


def lamps(**kw) -> LampView:
    return LampView(**kw)


def rec(t, move, l) -> StepRecord:
    return StepRecord(t, move, l)


def test_run_column_truth_saturates_at_the_wall():
    records = [
        rec(0, Move.RIGHT, lamps()),
        rec(1, Move.RIGHT, lamps()),
        rec(2, Move.RIGHT, lamps(bad_move=True)),
    ]
    assert run_automaton(COLUMN_TRUTH, records) == [0, 1, 2, 2]


def test_run_with_empty_relevant_set_is_constant():
    a = Automaton(n_states=1, relevant=(), delta=((),))
    records = [rec(t, Move(t % 8), lamps(bad_move=t % 3 == 0)) for t in range(10)]
    assert run_automaton(a, records) == [0] * 11


def test_game_over_truth_tracks_flash_and_new_game():
    records = [
        rec(0, Move.PUT_CROSS, lamps(cross=True, victory=True)),
        rec(1, Move.LEFT, lamps(bad_move=True)),
        rec(2, Move.NEW_GAME, lamps()),
    ]
    assert run_automaton(GAME_OVER_TRUTH, records) == [0, 1, 1, 0]


def test_bad_move_steps_freeze_action_transitions():
    records = [rec(0, Move.RIGHT, lamps(bad_move=True))]
    assert run_automaton(COLUMN_TRUTH, records) == [0, 0]
    # but lamp transitions still fire on the same step
    records = [rec(0, Move.NEW_GAME, lamps(victory=True, loss=True, bad_move=True))]
    assert run_automaton(GAME_OVER_TRUTH, records) == [0, 1]


def test_fired_symbols_order_action_then_lamps():
    l = lamps(cross=True, victory=True)
    assert fired_symbols(Move.NEW_GAME, l) == (5, 8, 11)
    l = lamps(bad_move=True, o=True)
    assert fired_symbols(Move.LEFT, l) == (10, 12)  # no action on a bad move


def test_single_state_automaton_emitted_first_with_no_transitions():
    stream = enumerate_candidates()
    first = next(stream)
    assert first.n_states == 1 and first.relevant == () and first.rules == ()


def test_column_truth_is_in_the_enumerated_class():
    assert is_canonical(COLUMN_TRUTH.n_states, COLUMN_TRUTH.delta)
    emitted = {
        a.encoding() for a in enumerate_candidates(max_states=3, max_relevant=2)
    }
    assert COLUMN_TRUTH.encoding() in emitted
    assert GAME_OVER_TRUTH.encoding() in {
        a.encoding() for a in enumerate_candidates(max_states=2, max_relevant=3)
    }


def test_class_count_for_three_states_two_symbols_matches_oracle():
    # Oracle: enumerate EVERY (initial, table) machine over two fixed
    # symbols, canonicalize by relabeling, and count distinct survivors.
    n, k = 3, 2
    canon = set()
    for initial in range(n):
        for flat in itertools.product(range(n), repeat=n * k):
            delta = tuple(tuple(flat[q * k : (q + 1) * k]) for q in range(n))
            c = canonicalize(n, initial, delta)
            if c is not None:
                canon.add(c)
    per_symbol_pair = len(canon)
    assert per_symbol_pair == 210  # frozen once computed

    symbol_pairs = len(list(itertools.combinations(range(13), 2)))
    expected_total = per_symbol_pair * symbol_pairs  # 210 * 78

    emitted = [
        a
        for a in enumerate_candidates(max_states=3, max_relevant=2)
        if a.n_states == 3 and len(a.relevant) == 2
    ]
    encodings = [a.encoding() for a in emitted]
    assert len(encodings) == len(set(encodings)) == expected_total == 16_380


def test_no_two_enumerated_automata_are_trace_equivalent():
    # Distinct canonical tables over the same symbols must differ on some
    # short input (no duplicate hypotheses in the class).
    n, k = 3, 2
    tables = [
        a.delta
        for a in enumerate_candidates(max_states=3, max_relevant=2)
        if a.n_states == 3 and len(a.relevant) == 2 and a.relevant == SYMBOLS[:2]
    ]
    inputs = [
        word for n in range(7) for word in itertools.product(range(k), repeat=n)
    ]

    def signature(delta):
        out = []
        for word in inputs:
            q = 0
            for sym in word:
                q = delta[q][sym]
            out.append(q)
        return tuple(out)

    sigs = [signature(d) for d in tables]
    assert len(sigs) == len(set(sigs))


@pytest.fixture(scope="module")
def run6k():
    return instrumented_random_run(31, 6000, 77)


def test_mine_accepts_column_truth_with_boundary_rules(run6k):
    result = mine(run6k.trace, COLUMN_TRUTH, check_minimality=False)
    assert result.accepted
    rules = {(r.state, r.action, r.value) for r in result.automaton.rules}
    assert (0, Move.LEFT, True) in rules
    assert (2, Move.RIGHT, True) in rules
    assert (1, Move.LEFT, False) in rules and (2, Move.LEFT, False) in rules


def test_mine_accepts_game_over_truth_with_its_two_rules(run6k):
    result = mine(run6k.trace, GAME_OVER_TRUTH, check_minimality=False)
    assert result.accepted
    rules = {(r.state, r.action, r.value) for r in result.automaton.rules}
    assert (1, Move.PUT_CROSS, True) in rules  # set over: cross forbidden
    assert (0, Move.NEW_GAME, True) in rules  # still playing: restart forbidden


def test_mine_rejects_short_trace():
    short = Trace(world_id=2, seed=0)
    result = mine(short, COLUMN_TRUTH)
    assert not result.accepted and "short" in result.reason


def test_mine_minimality_rejects_rule_sets_a_smaller_machine_owns(run6k):
    # A 2-state machine flipping on UNUSED7 never fires (the action is
    # always a bad move, hence frozen), so its rules are exactly the
    # constant ones: the single-state automaton owns that rule set.
    candidate = Automaton(
        n_states=2,
        relevant=(SYMBOLS[Move.UNUSED7],),
        delta=((1,), (0,)),
    )
    unchecked = mine(run6k.trace, candidate, check_minimality=False)
    assert unchecked.accepted  # it does carry (always-bad) rules
    checked = mine(run6k.trace, candidate, check_minimality=True)
    assert not checked.accepted and "smaller" in checked.reason


def test_mined_rules_hold_across_the_whole_trace(run6k):
    result = mine(run6k.trace, COLUMN_TRUTH, check_minimality=False)
    states = run_automaton(COLUMN_TRUTH, run6k.trace.records)
    for rule in result.automaton.rules:
        for t, r in enumerate(run6k.trace.records):
            if states[t] == rule.state and r.move == rule.action:
                assert r.lamps.bad_move == rule.value


def test_batch_and_single_mining_agree(run6k):
    actions, bad, _ = induction._trace_arrays(run6k.trace)
    step_fires = [fired_symbols(r.move, r.lamps) for r in run6k.trace.records]
    combo = (int(Move.LEFT), int(Move.RIGHT))
    deltas = induction._canonical_deltas(3, 2)
    batch = {
        a.encoding(): (a, fp)
        for a, fp in induction._batch_mine_class(
            3, combo, deltas, actions, bad, step_fires, induction.S_MIN, 0.75
        )
    }
    rng = random.Random(0)
    sampled = rng.sample(range(deltas.shape[0]), 40)
    relevant = tuple(SYMBOLS[i] for i in combo)
    for m in sampled:
        delta = tuple(tuple(int(x) for x in deltas[m, q * 2 : (q + 1) * 2]) for q in range(3))
        cand = Automaton(n_states=3, relevant=relevant, delta=delta)
        single = mine(run6k.trace, cand, check_minimality=False)
        if single.accepted:
            assert cand.encoding() in batch
            got, fp = batch[cand.encoding()]
            assert set(got.rules) == set(single.automaton.rules)
            assert fp == single.fingerprint
        else:
            assert cand.encoding() not in batch


def test_constant_rules_cover_the_world_rulebook(run6k):
    rules = mine_constant_rules(run6k.trace)
    found = {(r.condition, r.action, r.value) for r in rules}
    assert (None, Move.UNUSED6, True) in found
    assert (None, Move.UNUSED7, True) in found
    assert ("cross", Move.PUT_CROSS, True) in found
    assert ("o", Move.PUT_CROSS, True) in found


def test_induce_level1_recovers_all_three_machines(level1, run20k):
    # Map induced states through the learned coordinate semantics and
    # compare with the hidden simulator projections.
    col_states = run_automaton(level1.column, run20k.trace.records)
    row_states = run_automaton(level1.row, run20k.trace.records)
    go_states = run_automaton(level1.game_over, run20k.trace.records)
    for t, s in enumerate(run20k.states):
        assert level1.column_map[col_states[t + 1]] == s.eye_col
        assert level1.row_map[row_states[t + 1]] == s.eye_row
        assert (go_states[t + 1] == level1.over_state) == (s.phase == Phase.OVER)


def test_induce_level1_short_trace_reports_missing_signatures():
    short = instrumented_random_run(3, 10, 3).trace
    with pytest.raises(InsufficientExploration) as e:
        induce_level1(short)
    assert len(e.value.missing) == 3


def test_level1_model_round_trips_through_json(level1):
    doc = level1.to_dict()
    back = Level1Model.from_dict(doc)
    assert back.column == level1.column
    assert back.row == level1.row
    assert back.game_over == level1.game_over
    assert back.column_map == level1.column_map
    assert back.constant_rules == level1.constant_rules


def test_level1_advance_matches_batch_run(level1, run20k):
    l1 = level1.start()
    col_states = run_automaton(level1.column, run20k.trace.records)
    for t, r in enumerate(run20k.trace.records[:2000]):
        l1 = level1.advance(l1, r.move, r.lamps)
        assert l1[0] == col_states[t + 1]


def test_predicted_bad_flags_boundary_and_constant_cases(level1):
    l1 = level1.start()  # eye at (1,1), playing
    assert level1.predicted_bad(l1, LampView(), Move.LEFT)
    assert level1.predicted_bad(l1, LampView(), Move.UP)
    assert level1.predicted_bad(l1, LampView(), Move.UNUSED6)
    assert level1.predicted_bad(l1, LampView(), Move.NEW_GAME)
    assert not level1.predicted_bad(l1, LampView(), Move.RIGHT)
    assert not level1.predicted_bad(l1, LampView(), Move.PUT_CROSS)
    assert level1.predicted_bad(l1, LampView(cross=True), Move.PUT_CROSS)
