"""World rules: every legality case, lamp semantics, determinism."""

import random

import pytest

from lampworld.world import (
    Cell,
    Events,
    LampView,
    LINES,
    Move,
    Outcome,
    Phase,
    WorldState,
    cell_id,
    initial_state,
    line_winner,
    step,
    view,
    world1_view,
)


def make_state(board_str: str, eye=(1, 1), phase=Phase.PLAYING, rng=0) -> WorldState:
    """Board from a 9-char string, row-major: '.'=empty, 'X', 'O'."""
    chars = {".": Cell.EMPTY, "X": Cell.CROSS, "O": Cell.O}
    board = tuple(chars[c] for c in board_str)
    outcome = Outcome.NONE
    if phase == Phase.OVER:
        w = line_winner(board)
        outcome = (
            Outcome.VICTORY
            if w == Cell.CROSS
            else Outcome.LOSS
            if w == Cell.O
            else Outcome.DRAW
        )
    return WorldState(
        board=board, eye_col=eye[0], eye_row=eye[1], phase=phase, last_outcome=outcome, rng=rng
    )


def test_initial_state_is_empty_with_eye_at_origin():
    s = initial_state(42)
    assert s.board == (Cell.EMPTY,) * 9
    assert (s.eye_col, s.eye_row) == (1, 1)
    assert s.phase == Phase.PLAYING


def test_initial_view_all_lamps_off():
    for seed in (0, 42, 2**63):
        assert view(initial_state(seed)).bits() == (0, 0, 0, 0, 0)


def test_same_seed_same_state():
    assert initial_state(42) == initial_state(42)


def test_left_at_first_column_is_bad_move():
    s = initial_state(1)
    s2, lamps = step(s, Move.LEFT)
    assert lamps.bad_move and s2 == s


def test_navigation_moves_eye():
    s = initial_state(1)
    s, lamps = step(s, Move.RIGHT)
    assert not lamps.bad_move and (s.eye_col, s.eye_row) == (2, 1)
    s, lamps = step(s, Move.DOWN)
    assert (s.eye_col, s.eye_row) == (2, 2)
    s, lamps = step(s, Move.UP)
    assert (s.eye_col, s.eye_row) == (2, 1)
    s, lamps = step(s, Move.UP)
    assert lamps.bad_move and (s.eye_col, s.eye_row) == (2, 1)


def test_put_cross_on_occupied_cell_is_bad_move():
    s = make_state("X........")
    s2, lamps = step(s, Move.PUT_CROSS)
    assert lamps.bad_move and s2 == s
    assert lamps.cross  # the eye still shows the occupied cell


def test_new_game_while_playing_is_bad_move():
    s2, lamps = step(initial_state(0), Move.NEW_GAME)
    assert lamps.bad_move


def test_unused_commands_always_bad():
    rng = random.Random(0)
    s = initial_state(9)
    for _ in range(200):
        for unused in (Move.UNUSED6, Move.UNUSED7):
            s2, lamps = step(s, unused)
            assert lamps.bad_move and s2 == s
        s, _ = step(s, Move(rng.randrange(6)))


def test_new_game_after_set_clears_board_keeps_eye():
    s = make_state("XX.OO....", eye=(3, 1))
    s, lamps = step(s, Move.PUT_CROSS)  # completes the top row
    assert lamps.victory and not lamps.loss
    assert s.phase == Phase.OVER
    s, lamps = step(s, Move.NEW_GAME)
    assert s.board == (Cell.EMPTY,) * 9
    assert (s.eye_col, s.eye_row) == (3, 1)
    assert s.phase == Phase.PLAYING and not lamps.bad_move


def test_put_cross_while_over_is_bad_move():
    s = make_state("XXX.OO...", eye=(1, 2), phase=Phase.OVER)
    s2, lamps = step(s, Move.PUT_CROSS)
    assert lamps.bad_move and s2 == s


def test_navigation_allowed_while_over():
    s = make_state("XXX.OO...", eye=(1, 2), phase=Phase.OVER)
    s2, lamps = step(s, Move.RIGHT)
    assert not lamps.bad_move and s2.eye_col == 2
    assert lamps.o  # observing the finished board


def test_draw_flashes_both_lamps():
    # Full board after the cross, no line anywhere.
    #   X O X
    #   X O O   with (2,3) empty: cross there makes it a draw
    #   O X .
    s = make_state("XOXXOOOX.", eye=(3, 3))
    s, lamps = step(s, Move.PUT_CROSS)
    assert lamps.victory and lamps.loss
    assert s.phase == Phase.OVER and s.last_outcome == Outcome.DRAW


def _two_cross_completions():
    """All boards where PUT_CROSS on some empty cell completes a cross line,
    with legal mark counts and the game still open."""
    positions = []
    for line in LINES:
        for empty_slot in range(3):
            cells = list(line)
            target = cells.pop(empty_slot)
            board = [Cell.EMPTY] * 9
            for c in cells:
                board[c] = Cell.CROSS
            # park two O marks off the line (counts X=3 incl. target, O=2)
            os_placed = 0
            for c in range(9):
                if board[c] == Cell.EMPTY and c != target and os_placed < 2:
                    ok = True
                    board[c] = Cell.O
                    if line_winner(tuple(board)) != Cell.EMPTY:
                        board[c] = Cell.EMPTY
                        ok = False
                    if ok:
                        os_placed += 1
            if os_placed == 2 and line_winner(tuple(board)) == Cell.EMPTY:
                positions.append((tuple(board), target))
    return positions


def test_winning_cross_ends_set_without_tom_reply():
    positions = _two_cross_completions()
    assert positions
    for board, target in positions:
        col, row = target % 3 + 1, target // 3 + 1
        s = WorldState(board, col, row, Phase.PLAYING, Outcome.NONE, rng=999)
        s2, lamps = step(s, Move.PUT_CROSS)
        assert lamps.victory and not lamps.loss
        assert s2.board.count(Cell.O) == board.count(Cell.O)  # Tom sat out
        assert s2.rng == s.rng  # and no randomness was consumed
        assert s2.phase == Phase.OVER


def test_view_shows_cell_under_eye():
    s = make_state("X.O......", eye=(1, 1))
    assert view(s).bits()[:2] == (1, 0)
    s = make_state("X.O......", eye=(3, 1))
    assert view(s).bits()[:2] == (0, 1)
    s = make_state("X.O......", eye=(2, 1))
    assert view(s).bits()[:2] == (0, 0)


def test_event_lamps_flash_for_one_step():
    s = make_state("XX.OO....", eye=(3, 1))
    s, lamps = step(s, Move.PUT_CROSS)
    assert lamps.victory
    s, lamps = step(s, Move.LEFT)  # navigation after the flash
    assert not lamps.victory and not lamps.loss


def test_world1_view_is_injective_on_reachable_states():
    rng = random.Random(4)
    s = initial_state(17)
    seen = {}
    for _ in range(3000):
        obs = world1_view(s)
        public = (s.board, s.eye_col, s.eye_row, s.phase, s.last_outcome)
        if public in seen:
            assert seen[public] == obs
        else:
            for other_public, other_obs in list(seen.items())[:50]:
                assert other_obs != obs or other_public == public
            seen[public] = obs
        s, _ = step(s, Move(rng.randrange(8)))
    # observation round-trips into the public part
    obs = world1_view(s)
    assert (obs.board, obs.eye_col, obs.eye_row, obs.phase, obs.last_outcome) == (
        s.board,
        s.eye_col,
        s.eye_row,
        s.phase,
        s.last_outcome,
    )


def test_world1_initial_observation_is_empty_board():
    obs = world1_view(initial_state(5))
    assert obs.board == (Cell.EMPTY,) * 9


def test_bad_moves_freeze_state_and_rng():
    rng = random.Random(11)
    s = initial_state(23)
    for _ in range(5000):
        m = Move(rng.randrange(8))
        s2, lamps = step(s, m)
        if lamps.bad_move:
            assert s2 == s
        s = s2


def test_cell_lamps_never_both_on():
    rng = random.Random(12)
    s = initial_state(29)
    for _ in range(5000):
        s, lamps = step(s, Move(rng.randrange(8)))
        assert not (lamps.cross and lamps.o)


def test_mark_counts_stay_balanced_and_one_o_per_step():
    rng = random.Random(13)
    s = initial_state(31)
    for _ in range(5000):
        pre_o = s.board.count(Cell.O)
        m = Move(rng.randrange(8))
        s, lamps = step(s, m)
        nx, no = s.board.count(Cell.CROSS), s.board.count(Cell.O)
        assert nx - no in (0, 1)
        if m == Move.PUT_CROSS and not lamps.bad_move:
            ended_by_cross = (lamps.victory and not lamps.loss) or (
                lamps.victory and lamps.loss and no == pre_o
            )
            assert no == pre_o + (0 if ended_by_cross else 1)
            if not lamps.victory and not lamps.loss:
                assert nx == no  # Tom answered inside the same step
        elif not (m == Move.NEW_GAME and not lamps.bad_move):
            assert no == pre_o


def test_fixed_seed_reproduces_trace():
    rng = random.Random(14)
    moves = [Move(rng.randrange(8)) for _ in range(2000)]
    outs = []
    for _ in range(2):
        s = initial_state(77)
        lamps_seq = []
        for m in moves:
            s, lamps = step(s, m)
            lamps_seq.append(lamps.bits())
        outs.append((s, lamps_seq))
    assert outs[0] == outs[1]
