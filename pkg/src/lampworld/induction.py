"""First-level automaton discovery from traces.

The hypothesis class is small guarded machines: at most 3 states, at most
3 relevant guard symbols out of 13 (the 8 actions plus the 5 lamps as
observed-this-step events), every irrelevant symbol a self-loop.  A
candidate is worth keeping when running it over the trace yields
peculiarity rules: (state, action) pairs whose bad-move outcome is the
same every single time.  The column automaton, for example, is the
3-state machine over {left, right} whose first state makes "left" a
guaranteed bad move.

Two conventions make these machines learnable at all:

* a step whose lamps include bad_move does not apply the action
  transition (the world did not change), while lamp-event transitions
  always apply;
* states are numbered by first reachability (BFS over the relevant
  symbols in global order), so isomorphic machines are one candidate.

Mining splits the trace 75/25: rules must be perfectly consistent with
enough support on the front segment and survive the held-out tail.
Minimality is extensional: an automaton is dropped when a smaller one
makes exactly the same predictions on the trace.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .traces import Trace, StepRecord
from .world import LampView, Move

S_MIN = 20  # occurrences before a rule is trusted
TRAIN_FRACTION = 0.75

LAMP_EVENT_ORDER = ("victory", "loss", "bad_move", "cross", "o")


class SymbolKind(Enum):
    ACTION = "action"
    LAMP = "lamp"


@dataclass(frozen=True)
class GuardSymbol:
    """One transition guard: either an action code or a lamp event."""

    kind: SymbolKind
    action: Optional[Move] = None
    lamp: Optional[str] = None

    @property
    def index(self) -> int:
        if self.kind is SymbolKind.ACTION:
            return int(self.action)
        return 8 + LAMP_EVENT_ORDER.index(self.lamp)

    def __repr__(self) -> str:
        if self.kind is SymbolKind.ACTION:
            return f"Action({self.action.name})"
        return f"Lamp({self.lamp})"


SYMBOLS: tuple[GuardSymbol, ...] = tuple(
    GuardSymbol(SymbolKind.ACTION, action=Move(a)) for a in range(8)
) + tuple(GuardSymbol(SymbolKind.LAMP, lamp=name) for name in LAMP_EVENT_ORDER)

N_SYMBOLS = len(SYMBOLS)  # 13


@dataclass(frozen=True)
class PeculiarityRule:
    """(state, action) -> lamp prediction, perfectly consistent on the trace.

    `condition` is only used by single-state (constant) rules, where the
    precondition is the currently displayed lamp rather than an automaton
    state (e.g. seeing "cross" makes PUT_CROSS a guaranteed bad move).
    """

    state: int
    action: Move
    lamp: str
    value: bool
    support: int
    confidence: float
    condition: Optional[str] = None

    def describe(self) -> str:
        cond = f"sees {self.condition} and " if self.condition else ""
        pred = f"{self.lamp}={'on' if self.value else 'off'}"
        return f"state {self.state}: {cond}plays {self.action.name} -> {pred}"


@dataclass(frozen=True)
class Automaton:
    """Guarded machine in canonical form (initial state 0, BFS numbering)."""

    n_states: int
    relevant: tuple[GuardSymbol, ...]  # sorted by global symbol order
    delta: tuple[tuple[int, ...], ...]  # delta[state][i] over relevant[i]
    rules: tuple[PeculiarityRule, ...] = ()

    @property
    def initial(self) -> int:
        return 0

    def encoding(self) -> tuple:
        """Total order on canonical automata (used for tie-breaking)."""
        return (
            self.n_states,
            len(self.relevant),
            tuple(s.index for s in self.relevant),
            tuple(itertools.chain.from_iterable(self.delta)),
        )

    def to_dict(self) -> dict:
        return {
            "n_states": self.n_states,
            "relevant": [
                {"kind": s.kind.value, "action": int(s.action)}
                if s.kind is SymbolKind.ACTION
                else {"kind": s.kind.value, "lamp": s.lamp}
                for s in self.relevant
            ],
            "delta": [list(row) for row in self.delta],
            "rules": [
                {
                    "state": r.state,
                    "action": int(r.action),
                    "lamp": r.lamp,
                    "value": r.value,
                    "support": r.support,
                    "confidence": r.confidence,
                    "condition": r.condition,
                }
                for r in self.rules
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Automaton":
        relevant = tuple(
            GuardSymbol(SymbolKind.ACTION, action=Move(s["action"]))
            if s["kind"] == "action"
            else GuardSymbol(SymbolKind.LAMP, lamp=s["lamp"])
            for s in d["relevant"]
        )
        rules = tuple(
            PeculiarityRule(
                state=r["state"],
                action=Move(r["action"]),
                lamp=r["lamp"],
                value=r["value"],
                support=r["support"],
                confidence=r["confidence"],
                condition=r.get("condition"),
            )
            for r in d["rules"]
        )
        return cls(
            n_states=d["n_states"],
            relevant=relevant,
            delta=tuple(tuple(row) for row in d["delta"]),
            rules=rules,
        )


def fired_symbols(move: Move, lamps: LampView) -> tuple[int, ...]:
    """Global symbol indices firing on one step, in application order.

    The action fires first unless the step was a bad move (frozen world);
    lamp events fire in LAMP_EVENT_ORDER whenever the lamp is on.
    """
    fires = []
    if not lamps.bad_move:
        fires.append(int(move))
    for i, name in enumerate(LAMP_EVENT_ORDER):
        if getattr(lamps, name):
            fires.append(8 + i)
    return tuple(fires)


def run_automaton(a: Automaton, records: Sequence[StepRecord]) -> list[int]:
    """State before each step plus the final state (length len(records)+1)."""
    rel = {s.index: i for i, s in enumerate(a.relevant)}
    state = 0
    out = [0]
    for r in records:
        for sym in fired_symbols(r.move, r.lamps):
            i = rel.get(sym)
            if i is not None:
                state = a.delta[state][i]
        out.append(state)
    return out


def _bfs_order(n_states: int, delta: Sequence[Sequence[int]]) -> list[int] | None:
    """First-reachability order from state 0, or None if not all reachable."""
    order = [0]
    seen = {0}
    i = 0
    while i < len(order):
        q = order[i]
        for row_target in delta[q]:
            if row_target not in seen:
                seen.add(row_target)
                order.append(row_target)
        i += 1
    if len(order) != n_states:
        return None
    return order


def is_canonical(n_states: int, delta: Sequence[Sequence[int]]) -> bool:
    """All states reachable, BFS numbering is the identity, and every
    relevant symbol moves at least one state (otherwise it is not relevant)."""
    order = _bfs_order(n_states, delta)
    if order is None or order != list(range(n_states)):
        return False
    k = len(delta[0]) if n_states else 0
    for i in range(k):
        if all(delta[q][i] == q for q in range(n_states)):
            return False
    return True


def canonicalize(n_states: int, initial: int, delta: Sequence[Sequence[int]]) -> tuple | None:
    """Relabel an arbitrary machine into canonical form; None if some state
    is unreachable or a symbol is a pure self-loop."""
    order = [initial]
    seen = {initial}
    i = 0
    while i < len(order):
        for t in delta[order[i]]:
            if t not in seen:
                seen.add(t)
                order.append(t)
        i += 1
    if len(order) != n_states:
        return None
    rename = {old: new for new, old in enumerate(order)}
    new_delta = tuple(
        tuple(rename[t] for t in delta[old]) for old in order
    )
    if not is_canonical(n_states, new_delta):
        return None
    return new_delta


def enumerate_candidates(max_states: int = 3, max_relevant: int = 3) -> Iterator[Automaton]:
    """Every canonical automaton of the class, exactly once, smallest first.

    Sizes stream in (n_states, n_relevant) order; within a size, symbol
    sets and transition maps in lexicographic order.  The single-state
    machine is the unique size-(1,0) member (any symbol on one state is a
    self-loop, hence not relevant).
    """
    yield Automaton(n_states=1, relevant=(), delta=((),))
    for n in range(2, max_states + 1):
        for k in range(1, max_relevant + 1):
            for combo in itertools.combinations(range(N_SYMBOLS), k):
                relevant = tuple(SYMBOLS[i] for i in combo)
                for flat in itertools.product(range(n), repeat=n * k):
                    delta = tuple(tuple(flat[q * k : (q + 1) * k]) for q in range(n))
                    if is_canonical(n, delta):
                        yield Automaton(n_states=n, relevant=relevant, delta=delta)


@dataclass(frozen=True)
class MineResult:
    accepted: bool
    automaton: Optional[Automaton] = None
    reason: Optional[str] = None
    fingerprint: Optional[bytes] = None


def _occupancy_packed(states: np.ndarray, n_states: int) -> list[np.ndarray]:
    return [np.packbits(states == q) for q in range(n_states)]


def _rule_fingerprint(
    rules: Iterable[PeculiarityRule], occ: list[np.ndarray]
) -> bytes:
    """Digest of the flattened predictions a rule set makes on the trace.

    Two automata whose rules light the same (step, action) -> value map get
    the same digest, whatever their internal state structure.
    """
    h = hashlib.blake2b(digest_size=16)
    by_key: dict[tuple[int, bool], list[int]] = {}
    for r in rules:
        by_key.setdefault((int(r.action), r.value), []).append(r.state)
    for (action, value) in sorted(by_key, key=lambda kv: (kv[0], kv[1])):
        union = occ[by_key[(action, value)][0]].copy()
        for q in by_key[(action, value)][1:]:
            union |= occ[q]
        h.update(bytes((action, int(value))))
        h.update(union.tobytes())
    return h.digest()


def _mine_run(
    states: np.ndarray,
    actions: np.ndarray,
    bad: np.ndarray,
    n_states: int,
    s_min: int,
    split: float,
) -> list[PeculiarityRule]:
    """Rules for one state sequence: consistent with support on the front
    segment, zero violations on the held-out tail; stats reported over all."""
    t_train = max(1, int(len(actions) * split))
    rules = []
    for q in range(n_states):
        in_q = states == q
        for a in range(8):
            mask = in_q & (actions == a)
            m_train = mask[:t_train]
            n_on = int(np.count_nonzero(bad[:t_train] & m_train))
            n_tot = int(np.count_nonzero(m_train))
            if n_tot == 0 or 0 < n_on < n_tot:
                continue
            value = n_on > 0
            m_val = mask[t_train:]
            val_on = int(np.count_nonzero(bad[t_train:] & m_val))
            val_tot = int(np.count_nonzero(m_val))
            if val_on != (val_tot if value else 0):
                continue  # violated on held-out data
            if n_tot + val_tot < s_min:
                continue
            rules.append(
                PeculiarityRule(
                    state=q,
                    action=Move(a),
                    lamp="bad_move",
                    value=value,
                    support=n_tot + val_tot,
                    confidence=1.0,
                )
            )
    return rules


def _trace_arrays(trace: Trace) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(actions, bad, lamp_bits) with lamp_bits[t] = 5 columns in LAMP_EVENT_ORDER."""
    T = len(trace.records)
    actions = np.fromiter((int(r.move) for r in trace.records), dtype=np.int8, count=T)
    lamp_bits = np.zeros((T, 5), dtype=bool)
    for t, r in enumerate(trace.records):
        l = r.lamps
        lamp_bits[t] = (l.victory, l.loss, l.bad_move, l.cross, l.o)
    bad = lamp_bits[:, 2].copy()
    return actions, bad, lamp_bits


def mine(
    trace: Trace,
    candidate: Automaton,
    s_min: int = S_MIN,
    split: float = TRAIN_FRACTION,
    check_minimality: bool = True,
) -> MineResult:
    """Evaluate one candidate against a trace.

    Accepts when the run yields at least one surviving peculiarity rule
    and (optionally) no smaller automaton predicts exactly the same
    things.  The minimality check replays every smaller candidate, so it
    is meant for single candidates; induce_level1 batches this.
    """
    if len(trace.records) < s_min:
        return MineResult(False, reason=f"trace too short for support {s_min}")
    actions, bad, _ = _trace_arrays(trace)
    states = np.asarray(run_automaton(candidate, trace.records)[:-1], dtype=np.int8)
    rules = _mine_run(states, actions, bad, candidate.n_states, s_min, split)
    if not rules:
        return MineResult(False, reason="no consistent rule with enough support")
    occ = _occupancy_packed(states, candidate.n_states)
    fp = _rule_fingerprint(rules, occ)
    accepted = replace(candidate, rules=tuple(rules))

    if check_minimality:
        n, k = candidate.n_states, len(candidate.relevant)
        for smaller in enumerate_candidates(max_states=n, max_relevant=k):
            sn, sk = smaller.n_states, len(smaller.relevant)
            if (sn, sk) == (n, k) or sn > n or sk > k:
                continue
            r = mine(trace, smaller, s_min, split, check_minimality=False)
            if r.accepted and r.fingerprint == fp:
                return MineResult(
                    False,
                    reason=f"same rule set as smaller automaton {smaller.encoding()}",
                    fingerprint=fp,
                )
    return MineResult(True, automaton=accepted, fingerprint=fp)


def mine_constant_rules(
    trace: Trace, s_min: int = S_MIN, split: float = TRAIN_FRACTION
) -> list[PeculiarityRule]:
    """Single-state rules: unconditional ones plus rules guarded by the
    currently displayed lamps (the previous step's view; all-off at t=0).

    A conditioned rule is only kept when the unconditional outcome for
    that action is genuinely mixed, so "sees cross -> PUT_CROSS is bad"
    never degenerates into restating "UNUSED6 is always bad".
    """
    if len(trace.records) < s_min:
        return []
    actions, bad, lamp_bits = _trace_arrays(trace)
    T = len(actions)
    shown = np.zeros((T, 5), dtype=bool)
    shown[1:] = lamp_bits[:-1]
    t_train = max(1, int(T * split))

    rules: list[PeculiarityRule] = []

    def consistent(mask: np.ndarray) -> tuple[bool, bool, int]:
        m_train = mask[:t_train]
        n_on = int(np.count_nonzero(bad[:t_train] & m_train))
        n_tot = int(np.count_nonzero(m_train))
        if n_tot == 0 or 0 < n_on < n_tot:
            return False, False, 0
        value = n_on > 0
        val_on = int(np.count_nonzero(bad[t_train:] & mask[t_train:]))
        val_tot = int(np.count_nonzero(mask[t_train:]))
        if val_on != (val_tot if value else 0) or n_tot + val_tot < s_min:
            return False, False, 0
        return True, value, n_tot + val_tot

    for a in range(8):
        base = actions == a
        ok, value, support = consistent(base)
        if ok:
            rules.append(
                PeculiarityRule(0, Move(a), "bad_move", value, support, 1.0)
            )
            continue  # conditioned variants would just restate this
        for li, lamp in enumerate(LAMP_EVENT_ORDER):
            ok, value, support = consistent(base & shown[:, li])
            if ok:
                rules.append(
                    PeculiarityRule(
                        0, Move(a), "bad_move", value, support, 1.0, condition=lamp
                    )
                )
    return rules


# ---------------------------------------------------------------------------
# Batched mining over whole size classes (used by induce_level1)


def _canonical_deltas(n: int, k: int) -> np.ndarray:
    """All canonical transition tables for (n states, k symbols), flattened
    row-major to shape (M, n*k)."""
    out = []
    for flat in itertools.product(range(n), repeat=n * k):
        delta = tuple(tuple(flat[q * k : (q + 1) * k]) for q in range(n))
        if is_canonical(n, delta):
            out.append(flat)
    return np.asarray(out, dtype=np.int64).reshape(-1, n * k)


def _batch_states(
    deltas: np.ndarray,
    n: int,
    k: int,
    fire_lists: list[tuple[int, ...]],
) -> np.ndarray:
    """Run M automata over the trace at once -> (T, M) pre-step states."""
    M = deltas.shape[0]
    T = len(fire_lists)
    flat = np.ascontiguousarray(deltas, dtype=np.int64).reshape(-1)
    offsets = np.arange(M, dtype=np.int64) * (n * k)
    states = np.empty((T, M), dtype=np.int8)
    cur = np.zeros(M, dtype=np.int64)
    last = 0
    for t, fires in enumerate(fire_lists):
        if not fires:
            continue
        states[last:t + 1] = cur.astype(np.int8)[None, :]
        for j in fires:
            cur = flat[offsets + cur * k + j]
        last = t + 1
    states[last:] = cur.astype(np.int8)[None, :]
    return states


def _batch_mine_class(
    n: int,
    combo: tuple[int, ...],
    deltas: np.ndarray,
    actions: np.ndarray,
    bad: np.ndarray,
    step_fires: list[tuple[int, ...]],
    s_min: int,
    split: float,
) -> list[tuple[Automaton, bytes]]:
    """Mine every canonical table over one symbol set; returns accepted
    automata (pre-minimality) with their prediction fingerprints."""
    k = len(combo)
    pos = {sym: j for j, sym in enumerate(combo)}
    fire_lists = [
        tuple(pos[s] for s in fires if s in pos) for fires in step_fires
    ]
    if not any(fire_lists):
        return []
    states = _batch_states(deltas, n, k, fire_lists)
    T, M = states.shape
    t_train = max(1, int(T * split))

    # Per-candidate (state, action, bad) counts for both trace segments,
    # via one bincount per segment over a fused index.
    def seg_counts(lo: int, hi: int) -> np.ndarray:
        seg = states[lo:hi].astype(np.int64)
        code = (actions[lo:hi].astype(np.int64) * 2 + bad[lo:hi]) * n
        idx = seg + code[:, None] + np.arange(M, dtype=np.int64)[None, :] * (16 * n)
        cnt = np.bincount(idx.reshape(-1), minlength=M * 16 * n)
        return cnt.reshape(M, 8, 2, n)

    train = seg_counts(0, t_train)
    val = seg_counts(t_train, T)

    tr_off, tr_on = train[:, :, 0, :], train[:, :, 1, :]
    va_off, va_on = val[:, :, 0, :], val[:, :, 1, :]
    tr_tot = tr_off + tr_on
    total = tr_tot + va_off + va_on
    deterministic = (tr_tot > 0) & ((tr_on == 0) | (tr_off == 0)) & (total >= s_min)
    value_on = tr_on > 0
    survives = deterministic & np.where(value_on, va_off == 0, va_on == 0)

    results: list[tuple[Automaton, bytes]] = []
    relevant = tuple(SYMBOLS[i] for i in combo)
    for m in np.nonzero(survives.any(axis=(1, 2)))[0]:
        rules = []
        for a, q in zip(*np.nonzero(survives[m])):
            rules.append(
                PeculiarityRule(
                    state=int(q),
                    action=Move(int(a)),
                    lamp="bad_move",
                    value=bool(value_on[m, a, q]),
                    support=int(tr_tot[m, a, q] + va_off[m, a, q] + va_on[m, a, q]),
                    confidence=1.0,
                )
            )
        delta = tuple(
            tuple(int(x) for x in deltas[m, qi * k : (qi + 1) * k]) for qi in range(n)
        )
        auto = Automaton(n_states=n, relevant=relevant, delta=delta, rules=tuple(rules))
        occ = _occupancy_packed(states[:, m], n)
        results.append((auto, _rule_fingerprint(rules, occ)))
    return results


@dataclass
class Level1Model:
    """The induced first level: eye coordinates, set phase, constant rules.

    The semantic maps are read off the signature rules (the state where
    LEFT is always bad is column 1, and so on); nothing here peeks at the
    world's internals.
    """

    column: Automaton
    row: Automaton
    game_over: Automaton
    constant_rules: tuple[PeculiarityRule, ...]
    column_map: dict[int, int] = field(default_factory=dict)
    row_map: dict[int, int] = field(default_factory=dict)
    playing_state: int = 0
    over_state: int = 1

    def start(self) -> tuple[int, int, int]:
        return (0, 0, 0)

    def advance(
        self, l1: tuple[int, int, int], move: Move, lamps: LampView
    ) -> tuple[int, int, int]:
        fires = fired_symbols(move, lamps)

        def one(a: Automaton, state: int) -> int:
            rel = {s.index: i for i, s in enumerate(a.relevant)}
            for sym in fires:
                i = rel.get(sym)
                if i is not None:
                    state = a.delta[state][i]
            return state

        return (one(self.column, l1[0]), one(self.row, l1[1]), one(self.game_over, l1[2]))

    def eye(self, l1: tuple[int, int, int]) -> tuple[int, int]:
        return self.column_map[l1[0]], self.row_map[l1[1]]

    def is_over(self, l1: tuple[int, int, int]) -> bool:
        return l1[2] == self.over_state

    def predicted_bad(self, l1: tuple[int, int, int], shown: LampView, move: Move) -> bool:
        """True when some learned rule says this move will flash bad_move."""
        for rule in self.column.rules:
            if rule.value and rule.action == move and l1[0] == rule.state:
                return True
        for rule in self.row.rules:
            if rule.value and rule.action == move and l1[1] == rule.state:
                return True
        for rule in self.game_over.rules:
            if rule.value and rule.action == move and l1[2] == rule.state:
                return True
        return constant_rules_predict_bad(self.constant_rules, shown, move)

    def to_dict(self) -> dict:
        return {
            "column": self.column.to_dict(),
            "row": self.row.to_dict(),
            "game_over": self.game_over.to_dict(),
            "constant_rules": [
                {
                    "action": int(r.action),
                    "lamp": r.lamp,
                    "value": r.value,
                    "support": r.support,
                    "confidence": r.confidence,
                    "condition": r.condition,
                }
                for r in self.constant_rules
            ],
            "column_map": {str(k): v for k, v in self.column_map.items()},
            "row_map": {str(k): v for k, v in self.row_map.items()},
            "playing_state": self.playing_state,
            "over_state": self.over_state,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Level1Model":
        return cls(
            column=Automaton.from_dict(d["column"]),
            row=Automaton.from_dict(d["row"]),
            game_over=Automaton.from_dict(d["game_over"]),
            constant_rules=tuple(
                PeculiarityRule(
                    state=0,
                    action=Move(r["action"]),
                    lamp=r["lamp"],
                    value=r["value"],
                    support=r["support"],
                    confidence=r["confidence"],
                    condition=r.get("condition"),
                )
                for r in d["constant_rules"]
            ),
            column_map={int(k): v for k, v in d["column_map"].items()},
            row_map={int(k): v for k, v in d["row_map"].items()},
            playing_state=d["playing_state"],
            over_state=d["over_state"],
        )


def constant_rules_predict_bad(
    rules: Iterable[PeculiarityRule], shown: LampView, move: Move
) -> bool:
    for r in rules:
        if not r.value or r.action != move:
            continue
        if r.condition is None or getattr(shown, r.condition):
            return True
    return False


class InsufficientExploration(Exception):
    def __init__(self, missing: list[str]):
        super().__init__(
            "trace does not pin down: " + ", ".join(missing)
            + " (play longer or more varied moves)"
        )
        self.missing = missing


def _signature_states(auto: Automaton, action: Move) -> list[int]:
    return [r.state for r in auto.rules if r.action == action and r.value]


# Size classes searched by induce_level1.  (3,3) is left out: its ~5.6M
# canonical tables dwarf anything the three target machines need (the
# widest is 2 states x 3 symbols, the deepest 3 states x 2 symbols).
_SEARCH_SIZES = ((2, 1), (2, 2), (2, 3), (3, 1), (3, 2))


def induce_level1(
    trace: Trace,
    s_min: int = S_MIN,
    split: float = TRAIN_FRACTION,
) -> Level1Model:
    """Sweep the hypothesis class and name the survivors.

    Every accepted automaton is grouped by what its rules actually
    predict; each group keeps its smallest member.  The column machine is
    the one that forbids LEFT somewhere and RIGHT somewhere else, the row
    machine likewise for UP/DOWN, and the game-over machine transitions
    on end-of-set lamps while forbidding NEW_GAME in one state and
    PUT_CROSS in the other.
    """
    actions, bad, _ = _trace_arrays(trace)
    step_fires = [fired_symbols(r.move, r.lamps) for r in trace.records]

    groups: dict[bytes, list[Automaton]] = {}
    deltas_cache: dict[tuple[int, int], np.ndarray] = {}
    for n, k in _SEARCH_SIZES:
        if (n, k) not in deltas_cache:
            deltas_cache[(n, k)] = _canonical_deltas(n, k)
        deltas = deltas_cache[(n, k)]
        for combo in itertools.combinations(range(N_SYMBOLS), k):
            for auto, fp in _batch_mine_class(
                n, combo, deltas, actions, bad, step_fires, s_min, split
            ):
                groups.setdefault(fp, []).append(auto)

    # One representative per prediction group: encoding() sorts by
    # (n_states, n_relevant, ...) so the first member is the smallest
    # automaton making those exact predictions, which is the minimality
    # rule (ties between incomparable sizes resolve lexicographically).
    minimal: list[Automaton] = []
    for members in groups.values():
        members.sort(key=Automaton.encoding)
        minimal.append(members[0])

    def pick(predicate) -> Automaton | None:
        matches = sorted((a for a in minimal if predicate(a)), key=Automaton.encoding)
        return matches[0] if matches else None

    def is_column(a: Automaton) -> bool:
        return bool(_signature_states(a, Move.LEFT)) and bool(_signature_states(a, Move.RIGHT))

    def is_row(a: Automaton) -> bool:
        return bool(_signature_states(a, Move.UP)) and bool(_signature_states(a, Move.DOWN))

    def is_game_over(a: Automaton) -> bool:
        lamp_transitions = any(
            s.kind is SymbolKind.LAMP and s.lamp in ("victory", "loss") for s in a.relevant
        )
        ng = _signature_states(a, Move.NEW_GAME)
        pc = _signature_states(a, Move.PUT_CROSS)
        return lamp_transitions and bool(ng) and bool(pc) and set(ng).isdisjoint(pc)

    column = pick(is_column)
    row = pick(is_row)
    game_over = pick(is_game_over)

    missing = []
    if column is None:
        missing.append("column automaton (no state where LEFT and another where RIGHT always fail)")
    if row is None:
        missing.append("row automaton (no state where UP and another where DOWN always fail)")
    if game_over is None:
        missing.append("game-over automaton (no end-of-set lamp machine forbidding NEW_GAME/PUT_CROSS)")
    if missing:
        raise InsufficientExploration(missing)

    column_map = _coordinate_map(column, Move.LEFT, Move.RIGHT)
    row_map = _coordinate_map(row, Move.UP, Move.DOWN)
    playing = _signature_states(game_over, Move.NEW_GAME)[0]
    over = _signature_states(game_over, Move.PUT_CROSS)[0]

    return Level1Model(
        column=column,
        row=row,
        game_over=game_over,
        constant_rules=tuple(mine_constant_rules(trace, s_min, split)),
        column_map=column_map,
        row_map=row_map,
        playing_state=playing,
        over_state=over,
    )


def _coordinate_map(auto: Automaton, low_move: Move, high_move: Move) -> dict[int, int]:
    """state -> coordinate 1..3 from the boundary rules: the state where
    moving toward the low edge always fails is coordinate 1, etc."""
    low = _signature_states(auto, low_move)
    high = _signature_states(auto, high_move)
    mapping: dict[int, int] = {}
    if len(low) == 1:
        mapping[low[0]] = 1
    if len(high) == 1:
        mapping[high[0]] = 3
    middle = [q for q in range(auto.n_states) if q not in mapping]
    if len(middle) == 1:
        mapping[middle[0]] = 2
    return mapping
