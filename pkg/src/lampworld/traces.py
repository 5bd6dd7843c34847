"""Step traces: the only thing learning code is allowed to look at.

A trace is the seeded header plus one (move, lamps) record per step,
serialized as JSON lines in a canonical byte form so that
serialize -> parse -> serialize is the identity.  The hidden world state
is never stored; replaying the moves from the seed must reproduce the
recorded lamps exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .world import LampView, Move, initial_state, step


class TraceError(Exception):
    pass


class TraceParseError(TraceError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class StepRecord:
    t: int
    move: Move
    lamps: LampView

    def to_json(self) -> str:
        return json.dumps(
            {"t": self.t, "move": int(self.move), "lamps": list(self.lamps.bits())},
            separators=(",", ":"),
        )


@dataclass
class Trace:
    world_id: int
    seed: int
    records: list[StepRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)


def prev(t: int) -> int:
    """Predecessor moment; only defined for t >= 1."""
    if t < 1:
        raise ValueError("moment 0 has no predecessor")
    return t - 1


def append(trace: Trace, record: StepRecord) -> Trace:
    """Append in place; the record index must continue the sequence."""
    if record.t != len(trace.records):
        raise TraceError(f"record index {record.t}, expected {len(trace.records)}")
    trace.records.append(record)
    return trace


def serialize(trace: Trace) -> str:
    lines = [json.dumps({"world": trace.world_id, "seed": trace.seed}, separators=(",", ":"))]
    lines.extend(r.to_json() for r in trace.records)
    return "\n".join(lines) + "\n"


def parse(text: str) -> Trace:
    lines = text.splitlines()
    if not lines:
        raise TraceParseError(1, "empty trace file")

    def load(line_no: int, line: str) -> dict:
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as e:
            raise TraceParseError(line_no, f"invalid JSON: {e.msg}") from e
        if not isinstance(obj, dict):
            raise TraceParseError(line_no, "expected a JSON object")
        return obj

    header = load(1, lines[0])
    if "world" not in header or "seed" not in header:
        raise TraceParseError(1, "header must carry 'world' and 'seed'")
    if header["world"] not in (1, 2):
        raise TraceParseError(1, f"unknown world id {header['world']!r}")

    trace = Trace(world_id=header["world"], seed=header["seed"])
    for i, line in enumerate(lines[1:], start=2):
        obj = load(i, line)
        try:
            record = StepRecord(
                t=obj["t"],
                move=Move(obj["move"]),
                lamps=LampView.from_bits(obj["lamps"]),
            )
        except (KeyError, ValueError, TypeError) as e:
            raise TraceParseError(i, f"bad step record: {e}") from e
        if len(obj["lamps"]) != 5:
            raise TraceParseError(i, "lamps must have 5 bits")
        try:
            append(trace, record)
        except TraceError as e:
            raise TraceParseError(i, str(e)) from e
    return trace


def save(trace: Trace, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(serialize(trace))


def load(path) -> Trace:
    with open(path, "r", encoding="utf-8") as f:
        return parse(f.read())


@dataclass(frozen=True)
class ReplayVerdict:
    consistent: bool
    divergent_t: int | None = None


def replay(trace: Trace) -> ReplayVerdict:
    """Re-run the moves from the seed and compare lamps step by step."""
    s = initial_state(trace.seed)
    for r in trace.records:
        s, lamps = step(s, r.move)
        if lamps != r.lamps:
            return ReplayVerdict(consistent=False, divergent_t=r.t)
    return ReplayVerdict(consistent=True)


def record_run(world_id: int, seed: int, moves) -> Trace:
    """Drive a fresh world through `moves` and capture the trace."""
    trace = Trace(world_id=world_id, seed=seed)
    s = initial_state(seed)
    for t, m in enumerate(moves):
        s, lamps = step(s, Move(m))
        append(trace, StepRecord(t=t, move=Move(m), lamps=lamps))
    return trace
