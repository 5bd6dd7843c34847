"""Command line: run a learning life, record/replay traces, evaluate, serve.

Everything is seeded and flag-driven so that any result can be reproduced
with a one-liner.  An optional config file (flat `key = value` lines) may
set defaults; explicit flags always win.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import __version__
from .agent import (
    SCORECARD_CSV_HEADER,
    AgentError,
    Budgets,
    LifecycleResult,
    lifecycle,
)
from .traces import TraceParseError, load, record_run, replay, save
from .world import LampView, Move, initial_state, step

LAMP_NAMES = ("cross", "O", "victory", "loss", "bad move")


def parse_config(path: Path) -> dict:
    """Flat `key = value` file: ints, true/false and quoted strings."""
    values: dict = {}
    for line_no, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{line_no}: expected `key = value`")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if value.lower() in ("true", "false"):
            values[key] = value.lower() == "true"
        elif value.startswith('"') and value.endswith('"'):
            values[key] = value[1:-1]
        else:
            try:
                values[key] = int(value)
            except ValueError:
                raise ValueError(f"{path}:{line_no}: unsupported value {value!r}")
    return values


def _write_outputs(result: LifecycleResult, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "model.json").write_text(json.dumps(result.model, indent=2) + "\n")
    rows = [SCORECARD_CSV_HEADER] + [c.csv_row() for c in result.scorecards]
    (out_dir / "scorecard.csv").write_text("\n".join(rows) + "\n")


def cmd_run(args) -> int:
    if args.world != 2:
        print("the learning agent targets world 2", file=sys.stderr)
        return 2
    budgets = Budgets(explore_steps=args.steps, exploit_sets=args.exploit_sets)
    try:
        result = lifecycle(args.seed, budgets)
    except AgentError as e:
        print(f"run failed: {e}", file=sys.stderr)
        return 1
    if args.out_dir:
        _write_outputs(result, Path(args.out_dir))
        save(result.trace, Path(args.out_dir) / "trace.jsonl")
    ex = result.exploit_scorecard
    print(
        f"seed {args.seed}: exploit from step {result.exploit_start}: "
        f"victories={ex.victories} losses={ex.losses} draws={ex.draws} "
        f"bad_moves={ex.bad_moves}"
    )
    return 0


def _print_panel(t: int, lamps: LampView) -> None:
    bits = lamps.bits()
    shown = "  ".join(
        f"[{'*' if bit else ' '}]{name}" for name, bit in zip(LAMP_NAMES, bits)
    )
    print(f"step {t}: {shown}")


def cmd_record(args) -> int:
    if args.interactive:
        state = initial_state(args.seed)
        from .traces import StepRecord, Trace, append

        trace = Trace(world_id=args.world, seed=args.seed)
        print("moves: 0=left 1=right 2=up 3=down 4=put-cross 5=new-game 6/7=unused")
        print("blank line to stop.")
        t = 0
        while True:
            try:
                entry = input(f"move {t}> ").strip()
            except EOFError:
                break
            if not entry:
                break
            if entry not in [str(i) for i in range(8)]:
                print("enter a move 0..7")
                continue
            state, lamps = step(state, Move(int(entry)))
            append(trace, StepRecord(t, Move(int(entry)), lamps))
            _print_panel(t, lamps)
            t += 1
    else:
        rng = random.Random(args.move_seed)
        moves = [rng.randrange(8) for _ in range(args.random_steps)]
        trace = record_run(args.world, args.seed, moves)
    save(trace, Path(args.out))
    print(f"recorded {len(trace.records)} steps to {args.out}")
    return 0


def cmd_replay(args) -> int:
    try:
        trace = load(Path(args.file))
    except TraceParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    verdict = replay(trace)
    if verdict.consistent:
        print(f"consistent ({len(trace.records)} steps)")
        return 0
    print(f"divergent at step {verdict.divergent_t}", file=sys.stderr)
    return 1


def cmd_eval(args) -> int:
    budgets = Budgets(explore_steps=args.steps, exploit_sets=args.games)
    total = {"victories": 0, "losses": 0, "draws": 0, "bad_moves": 0}
    rows = []
    for seed in range(args.seed_base, args.seed_base + args.seeds):
        try:
            result = lifecycle(seed, budgets)
        except AgentError as e:
            print(f"seed {seed} failed: {e}", file=sys.stderr)
            return 1
        ex = result.exploit_scorecard
        rows.append((seed, ex))
        for key in total:
            total[key] += getattr(ex, key)
        print(
            f"seed {seed}: victories={ex.victories} losses={ex.losses} "
            f"draws={ex.draws} bad_moves={ex.bad_moves}"
        )
    games = args.games * args.seeds
    print(
        f"aggregate over {games} exploit sets: victories={total['victories']} "
        f"losses={total['losses']} draws={total['draws']} bad_moves={total['bad_moves']}"
    )
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        lines = ["seed," + SCORECARD_CSV_HEADER]
        lines += [f"{seed},{ex.csv_row()}" for seed, ex in rows]
        (out / "eval.csv").write_text("\n".join(lines) + "\n")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lampworld",
        description="hidden tick-tack-toe world, learning agent, and session service",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", type=Path, help="flat key = value defaults file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a full learning life and report scores")
    p.add_argument("--world", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", type=int, default=20_000, help="exploration budget")
    p.add_argument("--exploit-sets", type=int, default=1_000)
    p.add_argument("--agent", choices=["auto"], default="auto")
    p.add_argument("--out-dir", help="write model.json, scorecard.csv, trace.jsonl")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("record", help="record a trace (random or interactive)")
    p.add_argument("--world", type=int, default=2, choices=(1, 2))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--interactive", action="store_true")
    p.add_argument("--random-steps", type=int, default=1000)
    p.add_argument("--move-seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_record)

    p = sub.add_parser("replay", help="validate a trace file against the world")
    p.add_argument("file")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("eval", help="run several seeded lives and aggregate")
    p.add_argument("--games", type=int, default=1000, help="exploit sets per seed")
    p.add_argument("--seeds", type=int, default=1)
    p.add_argument("--seed-base", type=int, default=0)
    p.add_argument("--steps", type=int, default=20_000)
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("serve", help="start the session service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    parser.subcommands = {name: sp for name, sp in sub.choices.items()}
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            defaults = parse_config(args.config)
        except (OSError, ValueError) as e:
            print(f"bad config: {e}", file=sys.stderr)
            return 2
        known = {
            key: value for key, value in defaults.items() if hasattr(args, key)
        }
        # Flags win: reparse with config values as defaults.  Defaults must
        # land on the subparser too, which otherwise re-applies its own.
        parser.set_defaults(**known)
        parser.subcommands[args.command].set_defaults(**known)
        args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
