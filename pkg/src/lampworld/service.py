"""HTTP session service: stepping, traces, model inspection, live events.

Sessions hold the hidden world server-side.  Human sessions receive
nothing but the five lamp bits and the step index — the test's whole
point — while agent sessions let the built-in learner choose the moves
and expose its current model document.  Every step is broadcast on the
session's event channel as the same JSON line the trace file uses, so a
client view is a pure fold over the stream (dedup by step index).
"""

from __future__ import annotations

import queue
import threading
import uuid
from typing import Literal, Optional

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel, Field
from starlette.concurrency import run_in_threadpool

from .agent import Agent, Budgets
from .traces import StepRecord, Trace, append, serialize
from .world import LampView, Move, WorldState, initial_state, step


class CreateSessionRequest(BaseModel):
    world_id: int
    seed: int = 0
    mode: Literal["human", "agent"] = "human"
    explore_steps: int = Field(default=20_000, ge=100)
    exploit_sets: int = Field(default=1_000, ge=1)


class StepRequest(BaseModel):
    move: Optional[int] = Field(default=None, ge=0, le=7)


class Session:
    def __init__(self, req: CreateSessionRequest):
        self.id = uuid.uuid4().hex
        self.world_id = req.world_id
        self.seed = req.seed
        self.mode = req.mode
        self.state: WorldState = initial_state(req.seed)
        self.shown = LampView()
        self.trace = Trace(world_id=req.world_id, seed=req.seed)
        self.agent: Optional[Agent] = None
        if req.mode == "agent":
            self.agent = Agent(
                req.seed,
                Budgets(explore_steps=req.explore_steps, exploit_sets=req.exploit_sets),
            )
        self.lock = threading.Lock()
        self.subscribers: list[queue.Queue] = []

    def do_step(self, move: Optional[int]) -> StepRecord:
        with self.lock:
            if self.agent is not None:
                chosen = self.agent.act(self.shown)
            else:
                chosen = Move(move)
            self.state, lamps = step(self.state, chosen)
            self.shown = lamps
            record = StepRecord(len(self.trace.records), chosen, lamps)
            append(self.trace, record)
            for q in list(self.subscribers):
                q.put(record)
            return record

    def snapshot(self) -> list[StepRecord]:
        with self.lock:
            return list(self.trace.records)


def create_app() -> FastAPI:
    app = FastAPI(title="lampworld", version="0.1.0")
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    def get_session(session_id: str) -> Session:
        with registry_lock:
            session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return session

    @app.post("/sessions")
    def create_session(req: CreateSessionRequest):
        if req.world_id not in (1, 2):
            raise HTTPException(status_code=400, detail="world_id must be 1 or 2")
        session = Session(req)
        with registry_lock:
            sessions[session.id] = session
        return {"id": session.id, "world": session.world_id, "mode": session.mode}

    @app.post("/sessions/{session_id}/steps")
    def post_step(session_id: str, req: StepRequest):
        session = get_session(session_id)
        if session.mode == "human" and req.move is None:
            raise HTTPException(status_code=422, detail="human sessions must send a move")
        record = session.do_step(req.move)
        body = {"t": record.t, "lamps": list(record.lamps.bits())}
        if session.mode == "agent":
            body["move"] = int(record.move)
        return body

    @app.get("/sessions/{session_id}/model")
    def get_model(session_id: str):
        session = get_session(session_id)
        if session.mode != "agent":
            raise HTTPException(status_code=403, detail="model inspection is agent-only")
        with session.lock:
            return session.agent.model_document()

    @app.get("/sessions/{session_id}/trace")
    def get_trace(session_id: str):
        session = get_session(session_id)
        with session.lock:
            text = serialize(session.trace)
        return PlainTextResponse(text, media_type="application/x-ndjson")

    @app.websocket("/sessions/{session_id}/events")
    async def events(ws: WebSocket, session_id: str):
        with registry_lock:
            session = sessions.get(session_id)
        if session is None:
            await ws.close(code=4404)
            return
        await ws.accept()
        q: queue.Queue = queue.Queue()
        # Replay-then-follow gives at-least-once delivery; clients dedup
        # on the step index.
        for record in session.snapshot():
            q.put(record)
        with session.lock:
            session.subscribers.append(q)
        try:
            while True:
                record = await run_in_threadpool(_poll, q)
                if record is not None:
                    await ws.send_text(record.to_json())
                else:
                    # Heartbeat keeps disconnect detection responsive.
                    await ws.send_text("")
        except (WebSocketDisconnect, RuntimeError):
            pass
        finally:
            with session.lock:
                if q in session.subscribers:
                    session.subscribers.remove(q)

    return app


def _poll(q: queue.Queue, timeout: float = 5.0) -> Optional[StepRecord]:
    try:
        return q.get(timeout=timeout)
    except queue.Empty:
        return None


app = create_app()
