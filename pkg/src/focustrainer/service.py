"""Real-time session service.

One bidirectional websocket per running session pushes wire messages that
mirror the event log; plain request/response endpoints handle creation,
lifecycle, and reports. Wall time is mapped onto the logical session
clock tick by tick, so the engine itself stays deterministic.

Clients may supply attention three ways (raw gaze samples, pre-debounced
events, a manual toggle); all are normalized before the orchestrator.
"""

from __future__ import annotations

import asyncio
import uuid
from pathlib import Path

from fastapi import FastAPI, Request, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse

from .errors import ValidationError
from .eventlog import EventLogRecord, RecordKind, build_report, log_path
from .monitor import AttentionState
from .session import (
    RANK_ATTENTION,
    RANK_KEYPRESS,
    AnswerInput,
    AttentionInput,
    GazeInput,
    KeypressInput,
    SessionConfig,
    SessionRunner,
)

DISCONNECT_GRACE_S = 10.0


def record_to_wire(token: str, record: EventLogRecord) -> list[dict]:
    """Map one log record to its wire messages (client-originated and
    internal records stay off the wire)."""
    base = {"session": token, "t": record.t, "seq": record.seq}
    kind, payload = record.kind, record.payload
    if kind is RecordKind.CONFIG_SNAPSHOT:
        return [{**base, "type": "agent_expression", "body": {"expression": "SlightlyHappy"}}]
    if kind is RecordKind.PHASE_START:
        return [{**base, "type": "phase", "body": {
            "phase": payload["phase"], "index": payload["index"],
            "duration_ms": payload["duration_ms"],
            "utterances": payload["utterances"],
        }}]
    if kind is RecordKind.TASK_PRESENTED:
        return [{**base, "type": "task", "body": {
            "id": payload["id"],
            "rendering": f"{payload['lhs']} {payload['operator']} {payload['rhs']}",
            "lhs": payload["lhs"], "operator": payload["operator"], "rhs": payload["rhs"],
        }}]
    if kind is RecordKind.ANSWER_RESULT:
        return [{**base, "type": "answer_result", "body": {
            "task_id": payload["task_id"],
            "correct": payload["result"] == "Correct",
            "sound": payload["sound"],
        }}]
    if kind is RecordKind.FEEDBACK:
        return [{**base, "type": "feedback", "body": dict(payload)}]
    if kind is RecordKind.POINTS_UPDATE:
        return [{**base, "type": "points", "body": {"balance": payload["balance"]}}]
    if kind is RecordKind.DISTRACTION:
        return [{**base, "type": "distraction", "body": {
            "phrase": payload["phrase"], "expression": payload["expression"],
        }}]
    return []


class LiveSession:
    """Owns one runner, its ticker task, and its subscribers."""

    def __init__(self, config: SessionConfig, data_dir: Path, time_scale: float,
                 disconnect_grace_s: float = DISCONNECT_GRACE_S):
        self.token = uuid.uuid4().hex
        self.config = config
        self.state = "Created"
        self.time_scale = time_scale
        self.disconnect_grace_s = disconnect_grace_s
        path = log_path(data_dir, config.child_id, config.session_id, config.seed)
        path.parent.mkdir(parents=True, exist_ok=True)
        suffix = 1
        while path.exists():
            suffix += 1
            path = path.with_name(f"{config.session_id}-{config.seed}-{suffix}.log")
        self.path = path
        self._sink = open(path, "w", encoding="utf-8")
        self.runner = SessionRunner(config, sink=self._sink)
        self.lock = asyncio.Lock()
        self.messages: list[dict] = []
        self.subscribers: set[asyncio.Queue] = set()
        self._ticker: asyncio.Task | None = None
        self._paused = False
        self._pause_deadline = 0.0
        self._ever_connected = False

    # -- lifecycle (call under self.lock) --------------------------------------

    def start_locked(self) -> None:
        if self.state != "Created":
            raise ValidationError({"state": f"cannot start from {self.state}"})
        self.state = "Running"
        self._broadcast(self.runner.begin())
        self._ticker = asyncio.get_running_loop().create_task(self._run())

    async def abort_locked(self) -> None:
        if self.state != "Running":
            raise ValidationError({"state": f"cannot abort from {self.state}"})
        self._broadcast(self.runner.abort())
        self._finalize("Aborted")

    def _finalize(self, state: str) -> None:
        self.state = state
        self._sink.close()
        # one past the final record: a resume can never miss the terminal marker
        final = {
            "session": self.token, "t": self.runner.now,
            "seq": self.runner.log.records[-1].seq + 1,
            "type": "session_end",
            "body": {"state": state, "final_points": self.runner.engine.balance},
        }
        self.messages.append(final)
        for queue in self.subscribers:
            queue.put_nowait(final)

    def _broadcast(self, records: list[EventLogRecord]) -> None:
        for record in records:
            for message in record_to_wire(self.token, record):
                self.messages.append(message)
                for queue in self.subscribers:
                    queue.put_nowait(message)

    async def _run(self) -> None:
        interval = self.config.tick_interval_ms / 1000.0 / self.time_scale
        loop = asyncio.get_running_loop()
        while True:
            await asyncio.sleep(interval)
            async with self.lock:
                if self.state != "Running":
                    return
                if self._paused:
                    if loop.time() >= self._pause_deadline:
                        self._broadcast(self.runner.abort())
                        self._finalize("Aborted")
                        return
                    continue
                target = self.runner.now + self.config.tick_interval_ms
                self._broadcast(self.runner.advance_to(target))
                if self.runner.finished:
                    self._finalize("Finished")
                    return

    # -- client I/O --------------------------------------------------------------

    def subscribe_locked(self, since_seq: int) -> tuple[asyncio.Queue, list[dict]]:
        queue: asyncio.Queue = asyncio.Queue()
        backlog = [m for m in self.messages if m["seq"] > since_seq]
        self.subscribers.add(queue)
        self._ever_connected = True
        self._paused = False
        return queue, backlog

    def unsubscribe_locked(self, queue: asyncio.Queue) -> None:
        self.subscribers.discard(queue)
        if not self.subscribers and self._ever_connected and self.state == "Running":
            self._paused = True
            self._pause_deadline = (asyncio.get_running_loop().time()
                                    + self.disconnect_grace_s)

    async def handle_client_message(self, doc: dict) -> dict | None:
        """Apply one client message; returns an error document for unknown
        or unusable messages (never raises at the protocol boundary)."""
        async with self.lock:
            mtype = doc.get("type")
            body = doc.get("body") or {}
            if mtype == "start":
                if self.state == "Created":
                    self.start_locked()
                    return None
                return {"type": "error", "body": {"message": f"cannot start from {self.state}"}}
            if mtype == "abort":
                if self.state == "Running":
                    await self.abort_locked()
                    return None
                return {"type": "error", "body": {"message": f"cannot abort from {self.state}"}}
            if self.state != "Running":
                return {"type": "error", "body": {"message": "session is not running"}}
            try:
                records = self._apply_input(mtype, body)
            except (ValidationError, KeyError, TypeError) as exc:
                return {"type": "error", "body": {"message": f"rejected: {exc}"}}
            if records is None:
                return {"type": "error", "body": {"message": f"unknown message type {mtype!r}"}}
            self._broadcast(records)
            return None

    def _apply_input(self, mtype: str, body: dict) -> list[EventLogRecord] | None:
        runner = self.runner
        if mtype == "attention_sample":
            t = runner.live_stamp(RANK_ATTENTION)
            return runner.submit_gaze(GazeInput(
                t=t, face_present=bool(body["face_present"]),
                yaw=float(body["yaw"]), pitch=float(body["pitch"])))
        if mtype == "attention_toggle":
            t = runner.live_stamp(RANK_ATTENTION)
            state = AttentionState.ATTENTIVE if body["attentive"] else AttentionState.INATTENTIVE
            return runner.submit_attention(AttentionInput(t=t, state=state))
        if mtype == "keypress":
            return runner.submit_keypress(KeypressInput(t=runner.live_stamp(RANK_KEYPRESS)))
        if mtype == "answer":
            value = body["value"]
            if isinstance(value, str) and value != "correct":
                value = int(value)
            return runner.submit_answer(AnswerInput(t=runner.live_stamp(RANK_KEYPRESS),
                                                    value=value))
        return None


def create_app(data_dir: Path | str = Path("data"), tick_ms: int = 250,
               time_scale: float = 1.0,
               disconnect_grace_s: float = DISCONNECT_GRACE_S) -> FastAPI:
    app = FastAPI(title="focustrainer service")
    sessions: dict[str, LiveSession] = {}
    data_dir = Path(data_dir)

    def _get(token: str) -> LiveSession | None:
        return sessions.get(token)

    @app.get("/health")
    async def health():
        return {"status": "ok", "sessions": len(sessions)}

    @app.post("/sessions")
    async def create_session(request: Request):
        try:
            doc = await request.json()
        except Exception:
            return JSONResponse({"errors": {"body": "invalid JSON"}}, status_code=422)
        if isinstance(doc, dict) and "tick_interval_ms" not in doc:
            doc["tick_interval_ms"] = tick_ms
        try:
            config = SessionConfig.from_dict(doc)
            session = LiveSession(config, data_dir, time_scale, disconnect_grace_s)
        except ValidationError as exc:
            return JSONResponse({"errors": exc.fields}, status_code=422)
        sessions[session.token] = session
        return {"token": session.token, "state": session.state}

    @app.get("/sessions/{token}")
    async def session_status(token: str):
        session = _get(token)
        if session is None:
            return JSONResponse({"errors": {"token": "unknown session"}}, status_code=404)
        return {"token": token, "state": session.state, "t": session.runner.now}

    @app.post("/sessions/{token}/start")
    async def start_session(token: str):
        session = _get(token)
        if session is None:
            return JSONResponse({"errors": {"token": "unknown session"}}, status_code=404)
        async with session.lock:
            try:
                session.start_locked()
            except ValidationError as exc:
                return JSONResponse({"errors": exc.fields}, status_code=409)
        return {"token": token, "state": session.state}

    @app.post("/sessions/{token}/abort")
    async def abort_session(token: str):
        session = _get(token)
        if session is None:
            return JSONResponse({"errors": {"token": "unknown session"}}, status_code=404)
        async with session.lock:
            try:
                await session.abort_locked()
            except ValidationError as exc:
                return JSONResponse({"errors": exc.fields}, status_code=409)
        return {"token": token, "state": session.state}

    @app.get("/sessions/{token}/report")
    async def session_report(token: str):
        session = _get(token)
        if session is None:
            return JSONResponse({"errors": {"token": "unknown session"}}, status_code=404)
        if session.state not in ("Finished", "Aborted"):
            return JSONResponse({"errors": {"state": "report not ready"}}, status_code=409)
        if not session.config.report_enabled:
            return JSONResponse({"errors": {"report": "disabled by configuration"}},
                                status_code=403)
        report = build_report(session.runner.log.records,
                              allow_partial=session.state == "Aborted")
        return report.to_dict()

    @app.websocket("/sessions/{token}/stream")
    async def stream(websocket: WebSocket, token: str, since_seq: int = -1):
        session = _get(token)
        if session is None:
            await websocket.close(code=4404)
            return
        await websocket.accept()
        async with session.lock:
            queue, backlog = session.subscribe_locked(since_seq)
        try:
            for message in backlog:
                await websocket.send_json(message)

            async def pump():
                while True:
                    await websocket.send_json(await queue.get())

            sender = asyncio.create_task(pump())
            try:
                while True:
                    doc = await websocket.receive_json()
                    if not isinstance(doc, dict):
                        await websocket.send_json(
                            {"type": "error", "body": {"message": "expected an object"}})
                        continue
                    error = await session.handle_client_message(doc)
                    if error is not None:
                        await websocket.send_json(error)
            finally:
                sender.cancel()
        except WebSocketDisconnect:
            pass
        finally:
            async with session.lock:
                session.unsubscribe_locked(queue)

    return app
