"""Session-oriented HTTP facade over the engine.

One session owns one engine run on its own worker thread.  The engine
blocks on a per-session mailbox whenever it needs an answer; the HTTP
layer exposes the pending query and feeds answers in.  Invalid answers
come back as the same pending query with a violation message, exactly
like the terminal retry loop.
"""

from __future__ import annotations

import json
import queue
import secrets
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.staticfiles import StaticFiles

from .engine import Config, MalformedConfig, config_from_dict, run_tree
from .errors import QueryAborted
from .queries import AnswerSource, AutoSource, Query

DEFAULT_IDLE_TIMEOUT = 30 * 60.0  # seconds of silence before a run fails
_SETTLE_TIMEOUT = 15.0  # max seconds an HTTP call waits for the engine

TERMINAL_STATES = ("finished", "failed", "aborted")


class _SessionTimeout(Exception):
    pass


class _RemoteSource(AnswerSource):
    """Mailbox-backed answer source; the engine thread blocks in fetch."""

    mode = "user"
    interactive = True  # violations re-present the query instead of failing

    def __init__(self, session: "Session"):
        self.session = session

    def fetch(self, query: Query, violation: str | None) -> str | None:
        return self.session._await_answer(query, violation)


@dataclass
class Session:
    config: Config
    idle_timeout: float = DEFAULT_IDLE_TIMEOUT
    id: str = field(default_factory=lambda: secrets.token_urlsafe(16))
    state: str = "running"
    pending: Query | None = None
    violation: str | None = None
    path_so_far: list[str] = field(default_factory=list)
    result: dict | None = None
    files: list[str] = field(default_factory=list)
    error: str | None = None
    created_at: float = field(default_factory=time.time)
    expires_at: float = 0.0

    def __post_init__(self):
        self.expires_at = self.created_at + self.idle_timeout
        self._mailbox: queue.Queue[str] = queue.Queue(maxsize=1)
        self._cond = threading.Condition()
        self._generation = 0
        self._thread = threading.Thread(target=self._run, daemon=True)

    # --- engine side ---

    def start(self):
        self._thread.start()

    def _run(self):
        try:
            if self.config.automation == "auto":
                source: AnswerSource = AutoSource()
            else:
                source = _RemoteSource(self)
            artifacts = run_tree(self.config, source,
                                 observer=self.path_so_far.append)
            with self._cond:
                self.result = artifacts.result
                self.files = list(artifacts.files_written)
                self._settle("finished")
        except QueryAborted:
            with self._cond:
                self._settle("aborted")
        except _SessionTimeout:
            with self._cond:
                self.error = "session timed out waiting for an answer"
                self._settle("failed")
        except Exception as exc:
            with self._cond:
                self.error = str(exc)
                self._settle("failed")

    def _settle(self, state: str):
        self.state = state
        self.pending = None
        self._generation += 1
        self._cond.notify_all()

    def _await_answer(self, query: Query, violation: str | None) -> str:
        with self._cond:
            self.pending = query
            self.violation = violation
            self.state = "awaiting_answer"
            self._generation += 1
            self._cond.notify_all()
        try:
            raw = self._mailbox.get(timeout=self.idle_timeout)
        except queue.Empty:
            raise _SessionTimeout()
        with self._cond:
            self.state = "running"
            self.pending = None
            self.violation = None
        return raw

    # --- HTTP side ---

    def submit(self, query_id: str, raw: str) -> None:
        with self._cond:
            if self.state != "awaiting_answer" or self.pending is None:
                raise HTTPException(409, "session is not awaiting an answer")
            if self.pending.id != query_id:
                raise HTTPException(
                    409, f"pending query is '{self.pending.id}', not '{query_id}'")
            generation = self._generation
        self._mailbox.put(raw)
        self.wait_settled(generation)

    def wait_settled(self, generation: int,
                     timeout: float = _SETTLE_TIMEOUT) -> None:
        """Block until the engine posts a new query or reaches a terminal
        state; a long-running solve simply leaves the state at running."""
        deadline = time.time() + timeout
        with self._cond:
            while (self._generation == generation
                   and self.state not in TERMINAL_STATES):
                remaining = deadline - time.time()
                if remaining <= 0:
                    return
                self._cond.wait(remaining)

    def touch(self) -> None:
        self.expires_at = time.time() + self.idle_timeout

    def expired(self) -> bool:
        """Idle sessions fall out of the in-memory index; their artifact
        files stay on disk."""
        return time.time() > self.expires_at

    def to_json_dict(self) -> dict:
        with self._cond:
            out = {
                "id": self.id,
                "state": self.state,
                "path_so_far": list(self.path_so_far),
                "created_at": self.created_at,
                "expires_at": self.expires_at,
            }
            if self.pending is not None:
                pending = self.pending.to_json_dict()
                if self.violation:
                    pending["violation"] = self.violation
                out["pending_query"] = pending
            if self.error:
                out["error"] = self.error
        return out


def create_app(base_config: Config | None = None,
               idle_timeout: float = DEFAULT_IDLE_TIMEOUT,
               ui_dir: str | Path | None = None) -> FastAPI:
    """REST facade; optionally serves the static wizard UI at /."""
    app = FastAPI(title="decision-tree pipeline")
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    base = base_config or Config()
    sessions: dict[str, Session] = {}

    def _get(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None or session.expired():
            sessions.pop(session_id, None)
            raise HTTPException(404, "unknown or expired session")
        session.touch()
        return session

    @app.post("/sessions")
    def create_session(overrides: dict | None = None):
        raw = base.to_json_dict()
        raw.pop("tokens", None)
        merged = {**raw, **(overrides or {})}
        try:
            config = config_from_dict(merged)
        except MalformedConfig as exc:
            raise HTTPException(400, f"bad overrides: {exc}")
        config.tokens = dict(base.tokens)  # never taken from the wire
        session = Session(config=config, idle_timeout=idle_timeout)
        sessions[session.id] = session
        generation = 0
        session.start()
        session.wait_settled(generation)
        return session.to_json_dict()

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return _get(session_id).to_json_dict()

    @app.post("/sessions/{session_id}/answer")
    def submit_answer(session_id: str, body: dict):
        session = _get(session_id)
        if "query_id" not in body or "value" not in body:
            raise HTTPException(422, "body needs query_id and value")
        session.submit(str(body["query_id"]), str(body["value"]))
        return session.to_json_dict()

    @app.get("/sessions/{session_id}/result")
    def get_result(session_id: str):
        session = _get(session_id)
        if session.state != "finished":
            raise HTTPException(409, f"session is {session.state}, not finished")
        return session.result

    @app.get("/sessions/{session_id}/artifacts")
    def get_artifacts(session_id: str):
        session = _get(session_id)
        if session.state != "finished":
            raise HTTPException(409, f"session is {session.state}, not finished")
        files = []
        for f in session.files:
            entry: dict = {"name": Path(f).name, "path": f}
            try:
                entry["content"] = json.loads(Path(f).read_text())
            except (OSError, json.JSONDecodeError):
                pass
            files.append(entry)
        return {"files": files}

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True),
                  name="ui")

    return app
