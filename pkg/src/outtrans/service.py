"""Assist backend: a queued request server that also logs every event.

One assist request fans out into the full pipeline -- forward translation,
backward translation, lexical quality tags, word alignment, source
projection -- and appends the four resulting events atomically. Client-side
events (START/NEXT/CONFIRM/SKIP) arrive through the logger endpoint.
"""

from __future__ import annotations

import json
import threading
import time
from collections import deque
from concurrent.futures import CancelledError, Future
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from fastapi import Body, FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse
from starlette.concurrency import run_in_threadpool

from .aligner import (
    AlignmentLink,
    LexiconModel,
    ParallelCorpus,
    align,
    extend_lexicon,
    load_parallel_corpus,
    mix_with_baseline,
    train_lexicon,
)
from .errors import (
    EmptyInput,
    GatewayError,
    LengthLimitExceeded,
    OuttransError,
    QueueFull,
    RemoteFailure,
    SchemaViolation,
    UnknownEngine,
    UnsupportedPair,
)
from .eventlog import EventLog, EventRecord
from .mt import EngineRegistry, TranslationTriplet, load_registry, round_trip
from .qe import estimate_lexical, project_to_source
from .textcore import tokenize

__all__ = [
    "AssistResponse",
    "AssistService",
    "RequestQueue",
    "ServiceConfig",
    "load_service_config",
    "build_app",
]


@dataclass
class AssistResponse:
    """Everything the client needs to render one assist round."""

    triplet: TranslationTriplet
    tagging: list[str]
    links: list[AlignmentLink]
    highlight: list[float]
    request_serial: int
    src_tokens: list[str]
    tgt_tokens: list[str]

    def to_dict(self) -> dict:
        return {
            "serial": self.request_serial,
            "txt1": self.triplet.txt1,
            "txt2": self.triplet.txt2,
            "txt3": self.triplet.txt3,
            "src_tokens": self.src_tokens,
            "mt_tokens": self.tgt_tokens,
            "tags": self.tagging,
            "alignment": [list(link) for link in self.links],
            "highlight": self.highlight,
        }


class _Task:
    __slots__ = ("session", "fn", "future")

    def __init__(self, session: str, fn: Callable[[], object]):
        self.session = session
        self.fn = fn
        self.future: Future = Future()


class RequestQueue:
    """Bounded FIFO of pending computations with per-session supersession.

    A newer submission from a session cancels that session's still-pending
    older one (the displaced caller sees CancelledError). Tasks for distinct
    sessions run in parallel; tasks for one session never overlap, so its
    events stay in order.
    """

    def __init__(self, maxsize: int = 64, workers: int = 2):
        self._maxsize = maxsize
        self._pending: deque[_Task] = deque()
        self._running_sessions: set[str] = set()
        self._cv = threading.Condition()
        self._closed = False
        self._threads = [
            threading.Thread(target=self._worker, daemon=True) for _ in range(workers)
        ]
        for thread in self._threads:
            thread.start()

    def submit(self, session: str, fn: Callable[[], object]) -> Future:
        task = _Task(session, fn)
        with self._cv:
            if self._closed:
                raise RuntimeError("queue is closed")
            for old in self._pending:
                if old.session == session:
                    self._pending.remove(old)
                    old.future.cancel()
                    break
            if len(self._pending) >= self._maxsize:
                raise QueueFull(f"{self._maxsize} requests already pending")
            self._pending.append(task)
            self._cv.notify()
        return task.future

    def _next_task(self) -> _Task | None:
        for task in self._pending:
            if task.session not in self._running_sessions:
                self._pending.remove(task)
                return task
        return None

    def _worker(self) -> None:
        while True:
            with self._cv:
                task = self._next_task()
                while task is None:
                    if self._closed:
                        return
                    self._cv.wait()
                    task = self._next_task()
                self._running_sessions.add(task.session)
            try:
                if task.future.set_running_or_notify_cancel():
                    try:
                        task.future.set_result(task.fn())
                    except BaseException as exc:
                        task.future.set_exception(exc)
            finally:
                with self._cv:
                    self._running_sessions.discard(task.session)
                    self._cv.notify_all()

    def close(self) -> None:
        with self._cv:
            self._closed = True
            for task in self._pending:
                task.future.cancel()
            self._pending.clear()
            self._cv.notify_all()
        for thread in self._threads:
            thread.join(timeout=5)


class AssistService:
    """Composes the assist pipeline over shared immutable models."""

    def __init__(
        self,
        registry: EngineRegistry,
        event_log: EventLog,
        baselines: dict[tuple[str, str], ParallelCorpus] | None = None,
        qe_threshold: float = 0.1,
        train_iterations: int = 5,
        incremental_iterations: int = 1,
        null_prob_floor: float = 0.0,
    ):
        self.registry = registry
        self.event_log = event_log
        self.qe_threshold = qe_threshold
        self.train_iterations = train_iterations
        self.incremental_iterations = incremental_iterations
        self.null_prob_floor = null_prob_floor
        self._baselines = baselines or {}
        self._base_models: dict[tuple[str, str], LexiconModel] = {
            pair: train_lexicon(corpus, train_iterations, null_prob_floor)
            for pair, corpus in self._baselines.items()
        }

    def _query_model(
        self, pair: tuple[str, str], query: tuple[list[str], list[str]]
    ) -> LexiconModel:
        baseline = self._baselines.get(pair, ParallelCorpus([]))
        mixed = mix_with_baseline(query, baseline)
        base = self._base_models.get(pair)
        if base is None:
            return train_lexicon(mixed, self.train_iterations, self.null_prob_floor)
        return extend_lexicon(
            base, mixed, self.incremental_iterations, self.null_prob_floor
        )

    def handle_query(
        self,
        session: str,
        source_text: str,
        engine_id: str,
        request_serial: int,
        src_lang: str | None = None,
        tgt_lang: str | None = None,
    ) -> AssistResponse:
        if not source_text.strip():
            raise EmptyInput("assist request with empty text")
        if src_lang is None or tgt_lang is None:
            src_lang, tgt_lang = self.registry.get(engine_id).sole_pair()
        forward, backward = self.registry.resolve_round_trip(
            engine_id, src_lang, tgt_lang
        )
        triplet = round_trip(forward, backward, source_text, src_lang, tgt_lang)
        src_tokens = tokenize(triplet.txt1)
        tgt_tokens = tokenize(triplet.txt2)

        if tgt_tokens:
            model = self._query_model((src_lang, tgt_lang), (src_tokens, tgt_tokens))
            tagging = estimate_lexical(
                model, src_tokens, tgt_tokens, self.qe_threshold
            )
            links = align(model, src_tokens, tgt_tokens)
            highlight = project_to_source(tagging, links, len(src_tokens))
        else:
            tagging, links = [], []
            highlight = [0.0] * len(src_tokens)

        self.event_log.append_many(
            [
                EventRecord(
                    ts=time.time(),
                    session=session,
                    code="TRANSLATE1",
                    payload={"txt1": triplet.txt1, "txt2": triplet.txt2},
                ),
                EventRecord(
                    ts=time.time(),
                    session=session,
                    code="TRANSLATE2",
                    payload={"txt2": triplet.txt2, "txt3": triplet.txt3},
                ),
                EventRecord(
                    ts=time.time(),
                    session=session,
                    code="ESTIMATE",
                    payload={"estimation": list(tagging)},
                ),
                EventRecord(
                    ts=time.time(),
                    session=session,
                    code="ALIGN",
                    payload={"alignment": list(links)},
                ),
            ]
        )
        return AssistResponse(
            triplet=triplet,
            tagging=tagging,
            links=links,
            highlight=highlight,
            request_serial=request_serial,
            src_tokens=src_tokens,
            tgt_tokens=tgt_tokens,
        )


@dataclass
class ServiceConfig:
    registry: EngineRegistry
    baselines: dict[tuple[str, str], ParallelCorpus] = field(default_factory=dict)
    qe_threshold: float = 0.1
    train_iterations: int = 5
    incremental_iterations: int = 1
    null_prob_floor: float = 0.0
    queue_size: int = 64
    workers: int = 2


def load_service_config(path: str | Path) -> ServiceConfig:
    """Read the JSON service configuration; paths resolve against its directory."""
    path = Path(path)
    config = json.loads(path.read_text(encoding="utf-8"))
    base_dir = path.parent
    registry = load_registry(config, base_dir)
    baselines = {}
    for pair_key, files in config.get("baselines", {}).items():
        src_lang, _, tgt_lang = pair_key.partition("-")
        baselines[(src_lang, tgt_lang)] = load_parallel_corpus(
            base_dir / files["src"], base_dir / files["tgt"]
        )
    return ServiceConfig(
        registry=registry,
        baselines=baselines,
        qe_threshold=config.get("qe_threshold", 0.1),
        train_iterations=config.get("train_iterations", 5),
        incremental_iterations=config.get("incremental_iterations", 1),
        null_prob_floor=config.get("null_prob_floor", 0.0),
        queue_size=config.get("queue_size", 64),
        workers=config.get("workers", 2),
    )


_ERROR_STATUS = [
    (EmptyInput, 400, "empty_input"),
    (LengthLimitExceeded, 400, "length_limit_exceeded"),
    (UnsupportedPair, 400, "unsupported_pair"),
    (UnknownEngine, 404, "unknown_engine"),
    (SchemaViolation, 400, "schema_violation"),
    (RemoteFailure, 502, "remote_failure"),
    (QueueFull, 503, "queue_full"),
]


def _error_body(exc: Exception) -> tuple[int, dict]:
    for exc_type, status, code in _ERROR_STATUS:
        if isinstance(exc, exc_type):
            body = {"error": code, "detail": str(exc)}
            if isinstance(exc, LengthLimitExceeded):
                body["actual"] = exc.actual
                body["limit"] = exc.limit
            if isinstance(exc, GatewayError) and exc.leg:
                body["leg"] = exc.leg
            return status, body
    return 500, {"error": "internal", "detail": str(exc)}


def build_app(service: AssistService, queue: RequestQueue) -> FastAPI:
    """FastAPI app exposing /assist, /log, /engines and the /ws socket."""
    app = FastAPI(title="outtrans session service")

    def _run_assist(message: dict) -> dict:
        try:
            session = message["session"]
            text = message["text"]
            engine = message["engine"]
            serial = int(message["serial"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaViolation(f"assist request missing field: {exc}") from None
        future = queue.submit(
            session,
            lambda: service.handle_query(
                session,
                text,
                engine,
                serial,
                src_lang=message.get("src_lang"),
                tgt_lang=message.get("tgt_lang"),
            ),
        )
        response: AssistResponse = future.result(timeout=120)
        return response.to_dict()

    @app.post("/assist")
    def assist(message: dict = Body(...)):
        try:
            return _run_assist(message)
        except CancelledError:
            return JSONResponse(
                status_code=409,
                content={
                    "error": "superseded",
                    "detail": "a newer request replaced this one",
                },
            )
        except OuttransError as exc:
            status, body = _error_body(exc)
            return JSONResponse(status_code=status, content=body)

    @app.post("/log")
    def log_event(record: dict = Body(...)):
        try:
            seq = service.event_log.append(EventRecord.from_dict(record))
        except OuttransError as exc:
            status, body = _error_body(exc)
            return JSONResponse(status_code=status, content=body)
        return {"seq": seq}

    @app.get("/engines")
    def engines():
        return {"engines": service.registry.describe()}

    @app.websocket("/ws")
    async def socket(websocket: WebSocket):
        await websocket.accept()
        try:
            while True:
                message = await websocket.receive_json()
                kind = message.get("type")
                try:
                    if kind == "assist":
                        result = await run_in_threadpool(_run_assist, message)
                        await websocket.send_json({"type": "assist", **result})
                    elif kind == "log":
                        record = {
                            k: v for k, v in message.items() if k != "type"
                        }
                        seq = await run_in_threadpool(
                            service.event_log.append, EventRecord.from_dict(record)
                        )
                        await websocket.send_json({"type": "log", "seq": seq})
                    elif kind == "engines":
                        await websocket.send_json(
                            {"type": "engines", "engines": service.registry.describe()}
                        )
                    else:
                        await websocket.send_json(
                            {"type": "error", "error": "unknown_type"}
                        )
                except CancelledError:
                    await websocket.send_json(
                        {
                            "type": "error",
                            "error": "superseded",
                            "serial": message.get("serial"),
                        }
                    )
                except OuttransError as exc:
                    _, body = _error_body(exc)
                    await websocket.send_json(
                        {"type": "error", "serial": message.get("serial"), **body}
                    )
        except WebSocketDisconnect:
            pass

    return app
