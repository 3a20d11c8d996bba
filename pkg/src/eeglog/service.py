"""Local HTTP + streaming service over the analytics and model pipeline.

Every endpoint is a thin adapter over the library modules; payload schemas
live in ``docs/api.md``.  The server binds localhost by default so the
lifelog never leaves the machine unless explicitly configured.
"""

from __future__ import annotations

import threading
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import analytics, pipeline, recommend
from .datamodel import EmotionQuadrant, SessionLog
from .errors import (
    EEGLogError,
    NotFound,
    SchemaError,
    TrainingInProgress,
)
from .store import Store

_HTTP_STATUS = {
    "SchemaError": 400,
    "NotFound": 404,
    "TrainingInProgress": 409,
}


class SessionIn(BaseModel):
    session: dict
    recording_path: Optional[str] = None


class TrainIn(BaseModel):
    device: str
    scope: str
    seed: int = 0
    public_root: Optional[str] = None
    include_self_training: bool = True


class DetectIn(BaseModel):
    device: str
    epoch: Optional[list[list[float]]] = None
    session_id: Optional[str] = None
    user: Optional[str] = None


def create_app(data_dir: str | Path,
               public_root: Optional[str | Path] = None,
               tz_name: str = analytics.DEFAULT_TZ) -> FastAPI:
    store = Store(data_dir)
    app = FastAPI(title="eeglog", version="1.0")
    training_keys: set[str] = set()
    training_lock = threading.Lock()

    @app.exception_handler(EEGLogError)
    async def _domain_error(_, exc: EEGLogError):
        status = _HTTP_STATUS.get(exc.code, 422)
        return JSONResponse(status_code=status,
                            content={"error": exc.code, "message": exc.message})

    @app.post("/api/v1/sessions")
    def post_session(body: SessionIn):
        session = SessionLog.from_dict(body.session)
        recording = body.recording_path or session.recording_ref
        path = Path(recording)
        if not path.is_absolute():
            path = store.root / path
        if not path.exists():
            raise NotFound(f"recording file {recording!r} not found")
        session_id = pipeline.ingest_session(store, session, path)
        return {"session_id": session_id}

    @app.get("/api/v1/summary")
    def get_summary(user: str, week: str):
        sessions = store.list_sessions(user)
        if not sessions:
            raise NotFound(f"unknown user {user!r}")
        return analytics.weekly_activity(sessions, week, tz_name)

    @app.get("/api/v1/activity")
    def get_activity(user: str, span: str, dimension: str, period: str):
        sessions = store.list_sessions(user)
        if not sessions:
            raise NotFound(f"unknown user {user!r}")
        return analytics.activity_series(sessions, span, dimension, period, tz_name)

    @app.get("/api/v1/moments")
    def get_moments(user: str, month: str):
        sessions = store.list_sessions(user)
        if not sessions:
            raise NotFound(f"unknown user {user!r}")
        return analytics.memorial_moments(sessions, month, tz_name)

    @app.post("/api/v1/train")
    def post_train(body: TrainIn):
        key = f"{body.device}:{body.scope}"
        with training_lock:
            if key in training_keys:
                raise TrainingInProgress(f"training already running for {key}")
            training_keys.add(key)
        try:
            root = body.public_root or public_root
            return pipeline.train_and_store(
                store, body.device, body.scope, seed=body.seed,
                public_root=root,
                include_self_training=body.include_self_training)
        finally:
            with training_lock:
                training_keys.discard(key)

    @app.post("/api/v1/detect")
    def post_detect(body: DetectIn):
        if body.epoch is not None:
            return pipeline.detect_epoch(store, body.device, body.epoch)
        if body.session_id is None or body.user is None:
            raise SchemaError("need either an epoch payload or session_id + user")
        from . import ingest
        from .datamodel import get_profile

        session = store.get_session(body.user, body.session_id)
        profile = get_profile(session.device_id)
        recording = ingest.parse_recording(store.resolve_recording(session), profile)
        results = []
        for trial, _baseline, listening in ingest.segment_trials(recording, session):
            r = pipeline.detect_epoch(store, session.device_id, listening)
            r["song"] = trial.song.title
            r["play_ts"] = trial.play_ts
            results.append(r)
        return {"session_id": body.session_id, "trials": results}

    @app.get("/api/v1/recommend")
    def get_recommend(user: str, quadrant: str, limit: int = 10):
        try:
            desired = EmotionQuadrant(quadrant)
        except ValueError:
            raise SchemaError(f"unknown quadrant {quadrant!r}") from None
        sessions = store.list_sessions(user)
        if not sessions:
            raise NotFound(f"unknown user {user!r}")
        playlist = recommend.recommend_playlist(desired, sessions, limit)
        out = {"quadrant": quadrant, "playlist": playlist}
        if not playlist:
            out["notice"] = "NoMatch"
        return out

    @app.websocket("/api/v1/stream/detect")
    async def stream_detect(websocket: WebSocket, device: str):
        await websocket.accept()
        try:
            detector = pipeline.StreamDetector(store, device)
        except EEGLogError as exc:
            await websocket.send_json({"type": "error", "error": exc.code,
                                       "message": exc.message})
            await websocket.close(code=4404)
            return
        try:
            while True:
                frame = await websocket.receive_json()
                try:
                    messages = detector.feed(frame["ts"], frame["samples"])
                except (EEGLogError, KeyError, TypeError) as exc:
                    await websocket.send_json({"type": "error",
                                               "message": str(exc)})
                    continue
                for message in messages:
                    await websocket.send_json(message)
        except WebSocketDisconnect:
            return

    app.state.store = store
    return app


def run(data_dir: str | Path, host: str = "127.0.0.1", port: int = 8410,
        public_root: Optional[str | Path] = None) -> None:
    import uvicorn

    uvicorn.run(create_app(data_dir, public_root), host=host, port=port)
