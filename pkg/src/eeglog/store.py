"""Local file-backed persistence for sessions, models, and recordings.

Layout under one data directory (documented in ``docs/formats.md``):

    users/<user_id>/sessions/<session_id>.json
    users/<user_id>/index.json
    models/<scope>__<device_id>__<target>.json
    recordings/...            (referenced from sessions, path relative to root)

All writes are temp-file-then-rename, so a torn write never corrupts a
committed document.  One writer per store instance; readers only see
committed snapshots.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from pathlib import Path
from typing import Optional

from .datamodel import SessionLog, TrainedModel
from .errors import NotFound, SchemaError


def _atomic_write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            json.dump(payload, f, indent=1)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class Store:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    # -- sessions ---------------------------------------------------------

    def _user_dir(self, user_id: str) -> Path:
        return self.root / "users" / user_id

    def _session_path(self, user_id: str, session_id: str) -> Path:
        return self._user_dir(user_id) / "sessions" / f"{session_id}.json"

    def put_session(self, session: SessionLog) -> str:
        """Append a session; re-putting identical content is a no-op."""
        path = self._session_path(session.user_id, session.session_id)
        doc = session.to_dict()
        with self._lock:
            if path.exists():
                with open(path, encoding="utf-8") as f:
                    if json.load(f) != doc:
                        raise SchemaError(
                            f"session {session.session_id!r} already committed "
                            "with different content")
                return session.session_id
            _atomic_write_json(path, doc)
            self._update_index(session)
        return session.session_id

    def _update_index(self, session: SessionLog) -> None:
        index_path = self._user_dir(session.user_id) / "index.json"
        entries = []
        if index_path.exists():
            with open(index_path, encoding="utf-8") as f:
                entries = json.load(f)
        entries = [e for e in entries if e["session_id"] != session.session_id]
        entries.append({
            "session_id": session.session_id,
            "device_id": session.device_id,
            "start_ts": session.trials[0].baseline_start_ts,
        })
        entries.sort(key=lambda e: (e["start_ts"], e["session_id"]))
        _atomic_write_json(index_path, entries)

    def get_session(self, user_id: str, session_id: str) -> SessionLog:
        path = self._session_path(user_id, session_id)
        if not path.exists():
            raise NotFound(f"session {session_id!r} for user {user_id!r}")
        with open(path, encoding="utf-8") as f:
            return SessionLog.from_dict(json.load(f))

    def list_sessions(self, user_id: str, start_ts: Optional[float] = None,
                      end_ts: Optional[float] = None,
                      device_id: Optional[str] = None) -> list[SessionLog]:
        """Time-ordered sessions of one user, optionally range-filtered."""
        index_path = self._user_dir(user_id) / "index.json"
        if not index_path.exists():
            return []
        with open(index_path, encoding="utf-8") as f:
            entries = json.load(f)
        out = []
        for e in entries:
            if start_ts is not None and e["start_ts"] < start_ts:
                continue
            if end_ts is not None and e["start_ts"] >= end_ts:
                continue
            if device_id is not None and e["device_id"] != device_id:
                continue
            out.append(self.get_session(user_id, e["session_id"]))
        return out

    def list_users(self) -> list[str]:
        users_dir = self.root / "users"
        if not users_dir.exists():
            return []
        return sorted(p.name for p in users_dir.iterdir() if p.is_dir())

    def resolve_recording(self, session: SessionLog) -> Path:
        """Absolute path of a session's recording file."""
        ref = Path(session.recording_ref)
        path = ref if ref.is_absolute() else self.root / ref
        if not path.exists():
            raise NotFound(f"recording {session.recording_ref!r} is missing")
        return path

    # -- models -----------------------------------------------------------

    def _model_path(self, target: str, scope: str, device_id: str) -> Path:
        return self.root / "models" / f"{scope}__{device_id}__{target}.json"

    def put_model(self, model: TrainedModel) -> None:
        """Last write wins per (scope, device, target)."""
        with self._lock:
            _atomic_write_json(
                self._model_path(model.target, model.scope, model.device_id),
                model.to_dict())

    def get_model(self, target: str, scope: str, device_id: str) -> TrainedModel:
        path = self._model_path(target, scope, device_id)
        if not path.exists():
            raise NotFound(f"no trained {scope}/{target} model for {device_id!r}")
        with open(path, encoding="utf-8") as f:
            return TrainedModel.from_dict(json.load(f))

    def has_model(self, target: str, scope: str, device_id: str) -> bool:
        return self._model_path(target, scope, device_id).exists()
