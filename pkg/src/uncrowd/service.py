"""Interactive session API over the regularizer.

A session is a completed run: creation computes every iteration eagerly so
slider queries are cached lookups afterward.  The store is bounded by an
approximate memory budget with least-recently-used eviction; an evicted or
never-created id answers 404.  Read endpoints never mutate run state, so
concurrent queries are safe; the store itself is guarded by one lock.
"""

from __future__ import annotations

import base64
import os
import threading
import time
import uuid
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np
from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from . import datasets, encodings
from .density import build_density
from .errors import (
    DegeneratePolygon,
    InvalidParams,
    OutOfRangeLevel,
    PayloadTooLarge,
    UncrowdError,
    UnknownKind,
    UnknownSession,
)
from .fileio import parse_csv_lines
from .model import RegularizationParams, ScatterDataset, validate_dataset
from .regularize import run as run_regularization
from .regularize import transition_positions

DEFAULT_SAMPLE_CAP = 2_000_000
DEFAULT_MEMORY_BUDGET = 1 << 30  # bytes of frame data kept across sessions
ENCODING_KINDS = ("grid", "density", "contours")


@dataclass
class _Session:
    id: str
    run: object
    created: float
    last_access: float
    nbytes: int
    encoding_cache: dict = dc_field(default_factory=dict)


class SessionStore:
    def __init__(self, sample_cap: int = DEFAULT_SAMPLE_CAP,
                 memory_budget: int = DEFAULT_MEMORY_BUDGET):
        self.sample_cap = sample_cap
        self.memory_budget = memory_budget
        self._lock = threading.Lock()
        self._sessions: dict[str, _Session] = {}

    def create(self, dataset: ScatterDataset, params: RegularizationParams) -> _Session:
        if dataset.n > self.sample_cap:
            raise PayloadTooLarge(
                f"{dataset.n} samples exceed the cap of {self.sample_cap}")
        result = run_regularization(dataset, params, collect_metrics="basic")
        nbytes = dataset.n * 16 * (result.iterations + 1)
        session = _Session(id=uuid.uuid4().hex, run=result,
                           created=time.time(), last_access=time.time(),
                           nbytes=nbytes)
        with self._lock:
            self._sessions[session.id] = session
            self._evict()
        return session

    def _evict(self):
        while (len(self._sessions) > 1
               and sum(s.nbytes for s in self._sessions.values()) > self.memory_budget):
            oldest = min(self._sessions.values(), key=lambda s: s.last_access)
            del self._sessions[oldest.id]

    def get(self, session_id: str) -> _Session:
        with self._lock:
            session = self._sessions.get(session_id)
            if session is None:
                raise UnknownSession(session_id)
            session.last_access = time.time()
            return session

    def delete(self, session_id: str):
        with self._lock:
            if session_id not in self._sessions:
                raise UnknownSession(session_id)
            del self._sessions[session_id]


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status,
                        content={"code": code, "message": message})


_STATUS = {
    UnknownSession: (404, "UnknownSession"),
    PayloadTooLarge: (413, "PayloadTooLarge"),
    OutOfRangeLevel: (400, "OutOfRangeLevel"),
    DegeneratePolygon: (400, "DegeneratePolygon"),
    UnknownKind: (400, "UnknownKind"),
    InvalidParams: (400, "InvalidParams"),
}


def _params_from(payload: Optional[dict]) -> RegularizationParams:
    payload = payload or {}
    allowed = {"k", "kernel_size", "iterations", "stop", "epsilon",
               "time_budget", "background", "frame_cap"}
    unknown = set(payload) - allowed
    if unknown:
        raise InvalidParams(f"unknown parameters: {sorted(unknown)}")
    defaults = RegularizationParams(k=9)  # interactive default resolution
    merged = {**defaults.__dict__, **payload}
    return RegularizationParams(**merged).validate()


def create_app(sample_cap: Optional[int] = None,
               memory_budget: int = DEFAULT_MEMORY_BUDGET,
               ui_dir: Optional[str] = None) -> FastAPI:
    if sample_cap is None:
        sample_cap = int(os.environ.get("INIM_SESSION_CAP", DEFAULT_SAMPLE_CAP))
    store = SessionStore(sample_cap=sample_cap, memory_budget=memory_budget)
    app = FastAPI(title="uncrowd session service")
    app.state.store = store
    _mount_ui(app, ui_dir)

    @app.exception_handler(UncrowdError)
    async def handle_domain_error(_request, exc: UncrowdError):
        for kind, (status, code) in _STATUS.items():
            if isinstance(exc, kind):
                return _error(status, code, str(exc))
        return _error(400, type(exc).__name__, str(exc))

    @app.post("/api/sessions")
    async def create_session(request: Request):
        content_type = request.headers.get("content-type", "")
        if content_type.startswith("text/csv"):
            body = (await request.body()).decode("utf-8")
            dataset = _dataset_from_csv_text(body)
            params = _params_from(None)
        else:
            payload = await request.json()
            params = _params_from(payload.get("params"))
            if "csv" in payload:
                dataset = _dataset_from_csv_text(payload["csv"])
            elif "generator" in payload:
                genspec = datasets.GenSpec(**payload["generator"])
                dataset = datasets.generate(genspec)
            elif "positions" in payload:
                dataset = validate_dataset(payload["positions"],
                                           labels=payload.get("labels"))
            else:
                raise InvalidParams("provide csv, generator, or positions")
        session = store.create(dataset, params)
        return {"id": session.id, "iterations": session.run.iterations,
                "n": session.run.original.n}

    @app.get("/api/sessions/{session_id}/positions")
    async def get_positions(session_id: str, level: float, format: str = "json"):
        session = store.get(session_id)
        positions = transition_positions(session.run, level)
        if format == "binary":
            return Response(content=positions.astype("<f4").tobytes(),
                            media_type="application/octet-stream")
        dataset = session.run.original
        labels = dataset.labels.tolist() if dataset.labels is not None else None
        return {"level": level, "ids": dataset.ids.tolist(),
                "positions": positions.tolist(), "labels": labels}

    @app.get("/api/sessions/{session_id}/encodings/{kind}")
    async def get_encoding(session_id: str, kind: str, level: int):
        session = store.get(session_id)
        if kind not in ENCODING_KINDS:
            raise UnknownKind(f"kind must be one of {ENCODING_KINDS}")
        if not 0 <= level <= session.run.iterations:
            raise OutOfRangeLevel(f"level {level} outside run range")
        key = (kind, level)
        if key not in session.encoding_cache:
            session.encoding_cache[key] = _build_encoding(session.run, kind, level)
        return session.encoding_cache[key]

    @app.post("/api/sessions/{session_id}/lasso")
    async def lasso(session_id: str, payload: dict):
        session = store.get(session_id)
        polygon = np.asarray(payload.get("polygon", []), dtype=np.float64)
        level = float(payload.get("level", session.run.iterations))
        if len(polygon) < 3 or encodings.polygon_area(polygon) == 0.0:
            raise DegeneratePolygon("lasso polygon has no interior")
        positions = transition_positions(session.run, level)
        inside = encodings.points_in_polygon(positions, polygon)
        ids = session.run.original.ids[inside]
        original = session.run.original.positions[inside]
        return {"ids": ids.tolist(), "original": original.tolist()}

    @app.get("/api/sessions/{session_id}/metrics")
    async def get_metrics(session_id: str):
        session = store.get(session_id)
        records = session.run.metrics
        return {"records": [rec.__dict__ for rec in records]}

    @app.delete("/api/sessions/{session_id}", status_code=204)
    async def delete_session(session_id: str):
        store.delete(session_id)
        return Response(status_code=204)

    return app


def _mount_ui(app: FastAPI, ui_dir: Optional[str]):
    """Serve the built browser client at /ui when the directory is around
    (source checkouts); the API is fully usable without it."""
    from pathlib import Path

    candidate = Path(ui_dir) if ui_dir else Path(__file__).parents[2] / "frontend"
    if candidate.is_dir() and (candidate / "index.html").exists():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(candidate), html=True),
                  name="ui")


def _dataset_from_csv_text(text: str) -> ScatterDataset:
    return parse_csv_lines(text.splitlines())


def _build_encoding(run_result, kind: str, level: int) -> dict:
    if kind == "grid":
        overlay = encodings.deform_grid(run_result, upto=level)
        return {"kind": "grid", "spacing": overlay.spacing,
                "subdivision": overlay.subdivision,
                "polylines": [line.tolist() for line in overlay.polylines]}
    if kind == "contours":
        density0 = build_density(run_result.frame(0), run_result.params)
        contours = encodings.extract_contours(density0,
                                              encodings.default_levels(density0))
        moved = encodings.deform_contours(contours, run_result, upto=level)
        return {"kind": "contours", "levels": moved.levels,
                "line_levels": moved.line_levels,
                "polylines": [line.tolist() for line in moved.polylines]}
    texture = encodings.deform_background(run_result, upto=level)
    values32 = texture.values.astype("<f4")
    return {"kind": "density", "size": int(texture.values.shape[0]),
            "range": [texture.value_range[0], texture.value_range[1]],
            "values_b64": base64.b64encode(values32.tobytes()).decode("ascii")}
