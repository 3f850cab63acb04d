"""HTTP session service for the live group loop.

One session walks the pipeline end to end: gather participants and their
favorites, rank the candidate pool, collect per-participant feedback, then
read the consensus verdict. All schemas live under ``/v1``.

Sessions are held in memory; an optional snapshot file preserves them across
restarts. Mutations to a single session are serialized behind a per-session
lock; distinct sessions proceed independently.
"""

from __future__ import annotations

import json
import threading
import uuid
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .catalog_ingest import Catalog
from .channels import ColorEmotionKB, EmotionLexicon
from .consensus import (
    DEFAULT_MEAN_THRESHOLD,
    ConsensusReport,
    FeedbackEntry,
    evaluate_entries,
)
from .emotion_model import DEFAULT_THRESHOLD, DEFAULT_WEIGHTS, ChannelWeights
from .fuzzy_inference import MamdaniSystem, default_system
from .recommender import GroupRequest, ProfileError, RankedRecommendation, movie_profile, recommend


class SessionState(str, Enum):
    GATHERING = "Gathering"
    RECOMMENDED = "Recommended"
    CONSENSUS_REACHED = "ConsensusReached"
    RE_EVALUATING = "ReEvaluating"


@dataclass
class Participant:
    id: str
    name: str
    favorite_id: str


@dataclass
class Session:
    id: str
    candidate_ids: list[str]
    participants: dict[str, Participant] = field(default_factory=dict)
    feedback: dict[str, FeedbackEntry] = field(default_factory=dict)
    recommendation: Optional[RankedRecommendation] = None
    state: SessionState = SessionState.GATHERING
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


class ParticipantBody(BaseModel):
    id: str = Field(min_length=1)
    name: str = ""
    favorite: str = Field(min_length=1)


class SessionCreateBody(BaseModel):
    candidates: list[str] = Field(min_length=1)


class FeedbackBody(BaseModel):
    participant: str = Field(min_length=1)
    agreement: float = Field(ge=0, le=10)
    confidence: float = Field(ge=0, le=10)


@dataclass
class ServiceConfig:
    weights: ChannelWeights = DEFAULT_WEIGHTS
    threshold: float = DEFAULT_THRESHOLD
    mean_threshold: float = DEFAULT_MEAN_THRESHOLD
    cors_origins: tuple[str, ...] = ("*",)
    state_file: Optional[str] = None


def _session_view(session: Session) -> dict:
    return {
        "id": session.id,
        "state": session.state.value,
        "candidates": list(session.candidate_ids),
        "participants": [
            {"id": p.id, "name": p.name, "favorite": p.favorite_id}
            for p in session.participants.values()
        ],
        "feedback_submitted": sorted(session.feedback),
        "recommendation": session.recommendation.as_dict() if session.recommendation else None,
    }


def _consensus_view(report: ConsensusReport, participant_ids: list[str]) -> dict:
    body = report.as_dict()
    body["participants"] = {
        pid: value for pid, value in zip(participant_ids, body.pop("feedback_values"))
    }
    return body


def create_app(
    catalog: Catalog,
    fis: Optional[MamdaniSystem] = None,
    lexicon: Optional[EmotionLexicon] = None,
    kb: Optional[ColorEmotionKB] = None,
    config: Optional[ServiceConfig] = None,
    ui_dir: Optional[str] = None,
) -> FastAPI:
    fis = fis or default_system()
    config = config or ServiceConfig()
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    def _load_snapshot() -> None:
        if not config.state_file or not Path(config.state_file).exists():
            return
        raw = json.loads(Path(config.state_file).read_text("utf-8"))
        for item in raw.get("sessions", []):
            session = Session(
                id=item["id"],
                candidate_ids=list(item["candidates"]),
                state=SessionState(item["state"]),
            )
            for p in item.get("participants", []):
                session.participants[p["id"]] = Participant(p["id"], p.get("name", ""), p["favorite"])
            for f in item.get("feedback", []):
                session.feedback[f["participant"]] = FeedbackEntry(
                    f["participant"], f["agreement"], f["confidence"]
                )
            sessions[session.id] = session

    def _write_snapshot() -> None:
        if not config.state_file:
            return
        doc = {
            "sessions": [
                {
                    "id": s.id,
                    "state": s.state.value,
                    "candidates": s.candidate_ids,
                    "participants": [
                        {"id": p.id, "name": p.name, "favorite": p.favorite_id}
                        for p in s.participants.values()
                    ],
                    "feedback": [
                        {
                            "participant": e.participant,
                            "agreement": e.agreement,
                            "confidence": e.confidence,
                        }
                        for e in s.feedback.values()
                    ],
                }
                for s in sessions.values()
            ]
        }
        Path(config.state_file).write_text(json.dumps(doc, indent=2), "utf-8")

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        _load_snapshot()
        yield
        _write_snapshot()

    app = FastAPI(title="film-accord", lifespan=lifespan)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(config.cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def _get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        return session

    def _get_movie(movie_id: str):
        try:
            return catalog.get(movie_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown movie {movie_id!r}") from None

    @app.get("/v1/movies")
    def list_movies():
        return {
            "movies": [
                {"id": r.id, "title": r.title, "genres": list(r.genres)} for r in catalog
            ]
        }

    @app.get("/v1/movies/{movie_id}/emotions")
    def movie_emotions(movie_id: str):
        record = _get_movie(movie_id)
        try:
            profile = movie_profile(record, config.weights, lexicon, kb)
        except (ProfileError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        return {"id": record.id, "title": record.title, "profile": profile.rounded()}

    @app.post("/v1/sessions", status_code=201)
    def create_session(body: SessionCreateBody):
        for movie_id in body.candidates:
            _get_movie(movie_id)
        session = Session(id=uuid.uuid4().hex[:12], candidate_ids=list(body.candidates))
        with registry_lock:
            sessions[session.id] = session
        return {"id": session.id, "state": session.state.value}

    @app.get("/v1/sessions/{session_id}")
    def get_session(session_id: str):
        return _session_view(_get_session(session_id))

    @app.post("/v1/sessions/{session_id}/participants")
    def add_participant(session_id: str, body: ParticipantBody):
        session = _get_session(session_id)
        _get_movie(body.favorite)
        with session.lock:
            if session.state not in (SessionState.GATHERING, SessionState.RE_EVALUATING):
                raise HTTPException(
                    status_code=409,
                    detail=f"cannot edit participants in state {session.state.value}",
                )
            session.participants[body.id] = Participant(body.id, body.name, body.favorite)
        return _session_view(session)

    @app.post("/v1/sessions/{session_id}/recommend")
    def run_recommendation(session_id: str):
        session = _get_session(session_id)
        with session.lock:
            if session.state is SessionState.CONSENSUS_REACHED:
                raise HTTPException(
                    status_code=409, detail="session already reached consensus"
                )
            if not session.participants:
                raise HTTPException(status_code=409, detail="no participants registered")
            try:
                request = GroupRequest(
                    participants=tuple(
                        (p.id, catalog.get(p.favorite_id)) for p in session.participants.values()
                    ),
                    candidates=tuple(catalog.get(mid) for mid in session.candidate_ids),
                    threshold=config.threshold,
                    weights=config.weights,
                )
                session.recommendation = recommend(request, lexicon, kb)
            except (ProfileError, ValueError) as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from None
            session.feedback.clear()
            session.state = SessionState.RECOMMENDED
            return session.recommendation.as_dict()

    @app.post("/v1/sessions/{session_id}/feedback")
    def submit_feedback(session_id: str, body: FeedbackBody):
        session = _get_session(session_id)
        with session.lock:
            if session.state is not SessionState.RECOMMENDED:
                raise HTTPException(
                    status_code=409,
                    detail=f"feedback only accepted in state Recommended, not {session.state.value}",
                )
            if body.participant not in session.participants:
                raise HTTPException(
                    status_code=404, detail=f"unknown participant {body.participant!r}"
                )
            # Upsert: one entry per participant, last write wins.
            session.feedback[body.participant] = FeedbackEntry(
                participant=body.participant,
                agreement=body.agreement,
                confidence=body.confidence,
            )
            return {
                "participant": body.participant,
                "submitted": len(session.feedback),
                "expected": len(session.participants),
            }

    @app.get("/v1/sessions/{session_id}/consensus")
    def get_consensus(session_id: str, partial: bool = Query(default=False)):
        session = _get_session(session_id)
        with session.lock:
            if session.state not in (
                SessionState.RECOMMENDED,
                SessionState.CONSENSUS_REACHED,
                SessionState.RE_EVALUATING,
            ):
                raise HTTPException(status_code=409, detail="no recommendation to evaluate yet")
            if not session.feedback:
                raise HTTPException(status_code=409, detail="no feedback submitted yet")
            complete = len(session.feedback) == len(session.participants)
            if not complete and not partial:
                raise HTTPException(
                    status_code=409,
                    detail=(
                        f"feedback incomplete ({len(session.feedback)}/"
                        f"{len(session.participants)}); pass ?partial=true for a live view"
                    ),
                )
            if len(session.feedback) < 2:
                raise HTTPException(status_code=409, detail="insufficient feedback: need at least 2 entries")
            ordered_ids = [pid for pid in session.participants if pid in session.feedback]
            entries = [session.feedback[pid] for pid in ordered_ids]
            report = evaluate_entries(entries, fis, mean_threshold=config.mean_threshold)
            # A complete read settles the round; partial reads are effect-free.
            if complete and session.state is SessionState.RECOMMENDED:
                session.state = (
                    SessionState.CONSENSUS_REACHED
                    if report.verdict.value == "Accepted"
                    else SessionState.RE_EVALUATING
                )
            body = _consensus_view(report, ordered_ids)
            body["state"] = session.state.value
            body["partial"] = not complete
            return body

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
