"""JSON-over-HTTP API for the chat service.

Endpoints:
  GET  /api/rooms
  POST /api/rooms/{story_id}/open            {"session_id": optional}
  GET  /api/rooms/{story_id}/events?session_id=&before=&limit=
  POST /api/sessions/{session_id}/messages   {"text": ..., "origin": ...}
  GET  /api/sessions/{session_id}/recommendations

Precomputation of recommended answers runs as a background task after the
response is sent, so clicking a suggestion is served from cache.
"""

from __future__ import annotations

from fastapi import BackgroundTasks, FastAPI, HTTPException
from pydantic import BaseModel

from ..corpus import format_timestamp
from ..errors import DomainError, NotFoundError, NotReadyError, StoryChatError
from .service import ChatService


class OpenRoomBody(BaseModel):
    session_id: str | None = None


class PostMessageBody(BaseModel):
    text: str
    origin: str = "free_form"


def _http_error(exc: StoryChatError) -> HTTPException:
    if isinstance(exc, NotFoundError):
        return HTTPException(status_code=404, detail=str(exc))
    if isinstance(exc, NotReadyError):
        return HTTPException(status_code=409, detail=str(exc))
    if isinstance(exc, DomainError):
        return HTTPException(status_code=400, detail=str(exc))
    return HTTPException(status_code=502, detail=str(exc))


def create_app(service: ChatService, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="storychat", version="0.1.0")

    @app.get("/api/rooms")
    def rooms():
        return {
            "rooms": [
                {
                    "story_id": room.story_id,
                    "title": room.title,
                    "last_active": format_timestamp(room.last_active),
                    "open_sessions": room.open_sessions,
                }
                for room in service.list_rooms()
            ]
        }

    @app.post("/api/rooms/{story_id}/open")
    def open_room(story_id: str, body: OpenRoomBody, background: BackgroundTasks):
        try:
            view = service.open_room(body.session_id, story_id)
        except StoryChatError as exc:
            raise _http_error(exc) from exc
        background.add_task(service.refresh_precomputed, view.session_id)
        return {
            "session_id": view.session_id,
            "story_id": view.story_id,
            "has_previous": view.has_previous,
            "messages": [m.to_dict() for m in view.messages],
            "recommendations": [
                {"question_id": r.question_id, "text": r.text}
                for r in view.recommendations
            ],
        }

    @app.get("/api/rooms/{story_id}/events")
    def earlier_events(story_id: str, session_id: str, before: str, limit: int = 2):
        try:
            if service.session_story(session_id) != story_id:
                raise HTTPException(status_code=400, detail="session is not in this room")
            messages = service.earlier_events(session_id, before, limit)
        except StoryChatError as exc:
            raise _http_error(exc) from exc
        return {"messages": [m.to_dict() for m in messages]}

    @app.post("/api/sessions/{session_id}/messages")
    def post_message(session_id: str, body: PostMessageBody, background: BackgroundTasks):
        try:
            replies = service.post_message(session_id, body.text, body.origin)
        except StoryChatError as exc:
            raise _http_error(exc) from exc
        background.add_task(service.refresh_precomputed, session_id)
        return {"messages": [m.to_dict() for m in replies]}

    @app.get("/api/sessions/{session_id}/recommendations")
    def recommendations(session_id: str):
        try:
            recs = service.recommendations(session_id)
        except StoryChatError as exc:
            raise _http_error(exc) from exc
        return {
            "recommendations": [
                {"question_id": r.question_id, "text": r.text} for r in recs
            ]
        }

    if ui_dir is not None:
        from starlette.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
