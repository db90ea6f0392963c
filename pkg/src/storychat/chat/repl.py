"""Terminal chat REPL.

Exercises the full pipeline without the web UI. Input lines are free-form
questions; `:rec N` clicks the Nth recommended question, `:events` pages
back through the event timeline, `:quit` exits. With a script file the
session runs non-interactively and, combined with the logical clock, the
emitted transcript is byte-stable across runs.
"""

from __future__ import annotations

import sys
from typing import IO, Iterable

from ..errors import DomainError, NotFoundError, StoryChatError
from .service import ChatMessage, ChatService, RoomView


def render_message(message: ChatMessage) -> str:
    """One transcript line per message; answer spans are wrapped in **."""
    if message.kind == "event":
        return f"[event {message.event_id}] {message.text}"
    if message.kind == "recommendations":
        if not message.recommendations:
            return "[recommendations] (none left)"
        items = "  ".join(
            f"{i + 1}) {r.text}" for i, r in enumerate(message.recommendations)
        )
        return f"[recommendations] {items}"
    if message.kind == "answer":
        start, end = message.answer_span
        text = message.text[:start] + "**" + message.text[start:end] + "**" + message.text[end:]
        flag = " repeat" if message.repeat else ""
        return f"[answer source={message.source}{flag}] {text}"
    if message.kind == "clarification":
        geo = f" (lat={message.geo[0]}, lon={message.geo[1]})" if message.geo else ""
        return f"[clarification]{geo} {message.text}".replace("\n\n", " / ")
    if message.kind == "user":
        return f"you: {message.text}"
    return f"[{message.kind}] {message.text}"


class Transcript:
    def __init__(self, *sinks: IO[str]):
        self.sinks = [s for s in sinks if s is not None]

    def line(self, text: str = "") -> None:
        for sink in self.sinks:
            sink.write(text + "\n")


def run_repl(
    service: ChatService,
    story_id: str,
    session_id: str,
    commands: Iterable[str] | None = None,
    out: IO[str] = sys.stdout,
    transcript_file: IO[str] | None = None,
    prompt: bool = False,
) -> None:
    t = Transcript(out, transcript_file)
    view: RoomView = service.open_room(session_id, story_id)
    story = service.corpus.story(story_id)
    t.line(f"=== chatroom: {story.name} ===")
    for message in view.messages:
        t.line(render_message(message))
    if view.has_previous:
        t.line("(type :events to see previous events)")
    service.refresh_precomputed(view.session_id)

    scripted = commands is not None
    if commands is None:
        commands = _stdin_lines(prompt)

    oldest_shown: list[str] = [
        m.event_id for m in view.messages if m.kind == "event" and m.event_id
    ]

    for raw in commands:
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        if scripted:
            t.line(f"> {line}")
        if line.strip() in (":quit", ":q"):
            break
        try:
            if line.strip() == ":events":
                anchor = oldest_shown[0] if oldest_shown else None
                if anchor is None:
                    t.line("(no events shown yet)")
                    continue
                older = service.earlier_events(view.session_id, anchor, limit=2)
                if not older:
                    t.line("(no previous events)")
                    continue
                for message in older:
                    t.line(render_message(message))
                oldest_shown.insert(0, older[-1].event_id)
                continue
            if line.strip().startswith(":rec"):
                recs = service.recommendations(view.session_id)
                try:
                    n = int(line.strip().split()[1])
                except (IndexError, ValueError):
                    t.line("(usage: :rec N)")
                    continue
                if not 1 <= n <= len(recs):
                    t.line(f"(no recommendation #{n})")
                    continue
                replies = service.post_message(
                    view.session_id, recs[n - 1].text, origin="recommended"
                )
            else:
                replies = service.post_message(view.session_id, line, origin="free_form")
        except (DomainError, NotFoundError, StoryChatError) as exc:
            t.line(f"(error: {exc})")
            continue
        for message in replies:
            t.line(render_message(message))
        service.refresh_precomputed(view.session_id)
    t.line("=== end ===")


def _stdin_lines(prompt: bool):
    while True:
        if prompt:
            sys.stdout.write("> ")
            sys.stdout.flush()
        line = sys.stdin.readline()
        if not line:
            return
        yield line
