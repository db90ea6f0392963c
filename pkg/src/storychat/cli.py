"""Command-line interface.

    storychat ingest --corpus FILE --data-dir DIR
    storychat build-bank --story ID --data-dir DIR
    storychat build-graph --story ID --data-dir DIR
    storychat graph-stats --story ID --data-dir DIR [--out-dir DIR]
    storychat serve --addr HOST:PORT --data-dir DIR [--config FILE]
    storychat chat --story ID --data-dir DIR [--script FILE] [--transcript FILE]
    storychat replay --session ID --data-dir DIR
"""

from __future__ import annotations

import argparse
import sys

from .chat.repl import run_repl
from .chat.service import LogicalClock
from .config import load_config
from .engine import Engine
from .errors import StoryChatError


def _engine(args) -> Engine:
    return Engine.at(args.data_dir, config=load_config(args.config))


def cmd_ingest(args) -> int:
    summary = _engine(args).ingest(args.corpus)
    print(
        f"ingested: {summary.stories} stories, {summary.events} events, "
        f"{summary.articles} articles, {summary.paragraphs} paragraphs"
    )
    return 0


def cmd_build_bank(args) -> int:
    engine = _engine(args)
    stories = (
        [s.id for s in engine.corpus.list_stories()] if args.story == "all" else [args.story]
    )
    for story_id in stories:
        bank = engine.build_bank(story_id)
        print(f"bank[{story_id}]: {len(bank)} questions")
    return 0


def cmd_build_graph(args) -> int:
    engine = _engine(args)
    stories = (
        [s.id for s in engine.corpus.list_stories()] if args.story == "all" else [args.story]
    )
    for story_id in stories:
        graph = engine.build_graph(story_id)
        cover = graph.covering_questions or ()
        print(
            f"graph[{story_id}]: {len(graph.paragraph_ids)} paragraphs, "
            f"{len(graph.question_texts)} questions, {len(graph.edges)} edges, "
            f"cover {len(cover)}"
        )
    return 0


def cmd_graph_stats(args) -> int:
    from .pq_graph import prune
    from .report import format_stats, write_report

    engine = _engine(args)
    graph = engine.load_graph(args.story)
    print(format_stats(graph, prune(graph)))
    if args.out_dir:
        for path in write_report(graph, args.out_dir):
            print(f"wrote {path}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .chat.http import create_app

    engine = _engine(args)
    app = create_app(engine.chat_service(), ui_dir=args.ui)
    host, _, port = args.addr.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return 0


def cmd_chat(args) -> int:
    engine = _engine(args)
    scripted = args.script is not None
    service = engine.chat_service(clock=LogicalClock() if scripted else None)
    session_id = args.session or ("repl" if scripted else None)
    commands = None
    if scripted:
        with open(args.script, encoding="utf-8") as fh:
            commands = fh.readlines()
    transcript = open(args.transcript, "w", encoding="utf-8") if args.transcript else None
    try:
        run_repl(
            service,
            args.story,
            session_id,
            commands=commands,
            transcript_file=transcript,
            prompt=not scripted,
        )
    finally:
        if transcript:
            transcript.close()
    return 0


def cmd_replay(args) -> int:
    engine = _engine(args)
    service = engine.chat_service()
    state, matches = service.replay_session(args.session)
    print(f"session {args.session}: story {state.story_id}")
    print(f"  asked: {len(state.asked_questions)} questions")
    print(f"  read paragraphs: {sorted(state.read_paragraphs)}")
    print(f"  answered questions: {len(state.answered_questions)}")
    print(f"  matches persisted state: {'yes' if matches else 'NO'}")
    return 0 if matches else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="storychat")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--data-dir", required=True, help="artifact directory")
        p.add_argument("--config", default=None, help="JSON config file")

    p = sub.add_parser("ingest", help="ingest a line-delimited corpus file")
    p.add_argument("--corpus", required=True)
    common(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("build-bank", help="build the question bank for a story")
    p.add_argument("--story", required=True, help="story id, or 'all'")
    common(p)
    p.set_defaults(func=cmd_build_bank)

    p = sub.add_parser("build-graph", help="build and cover the P/Q graph for a story")
    p.add_argument("--story", required=True, help="story id, or 'all'")
    common(p)
    p.set_defaults(func=cmd_build_graph)

    p = sub.add_parser("graph-stats", help="degree histograms; optional CSV+PNG report")
    p.add_argument("--story", required=True)
    p.add_argument("--out-dir", default=None, help="write degrees.csv and figures here")
    common(p)
    p.set_defaults(func=cmd_graph_stats)

    p = sub.add_parser("serve", help="run the JSON API server")
    p.add_argument("--addr", default="127.0.0.1:8000")
    p.add_argument("--ui", default=None, help="also serve the web client from this directory")
    common(p)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("chat", help="terminal chatroom REPL")
    p.add_argument("--story", required=True)
    p.add_argument("--session", default=None)
    p.add_argument("--script", default=None, help="file of commands; enables deterministic mode")
    p.add_argument("--transcript", default=None, help="write the transcript to this file")
    common(p)
    p.set_defaults(func=cmd_chat)

    p = sub.add_parser("replay", help="rebuild a session's state from its question log")
    p.add_argument("--session", required=True)
    common(p)
    p.set_defaults(func=cmd_replay)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StoryChatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
