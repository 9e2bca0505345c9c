"""examsim command line: serve the API, chat in a terminal, ingest, replay.

Exit codes: 0 ok, 2 configuration error, 3 bind error, 4 provider error.
"""

from __future__ import annotations

import argparse
import os
import secrets
import socket
import sys
from importlib import resources
from pathlib import Path

from examsim.core.engine import ContinuationChoice, ExamEngine, SessionConfig
from examsim.core.errors import ExamCoreError
from examsim.core.session import ExamSession, Mode, Role
from examsim.ingest.chunking import Document, DocumentFormat, EmptyDocument, chunk_document
from examsim.provider.base import Provider
from examsim.provider.errors import AuthError, ProviderError
from examsim.provider.http import OpenAICompatibleProvider
from examsim.provider.mock import ScriptedProvider, ScriptError
from examsim.runner import complete_directive
from examsim.service.config import API_TOKEN_ENV, ServiceConfig
from examsim.service.store import DocumentStore
from examsim.cli.replay import ScenarioError, parse_scenario, run_scenario

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BIND = 3
EXIT_PROVIDER = 4


def _bundled(name: str) -> str:
    return (resources.files("examsim") / "data" / name).read_text(encoding="utf-8")


def _fail(message: str, code: int) -> int:
    print(f"examsim: {message}", file=sys.stderr)
    return code


# ----------------------------------------------------------------------
# serve
# ----------------------------------------------------------------------

def cmd_serve(args: argparse.Namespace) -> int:
    try:
        config = ServiceConfig.from_file(args.config) if args.config else ServiceConfig()
        if args.host:
            config.host = args.host
        if args.port:
            config.port = args.port
        if args.data_dir:
            config.data_dir = args.data_dir
        config.validate()
    except (OSError, ValueError) as exc:
        return _fail(f"bad config: {exc}", EXIT_CONFIG)

    if not os.environ.get(API_TOKEN_ENV):
        return _fail(f"{API_TOKEN_ENV} is not set", EXIT_CONFIG)

    from examsim.service.app import create_app  # deferred: pulls in fastapi

    try:
        app = create_app(config)
    except (ScriptError, AuthError, OSError, ValueError) as exc:
        return _fail(f"cannot assemble service: {exc}", EXIT_CONFIG)

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((config.host, config.port))
    except OSError as exc:
        return _fail(f"cannot bind {config.host}:{config.port}: {exc}", EXIT_BIND)
    finally:
        probe.close()

    print(f"examsim service listening on http://{config.host}:{config.port}", flush=True)
    import uvicorn

    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return EXIT_OK


# ----------------------------------------------------------------------
# chat
# ----------------------------------------------------------------------

_CHAT_HELP = (
    "commands: /hint, /grade, /continue same|new <topic>|conclude, /quit; "
    "anything else is sent as your answer"
)


def _build_chat_provider(args: argparse.Namespace) -> Provider:
    if args.provider == "mock":
        rules_text = Path(args.rules).read_text(encoding="utf-8") if args.rules else _bundled("demo.rules")
        return ScriptedProvider.from_script(rules_text)
    return OpenAICompatibleProvider(base_url=args.base_url, model=args.model)


def _print_outcome(outcome) -> None:
    entry = outcome.entry
    if entry is not None:
        label = "hint" if entry.role is Role.HINT else "examiner"
        print(f"{label}> {entry.display_text.strip()}")
    if outcome.grade is not None:
        record = outcome.grade
        print(
            f"grade> {record.grade.value} ({record.percent}%) on {record.topic!r} "
            f"after {record.questions_covered} answers [{record.trigger.value}]"
        )
        print(f"grade> {record.disclaimer}")
        print("continue with /continue same, /continue new <topic>, or /continue conclude")


def _render_chat_transcript(session: ExamSession) -> str:
    lines = [
        f"session: {session.id}",
        f"subject: {session.subject_area}",
        f"topic: {session.current_topic}",
        f"mode: {session.mode.value}",
        "",
    ]
    for entry in session.transcript:
        lines.append(f"[{entry.index:03d}] {entry.role.value}: {entry.display_text.strip()}")
    if session.grades:
        lines.append("")
        for record in session.grades:
            lines.append(
                f"grade: {record.grade.value} ({record.percent}%) topic={record.topic} "
                f"covers={record.questions_covered} trigger={record.trigger.value}"
            )
    return "\n".join(lines) + "\n"


def _parse_chat_continue(rest: str) -> ContinuationChoice | None:
    rest = rest.strip()
    if rest == "same":
        return ContinuationChoice.same_topic()
    if rest == "conclude":
        return ContinuationChoice.conclude()
    if rest.startswith("new "):
        return ContinuationChoice.new_topic(rest[len("new "):])
    return None


def cmd_chat(args: argparse.Namespace) -> int:
    try:
        provider = _build_chat_provider(args)
    except (OSError, ScriptError, AuthError) as exc:
        return _fail(f"cannot build provider: {exc}", EXIT_CONFIG)

    engine = ExamEngine()
    try:
        session, directive = engine.create_session(
            SessionConfig(
                subject_area=args.subject,
                topic=args.topic,
                mode=Mode(args.mode),
                language=args.language,
            )
        )
        outcome, _ = complete_directive(engine, provider, session, directive)
    except ExamCoreError as exc:
        return _fail(f"cannot start session: {exc}", EXIT_CONFIG)
    except ProviderError as exc:
        return _fail(f"provider failure: {exc}", EXIT_PROVIDER)

    print(f"rehearsal session {session.id} — {args.subject} / {args.topic} ({args.mode})")
    print(_CHAT_HELP)
    _print_outcome(outcome)

    while True:
        try:
            line = input("you> ").strip()
        except EOFError:
            line = "/quit"
        if not line:
            continue
        if line == "/quit":
            break
        try:
            if line == "/hint":
                directive = engine.request_hint(session)
            elif line == "/grade":
                directive = engine.request_grade(session)
            elif line.startswith("/continue"):
                choice = _parse_chat_continue(line[len("/continue"):])
                if choice is None:
                    print("! usage: /continue same | /continue new <topic> | /continue conclude")
                    continue
                directive = engine.continue_session(session, choice)
            elif line.startswith("/"):
                print(f"! unknown command; {_CHAT_HELP}")
                continue
            else:
                directive = engine.submit_answer(session, line)
        except ExamCoreError as exc:
            print(f"! {exc}")
            continue
        try:
            outcome, _ = complete_directive(engine, provider, session, directive)
        except ExamCoreError as exc:
            print(f"! {exc}")
            continue
        except ProviderError as exc:
            return _fail(f"provider failure: {exc}", EXIT_PROVIDER)
        _print_outcome(outcome)
        if outcome.concluded:
            break

    out_path = Path(args.out) if args.out else Path(f"examsim-transcript-{session.id}.txt")
    out_path.write_text(_render_chat_transcript(session), encoding="utf-8", newline="\n")
    print(f"transcript written to {out_path}")
    return EXIT_OK


# ----------------------------------------------------------------------
# ingest
# ----------------------------------------------------------------------

def cmd_ingest(args: argparse.Namespace) -> int:
    path = Path(args.file)
    try:
        body = path.read_text(encoding="utf-8")
    except OSError as exc:
        return _fail(f"cannot read {path}: {exc}", EXIT_CONFIG)
    fmt = DocumentFormat.MARKDOWN if args.format == "markdown" or path.suffix in (".md", ".markdown") else DocumentFormat.PLAIN_TEXT
    document = Document(
        id=secrets.token_urlsafe(9),
        title=args.title or path.stem,
        body=body,
        format=fmt,
    )
    try:
        document = chunk_document(document)
    except EmptyDocument as exc:
        return _fail(str(exc), EXIT_CONFIG)
    store = DocumentStore(Path(args.data_dir) / "documents")
    store.save(document)
    print(f"document {document.id} ingested: {len(document.chunks)} chunks")
    return EXIT_OK


# ----------------------------------------------------------------------
# replay
# ----------------------------------------------------------------------

def cmd_replay(args: argparse.Namespace) -> int:
    try:
        scenario_text = (
            Path(args.scenario).read_text(encoding="utf-8") if args.scenario else _bundled("demo.scenario")
        )
        rules_text = Path(args.rules).read_text(encoding="utf-8") if args.rules else _bundled("demo.rules")
    except OSError as exc:
        return _fail(f"cannot read input: {exc}", EXIT_CONFIG)
    try:
        scenario = parse_scenario(scenario_text)
        transcript = run_scenario(scenario, rules_text)
    except (ScenarioError, ScriptError, ExamCoreError) as exc:
        return _fail(f"replay failed: {exc}", EXIT_CONFIG)
    if args.out:
        Path(args.out).write_text(transcript, encoding="utf-8", newline="\n")
        print(f"transcript written to {args.out}")
    else:
        sys.stdout.write(transcript)
    return EXIT_OK


# ----------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="examsim", description="oral exam rehearsal service")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the REST service")
    serve.add_argument("--config", help="JSON config file")
    serve.add_argument("--host", help="bind host (overrides config)")
    serve.add_argument("--port", type=int, help="bind port (overrides config)")
    serve.add_argument("--data-dir", help="sessions/documents directory (overrides config)")
    serve.set_defaults(func=cmd_serve)

    chat = sub.add_parser("chat", help="interactive terminal session")
    chat.add_argument("--subject", required=True)
    chat.add_argument("--topic", required=True)
    chat.add_argument("--mode", choices=[mode.value for mode in Mode], default="practice")
    chat.add_argument("--language", default="en")
    chat.add_argument("--provider", choices=["mock", "http"], default="mock")
    chat.add_argument("--rules", help="mock rules script (default: bundled demo)")
    chat.add_argument("--base-url", default="https://api.openai.com")
    chat.add_argument("--model", default="gpt-4o-mini")
    chat.add_argument("--out", help="transcript output path")
    chat.set_defaults(func=cmd_chat)

    ingest = sub.add_parser("ingest", help="chunk a text/markdown file into the document store")
    ingest.add_argument("--file", required=True)
    ingest.add_argument("--title")
    ingest.add_argument("--format", choices=["plain", "markdown"], default="plain")
    ingest.add_argument("--data-dir", default="./examsim-data")
    ingest.set_defaults(func=cmd_ingest)

    replay = sub.add_parser("replay", help="replay a scenario against the scripted provider")
    replay.add_argument("--scenario", help="scenario file (default: bundled demo)")
    replay.add_argument("--rules", help="mock rules script (default: bundled demo)")
    replay.add_argument("--out", help="write transcript here instead of stdout")
    replay.set_defaults(func=cmd_replay)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
