"""Operator command line.

Subcommands:
  generate  write a simulated navigation run as JSONL
  ingest    embed a JSONL file into a persisted session store
  ask       answer one question against a persisted store
  repl      interactive question loop over a persisted store
  eval      generate -> replay -> ask the full question set -> report
  serve     run the HTTP service

Exit codes: 0 success, 1 I/O or backend-after-retries or busy-port failure,
2 bad arguments, 3 ask before any logs, 4 backend failure during ask.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import backend as llm
from .config import AppConfig, ConfigError, load_config
from .engine import ExplanationEngine, render_report_table, report_to_json
from .prompting import render_line
from .questions import instantiate_questions
from .records import LogFormatError, read_jsonl, write_jsonl
from .scenario import RUNS, ScenarioSpec, generate, replay
from .store import EmptyStore, RetrievalParams, VectorStore
from .service import create_app

DEFAULT_STORE = "session_store.jsonl"
ASK_RETRIES = 2


def _build_engine(config: AppConfig, session_id: str = "") -> ExplanationEngine:
    return ExplanationEngine(
        embedder_config=config.embedder,
        backend_config=config.backend,
        retrieval_params=config.retrieval,
        template_id=config.template_id,
        session_id=session_id,
    )


def _load_session(config: AppConfig, store_path: str) -> ExplanationEngine | None:
    """Engine over a persisted store, or None when no store exists yet."""
    engine = _build_engine(config)
    path = Path(store_path)
    if path.exists():
        engine.attach_store(VectorStore.load(path))
    return engine


def _print_result(result) -> None:
    print(result.answer)
    print()
    print("Context:")
    for entry in result.context.entries:
        print(render_line(entry))
    print()
    print(
        f"question_time_s={result.question_time:.3f} "
        f"backend_latency_s={result.backend_latency:.3f}"
    )


def cmd_generate(args, config: AppConfig) -> int:
    spec = ScenarioSpec(run=args.run, seed=args.seed, noise_repeat=args.noise_repeat)
    corpus = generate(spec)
    try:
        write_jsonl(corpus.records, args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return 1
    print(f"{args.run}: wrote {len(corpus)} records to {args.out}")
    return 0


def cmd_ingest(args, config: AppConfig) -> int:
    try:
        corpus = read_jsonl(args.file)
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc}", file=sys.stderr)
        return 1
    except LogFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    engine = _load_session(config, args.store)
    accepted = sum(1 for record in corpus if engine.ingest_record(record))
    engine.drain()
    try:
        engine.store.dump(args.store)
    except OSError as exc:
        print(f"error: cannot write store {args.store}: {exc}", file=sys.stderr)
        return 1
    stats = engine.pipeline.stats()
    print(
        f"ingested {stats.received} records: accepted={accepted} "
        f"deduplicated={stats.deduplicated} store={args.store}"
    )
    return 0


def _ask_once(engine: ExplanationEngine, question: str, params: RetrievalParams | None):
    try:
        return engine.ask(question, params), None
    except llm.BackendError as exc:
        return getattr(exc, "partial", None), exc


def cmd_ask(args, config: AppConfig) -> int:
    engine = _load_session(config, args.store)
    if engine.store.size() == 0:
        print("error: no logs ingested yet (run `logexplain ingest` first)", file=sys.stderr)
        return 3
    params = _retrieval_override(args, config)
    try:
        result = engine.ask(args.question, params)
    except EmptyStore:
        print("error: no logs ingested yet", file=sys.stderr)
        return 3
    except llm.BackendError as exc:
        partial = getattr(exc, "partial", None)
        print(f"error: backend failed: {exc}", file=sys.stderr)
        if partial is not None:
            print("Context that would have been sent:")
            for entry in partial.context.entries:
                print(render_line(entry))
        return 4
    _print_result(result)
    return 0


def cmd_repl(args, config: AppConfig) -> int:
    engine = _load_session(config, args.store)
    if engine.store.size() == 0:
        print("error: no logs ingested yet (run `logexplain ingest` first)", file=sys.stderr)
        return 3
    params = _retrieval_override(args, config)
    print("Ask about the run (Ctrl-D to exit).")
    while True:
        try:
            line = input("? ")
        except EOFError:
            print()
            return 0
        except KeyboardInterrupt:
            print()
            return 0
        question = line.strip()
        if not question:
            continue
        result, error = _ask_once(engine, question, params)
        if error is not None:
            print(f"error: backend failed: {error}", file=sys.stderr)
            continue
        _print_result(result)


def cmd_eval(args, config: AppConfig) -> int:
    spec = ScenarioSpec(run=args.run, seed=args.seed, noise_repeat=args.noise_repeat)
    corpus = generate(spec)
    engine = _build_engine(config, session_id=f"{args.run}-seed{args.seed}")
    elapsed = replay(corpus, engine, rate=args.rate)
    engine.drain()
    engine.execution_time = elapsed

    if args.questions:
        try:
            lines = Path(args.questions).read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            print(f"error: cannot read {args.questions}: {exc}", file=sys.stderr)
            return 1
        base = tuple(q.strip() for q in lines if q.strip())
    else:
        base = None
    questions = (
        instantiate_questions(args.run)
        if base is None
        else instantiate_questions(args.run, base)
    )

    failures = 0
    for question in questions:
        result = error = None
        for _ in range(1 + ASK_RETRIES):
            result, error = _ask_once(engine, question, None)
            if error is None:
                break
        if error is not None:
            failures += 1
            if result is not None:  # context-only partial entry
                engine.record_failed_ask(result)
            print(f"backend failed for question: {question!r}: {error}", file=sys.stderr)

    deterministic = (
        config.embedder.kind == "reference" and config.backend.kind == "mock"
    )
    report = engine.report()
    out_path = args.out or f"report_{args.run}.json"
    try:
        Path(out_path).write_text(
            report_to_json(report, deterministic=deterministic), encoding="utf-8"
        )
    except OSError as exc:
        print(f"error: cannot write report {out_path}: {exc}", file=sys.stderr)
        return 1
    print(render_report_table(report, run_label=args.run))
    print(f"report written to {out_path}")
    return 1 if failures else 0


def cmd_serve(args, config: AppConfig) -> int:
    import socket

    import uvicorn

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((args.bind, args.port))
    except OSError as exc:
        print(f"error: cannot bind {args.bind}:{args.port}: {exc}", file=sys.stderr)
        return 1
    finally:
        probe.close()

    engine = _build_engine(config)
    app = create_app(engine, cors_origins=args.cors_origin or None)
    uvicorn.run(app, host=args.bind, port=args.port, log_level="warning")
    return 0


def _retrieval_override(args, config: AppConfig) -> RetrievalParams | None:
    k = getattr(args, "k", None)
    lam = getattr(args, "lam", None)
    if k is None and lam is None:
        return None
    try:
        return RetrievalParams(
            k=k if k is not None else config.retrieval.k,
            lam=lam if lam is not None else config.retrieval.lam,
        )
    except ValueError as exc:
        raise SystemExit(_usage_error(str(exc)))


def _usage_error(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logexplain",
        description="Explain autonomous-system behavior from its logs.",
    )
    parser.add_argument("--config", help="config file path (or $EXPLAINER_CONFIG)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a simulated run as JSONL")
    p.add_argument("--run", required=True, choices=RUNS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise-repeat", type=int, default=20)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("ingest", help="embed a JSONL file into the session store")
    p.add_argument("--file", required=True)
    p.add_argument("--store", default=DEFAULT_STORE)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("ask", help="answer one question")
    p.add_argument("--question", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--store", default=DEFAULT_STORE)
    p.set_defaults(func=cmd_ask)

    p = sub.add_parser("repl", help="interactive question loop")
    p.add_argument("--k", type=int)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--store", default=DEFAULT_STORE)
    p.set_defaults(func=cmd_repl)

    p = sub.add_parser("eval", help="run a scenario and the full question set")
    p.add_argument("--run", required=True, choices=RUNS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise-repeat", type=int, default=20)
    p.add_argument("--questions", help="file with one question per line")
    p.add_argument("--rate", default="max", help="records/second or 'max'")
    p.add_argument("--out", help="report JSON path (default report_<run>.json)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--bind", default="127.0.0.1")
    p.add_argument("--cors-origin", action="append")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "eval" and args.rate != "max":
        try:
            args.rate = float(args.rate)
        except ValueError:
            return _usage_error(f"bad --rate {args.rate!r}")
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return args.func(args, config)
    except SystemExit as exc:  # from _retrieval_override
        return exc.code if isinstance(exc.code, int) else 2


if __name__ == "__main__":
    sys.exit(main())
