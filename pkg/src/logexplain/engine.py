"""Session engine: owns ingestion, the store, prompt assembly, and the
backend; answers questions and keeps the session metrics.

A question is answered against everything submitted so far: ask() drains the
ingest queue (holding the ingest lock, so racing producers just block for the
final few records) before it embeds the query, runs MMR retrieval, reorders
the context chronologically, renders the prompt, and calls the backend. If the
backend fails, the exception is re-raised with a ``partial`` ExplanationResult
attached so callers can still show the context that would have been sent.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field

from . import backend as llm
from .embedding import EmbedderConfig, make_embedder
from .ingest import IngestPipeline, IngestStats
from .prompting import ContextSet, EmptyQuestion, build_prompt, format_timestamp, order_context
from .records import LogRecord
from .store import EmptyStore, RetrievalParams, VectorStore


@dataclass(frozen=True)
class ExplanationResult:
    question: str
    answer: str
    context: ContextSet
    retrieval_params: RetrievalParams
    question_time: float  # retrieval + prompt build + completion, wall clock
    backend_latency: float
    backend_error: str = ""


@dataclass
class SessionReport:
    session_id: str
    execution_time: float
    ingest: IngestStats
    questions: list[ExplanationResult] = field(default_factory=list)


class ExplanationEngine:
    def __init__(
        self,
        embedder_config: EmbedderConfig | None = None,
        backend_config: llm.BackendConfig | None = None,
        retrieval_params: RetrievalParams | None = None,
        template_id: str = "default",
        session_id: str = "",
    ):
        self.embedder_config = embedder_config or EmbedderConfig()
        self.backend_config = backend_config or llm.BackendConfig()
        self.retrieval_params = retrieval_params or RetrievalParams()
        self.template_id = template_id
        self.session_id = session_id or f"session-{uuid.uuid4().hex[:12]}"
        self.execution_time = 0.0
        self._embedder = make_embedder(self.embedder_config)
        self._store = VectorStore()
        self._pipeline = IngestPipeline(self._embedder, self._store)
        self._ask_lock = threading.Lock()
        self._ingest_lock = threading.Lock()
        self._results: list[ExplanationResult] = []

    @property
    def store(self) -> VectorStore:
        return self._store

    @property
    def pipeline(self) -> IngestPipeline:
        return self._pipeline

    # -- ingestion ----------------------------------------------------------

    def ingest_record(self, record: LogRecord) -> bool:
        return self._pipeline.submit(record)

    def ingest_batch(self, records: list[LogRecord]) -> tuple[int, int, int]:
        """Submit pre-validated records as one serialized batch and drain.

        Returns (received, accepted, deduplicated). Used by the HTTP service,
        whose handlers may run concurrently while the pipeline wants a single
        producer.
        """
        with self._ingest_lock:
            received = accepted = 0
            for record in records:
                received += 1
                if self._pipeline.submit(record):
                    accepted += 1
            self._pipeline.drain_all()
        return received, accepted, received - accepted

    def drain(self) -> int:
        """Embed and store everything queued; returns records processed."""
        with self._ingest_lock:
            return self._pipeline.drain_all()

    def attach_store(self, store: VectorStore) -> None:
        """Continue from a persisted store (CLI sessions spanning processes).

        The dedup predecessor resumes from the last stored record; stats
        restart at zero for the new process.
        """
        dim = getattr(self._embedder, "dim", None)
        if dim is not None and store.dim is not None and store.dim != dim:
            raise ValueError(
                f"store dim {store.dim} does not match embedder dim {dim}"
            )
        with self._ingest_lock:
            entries = store.entries()
            self._store = store
            self._pipeline = IngestPipeline(self._embedder, store)
            if entries:
                last = entries[-1]
                self._pipeline.resume_after(last.id, last.record.message)

    # -- questions ----------------------------------------------------------

    def ask(
        self, question: str, params: RetrievalParams | None = None
    ) -> ExplanationResult:
        """Answer a question from the logs ingested so far."""
        if question is None or question.strip() == "":
            raise EmptyQuestion("question must be non-empty")
        params = params or self.retrieval_params
        with self._ask_lock:
            start = time.perf_counter()
            with self._ingest_lock:
                self._pipeline.drain_all()
                if self._store.size() == 0:
                    raise EmptyStore("no logs ingested yet")
                query_vec = self._embedder.embed_query(question)
                hits = self._store.retrieve(query_vec, params)
            context = order_context(hits)
            bundle = build_prompt(context, question, template_id=self.template_id)
            try:
                completion = llm.complete(bundle, self.backend_config)
            except llm.BackendError as exc:
                exc.partial = ExplanationResult(  # type: ignore[attr-defined]
                    question=question,
                    answer="",
                    context=context,
                    retrieval_params=params,
                    question_time=time.perf_counter() - start,
                    backend_latency=0.0,
                    backend_error=str(exc),
                )
                raise
            result = ExplanationResult(
                question=question,
                answer=completion.text,
                context=context,
                retrieval_params=params,
                question_time=time.perf_counter() - start,
                backend_latency=completion.latency,
            )
            self._results.append(result)
            return result

    def record_failed_ask(self, partial: ExplanationResult) -> None:
        """Keep a context-only entry in the session report."""
        self._results.append(partial)

    def health(self) -> bool:
        return llm.health_check(self.backend_config)

    # -- reporting / lifecycle ----------------------------------------------

    def report(self) -> SessionReport:
        return SessionReport(
            session_id=self.session_id,
            execution_time=self.execution_time,
            ingest=self._pipeline.stats(),
            questions=list(self._results),
        )

    def reset(self) -> None:
        """Empty store, zeroed stats, new session id; config is preserved."""
        with self._ask_lock, self._ingest_lock:
            self._embedder = make_embedder(self.embedder_config)
            self._store = VectorStore()
            self._pipeline = IngestPipeline(self._embedder, self._store)
            self._results = []
            self.execution_time = 0.0
            self.session_id = f"session-{uuid.uuid4().hex[:12]}"

    def close(self) -> None:
        self._pipeline.close()


# -- report serialization ----------------------------------------------------


def result_to_dict(result: ExplanationResult, deterministic: bool = False) -> dict:
    entry = {
        "question": result.question,
        "answer": result.answer,
        "context": [
            {"ts": format_timestamp(e.record.timestamp), "msg": e.record.message}
            for e in result.context.entries
        ],
        "retrieval_params": {"k": result.retrieval_params.k, "lambda": result.retrieval_params.lam},
        "question_time": 0.0 if deterministic else result.question_time,
        "backend_latency": 0.0 if deterministic else result.backend_latency,
    }
    if result.backend_error:
        entry["backend_error"] = result.backend_error
    return entry


def report_to_dict(report: SessionReport, deterministic: bool = False) -> dict:
    stats = report.ingest
    return {
        "session_id": report.session_id,
        "deterministic": deterministic,
        "execution_time": 0.0 if deterministic else report.execution_time,
        "ingest": {
            "received": stats.received,
            "deduplicated": stats.deduplicated,
            "processed": stats.processed,
            "queue_depth": stats.queue_depth,
            "processing_time": 0.0 if deterministic else stats.processing_time,
        },
        "questions": [result_to_dict(r, deterministic) for r in report.questions],
    }


def report_to_json(report: SessionReport, deterministic: bool = False) -> str:
    return json.dumps(report_to_dict(report, deterministic), indent=2, ensure_ascii=False) + "\n"


def render_report_table(report: SessionReport, run_label: str = "") -> str:
    """Plain-text session summary using the measurement-table column names."""
    label = run_label or report.session_id
    stats = report.ingest
    headers = [
        "Run",
        "Execution Time(s)",
        "Total Logs Received",
        "Embeddings Processed",
        "Processing Time(s)",
    ]
    values = [
        label,
        f"{report.execution_time:.3f}",
        str(stats.received),
        str(stats.processed),
        f"{stats.processing_time:.3f}",
    ]
    widths = [max(len(h), len(v)) for h, v in zip(headers, values)]
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(headers, widths)),
        "  ".join(v.ljust(w) for v, w in zip(values, widths)),
        "",
        "Question generation time (s)",
    ]
    if report.questions:
        labels = [f"UQ{i}" for i in range(1, len(report.questions) + 1)]
        times = [f"{r.question_time:.3f}" for r in report.questions]
        qwidths = [max(len(a), len(b)) for a, b in zip(labels, times)]
        lines.append("  ".join(a.ljust(w) for a, w in zip(labels, qwidths)))
        lines.append("  ".join(b.ljust(w) for b, w in zip(times, qwidths)))
    else:
        lines.append("(no questions asked)")
    return "\n".join(lines) + "\n"
