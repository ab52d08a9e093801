"""HTTP/JSON facade over one engine session.

Endpoints (all JSON, UTF-8):

* POST /v1/logs    {"records": [{ts,msg,src?,lvl?}, ...]} -> ingestion counts.
  Batches are atomic: one malformed record rejects the whole batch.
* POST /v1/query   {"question": str, "k"?: int, "lambda"?: float} -> answer
  plus the chronologically ordered context it was built from.
* GET  /v1/report  -> session report.
* POST /v1/reset   -> {"ok": true}.
* GET  /v1/health  -> {"ok": true, "backend_ok": bool}.

Error bodies are {"code", "message"}; codes map to statuses as
BAD_REQUEST=400, EMPTY_STORE=409, BACKEND_UNAVAILABLE=502, INTERNAL=500.
A 502 from /v1/query still carries the retrieved context so the caller can
audit what would have been sent to the model.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import backend as llm
from .engine import ExplanationEngine, report_to_dict
from .prompting import EmptyQuestion, format_timestamp
from .records import LogFormatError, record_from_obj
from .store import EmptyStore, RetrievalParams

_STATUS = {
    "BAD_REQUEST": 400,
    "EMPTY_STORE": 409,
    "BACKEND_UNAVAILABLE": 502,
    "INTERNAL": 500,
}


class ApiError(Exception):
    def __init__(self, code: str, message: str, extra: dict | None = None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.extra = extra or {}

    def response(self) -> JSONResponse:
        body = {"code": self.code, "message": self.message, **self.extra}
        return JSONResponse(status_code=_STATUS[self.code], content=body)


def _context_payload(context) -> list[dict]:
    return [
        {"ts": format_timestamp(e.record.timestamp), "msg": e.record.message}
        for e in context.entries
    ]


def create_app(
    engine: ExplanationEngine, cors_origins: list[str] | None = None
) -> FastAPI:
    app = FastAPI(title="logexplain", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins or ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ApiError)
    async def _api_error(_req: Request, exc: ApiError):
        return exc.response()

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_req: Request, exc: RequestValidationError):
        return ApiError("BAD_REQUEST", f"invalid request body: {exc.errors()[:1]}").response()

    @app.exception_handler(Exception)
    async def _internal_error(_req: Request, exc: Exception):
        return ApiError("INTERNAL", f"{type(exc).__name__}: {exc}").response()

    @app.post("/v1/logs")
    def post_logs(payload: dict):
        raw = payload.get("records")
        if not isinstance(raw, list):
            raise ApiError("BAD_REQUEST", "'records' must be a list")
        records = []
        for i, obj in enumerate(raw):
            if not isinstance(obj, dict):
                raise ApiError("BAD_REQUEST", f"records[{i}] is not an object")
            try:
                records.append(record_from_obj(obj))
            except LogFormatError as exc:
                raise ApiError("BAD_REQUEST", f"records[{i}]: {exc}") from None
        received, accepted, deduplicated = engine.ingest_batch(records)
        return {
            "received": received,
            "accepted": accepted,
            "deduplicated": deduplicated,
        }

    @app.post("/v1/query")
    def post_query(payload: dict):
        question = payload.get("question")
        if not isinstance(question, str) or question.strip() == "":
            raise ApiError("BAD_REQUEST", "'question' must be a non-empty string")
        k = payload.get("k", engine.retrieval_params.k)
        lam = payload.get("lambda", engine.retrieval_params.lam)
        if not isinstance(k, int) or isinstance(k, bool) or k < 1:
            raise ApiError("BAD_REQUEST", "'k' must be an integer >= 1")
        if not isinstance(lam, (int, float)) or isinstance(lam, bool) or not 0 <= lam <= 1:
            raise ApiError("BAD_REQUEST", "'lambda' must be in [0, 1]")
        try:
            result = engine.ask(question, RetrievalParams(k=k, lam=float(lam)))
        except EmptyStore:
            raise ApiError("EMPTY_STORE", "no logs ingested yet") from None
        except EmptyQuestion as exc:
            raise ApiError("BAD_REQUEST", str(exc)) from None
        except llm.BackendError as exc:
            partial = getattr(exc, "partial", None)
            extra = {}
            if partial is not None:
                engine.record_failed_ask(partial)
                extra = {
                    "context": _context_payload(partial.context),
                    "question_time_s": partial.question_time,
                }
            raise ApiError("BACKEND_UNAVAILABLE", str(exc), extra) from None
        return {
            "answer": result.answer,
            "context": _context_payload(result.context),
            "question_time_s": result.question_time,
            "backend_latency_s": result.backend_latency,
        }

    @app.get("/v1/report")
    def get_report():
        return report_to_dict(engine.report())

    @app.post("/v1/reset")
    def post_reset():
        engine.reset()
        return {"ok": True}

    @app.get("/v1/health")
    def get_health():
        return {"ok": True, "backend_ok": engine.health()}

    return app
