"""HTTP facade over the pipeline: annotate, bionic, score, job history.

Every successful request is persisted to the append-only job log together
with the raw LLM exchanges (credentials never reach the log). Offline mode
needs no network and backs the demo UI and the test suite.
"""

from __future__ import annotations

import json
import os
import threading
from typing import Any

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .annotator import PromptMode, PromptSpec, annotate, offline_annotate
from .bionic import BionicParams, bionic_format
from .errors import AuthError, LarfError, RangeError, TransportError
from .joblog import JobKind, JobLog, JobRecord, JobStatus, new_job_id
from .llm import ChatClient, HttpChatClient, LLMConfig
from .markup import verify_text
from .model import AnnotationKind, normalize
from .render import render_html
from .scorer import score as run_score

__all__ = ["create_app", "ApiError", "DEFAULT_LISTEN_ADDR", "DEFAULT_JOB_LOG"]

DEFAULT_LISTEN_ADDR = "127.0.0.1:8765"
DEFAULT_JOB_LOG = "./larf-jobs.jsonl"

ENV_LISTEN_ADDR = "LARF_LISTEN_ADDR"
ENV_JOB_LOG = "LARF_JOB_LOG"
ENV_UI_ORIGIN = "LARF_UI_ORIGIN"


class ApiError(Exception):
    """Error carrying the HTTP status and machine-readable code to emit."""

    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


class _RecordingClient(ChatClient):
    """Wraps a chat client, capturing each exchange for the job log.

    Only the request body and reply content are recorded; auth headers
    live in the transport layer and never reach this wrapper.
    """

    def __init__(self, inner: ChatClient):
        self.inner = inner
        self.exchanges: list[dict] = []
        self._lock = threading.Lock()

    def complete(self, messages: list[dict], *, temperature: float, max_tokens: int) -> str:
        reply = self.inner.complete(messages, temperature=temperature, max_tokens=max_tokens)
        with self._lock:
            self.exchanges.append(
                {
                    "request": {
                        "messages": [dict(m) for m in messages],
                        "temperature": temperature,
                        "max_tokens": max_tokens,
                    },
                    "response": {"content": reply},
                }
            )
        return reply


async def _read_json_body(request: Request) -> dict:
    try:
        body = json.loads(await request.body())
    except (json.JSONDecodeError, UnicodeDecodeError):
        raise ApiError(400, "invalid_body", "request body is not valid JSON")
    if not isinstance(body, dict):
        raise ApiError(400, "invalid_body", "request body must be a JSON object")
    return body


def _require_str(body: dict, key: str) -> str:
    value = body.get(key)
    if not isinstance(value, str):
        raise ApiError(400, "invalid_body", f"field {key!r} must be a string")
    return value


def _parse_categories(raw: Any) -> tuple[tuple[str, AnnotationKind], ...]:
    if not isinstance(raw, list):
        raise ApiError(400, "invalid_body", "field 'categories' must be a list")
    categories = []
    for item in raw:
        if not isinstance(item, dict) or not isinstance(item.get("description"), str):
            raise ApiError(400, "invalid_body", "each category needs a 'description' string")
        tag = item.get("tag", "strong")
        try:
            kind = AnnotationKind.from_tag(tag)
        except ValueError:
            raise ApiError(400, "invalid_body", f"unknown category tag {tag!r}")
        categories.append((item["description"], kind))
    return tuple(categories)


def create_app(
    *,
    job_log: JobLog | None = None,
    chat_client: ChatClient | None = None,
    llm_config: LLMConfig | None = None,
    ui_origin: str | None = None,
) -> FastAPI:
    """Assemble the service; tests inject a scripted ``chat_client`` and a
    temporary job log, production builds both from the environment."""
    app = FastAPI(title="larf", version=__version__)
    log = job_log if job_log is not None else JobLog(os.environ.get(ENV_JOB_LOG, DEFAULT_JOB_LOG))

    origin = ui_origin if ui_origin is not None else os.environ.get(ENV_UI_ORIGIN)
    if origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    def make_client() -> ChatClient:
        if chat_client is not None:
            return chat_client
        try:
            return HttpChatClient(llm_config or LLMConfig.from_env())
        except ValueError as exc:
            raise ApiError(502, "transport_error", str(exc))

    @app.exception_handler(ApiError)
    async def handle_api_error(_request: Request, exc: ApiError) -> JSONResponse:
        return _error(exc.status, exc.code, exc.message)

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/api/annotate")
    async def annotate_endpoint(request: Request) -> JSONResponse:
        body = await _read_json_body(request)
        text = _require_str(body, "text")
        mode = body.get("mode", "default")
        if mode not in ("default", "custom", "offline"):
            raise ApiError(400, "invalid_body", f"unknown mode {mode!r}")
        if not normalize(text):
            raise ApiError(422, "empty_text", "text is empty after normalization")

        recorder: _RecordingClient | None = None
        if mode == "offline":
            document = offline_annotate(text)
            report = verify_text(text, document.text)
            fallback_used = False
        else:
            try:
                spec = PromptSpec(
                    mode=PromptMode(mode),
                    categories=_parse_categories(body.get("categories", []))
                    if mode == "custom"
                    else (),
                    temperature=float(body.get("temperature", 0.0)),
                    max_output_tokens=int(body.get("max_output_tokens", 2048)),
                )
            except (ValueError, TypeError) as exc:
                raise ApiError(400, "invalid_body", str(exc))
            recorder = _RecordingClient(make_client())
            try:
                result = annotate(text, spec, llm_config, client=recorder)
            except AuthError as exc:
                raise ApiError(401, "auth_error", str(exc))
            except TransportError as exc:
                raise ApiError(502, "transport_error", str(exc))
            document, report, fallback_used = result.document, result.report, result.fallback_used

        job_id = new_job_id()
        status = JobStatus.FALLBACK_USED if fallback_used else JobStatus.SUCCEEDED
        payload = {
            "document": document.to_json(),
            "report": report.to_json(),
            "html": render_html(document),
            "status": status.value,
            "job_id": job_id,
        }
        log.append(
            JobRecord(
                id=job_id,
                kind=JobKind.ANNOTATE,
                request=body,
                result=payload,
                status=status,
                llm_exchanges=tuple(recorder.exchanges) if recorder else (),
            )
        )
        return JSONResponse(payload)

    @app.post("/api/bionic")
    async def bionic_endpoint(request: Request) -> JSONResponse:
        body = await _read_json_body(request)
        text = _require_str(body, "text")
        try:
            params = BionicParams(
                fixation=body.get("fixation", 3), saccade=body.get("saccade", 10)
            )
        except RangeError as exc:
            raise ApiError(400, "invalid_params", str(exc))

        document = bionic_format(text, params)
        job_id = new_job_id()
        payload = {
            "document": document.to_json(),
            "html": render_html(document),
            "status": JobStatus.SUCCEEDED.value,
            "job_id": job_id,
        }
        log.append(
            JobRecord(
                id=job_id,
                kind=JobKind.BIONIC,
                request=body,
                result=payload,
                status=JobStatus.SUCCEEDED,
            )
        )
        return JSONResponse(payload)

    @app.post("/api/score")
    async def score_endpoint(request: Request) -> JSONResponse:
        body = await _read_json_body(request)
        article = _require_str(body, "article")
        answer = _require_str(body, "answer")
        if not normalize(article) or not normalize(answer):
            raise ApiError(422, "empty_text", "article and answer must be nonempty")

        recorder = _RecordingClient(make_client())
        try:
            result = run_score(article, answer, llm_config, client=recorder)
        except AuthError as exc:
            raise ApiError(401, "auth_error", str(exc))
        except TransportError as exc:
            raise ApiError(502, "transport_error", str(exc))
        except LarfError as exc:
            raise ApiError(502, "bad_reply", f"could not parse rater reply: {exc}")

        job_id = new_job_id()
        payload = {
            **result.to_json(),
            "adjusted_score": None,  # reserved for human review of the log
            "job_id": job_id,
        }
        log.append(
            JobRecord(
                id=job_id,
                kind=JobKind.SCORE,
                request=body,
                result=payload,
                status=JobStatus.SUCCEEDED,
                llm_exchanges=tuple(recorder.exchanges),
            )
        )
        return JSONResponse(payload)

    @app.get("/api/jobs/{job_id}")
    def get_job(job_id: str) -> JSONResponse:
        record = log.get(job_id)
        if record is None:
            raise ApiError(404, "not_found", f"no job with id {job_id!r}")
        return JSONResponse(record.to_json())

    @app.get("/api/jobs")
    def list_jobs(kind: str | None = None, limit: int = 50, offset: int = 0) -> JSONResponse:
        job_kind = None
        if kind is not None:
            try:
                job_kind = JobKind(kind)
            except ValueError:
                raise ApiError(400, "invalid_params", f"unknown job kind {kind!r}")
        records = log.list(kind=job_kind, limit=max(0, limit), offset=max(0, offset))
        return JSONResponse(
            {"jobs": [r.to_json() for r in records], "total": log.count(job_kind)}
        )

    return app


def parse_listen_addr(addr: str) -> tuple[str, int]:
    host, _, port = addr.rpartition(":")
    if not host or not port.isdigit():
        raise ValueError(f"listen address must be host:port, got {addr!r}")
    return host, int(port)
