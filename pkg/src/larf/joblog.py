"""Append-only JSONL job log: the audit trail for every processed request."""

from __future__ import annotations

import datetime as dt
import enum
import json
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

__all__ = ["JobKind", "JobStatus", "JobRecord", "JobLog"]


class JobKind(enum.Enum):
    ANNOTATE = "annotate"
    BIONIC = "bionic"
    SCORE = "score"


class JobStatus(enum.Enum):
    SUCCEEDED = "succeeded"
    FALLBACK_USED = "fallback_used"
    FAILED = "failed"


def new_job_id() -> str:
    return uuid.uuid4().hex


def _utc_now() -> str:
    return dt.datetime.now(dt.timezone.utc).isoformat()


@dataclass(frozen=True)
class JobRecord:
    id: str
    kind: JobKind
    request: dict
    result: dict
    status: JobStatus
    llm_exchanges: tuple = ()
    created_at: str = field(default_factory=_utc_now)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "created_at": self.created_at,
            "kind": self.kind.value,
            "request": self.request,
            "result": self.result,
            "llm_exchanges": list(self.llm_exchanges),
            "status": self.status.value,
        }

    @classmethod
    def from_json(cls, data: dict) -> "JobRecord":
        return cls(
            id=data["id"],
            kind=JobKind(data["kind"]),
            request=data["request"],
            result=data["result"],
            status=JobStatus(data["status"]),
            llm_exchanges=tuple(data.get("llm_exchanges", [])),
            created_at=data["created_at"],
        )


class JobLog:
    """One JSONL line per record; records are immutable once written.

    Appends are serialized through a lock; an in-memory index keeps reads
    cheap. Existing log files are loaded on startup so restarts keep
    history visible.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._records: list[JobRecord] = []
        self._by_id: dict[str, JobRecord] = {}
        if self.path.exists():
            for line in self.path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    self._index(JobRecord.from_json(json.loads(line)))

    def _index(self, record: JobRecord) -> None:
        self._records.append(record)
        self._by_id[record.id] = record

    def append(self, record: JobRecord) -> None:
        line = json.dumps(record.to_json(), ensure_ascii=False)
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as handle:
                handle.write(line + "\n")
            self._index(record)

    def get(self, job_id: str) -> JobRecord | None:
        with self._lock:
            return self._by_id.get(job_id)

    def list(self, kind: JobKind | None = None, limit: int = 50, offset: int = 0) -> list[JobRecord]:
        """Records newest first, optionally filtered by kind."""
        with self._lock:
            records = [r for r in self._records if kind is None or r.kind is kind]
        records.reverse()
        return records[offset:offset + limit]

    def count(self, kind: JobKind | None = None) -> int:
        with self._lock:
            return sum(1 for r in self._records if kind is None or r.kind is kind)
