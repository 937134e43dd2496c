"""Shared fixtures: scripted chat backends, random document generators,
and a loopback chat-completion server for subprocess tests."""

from __future__ import annotations

import json
import random
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

from larf.model import AnnotatedDocument, AnnotationKind, AnnotationSpan

DATA_DIR = Path(__file__).parent / "data"


def load_fixture(name: str) -> str:
    return (DATA_DIR / name).read_text(encoding="utf-8")


@pytest.fixture
def demo_paragraph() -> str:
    return load_fixture("demo_paragraph.txt")


@pytest.fixture
def demo_annotated() -> str:
    return load_fixture("demo_paragraph_annotated.txt")


class ScriptedChatClient:
    """Replays canned replies in order; repeats the last when exhausted."""

    def __init__(self, replies):
        self.replies = list(replies)
        self.calls = []
        self._lock = threading.Lock()

    def complete(self, messages, *, temperature, max_tokens):
        with self._lock:
            self.calls.append(
                {
                    "messages": [dict(m) for m in messages],
                    "temperature": temperature,
                    "max_tokens": max_tokens,
                }
            )
            index = min(len(self.calls) - 1, len(self.replies) - 1)
            return self.replies[index]


class EchoChatClient:
    """Returns the chunk text unchanged (a rule-7-compliant no-op reply)."""

    def __init__(self):
        self.calls = []
        self._lock = threading.Lock()

    def complete(self, messages, *, temperature, max_tokens):
        with self._lock:
            self.calls.append([dict(m) for m in messages])
        return messages[1]["content"]


class CorruptingChatClient:
    """Rewrites one word of the chunk in every reply: never verifies."""

    def complete(self, messages, *, temperature, max_tokens):
        words = messages[1]["content"].split()
        if words:
            words[0] = words[0] + "zzz"
        return " ".join(words)


class ComplyOnAttemptClient:
    """Corrupts replies until the given attempt, then echoes faithfully."""

    def __init__(self, comply_on: int = 2):
        self.comply_on = comply_on
        self.calls = 0

    def complete(self, messages, *, temperature, max_tokens):
        self.calls += 1
        chunk = messages[1]["content"]
        if self.calls < self.comply_on:
            return chunk.replace(chunk.split()[0], "garbled", 1) if chunk.split() else chunk
        return chunk


WORDS = (
    "pyramid stone desert king vizier wall entrance tomb chamber dynasty "
    "limestone burial court temple mound step niche shaft granite passage"
).split()


def random_text(rng: random.Random, paragraphs: int | None = None) -> str:
    """Multi-paragraph plain text with digits, names, and punctuation."""
    paragraphs = paragraphs or rng.randint(1, 3)
    parts = []
    for _ in range(paragraphs):
        sentences = []
        for _ in range(rng.randint(1, 3)):
            words = rng.choices(WORDS, k=rng.randint(3, 8))
            if rng.random() < 0.5:
                words[rng.randrange(len(words))] = str(rng.randint(1, 2700))
            if rng.random() < 0.5:
                words[rng.randrange(len(words))] = rng.choice(["Djoser", "Imhotep", "Saqqara", "Rosé"])
            sentences.append(" ".join(words).capitalize() + rng.choice([".", ".", "!", "?"]))
        parts.append(" ".join(sentences))
    return "\n\n".join(parts)


def random_spans(rng: random.Random, lo: int, hi: int, kinds=None) -> list[AnnotationSpan]:
    """Valid span sets: same-kind disjoint, cross-kind properly nested."""
    kinds = list(AnnotationKind) if kinds is None else kinds
    if hi - lo < 2 or not kinds or rng.random() < 0.25:
        return []
    spans = []
    cuts = sorted(rng.sample(range(lo, hi + 1), k=min(rng.randint(2, 4), hi + 1 - lo)))
    for start, end in zip(cuts, cuts[1:]):
        if end - start < 1 or rng.random() < 0.4:
            continue
        kind = rng.choice(kinds)
        spans.append(AnnotationSpan(kind, start, end))
        inner = [k for k in kinds if k is not kind]
        spans.extend(random_spans(rng, start, end, inner))
    return spans


def random_document(rng: random.Random) -> AnnotatedDocument:
    """Canonical random document: trimmed paragraphs joined by blank lines,
    spans inside paragraphs, no same-kind adjacency (guaranteed by the
    disjoint-cut construction leaving gaps)."""
    paragraphs = []
    for _ in range(rng.randint(1, 3)):
        words = rng.choices(WORDS + ["2650", "Djoser", 'he said "why"', "a&b", "x<y"], k=rng.randint(2, 10))
        paragraphs.append(" ".join(words))

    text = "\n\n".join(paragraphs)
    spans: list[AnnotationSpan] = []
    offset = 0
    for para in paragraphs:
        candidate = sorted(random_spans(rng, offset, offset + len(para)), key=lambda s: (s.start, -s.end))
        spans.extend(candidate)
        offset += len(para) + 2
    breaks = []
    base = 0
    for para in paragraphs[:-1]:
        base += len(para) + 2
        breaks.append(base)
    return AnnotatedDocument(text=text, spans=_drop_adjacent(spans), paragraph_breaks=breaks)


def _drop_adjacent(spans: list[AnnotationSpan]) -> list[AnnotationSpan]:
    kept: list[AnnotationSpan] = []
    for span in spans:
        if any(k.kind is span.kind and (k.end == span.start or span.end == k.start) for k in kept):
            continue
        kept.append(span)
    return kept


class _ChatHandler(BaseHTTPRequestHandler):
    def do_POST(self):
        if not self.path.endswith("/chat/completions"):
            self.send_error(404)
            return
        length = int(self.headers.get("Content-Length", 0))
        request = json.loads(self.rfile.read(length))
        status, content = self.server.respond(request)  # type: ignore[attr-defined]
        body = json.dumps(
            {"choices": [{"message": {"role": "assistant", "content": content}}]}
        ).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        if status == 200:
            self.wfile.write(body)

    def log_message(self, *args):
        pass


class MockChatServer(ThreadingHTTPServer):
    """Loopback chat-completion endpoint with swappable behavior."""

    def __init__(self):
        super().__init__(("127.0.0.1", 0), _ChatHandler)
        self.behavior = "echo"
        self.replies: list[str] = []
        self._lock = threading.Lock()

    @property
    def base_url(self) -> str:
        return f"http://127.0.0.1:{self.server_address[1]}"

    def respond(self, request: dict) -> tuple[int, str]:
        user = next(m["content"] for m in request["messages"] if m["role"] == "user")
        with self._lock:
            if self.behavior == "scripted" and self.replies:
                return 200, self.replies.pop(0)
        if self.behavior == "corrupt":
            words = user.split()
            if words:
                words[0] += "zzz"
            return 200, " ".join(words)
        return 200, user


@pytest.fixture(scope="session")
def chat_server():
    server = MockChatServer()
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield server
    server.shutdown()
