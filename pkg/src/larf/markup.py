"""Whitelist markup parsing, serialization, and content-preservation checks.

`parse_markup` accepts anything an LLM might return and degrades gracefully:
only <strong>/<mark>/<u> (plus <b> as an alias for <strong>) become spans,
<p> and <br> delimit paragraphs, every other tag is stripped with its inner
text kept. `verify_preservation` then proves, on normalized text, that the
reply changed nothing but markup.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from difflib import SequenceMatcher

from .errors import LarfError
from .model import (
    AnnotatedDocument,
    AnnotationKind,
    AnnotationSpan,
    apply_annotations,
    normalize,
    span_sort_key,
)

__all__ = [
    "ParsedMarkup",
    "VerificationReport",
    "DiffEntry",
    "parse_markup",
    "emit_markup",
    "verify_preservation",
    "verify_text",
]

_TAG_ALIASES = {
    "strong": AnnotationKind.EMPHASIS,
    "b": AnnotationKind.EMPHASIS,
    "mark": AnnotationKind.HIGHLIGHT,
    "u": AnnotationKind.UNDERLINE,
}
_BREAK_TAGS = {"p", "br"}

_TAG_RE = re.compile(r"<\s*(/?)\s*([a-zA-Z][a-zA-Z0-9-]*)([^<>]*?)\s*>")
_ENTITY_RE = re.compile(r"&(amp|lt|gt|quot|apos);")
_ENTITY_MAP = {"amp": "&", "lt": "<", "gt": ">", "quot": '"', "apos": "'"}
_ESCAPE_MAP = {"&": "&amp;", "<": "&lt;", ">": "&gt;", '"': "&quot;", "'": "&apos;"}
_PARAGRAPH_GAP = re.compile(r"[ \t]*(?:\r?\n[ \t]*){2,}")


def _decode_entities(text: str) -> str:
    return _ENTITY_RE.sub(lambda m: _ENTITY_MAP[m.group(1)], text)


def escape_text(text: str) -> str:
    return re.sub(r"[&<>\"']", lambda m: _ESCAPE_MAP[m.group(0)], text)


@dataclass(frozen=True)
class DiffEntry:
    """One mismatching aligned region between original and produced text.

    ``position`` is the character offset of the region in the normalized
    original; fragments are space-joined words ('' for pure insert/delete).
    """

    original: str
    produced: str
    position: int

    def to_json(self) -> dict:
        return {"original": self.original, "produced": self.produced, "position": self.position}


@dataclass(frozen=True)
class VerificationReport:
    """Evidence that annotated output did (or did not) preserve the text."""

    passed: bool
    original_normalized: str
    stripped_normalized: str
    diffs: tuple[DiffEntry, ...] = ()

    def to_json(self) -> dict:
        return {"passed": self.passed, "diffs": [d.to_json() for d in self.diffs]}


@dataclass(frozen=True)
class ParsedMarkup:
    """Result of parsing tag-augmented text: the document plus an audit of
    everything that was not whitelisted markup."""

    document: AnnotatedDocument
    dropped_tags: tuple[tuple[str, int], ...] = ()
    warnings: tuple[str, ...] = ()


@dataclass
class _OpenTag:
    kind: AnnotationKind
    start: int
    phantom: bool = False  # same kind already open; kept only to balance the closer


@dataclass
class _Paragraph:
    pieces: list[str] = field(default_factory=list)
    length: int = 0
    spans: list[AnnotationSpan] = field(default_factory=list)

    def add_text(self, text: str) -> None:
        if text:
            self.pieces.append(text)
            self.length += len(text)


class _MarkupParser:
    def __init__(self) -> None:
        self.paragraphs: list[tuple[str, list[AnnotationSpan]]] = []
        self.current = _Paragraph()
        self.stack: list[_OpenTag] = []
        self.dropped: list[tuple[str, int]] = []
        self.warnings: list[str] = []

    def feed_text(self, raw: str) -> None:
        # Blank lines inside untagged text are paragraph boundaries too.
        pos = 0
        for gap in _PARAGRAPH_GAP.finditer(raw):
            self.current.add_text(_decode_entities(raw[pos:gap.start()]))
            self.break_paragraph()
            pos = gap.end()
        self.current.add_text(_decode_entities(raw[pos:]))

    def open_span(self, kind: AnnotationKind, attrs: str, name: str) -> None:
        if attrs.strip():
            self.warnings.append(f"attributes on <{name}> ignored")
        if any(frame.kind is kind and not frame.phantom for frame in self.stack):
            self.warnings.append(f"nested duplicate <{kind.value}> ignored")
            self.stack.append(_OpenTag(kind, self.current.length, phantom=True))
        else:
            self.stack.append(_OpenTag(kind, self.current.length))

    def close_span(self, kind: AnnotationKind) -> None:
        if not any(frame.kind is kind for frame in self.stack):
            self.warnings.append(f"stray </{kind.value}> ignored")
            return
        while self.stack:
            frame = self.stack.pop()
            if frame.kind is kind:
                self._emit(frame, self.current.length)
                return
            # Improperly interleaved tag: close it here and carry on.
            if not frame.phantom:
                self.warnings.append(
                    f"improperly nested <{frame.kind.value}> closed at </{kind.value}>"
                )
            self._emit(frame, self.current.length)

    def _emit(self, frame: _OpenTag, end: int) -> None:
        if not frame.phantom and frame.start < end:
            self.current.spans.append(AnnotationSpan(frame.kind, frame.start, end))

    def break_paragraph(self) -> None:
        for frame in reversed(self.stack):
            if not frame.phantom:
                self.warnings.append(
                    f"unclosed <{frame.kind.value}> auto-closed at paragraph end"
                )
            self._emit(frame, self.current.length)
        self.stack = []

        raw = "".join(self.current.pieces)
        trimmed = raw.strip()
        if trimmed:
            shift = len(raw) - len(raw.lstrip())
            spans = []
            for span in self.current.spans:
                start = max(span.start - shift, 0)
                end = min(span.end - shift, len(trimmed))
                if start < end:
                    spans.append(AnnotationSpan(span.kind, start, end))
            self.paragraphs.append((trimmed, spans))
        self.current = _Paragraph()

    def result(self) -> ParsedMarkup:
        self.break_paragraph()

        texts = [text for text, _ in self.paragraphs]
        offsets: list[int] = []
        base = 0
        for text in texts:
            offsets.append(base)
            base += len(text) + 2  # paragraphs joined with "\n\n"

        spans = [
            AnnotationSpan(span.kind, span.start + off, span.end + off)
            for (_, local), off in zip(self.paragraphs, offsets)
            for span in local
        ]
        spans = _merge_adjacent(spans)

        full_text = "\n\n".join(texts)
        try:
            document = apply_annotations(full_text, spans, offsets[1:])
        except LarfError as exc:  # parser discipline should prevent this
            self.warnings.append(f"span reconstruction failed, markup discarded: {exc}")
            document = apply_annotations(full_text, [], offsets[1:])
        return ParsedMarkup(document, tuple(self.dropped), tuple(self.warnings))


def _merge_adjacent(spans: list[AnnotationSpan]) -> list[AnnotationSpan]:
    """Merge same-kind spans that touch or overlap into one canonical span."""
    merged: list[AnnotationSpan] = []
    for kind in AnnotationKind:
        run: AnnotationSpan | None = None
        for span in sorted((s for s in spans if s.kind is kind), key=lambda s: (s.start, s.end)):
            if run is not None and span.start <= run.end:
                run = AnnotationSpan(kind, run.start, max(run.end, span.end))
            else:
                if run is not None:
                    merged.append(run)
                run = span
        if run is not None:
            merged.append(run)
    return sorted(merged, key=span_sort_key)


def parse_markup(raw: str) -> ParsedMarkup:
    """Parse tag-augmented text against the whitelist. Total: never raises;
    malformed markup degrades to plain text plus warnings."""
    parser = _MarkupParser()
    pos = 0
    for match in _TAG_RE.finditer(raw):
        parser.feed_text(raw[pos:match.start()])
        pos = match.end()

        closing, name, attrs = match.group(1) == "/", match.group(2).lower(), match.group(3)
        self_closing = attrs.rstrip().endswith("/")
        if self_closing:
            attrs = attrs.rstrip()[:-1]

        if name in _TAG_ALIASES:
            kind = _TAG_ALIASES[name]
            if closing:
                parser.close_span(kind)
            elif self_closing:
                parser.warnings.append(f"self-closing <{name}/> ignored")
            else:
                parser.open_span(kind, attrs, name)
        elif name in _BREAK_TAGS:
            parser.break_paragraph()
        elif not closing:
            parser.dropped.append((name, match.start()))
    parser.feed_text(raw[pos:])
    return parser.result()


def emit_markup(doc: AnnotatedDocument) -> str:
    """Deterministic serialization: each paragraph wrapped in <p>…</p>,
    spans as whitelist tags, the five standard entities escaped."""
    rendered: list[str] = []
    for start, end in doc.paragraph_ranges():
        segment = doc.text[start:end]
        trimmed = segment.strip()
        if not trimmed:
            continue
        seg_start = start + (len(segment) - len(segment.lstrip()))
        seg_end = seg_start + len(trimmed)

        spans = []
        for span in doc.spans:
            s, e = max(span.start, seg_start), min(span.end, seg_end)
            if s < e:
                spans.append(AnnotationSpan(span.kind, s - seg_start, e - seg_start))
        rendered.append("<p>" + _emit_paragraph(trimmed, spans) + "</p>")
    return "\n".join(rendered)


def _emit_paragraph(text: str, spans: list[AnnotationSpan]) -> str:
    out: list[str] = []
    open_stack: list[AnnotationSpan] = []
    pos = 0

    def close_until(limit: int) -> None:
        nonlocal pos
        while open_stack and open_stack[-1].end <= limit:
            top = open_stack.pop()
            out.append(escape_text(text[pos:top.end]))
            out.append(f"</{top.kind.value}>")
            pos = top.end

    for span in sorted(spans, key=span_sort_key):
        close_until(span.start)
        out.append(escape_text(text[pos:span.start]))
        pos = span.start
        out.append(f"<{span.kind.value}>")
        open_stack.append(span)
    close_until(len(text))
    out.append(escape_text(text[pos:]))
    return "".join(out)


def _word_offsets(words: list[str]) -> list[int]:
    offsets, pos = [], 0
    for word in words:
        offsets.append(pos)
        pos += len(word) + 1
    offsets.append(pos)
    return offsets


def verify_text(original: str, produced: str) -> VerificationReport:
    """Compare two texts under normalization; on mismatch, report every
    unequal region of the word-level longest-common-subsequence alignment."""
    norm_orig = normalize(original)
    norm_prod = normalize(produced)
    if norm_orig == norm_prod:
        return VerificationReport(True, norm_orig, norm_prod)

    orig_words = norm_orig.split(" ") if norm_orig else []
    prod_words = norm_prod.split(" ") if norm_prod else []
    offsets = _word_offsets(orig_words)

    diffs = []
    matcher = SequenceMatcher(a=orig_words, b=prod_words, autojunk=False)
    for op, i1, i2, j1, j2 in matcher.get_opcodes():
        if op != "equal":
            diffs.append(
                DiffEntry(
                    original=" ".join(orig_words[i1:i2]),
                    produced=" ".join(prod_words[j1:j2]),
                    # An insert after the last word anchors at the text end.
                    position=min(offsets[i1], len(norm_orig)),
                )
            )
    return VerificationReport(False, norm_orig, norm_prod, tuple(diffs))


def verify_preservation(original: str, parsed: ParsedMarkup) -> VerificationReport:
    """Check the content-preservation contract for a parsed LLM reply."""
    return verify_text(original, parsed.document.text)
