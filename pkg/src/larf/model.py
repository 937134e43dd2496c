"""Annotated-document model: typed spans over plain text.

The document representation every other module exchanges. The text is kept
verbatim; annotations are half-open code-point ranges that never carry text
of their own, so removing them is always lossless.
"""

from __future__ import annotations

import enum
import re
import unicodedata
from dataclasses import dataclass, field

from .errors import OverlapError, RangeError

__all__ = [
    "AnnotationKind",
    "AnnotationSpan",
    "AnnotatedDocument",
    "normalize",
    "strip_annotations",
    "apply_annotations",
    "paragraph_starts",
    "validate_spans",
]


class AnnotationKind(enum.Enum):
    """The three presentation marks; values are the markup tag names."""

    EMPHASIS = "strong"
    HIGHLIGHT = "mark"
    UNDERLINE = "u"

    @classmethod
    def from_tag(cls, tag: str) -> "AnnotationKind":
        try:
            return cls(tag)
        except ValueError:
            raise ValueError(f"unknown annotation tag: {tag!r}") from None


# Deterministic outer-to-inner order for spans that share a range.
_KIND_RANK = {
    AnnotationKind.HIGHLIGHT: 0,
    AnnotationKind.EMPHASIS: 1,
    AnnotationKind.UNDERLINE: 2,
}


@dataclass(frozen=True)
class AnnotationSpan:
    """One typed mark over the half-open code-point range [start, end)."""

    kind: AnnotationKind
    start: int
    end: int

    def __post_init__(self) -> None:
        if not isinstance(self.start, int) or not isinstance(self.end, int):
            raise RangeError("span offsets must be integers")
        if self.start < 0 or self.end <= self.start:
            raise RangeError(f"invalid span range [{self.start}, {self.end})")

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "start": self.start, "end": self.end}

    @classmethod
    def from_json(cls, data: dict) -> "AnnotationSpan":
        return cls(AnnotationKind.from_tag(data["kind"]), int(data["start"]), int(data["end"]))


def span_sort_key(span: AnnotationSpan) -> tuple:
    return (span.start, -span.end, _KIND_RANK[span.kind])


def validate_spans(text_len: int, spans: list[AnnotationSpan] | tuple[AnnotationSpan, ...]) -> None:
    """Check span invariants against a text of ``text_len`` code points.

    Raises RangeError for out-of-bounds spans, OverlapError for same-kind
    overlap or partial (improper) nesting between kinds. O(n log n).
    """
    for span in spans:
        if span.end > text_len:
            raise RangeError(f"span [{span.start}, {span.end}) exceeds text length {text_len}")

    ordered = sorted(spans, key=span_sort_key)

    # Same-kind spans may touch but never overlap.
    last_end: dict[AnnotationKind, int] = {}
    for span in sorted(spans, key=lambda s: (s.kind.value, s.start, s.end)):
        prev = last_end.get(span.kind, -1)
        if span.start < prev:
            raise OverlapError(
                f"overlapping {span.kind.value} spans near offset {span.start}"
            )
        last_end[span.kind] = span.end

    # Across kinds, spans must nest like brackets: containment or disjoint.
    stack: list[AnnotationSpan] = []
    for span in ordered:
        while stack and stack[-1].end <= span.start:
            stack.pop()
        if stack and span.end > stack[-1].end:
            raise OverlapError(
                f"partial overlap between {stack[-1].kind.value} and {span.kind.value} "
                f"spans at offset {span.start}"
            )
        stack.append(span)


_PARAGRAPH_SEP = re.compile(r"[ \t]*(?:\r?\n[ \t]*){2,}")


def paragraph_starts(text: str) -> list[int]:
    """Offsets where a new blank-line-separated paragraph begins."""
    return [m.end() for m in _PARAGRAPH_SEP.finditer(text) if m.end() < len(text)]


@dataclass(frozen=True)
class AnnotatedDocument:
    """Plain text plus non-overlapping typed annotation spans.

    Immutable after construction; construction validates every invariant,
    so any held instance is known-good and safe to share across threads.
    """

    text: str
    spans: tuple[AnnotationSpan, ...] = ()
    paragraph_breaks: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "spans", tuple(sorted(self.spans, key=span_sort_key)))
        object.__setattr__(self, "paragraph_breaks", tuple(self.paragraph_breaks))
        self.validate()

    def validate(self) -> None:
        validate_spans(len(self.text), self.spans)
        prev = -1
        for offset in self.paragraph_breaks:
            if offset < 0 or offset > len(self.text):
                raise RangeError(f"paragraph break {offset} outside [0, {len(self.text)}]")
            if offset <= prev:
                raise RangeError("paragraph breaks must be strictly increasing")
            prev = offset

    def paragraph_ranges(self) -> list[tuple[int, int]]:
        """Half-open [start, end) ranges covering the text, one per paragraph."""
        bounds = [0, *self.paragraph_breaks, len(self.text)]
        return [(bounds[i], bounds[i + 1]) for i in range(len(bounds) - 1)]

    def to_json(self) -> dict:
        return {
            "text": self.text,
            "spans": [span.to_json() for span in self.spans],
            "paragraph_breaks": list(self.paragraph_breaks),
        }

    @classmethod
    def from_json(cls, data: dict) -> "AnnotatedDocument":
        return cls(
            text=data["text"],
            spans=tuple(AnnotationSpan.from_json(s) for s in data.get("spans", [])),
            paragraph_breaks=tuple(int(b) for b in data.get("paragraph_breaks", [])),
        )


def normalize(text: str) -> str:
    """Canonical form used for content comparison.

    NFC composition, every whitespace run collapsed to a single space,
    leading/trailing whitespace removed. Idempotent.
    """
    return " ".join(unicodedata.normalize("NFC", text).split())


def strip_annotations(doc: AnnotatedDocument) -> str:
    """The document text with all annotations removed; spans carry no text,
    so this is exactly ``doc.text``."""
    return doc.text


def apply_annotations(
    text: str,
    spans: list[AnnotationSpan] | tuple[AnnotationSpan, ...],
    paragraph_breaks: list[int] | tuple[int, ...] | None = None,
) -> AnnotatedDocument:
    """Build a document from text and spans, validating every invariant.

    When ``paragraph_breaks`` is omitted they are derived from blank lines.
    """
    if paragraph_breaks is None:
        paragraph_breaks = paragraph_starts(text)
    return AnnotatedDocument(text=text, spans=tuple(spans), paragraph_breaks=tuple(paragraph_breaks))
