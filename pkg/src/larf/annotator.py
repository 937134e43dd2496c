"""Annotation pipeline: prompt construction, the LLM exchange with its
verify-repair-fallback loop, and a deterministic offline annotator.

The contract enforced here is strict: an annotated document is only ever
returned as success if verification proved the text unchanged. When the
model keeps violating that after the retry budget, the caller gets the
plain original text back (fallback) together with the failing report.
"""

from __future__ import annotations

import enum
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources

from .errors import EmptyCategories, EmptyInput
from .llm import ChatClient, LLMConfig, HttpChatClient
from .markup import VerificationReport, parse_markup, verify_preservation, verify_text
from .model import (
    AnnotatedDocument,
    AnnotationKind,
    AnnotationSpan,
    apply_annotations,
    normalize,
)

__all__ = [
    "PromptMode",
    "PromptSpec",
    "AnnotationResult",
    "build_default_prompt",
    "build_custom_prompt",
    "annotate",
    "offline_annotate",
    "split_chunks",
    "CHUNK_LIMIT",
]

CHUNK_LIMIT = 4000
DEFAULT_MAX_IN_FLIGHT = 4

# Rules 1-3 of the default prompt are the per-category instructions that
# custom mode replaces; rules 4-9 are invariant plumbing and stay verbatim.
_CUSTOM_RULE_TEMPLATE = "Please annotate {description} by adding <{tag}> tags around them."
_RETAINED_RULES = range(4, 10)


class PromptMode(enum.Enum):
    DEFAULT = "default"
    CUSTOM = "custom"


@dataclass(frozen=True)
class PromptSpec:
    mode: PromptMode = PromptMode.DEFAULT
    categories: tuple[tuple[str, AnnotationKind], ...] = ()
    temperature: float = 0.0
    max_output_tokens: int = 2048

    def __post_init__(self) -> None:
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_output_tokens < 1:
            raise ValueError("max_output_tokens must be positive")
        if self.mode is PromptMode.DEFAULT and self.categories:
            raise ValueError("default mode takes no categories")
        if self.mode is PromptMode.CUSTOM and not self.categories:
            raise EmptyCategories("custom mode requires at least one category")

    def system_prompt(self) -> str:
        if self.mode is PromptMode.DEFAULT:
            return build_default_prompt()
        return build_custom_prompt(self)


def _load_prompt(name: str) -> str:
    return resources.files("larf").joinpath("data", name).read_text(encoding="utf-8")


def build_default_prompt() -> str:
    """The stock system prompt (nine numbered rules), loaded verbatim."""
    return _load_prompt("default_prompt.txt")


def _split_rules(prompt: str) -> tuple[str, dict[int, str]]:
    blocks = [block.strip() for block in prompt.split("\n\n")]
    header = blocks[0]
    rules = {}
    for block in blocks[1:]:
        match = re.match(r"(\d+)\.\s+(.*)", block, re.DOTALL)
        if match:
            rules[int(match.group(1))] = match.group(2)
    return header, rules


def build_custom_prompt(spec: PromptSpec) -> str:
    """Swap rules 1-3 for one instruction per user category, renumbering the
    retained rules after them."""
    if not spec.categories:
        raise EmptyCategories("custom mode requires at least one category")
    header, rules = _split_rules(build_default_prompt())

    blocks = [header]
    number = 0
    for description, kind in spec.categories:
        number += 1
        blocks.append(
            f"{number}. " + _CUSTOM_RULE_TEMPLATE.format(description=description, tag=kind.value)
        )
    for index in _RETAINED_RULES:
        number += 1
        blocks.append(f"{number}. {rules[index]}")
    return "\n\n".join(blocks) + "\n"


@dataclass(frozen=True)
class AnnotationResult:
    document: AnnotatedDocument
    report: VerificationReport
    attempts: int
    fallback_used: bool
    raw_replies: tuple[str, ...] = ()


@dataclass
class _ChunkOutcome:
    document: AnnotatedDocument
    report: VerificationReport
    attempts: int
    failed: bool
    replies: list[str] = field(default_factory=list)


def split_chunks(text: str, limit: int = CHUNK_LIMIT) -> list[str]:
    """Split on paragraph boundaries into chunks of at most ``limit``
    characters, keeping separators attached so the concatenation of the
    returned chunks is exactly the input."""
    pattern = re.compile(r"[ \t]*(?:\r?\n[ \t]*){2,}")
    pieces: list[str] = []
    pos = 0
    for gap in pattern.finditer(text):
        pieces.append(text[pos:gap.end()])
        pos = gap.end()
    if pos < len(text):
        pieces.append(text[pos:])

    chunks: list[str] = []
    current = ""
    for piece in pieces:
        if current and len(current) + len(piece) > limit:
            chunks.append(current)
            current = piece
        else:
            current += piece
    if current:
        chunks.append(current)
    return chunks


def _corrective_message(report: VerificationReport) -> str:
    detail = ""
    if report.diffs:
        diff = report.diffs[0]
        detail = (
            f' For example, the original text says "{diff.original}" but your '
            f'output says "{diff.produced}".'
        )
    return (
        "Your previous output changed the article text, which is not allowed. "
        'Remember rule 7: "YOUR OUTPUT MUST KEEP THE CONTENT OF THE ARTICLE THE '
        'SAME AS THE ORIGINAL ONE."' + detail + " Please annotate the article "
        "again and change nothing except adding the allowed tags."
    )


def _annotate_chunk(
    chunk: str, system_prompt: str, spec: PromptSpec, client: ChatClient, max_retries: int
) -> _ChunkOutcome:
    messages = [
        {"role": "system", "content": system_prompt},
        {"role": "user", "content": chunk},
    ]
    replies: list[str] = []
    report = None
    parsed = None
    for attempt in range(max_retries + 1):
        reply = client.complete(
            messages, temperature=spec.temperature, max_tokens=spec.max_output_tokens
        )
        replies.append(reply)
        parsed = parse_markup(reply)
        report = verify_preservation(chunk, parsed)
        if report.passed:
            return _ChunkOutcome(parsed.document, report, attempt + 1, False, replies)
        messages.append({"role": "assistant", "content": reply})
        messages.append({"role": "user", "content": _corrective_message(report)})
    return _ChunkOutcome(parsed.document, report, max_retries + 1, True, replies)


def annotate(
    text: str,
    prompt: PromptSpec | None = None,
    config: LLMConfig | None = None,
    *,
    client: ChatClient | None = None,
    max_in_flight: int = DEFAULT_MAX_IN_FLIGHT,
) -> AnnotationResult:
    """Annotate ``text`` through a chat endpoint, verifying every chunk.

    Chunks that fail verification are retried with a corrective follow-up
    quoting the violated rule and the first diff; if any chunk exhausts the
    retry budget the whole result falls back to the plain original text
    (zero spans) and the failing chunk's report is returned as evidence.
    """
    if not normalize(text):
        raise EmptyInput("no text to annotate")
    prompt = prompt or PromptSpec()
    if client is None:
        client = HttpChatClient(config or LLMConfig.from_env())
    max_retries = config.max_retries if config is not None else LLMConfig().max_retries

    system_prompt = prompt.system_prompt()
    chunks = split_chunks(text)

    if len(chunks) == 1:
        outcomes = [_annotate_chunk(chunks[0], system_prompt, prompt, client, max_retries)]
    else:
        with ThreadPoolExecutor(max_workers=max(1, max_in_flight)) as pool:
            outcomes = list(
                pool.map(
                    lambda c: _annotate_chunk(c, system_prompt, prompt, client, max_retries),
                    chunks,
                )
            )

    attempts = sum(o.attempts for o in outcomes)
    replies = tuple(r for o in outcomes for r in o.replies)
    failed = [o for o in outcomes if o.failed]
    if failed:
        # All-or-nothing fallback keeps the result internally consistent:
        # plain verified text, with the violation report as diagnostics.
        return AnnotationResult(
            document=apply_annotations(text, []),
            report=failed[0].report,
            attempts=attempts,
            fallback_used=True,
            raw_replies=replies,
        )

    document = _assemble([o.document for o in outcomes])
    return AnnotationResult(
        document=document,
        report=verify_text(text, document.text),
        attempts=attempts,
        fallback_used=False,
        raw_replies=replies,
    )


def _assemble(documents: list[AnnotatedDocument]) -> AnnotatedDocument:
    """Join chunk documents with paragraph separators, re-basing offsets."""
    texts: list[str] = []
    spans: list[AnnotationSpan] = []
    breaks: list[int] = []
    base = 0
    for doc in documents:
        if not doc.text:
            continue
        if texts:
            breaks.append(base)
        spans.extend(AnnotationSpan(s.kind, s.start + base, s.end + base) for s in doc.spans)
        breaks.extend(b + base for b in doc.paragraph_breaks)
        texts.append(doc.text)
        base += len(doc.text) + 2
    return apply_annotations("\n\n".join(texts), spans, sorted(breaks))


_TOKEN = re.compile(r"[^\W_]+", re.UNICODE)
_SENTENCE_END = re.compile(r"[.!?][\"'’”)\]]*")


def _is_capitalized(token: str) -> bool:
    if len(token) < 2 or not token[0].isupper():
        return False
    rest = token[1:]
    return rest.isalpha() and rest.islower()


def offline_annotate(text: str) -> AnnotatedDocument:
    """Deterministic rule-based annotator for network-free use.

    Approximates the stock prompt: emphasis on numbers and capitalized
    name-like runs, highlight on each paragraph's first sentence. The text
    is never altered, so verification passes by construction.
    """
    spans: list[AnnotationSpan] = []
    breaks: list[int] = []
    pattern = re.compile(r"[ \t]*(?:\r?\n[ \t]*){2,}")

    segments: list[tuple[int, str]] = []
    pos = 0
    for gap in pattern.finditer(text):
        segments.append((pos, text[pos:gap.start()]))
        pos = gap.end()
        if pos < len(text):
            breaks.append(pos)
    segments.append((pos, text[pos:]))

    for start, segment in segments:
        if not segment.strip():
            continue
        spans.extend(_paragraph_spans(segment, start))
    return apply_annotations(text, spans, breaks)


def _paragraph_spans(segment: str, base: int) -> list[AnnotationSpan]:
    spans: list[AnnotationSpan] = []

    lead = len(segment) - len(segment.lstrip())
    sentence_end = _SENTENCE_END.search(segment)
    highlight_end = sentence_end.end() if sentence_end else len(segment.rstrip())
    if lead < highlight_end:
        spans.append(AnnotationSpan(AnnotationKind.HIGHLIGHT, base + lead, base + highlight_end))

    tokens = list(_TOKEN.finditer(segment))
    index = 0
    while index < len(tokens):
        token = tokens[index]
        if token.group(0).isdigit():
            spans.append(
                AnnotationSpan(AnnotationKind.EMPHASIS, base + token.start(), base + token.end())
            )
            index += 1
            continue
        if _is_capitalized(token.group(0)):
            # Extend over following capitalized tokens joined by spaces only.
            last = index
            while (
                last + 1 < len(tokens)
                and _is_capitalized(tokens[last + 1].group(0))
                and set(segment[tokens[last].end():tokens[last + 1].start()]) <= {" "}
            ):
                last += 1
            spans.append(
                AnnotationSpan(
                    AnnotationKind.EMPHASIS, base + token.start(), base + tokens[last].end()
                )
            )
            index = last + 1
            continue
        index += 1
    return spans
