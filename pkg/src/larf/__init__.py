"""larf: content-preserving text annotation for easier reading.

An LLM (or a deterministic offline rule set) marks up important parts of a
text with emphasis, highlight, and underline tags; a verifier proves the
text itself was not changed; renderers produce dyslexia-friendly HTML or a
terminal preview. A Bionic Reading formatter is included as the baseline,
plus a 0-10 rubric scorer for reading-retrieval answers, an HTTP service,
and a CLI.
"""

__version__ = "0.1.0"

from .annotator import (
    AnnotationResult,
    PromptMode,
    PromptSpec,
    annotate,
    build_custom_prompt,
    build_default_prompt,
    offline_annotate,
)
from .bionic import BionicParams, bionic_format, bold_prefix_len
from .errors import (
    AuthError,
    EmptyCategories,
    EmptyInput,
    LarfError,
    NoScoreFound,
    OverlapError,
    RangeError,
    ScoreOutOfRange,
    TransportError,
)
from .joblog import JobKind, JobLog, JobRecord, JobStatus
from .llm import ChatClient, HttpChatClient, LLMConfig
from .markup import (
    DiffEntry,
    ParsedMarkup,
    VerificationReport,
    emit_markup,
    parse_markup,
    verify_preservation,
    verify_text,
)
from .model import (
    AnnotatedDocument,
    AnnotationKind,
    AnnotationSpan,
    apply_annotations,
    normalize,
    strip_annotations,
)
from .render import RenderStyle, Theme, render_html, render_terminal, strip_ansi
from .scorer import ScoreResult, build_rater_prompt, parse_score, rater_prompt_template, score
from .service import create_app

__all__ = [
    "__version__",
    "AnnotationKind",
    "AnnotationSpan",
    "AnnotatedDocument",
    "normalize",
    "strip_annotations",
    "apply_annotations",
    "ParsedMarkup",
    "VerificationReport",
    "DiffEntry",
    "parse_markup",
    "emit_markup",
    "verify_preservation",
    "verify_text",
    "BionicParams",
    "bold_prefix_len",
    "bionic_format",
    "PromptMode",
    "PromptSpec",
    "AnnotationResult",
    "build_default_prompt",
    "build_custom_prompt",
    "annotate",
    "offline_annotate",
    "LLMConfig",
    "ChatClient",
    "HttpChatClient",
    "RenderStyle",
    "Theme",
    "render_html",
    "render_terminal",
    "strip_ansi",
    "ScoreResult",
    "rater_prompt_template",
    "build_rater_prompt",
    "parse_score",
    "score",
    "JobKind",
    "JobStatus",
    "JobRecord",
    "JobLog",
    "create_app",
    "LarfError",
    "RangeError",
    "OverlapError",
    "EmptyInput",
    "EmptyCategories",
    "NoScoreFound",
    "ScoreOutOfRange",
    "TransportError",
    "AuthError",
]
