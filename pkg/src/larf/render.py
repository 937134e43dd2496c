"""Render annotated documents to standalone HTML or a terminal preview."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from .markup import emit_markup
from .model import AnnotatedDocument, AnnotationKind

__all__ = ["Theme", "RenderStyle", "render_html", "render_terminal", "strip_ansi", "HIGHLIGHT_STYLES"]

# Named highlight styles: (light background, dark background).
HIGHLIGHT_STYLES = {
    "yellow": ("#ffe066", "#8d7b00"),
    "green": ("#b2f2bb", "#2b5e34"),
    "blue": ("#a5d8ff", "#1c4f78"),
    "pink": ("#fcc2d7", "#7d2a4d"),
}


class Theme(enum.Enum):
    LIGHT = "light"
    DARK = "dark"


@dataclass(frozen=True)
class RenderStyle:
    font_scale: float = 1.0
    letter_spacing: float = 0.0  # em
    line_spacing: float = 1.5
    highlight_token: str = "yellow"
    theme: Theme = Theme.LIGHT

    def __post_init__(self) -> None:
        if self.font_scale <= 0:
            raise ValueError("font_scale must be > 0")
        if self.letter_spacing < 0:
            raise ValueError("letter_spacing must be >= 0")
        if self.line_spacing < 1:
            raise ValueError("line_spacing must be >= 1")
        if self.highlight_token not in HIGHLIGHT_STYLES:
            raise ValueError(
                f"unknown highlight style {self.highlight_token!r}; "
                f"choose one of {sorted(HIGHLIGHT_STYLES)}"
            )


_HTML_SHELL = """<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<meta name="viewport" content="width=device-width, initial-scale=1">
<title>Reading view</title>
<style>
{stylesheet}
</style>
</head>
<body>
<main>
{body}
</main>
</body>
</html>
"""


def _stylesheet(style: RenderStyle) -> str:
    light = style.theme is Theme.LIGHT
    background = "#ffffff" if light else "#1e1e1e"
    foreground = "#1a1a1a" if light else "#e8e8e8"
    highlight = HIGHLIGHT_STYLES[style.highlight_token][0 if light else 1]
    return "\n".join(
        [
            "body {",
            f"  background: {background};",
            f"  color: {foreground};",
            f"  font-size: {16 * style.font_scale:g}px;",
            f"  letter-spacing: {style.letter_spacing:g}em;",
            f"  line-height: {style.line_spacing:g};",
            '  font-family: "Atkinson Hyperlegible", "Segoe UI", Verdana, sans-serif;',
            "  margin: 2rem auto;",
            "  max-width: 42rem;",
            "  padding: 0 1rem;",
            "}",
            "strong { font-weight: 700; }",
            f"mark {{ background: {highlight}; color: inherit; padding: 0 0.1em; }}",
            "u { text-decoration: underline; text-underline-offset: 0.2em; }",
            "p { margin: 0 0 1em 0; }",
        ]
    )


def render_html(doc: AnnotatedDocument, style: RenderStyle | None = None) -> str:
    """A complete, self-contained HTML page for the document.

    The <main> element holds exactly ``emit_markup(doc)``, so the visible
    text always round-trips to ``doc.text`` under normalization.
    """
    style = style or RenderStyle()
    return _HTML_SHELL.format(stylesheet=_stylesheet(style), body=emit_markup(doc))


_ANSI_CODES = {
    AnnotationKind.EMPHASIS: ("\x1b[1m", "\x1b[22m"),
    AnnotationKind.HIGHLIGHT: ("\x1b[7m", "\x1b[27m"),
    AnnotationKind.UNDERLINE: ("\x1b[4m", "\x1b[24m"),
}

_ANSI_RE = re.compile(r"\x1b\[[0-9;]*m")


def render_terminal(doc: AnnotatedDocument) -> str:
    """Terminal preview: bold / inverse / underline escape sequences around
    the spans; stripping escapes yields the text unchanged."""
    opens: dict[int, list[str]] = {}
    closes: dict[int, list[str]] = {}
    for span in doc.spans:  # outer-first order, so closers prepend (inner first)
        on, off = _ANSI_CODES[span.kind]
        opens.setdefault(span.start, []).append(on)
        closes.setdefault(span.end, []).insert(0, off)

    out: list[str] = []
    last = 0
    for offset in sorted(set(opens) | set(closes)):
        out.append(doc.text[last:offset])
        out.extend(closes.get(offset, []))
        out.extend(opens.get(offset, []))
        last = offset
    out.append(doc.text[last:])
    return "".join(out)


def strip_ansi(text: str) -> str:
    return _ANSI_RE.sub("", text)
