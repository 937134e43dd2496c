"""Retrieval-answer rating: rubric prompt, LLM call, 0-10 score parsing."""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from .errors import EmptyInput, NoScoreFound, ScoreOutOfRange
from .llm import ChatClient, HttpChatClient, LLMConfig

__all__ = [
    "ScoreResult",
    "rater_prompt_template",
    "build_rater_prompt",
    "parse_score",
    "score",
    "ARTICLE_PLACEHOLDER",
]

ARTICLE_PLACEHOLDER = "ORIGINAL ARTICLE"

_SCORE_RE = re.compile(r"score\s*:\s*(-?\d+)", re.IGNORECASE)


@dataclass(frozen=True)
class ScoreResult:
    score: int
    rationale: str
    raw_reply: str = ""

    def __post_init__(self) -> None:
        if not 0 <= self.score <= 10:
            raise ScoreOutOfRange(f"score {self.score} outside [0, 10]")

    def to_json(self) -> dict:
        return {"score": self.score, "rationale": self.rationale, "raw_reply": self.raw_reply}


def rater_prompt_template() -> str:
    """The rubric prompt with the article placeholder still in place."""
    return resources.files("larf").joinpath("data", "rater_prompt.txt").read_text(encoding="utf-8")


def build_rater_prompt(article: str, answer: str) -> str:
    """Rubric prompt with the article spliced between the delimiter lines
    and the answer to score appended after the worked example."""
    if not article.strip() or not answer.strip():
        raise EmptyInput("rater prompt needs a nonempty article and answer")
    prompt = rater_prompt_template().replace(ARTICLE_PLACEHOLDER, article, 1)
    return prompt + f"\nNow here is the entrance you need to score:\nThe entrance is: {answer}\n"


def parse_score(reply: str) -> ScoreResult:
    """Extract the first integer after a "Score:" marker; the rest of the
    reply is the rationale. Out-of-range values are rejected, not clamped."""
    match = _SCORE_RE.search(reply)
    if match is None:
        raise NoScoreFound("no \"Score:\" marker in reply")
    value = int(match.group(1))
    if not 0 <= value <= 10:
        raise ScoreOutOfRange(f"score {value} outside [0, 10]")
    return ScoreResult(score=value, rationale=reply[match.end():].strip(), raw_reply=reply)


def score(
    article: str,
    answer: str,
    config: LLMConfig | None = None,
    *,
    client: ChatClient | None = None,
    max_tokens: int = 1024,
) -> ScoreResult:
    """Rate one answer against the article through the chat endpoint."""
    prompt = build_rater_prompt(article, answer)
    if client is None:
        client = HttpChatClient(config or LLMConfig.from_env())
    reply = client.complete(
        [{"role": "user", "content": prompt}], temperature=0.0, max_tokens=max_tokens
    )
    return parse_score(reply)
