"""Turns raw GitHub comment markdown into classifier-ready token lines.

Code spans, URLs, @-mentions, and quoted spans collapse to uppercase
placeholder tokens; the result is split on newlines, normalized, and run
through a stop-word filter. Everything here is a pure function of
(input, config), so callers may parallelize freely.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

DEFAULT_MENTION_TOKEN = "SCREEN_NAME"
DEFAULT_URL_TOKEN = "URL"
DEFAULT_QUOTE_TOKEN = "QUOTE"
DEFAULT_CODE_TOKEN = "CODE"

# Replacement precedence is code > url > mention > quote: each stage runs
# over the whole body before the next, so earlier replacements mask their
# contents from later rules.
_FENCED_CODE_RE = re.compile(r"```.*?(?:```|\Z)", re.DOTALL)
_DOUBLE_TICK_RE = re.compile(r"``[^`]*``")
_INLINE_CODE_RE = re.compile(r"`[^`\n]*`")
# An unterminated backtick still starts a code string; consume to whitespace
# so no backtick ever survives.
_DANGLING_TICK_RE = re.compile(r"`\S*")
# \S* not \S+: a bare scheme with nothing after it is still consumed, so the
# scheme substring never survives into the output.
_URL_RE = re.compile(r"https?://\S*", re.IGNORECASE)
# GitHub-login shape: 1-39 chars of [A-Za-z0-9-]; the preceding char must not
# be a word char (emails stay intact) and the name must not continue with a
# word char (so "@SCREEN_NAME" is not half-matched).
_MENTION_RE = re.compile(r"(?<!\w)@[A-Za-z0-9-]{1,39}(?![\w-])")
# Quoted spans never cross lines; the opening quote must not sit inside a
# word, which is what keeps apostrophes like "i've" alive.
_DQUOTE_RE = re.compile(r'(?<!\w)"[^"\n]*"')
_SQUOTE_RE = re.compile(r"(?<!\w)'[^'\n]*'")

# Edge punctuation is stripped from tokens during normalization, except these
# chars, which carry meaning in issue text (paths, "#123" refs, snake_case).
_EDGE_KEEP = frozenset("/#_")


@dataclass(frozen=True)
class PrepConfig:
    """Immutable preprocessing configuration."""

    stop_words: frozenset[str]
    custom_stop_words: frozenset[str] = frozenset()
    mention_token: str = DEFAULT_MENTION_TOKEN
    url_token: str = DEFAULT_URL_TOKEN
    quote_token: str = DEFAULT_QUOTE_TOKEN
    code_token: str = DEFAULT_CODE_TOKEN

    def __post_init__(self):
        for name, token in (
            ("mention_token", self.mention_token),
            ("url_token", self.url_token),
            ("quote_token", self.quote_token),
            ("code_token", self.code_token),
        ):
            if not token or token != token.upper():
                raise ValueError(f"{name} must be a non-empty uppercase string, got {token!r}")
            # Verbatim check: stop lists are lowercase words, so "code" in the
            # stops is fine — the removal step exempts placeholder tokens.
            if token in self.stop_words or token in self.custom_stop_words:
                raise ValueError(f"{name} {token!r} collides with a stop word")

    @property
    def placeholders(self) -> frozenset[str]:
        return frozenset((self.mention_token, self.url_token, self.quote_token, self.code_token))

    @property
    def all_stop_words(self) -> frozenset[str]:
        return self.stop_words | self.custom_stop_words

    @classmethod
    def default(cls, custom_stop_words: frozenset[str] = frozenset()) -> "PrepConfig":
        """Config backed by the vendored English stop-word list."""
        return cls(stop_words=default_stop_words(), custom_stop_words=frozenset(custom_stop_words))


@dataclass(frozen=True)
class ProcessedLine:
    """One cleaned, tokenized comment line ready for classification."""

    issue_id: int
    comment_id: int
    line_index: int
    tokens: tuple[str, ...]
    raw_line: str

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("ProcessedLine requires at least one token")

    @property
    def rendered(self) -> str:
        return " ".join(self.tokens)


def load_stop_words(path: str | Path) -> frozenset[str]:
    """Read a stop-word file: one lowercase word per line, `#` comments allowed."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        word = line.strip()
        if not word or word.startswith("#"):
            continue
        words.add(word.lower())
    return frozenset(words)


@lru_cache(maxsize=1)
def default_stop_words() -> frozenset[str]:
    """The vendored English stop-word list shipped with the package."""
    text = resources.files("issuesift").joinpath("data/stopwords_en.txt").read_text("utf-8")
    words = set()
    for line in text.splitlines():
        word = line.strip()
        if word and not word.startswith("#"):
            words.add(word.lower())
    return frozenset(words)


def _replace_once(text: str, config: PrepConfig) -> str:
    text = _FENCED_CODE_RE.sub(config.code_token, text)
    text = _DOUBLE_TICK_RE.sub(config.code_token, text)
    text = _INLINE_CODE_RE.sub(config.code_token, text)
    text = _DANGLING_TICK_RE.sub(config.code_token, text)
    text = _URL_RE.sub(config.url_token, text)
    text = _MENTION_RE.sub(config.mention_token, text)
    text = _DQUOTE_RE.sub(config.quote_token, text)
    text = _SQUOTE_RE.sub(config.quote_token, text)
    return text


def replace_tokens(body: str, config: PrepConfig | None = None) -> str:
    """Collapse code spans, URLs, mentions, and quoted spans to placeholders.

    The rule set is re-applied until the text stops changing (at most a couple
    of passes): a late-stage replacement can leave an earlier-stage pattern
    exposed, e.g. quote replacement in "@'bob'" yields "@QUOTE", which is a
    mention-shaped string and must itself be replaced. Iterating to the fixed
    point makes the whole operation idempotent.
    """
    config = config or PrepConfig.default()
    text = body
    for _ in range(4):
        replaced = _replace_once(text, config)
        if replaced == text:
            break
        text = replaced
    return text


def split_lines(tokenized_body: str) -> list[str]:
    """Split on newlines, strip carriage returns, drop blank lines."""
    lines = []
    for raw in tokenized_body.split("\n"):
        line = raw.replace("\r", "").strip()
        if line:
            lines.append(line)
    return lines


def _strip_edges(token: str) -> str:
    start, end = 0, len(token)
    while start < end and not token[start].isalnum() and token[start] not in _EDGE_KEEP:
        start += 1
    while end > start and not token[end - 1].isalnum() and token[end - 1] not in _EDGE_KEEP:
        end -= 1
    return token[start:end]


def normalize(line: str, config: PrepConfig | None = None) -> list[str]:
    """Whitespace-split and lowercase a line, stripping edge punctuation.

    Interior apostrophes, periods, `/`, `#`, and `_` survive, so tokens like
    "tf.function", "don't", and "issues/27120" come through intact.
    Placeholder tokens are kept verbatim.
    """
    config = config or PrepConfig.default()
    placeholders = config.placeholders
    out = []
    for token in line.split():
        core = _strip_edges(token)
        if not core:
            continue
        out.append(core if core in placeholders else core.lower())
    return out


def remove_stop_words(tokens: list[str], config: PrepConfig) -> list[str]:
    """Drop tokens on the configured stop lists; placeholders are never dropped."""
    stops = config.all_stop_words
    placeholders = config.placeholders
    return [t for t in tokens if t in placeholders or t.lower() not in stops]


def preprocess_comment(comment, config: PrepConfig | None = None) -> list[ProcessedLine]:
    """Full cleaning pipeline for one raw comment.

    Runs replace_tokens, splits into lines, normalizes and stop-filters each
    line, and drops lines left without tokens. Surviving lines are numbered
    0..n-1 in their original order.
    """
    config = config or PrepConfig.default()
    lines = []
    for raw_line in split_lines(replace_tokens(comment.body, config)):
        tokens = remove_stop_words(normalize(raw_line, config), config)
        if not tokens:
            continue
        lines.append(
            ProcessedLine(
                issue_id=comment.issue_id,
                comment_id=comment.comment_id,
                line_index=len(lines),
                tokens=tuple(tokens),
                raw_line=raw_line,
            )
        )
    return lines
