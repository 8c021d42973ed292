"""Comment variants: code extraction, text cleaning and tokenization.

Every downstream consumer reads one of six views of a comment:

    comment      the raw text
    code         extracted code spans, space-joined
    text         comment minus code spans, @mentions, #issues and emails
    text_clean   text minus URLs; markdown links keep their anchor text
    text_tokens  tokenize_text(text_clean)
    code_tokens  split_identifiers(code)
"""

from __future__ import annotations

import json
import re
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Iterable

# Code span patterns, applied in this priority order. Each later pattern runs on
# a copy of the comment where earlier spans are masked with NUL characters, so
# spans never overlap.
TRIPLE_BACKTICK = re.compile(r"`{3}(.*?)`{3}", re.S)
SINGLE_BACKTICK = re.compile(r"`([^\n\x00]*?)`")
SIGNATURE = re.compile(r"(?<![\w$.])[a-zA-Z][a-zA-Z0-9_.]*\([a-zA-Z0-9_, ]*\)")
IDENTIFIER = re.compile(
    r"(?<![\w$])(?:[a-z_$0-9A-Z]+[A-Z]+[a-z_0-9]+"  # camelCase / PascalCase
    r"|_*[A-Za-z$][\w$]*_[\w$]+)(?![\w$])"  # snake_case
)
_PATTERNS = (
    ("backtick-3", TRIPLE_BACKTICK),
    ("backtick-1", SINGLE_BACKTICK),
    ("signature", SIGNATURE),
    ("identifier", IDENTIFIER),
)

MENTION = re.compile(r"(?<![\w.])@\w+")
ISSUE = re.compile(r"(?<![\w&])#\d+\b")
EMAIL = re.compile(r"[\w.+-]+@[\w-]+(?:\.[\w-]+)+")
MARKDOWN_LINK = re.compile(r"!?\[([^\]\n]*)\]\(([^)\s]*)\)")
URL = re.compile(r"(?:https?://|www\.)\S+?(?=[.,;:!?)\]'\"]*(?:\s|$))")

_GAP = "\x01"


@dataclass(frozen=True)
class CodeSpan:
    kind: str
    span: tuple[int, int]  # offsets of the whole match, delimiters included
    content: str


@dataclass(frozen=True)
class CommentVariants:
    comment: str
    code: str
    text: str
    text_clean: str
    text_tokens: tuple[str, ...]
    code_tokens: tuple[str, ...]
    spans: tuple[CodeSpan, ...] = ()

    def to_dict(self) -> dict:
        d = asdict(self)
        del d["spans"]
        d["text_tokens"] = list(self.text_tokens)
        d["code_tokens"] = list(self.code_tokens)
        return d

    @property
    def has_backtick(self) -> bool:
        return any(s.kind.startswith("backtick") for s in self.spans)

    @property
    def has_bare_code(self) -> bool:
        return any(s.kind in ("signature", "identifier") for s in self.spans)


def extract_code_spans(raw: str) -> list[CodeSpan]:
    masked = raw
    spans: list[CodeSpan] = []
    for kind, pattern in _PATTERNS:
        found = []
        for m in pattern.finditer(masked):
            group = 1 if pattern.groups else 0
            found.append(CodeSpan(kind, m.span(), raw[m.start(group):m.end(group)]))
        for s in found:
            a, b = s.span
            masked = masked[:a] + "\x00" * (b - a) + masked[b:]
        spans.extend(found)
    spans.sort(key=lambda s: s.span)
    return spans


def _cut(text: str, ranges: Iterable[tuple[int, int]], removed: list[str]) -> str:
    out, pos = [], 0
    for a, b in sorted(ranges):
        if a < pos:
            continue
        out.append(text[pos:a])
        removed.append(text[a:b])
        out.append(_GAP)
        pos = b
    out.append(text[pos:])
    return "".join(out)


def _close_gaps(text: str) -> str:
    """Replace each removal site (and the blanks around it) by one space.

    Sites at the start/end of the text or of a line, or right before closing
    punctuation, collapse to nothing, so untouched text keeps its exact bytes.
    """

    def repl(m: re.Match) -> str:
        a, b = m.span()
        at_start = a == 0 or text[a - 1] == "\n"
        at_end = b == len(text) or text[b] in "\n.,;:!?)]"
        return "" if at_start or at_end else " "

    return re.sub(rf"[ \t]*{_GAP}(?:[ \t]*{_GAP})*[ \t]*", repl, text)


def _remove(text: str, pattern: re.Pattern, removed: list[str], keep_group: int | None = None) -> str:
    if keep_group is None:
        return _cut(text, (m.span() for m in pattern.finditer(text)), removed)
    out, pos = [], 0
    for m in pattern.finditer(text):
        out.append(text[pos:m.start()])
        anchor = m.group(keep_group)
        removed.append(text[m.start():m.start(keep_group)] + text[m.end(keep_group):m.end()])
        out.append(f"{_GAP}{anchor}{_GAP}" if anchor else _GAP)
        pos = m.end()
    out.append(text[pos:])
    return "".join(out)


def strip_text(raw: str, spans: list[CodeSpan] | None = None) -> tuple[str, list[str]]:
    """Return the ``text`` variant and the list of removed substrings."""
    spans = extract_code_spans(raw) if spans is None else spans
    removed: list[str] = []
    text = _cut(raw, (s.span for s in spans), removed)
    for pattern in (MENTION, ISSUE, EMAIL):
        text = _remove(text, pattern, removed)
    return _close_gaps(text), removed


def clean_text(text: str) -> str:
    removed: list[str] = []
    text = _remove(text, MARKDOWN_LINK, removed, keep_group=1)
    text = _remove(text, URL, removed)
    return _close_gaps(text)


# ------------------------------------------------------------------------ tokenizers

_EMOTICON = (
    r"(?:[<>]?[:;=][\-o\*']?[\)\]\(\[dDpP/\}\{@\|\\]"
    r"|[\)\]\(\[dDpP/\}\{@\|\\][\-o\*']?[:;=][<>]?"
    r"|<3)"
)
_TOKEN = re.compile(
    "|".join(
        [
            r"(?:https?://|www\.)\S+?(?=[.,;:!?)\]'\"]*(?:\s|$))",
            _EMOTICON,
            r"@\w+",
            r"\#+\w+[\w'\-]*\w+",
            r"[^\W\d_](?:[^\W\d_]|['\-_])+[^\W\d_]",  # words with apostrophes or dashes
            r"[+\-]?\d+[,/.:-]\d+[+\-]?",  # numbers, fractions, decimals
            r"\w+",
            r"\.(?:\s*\.)+",  # ellipsis
            r"\S",
        ]
    )
)


def tokenize_text(text: str) -> list[str]:
    """Tweet-style tokenizer.

    Keeps contractions, emoticons, URLs, @mentions and #tags whole; splits off
    punctuation so that "ok?!" gives ``["ok", "?", "!"]``.
    """
    return _TOKEN.findall(text)


_SUBWORD = re.compile(r"[A-Z]+(?=[A-Z][a-z])|[A-Z]?[a-z]+|[A-Z]+|\d+|[^\W\d_A-Za-z]+")


def split_identifiers(code: str) -> list[str]:
    """Split identifiers on underscores, case changes and letter/digit edges.

    >>> split_identifiers("getHTTPResponse2x")
    ['get', 'http', 'response', '2', 'x']
    """
    return [t.lower() for t in _SUBWORD.findall(code)]


_SENT_BREAK = re.compile(r"(?<=[.!?])[ \t]+|[ \t]*\n\s*")


def split_sentences(text: str) -> list[str]:
    return [s.strip() for s in _SENT_BREAK.split(text) if s.strip()]


# -------------------------------------------------------------------------- variants


def derive_variants(raw: str) -> CommentVariants:
    spans = extract_code_spans(raw)
    code = " ".join(s.content for s in spans if s.content.strip())
    text, _ = strip_text(raw, spans)
    text_clean = clean_text(text)
    return CommentVariants(
        comment=raw,
        code=code,
        text=text,
        text_clean=text_clean,
        text_tokens=tuple(tokenize_text(text_clean)),
        code_tokens=tuple(split_identifiers(code)),
        spans=tuple(spans),
    )


def write_variants_jsonl(ids: Iterable[str], raws: Iterable[str], path, meta: dict | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if meta is not None:
            fh.write(json.dumps({"_meta": meta}, sort_keys=True) + "\n")
        for cid, raw in zip(ids, raws):
            fh.write(json.dumps({"id": cid, **derive_variants(raw).to_dict()}, ensure_ascii=False) + "\n")


@lru_cache(maxsize=32768)
def cached_variants(raw: str) -> CommentVariants:
    """``derive_variants`` memoized; variants are immutable so sharing is safe."""
    return derive_variants(raw)
