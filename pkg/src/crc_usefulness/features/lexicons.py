"""Keyword lexicons and jargon density."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from ..textmodels.normalize import lemmatize, parse_word_list, stopwords

MODES = frozenset({"unigram", "unigram-no-stopword", "lemmatized-unigram-no-stopword", "bigram"})

# feature name -> bundled lexicon file
JARGON_LEXICONS = {
    "density-refact-solution": "refactor_solution",
    "density-secdev": "security",
    "density-refact-problem": "refactor_problem",
    "density-msoft-nu": "msoft_not_useful",
    "density-satd": "satd",
    "density-msoft-u": "msoft_useful",
    "density-refact-xerox": "refactor_xerox",
}


@dataclass(frozen=True)
class KeywordLexicon:
    """A keyword list plus the matching modes used to score it.

    Single-word entries match in ``unigram`` mode. In the two no-stopword modes
    every non-stopword word of every entry is a unigram term, compared either
    verbatim or by lemma. Entries of two or more words also contribute their
    adjacent word pairs (pairs made only of stopwords are skipped) to ``bigram``.
    """

    name: str
    terms: tuple[str, ...]
    matching: frozenset[str] = MODES

    def __post_init__(self):
        terms = tuple(dict.fromkeys(t.strip().lower() for t in self.terms if t.strip()))
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "matching", frozenset(self.matching))
        unknown = self.matching - MODES
        if unknown:
            raise ValueError(f"unknown matching modes {sorted(unknown)}")
        sw = stopwords("english-nltk")
        words = [t.split() for t in terms]
        object.__setattr__(self, "_unigrams", frozenset(w[0] for w in words if len(w) == 1))
        content = frozenset(x for w in words for x in w if x not in sw)
        object.__setattr__(self, "_content", content)
        object.__setattr__(self, "_lemmas", frozenset(lemmatize(x) for x in content))
        object.__setattr__(
            self,
            "_bigrams",
            frozenset(
                (a, b)
                for w in words
                if len(w) >= 2
                for a, b in zip(w, w[1:])
                if not (a in sw and b in sw)
            ),
        )


def load_lexicon(path, name: str | None = None, matching=MODES) -> KeywordLexicon:
    path = Path(path)
    terms = parse_word_list(path.read_text(encoding="utf-8"))
    return KeywordLexicon(name or path.stem, tuple(terms), frozenset(matching))


def bundled_lexicon(file_stem: str, matching=MODES) -> KeywordLexicon:
    text = resources.files(__package__).joinpath("data").joinpath(f"{file_stem}.txt").read_text(encoding="utf-8")
    return KeywordLexicon(file_stem, tuple(parse_word_list(text)), frozenset(matching))


@lru_cache(maxsize=1)
def _default_lexicons() -> tuple[tuple[str, KeywordLexicon], ...]:
    return tuple((feature, bundled_lexicon(stem)) for feature, stem in JARGON_LEXICONS.items())


def default_lexicons() -> dict[str, KeywordLexicon]:
    """The seven bundled jargon lexicons keyed by feature name."""
    return dict(_default_lexicons())


def lexicon_density(tokens, lex: KeywordLexicon) -> float:
    """Matched term occurrences per token, clipped to 1.

    A token position counts at most once across the unigram modes; each
    matching adjacent pair counts once more.
    """
    tokens = list(tokens)
    if not tokens or not lex.terms:
        return 0.0
    sw = stopwords("english-nltk")
    modes = lex.matching
    hits = 0
    for tok in tokens:
        if "unigram" in modes and tok in lex._unigrams:
            hits += 1
        elif tok not in sw and (
            ("unigram-no-stopword" in modes and tok in lex._content)
            or ("lemmatized-unigram-no-stopword" in modes and lemmatize(tok) in lex._lemmas)
        ):
            hits += 1
    if "bigram" in modes:
        hits += sum((a, b) in lex._bigrams for a, b in zip(tokens, tokens[1:]))
    return min(1.0, hits / max(1, len(tokens)))
