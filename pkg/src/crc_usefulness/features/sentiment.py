"""Lexicon-averaged polarity and subjectivity.

Scores average the (polarity, subjectivity) of every lexicon term found. A
preceding intensifier scales the term; a negation within the two previous
tokens multiplies its polarity by -0.5.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

INTENSIFIERS = {"very": 1.3, "really": 1.3, "extremely": 1.5, "quite": 1.1, "too": 1.2,
                "so": 1.2, "super": 1.4, "pretty": 1.1, "totally": 1.3, "absolutely": 1.4}
NEGATIONS = frozenset({"not", "no", "never", "n't", "without", "nothing", "neither", "nor"})


@lru_cache(maxsize=None)
def sentiment_lexicon() -> dict[str, tuple[float, float]]:
    text = resources.files(__package__).joinpath("data").joinpath("sentiment.tsv").read_text(encoding="utf-8")
    lex = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        term, pol, subj = line.split("\t")
        lex[term] = (float(pol), float(subj))
    return lex


def _negated(tokens: list[str], i: int) -> bool:
    for t in tokens[max(0, i - 2):i]:
        if t in NEGATIONS or t.endswith("n't"):
            return True
    return False


def polarity_subjectivity(tokens) -> tuple[float, float]:
    lex = sentiment_lexicon()
    toks = [t.lower() for t in tokens]
    pols, subjs = [], []
    for i, t in enumerate(toks):
        if t not in lex or t in INTENSIFIERS:
            continue
        p, s = lex[t]
        if i > 0 and toks[i - 1] in INTENSIFIERS:
            k = INTENSIFIERS[toks[i - 1]]
            p, s = p * k, s * k
        if _negated(toks, i):
            p *= -0.5
        pols.append(max(-1.0, min(1.0, p)))
        subjs.append(max(0.0, min(1.0, s)))
    if not pols:
        return 0.0, 0.0
    polarity = max(-1.0, min(1.0, sum(pols) / len(pols)))
    subjectivity = max(0.0, min(1.0, sum(subjs) / len(subjs)))
    return polarity, subjectivity
