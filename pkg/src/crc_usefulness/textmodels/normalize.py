"""Stopword lists, stemming and lemmatization shared by BoW and the jargon features."""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources

from nltk.stem import PorterStemmer

STOPWORD_SETS = ("none", "english-nltk", "english-scikit", "programming-py", "programming-nonpy")

_LIST_FILES = {
    "english-nltk": ["english_nltk"],
    "english-scikit": ["english_scikit"],
    # "sw-py keywords": python reserved words + the curated programming terms
    "programming-py": ["python_reserved", "others", "english_nltk"],
    # "sw-nonpy keywords": the "all stop" union of the c/c++/java/swift lists
    "programming-nonpy": [
        "c_reserved",
        "cpp_reserved",
        "java_reserved",
        "swift_reserved",
        "others",
        "english_nltk",
    ],
}


def read_word_list(name: str) -> list[str]:
    """Read a bundled one-term-per-line list; ``#`` starts a comment line."""
    text = resources.files(__package__).joinpath("data").joinpath(f"{name}.txt").read_text(encoding="utf-8")
    return parse_word_list(text)


def parse_word_list(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        if not line.strip() or line.lstrip().startswith("# ") or line.strip() == "#":
            continue
        out.append(line.strip())
    return out


@lru_cache(maxsize=None)
def stopwords(name: str) -> frozenset[str]:
    if name in (None, "none"):
        return frozenset()
    if name not in _LIST_FILES:
        raise ValueError(f"unknown stopword set {name!r}; expected one of {STOPWORD_SETS}")
    words: set[str] = set()
    for f in _LIST_FILES[name]:
        words.update(w.lower() for w in read_word_list(f))
    return frozenset(words)


@lru_cache(maxsize=None)
def programming_keywords() -> frozenset[str]:
    """c + c++ + java + swift reserved words + curated terms, minus English stopwords."""
    words: set[str] = set()
    for f in ("c_reserved", "cpp_reserved", "java_reserved", "swift_reserved", "others"):
        words.update(w.lower() for w in read_word_list(f))
    return frozenset(words - stopwords("english-nltk"))


_porter = PorterStemmer()


@lru_cache(maxsize=65536)
def stem(token: str) -> str:
    return _porter.stem(token)


# Irregular forms seen in review comments. Regular inflections are handled by
# the suffix rules in ``lemmatize``.
_IRREGULAR = {
    "is": "be", "are": "be", "was": "be", "were": "be", "been": "be", "being": "be", "am": "be",
    "has": "have", "had": "have", "having": "have",
    "does": "do", "did": "do", "done": "do", "doing": "do",
    "went": "go", "gone": "go", "goes": "go",
    "made": "make", "got": "get", "gotten": "get", "took": "take", "taken": "take",
    "saw": "see", "seen": "see", "wrote": "write", "written": "write",
    "ran": "run", "thought": "think", "found": "find", "left": "leave",
    "kept": "keep", "meant": "mean", "put": "put", "set": "set", "read": "read",
    "built": "build", "brought": "bring", "caught": "catch", "chose": "choose",
    "chosen": "choose", "broke": "break", "broken": "break", "gave": "give",
    "given": "give", "knew": "know", "known": "know", "said": "say", "told": "tell",
    "sent": "send", "spent": "spend", "understood": "understand", "felt": "feel",
    "children": "child", "men": "man", "women": "woman", "people": "person",
    "indices": "index", "vertices": "vertex", "matrices": "matrix", "analyses": "analysis",
    "data": "data", "criteria": "criterion", "feet": "foot", "mice": "mouse",
    "using": "use", "used": "use", "uses": "use",
    "better": "good", "best": "good", "worse": "bad", "worst": "bad",
}
_KEEP = {"this", "was", "has", "is", "its", "us", "thus", "bus", "status", "alias",
         "analysis", "basis", "axis", "yes", "less", "unless", "process", "access",
         "class", "pass", "always", "perhaps", "news", "series", "species", "ios", "os"}
_SILENT_E = re.compile(r"(?:^|[^aeiou])[aeiou][cdgkmtvz]$")


@lru_cache(maxsize=65536)
def lemmatize(token: str) -> str:
    """Dictionary-free lemmatizer: irregular table, then plural/-ing/-ed rules."""
    w = token.lower()
    if w in _IRREGULAR:
        return _IRREGULAR[w]
    if w in _KEEP or len(w) <= 3 or not w.isalpha():
        return w
    if w.endswith("ies") and len(w) > 4:
        return w[:-3] + "y"
    if w.endswith(("sses", "xes", "ches", "shes", "zzes")):
        return w[:-2]
    if w.endswith("s") and not w.endswith(("ss", "us", "is")):
        return w[:-1]
    for suffix in ("ing", "ed"):
        if w.endswith(suffix) and len(w) - len(suffix) >= 3:
            base = w[: -len(suffix)]
            if not re.search(r"[aeiouy]", base):
                return w
            if len(base) > 3 and base[-1] == base[-2] and base[-1] not in "lsz":
                return base[:-1]  # stopped -> stop
            if base.endswith("i") and suffix == "ed":
                return base[:-1] + "y"  # copied -> copy
            if _SILENT_E.search(base):
                return base + "e"  # renamed -> rename, making -> make
            return base
    return w
