"""Lexicon + suffix-rule part-of-speech tagger.

Closed classes come from word lists; open classes fall back on suffix
heuristics and a little left context. Output tags are a coarse universal set.
"""

from __future__ import annotations

import re

NOUN, PROPN, VERB, ADJ, ADV = "NOUN", "PROPN", "VERB", "ADJ", "ADV"
DET, INTJ, PRON, PUNCT, OTHER = "DET", "INTJ", "PRON", "PUNCT", "OTHER"
TAGS = (NOUN, PROPN, VERB, ADJ, ADV, DET, INTJ, PRON, PUNCT, OTHER)


def _words(s: str) -> frozenset[str]:
    return frozenset(s.split())


DETERMINERS = _words(
    "the a an this that these those each every some any no all both either neither "
    "another such what which whatever whichever"
)
PRONOUNS = _words(
    "i me my mine myself you your yours yourself yourselves he him his himself she her "
    "hers herself it its itself we us our ours ourselves they them their theirs themselves "
    "who whom whose something anything everything nothing someone anyone everyone nobody "
    "somebody anybody everybody one ones"
)
POSSESSIVES = _words("my your his her its our their")
INTERJECTIONS = _words(
    "oh ah aha wow hey hi hello ok okay yes yeah yep yup nope hmm hm huh oops ugh uh um "
    "please lol bravo alas whoa meh yay wait cheers nah ouch damn gosh"
)
ADVERBS = _words(
    "not n't never very too also just only really still already always often sometimes "
    "usually here there now then again else maybe perhaps quite rather almost even ever "
    "soon instead otherwise anyway however therefore thus hence yet away back later "
    "well so much more most less least enough once twice together probably definitely "
    "actually basically currently especially exactly finally generally likely simply "
    "today tomorrow yesterday somewhere anywhere everywhere nowhere why how when where"
)
OTHER_WORDS = _words(
    # prepositions, conjunctions, particles, modals
    "of in on at by for with from to into onto upon about above below under over between "
    "among through during before after since until unless than as like without within "
    "across against along around behind beside besides beyond despite inside outside "
    "per via toward towards and or but nor if because while although though whether "
    "can could may might must shall should will would ought 'll 'd"
)
VERBS = _words(
    "be is are was were been being am 's 're 'm have has had having 've do does did "
    "done doing get gets got gotten make makes made use uses used add adds remove removes "
    "fix fixes change changes move moves rename call calls return returns check checks set "
    "need needs think thinks see sees saw look looks want wants try tries keep keeps let "
    "lets put puts take takes took go goes went gone know knows knew mean means meant seem "
    "seems feel consider update delete create replace handle pass run runs ran test write "
    "writes wrote read reads avoid drop split merge prefer suggest agree guess wonder "
    "make say says said tell find found give gives gave show shows come comes came leave "
    "work works break breaks fail fails happen happens allow allows expect expects "
    "understand ensure include includes require requires become becomes belong belongs "
    "refactor extract simplify implement implements define defines import exist exists "
    "throw throws catch catches print log wrap cache store load save close open start stop"
)
NOUN_VERB = _words(
    "fix change call return check set test use need update work break log print cache "
    "store load save start stop import run look guess wonder drop split merge show"
)
ADJECTIVES = _words(
    "good bad new old same different other better best worse worst great nice big small "
    "large little long short high low right wrong sure clear simple easy hard able "
    "possible necessary important correct incorrect true false free full empty whole "
    "certain real main major minor common global local public private default static "
    "optional specific general extra final last first next previous current unused "
    "redundant obvious strange weird odd ugly clean safe unsafe fine ready consistent "
    "inconsistent valid invalid missing separate similar own few many several broken"
)
_LY_NOT_ADV = _words("only family reply apply supply assembly ugly silly friendly likely early july italy fly belly")
_ING_NOT_VERB = _words("string strings thing things something nothing anything everything ring king spring during ceiling")
_SUFFIX_NOUNS = _words(
    "variable variables table tables executable callable iterable observable client clients constant "
    "constants content parent parents event events agent percent intent dependent component components"
)
_ED_NOT_VERB = _words("need feed speed seed bed red shed embed succeed exceed proceed bleed")

_ADJ_SUFFIX = re.compile(r"(?:ous|ful|able|ible|ive|less|ical|ic|ish|ant|ent)$")
_NOUN_SUFFIX = re.compile(r"(?:tion|sion|ment|ness|ity|ance|ence|ism|ist|ship|hood)s?$")
_VERB_SUFFIX = re.compile(r"(?:ize|ise|ify)s?$")
_HAS_ALNUM = re.compile(r"[^\W_]", re.UNICODE)
_NUM = re.compile(r"^[+\-]?\d[\d,./:-]*[+\-]?$")


def _open_class(w: str) -> str:
    if w in _SUFFIX_NOUNS:
        return NOUN
    if w.endswith("ly") and len(w) > 4 and w not in _LY_NOT_ADV:
        return ADV
    if w.endswith("ing") and len(w) > 4 and w not in _ING_NOT_VERB:
        return VERB
    if w.endswith("ed") and len(w) > 3 and w not in _ED_NOT_VERB:
        return VERB
    if _VERB_SUFFIX.search(w):
        return VERB
    if _NOUN_SUFFIX.search(w):
        return NOUN
    if _ADJ_SUFFIX.search(w) and len(w) > 5:
        return ADJ
    return NOUN


def pos_tag(tokens) -> list[str]:
    tags: list[str] = []
    sentence_start = True
    for tok in tokens:
        tag = _tag_one(tok, tags[-1] if tags else None, tokens, sentence_start)
        tags.append(tag)
        sentence_start = tok in {".", "!", "?", "...", ";"}
    return tags


def _tag_one(tok: str, prev: str | None, tokens, sentence_start: bool) -> str:
    if not _HAS_ALNUM.search(tok):
        return PUNCT
    if _NUM.match(tok) or tok[0] in "@#" or "://" in tok:
        return OTHER
    w = tok.lower()
    if w.endswith("n't") and w != "n't":
        return VERB  # don't, isn't, shouldn't...
    if w in PRONOUNS:
        return PRON
    if w in DETERMINERS:
        return DET
    if w in INTERJECTIONS and (sentence_start or prev in (None, PUNCT, INTJ)):
        return INTJ
    if w in OTHER_WORDS:
        return OTHER
    if w in NOUN_VERB:
        return NOUN if prev in (DET, ADJ) else VERB
    if w in VERBS:
        return VERB
    if w in ADJECTIVES:
        return ADJ
    if w in ADVERBS:
        return ADV
    if w in INTERJECTIONS:
        return INTJ
    if tok[0].isupper() and not sentence_start and tok != "I":
        return PROPN
    return _open_class(w)
