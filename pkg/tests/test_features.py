import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crc_usefulness.corpus import ReviewComment
from crc_usefulness.exceptions import DataError, FormatError, SchemaError
from crc_usefulness.features import (
    COMPUTED,
    FEATURE_NAMES,
    INGESTED,
    FeatureExtractor,
    FeatureMatrix,
    KeywordLexicon,
    build_feature_matrix,
    count_syllables,
    featurize,
    ingest_external_scores,
    lexicon_density,
    pos_tag,
    readability_fk,
)
from crc_usefulness.features.catalog import COUNTS, FLAGS, UNIT_INTERVAL


def test_catalog_shape():
    assert len(FEATURE_NAMES) == 48 == len(set(FEATURE_NAMES))
    assert len(INGESTED) == 13
    assert len(COMPUTED) == 35
    assert FEATURE_NAMES[0] == "avg-words" and FEATURE_NAMES[-1] == "has-snippet"


def test_question_features():
    fv = featurize("Is this ok?")
    assert fv["num-Qmark"] == 1
    assert fv["question-ratio"] == 1
    assert fv["num-sent"] == 1
    assert fv["word-count"] == 3


def test_sentence_averages():
    fv = featurize("A b. C d.")
    assert fv["num-sent"] == 2
    assert fv["avg-words"] == 2
    assert fv["avg-punct"] == 1
    assert fv["avg-chars"] == 1


def test_stopword_features():
    # "this" and "is" are stopwords; "ok" is not
    fv = featurize("this is ok")
    assert fv["stop-word-ratio"] == pytest.approx(2 / 3)
    assert fv["avg-stopwords"] == 2


def test_code_flags():
    fv = featurize("`x=1` plus getFoo() call")
    assert fv["has-snippet"] == 1 and fv["has-out-snippet"] == 1
    assert featurize("`x = y`")["code-word-ratio"] == 1
    plain = featurize("plain words")
    assert plain["has-snippet"] == plain["has-out-snippet"] == plain["code-word-ratio"] == 0


def test_voice_features():
    assert featurize("perhaps move this, perhaps")["num-tentative"] == 2
    assert featurize("Done")["is-confirmatory"] == 1
    assert featurize("Thank you!")["gratitude"] == 1
    assert featurize("thanks")["gratitude"] == 1
    assert featurize("thankful")["gratitude"] == 0


def test_programming_words():
    assert featurize("make it static and final")["prog-words"] == 2


def test_jargon_density():
    fv = featurize("just abandon it")
    assert fv["density-satd"] == pytest.approx(1 / 3)


def test_empty_prose_gives_zeros():
    fv = featurize("```\ncode only\n```")
    for name in ("word-count", "num-sent", "avg-words", "avg-chars", "rd-text", "stop-word-ratio"):
        assert fv[name] == 0


def test_provenance_without_external():
    fv = featurize(ReviewComment("1", "fine", 1))
    assert len(fv) == 48
    assert all(fv.provenance[n] == "missing" for n in INGESTED)
    assert all(fv.provenance[n] == "computed" for n in COMPUTED)


def test_lexicon_left_out_is_missing():
    fv = featurize("abandon", lexicons={})
    assert fv.provenance["density-satd"] == "missing"


@pytest.mark.parametrize("word,n", [("code", 1), ("table", 2), ("readability", 5), ("a", 1), ("free", 1), ("", 0)])
def test_count_syllables(word, n):
    assert count_syllables(word) == n


def test_readability_formula():
    # 4 words, 1 sentence, 5 syllables ("the" 1, "cat" 1, "sat" 1, "happily" 3 → 6)
    text = "The cat sat happily."
    expected = 0.39 * 4 / 1 + 11.8 * 6 / 4 - 15.59
    assert readability_fk(text) == pytest.approx(expected)
    assert readability_fk("") == 0.0


def test_pos_tagger_coarse_tags():
    tags = pos_tag(["Please", "rename", "the", "broken", "variable", "quickly", "."])
    assert tags == ["INTJ", "VERB", "DET", "ADJ", "NOUN", "ADV", "PUNCT"]


def test_lexicon_modes():
    lex = KeywordLexicon("t", ("technical debt", "hack"))
    # bigram (technical, debt) counts once more than its two content unigrams
    assert lexicon_density(["technical", "debt", "here"], lex) == 1
    assert lexicon_density(["a", "hack"], lex) == 0.5
    only_uni = KeywordLexicon("t", ("hack",), frozenset({"unigram"}))
    assert lexicon_density(["hacks"], only_uni) == 0
    lemma = KeywordLexicon("t", ("hack",), frozenset({"lemmatized-unigram-no-stopword"}))
    assert lexicon_density(["hacks"], lemma) == 1


def test_external_scores(tmp_path):
    p = tmp_path / "ext.csv"
    p.write_text("comment_id,tone,cr-senti\nc1,2,0.5\nc2,,-1\n")
    ext = ingest_external_scores(p)
    assert ext.get("c1") == {"tone": 2.0, "cr-senti": 0.5}
    assert ext.get("c2") == {"cr-senti": -1.0}
    fv = featurize(ReviewComment("c1", "ok", 1), ext=ext)
    assert fv["tone"] == 2 and fv.provenance["tone"] == "ingested"
    assert fv.provenance["is-toxic"] == "missing"


@pytest.mark.parametrize(
    "content,exc,match",
    [
        ("id,tone\n1,1\n", SchemaError, "comment_id"),
        ("comment_id,loudness\n1,1\n", SchemaError, "loudness"),
        ("comment_id,tone\n1,loud\n", DataError, "row 1"),
        ("comment_id,tone\n1,1\n2,5\n", DataError, "row 2"),
        ("comment_id,cr-senti\n1,1.5\n", DataError, "out of range"),
    ],
)
def test_external_score_errors(tmp_path, content, exc, match):
    p = tmp_path / "ext.csv"
    p.write_text(content)
    with pytest.raises(exc, match=match):
        ingest_external_scores(p)


def _comments():
    return [ReviewComment(f"c{i}", t, i % 2) for i, t in enumerate(["Why?", "Please rename `x`.", "ok", "fix getFoo()"])]


def test_feature_matrix_csv_round_trip(tmp_path):
    fm = build_feature_matrix(_comments())
    assert fm.values.shape == (4, 48)
    fm.write_csv(tmp_path / "f.csv", header="# artifact=features")
    back = FeatureMatrix.read_csv(tmp_path / "f.csv")
    assert back.ids == fm.ids
    np.testing.assert_array_equal(back.labels, fm.labels)
    np.testing.assert_allclose(back.values, fm.values)
    assert (back.provenance == fm.provenance).all()
    assert set(fm.available_features()) == set(COMPUTED)


def test_feature_matrix_bad_header(tmp_path):
    p = tmp_path / "f.csv"
    p.write_text("id,label,nonsense\n")
    with pytest.raises(FormatError):
        FeatureMatrix.read_csv(p)


def test_feature_extractor_matches_featurize():
    docs = _comments()
    names = ["num-Qmark", "has-snippet", "prog-words"]
    X = FeatureExtractor(names).fit().transform(docs)
    expected = np.array([[featurize(c)[n] for n in names] for c in docs])
    np.testing.assert_array_equal(X, expected)
    assert list(FeatureExtractor(names).fit().get_feature_names_out()) == names


def test_feature_extractor_uses_precomputed_rows():
    docs = _comments()
    fm = build_feature_matrix(docs)
    fm.values[:, FEATURE_NAMES.index("num-Qmark")] = 7
    X = FeatureExtractor(["num-Qmark"], precomputed=fm).fit().transform(docs)
    assert (X == 7).all()


prose = st.text(alphabet=st.sampled_from(list("abcdefg hij.?!,`()_XY\n")), max_size=60)


@settings(max_examples=150, deadline=None)
@given(prose)
def test_feature_ranges(raw):
    fv = featurize(raw)
    for name in UNIT_INTERVAL:
        assert 0.0 <= fv[name] <= 1.0, name
    for name in COUNTS:
        assert fv[name] >= 0 and float(fv[name]).is_integer(), name
    for name in FLAGS:
        assert fv[name] in (0.0, 1.0), name
    assert -1.0 <= fv["polarity"] <= 1.0
    assert np.isfinite(fv.as_array()).all()
