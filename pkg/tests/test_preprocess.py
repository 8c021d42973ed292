import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from regex_corpus import CASES

from crc_usefulness.preprocess import (
    derive_variants,
    extract_code_spans,
    split_identifiers,
    split_sentences,
    strip_text,
    tokenize_text,
    write_variants_jsonl,
)


@pytest.mark.parametrize("comment,spans,text,text_clean", CASES)
def test_regex_corpus(comment, spans, text, text_clean):
    assert [(s.kind, s.content) for s in extract_code_spans(comment)] == spans
    assert strip_text(comment)[0] == text
    assert derive_variants(comment).text_clean == text_clean


def test_code_variant_joins_span_contents():
    v = derive_variants("Use `foo()` and barBaz here")
    assert v.code == "foo() barBaz"
    assert v.code_tokens == ("foo", "bar", "baz")
    assert v.has_backtick and v.has_bare_code


def test_removed_substrings_are_reported():
    _, removed = strip_text("ping @bob about #12")
    assert removed == ["@bob", "#12"]


def test_markdown_link_keeps_anchor():
    assert derive_variants("read [the guide](http://x.io/g) first").text_clean == "read the guide first"


@pytest.mark.parametrize(
    "text,tokens",
    [
        ("ok?!", ["ok", "?", "!"]),
        ("don't do that :)", ["don't", "do", "that", ":)"]),
        ("see http://a.b/c.", ["see", "http://a.b/c", "."]),
        ("v1.2 is out...", ["v1", ".", "2", "is", "out", "..."]),
        ("well-known @dev #tag", ["well-known", "@dev", "#tag"]),
        ("3.5 or 1/2", ["3.5", "or", "1/2"]),
    ],
)
def test_tokenizer(text, tokens):
    assert tokenize_text(text) == tokens


@pytest.mark.parametrize(
    "code,parts",
    [
        ("getHTTPResponse2x", ["get", "http", "response", "2", "x"]),
        ("max_items", ["max", "items"]),
        ("XMLParser", ["xml", "parser"]),
        ("a.b(c)", ["a", "b", "c"]),
    ],
)
def test_split_identifiers(code, parts):
    assert split_identifiers(code) == parts


def test_split_sentences():
    assert split_sentences("One. Two? Three!\nFour") == ["One.", "Two?", "Three!", "Four"]
    assert split_sentences("  ") == []


def test_write_variants_jsonl(tmp_path):
    p = tmp_path / "v.jsonl"
    write_variants_jsonl(["x"], ["Use `a`"], p, meta={"artifact": "variants"})
    lines = [json.loads(l) for l in p.read_text().splitlines()]
    assert lines[0] == {"_meta": {"artifact": "variants"}}
    assert lines[1]["id"] == "x" and lines[1]["code"] == "a" and lines[1]["text"] == "Use"
    assert set(lines[1]) == {"id", "comment", "code", "text", "text_clean", "text_tokens", "code_tokens"}


alphabet = st.sampled_from(list("abcXY_ `()@#.:/1 \n") + ["http://", "```", "foo_bar", "getX"])


@settings(max_examples=300, deadline=None)
@given(st.lists(alphabet, max_size=30).map("".join))
def test_span_invariants(raw):
    spans = extract_code_spans(raw)
    for prev, nxt in zip(spans, spans[1:]):
        assert prev.span[1] <= nxt.span[0]
    for s in spans:
        assert s.content in raw[s.span[0]:s.span[1]]
    v = derive_variants(raw)
    assert v == derive_variants(raw)
    assert v.text_tokens == tuple(tokenize_text(v.text_clean))


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet=st.sampled_from(list("abc def,.!?\n")), max_size=40))
def test_plain_prose_is_untouched(raw):
    v = derive_variants(raw)
    assert v.text == raw and v.text_clean == raw and v.code == ""
