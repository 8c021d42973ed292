import numpy as np
import pytest
import scipy.sparse as sp
import sklearn.linear_model
import sklearn.naive_bayes

from crc_usefulness.corpus import ReviewComment
from crc_usefulness.exceptions import ConfigError, FormatError, SingleClassError, VectorizerError
from crc_usefulness.textmodels import (
    BowTfidf,
    GaussianNaiveBayes,
    LogisticRegression,
    MajorityClassifier,
    RandomForest,
    VectorizeConfig,
    fit_tfidf,
    lemmatize,
    load_embeddings,
    make_classifier,
    predict_proba,
    stem,
    stopwords,
    transform_tfidf,
)
from crc_usefulness.textmodels.pipeline import PipelineConfig, build_pipeline, load_pipeline, predict_scores, save_pipeline
from crc_usefulness.textmodels.tfidf import analyze


def _blobs(seed=0, n=80, d=4):
    rng = np.random.default_rng(seed)
    y = rng.integers(0, 2, n)
    X = rng.normal(size=(n, d)) + 0.8 * y[:, None] * rng.normal(size=d)
    return X, y


@pytest.mark.parametrize("l2", [0.5, 1.0, 4.0])
def test_logreg_matches_sklearn(l2):
    X, y = _blobs()
    ours = LogisticRegression(l2=l2, tol=1e-9, max_iter=5000).fit(X, y)
    ref = sklearn.linear_model.LogisticRegression(C=1 / l2, tol=1e-12, max_iter=10000).fit(X, y)
    assert ours.converged_
    np.testing.assert_allclose(ours.coef_, ref.coef_.ravel(), atol=1e-5)
    assert ours.intercept_ == pytest.approx(ref.intercept_[0], abs=1e-5)
    np.testing.assert_allclose(ours.predict_proba(X), ref.predict_proba(X), atol=1e-6)


def test_logreg_accepts_sparse_and_single_vector():
    X, y = _blobs()
    dense = LogisticRegression().fit(X, y)
    sparse = LogisticRegression().fit(sp.csr_matrix(X), y)
    np.testing.assert_allclose(dense.coef_, sparse.coef_, atol=1e-9)
    assert predict_proba(dense, X[0]) == pytest.approx(dense.predict_useful(X[:1])[0])


def test_gnb_matches_sklearn():
    X, y = _blobs(1)
    ours = GaussianNaiveBayes().fit(X, y)
    ref = sklearn.naive_bayes.GaussianNB().fit(X, y)
    np.testing.assert_allclose(ours.predict_proba(X), ref.predict_proba(X), atol=1e-9)


def test_gnb_constant_features_use_raw_epsilon():
    m = GaussianNaiveBayes(var_smoothing=1e-3).fit(np.ones((4, 2)), [0, 1, 0, 1])
    assert m.epsilon_ == 1e-3
    np.testing.assert_allclose(m.predict_useful(np.ones((1, 2))), [0.5])


def test_rf_is_deterministic_per_seed():
    X, y = _blobs(2)
    a = RandomForest(n_trees=25, seed=7).fit(X, y).predict_useful(X)
    b = RandomForest(n_trees=25, seed=7).fit(X, y).predict_useful(X)
    np.testing.assert_array_equal(a, b)
    np.testing.assert_allclose(a * 25, np.round(a * 25), atol=1e-9)


def test_majority_tie_predicts_not_useful():
    m = MajorityClassifier().fit(None, [0, 1, 0, 1])
    assert (m.predict([1, 2, 3]) == 0).all()
    assert m.predict_useful([1]).tolist() == [0.5]
    assert MajorityClassifier().fit(None, [1, 1, 0]).predict([0]).tolist() == [1]


@pytest.mark.parametrize("kind", ["logreg", "gnb", "rf"])
def test_single_class_rejected(kind):
    with pytest.raises(SingleClassError):
        make_classifier(kind).fit(np.zeros((3, 2)), [1, 1, 1])


def test_unknown_classifier():
    with pytest.raises(ValueError):
        make_classifier("svm")


def test_stopword_sets():
    assert stopwords("none") == frozenset()
    assert "the" in stopwords("english-nltk")
    assert "def" in stopwords("programming-py") and "the" in stopwords("programming-py")
    assert "struct" in stopwords("programming-nonpy")
    with pytest.raises(ValueError):
        stopwords("klingon")


def test_stem_and_lemma():
    assert stem("running") == "run"
    assert lemmatize("indices") == "index"
    assert lemmatize("methods") == "method"
    assert lemmatize("status") == "status"


def test_analyze_applies_options():
    doc = "Renaming the Methods, please!"
    assert analyze(doc, VectorizeConfig("text", "english-nltk")) == ["renaming", "methods", "please"]
    assert analyze(doc, VectorizeConfig("text", "english-nltk", stem=True)) == ["renam", "method", "pleas"]
    assert analyze(doc, VectorizeConfig("text", lemmatize=True)) == ["rename", "the", "method", "please"]
    with pytest.raises(ValueError):
        VectorizeConfig(stem=True, lemmatize=True)


def test_tfidf_rows_are_unit_and_ignore_unseen():
    vocab = fit_tfidf(["a b b", "b c"], VectorizeConfig("text"))
    X = transform_tfidf(vocab, ["b zzz", "zzz"])
    assert X.shape == (2, 3)
    assert X[0].toarray()[0].tolist() == [0.0, 1.0, 0.0]
    assert X[1].nnz == 0


def test_tfidf_errors():
    with pytest.raises(VectorizerError):
        fit_tfidf([])
    with pytest.raises(VectorizerError):
        fit_tfidf(["the of", "!!"], VectorizeConfig("text", "english-nltk"))


def test_bow_state_round_trip():
    docs = ["fix the getFoo call", "why?", "use `bar()` here"]
    a = BowTfidf("comment").fit(docs)
    b = BowTfidf("comment").set_state(a.get_state())
    assert (a.transform(docs) != b.transform(docs)).nnz == 0
    assert list(a.get_feature_names_out()) == sorted(a.get_feature_names_out())


def _write_vectors(path, rows, header=None):
    dim = len(rows[0][1])
    lines = [header or f"{len(rows)} {dim}"] + [" ".join([t, *map(str, v)]) for t, v in rows]
    path.write_text("\n".join(lines) + "\n")
    return path


def test_embeddings_load_and_average(tmp_path):
    t = load_embeddings(_write_vectors(tmp_path / "t.txt", [("fix", [1, 0]), ("this", [0, 2])]))
    assert t.dim == 2 and len(t) == 2
    np.testing.assert_allclose(t.mean(["fix", "this", "unknown"]), [0.5, 1.0])
    np.testing.assert_array_equal(t.mean(["nope"]), [0, 0])


@pytest.mark.parametrize(
    "content",
    ["1\nfoo 1\n", "a b\nfoo 1\n", "1 2\nfoo 1\n", "1 1\nfoo x\n", "0 1\n", "1 0\nfoo\n"],
)
def test_embedding_format_errors(tmp_path, content):
    p = tmp_path / "bad.txt"
    p.write_text(content)
    with pytest.raises(FormatError):
        load_embeddings(p)


def _docs():
    texts = ["Please rename `foo` here", "nice", "Why is getBar() null?", "lgtm", "move this to utils.py",
             "ok", "this leaks memory in the loop", "thanks", "add a test for the parser", "done"]
    return [ReviewComment(str(i), t, 1 - i % 2) for i, t in enumerate(texts)]


@pytest.mark.parametrize("classifier", ["logreg", "gnb", "rf", "majority"])
@pytest.mark.parametrize("representation", ["bow", "features", "embeddings"])
def test_pipeline_round_trip(tmp_path, representation, classifier):
    extra = {}
    if representation == "embeddings":
        extra["text_embeddings"] = str(_write_vectors(tmp_path / "w.txt", [("rename", [1, 0]), ("nice", [0, 1])]))
        extra["code_embeddings"] = str(_write_vectors(tmp_path / "c.txt", [("foo", [1]), ("bar", [2])]))
    cfg = PipelineConfig(representation, classifier, classifier_params={"n_trees": 5} if classifier == "rf" else {},
                         **extra)
    docs = _docs()
    pipe = build_pipeline(cfg).fit(docs, [d.label for d in docs])
    save_pipeline(pipe, cfg, tmp_path / "m.json", meta={"k": 1})
    back, cfg2, meta = load_pipeline(tmp_path / "m.json")
    assert cfg2 == cfg and meta == {"k": 1}
    np.testing.assert_allclose(predict_scores(back, docs), predict_scores(pipe, docs))


def test_pipeline_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        PipelineConfig("tfidf")
    with pytest.raises(ConfigError):
        PipelineConfig("bow", "svm")
    with pytest.raises(ConfigError):
        PipelineConfig("embeddings")
    (tmp_path / "m.json").write_text('{"format": "other"}')
    with pytest.raises(FormatError):
        load_pipeline(tmp_path / "m.json")


def test_pipeline_config_tag():
    cfg = PipelineConfig(vectorize=VectorizeConfig("text_clean", "programming-nonpy", lemmatize=True))
    assert cfg.tag == "bow:text_clean/programming-nonpy/lemmatized:logreg"
    assert PipelineConfig.from_dict(cfg.to_dict()) == cfg
