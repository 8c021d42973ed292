import numpy as np
import pytest
import scipy.sparse as sp

from crc_usefulness.corpus import ReviewComment
from crc_usefulness.exceptions import UnsupportedModelError
from crc_usefulness.explain import (
    background_mean,
    linear_shap,
    mean_contributions,
    top_tokens,
    top_tokens_csv,
    top_tokens_markdown,
    TopTokens,
)
from crc_usefulness.textmodels import GaussianNaiveBayes, LogisticRegression, VectorizeConfig
from crc_usefulness.textmodels.pipeline import PipelineConfig, build_pipeline


def _model():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(40, 3))
    y = (X[:, 0] - X[:, 2] > 0).astype(int)
    return LogisticRegression().fit(X, y), X


def test_linear_shap_sums_to_log_odds():
    m, X = _model()
    mu = background_mean(X)
    att = linear_shap(m, mu, X[3])
    assert att.total == pytest.approx(m.decision_function(X[3:4])[0])
    assert att.base == pytest.approx(m.decision_function(mu.reshape(1, -1))[0])


def test_linear_shap_sparse_input_matches_dense():
    m, X = _model()
    mu = background_mean(X)
    a = linear_shap(m, sp.csr_matrix(mu), sp.csr_matrix(X[0]))
    np.testing.assert_allclose(a.contributions, linear_shap(m, mu, X[0]).contributions)


def test_linear_shap_errors():
    m, X = _model()
    with pytest.raises(ValueError):
        linear_shap(m, X.mean(axis=0)[:2], X[0])
    gnb = GaussianNaiveBayes().fit(X, (X[:, 0] > 0).astype(int))
    with pytest.raises(UnsupportedModelError):
        linear_shap(gnb, X.mean(axis=0), X[0])


def test_mean_contributions_is_row_average():
    m, X = _model()
    mu = background_mean(X[:20])
    rows = np.array([linear_shap(m, mu, x).contributions for x in X[20:]])
    np.testing.assert_allclose(mean_contributions(m, mu, X[20:]), rows.mean(axis=0))


def _pipe():
    texts = [("please fix the leak", 1), ("fix this bug", 1), ("nice work", 0), ("nice", 0),
             ("leak in loop, fix", 1), ("great work", 0)]
    docs = [ReviewComment(str(i), t, y) for i, (t, y) in enumerate(texts)]
    cfg = PipelineConfig(vectorize=VectorizeConfig("text_tokens", "english-nltk"))
    pipe = build_pipeline(cfg).fit(docs, [d.label for d in docs])
    return pipe, docs


def test_top_tokens_order_and_signs():
    pipe, docs = _pipe()
    t = top_tokens(pipe, docs, docs[:2], k=3)
    assert t.positive and all(v > 0 for _, v in t.positive)
    assert all(v < 0 for _, v in t.negative)
    assert [v for _, v in t.positive] == sorted((v for _, v in t.positive), reverse=True)
    vec, model = pipe.steps[0][1], pipe.steps[-1][1]
    mu = background_mean(vec.transform(docs))
    rows = np.array([linear_shap(model, mu, x).contributions for x in vec.transform(docs[:2])])
    pairs = list(zip(vec.get_feature_names_out(), rows.mean(axis=0)))
    up = sorted(pairs, key=lambda p: (-p[1], p[0]))[:3]
    down = sorted(pairs, key=lambda p: (p[1], p[0]))[:3]
    assert [tok for tok, _ in t.positive] == [tok for tok, v in up if v > 0]
    assert [tok for tok, _ in t.negative] == [tok for tok, v in down if v < 0]
    assert len(t.positive) <= 3 and len(t.negative) <= 3


def test_top_tokens_edge_cases():
    pipe, docs = _pipe()
    assert top_tokens(pipe, docs, docs, k=0) == TopTokens([], [])
    assert top_tokens(pipe, docs, ["zzz qqq"]) == TopTokens([], [])
    feat = build_pipeline(PipelineConfig("features")).fit(docs, [d.label for d in docs])
    with pytest.raises(UnsupportedModelError):
        top_tokens(feat, docs, docs)


def test_top_token_renderers():
    t = TopTokens([("fix", 0.25)], [("nice", -0.5), ("work", -0.1)])
    assert top_tokens_csv(t).splitlines() == [
        "token,mean_contribution,direction",
        "fix,0.25,useful",
        "nice,-0.5,not-useful",
        "work,-0.1,not-useful",
    ]
    md = top_tokens_markdown(t, "RH").splitlines()
    assert md[0] == "## RH"
    assert md[4] == "| 1 | fix | +0.2500 | nice | -0.5000 |"
    assert md[5] == "| 2 |  |  | work | -0.1000 |"
