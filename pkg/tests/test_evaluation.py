import numpy as np
import pytest
import sklearn.metrics as skm
from hypothesis import given, settings
from hypothesis import strategies as st

from crc_usefulness.corpus import Dataset, ReviewComment, load_dataset, stratified_folds
from crc_usefulness.evaluation import (
    ConfusionMatrix,
    cross_matrix,
    cross_validate,
    delta_table,
    delta_table_csv,
    delta_table_markdown,
    majority_baseline,
    mean_report,
    metrics,
    score_table_csv,
    score_table_markdown,
)
from crc_usefulness.exceptions import FoldError
from crc_usefulness.textmodels.pipeline import PipelineConfig

from published import CROSS_MCC, WITHIN_MCC


@pytest.mark.filterwarnings("ignore:A single label:UserWarning")
@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 1), st.integers(0, 4)), min_size=2, max_size=40))
def test_metrics_match_sklearn(rows):
    y, raw = np.array(rows).T
    scores = raw / 4.0
    yhat = (scores > 0.5).astype(int)
    rep = metrics(y, yhat, scores)
    assert rep.acc == pytest.approx(skm.accuracy_score(y, yhat))
    assert rep.mcc == pytest.approx(skm.matthews_corrcoef(y, yhat), abs=1e-12)
    kw = {"zero_division": 0}
    assert rep.f1 == pytest.approx(skm.f1_score(y, yhat, **kw))
    assert rep.precision_useful == pytest.approx(skm.precision_score(y, yhat, **kw))
    assert rep.precision_not_useful == pytest.approx(skm.precision_score(y, yhat, pos_label=0, **kw))
    assert rep.recall_not_useful == pytest.approx(skm.recall_score(y, yhat, pos_label=0, **kw))
    if len(set(y)) == 2:
        assert rep.auc == pytest.approx(skm.roc_auc_score(y, scores))
        assert rep.ap == pytest.approx(skm.average_precision_score(y, scores))


def test_single_class_truth_is_degenerate():
    rep = metrics([1, 1, 1], [1, 0, 1], [0.9, 0.2, 0.8])
    assert rep.degenerate and rep.auc == 0.5 and rep.ap == 1.0
    assert rep.mcc == 0.0


def test_length_mismatch():
    with pytest.raises(ValueError):
        metrics([1, 0], [1], [0.5, 0.5])


def test_confusion_sum():
    a, b = ConfusionMatrix(1, 2, 3, 4), ConfusionMatrix(4, 3, 2, 1)
    assert a + b == ConfusionMatrix(5, 5, 5, 5) and (a + b).n == 20


SCHEMA_A = {"text": "comment", "label": "useful", "id": "id", "label_values": {"yes": "useful", "no": "not-useful"}}


@pytest.fixture
def mini(fixtures):
    return load_dataset(fixtures / "mini_a.csv", schema_map=SCHEMA_A, name="A")


def test_cross_validate_pools_fold_confusions(mini):
    plan = stratified_folds(mini, k=3, seed=2023)
    res = cross_validate(PipelineConfig(), mini, plan)
    total = res.fold_reports[0].confusion
    for r in res.fold_reports[1:]:
        total = total + r.confusion
    assert res.report.confusion == total
    assert total.n == len(mini)
    again = cross_validate(PipelineConfig(), mini, plan)
    np.testing.assert_array_equal(res.scores, again.scores)
    mean = cross_validate(PipelineConfig(), mini, plan, aggregate="mean").report
    assert mean.mcc == pytest.approx(mean_report(res.fold_reports).mcc)


def test_cross_validate_rejects_foreign_plan(mini):
    plan = stratified_folds(np.r_[np.ones(10, int), np.zeros(10, int)], k=3)
    with pytest.raises(FoldError):
        cross_validate(PipelineConfig(), mini, plan)


def test_majority_baseline(mini):
    rep = majority_baseline(mini)
    y = mini.labels
    expected = y.mean() if y.mean() > 0.5 else 1 - y.mean()
    assert rep.acc == pytest.approx(expected)
    assert rep.mcc == 0.0 and rep.auc == 0.5


def _ds(name, texts):
    return Dataset(name, tuple(ReviewComment(f"{name}{i}", t, lab) for i, (t, lab) in enumerate(texts)))


def test_cross_matrix_covers_ordered_pairs():
    a = _ds("A", [("fix bug", 1), ("nice", 0), ("fix leak", 1), ("cool", 0)])
    b = _ds("B", [("bug here", 1), ("cool", 0), ("leak", 1), ("nice", 0)])
    cfg = PipelineConfig(vectorize=PipelineConfig().vectorize)
    out = cross_matrix({"A": a, "B": b}, {"A": cfg, "B": cfg})
    assert set(out) == {("A", "B"), ("B", "A")}
    assert out[("A", "B")] == pytest.approx(1.0)


def test_delta_table_published_rows():
    rows = {r.train: r for r in delta_table(WITHIN_MCC, CROSS_MCC)}
    assert rows["RH"].average == pytest.approx((0.15 + 0.02) / 2)
    assert rows["RH"].delta == pytest.approx(-0.088)
    csv_lines = delta_table_csv(list(rows.values())).splitlines()
    assert csv_lines[0] == "train,within,test:RH,test:CC,test:OD,average,delta"
    assert csv_lines[1] == "RH,0.173,,0.150,0.020,0.085,-0.088"
    md = delta_table_markdown(list(rows.values()))
    assert "| RH | 0.173 | - | 0.150 | 0.020 | 0.085 | -0.088 |" in md


def test_score_tables_render_deltas():
    base = metrics([1, 0, 1, 0], [1, 1, 1, 1], [0.5] * 4)
    rep = metrics([1, 0, 1, 0], [1, 0, 1, 0], [0.9, 0.1, 0.8, 0.2])
    lines = score_table_csv([("cfg", rep)], base).splitlines()
    assert lines[0].startswith("config,precision_useful") and "delta:mcc" in lines[0]
    assert lines[1].split(",")[9] == "1.000" and lines[1].endswith("+1.000")
    md = score_table_markdown([("cfg", rep)], base).splitlines()
    assert md[2].startswith("| baseline |") and md[3].startswith("| cfg | +0.500")
