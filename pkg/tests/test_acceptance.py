"""Acceptance suite. Each test is one criterion; a PASS/FAIL line per
criterion is printed in the terminal summary.

Run alone with ``pytest tests/test_acceptance.py``.
"""

import itertools
import json
import math
import random
import time
import warnings

import numpy as np
import pytest

from advisory_miner import cli
from advisory_miner.classifiers import c45_fit, gain_ratio, info_gain, knn_fit, nb_fit, prior_fit
from advisory_miner.evaluation import cross_validate, f_measure, per_class_prf, ConfusionMatrix, \
    stratified_k_fold
from advisory_miner.inferential import GroupSummary, anova_from_ss, one_way_anova, t_test_equal_var, \
    t_test_from_samples
from advisory_miner.special import f_cdf, f_inv, t_cdf, t_inv

from conftest import random_dataset


@pytest.fixture
def criterion(record_property):
    def tag(name):
        record_property("criterion", name)
    return tag


def _close(got, want, tol):
    return abs(got - want) <= tol


# 1 ---------------------------------------------------------------------------

def test_ttest_vector(criterion):
    criterion("1. t-test reference vector (every cell within 1e-6, < 1 ms)")
    good = GroupSummary(17, 19.05882353, 107.8088235)
    poor = GroupSummary(17, 26.17647059, 210.7794118)
    t_test_equal_var(good, poor)  # warm-up
    start = time.perf_counter()
    r = t_test_equal_var(good, poor, 0.0, 0.05)
    elapsed = time.perf_counter() - start
    expected = {
        "pooled_variance": 159.2941176, "t_stat": -1.644167436, "p_one_tail": 0.054966019,
        "p_two_tail": 0.109932039, "t_crit_one_tail": 1.693888703, "t_crit_two_tail": 2.036933334,
    }
    bad = {k: getattr(r, k) for k, v in expected.items() if not _close(getattr(r, k), v, 1e-6)}
    assert not bad, bad
    assert r.df == 32
    assert elapsed < 1e-3, elapsed


# 2 ---------------------------------------------------------------------------

def test_anova_vector(criterion):
    criterion("2. ANOVA reference vector (within 1e-4, < 1 ms)")
    anova_from_ss(730.6691, 7694.921, 2, 39, 0.05)
    start = time.perf_counter()
    t = anova_from_ss(730.6691, 7694.921, 2, 39, 0.05)
    elapsed = time.perf_counter() - start
    assert _close(t.p_value, 0.068789, 1e-4)
    assert _close(t.f_crit, 4.105456, 1e-4)
    for got, want in ((t.ms_within, 207.9708), (t.f, 3.513325), (t.ms_between, 730.6691),
                      (t.ss_total, 8425.59)):
        assert abs(got - want) <= 1e-4 * abs(want), (got, want)
    assert (t.df_between, t.df_within, t.df_total) == (1, 37, 38)
    assert elapsed < 1e-3, elapsed


# 3 ---------------------------------------------------------------------------

REFERENCE_PRF = [  # (precision, recall, F) as reported, three decimals
    (0.903, 0.956, 0.929), (0.583, 0.4, 0.475), (1.0, 0.9, 0.947),
    (0.889, 0.985, 0.935), (0.714, 0.286, 0.408), (0.889, 0.8, 0.842),
    (0.897, 0.941, 0.919), (0.52, 0.371, 0.433), (1.0, 1.0, 1.0),
]


def _matrix_with(precision, recall):
    """Two-class confusion matrix whose class-0 precision and recall equal
    the given three-decimal values exactly."""
    a, b = round(precision * 1000), round(recall * 1000)
    tp = a * b
    return ConfusionMatrix(("a", "b"), [[tp, 1000 * a - tp], [1000 * b - tp, 1000]])


def test_f_measure_vectors(criterion):
    criterion("3. F-measure reference vectors (nine per-class rows within 5e-4)")
    misses = []
    for p, r, f in REFERENCE_PRF:
        scores, _ = per_class_prf(_matrix_with(p, r))
        assert math.isclose(scores[0].precision, p, abs_tol=1e-12)
        assert math.isclose(scores[0].recall, r, abs_tol=1e-12)
        assert scores[0].f_measure == pytest.approx(f_measure(p, r), abs=1e-12)
        if abs(scores[0].f_measure - f) > 5e-4:
            misses.append(((p, r), round(scores[0].f_measure, 6), f))
    assert not misses, f"outside 5e-4: {misses}"


# 4 ---------------------------------------------------------------------------

def test_f_equals_t_squared(criterion):
    criterion("4. F = t^2 duality over 500 random two-group samples (1e-9)")
    rng = np.random.default_rng(20240)
    for _ in range(500):
        n1, n2 = rng.integers(2, 40, size=2)
        a = rng.normal(rng.uniform(-5, 5), rng.uniform(0.1, 10), n1).tolist()
        b = rng.normal(rng.uniform(-5, 5), rng.uniform(0.1, 10), n2).tolist()
        an = one_way_anova([a, b])
        tt = t_test_from_samples(a, b)
        assert abs(an.f - tt.t_stat ** 2) <= 1e-9 * max(1.0, an.f), (an.f, tt.t_stat)
        assert abs(an.p_value - tt.p_two_tail) <= 1e-9, (an.p_value, tt.p_two_tail)


# 5 ---------------------------------------------------------------------------

def test_special_function_round_trips(criterion):
    criterion("5. t_inv/f_inv round trips within 1e-8, monotone on 1e4 points, < 5 s")
    start = time.perf_counter()
    probs = (0.001, 0.05, 0.3, 0.5, 0.8, 0.95, 0.999)
    for df in range(1, 101):
        for p in probs:
            assert abs(t_cdf(t_inv(p, df), df) - p) <= 1e-8, (p, df)
        for x in (-5.0, -1.3, 0.0, 0.7, 2.5, 5.0):
            assert abs(t_inv(t_cdf(x, df), df) - x) <= 1e-8 * max(1.0, abs(x)), (x, df)
    for d1 in range(1, 101):
        for d2 in (1, 5, 37, 100):
            for a, b in ((d1, d2), (d2, d1)):
                for p in (0.05, 0.5, 0.95):
                    x = f_inv(p, a, b)
                    assert abs(f_cdf(x, a, b) - p) <= 1e-8, (p, a, b)
                    assert abs(f_inv(f_cdf(x, a, b), a, b) - x) <= 1e-8 * max(1.0, x), (x, a, b)

    rng = random.Random(5)
    for _ in range(5000):
        df = rng.randint(1, 100)
        x1, x2 = sorted(rng.uniform(-50, 50) for _ in range(2))
        assert t_cdf(x1, df) <= t_cdf(x2, df)
        d1, d2 = rng.randint(1, 100), rng.randint(1, 100)
        f1, f2 = sorted(rng.uniform(0, 30) for _ in range(2))
        assert f_cdf(f1, d1, d2) <= f_cdf(f2, d1, d2)
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0, elapsed


# 6 ---------------------------------------------------------------------------

def _entropy(labels):
    n = len(labels)
    return -sum(c / n * math.log2(c / n) for c in (labels.count(v) for v in set(labels)))


def _oracle_split(ds, attr):
    """Brute-force (gain, split_info): every value for nominal attributes,
    every midpoint for numeric ones (largest gain, lowest threshold first)."""
    i = ds.index_of(attr)
    y = [row[ds.class_index] for row in ds.instances]
    xs = [row[i] for row in ds.instances]
    base = _entropy(y)
    if ds.schema[i].is_nominal:
        parts = [[l for x, l in zip(xs, y) if x == v] for v in ds.schema[i].values]
        parts = [p for p in parts if p]
        best = (base - sum(len(p) / len(y) * _entropy(p) for p in parts), _entropy(
            [k for k, p in enumerate(parts) for _ in p]))
        return best
    values = sorted(set(xs))
    best = (0.0, 0.0)
    for lo, hi in zip(values, values[1:]):
        thr = (lo + hi) / 2
        left = [l for x, l in zip(xs, y) if x <= thr]
        right = [l for x, l in zip(xs, y) if x > thr]
        gain = base - len(left) / len(y) * _entropy(left) - len(right) / len(y) * _entropy(right)
        if gain > best[0] + 1e-12:
            best = (gain, _entropy(["L"] * len(left) + ["R"] * len(right)))
    return best


def _oracle_nb(ds, x):
    classes = ds.class_values
    ci = ds.class_index
    scores = []
    for c in classes:
        rows = [r for r in ds.instances if r[ci] == c]
        p = (len(rows) + 1) / (ds.n + len(classes))
        for i in ds.feature_indices:
            spec = ds.schema[i]
            if spec.is_nominal:
                p *= (sum(1 for r in rows if r[i] == x[i]) + 1) / (len(rows) + len(spec.values))
            else:
                vals = [r[i] for r in rows]
                m = sum(vals) / len(vals)
                var = sum((v - m) ** 2 for v in vals) / (len(vals) - 1)
                p *= math.exp(-(x[i] - m) ** 2 / (2 * var)) / math.sqrt(2 * math.pi * var)
        scores.append(p)
    total = sum(scores)
    return [s / total for s in scores]


def _oracle_knn(ds, x, k):
    feats = ds.feature_indices
    ci = ds.class_index
    ranges = {}
    for i in feats:
        if ds.schema[i].is_numeric:
            col = [r[i] for r in ds.instances]
            ranges[i] = (min(col), max(col))

    def dist(r):
        s = 0.0
        for i in feats:
            if ds.schema[i].is_nominal:
                s += 0.0 if r[i] == x[i] else 1.0
            else:
                lo, hi = ranges[i]
                s += ((r[i] - x[i]) / (hi - lo)) ** 2 if hi > lo else 0.0
        return math.sqrt(s)

    ranked = sorted(range(ds.n), key=lambda j: (dist(ds.instances[j]), j))[:k]
    votes = {c: 0 for c in ds.class_values}
    inv = {c: 0.0 for c in ds.class_values}
    for j in ranked:
        c = ds.instances[j][ci]
        d = dist(ds.instances[j])
        votes[c] += 1
        inv[c] += math.inf if d == 0 else 1 / d
    best = max(ds.class_values, key=lambda c: (votes[c], inv[c], -ds.class_values.index(c)))
    return best, [votes[c] / k for c in ds.class_values]


def test_classifier_oracles(criterion, weather):
    criterion("6. classifier oracles on the 14-instance toy set (gain/ratio, NB 1e-9, kNN exact)")
    for attr in ("outlook", "temperature", "humidity", "windy"):
        gain, split_info = _oracle_split(weather, attr)
        assert info_gain(weather, attr) == pytest.approx(gain, abs=1e-9), attr
        assert gain_ratio(weather, attr) == pytest.approx(gain / split_info, abs=1e-9), attr
    assert info_gain(weather, "outlook") == pytest.approx(0.246749819774, abs=1e-9)

    nb = nb_fit(weather)
    queries = list(weather.instances) + [("sunny", 66, 90, "true", "yes"), ("overcast", 90, 60, "false", "no")]
    for q in queries:
        got = nb.predict_proba(q)
        want = _oracle_nb(weather, q)
        assert all(abs(g - w) <= 1e-9 for g, w in zip(got, want)), (q, got, want)

    grid = list(itertools.product(("sunny", "overcast", "rainy"), (64, 70, 77, 85), (65, 80, 96),
                                  ("true", "false")))
    for k in (1, 3, 5, 7):
        model = knn_fit(weather, k=k)
        for o, t, h, w in grid:
            q = (o, t, h, w, "yes")
            label, dist = _oracle_knn(weather, q, k)
            assert model.predict(q) == label, (k, q)
            assert list(model.predict_proba(q)) == dist, (k, q)

    # every neighbour agrees: the vote is unanimous and the distribution one-hot
    model = knn_fit(weather, k=3)
    q = ("overcast", 80, 80, "false", "no")
    assert model.predict(q) == "yes"
    assert model.predict_proba(q) == (1.0, 0.0)


# 7 ---------------------------------------------------------------------------

def test_cross_validation_properties(criterion, weather):
    criterion("7. stratified folds over 200 datasets, prior RAE = RRSE = 100%, byte-identical reruns")
    rng = random.Random(77)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for _ in range(200):
            ds = random_dataset(rng, n=rng.randint(4, 60))
            k = rng.randint(2, min(10, ds.n))
            folds = stratified_k_fold(ds, k, rng.randrange(2 ** 32))
            flat = sorted(i for f in folds for i in f)
            assert flat == list(range(ds.n))
            sizes = [len(f) for f in folds]
            assert max(sizes) - min(sizes) <= 1
            labels = ds.class_labels()
            for c in range(len(ds.class_values)):
                per = [sum(1 for i in f if labels[i] == c) for f in folds]
                assert max(per) - min(per) <= 1

    from advisory_miner.synthetic import generate_cohort
    cohort = generate_cohort()
    for ds in (weather, cohort):
        r = cross_validate(prior_fit, ds, k=min(10, ds.n), seed=3)
        assert r.rae_percent == pytest.approx(100.0, abs=1e-6)
        assert r.rrse_percent == pytest.approx(100.0, abs=1e-6)

    a = cross_validate(c45_fit, cohort, 10, 11).dumps()
    b = cross_validate(c45_fit, cohort, 10, 11).dumps()
    c = cross_validate(c45_fit, cohort, 10, 11, parallel=True).dumps()
    assert a == b == c


# 8 ---------------------------------------------------------------------------

def test_end_to_end(criterion, tmp_path, capsys):
    criterion("8. generate -> crossval (3 learners) < 10 s, acc >= 0.80, kappa >= 0.5, Diff rule on top")
    data = tmp_path / "cohort.csv"
    start = time.perf_counter()
    assert cli.main(["generate", "--seed", "42", "--out", str(data)]) == 0
    capsys.readouterr()
    assert cli.main(["crossval", "--data", str(data), "--algo", "all", "--folds", "10",
                     "--seed", "42", "--format", "json"]) == 0
    elapsed = time.perf_counter() - start
    out = json.loads(capsys.readouterr().out)
    assert elapsed < 10.0, elapsed
    for algo in ("c45", "nb", "knn"):
        res = out["results"][algo]
        assert res["accuracy"] >= 0.80, (algo, res["accuracy"])
        assert res["kappa"] >= 0.5, (algo, res["kappa"])
    assert cli.main(["rules", "--data", str(data), "--format", "json"]) == 0
    rules = json.loads(capsys.readouterr().out)
    top = max(rules, key=lambda r: r["support"])
    assert any(cond[0] == "Diff_G_R_C_H" for cond in top["conditions"]), top


# 9 ---------------------------------------------------------------------------

def test_unpruned_tree_fits_training_data(criterion):
    criterion("9. unpruned C4.5 (min_leaf 1) fits 100 consistent datasets; distributions sum to 1")
    rng = random.Random(99)
    for _ in range(100):
        ds = random_dataset(rng, n=rng.randint(2, 50), consistent=True)
        tree = c45_fit(ds, min_leaf=1, prune=False)
        ci = ds.class_index
        wrong = [row for row in ds.instances if tree.predict(row) != row[ci]]
        assert not wrong, wrong
        models = [tree, nb_fit(ds), knn_fit(ds, k=min(3, ds.n)), prior_fit(ds), c45_fit(ds)]
        for m in models:
            for row in ds.instances:
                assert abs(math.fsum(m.predict_proba(row)) - 1.0) <= 1e-9
