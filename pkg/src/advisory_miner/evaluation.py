"""Stratified k-fold cross-validation and the classifier metric battery
(accuracy, kappa, probabilistic error measures, per-class P/R/F)."""

from __future__ import annotations

import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

from .classifiers.base import laplace_priors
from .data_model import Dataset
from .errors import (
    DegenerateBaseline,
    EmptyDataset,
    EmptyInput,
    EmptyMatrix,
    KOutOfRange,
    StratificationWarning,
)
from .rng import Lcg64


@dataclass(frozen=True)
class ConfusionMatrix:
    labels: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]  # [actual][predicted]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "counts", tuple(tuple(int(v) for v in r) for r in self.counts))
        k = len(self.labels)
        if len(self.counts) != k or any(len(r) != k for r in self.counts):
            raise EmptyMatrix("confusion matrix must be square over the class labels")
        if any(v < 0 for r in self.counts for v in r):
            raise EmptyMatrix("confusion counts must be non-negative")

    @classmethod
    def from_pairs(cls, labels, actual: Sequence[int], predicted: Sequence[int]) -> "ConfusionMatrix":
        k = len(labels)
        m = [[0] * k for _ in range(k)]
        for a, p in zip(actual, predicted):
            m[a][p] += 1
        return cls(labels, m)

    @property
    def total(self) -> int:
        return sum(map(sum, self.counts))

    @property
    def correct(self) -> int:
        return sum(self.counts[i][i] for i in range(len(self.labels)))

    def accuracy(self) -> float:
        if self.total == 0:
            raise EmptyMatrix("empty confusion matrix")
        return self.correct / self.total


def kappa(cm: ConfusionMatrix) -> float:
    """Cohen's kappa from the matrix marginals."""
    n = cm.total
    if n == 0:
        raise EmptyMatrix("empty confusion matrix")
    k = len(cm.labels)
    rows = [sum(r) for r in cm.counts]
    cols = [sum(cm.counts[i][j] for i in range(k)) for j in range(k)]
    p_o = cm.correct / n
    p_e = sum(r * c for r, c in zip(rows, cols)) / (n * n)
    if p_e >= 1.0:
        return 0.0
    return (p_o - p_e) / (1.0 - p_e)


def f_measure(precision: float, recall: float) -> float:
    """Harmonic mean of precision and recall; 0 when both are 0."""
    if precision + recall == 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


@dataclass(frozen=True)
class ClassScores:
    label: str
    precision: float
    recall: float
    f_measure: float
    support: int


def per_class_prf(cm: ConfusionMatrix) -> tuple[list[ClassScores], ClassScores]:
    """Per-class scores plus their support-weighted average (label ``Weighted Avg.``)."""
    n = cm.total
    if n == 0:
        raise EmptyMatrix("empty confusion matrix")
    k = len(cm.labels)
    scores = []
    for c in range(k):
        tp = cm.counts[c][c]
        predicted = sum(cm.counts[i][c] for i in range(k))
        actual = sum(cm.counts[c])
        p = tp / predicted if predicted else 0.0
        r = tp / actual if actual else 0.0
        scores.append(ClassScores(cm.labels[c], p, r, f_measure(p, r), actual))
    w = [s.support / n for s in scores]
    avg = ClassScores(
        "Weighted Avg.",
        math.fsum(wi * s.precision for wi, s in zip(w, scores)),
        math.fsum(wi * s.recall for wi, s in zip(w, scores)),
        math.fsum(wi * s.f_measure for wi, s in zip(w, scores)),
        n,
    )
    return scores, avg


def probabilistic_errors(predictions: Sequence[tuple[Sequence[float], int]], priors) -> dict:
    """MAE/RMSE of predicted distributions against one-hot targets, and the
    same errors relative to a prior-probability predictor (in percent).

    ``priors`` is one class distribution, or one per prediction (as when
    each fold has its own training priors).
    """
    if not predictions:
        raise EmptyInput("no predictions")
    n = len(predictions)
    n_classes = len(predictions[0][0])
    if priors and isinstance(priors[0], (int, float)):
        priors = [priors] * n
    if len(priors) != n:
        raise EmptyInput("need one prior distribution per prediction")
    abs_m, sq_m, abs_b, sq_b = [], [], [], []
    for (dist, actual), base in zip(predictions, priors):
        for c in range(n_classes):
            target = 1.0 if c == actual else 0.0
            dm = dist[c] - target
            db = base[c] - target
            abs_m.append(abs(dm))
            sq_m.append(dm * dm)
            abs_b.append(abs(db))
            sq_b.append(db * db)
    cells = n * n_classes
    mae = math.fsum(abs_m) / cells
    rmse = math.sqrt(math.fsum(sq_m) / cells)
    mae_b = math.fsum(abs_b) / cells
    rmse_b = math.sqrt(math.fsum(sq_b) / cells)
    if mae_b == 0 or rmse_b == 0:
        raise DegenerateBaseline("prior predictor makes no error; relative errors undefined")
    return {"mae": mae, "rmse": rmse,
            "rae_percent": 100.0 * mae / mae_b, "rrse_percent": 100.0 * rmse / rmse_b}


def stratified_k_fold(ds: Dataset, k: int, seed: int) -> list[list[int]]:
    """Shuffle each class with :class:`~advisory_miner.rng.Lcg64` and deal its
    members round-robin over the folds, continuing the dealer position from
    one class to the next. Returns sorted index lists."""
    n = ds.n
    if not 2 <= k <= n:
        raise KOutOfRange(f"folds must satisfy 2 <= k <= n (k={k}, n={n})")
    labels = ds.class_labels()
    rng = Lcg64(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    pos = 0
    for c, name in enumerate(ds.class_values):
        members = [i for i, lab in enumerate(labels) if lab == c]
        if 0 < len(members) < k:
            warnings.warn(f"class {name!r} has {len(members)} instances, fewer than {k} folds",
                          StratificationWarning, stacklevel=2)
        rng.shuffle(members)
        for i in members:
            folds[pos % k].append(i)
            pos += 1
    return [sorted(f) for f in folds]


@dataclass
class EvaluationReport:
    accuracy: float
    kappa: float
    mae: float
    rmse: float
    rae_percent: float
    rrse_percent: float
    per_class: list[ClassScores]
    weighted: ClassScores
    confusion: ConfusionMatrix
    fold_count: int
    seed: int | None
    n: int
    correct: int
    learner: str = ""
    predictions: list = field(default_factory=list, repr=False)

    def as_dict(self, with_predictions: bool = False) -> dict:
        d = {
            "learner": self.learner, "n": self.n, "correct": self.correct,
            "accuracy": self.accuracy, "kappa": self.kappa, "mae": self.mae, "rmse": self.rmse,
            "rae_percent": self.rae_percent, "rrse_percent": self.rrse_percent,
            "per_class": [asdict(s) for s in self.per_class],
            "weighted": asdict(self.weighted),
            "confusion": {"labels": list(self.confusion.labels),
                          "counts": [list(r) for r in self.confusion.counts]},
            "fold_count": self.fold_count, "seed": self.seed,
        }
        if with_predictions:
            d["predictions"] = self.predictions
        return d

    def dumps(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)


def evaluate_predictions(labels, rows: Sequence[tuple[Sequence[float], int, int, Sequence[float]]],
                         fold_count: int = 1, seed: int | None = None, learner: str = "") -> EvaluationReport:
    """Build a report from ``(distribution, actual, predicted, prior)`` tuples."""
    if not rows:
        raise EmptyInput("no predictions")
    cm = ConfusionMatrix.from_pairs(labels, [r[1] for r in rows], [r[2] for r in rows])
    errs = probabilistic_errors([(r[0], r[1]) for r in rows], [r[3] for r in rows])
    per_class, weighted = per_class_prf(cm)
    return EvaluationReport(
        accuracy=cm.accuracy(), kappa=kappa(cm), per_class=per_class, weighted=weighted,
        confusion=cm, fold_count=fold_count, seed=seed, n=cm.total, correct=cm.correct,
        learner=learner, **errs,
        predictions=[{"actual": labels[r[1]], "predicted": labels[r[2]], "dist": list(r[0])} for r in rows],
    )


def cross_validate(fit: Callable[[Dataset], object], ds: Dataset, k: int = 10, seed: int = 0,
                   parallel: bool = False, learner: str = "") -> EvaluationReport:
    """Stratified k-fold cross-validation with metrics pooled over all
    held-out predictions. Relative errors use each fold's training priors."""
    if ds.n == 0:
        raise EmptyDataset("cannot cross-validate an empty dataset")
    folds = stratified_k_fold(ds, k, seed)
    labels = ds.class_values
    lookup = {v: i for i, v in enumerate(labels)}
    ci = ds.class_index

    def run_fold(test):
        held = set(test)
        train = ds.subset(i for i in range(ds.n) if i not in held)
        model = fit(train)
        prior = laplace_priors(train.class_counts())
        out = []
        for i in test:
            row = ds.instances[i]
            dist = model.predict_proba(row)
            pred = lookup[model.predict(row)]
            out.append((tuple(dist), lookup[row[ci]], pred, prior))
        return out

    if parallel:
        with ThreadPoolExecutor() as pool:
            results = list(pool.map(run_fold, folds))
    else:
        results = [run_fold(f) for f in folds]
    rows = [r for fold in results for r in fold]
    return evaluate_predictions(labels, rows, fold_count=k, seed=seed, learner=learner)


def holdout(fit: Callable[[Dataset], object], train: Dataset, test: Dataset, learner: str = "") -> EvaluationReport:
    """Train on one dataset and score another."""
    if test.n == 0:
        raise EmptyDataset("empty test set")
    model = fit(train)
    prior = laplace_priors(train.class_counts())
    lookup = {v: i for i, v in enumerate(test.class_values)}
    ci = test.class_index
    rows = [(tuple(model.predict_proba(r)), lookup[r[ci]], lookup[model.predict(r)], prior)
            for r in test.instances]
    return evaluate_predictions(test.class_values, rows, learner=learner)
