"""C4.5 decision tree, naive Bayes and k-NN behind one fit/predict interface."""

from functools import partial

from ..errors import DomainError
from .base import Model, PriorModel, entropy, predict, predict_proba, prior_fit
from .bayes import NaiveBayesModel, nb_fit
from .knn import KnnModel, knn_distance, knn_fit
from .tree import DecisionTreeModel, add_errs, c45_fit, gain_ratio, info_gain

ALGORITHMS = ("c45", "nb", "knn")

_FITTERS = {"c45": c45_fit, "nb": nb_fit, "knn": knn_fit, "prior": prior_fit}
_MODELS = {m.kind: m for m in (DecisionTreeModel, NaiveBayesModel, KnnModel, PriorModel)}


def make_learner(algo: str, **params):
    """Return ``fit(ds) -> Model`` for an algorithm name and its hyperparameters."""
    try:
        fit = _FITTERS[algo]
    except KeyError:
        raise DomainError(f"unknown algorithm {algo!r}; choose from {', '.join(ALGORITHMS)}") from None
    return partial(fit, **params)


def model_from_json(d: dict) -> Model:
    try:
        cls = _MODELS[d["type"]]
    except KeyError:
        raise DomainError(f"unknown model type {d.get('type')!r}") from None
    return cls.from_json(d)


__all__ = [
    "ALGORITHMS", "DecisionTreeModel", "KnnModel", "Model", "NaiveBayesModel", "PriorModel",
    "add_errs", "c45_fit", "entropy", "gain_ratio", "info_gain", "knn_distance", "knn_fit",
    "make_learner", "model_from_json", "nb_fit", "predict", "predict_proba", "prior_fit",
]
