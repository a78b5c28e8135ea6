"""Naive Bayes with Laplace-smoothed nominal likelihoods and Gaussian
class-conditional densities for numeric attributes, scored in log space."""

from __future__ import annotations

import math

import numpy as np

from ..data_model import Dataset
from .base import Model, check_trainable, encode_matrix, laplace_priors

_LOG_2PI = math.log(2.0 * math.pi)


class NaiveBayesModel(Model):
    kind = "nb"

    def __init__(self, schema, features, class_index, priors, nominal, gaussian):
        super().__init__(schema, features, class_index)
        self.priors = tuple(priors)
        # nominal[j] -> [class][value] probability; gaussian[j] -> [class] (mean, var)
        self.nominal = {int(j): [list(r) for r in t] for j, t in nominal.items()}
        self.gaussian = {int(j): [tuple(mv) for mv in t] for j, t in gaussian.items()}

    def log_joint(self, encoded) -> list[float]:
        """log P(class) + sum of per-attribute log likelihoods, per class."""
        out = []
        for c, prior in enumerate(self.priors):
            s = math.log(prior)
            for j, table in self.nominal.items():
                s += math.log(table[c][int(encoded[j])])
            for j, params in self.gaussian.items():
                mean, var = params[c]
                d = encoded[j] - mean
                s += -0.5 * (_LOG_2PI + math.log(var) + d * d / var)
            out.append(s)
        return out

    def _proba(self, encoded):
        logs = self.log_joint(encoded)
        top = max(logs)
        w = [math.exp(v - top) for v in logs]
        total = math.fsum(w)
        return tuple(v / total for v in w)

    def to_json(self) -> dict:
        return {**self._header(), "priors": list(self.priors),
                "nominal": {str(j): t for j, t in self.nominal.items()},
                "gaussian": {str(j): [list(mv) for mv in t] for j, t in self.gaussian.items()}}

    @classmethod
    def from_json(cls, d):
        return cls(*cls._schema_from(d), d["priors"], d["nominal"], d["gaussian"])


def nb_fit(ds: Dataset, variance_floor: float = 1e-9) -> NaiveBayesModel:
    """Fit priors and likelihood tables.

    Numeric variances are sample variances (0 for a single case) floored at
    ``variance_floor * range**2`` of the attribute over the training set.
    """
    features = check_trainable(ds)
    X = encode_matrix(ds, features)
    y = np.array(ds.class_labels(), dtype=np.intp)
    counts = ds.class_counts()
    n_classes = len(counts)
    nominal, gaussian = {}, {}
    for j, i in enumerate(features):
        spec = ds.schema[i]
        col = X[:, j]
        if spec.is_nominal:
            k = len(spec.values)
            table = np.zeros((n_classes, k))
            np.add.at(table, (y, col.astype(np.intp)), 1.0)
            nominal[j] = ((table + 1.0) / (table.sum(axis=1, keepdims=True) + k)).tolist()
        else:
            span = float(col.max() - col.min())
            floor = variance_floor * span * span if span > 0 else variance_floor
            params = []
            for c in range(n_classes):
                vals = col[y == c]
                if len(vals) == 0:
                    mean, var = float(col.mean()), float(col.var(ddof=1)) if len(col) > 1 else 0.0
                else:
                    mean = float(vals.mean())
                    var = float(vals.var(ddof=1)) if len(vals) > 1 else 0.0
                params.append((mean, max(var, floor)))
            gaussian[j] = params
    return NaiveBayesModel(ds.schema, features, ds.class_index, laplace_priors(counts), nominal, gaussian)
