"""k-nearest-neighbour classifier over min-max normalized numeric
attributes plus 0/1 nominal mismatch terms."""

from __future__ import annotations

import math

import numpy as np

from .._kernels import sq_distances
from ..data_model import Dataset
from ..errors import DomainError, KTooLarge
from .base import Model, check_trainable, encode_matrix


class KnnModel(Model):
    kind = "knn"

    def __init__(self, schema, features, class_index, X, y, mins, maxs, k, normalize=True):
        super().__init__(schema, features, class_index)
        self.X = np.ascontiguousarray(X, dtype=np.float64)
        self.y = np.asarray(y, dtype=np.intp)
        self.mins = np.asarray(mins, dtype=np.float64)
        self.maxs = np.asarray(maxs, dtype=np.float64)
        self.k = int(k)
        self.normalize = bool(normalize)
        self.nominal = np.array([schema[i].is_nominal for i in features], dtype=np.uint8)
        span = self.maxs - self.mins
        if self.normalize:
            self.scale = np.where(span > 0, 1.0 / np.where(span > 0, span, 1.0), 0.0)
        else:
            self.scale = np.ones(len(features))

    def distance_encoded(self, a, b) -> float:
        return math.sqrt(sq_distances(np.asarray(a, dtype=np.float64),
                                      np.asarray(b, dtype=np.float64).reshape(1, -1),
                                      self.nominal, self.scale)[0])

    def neighbours(self, encoded):
        """Indices of the k nearest training rows and their distances;
        equal distances keep training order."""
        d2 = sq_distances(np.ascontiguousarray(encoded, dtype=np.float64), self.X, self.nominal, self.scale)
        idx = np.argsort(d2, kind="stable")[: self.k]
        return idx, np.sqrt(d2[idx])

    def _votes(self, encoded):
        idx, dist = self.neighbours(encoded)
        n_classes = len(self.class_values)
        votes = [0] * n_classes
        inv = [0.0] * n_classes
        for i, d in zip(idx, dist):
            c = int(self.y[i])
            votes[c] += 1
            inv[c] += math.inf if d == 0 else 1.0 / d
        return votes, inv

    def _proba(self, encoded):
        votes, _ = self._votes(encoded)
        return tuple(v / self.k for v in votes)

    def predict(self, x) -> str:
        """Majority vote; ties broken by summed inverse distance, then class order."""
        votes, inv = self._votes(self.encode(x))
        best = 0
        for c in range(1, len(votes)):
            if (votes[c], inv[c]) > (votes[best], inv[best]):
                best = c
        return self.class_values[best]

    def to_json(self) -> dict:
        return {**self._header(), "k": self.k, "normalize": self.normalize,
                "X": self.X.tolist(), "y": self.y.tolist(),
                "mins": self.mins.tolist(), "maxs": self.maxs.tolist()}

    @classmethod
    def from_json(cls, d):
        schema, feats, ci = cls._schema_from(d)
        X = np.array(d["X"], dtype=np.float64).reshape(len(d["y"]), len(feats))
        return cls(schema, feats, ci, X, d["y"], d["mins"], d["maxs"], d["k"], d.get("normalize", True))


def knn_fit(ds: Dataset, k: int = 5, normalize: bool = True) -> KnnModel:
    features = check_trainable(ds)
    if k < 1:
        raise DomainError("k must be >= 1")
    if k > ds.n:
        raise KTooLarge(f"k = {k} exceeds the {ds.n} training instances")
    X = encode_matrix(ds, features)
    return KnnModel(ds.schema, features, ds.class_index, X, ds.class_labels(),
                    X.min(axis=0), X.max(axis=0), k, normalize)


def knn_distance(model: KnnModel, a, b) -> float:
    """Distance between two instances under the model's normalization."""
    return model.distance_encoded(model.encode(a), model.encode(b))
