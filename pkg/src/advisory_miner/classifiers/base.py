"""Shared learner plumbing: entropy, instance encoding, the prior-only
baseline and model (de)serialization dispatch."""

from __future__ import annotations

import math
from collections.abc import Mapping
from typing import Sequence

import numpy as np

from ..data_model import AttributeSpec, Dataset
from ..errors import EmptyDataset, EmptyInput, NoFeatures, SchemaMismatch

ClassDistribution = tuple  # tuple[float, ...] in schema class order


def entropy(class_counts: Sequence[float]) -> float:
    """Shannon entropy in bits; 0 log 0 is taken as 0."""
    total = float(sum(class_counts))
    if any(c < 0 for c in class_counts):
        raise EmptyInput("class counts must be non-negative")
    if total <= 0:
        raise EmptyInput("entropy of an empty set is undefined")
    h = 0.0
    for c in class_counts:
        if c > 0:
            p = c / total
            h -= p * math.log2(p)
    return h


def check_trainable(ds: Dataset) -> list[int]:
    if ds.n == 0:
        raise EmptyDataset("cannot fit on an empty dataset")
    feats = ds.feature_indices
    if not feats:
        raise NoFeatures("dataset has no feature attributes")
    return feats


def encode_matrix(ds: Dataset, features: Sequence[int]) -> np.ndarray:
    """Numeric values as-is, nominal values as their index in the value list."""
    cols = []
    for i in features:
        spec = ds.schema[i]
        if spec.is_nominal:
            lookup = {v: k for k, v in enumerate(spec.values)}
            cols.append([lookup[row[i]] for row in ds.instances])
        else:
            cols.append([row[i] for row in ds.instances])
    return np.array(cols, dtype=np.float64).T.reshape(ds.n, len(features))


def encode_instance(schema: Sequence[AttributeSpec], features: Sequence[int], x) -> np.ndarray:
    """Encode one instance given as a full-width tuple or a name -> value mapping.

    The class slot (and any id/unused slot) is ignored.
    """
    if isinstance(x, Mapping):
        try:
            values = [x[schema[i].name] for i in features]
        except KeyError as exc:
            raise SchemaMismatch(f"instance lacks attribute {exc.args[0]!r}") from None
    else:
        if len(x) != len(schema):
            raise SchemaMismatch(f"instance has {len(x)} values, schema has {len(schema)}")
        values = [x[i] for i in features]
    out = np.empty(len(features))
    for j, (i, v) in enumerate(zip(features, values)):
        spec = schema[i]
        if spec.is_nominal:
            try:
                out[j] = spec.values.index(v)
            except ValueError:
                raise SchemaMismatch(f"{spec.name}: unknown value {v!r}") from None
        else:
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise SchemaMismatch(f"{spec.name}: {v!r} is not a finite number")
            out[j] = v
    return out


def argmax_first(dist: Sequence[float]) -> int:
    """Index of the largest entry; ties go to the earliest class."""
    best = 0
    for i, p in enumerate(dist):
        if p > dist[best]:
            best = i
    return best


def laplace_priors(counts: Sequence[int]) -> ClassDistribution:
    total = sum(counts) + len(counts)
    return tuple((c + 1) / total for c in counts)


class Model:
    """Fitted classifier. Subclasses implement ``_proba(encoded)``."""

    kind = "model"

    def __init__(self, schema, features, class_index):
        self.schema = tuple(schema)
        self.features = list(features)
        self.class_index = class_index

    @property
    def class_values(self) -> tuple[str, ...]:
        return self.schema[self.class_index].values

    def encode(self, x) -> np.ndarray:
        return encode_instance(self.schema, self.features, x)

    def predict_proba(self, x) -> ClassDistribution:
        return self._proba(self.encode(x))

    def predict(self, x) -> str:
        return self.class_values[argmax_first(self.predict_proba(x))]

    def _header(self) -> dict:
        return {
            "type": self.kind,
            "schema": [a.to_json() for a in self.schema],
            "features": self.features,
            "class_index": self.class_index,
        }

    @staticmethod
    def _schema_from(d):
        return [AttributeSpec.from_json(a) for a in d["schema"]], d["features"], d["class_index"]


class PriorModel(Model):
    """Always predicts the Laplace-smoothed training class proportions."""

    kind = "prior"

    def __init__(self, schema, features, class_index, priors):
        super().__init__(schema, features, class_index)
        self.priors = tuple(priors)

    def _proba(self, encoded):
        return self.priors

    def to_json(self) -> dict:
        return {**self._header(), "priors": list(self.priors)}

    @classmethod
    def from_json(cls, d):
        return cls(*cls._schema_from(d), d["priors"])


def prior_fit(ds: Dataset) -> PriorModel:
    if ds.n == 0:
        raise EmptyDataset("cannot fit on an empty dataset")
    return PriorModel(ds.schema, ds.feature_indices, ds.class_index, laplace_priors(ds.class_counts()))


def predict_proba(model: Model, x) -> ClassDistribution:
    return model.predict_proba(x)


def predict(model: Model, x) -> str:
    return model.predict(x)
