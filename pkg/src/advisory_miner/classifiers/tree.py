"""C4.5-style decision tree: gain-ratio splits gated by mean gain, binary
thresholds on numeric attributes, multiway splits on nominal ones, and
pessimistic-error subtree replacement."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from statistics import NormalDist

import numpy as np

from .._kernels import best_numeric_split
from ..data_model import Dataset
from ..errors import DomainError, UnknownAttribute
from .base import Model, check_trainable, encode_matrix, entropy

_EPS = 1e-12


@dataclass
class Node:
    counts: list[float]
    attr: int | None = None  # schema index of the split attribute
    threshold: float | None = None  # numeric splits only
    children: list["Node"] = field(default_factory=list)
    dist: tuple | None = None  # set on leaves

    @property
    def is_leaf(self) -> bool:
        return self.attr is None

    @property
    def n(self) -> float:
        return sum(self.counts)

    def majority(self) -> int:
        src = self.counts if self.n > 0 else self.dist
        best = 0
        for i, c in enumerate(src):
            if c > src[best]:
                best = i
        return best

    def make_leaf(self, fallback=None):
        self.attr = None
        self.threshold = None
        self.children = []
        total = self.n
        if total > 0:
            self.dist = tuple(c / total for c in self.counts)
        else:
            self.dist = tuple(fallback)

    def leaves(self):
        if self.is_leaf:
            yield self
        else:
            for c in self.children:
                yield from c.leaves()

    def to_json(self) -> dict:
        if self.is_leaf:
            return {"counts": self.counts, "dist": list(self.dist)}
        d = {"counts": self.counts, "attr": self.attr,
             "children": [c.to_json() for c in self.children]}
        if self.threshold is not None:
            d["threshold"] = self.threshold
        return d

    @classmethod
    def from_json(cls, d) -> "Node":
        if "attr" not in d:
            return cls(list(d["counts"]), dist=tuple(d["dist"]))
        return cls(list(d["counts"]), d["attr"], d.get("threshold"),
                   [cls.from_json(c) for c in d["children"]])


@dataclass
class _Split:
    attr: int  # position in the feature list
    gain: float
    split_info: float
    threshold: float | None = None

    @property
    def ratio(self) -> float:
        return self.gain / self.split_info


def _counts(y: np.ndarray, n_classes: int) -> list[float]:
    return np.bincount(y, minlength=n_classes).astype(float).tolist()


def _nominal_split(col: np.ndarray, y: np.ndarray, n_values: int, n_classes: int, min_leaf: int):
    """(gain, split_info) or None if fewer than two branches reach ``min_leaf``."""
    codes = col.astype(np.intp)
    table = np.zeros((n_values, n_classes))
    np.add.at(table, (codes, y), 1.0)
    sizes = table.sum(axis=1)
    if np.count_nonzero(sizes >= min_leaf) < 2:
        return None
    n = len(y)
    h = entropy(table.sum(axis=0))
    cond = sum(s / n * entropy(row) for row, s in zip(table, sizes) if s > 0)
    return max(h - cond, 0.0), entropy(sizes[sizes > 0])


def _numeric_split(col: np.ndarray, y: np.ndarray, n_classes: int, min_leaf: int):
    order = np.argsort(col, kind="stable")
    gain, thr, split_info, _ = best_numeric_split(
        np.ascontiguousarray(col[order]), np.ascontiguousarray(y[order], dtype=np.intp),
        n_classes, min_leaf)
    if gain < 0:
        return None
    return max(gain, 0.0), split_info, thr


def _split_stats(ds: Dataset, attr: str, min_leaf: int = 1):
    i = ds.index_of(attr)
    if i not in ds.feature_indices:
        raise UnknownAttribute(f"{attr!r} is not a feature attribute")
    if ds.n == 0:
        raise DomainError("empty dataset")
    col = encode_matrix(ds, [i])[:, 0]
    y = np.array(ds.class_labels(), dtype=np.intp)
    spec = ds.schema[i]
    n_classes = len(ds.class_values)
    if spec.is_nominal:
        res = _nominal_split(col, y, len(spec.values), n_classes, min_leaf)
        return (0.0, 0.0) if res is None else res
    res = _numeric_split(col, y, n_classes, min_leaf)
    return (0.0, 0.0) if res is None else res[:2]


def info_gain(ds: Dataset, attr: str) -> float:
    """Entropy reduction from splitting on ``attr``; for numeric attributes,
    the best binary threshold."""
    return _split_stats(ds, attr)[0]


def gain_ratio(ds: Dataset, attr: str) -> float | None:
    """Gain divided by split information; ``None`` when split information is 0."""
    gain, split_info = _split_stats(ds, attr)
    if split_info <= _EPS:
        return None
    return gain / split_info


def add_errs(n: float, e: float, cf: float) -> float:
    """Extra errors predicted at confidence ``cf`` on top of ``e`` observed
    errors among ``n`` cases (upper binomial bound, normal approximation)."""
    if n <= 0:
        return 0.0
    if e < 1:
        base = n * (1.0 - cf ** (1.0 / n))
        if e == 0:
            return base
        return base + e * (add_errs(n, 1.0, cf) - base)
    if e + 0.5 >= n:
        return max(n - e, 0.0)
    z = NormalDist().inv_cdf(1.0 - cf)
    f = (e + 0.5) / n
    r = (f + z * z / (2 * n) + z * math.sqrt(f / n - f * f / n + z * z / (4 * n * n))) / (1 + z * z / n)
    return r * n - e


class DecisionTreeModel(Model):
    kind = "c45"

    def __init__(self, schema, features, class_index, root: Node, params: dict):
        super().__init__(schema, features, class_index)
        self.root = root
        self.params = dict(params)

    def _leaf_for(self, encoded) -> Node:
        pos = {a: j for j, a in enumerate(self.features)}
        node = self.root
        while not node.is_leaf:
            v = encoded[pos[node.attr]]
            if node.threshold is not None:
                node = node.children[0] if v <= node.threshold else node.children[1]
            else:
                node = node.children[int(v)]
        return node

    def _proba(self, encoded):
        return self._leaf_for(encoded).dist

    def leaves(self):
        return list(self.root.leaves())

    def depth(self) -> int:
        def walk(n):
            return 0 if n.is_leaf else 1 + max(walk(c) for c in n.children)
        return walk(self.root)

    def to_json(self) -> dict:
        return {**self._header(), "params": self.params, "root": self.root.to_json()}

    @classmethod
    def from_json(cls, d):
        return cls(*cls._schema_from(d), Node.from_json(d["root"]), d.get("params", {}))


def c45_fit(ds: Dataset, min_leaf: int = 2, prune: bool = True, cf: float = 0.25) -> DecisionTreeModel:
    features = check_trainable(ds)
    if min_leaf < 1:
        raise DomainError("min_leaf must be >= 1")
    if not 0.0 < cf < 1.0:
        raise DomainError("cf must lie in (0, 1)")
    X = encode_matrix(ds, features)
    y = np.array(ds.class_labels(), dtype=np.intp)
    n_classes = len(ds.class_values)
    specs = [ds.schema[i] for i in features]

    def choose(rows, allowed) -> _Split | None:
        yy = y[rows]
        cands = []
        for j in allowed:
            col = X[rows, j]
            if specs[j].is_nominal:
                res = _nominal_split(col, yy, len(specs[j].values), n_classes, min_leaf)
                if res is not None and res[1] > _EPS:
                    cands.append(_Split(j, res[0], res[1]))
            else:
                res = _numeric_split(col, yy, n_classes, min_leaf)
                if res is not None and res[1] > _EPS:
                    cands.append(_Split(j, res[0], res[1], res[2]))
        if not cands:
            return None
        mean_gain = sum(c.gain for c in cands) / len(cands)
        pool = [c for c in cands if c.gain >= mean_gain - _EPS]
        best = max(pool, key=lambda c: c.ratio)  # max keeps the first on ties
        if best.gain <= _EPS:
            # no informative split: fall back to the first usable attribute
            # so impure nodes can keep separating (e.g. XOR-like nominal pairs)
            return cands[0]
        return best

    def grow(rows: np.ndarray, allowed: list[int], parent_dist) -> Node:
        node = Node(_counts(y[rows], n_classes))
        if len(rows) == 0:
            node.make_leaf(parent_dist)
            return node
        if max(node.counts) == len(rows) or len(rows) < 2 * min_leaf:
            node.make_leaf()
            return node
        split = choose(rows, allowed)
        if split is None:
            node.make_leaf()
            return node
        j = split.attr
        here = tuple(c / len(rows) for c in node.counts)
        node.attr = features[j]
        col = X[rows, j]
        if split.threshold is not None:
            node.threshold = split.threshold
            mask = col <= split.threshold
            node.children = [grow(rows[mask], allowed, here), grow(rows[~mask], allowed, here)]
        else:
            rest = [a for a in allowed if a != j]
            node.children = [grow(rows[col == v], rest, here) for v in range(len(specs[j].values))]
        return node

    root = grow(np.arange(ds.n), list(range(len(features))), None)
    if prune:
        _prune(root, cf)
    return DecisionTreeModel(ds.schema, features, ds.class_index, root,
                             {"min_leaf": min_leaf, "prune": prune, "cf": cf})


def _prune(node: Node, cf: float) -> float:
    """Bottom-up subtree replacement; returns the node's estimated errors."""
    n = node.n
    e = n - max(node.counts) if n > 0 else 0.0
    as_leaf = e + add_errs(n, e, cf)
    if node.is_leaf:
        return as_leaf
    subtree = sum(_prune(c, cf) for c in node.children)
    if as_leaf <= subtree + 0.1:
        node.make_leaf()
        return as_leaf
    return subtree
