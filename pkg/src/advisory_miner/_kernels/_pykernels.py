"""Pure-Python kernels. Line-for-line twin of ``_ckernels.pyx``; used when
the compiled extension is unavailable and as the reference in tests."""

import math

import numpy as np

_TINY = 1e-300


def betacf(a, b, x, eps=1e-16, max_iter=10000):
    """Continued fraction for the incomplete beta function (modified Lentz).

    Converges quickly for x < (a + 1) / (a + b + 2).
    """
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError(f"betacf did not converge for a={a}, b={b}, x={x}")


def sq_distances(query, train, nominal, scale):
    """Squared mixed distance from ``query`` to every row of ``train``.

    Numeric columns contribute ((q - t) * scale)**2, nominal columns
    (flagged in ``nominal``) contribute 1 on mismatch.
    """
    q = [float(v) for v in query]
    nom = [bool(v) for v in nominal]
    sc = [float(v) for v in scale]
    p = len(q)
    out = np.empty(len(train))
    for r, row in enumerate(train.tolist()):
        s = 0.0
        for j in range(p):
            if nom[j]:
                if row[j] != q[j]:
                    s += 1.0
            else:
                diff = (row[j] - q[j]) * sc[j]
                s += diff * diff
        out[r] = s
    return out


def _xlog2x(v):
    return v * math.log2(v) if v > 0 else 0.0


def best_numeric_split(values, labels, n_classes, min_leaf):
    """Best binary threshold on sorted ``values`` by information gain.

    Returns ``(gain, threshold, split_info, n_left)``; gain is -1 when no
    threshold leaves ``min_leaf`` cases on both sides.
    """
    vals = values.tolist()
    labs = labels.tolist()
    n = len(vals)
    right = [0] * n_classes
    for c in labs:
        right[c] += 1
    left = [0] * n_classes
    sum_right = sum(_xlog2x(c) for c in right)
    sum_left = 0.0
    total_term = _xlog2x(n) - sum_right
    best = math.inf
    best_i = -1
    for i in range(n - 1):
        c = labs[i]
        sum_left -= _xlog2x(left[c])
        sum_right -= _xlog2x(right[c])
        left[c] += 1
        right[c] -= 1
        sum_left += _xlog2x(left[c])
        sum_right += _xlog2x(right[c])
        nl = i + 1
        if vals[i] >= vals[i + 1] or nl < min_leaf or n - nl < min_leaf:
            continue
        # n * weighted child entropy
        w = _xlog2x(nl) - sum_left + _xlog2x(n - nl) - sum_right
        if w < best - 1e-12:
            best = w
            best_i = i
    if best_i < 0:
        return -1.0, math.nan, 0.0, 0
    nl = best_i + 1
    gain = (total_term - best) / n
    pl = nl / n
    pr = 1.0 - pl
    split_info = -(pl * math.log2(pl) + pr * math.log2(pr))
    threshold = (vals[best_i] + vals[best_i + 1]) / 2.0
    return gain, threshold, split_info, nl
