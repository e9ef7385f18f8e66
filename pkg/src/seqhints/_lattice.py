"""First-order lattice search shared by the HMM and the perceptron.

A lattice is given in log/score space by ``start`` (n,), ``trans`` (n, n),
``emit`` (T, n) and ``final`` (n,). Disallowed moves carry ``-inf``.
"""

import numpy as np

NEG_INF = -np.inf


def viterbi(start, trans, emit, final):
    """Best path and its score; ties go to the lowest label index."""
    T, n = emit.shape
    back = np.empty((T, n), dtype=np.intp)
    score = start + emit[0]
    for t in range(1, T):
        cand = score[:, None] + trans
        back[t] = np.argmax(cand, axis=0)
        score = cand[back[t], np.arange(n)] + emit[t]
    score = score + final
    last = int(np.argmax(score))
    best = float(score[last])
    path = [last]
    for t in range(T - 1, 0, -1):
        path.append(int(back[t, path[-1]]))
    path.reverse()
    return path, best


def top2_scores(start, trans, emit, final):
    """Scores of the best and second-best distinct paths (second may be -inf)."""
    T, n = emit.shape
    top = np.full((2, n), NEG_INF)
    top[0] = start + emit[0]
    for t in range(1, T):
        # rows: (rank, prev) pairs, columns: current label
        cand = np.concatenate([top[0][:, None] + trans, top[1][:, None] + trans])
        cand.sort(axis=0)
        top = cand[:-3:-1] + emit[t]
    ends = np.sort((top + final).ravel())
    return float(ends[-1]), float(ends[-2])


def forward_logsumexp(start, trans, emit, final):
    """log of the summed exp-scores over every allowed path."""
    T, n = emit.shape
    alpha = start + emit[0]
    for t in range(1, T):
        alpha = _lse(alpha[:, None] + trans, axis=0) + emit[t]
    return float(_lse(alpha + final, axis=0))


def _lse(a, axis):
    m = np.max(a, axis=axis, keepdims=True)
    safe = np.where(np.isfinite(m), m, 0.0)
    out = np.log(np.sum(np.exp(a - safe), axis=axis, keepdims=True)) + safe
    return np.squeeze(out, axis=axis)


def path_score(start, trans, emit, final, path):
    s = start[path[0]] + emit[0, path[0]]
    for t in range(1, len(path)):
        s += trans[path[t - 1], path[t]] + emit[t, path[t]]
    return float(s + final[path[-1]])


def margin_confidence(best: float, second: float, length: int) -> float:
    """``1 - exp(-(best - second) / length)``; 1 when there is no second path."""
    if not np.isfinite(second):
        return 1.0
    return float(-np.expm1(-(best - second) / length))


def masked(start, trans, start_mask, trans_mask):
    return np.where(start_mask, start, NEG_INF), np.where(trans_mask, trans, NEG_INF)
