"""Brute-force reference implementations, written without the library's internals."""

import itertools
import math

from scipy.stats import binom


def well_formed(tags):
    for i, tag in enumerate(tags):
        if tag.startswith("I-"):
            if i == 0:
                return False
            prev = tags[i - 1]
            if prev == "O" or prev[2:] != tag[2:]:
                return False
    return True


def chunk_part(label):
    return label[1] if isinstance(label, tuple) else label


def all_labelings(labels, n, bio=False):
    for seq in itertools.product(labels, repeat=n):
        if not bio or well_formed([chunk_part(y) for y in seq]):
            yield seq


def hmm_log_prob(model, tokens, seq):
    """Joint log-probability from the stored parameters, unrolled by hand."""
    idx = {y: i for i, y in enumerate(model.alphabet.labels)}
    vocab = {w: i for i, w in enumerate(model.vocabulary)}
    w = [vocab.get(t, 0) for t in tokens]
    y = [idx[s] for s in seq]
    lp = math.log(model.start[y[0]]) + math.log(model.emission[y[0], w[0]])
    for t in range(1, len(y)):
        lp += math.log(1 - model.stop[y[t - 1]]) + math.log(model.transition[y[t - 1], y[t]])
        lp += math.log(model.emission[y[t], w[t]])
    return lp + math.log(model.stop[y[-1]])


def perceptron_score(model, feats, seq):
    idx = {y: i for i, y in enumerate(model.alphabet.labels)}
    fidx = {f: i for i, f in enumerate(model.features)}
    y = [idx[s] for s in seq]
    s = model.start[y[0]] + model.final[y[-1]]
    for t in range(len(y)):
        s += sum(model.emission[fidx[f], y[t]] for f in feats[t] if f in fidx)
        if t:
            s += model.transition[y[t - 1], y[t]]
    return float(s)


def brute_argmax(scorer, labels, n, bio=False):
    scored = [(scorer(seq), seq) for seq in all_labelings(labels, n, bio)]
    best = max(s for s, _ in scored)
    return best, [seq for s, seq in scored if s == best], scored


def chi_full(y1, y2):
    """The full constraint, read directly off the rule statements."""
    for (pos, chunk), ner in zip(y1, y2):
        proper = pos in ("NNP", "NNPS")
        if proper and chunk == "B-NP":
            ok = ner.startswith("B-")
        elif proper and chunk == "I-NP":
            ok = ner != "O"
        elif proper:
            ok = True  # the exception: a proper noun outside any noun phrase
        elif chunk == "B-NP":
            ok = ner == "O" or ner.startswith("B-")
        elif chunk == "I-NP":
            ok = True
        else:
            ok = ner == "O"
        if not ok:
            return 0
    return 1


def spans(tags):
    out = []
    i = 0
    while i < len(tags):
        if tags[i] == "O":
            i += 1
            continue
        kind = tags[i][2:]
        j = i + 1
        while j < len(tags) and tags[j] == "I-" + kind:
            j += 1
        out.append((i, j, kind))
        i = j
    return out


def binomial_p(b, c):
    n = b + c
    if n == 0:
        return 1.0
    return min(1.0, 2 * binom.cdf(min(b, c), n, 0.5))
