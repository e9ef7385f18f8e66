"""Averaged structured perceptron over first-order label chains.

Stands in for a discriminative sequence labeller. Feature templates are
frozen under :data:`FEATURE_VERSION`; change the version whenever they change.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from . import _lattice
from .core import Corpus, Example, LabelAlphabet, Labeling, Sentence

FEATURE_VERSION = "v1"
FORMAT_VERSION = "seqhints-perceptron 1"

ExtraSource = Callable[[Sentence], Sequence[str]]


def token_features(tokens: Sequence[str], i: int, extra: Sequence[str] | None = None) -> list[str]:
    w = tokens[i]
    feats = [
        "bias",
        "w=" + w,
        "lw=" + w.lower(),
        "p3=" + w[:3],
        "s3=" + w[-3:],
        "cap=" + str(w[:1].isupper()),
        "pw=" + (tokens[i - 1] if i > 0 else "<s>"),
        "nw=" + (tokens[i + 1] if i + 1 < len(tokens) else "</s>"),
    ]
    if extra is not None:
        feats.append("x=" + extra[i])
    return feats


def sentence_features(sentence: Sentence, extra: Sequence[str] | None = None) -> list[list[str]]:
    if extra is not None and len(extra) != len(sentence):
        raise ValueError("extra features must have one entry per token")
    return [token_features(sentence.tokens, i, extra) for i in range(len(sentence))]


@dataclass(frozen=True, eq=False)
class PerceptronModel:
    """Averaged weights: ``emission`` is (features, labels); transitions include start/end."""

    alphabet: LabelAlphabet
    features: tuple[str, ...]
    emission: np.ndarray
    start: np.ndarray
    transition: np.ndarray
    final: np.ndarray
    feature_template_version: str = FEATURE_VERSION
    task: int = 2
    extra_source: ExtraSource | None = None

    @cached_property
    def feature_index(self) -> dict[str, int]:
        return {f: i for i, f in enumerate(self.features)}

    @cached_property
    def _masked(self):
        return _lattice.masked(self.start, self.transition, *self.alphabet.transition_mask)

    def _extra(self, sentence, extra):
        if extra is None and self.extra_source is not None:
            extra = self.extra_source(sentence)
        return extra

    def lattice(self, sentence: Sentence, extra: Sequence[str] | None = None):
        feats = sentence_features(sentence, self._extra(sentence, extra))
        index = self.feature_index
        emit = np.zeros((len(sentence), len(self.alphabet)))
        for t, fs in enumerate(feats):
            ids = [index[f] for f in fs if f in index]
            if ids:
                emit[t] = self.emission[ids].sum(axis=0)
        start, trans = self._masked
        return start, trans, emit, self.final

    def decode(self, sentence: Sentence, extra=None) -> tuple[Labeling, float]:
        return perceptron_decode(self, sentence, extra)

    def confidence(self, sentence: Sentence, extra=None) -> float:
        return perceptron_confidence(self, sentence, extra)

    def decode_with_confidence(self, sentence: Sentence, extra=None) -> tuple[Labeling, float]:
        lat = self.lattice(sentence, extra)
        path, best = _lattice.viterbi(*lat)
        _, second = _lattice.top2_scores(*lat)
        return Labeling.from_indices(self.alphabet, path), _lattice.margin_confidence(best, second, len(sentence))


def perceptron_decode(model: PerceptronModel, sentence: Sentence, extra=None) -> tuple[Labeling, float]:
    path, score = _lattice.viterbi(*model.lattice(sentence, extra))
    return Labeling.from_indices(model.alphabet, path), score


def perceptron_confidence(model: PerceptronModel, sentence: Sentence, extra=None) -> float:
    best, second = _lattice.top2_scores(*model.lattice(sentence, extra))
    return _lattice.margin_confidence(best, second, len(sentence))


class _Weights:
    """Current weights plus the accumulators for lazy averaging (w_avg = w - u / c)."""

    def __init__(self, n_feat, n_lab):
        self.w = [np.zeros((n_feat, n_lab)), np.zeros(n_lab), np.zeros((n_lab, n_lab)), np.zeros(n_lab)]
        self.u = [np.zeros_like(a) for a in self.w]
        self.c = 1

    def update(self, fids, gold, pred, scale):
        emit, start, trans, final = self.w
        uemit, ustart, utrans, ufinal = self.u
        step = scale * self.c
        for t, (g, p) in enumerate(zip(gold, pred)):
            if g != p:
                ids = fids[t]
                np.add.at(emit, (ids, g), scale)
                np.add.at(emit, (ids, p), -scale)
                np.add.at(uemit, (ids, g), step)
                np.add.at(uemit, (ids, p), -step)
        for arr, acc, g, p in (
            (start, ustart, gold[0], pred[0]),
            (final, ufinal, gold[-1], pred[-1]),
        ):
            arr[g] += scale
            arr[p] -= scale
            acc[g] += step
            acc[p] -= step
        for t in range(1, len(gold)):
            gp, pp = (gold[t - 1], gold[t]), (pred[t - 1], pred[t])
            if gp != pp:
                trans[gp] += scale
                trans[pp] -= scale
                utrans[gp] += step
                utrans[pp] -= step

    def averaged(self):
        return [w - u / self.c for w, u in zip(self.w, self.u)]


def train_perceptron(
    corpus: Corpus | Sequence[Example],
    task: int = 2,
    epochs: int = 5,
    seed: int = 0,
    alphabet: LabelAlphabet | None = None,
    weights: Sequence[float] | None = None,
    extra_source: ExtraSource | None = None,
    average: bool = True,
) -> PerceptronModel:
    """Averaged perceptron; examples are visited in a seeded random order each epoch.

    ``weights`` scales each example's update; ``extra_source`` maps a sentence
    to one extra symbol per token (e.g. predicted POS/chunk labels).
    """
    examples = list(corpus)
    if not examples:
        raise ValueError("cannot train a perceptron on an empty corpus")
    if epochs < 1:
        raise ValueError("epochs must be >= 1")
    golds = [ex.labeling(task) for ex in examples]
    if any(g is None for g in golds):
        raise ValueError(f"every example needs a task-{task} labeling")
    if alphabet is None:
        alphabet = golds[0].alphabet
    scales = np.ones(len(examples)) if weights is None else np.asarray(weights, dtype=float)

    feats = [sentence_features(ex.sentence, extra_source(ex.sentence) if extra_source else None) for ex in examples]
    index: dict[str, int] = {}
    for sent in feats:
        for fs in sent:
            for f in fs:
                index.setdefault(f, len(index))
    fids = [[np.array([index[f] for f in fs], dtype=np.intp) for fs in sent] for sent in feats]
    gold_ids = [[alphabet.index[y] for y in g.labels] for g in golds]

    n = len(alphabet)
    W = _Weights(len(index), n)
    start_mask, trans_mask = alphabet.transition_mask
    rng = np.random.default_rng(seed)
    for _ in range(epochs):
        for k in rng.permutation(len(examples)):
            emit_w, start_w, trans_w, final_w = W.w
            emit = np.stack([emit_w[ids].sum(axis=0) for ids in fids[k]])
            start, trans = _lattice.masked(start_w, trans_w, start_mask, trans_mask)
            pred, _ = _lattice.viterbi(start, trans, emit, final_w)
            if pred != gold_ids[k]:
                W.update(fids[k], gold_ids[k], pred, scales[k])
            W.c += 1
    emission, start, transition, final = W.averaged() if average else [a.copy() for a in W.w]
    return PerceptronModel(
        alphabet, tuple(index), emission, start, transition, final, FEATURE_VERSION, task, extra_source
    )


class PerceptronLearner:
    def __init__(self, task: int, alphabet: LabelAlphabet, epochs: int = 5, seed: int = 0,
                 extra_source: ExtraSource | None = None):
        self.task = task
        self.alphabet = alphabet
        self.epochs = epochs
        self.seed = seed
        self.extra_source = extra_source

    def fit(self, examples, weights=None) -> PerceptronModel:
        return train_perceptron(examples, self.task, self.epochs, self.seed, self.alphabet, weights, self.extra_source)

    def __repr__(self):
        return f"PerceptronLearner(task={self.task}, epochs={self.epochs}, seed={self.seed})"


# --- serialisation ----------------------------------------------------------


def _fmt(x):
    return "%.17g" % x


def dump_perceptron(model: PerceptronModel) -> str:
    """Same conventions as :func:`seqhints.hmm.dump_hmm`; the extra-feature source is not stored."""
    from .hmm import _label_str

    a = model.alphabet
    lines = [
        FORMAT_VERSION,
        f"task {model.task}",
        f"name {a.task_name}",
        f"templates {model.feature_template_version}",
        f"bio {int(a.bio_scheme)}",
        f"labels {len(a)}",
        *(_label_str(lab) for lab in a.labels),
        f"features {len(model.features)}",
        *model.features,
        "start",
        " ".join(map(_fmt, model.start)),
        "final",
        " ".join(map(_fmt, model.final)),
        "transition",
        *(" ".join(map(_fmt, row)) for row in model.transition),
        "emission",
        *(" ".join(map(_fmt, row)) for row in model.emission),
    ]
    return "\n".join(lines) + "\n"


def load_perceptron(text: str, extra_source: ExtraSource | None = None) -> PerceptronModel:
    from .hmm import _parse_label

    lines = text.split("\n")
    if lines[0] != FORMAT_VERSION:
        raise ValueError(f"not a {FORMAT_VERSION!r} file")
    pos = 1

    def take(key):
        nonlocal pos
        head, _, value = lines[pos].partition(" ")
        if head != key:
            raise ValueError(f"expected {key!r} at line {pos + 1}")
        pos += 1
        return value

    def rows(k):
        nonlocal pos
        out = np.array([[float(v) for v in lines[pos + i].split()] for i in range(k)])
        pos += k
        return out

    task = int(take("task"))
    name = take("name")
    templates = take("templates")
    if templates != FEATURE_VERSION:
        raise ValueError(f"feature templates {templates!r} != {FEATURE_VERSION!r}")
    bio = bool(int(take("bio")))
    n = int(take("labels"))
    labels = tuple(_parse_label(lines[pos + i]) for i in range(n))
    pos += n
    F = int(take("features"))
    features = tuple(lines[pos : pos + F])
    pos += F
    take("start")
    start = rows(1)[0]
    take("final")
    final = rows(1)[0]
    take("transition")
    trans = rows(n)
    take("emission")
    emission = rows(F).reshape(F, n)
    return PerceptronModel(LabelAlphabet(name, labels, bio), features, emission, start, trans, final,
                           templates, task, extra_source)
