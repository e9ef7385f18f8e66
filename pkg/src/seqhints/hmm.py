"""First-order generative HMM tagger with Dirichlet (additive) smoothing.

The generative story: pick the first label from ``start``; after each label
either stop (probability ``stop[label]``) or continue and draw the next label
from ``transition[label]``; every label emits one word from
``emission[label]``. Words seen at most ``prune_threshold`` times in training
are replaced by :data:`UNKNOWN` before counting.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _lattice
from .core import Corpus, Example, LabelAlphabet, Labeling, Sentence

UNKNOWN = "*unknown*"
FORMAT_VERSION = "seqhints-hmm 1"


@dataclass(frozen=True, eq=False)
class HmmModel:
    alphabet: LabelAlphabet
    vocabulary: tuple[str, ...]  # index 0 is UNKNOWN
    start: np.ndarray  # (n,) P(label | start)
    transition: np.ndarray  # (n, n) P(next | prev, not stopping)
    stop: np.ndarray  # (n,) P(stop | label)
    emission: np.ndarray  # (n, V) P(word | label)
    alpha: float = 0.001
    task: int = 2

    @cached_property
    def word_index(self) -> dict[str, int]:
        return {w: i for i, w in enumerate(self.vocabulary)}

    @cached_property
    def _log_tables(self):
        with np.errstate(divide="ignore"):
            start = np.log(self.start)
            trans = np.log1p(-self.stop)[:, None] + np.log(self.transition)
            final = np.log(self.stop)
            emission = np.log(self.emission)
        start, trans = _lattice.masked(start, trans, *self.alphabet.transition_mask)
        return start, trans, final, emission

    def word_ids(self, sentence: Sentence) -> np.ndarray:
        idx = self.word_index
        return np.array([idx.get(w, 0) for w in sentence.tokens], dtype=np.intp)

    def lattice(self, sentence: Sentence):
        start, trans, final, emission = self._log_tables
        return start, trans, emission[:, self.word_ids(sentence)].T, final

    def decode(self, sentence: Sentence) -> tuple[Labeling, float]:
        return viterbi_decode(self, sentence)

    def confidence(self, sentence: Sentence) -> float:
        return confidence(self, sentence)

    def decode_with_confidence(self, sentence: Sentence) -> tuple[Labeling, float]:
        lat = self.lattice(sentence)
        path, best = _lattice.viterbi(*lat)
        _, second = _lattice.top2_scores(*lat)
        return Labeling.from_indices(self.alphabet, path), _lattice.margin_confidence(best, second, len(sentence))


def train_hmm(
    corpus: Corpus | Sequence[Example],
    task: int = 2,
    alpha: float = 0.001,
    prune_threshold: int = 1,
    alphabet: LabelAlphabet | None = None,
    weights: Iterable[float] | None = None,
) -> HmmModel:
    """Maximum-likelihood HMM with additive-``alpha`` smoothing on every distribution.

    ``weights`` gives each example a (possibly fractional) count. Pruning
    looks at raw occurrence counts, not weighted ones.
    """
    examples = list(corpus)
    if not examples:
        raise ValueError("cannot train an HMM on an empty corpus")
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if prune_threshold < 0:
        raise ValueError("prune_threshold must be non-negative")
    labelings = []
    for ex in examples:
        lab = ex.labeling(task)
        if lab is None:
            raise ValueError(f"example {ex.id!r} has no task-{task} labeling")
        labelings.append(lab)
    if alphabet is None:
        alphabet = labelings[0].alphabet
    weights = np.ones(len(examples)) if weights is None else np.asarray(list(weights), dtype=float)
    if len(weights) != len(examples):
        raise ValueError("one weight per example")

    freq = Counter(w for ex in examples for w in ex.sentence.tokens)
    vocabulary = (UNKNOWN,) + tuple(sorted(w for w, c in freq.items() if c > prune_threshold and w != UNKNOWN))
    word_index = {w: i for i, w in enumerate(vocabulary)}

    n, V = len(alphabet), len(vocabulary)
    c_start = np.zeros(n)
    c_trans = np.zeros((n, n))
    c_stop = np.zeros(n)
    c_label = np.zeros(n)
    c_emit = np.zeros((n, V))
    index = alphabet.index
    for ex, lab, wt in zip(examples, labelings, weights):
        ys = [index[y] for y in lab.labels]
        ws = [word_index.get(w, 0) for w in ex.sentence.tokens]
        c_start[ys[0]] += wt
        c_stop[ys[-1]] += wt
        np.add.at(c_label, ys, wt)
        np.add.at(c_emit, (ys, ws), wt)
        if len(ys) > 1:
            np.add.at(c_trans, (ys[:-1], ys[1:]), wt)

    start = (c_start + alpha) / (c_start.sum() + alpha * n)
    transition = (c_trans + alpha) / (c_trans.sum(axis=1, keepdims=True) + alpha * n)
    stop = (c_stop + alpha) / (c_label + 2 * alpha)
    emission = (c_emit + alpha) / (c_label[:, None] + alpha * V)
    return HmmModel(alphabet, vocabulary, start, transition, stop, emission, float(alpha), task)


def viterbi_decode(model: HmmModel, sentence: Sentence) -> tuple[Labeling, float]:
    """Most probable labeling and its joint log-probability."""
    path, score = _lattice.viterbi(*model.lattice(sentence))
    return Labeling.from_indices(model.alphabet, path), score


def sequence_log_prob(model: HmmModel, sentence: Sentence, labeling: Labeling | Sequence) -> float:
    labels = labeling.labels if isinstance(labeling, Labeling) else tuple(labeling)
    if len(labels) != len(sentence):
        raise ValueError("labeling and sentence lengths differ")
    index = model.alphabet.index
    try:
        path = [index[y] for y in labels]
    except KeyError as err:
        raise ValueError(f"label {err.args[0]!r} not in alphabet") from None
    return _lattice.path_score(*model.lattice(sentence), path)


def forward_log_prob(model: HmmModel, sentence: Sentence) -> float:
    """log of the total probability of ``sentence`` over all well-formed labelings."""
    return _lattice.forward_logsumexp(*model.lattice(sentence))


def confidence(model: HmmModel, sentence: Sentence) -> float:
    """Length-normalised margin between the two best labelings, mapped into [0, 1]."""
    lat = model.lattice(sentence)
    best, second = _lattice.top2_scores(*lat)
    return _lattice.margin_confidence(best, second, len(sentence))


class HmmLearner:
    """Trainer adaptor used by the semi-supervised loops."""

    def __init__(self, task: int, alphabet: LabelAlphabet, alpha: float = 0.001, prune_threshold: int = 1):
        self.task = task
        self.alphabet = alphabet
        self.alpha = alpha
        self.prune_threshold = prune_threshold

    def fit(self, examples, weights=None) -> HmmModel:
        return train_hmm(examples, self.task, self.alpha, self.prune_threshold, self.alphabet, weights)

    def __repr__(self):
        return f"HmmLearner(task={self.task}, alpha={self.alpha}, prune_threshold={self.prune_threshold})"


# --- serialisation ----------------------------------------------------------


def _fmt(x: float) -> str:
    return "%.17g" % x


def _label_str(label) -> str:
    return "\t".join(label) if isinstance(label, tuple) else label


def _parse_label(text: str):
    parts = text.split("\t")
    return tuple(parts) if len(parts) > 1 else parts[0]


def dump_hmm(model: HmmModel) -> str:
    """Versioned text form; floats use 17 significant digits so they round-trip exactly.

    Layout: header, ``task``/``alpha``/``bio`` lines, ``labels <n>`` followed
    by one label per line (composite parts tab-separated), ``vocab <V>`` with
    one word per line, then the tables ``start``, ``stop`` (one row each),
    ``transition`` (n rows) and ``emission`` (n rows), space-separated.
    """
    a = model.alphabet
    lines = [
        FORMAT_VERSION,
        f"task {model.task}",
        f"name {a.task_name}",
        f"alpha {_fmt(model.alpha)}",
        f"bio {int(a.bio_scheme)}",
        f"labels {len(a)}",
        *(_label_str(lab) for lab in a.labels),
        f"vocab {len(model.vocabulary)}",
        *model.vocabulary,
        "start",
        " ".join(map(_fmt, model.start)),
        "stop",
        " ".join(map(_fmt, model.stop)),
        "transition",
        *(" ".join(map(_fmt, row)) for row in model.transition),
        "emission",
        *(" ".join(map(_fmt, row)) for row in model.emission),
    ]
    return "\n".join(lines) + "\n"


def load_hmm(text: str) -> HmmModel:
    lines = text.split("\n")
    if lines[0] != FORMAT_VERSION:
        raise ValueError(f"not a {FORMAT_VERSION!r} file")
    pos = 1

    def take(key):
        nonlocal pos
        head, _, value = lines[pos].partition(" ")
        if head != key:
            raise ValueError(f"expected {key!r} at line {pos + 1}, got {lines[pos]!r}")
        pos += 1
        return value

    def rows(k):
        nonlocal pos
        out = np.array([[float(v) for v in lines[pos + i].split()] for i in range(k)])
        pos += k
        return out

    task = int(take("task"))
    name = take("name")
    alpha = float(take("alpha"))
    bio = bool(int(take("bio")))
    n = int(take("labels"))
    labels = tuple(_parse_label(lines[pos + i]) for i in range(n))
    pos += n
    V = int(take("vocab"))
    vocab = tuple(lines[pos : pos + V])
    pos += V
    take("start")
    start = rows(1)[0]
    take("stop")
    stop = rows(1)[0]
    take("transition")
    trans = rows(n)
    take("emission")
    emission = rows(n)
    return HmmModel(LabelAlphabet(name, labels, bio), vocab, start, trans, stop, emission, alpha, task)
