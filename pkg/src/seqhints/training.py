"""Self-training and learning with hints (one- and two-sided).

A *learner* is any object with a ``task`` attribute (1 or 2) and a
``fit(examples, weights=None)`` method returning a model; a model offers
``decode(sentence) -> (Labeling, score)`` and
``decode_with_confidence(sentence) -> (Labeling, confidence)``.

Every iteration re-decodes the whole working pool, including examples added
earlier: those keep their slot with the new labels when still compatible and
are evicted otherwise. New additions are all compatible candidates, or the
top ``R`` when ``top_r`` is set. Random choices use numpy's PCG64 generator
seeded with ``TrainConfig.seed``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .constraints import ConstraintFunction, make_constraint
from .core import Corpus, Example, Labeling
from .evaluation import span_f1

CONSTANT = make_constraint("constant")


@dataclass(frozen=True)
class TrainConfig:
    iterations: int = 3
    top_r: int | None = None
    pool_growth: int | None = None
    confidence_filter: bool = False
    unlabeled_weight: str = "fraction:1"
    seed: int = 0

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.top_r is not None and self.top_r < 1:
            raise ValueError("top_r must be positive")
        if self.pool_growth is not None:
            if self.top_r is None:
                raise ValueError("pool_growth requires top_r")
            if self.pool_growth < 1:
                raise ValueError("pool_growth must be positive")
        if self.confidence_filter and self.top_r is None:
            raise ValueError("confidence_filter selects the top_r candidates; set top_r")
        parse_weighting(self.unlabeled_weight)

    @classmethod
    def with_growth(cls, top_r: int, **kw) -> "TrainConfig":
        """Top-R selection over a pool growing by 10R per iteration, ranked by confidence."""
        return cls(top_r=top_r, pool_growth=10 * top_r, confidence_filter=True, **kw)


def parse_weighting(mode: str) -> tuple[str, float]:
    """``"equal"``, ``"confidence"`` or ``"fraction:<w>"``."""
    if mode in ("equal", "confidence"):
        return mode, 1.0
    name, _, value = mode.partition(":")
    if name == "fraction":
        w = float(value)
        if w < 0:
            raise ValueError("fraction weight must be non-negative")
        return name, w
    raise ValueError(f"unknown weighting {mode!r}")


def apply_weighting(added: Sequence[tuple[Example, float]], mode: str, n_labeled: int) -> list[tuple[Example, float]]:
    """Attach a training weight to each ``(example, confidence)`` pair.

    ``equal`` gives the added set the same total mass as the ``n_labeled``
    labelled examples; ``fraction:w`` gives every added example weight ``w``;
    ``confidence`` uses the confidence recorded when the example was extracted.
    """
    name, w = parse_weighting(mode)
    if name == "equal":
        w = n_labeled / len(added) if added else 0.0
        return [(ex, w) for ex, _ in added]
    if name == "fraction":
        return [(ex, w) for ex, _ in added]
    return [(ex, conf) for ex, conf in added]


@dataclass
class TraceRow:
    iteration: int
    pool: int
    added: int
    evicted: int
    augmented: int
    dev: dict = field(default_factory=dict)


@dataclass
class TrainResult:
    models: dict  # task -> selected model
    trace: list[TraceRow]
    best_iteration: dict  # task -> iteration of the selected model
    augmented: dict  # task -> Corpus of the added examples at the end

    @property
    def model(self):
        if len(self.models) != 1:
            raise AttributeError("several models; use .models")
        return next(iter(self.models.values()))

    def trace_tsv(self) -> str:
        tasks = sorted({t for row in self.trace for t in row.dev})
        head = ["iteration", "pool", "added", "evicted", "augmented"] + [f"dev_task{t}" for t in tasks]
        lines = ["\t".join(head)]
        for r in self.trace:
            cells = [r.iteration, r.pool, r.added, r.evicted, r.augmented]
            cells += [f"{r.dev[t]:.6f}" if t in r.dev else "" for t in tasks]
            lines.append("\t".join(map(str, cells)))
        return "\n".join(lines) + "\n"


def default_metric(model, dev: Corpus, task: int) -> float:
    pred = [model.decode(ex.sentence)[0] for ex in dev]
    return span_f1(dev.labelings(task), pred).f1


@dataclass
class _Added:
    labels: dict  # task -> Labeling
    confidence: float
    order: int


def _loop(
    learners: dict,
    labeled: dict,
    unlab: Corpus,
    chi: ConstraintFunction,
    cfg: TrainConfig,
    given_y1: bool,
    dev: Corpus | None,
    metric: Callable,
    check_soundness: bool = True,
) -> TrainResult:
    tasks = sorted(learners)
    models = {t: learners[t].fit(labeled[t]) for t in tasks}
    rng = np.random.default_rng(cfg.seed)
    pool_all = list(unlab.examples)
    if cfg.pool_growth is not None:
        order = rng.permutation(len(pool_all))
        pool_all = [pool_all[i] for i in order]
    pool: list[Example] = [] if cfg.pool_growth is not None else pool_all
    need_conf = cfg.confidence_filter or parse_weighting(cfg.unlabeled_weight)[0] == "confidence"

    def evaluate(ms):
        if dev is None:
            return {}
        return {t: metric(ms[t], dev, t) for t in tasks}

    dev0 = evaluate(models)
    trace = [TraceRow(0, 0, 0, 0, 0, dev0)]
    best = {t: (dev0.get(t, -np.inf), 0, models[t]) for t in tasks}
    added: dict[str, _Added] = {}
    counter = 0

    for it in range(1, cfg.iterations + 1):
        if cfg.pool_growth is not None:
            pool = pool_all[: min(len(pool_all), len(pool) + cfg.pool_growth)]

        candidates = []
        evicted = 0
        for ex in pool:
            labels, confs = {}, []
            for t in tasks:
                if need_conf:
                    lab, conf = models[t].decode_with_confidence(ex.sentence)
                    confs.append(conf)
                else:
                    lab, _ = models[t].decode(ex.sentence)
                labels[t] = lab
            y1 = ex.y1 if given_y1 else labels.get(1)
            ok = chi(y1, labels[2]) if chi.rules else 1
            conf = float(np.mean(confs)) if confs else 0.0
            prior = added.get(ex.id)
            if prior is not None:
                if ok:
                    prior.labels = labels
                else:
                    del added[ex.id]
                    evicted += 1
            elif ok:
                candidates.append((ex, labels, conf))

        if cfg.top_r is not None and len(candidates) > cfg.top_r:
            if cfg.confidence_filter:
                candidates.sort(key=lambda c: (-c[2], c[0].id))
            else:
                candidates = [candidates[i] for i in rng.permutation(len(candidates))]
            candidates = candidates[: cfg.top_r]
        for ex, labels, conf in candidates:
            added[ex.id] = _Added(labels, conf, counter)
            counter += 1

        by_id = {ex.id: ex for ex in pool}
        ranked = sorted(added.items(), key=lambda kv: kv[1].order)
        for t in tasks:
            extra = []
            for ex_id, rec in ranked:
                ex = by_id[ex_id].with_labels(t, rec.labels[t])
                if check_soundness and chi.rules:
                    y1 = ex.y1 if given_y1 else rec.labels[1]
                    assert chi(y1, rec.labels[2]), "augmented example violates the constraint"
                extra.append((ex, rec.confidence))
            weighted = apply_weighting(extra, cfg.unlabeled_weight, len(labeled[t]))
            examples = list(labeled[t]) + [ex for ex, _ in weighted]
            weights = [1.0] * len(labeled[t]) + [w for _, w in weighted]
            models[t] = learners[t].fit(examples, weights)

        scores = evaluate(models)
        trace.append(TraceRow(it, len(pool), len(candidates), evicted, len(added), scores))
        for t in tasks:
            if dev is not None and (best[t][1] == 0 or scores[t] > best[t][0]):
                best[t] = (scores[t], it, models[t])

    if dev is None:
        chosen = {t: models[t] for t in tasks}
        best_it = {t: cfg.iterations for t in tasks}
    else:
        chosen = {t: best[t][2] for t in tasks}
        best_it = {t: best[t][1] for t in tasks}
    by_id = {ex.id: ex for ex in pool}
    augmented = {
        t: Corpus(tuple(by_id[i].with_labels(t, rec.labels[t]) for i, rec in
                        sorted(added.items(), key=lambda kv: kv[1].order)))
        for t in tasks
    }
    return TrainResult(chosen, trace, best_it, augmented)


def _require(corpus: Corpus, what: str):
    if len(corpus) == 0:
        raise ValueError(f"{what} is empty")


def one_sided_hints(learner, d: Corpus, d_unlab: Corpus, chi: ConstraintFunction,
                    cfg: TrainConfig = TrainConfig(), dev: Corpus | None = None,
                    metric: Callable = default_metric) -> TrainResult:
    """Grow the task-2 training set with self-labelled examples compatible with their gold y1.

    With a dev set, the returned model is the best over iterations 1..T by
    ``metric``; otherwise it is the last one.
    """
    _require(d, "labelled set d")
    if learner.task != 2:
        raise ValueError("one-sided hints trains the task-2 learner")
    for ex in d_unlab:
        if ex.y2 is not None:
            raise ValueError(f"unlabeled example {ex.id!r} carries y2")
        if ex.y1 is None and chi.rules:
            raise ValueError(f"unlabeled example {ex.id!r} lacks y1")
    return _loop({2: learner}, {2: list(d)}, d_unlab, chi, cfg, True, dev, metric)


def self_train(learner, d: Corpus, unlab: Corpus, cfg: TrainConfig = TrainConfig(),
               dev: Corpus | None = None, metric: Callable = default_metric) -> TrainResult:
    """Retrain on the model's own predictions; the hints loop with a constant constraint."""
    _require(d, "labelled set d")
    t = learner.task
    for ex in unlab:
        if ex.labeling(t) is not None:
            raise ValueError(f"unlabeled example {ex.id!r} carries the task-{t} labeling")
    return _loop({t: learner}, {t: list(d)}, unlab, CONSTANT, cfg, t == 2, dev, metric)


def two_sided_hints(learner1, learner2, d1: Corpus, d2: Corpus, d_unlab: Corpus,
                    chi: ConstraintFunction, cfg: TrainConfig = TrainConfig(iterations=10),
                    dev: Corpus | None = None, metric: Callable = default_metric) -> TrainResult:
    """Label unlabeled sentences with both models; keep compatible pairs for both training sets.

    With ``top_r`` the candidates are ranked by the mean of the two models'
    confidences.
    """
    _require(d1, "d1")
    _require(d2, "d2")
    if (learner1.task, learner2.task) != (1, 2):
        raise ValueError("learner1 must be the task-1 learner and learner2 the task-2 learner")
    for ex in d_unlab:
        if ex.y1 is not None or ex.y2 is not None:
            raise ValueError(f"two-sided unlabeled example {ex.id!r} carries labels")
    return _loop({1: learner1, 2: learner2}, {1: list(d1), 2: list(d2)}, d_unlab, chi, cfg, False, dev, metric)
