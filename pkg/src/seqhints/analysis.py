"""Estimators for discrimination, weak usefulness and uncorrelation, and an
exact checker for the one-sided error bound on small enumerable instances.

Probabilities on toy instances are :class:`fractions.Fraction` so the bound
comparison is exact.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

import numpy as np

from .constraints import ConstraintFunction
from .core import Corpus

# --- thresholds -----------------------------------------------------------------


def zero_one_threshold(n_outputs: float) -> float:
    """Discrimination needed under whole-structure 0/1 loss: 2(|outputs| - 1)."""
    return 2 * (n_outputs - 1)


def hamming_threshold(mean_len: float, labels_per_vertex: int) -> float:
    """Discrimination needed under per-vertex (Hamming) loss: 2 |V| (|Y| - 1)."""
    if labels_per_vertex < 2:
        raise ValueError("labels_per_vertex must be >= 2")
    if mean_len < 1:
        raise ValueError("mean_len must be >= 1")
    return 2 * mean_len * (labels_per_vertex - 1)


def two_sided_thresholds(mean_len: float, labels_per_vertex: int) -> dict:
    """Quadratic requirements of the two-sided case, for 0/1 and Hamming loss."""
    n_outputs = float(labels_per_vertex) ** mean_len
    return {
        "zero_one": 4 * (n_outputs - 1) ** 2,
        "hamming": 4 * mean_len**2 * (labels_per_vertex - 1) ** 2,
    }


# --- discrimination -----------------------------------------------------------


@dataclass
class DiscriminationReport:
    constraint_name: str
    compatible_count: int
    pool_size: int
    discrimination: float
    infinite: bool
    mean_len: float
    labels_per_vertex: int
    thresholds: dict
    two_sided: dict
    per_length: dict = field(default_factory=dict)  # length -> (compatible, total)

    def rows(self) -> list[tuple[str, str]]:
        return [
            ("constraint", self.constraint_name),
            ("pool_size", str(self.pool_size)),
            ("compatible", str(self.compatible_count)),
            ("discrimination", "inf" if self.infinite else f"{self.discrimination:.6g}"),
            ("mean_len", f"{self.mean_len:.6g}"),
            ("labels_per_vertex", str(self.labels_per_vertex)),
            ("threshold_zero_one", f"{self.thresholds['zero_one']:.6g}"),
            ("threshold_hamming", f"{self.thresholds['hamming']:.6g}"),
            ("two_sided_zero_one", f"{self.two_sided['zero_one']:.6g}"),
            ("two_sided_hamming", f"{self.two_sided['hamming']:.6g}"),
        ]

    def to_tsv(self) -> str:
        lines = ["key\tvalue"] + [f"{k}\t{v}" for k, v in self.rows()]
        lines.append("")
        lines.append("length\tcompatible\ttotal\tdiscrimination")
        for n, (comp, tot) in sorted(self.per_length.items()):
            lines.append(f"{n}\t{comp}\t{tot}\t{tot / comp if comp else 'inf'}")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        d = "infinite (no compatible outputs)" if self.infinite else f"{self.discrimination:.2f}"
        return (
            f"constraint {self.constraint_name}: {self.compatible_count}/{self.pool_size} compatible, "
            f"discrimination {d}; Hamming threshold {self.thresholds['hamming']:.1f}, "
            f"0/1 threshold {self.thresholds['zero_one']:.3g}\n"
        )


def discrimination(chi: ConstraintFunction, pool: Corpus, h0, labels_per_vertex: int | None = None) -> DiscriminationReport:
    """Reciprocal of the fraction of pool sentences where h0's output is compatible with the gold y1."""
    if len(pool) == 0:
        raise ValueError("empty pool")
    per_length: dict = defaultdict(lambda: [0, 0])
    compatible = 0
    for ex in pool:
        if ex.y1 is None:
            raise ValueError(f"pool example {ex.id!r} lacks y1")
        y2, _ = h0.decode(ex.sentence)
        ok = chi(ex.y1, y2)
        compatible += ok
        per_length[len(ex.sentence)][0] += ok
        per_length[len(ex.sentence)][1] += 1
    if labels_per_vertex is None:
        labels_per_vertex = len(h0.alphabet)
    mean_len = float(np.mean([len(ex.sentence) for ex in pool]))
    infinite = compatible == 0
    disc = math.inf if infinite else len(pool) / compatible
    thresholds = {
        "zero_one": zero_one_threshold(float(labels_per_vertex) ** mean_len),
        "hamming": hamming_threshold(mean_len, labels_per_vertex),
    }
    return DiscriminationReport(
        chi.name, compatible, len(pool), disc, infinite, mean_len, labels_per_vertex,
        thresholds, two_sided_thresholds(mean_len, labels_per_vertex),
        {k: tuple(v) for k, v in per_length.items()},
    )


# --- weak usefulness -------------------------------------------------------------


@dataclass
class WeakUsefulnessReport:
    epsilon: Fraction
    conditioning: str
    coverage_ok: bool  # Pr[h = y] >= eps for every y
    coverage_margin: Fraction  # min_y Pr[h = y] - eps
    indicative_ok: bool  # the conditional lift condition
    indicative_margin: Fraction | None  # min over pairs of lift - eps; None when every pair is vacuous
    vacuous_pairs: int
    checked_pairs: int
    p_h: dict
    p_f: dict

    @property
    def ok(self) -> bool:
        return self.coverage_ok and self.indicative_ok


def weak_usefulness(
    points: Iterable[tuple[object, Hashable, Hashable]],
    universe: Sequence[Hashable],
    epsilon,
    conditioning: str = "literal",
) -> WeakUsefulnessReport:
    """Check the two weak-usefulness conditions on weighted ``(mass, f(x), h(x))`` points.

    Condition 1: Pr[h(x) = y] >= eps for every y in ``universe``.
    Condition 2: Pr[f(x) = y | E] >= Pr[f(x) = y] + eps for every y and every
    y' != y, where the conditioning event E is ``h(x) = y'`` under
    ``conditioning="literal"`` and ``h(x) = y' and f(x) != y'`` (the cases
    where h is wrong) under ``conditioning="errors"``. Pairs whose event has
    zero mass are vacuously satisfied.
    """
    if conditioning not in ("literal", "errors"):
        raise ValueError("conditioning must be 'literal' or 'errors'")
    # floats go through their decimal form so 0.01 means 1/100
    eps = Fraction(repr(epsilon)) if isinstance(epsilon, float) else Fraction(epsilon)
    if not 0 < eps < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    joint: Counter = Counter()
    total = Fraction(0)
    for mass, f, h in points:
        mass = Fraction(mass)
        joint[(f, h)] += mass
        total += mass
    if total == 0:
        raise ValueError("no probability mass to check")
    p_h: Counter = Counter()
    p_f: Counter = Counter()
    for (f, h), m in joint.items():
        p_h[h] += m / total
        p_f[f] += m / total

    coverage_margin = min(p_h[y] for y in universe) - eps
    margins = []
    vacuous = 0
    for y in universe:
        for y2 in universe:
            if y2 == y:
                continue
            if conditioning == "literal":
                event = {f: m for (f, h), m in joint.items() if h == y2}
            else:
                event = {f: m for (f, h), m in joint.items() if h == y2 and f != y2}
            mass = sum(event.values(), Fraction(0))
            if mass == 0:
                vacuous += 1
                continue
            margins.append(event.get(y, Fraction(0)) / mass - p_f[y] - eps)
    indicative_margin = min(margins) if margins else None
    return WeakUsefulnessReport(
        eps, conditioning,
        coverage_margin >= 0, coverage_margin,
        indicative_margin is None or indicative_margin >= 0, indicative_margin,
        vacuous, len(margins),
        {y: p_h[y] for y in universe}, {y: p_f[y] for y in universe},
    )


def check_weakly_useful(h, reference: Corpus, epsilon, task: int = 2, mode: str = "token",
                        conditioning: str = "literal") -> WeakUsefulnessReport:
    """Empirical weak-usefulness of tagger ``h`` against the gold labels in ``reference``.

    ``mode="token"`` checks per-token labels over the whole label alphabet;
    ``mode="sequence"`` checks whole outputs, with the universe taken to be the
    outputs seen in either gold or prediction.
    """
    if len(reference) == 0:
        raise ValueError("empty reference corpus")
    points = []
    for ex in reference:
        gold = ex.labeling(task)
        if gold is None:
            raise ValueError(f"reference example {ex.id!r} lacks task-{task} labels")
        pred, _ = h.decode(ex.sentence)
        if mode == "token":
            points += [(1, g, p) for g, p in zip(gold.labels, pred.labels)]
        elif mode == "sequence":
            points.append((1, gold.labels, pred.labels))
        else:
            raise ValueError(f"mode must be 'token' or 'sequence', not {mode!r}")
    if mode == "token":
        universe = list(h.alphabet.labels)
    else:
        universe = sorted({p[1] for p in points} | {p[2] for p in points}, key=repr)
    return weak_usefulness(points, universe, epsilon, conditioning)


# --- uncorrelation -----------------------------------------------------------------


@dataclass
class UncorrelationReport:
    max_deviation: float
    tolerance: float
    passed: bool
    underpowered: bool
    n_sentences: int
    n_events: int
    unit: str
    note: str = (
        "deterministic decoders make the per-sentence condition hold trivially; "
        "this measures corpus-level association between the two outputs"
    )


def check_uncorrelated(h1, h2, pool: Corpus, tolerance: float = 0.05, unit: str = "token",
                       min_sentences: int = 30) -> UncorrelationReport:
    """Max |P(h1=a, h2=b) - P(h1=a) P(h2=b)| over output pairs, pooled over tokens or sentences."""
    pairs = []
    for ex in pool:
        a, _ = h1.decode(ex.sentence)
        b, _ = h2.decode(ex.sentence)
        if unit == "token":
            pairs += list(zip(a.labels, b.labels))
        elif unit == "sentence":
            pairs.append((a.labels, b.labels))
        else:
            raise ValueError(f"unit must be 'token' or 'sentence', not {unit!r}")
    if not pairs:
        return UncorrelationReport(0.0, tolerance, True, True, 0, 0, unit)
    n = len(pairs)
    joint = Counter(pairs)
    pa = Counter(a for a, _ in pairs)
    pb = Counter(b for _, b in pairs)
    dev = 0.0
    for a, ca in pa.items():
        for b, cb in pb.items():
            dev = max(dev, abs(joint.get((a, b), 0) / n - (ca / n) * (cb / n)))
    return UncorrelationReport(dev, tolerance, dev <= tolerance, len(pool) < min_sentences, len(pool), n, unit)


# --- the one-sided error bound on toy instances --------------------------------------

TOY_FORMAT = "seqhints toy-instance 1"
MAX_TOY_LABELS = 64
MAX_TOY_POINTS = 100_000


@dataclass(frozen=True)
class ToyInstance:
    """Finite distribution over inputs with a target ``f``, hypothesis ``h`` and compatible set."""

    labels: tuple
    points: tuple  # (probability, f(x), h(x)) per support point
    compatible: frozenset
    epsilon: Fraction

    def __post_init__(self):
        if len(self.labels) > MAX_TOY_LABELS or len(self.points) > MAX_TOY_POINTS:
            raise ValueError("instance too large to enumerate")
        if sum(p for p, _, _ in self.points) != 1:
            raise ValueError("point probabilities must sum to exactly 1")
        known = set(self.labels)
        for p, f, h in self.points:
            if p < 0 or f not in known or h not in known:
                raise ValueError(f"bad point ({p}, {f}, {h})")
        if not set(self.compatible) <= known:
            raise ValueError("compatible set must be a subset of the labels")

    def to_text(self) -> str:
        lines = [
            TOY_FORMAT,
            "labels " + " ".join(map(str, self.labels)),
            f"epsilon {self.epsilon}",
            "compatible " + " ".join(str(y) for y in self.labels if y in self.compatible),
        ]
        lines += [f"point {p} {f} {h}" for p, f, h in self.points]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ToyInstance":
        """Parse the text form: a header line, then ``labels``, ``epsilon``,
        ``compatible`` and one ``point <prob> <f> <h>`` line per support point.
        Probabilities are exact decimals or fractions (``1/4``); ``#`` starts a comment.
        """
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines or lines[0] != TOY_FORMAT:
            raise ValueError(f"missing header {TOY_FORMAT!r}")
        labels = epsilon = compatible = None
        points = []
        for ln in lines[1:]:
            key, *rest = ln.split()
            if key == "labels":
                labels = tuple(rest)
            elif key == "epsilon":
                epsilon = Fraction(rest[0])
            elif key == "compatible":
                compatible = frozenset(rest)
            elif key == "point":
                if len(rest) != 3:
                    raise ValueError(f"bad point line {ln!r}")
                points.append((Fraction(rest[0]), rest[1], rest[2]))
            else:
                raise ValueError(f"unknown key {key!r}")
        if labels is None or epsilon is None or compatible is None:
            raise ValueError("labels, epsilon and compatible are required")
        return cls(labels, tuple(points), compatible, epsilon)


@dataclass
class BoundReport:
    status: str  # "holds", "violated" or "premises unmet"
    premises: WeakUsefulnessReport
    left: dict  # l -> Pr[h in A \ {l} | f = l]
    right: Fraction  # 2 (|Y| - 1) sum_{k in A} c_k
    intermediate: Fraction | None  # sum_{k in A} c_k (|Y| - 1 + eps sum_{l != k} 1/p_l)
    violations: list
    chi_correct: bool  # every output of f lies in A

    @property
    def holds(self) -> bool:
        return not self.violations


def verify_theorem1_bound(instance: ToyInstance, conditioning: str = "literal") -> BoundReport:
    """Exact check of ``Pr[h(x) in A \\ {l} | f(x) = l] <= 2 (|Y| - 1) Pr[h(x) in A]`` for every l.

    The weak-usefulness premises are checked first; both sides are computed
    either way, but ``status`` is ``"premises unmet"`` when they fail.
    """
    labels = instance.labels
    A = instance.compatible
    n = len(labels)
    c = {k: Fraction(0) for k in labels}
    p = {k: Fraction(0) for k in labels}
    for mass, f, h in instance.points:
        c[h] += mass
        p[f] += mass
    premises = weak_usefulness(instance.points, labels, instance.epsilon, conditioning)

    mass_in_a = sum((c[k] for k in A), Fraction(0))
    right = 2 * (n - 1) * mass_in_a
    left = {}
    for l in labels:
        if p[l] == 0:
            continue
        hit = sum((m for m, f, h in instance.points if f == l and h in A and h != l), Fraction(0))
        left[l] = hit / p[l]
    if all(p[l] > 0 for l in labels):
        eps = instance.epsilon
        intermediate = sum(
            (c[k] * (n - 1 + eps * sum(1 / p[l] for l in labels if l != k)) for k in A), Fraction(0)
        )
    else:
        intermediate = None
    violations = [l for l, v in left.items() if v > right]
    if not premises.ok:
        status = "premises unmet"
    else:
        status = "violated" if violations else "holds"
    chi_correct = all(f in A for m, f, _ in instance.points if m > 0)
    return BoundReport(status, premises, left, right, intermediate, violations, chi_correct)


def random_toy_instance(rng: np.random.Generator, max_labels: int = 6, max_support: int = 20,
                        epsilon=Fraction(1, 100), max_weight: int = 20) -> ToyInstance:
    """Uniformly random small instance: integer point weights, uniform f and h, random non-empty A."""
    n = int(rng.integers(2, max_labels + 1))
    labels = tuple(f"y{i}" for i in range(n))
    support = int(rng.integers(n, max_support + 1))
    weights = [int(w) for w in rng.integers(1, max_weight + 1, size=support)]
    total = sum(weights)
    f = rng.integers(0, n, size=support)
    h = rng.integers(0, n, size=support)
    points = tuple((Fraction(w, total), labels[int(a)], labels[int(b)]) for w, a, b in zip(weights, f, h))
    members = [labels[i] for i in range(n) if rng.random() < 0.5] or [labels[int(rng.integers(n))]]
    return ToyInstance(labels, points, frozenset(members), Fraction(epsilon))


def sample_premise_instance(seed: int, max_tries: int = 100_000, conditioning: str = "literal",
                            **kwargs) -> ToyInstance:
    """First instance from the seeded stream of :func:`random_toy_instance` meeting the premises."""
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        inst = random_toy_instance(rng, **kwargs)
        prem = weak_usefulness(inst.points, inst.labels, inst.epsilon, conditioning)
        if prem.ok:
            return inst
    raise RuntimeError(f"no premise-satisfying instance in {max_tries} draws")
