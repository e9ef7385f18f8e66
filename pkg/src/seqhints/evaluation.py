"""Span F-score, token accuracy and McNemar's test."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import Corpus, Labeling, extract_spans

SIGNIFICANCE = 0.05
EXACT_BELOW = 25  # b + c below this uses the exact binomial test


@dataclass(frozen=True)
class MetricReport:
    precision: float
    recall: float
    f1: float
    gold: int
    predicted: int
    matched: int
    accuracy: float | None = None

    def as_row(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "accuracy": "" if self.accuracy is None else self.accuracy,
            "gold": self.gold,
            "predicted": self.predicted,
            "matched": self.matched,
        }


def _labelings(x, task=None) -> list:
    if isinstance(x, Corpus):
        if task is None:
            raise ValueError("pass task= when scoring a Corpus")
        return x.labelings(task)
    return list(x)


def _aligned(gold, pred):
    if len(gold) != len(pred):
        raise ValueError(f"{len(gold)} gold vs {len(pred)} predicted sequences")
    for g, p in zip(gold, pred):
        if len(g) != len(p):
            raise ValueError("gold and predicted sequence lengths differ")


def span_f1(gold, pred, task: int | None = None) -> MetricReport:
    """Micro-averaged exact-match (boundaries and type) span scores.

    Composite (POS, chunk) labelings are scored on their chunk spans.
    Precision is 0 when nothing is predicted.
    """
    gold, pred = _labelings(gold, task), _labelings(pred, task)
    _aligned(gold, pred)
    n_gold = n_pred = n_match = 0
    for g, p in zip(gold, pred):
        gs = Counter(extract_spans(g))
        ps = Counter(extract_spans(p))
        n_gold += sum(gs.values())
        n_pred += sum(ps.values())
        n_match += sum((gs & ps).values())
    precision = n_match / n_pred if n_pred else 0.0
    recall = n_match / n_gold if n_gold else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return MetricReport(precision, recall, f1, n_gold, n_pred, n_match)


def token_accuracy(gold, pred, task: int | None = None, pos_only: bool = False) -> float:
    """Fraction of tokens labelled correctly; ``pos_only`` compares just the POS of composite labels."""
    gold, pred = _labelings(gold, task), _labelings(pred, task)
    _aligned(gold, pred)
    total = correct = 0
    for g, p in zip(gold, pred):
        for a, b in zip(g, p):
            if pos_only:
                a, b = a[0], b[0]
            correct += a == b
            total += 1
    if not total:
        raise ValueError("no tokens to score")
    return correct / total


# --- McNemar ------------------------------------------------------------------


@dataclass(frozen=True)
class McNemarResult:
    b: int  # A right, B wrong
    c: int  # A wrong, B right
    statistic: float
    p_value: float
    method: str
    verdict: str  # "win-A", "win-B" or "tie"


def binomial_two_sided(b: int, c: int) -> float:
    """Exact two-sided sign-test p-value for ``b`` vs ``c`` discordant pairs."""
    n = b + c
    if n == 0:
        return 1.0
    k = min(b, c)
    tail = sum(math.comb(n, i) for i in range(k + 1))
    return min(1.0, 2 * tail / 2**n)


def mcnemar_from_counts(b: int, c: int, alpha: float = SIGNIFICANCE) -> McNemarResult:
    if b + c < EXACT_BELOW:
        stat, p, method = float(min(b, c)), binomial_two_sided(b, c), "exact"
    else:
        stat = (abs(b - c) - 1) ** 2 / (b + c)
        # chi-square survival with one degree of freedom
        p, method = math.erfc(math.sqrt(stat / 2)), "chi2-cc"
    if p < alpha and b != c:
        verdict = "win-A" if b > c else "win-B"
    else:
        verdict = "tie"
    return McNemarResult(b, c, stat, p, method, verdict)


def mcnemar(system_a, system_b, gold, unit: str = "sentence", task: int | None = None,
            alpha: float = SIGNIFICANCE) -> McNemarResult:
    """McNemar's test on paired correctness.

    ``unit="sentence"`` (default) counts a sentence correct only on an exact
    whole-sequence match; ``unit="token"`` pairs individual tokens.
    """
    a, b_, g = _labelings(system_a, task), _labelings(system_b, task), _labelings(gold, task)
    if not g:
        raise ValueError("nothing to compare")
    _aligned(g, a)
    _aligned(g, b_)
    if unit == "sentence":
        pairs = ((tuple(x) == tuple(z), tuple(y) == tuple(z)) for x, y, z in zip(a, b_, g))
    elif unit == "token":
        pairs = ((xi == zi, yi == zi) for x, y, z in zip(a, b_, g) for xi, yi, zi in zip(x, y, z))
    else:
        raise ValueError(f"unit must be 'sentence' or 'token', not {unit!r}")
    b = c = 0
    for ra, rb in pairs:
        b += ra and not rb
        c += rb and not ra
    return mcnemar_from_counts(b, c, alpha)


class WinTieLose:
    """Counts of significance verdicts per comparison column."""

    def __init__(self, columns: Sequence[str]):
        self.columns = list(columns)
        self.counts = {col: Counter() for col in self.columns}

    def add(self, column: str, result: McNemarResult) -> None:
        outcome = {"win-A": "Win", "win-B": "Lose", "tie": "Tie"}[result.verdict]
        self.counts[column][outcome] += 1

    def to_tsv(self) -> str:
        lines = ["\t" + "\t".join(self.columns)]
        for row in ("Win", "Tie", "Lose"):
            lines.append(row + "\t" + "\t".join(str(self.counts[c][row]) for c in self.columns))
        return "\n".join(lines) + "\n"


def metrics_tsv(rows: Iterable[dict]) -> str:
    rows = list(rows)
    if not rows:
        return ""
    keys = list(rows[0])
    out = ["\t".join(keys)]
    for r in rows:
        out.append("\t".join(_cell(r.get(k, "")) for k in keys))
    return "\n".join(out) + "\n"


def _cell(v) -> str:
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)
