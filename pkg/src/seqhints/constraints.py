"""Compatibility functions between syntactic (POS, chunk) and NER labelings.

A constraint is an ordered rule table. Each rule is ``(pos_glob, chunk_glob,
allowed)``; the first rule whose globs match a token's (POS, chunk) pair
decides which NER labels that token may carry. ``allowed`` holds label
classes ``B``/``I``/``O`` (any B-*, any I-*, O) and/or literal NER labels.
Tokens that no rule matches are unconstrained. A labeling pair is compatible
iff every token is allowed, so every constraint decomposes over positions.

Rules file format: one rule per line, three whitespace-separated fields
(POS glob, chunk glob, comma-separated allowed set or ``*``); ``#`` starts a
comment::

    NNP*  B-NP  B
    NNP*  I-NP  B,I
    NNP*  *     *
    *     B-NP  B,O
    *     I-NP  B,I,O
    *     *     O
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fnmatch import fnmatchcase

from .core import OUTSIDE, Labeling, LabelAlphabet, can_follow

ANY = frozenset({"B", "I", "O"})

# (NNP or NNPS) inside an NP must be part of an entity; outside an NP it is free
_NNP_RULES = (
    ("NNP", "B-NP", {"B"}),
    ("NNPS", "B-NP", {"B"}),
    ("NNP", "I-NP", {"B", "I"}),
    ("NNPS", "I-NP", {"B", "I"}),
    ("NNP", "*", ANY),
    ("NNPS", "*", ANY),
)

RULE_SETS = {
    "full": _NNP_RULES + (
        ("*", "B-NP", {"B", OUTSIDE}),
        ("*", "I-NP", ANY),
        ("*", "*", {OUTSIDE}),
    ),
    # the NNP exception is kept in both ablations so full <= ablation pointwise
    "pos-only": _NNP_RULES,
    "np-only": (
        ("*", "B-NP", {"B", OUTSIDE}),
        ("*", "I-NP", ANY),
        ("NNP", "*", ANY),
        ("NNPS", "*", ANY),
        ("*", "*", {OUTSIDE}),
    ),
    "constant": (),
}


def _allows(allowed: frozenset, ner: str) -> bool:
    if ner in allowed:
        return True
    if ner == OUTSIDE:
        return "O" in allowed
    return ner[0] in allowed


@dataclass(frozen=True)
class ConstraintFunction:
    name: str
    rules: tuple = ()
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(
            self, "rules", tuple((p, c, frozenset(a)) for p, c, a in self.rules)
        )

    def allowed(self, pos: str, chunk: str) -> frozenset | None:
        """Allowed-set of the first matching rule, or None when unconstrained."""
        key = (pos, chunk)
        try:
            return self._cache[key]
        except KeyError:
            pass
        result = None
        for pglob, cglob, allowed in self.rules:
            if fnmatchcase(pos, pglob) and fnmatchcase(chunk, cglob):
                result = allowed
                break
        self._cache[key] = result
        return result

    def position_ok(self, syn_label, ner: str) -> bool:
        allowed = self.allowed(*syn_label)
        return allowed is None or _allows(allowed, ner)

    def __call__(self, y1, y2) -> int:
        return check(self, y1, y2)


def check(chi: ConstraintFunction, y1, y2) -> int:
    """1 iff every position of the (POS, chunk) labeling ``y1`` admits the NER label in ``y2``."""
    l1 = y1.labels if isinstance(y1, Labeling) else tuple(y1)
    l2 = y2.labels if isinstance(y2, Labeling) else tuple(y2)
    if len(l1) != len(l2):
        raise ValueError(f"length mismatch: {len(l1)} vs {len(l2)}")
    if not chi.rules:
        return 1
    return int(all(chi.position_ok(a, b) for a, b in zip(l1, l2)))


def make_constraint(kind: str) -> ConstraintFunction:
    """One of ``full``, ``pos-only``, ``np-only``, ``constant``."""
    try:
        return ConstraintFunction(kind, RULE_SETS[kind])
    except KeyError:
        raise ValueError(f"unknown constraint kind {kind!r}; choose from {sorted(RULE_SETS)}") from None


FULL = make_constraint("full")


def check_full(y1, y2) -> int:
    return check(FULL, y1, y2)


def parse_rules(text: str, name: str = "custom") -> ConstraintFunction:
    rules = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected 3 fields, got {len(parts)}")
        pglob, cglob, allowed = parts
        allowed = ANY if allowed == "*" else frozenset(a for a in allowed.split(",") if a)
        rules.append((pglob, cglob, allowed))
    return ConstraintFunction(name, tuple(rules))


def load_constraint(spec: str) -> ConstraintFunction:
    """A built-in kind by name, or otherwise a rules file path."""
    if spec in RULE_SETS:
        return make_constraint(spec)
    with open(spec, encoding="utf-8") as fh:
        return parse_rules(fh.read(), name=spec)


def well_formed_sequences(alphabet: LabelAlphabet, n: int):
    """Every BIO-well-formed label sequence of length ``n`` over ``alphabet``."""
    labels = alphabet.labels

    def grow(prefix, prev):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for lab in labels:
            if can_follow(prev, lab):
                prefix.append(lab)
                yield from grow(prefix, lab)
                prefix.pop()

    yield from grow([], None)


ENUMERATION_LIMIT = 10**6


def count_compatible(y1, alphabet2: LabelAlphabet, chi: ConstraintFunction) -> int:
    """Exact number of well-formed NER labelings compatible with ``y1`` (by enumeration)."""
    n = len(y1)
    if len(alphabet2) ** n > ENUMERATION_LIMIT:
        raise ValueError(f"{len(alphabet2)}^{n} candidates exceeds the enumeration limit")
    return sum(check(chi, y1, y2) for y2 in well_formed_sequences(alphabet2, n))
