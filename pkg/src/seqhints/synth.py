"""Synthetic (sentence, POS/chunk, NER) triples with a known coupling.

Labels are sampled jointly first and words afterwards:

1. a chunk sequence (NP / VP / PP / O) is grown and cut to a sampled length;
2. each NP hosts an entity span with probability ``entity_in_np_rate``;
3. entity tokens are tagged NNP with probability ``nnp_in_np_rate``; NNP is
   never used elsewhere inside an NP, and outside NPs only as the rare
   ``exception_rate`` case (NER label O);
4. words are drawn from per-(POS, entity type) categorical distributions that
   are fixed once per seed.

Every triple therefore satisfies the full NNP/NP constraint.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import (
    DEFAULT_ENTITY_TYPES,
    OUTSIDE,
    Corpus,
    Example,
    LabelAlphabet,
    Labeling,
    Sentence,
    bio_alphabet,
    composite_alphabet,
)

FUNCTION_WORDS = {
    "DT": ["the", "a", "an", "this", "that", "these", "some", "every"],
    "IN": ["of", "in", "on", "for", "with", "from", "by", "at", "about", "under"],
    "TO": ["to"],
    "CC": ["and", "but", "or"],
    "PRP": ["he", "she", "it", "they", "we", "you"],
    "MD": ["will", "would", "could", "may", "should"],
    ",": [","],
    ".": ["."],
}
# share of the open-class vocabulary per word pool
POOL_SHARES = {"proper": 0.4, "noun": 0.25, "verb": 0.15, "adj": 0.12, "adv": 0.04, "num": 0.04}
POS_POOL = {
    "NNP": "proper", "NN": "noun", "NNS": "noun", "VBD": "verb", "VBZ": "verb", "VB": "verb",
    "JJ": "adj", "RB": "adv", "CD": "num",
}
_SYLLABLES = [c + v for c in "bdfgklmnprstvz" for v in "aeiou"]


@dataclass(frozen=True)
class SynthConfig:
    vocab_size: int = 2000
    entity_types: tuple[str, ...] = DEFAULT_ENTITY_TYPES
    mean_len: float = 14.0
    max_len: int = 40
    np_rate: float = 0.5
    nnp_in_np_rate: float = 0.85
    entity_in_np_rate: float = 0.35
    emission_concentration: float = 0.02
    exception_rate: float = 0.005
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "entity_types", tuple(self.entity_types))
        self.validate()

    def validate(self):
        for name in ("np_rate", "nnp_in_np_rate", "entity_in_np_rate", "exception_rate"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if self.vocab_size < 10:
            raise ValueError("vocab_size must be >= 10")
        if not self.max_len >= self.mean_len >= 2:
            raise ValueError("need max_len >= mean_len >= 2")
        if self.emission_concentration <= 0:
            raise ValueError("emission_concentration must be positive")
        if not self.entity_types:
            raise ValueError("need at least one entity type")
        if self.nnp_in_np_rate > 0 and self.entity_in_np_rate == 0 and self.exception_rate == 0:
            raise ValueError("NNP tokens must sit inside entities, but no entities can be generated")

    def to_text(self) -> str:
        lines = []
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            lines.append(f"{f.name} = {','.join(v) if isinstance(v, tuple) else v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SynthConfig":
        """Parse ``key = value`` lines (``#`` comments); unknown keys are an error."""
        return cls(**parse_key_values(text, {f.name: f.type for f in dataclasses.fields(cls)}))


def parse_key_values(text: str, known=None) -> dict:
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"line {lineno}: expected 'key = value'")
        key, value = key.strip().replace("-", "_"), value.strip()
        if known is not None:
            if key not in known:
                raise ValueError(f"line {lineno}: unknown key {key!r}")
            out[key] = _coerce(value, known[key])
        else:
            out[key] = value
    return out


def _coerce(value: str, typ):
    typ = str(typ)
    if typ.startswith("tuple"):
        return tuple(v.strip() for v in value.split(",") if v.strip())
    if typ == "int":
        return int(value)
    if typ == "float":
        return float(value)
    return value


class _Lexicon:
    """Per-seed word pools and class-conditional word distributions."""

    def __init__(self, cfg: SynthConfig, rng: np.random.Generator):
        n_open = max(len(POOL_SHARES), cfg.vocab_size - sum(len(v) for v in FUNCTION_WORDS.values()))
        forms = _word_forms(n_open, rng)
        self.pools = {}
        start = 0
        for pool, size in zip(POOL_SHARES, _allocate(n_open, list(POOL_SHARES.values()))):
            words = forms[start : start + size]
            start += size
            if pool == "proper":
                words = [w.capitalize() for w in words]
            elif pool == "num":
                words = [str(10 + k) for k in range(len(words))]
            self.pools[pool] = words
        self.cfg = cfg
        self.rng = rng
        self.dists: dict = {}

    def dist(self, pos: str, etype: str | None):
        key = (pos, etype)
        if key not in self.dists:
            if pos in FUNCTION_WORDS:
                words = FUNCTION_WORDS[pos]
                probs = np.full(len(words), 1.0 / len(words))
            else:
                words = self.pools[POS_POOL[pos]]
                probs = self.rng.dirichlet(np.full(len(words), self.cfg.emission_concentration))
                if not np.all(np.isfinite(probs)) or probs.sum() <= 0:
                    probs = np.eye(len(words))[int(self.rng.integers(len(words)))]
            self.dists[key] = (words, np.cumsum(probs))
        return self.dists[key]

    def word(self, pos: str, etype: str | None) -> str:
        words, cdf = self.dist(pos, etype)
        i = int(np.searchsorted(cdf, self.rng.random() * cdf[-1], side="right"))
        return words[min(i, len(words) - 1)]


def _allocate(total: int, shares: list[float]) -> list[int]:
    """Split ``total`` into one positive part per share (largest remainder)."""
    k = len(shares)
    rest = total - k
    raw = [rest * s / sum(shares) for s in shares]
    sizes = [1 + int(r) for r in raw]
    order = sorted(range(k), key=lambda i: -(raw[i] - int(raw[i])))
    for i in order[: total - sum(sizes)]:
        sizes[i] += 1
    return sizes


def _word_forms(n: int, rng) -> list[str]:
    forms, seen = [], set()
    while len(forms) < n:
        k = int(rng.integers(2, 4))
        w = "".join(_SYLLABLES[int(j)] for j in rng.integers(0, len(_SYLLABLES), size=k))
        if w not in seen:
            seen.add(w)
            forms.append(w)
    return forms


class _Chunk(NamedTuple):
    kind: str  # NP, VP, PP, O
    pos: list
    ner: list


def _np(cfg, rng) -> _Chunk:
    if rng.random() < cfg.entity_in_np_rate:
        etype = cfg.entity_types[int(rng.integers(len(cfg.entity_types)))]
        pre = ["DT"] if rng.random() < 0.3 else []
        ent_len = int(rng.choice([1, 2, 3], p=[0.45, 0.4, 0.15]))
        ent = ["NNP" if rng.random() < cfg.nnp_in_np_rate else str(rng.choice(["NN", "JJ", "CD"]))
               for _ in range(ent_len)]
        post = ["NN"] if rng.random() < 0.15 else []
        pos = pre + ent + post
        ner = [OUTSIDE] * len(pre) + [f"B-{etype}"] + [f"I-{etype}"] * (ent_len - 1) + [OUTSIDE] * len(post)
        return _Chunk("NP", pos, ner)
    r = rng.random()
    if r < 0.15:
        pos = ["PRP"]
    elif r < 0.25:
        pos = ["CD", "NNS"]
    else:
        pos = (["DT"] if rng.random() < 0.6 else []) + ["JJ"] * int(rng.integers(0, 3)) + [
            "NNS" if rng.random() < 0.3 else "NN"
        ]
    return _Chunk("NP", pos, [OUTSIDE] * len(pos))


def _other(kind, cfg, rng) -> _Chunk:
    if kind == "VP":
        pos = (["MD"] if rng.random() < 0.2 else []) + (["RB"] if rng.random() < 0.15 else [])
        pos.append("VB" if pos and pos[0] == "MD" else str(rng.choice(["VBD", "VBZ"])))
    elif kind == "PP":
        pos = ["TO" if rng.random() < 0.2 else "IN"]
    else:
        pos = [str(rng.choice([",", "CC", "RB", "."], p=[0.4, 0.3, 0.2, 0.1]))]
    pos = ["NNP" if rng.random() < cfg.exception_rate else p for p in pos]
    return _Chunk(kind, pos, [OUTSIDE] * len(pos))


def _chunk_tags(ch: _Chunk) -> list[str]:
    if ch.kind == "O":
        return [OUTSIDE] * len(ch.pos)
    return [f"B-{ch.kind}"] + [f"I-{ch.kind}"] * (len(ch.pos) - 1)


def syntax_alphabet(cfg: SynthConfig | None = None) -> LabelAlphabet:
    """Every (POS, chunk) pair the generator can emit."""
    pairs = set()
    np_pos = {"DT", "NNP", "NN", "NNS", "JJ", "CD", "PRP"}
    for p in np_pos:
        pairs |= {(p, "B-NP"), (p, "I-NP")}
    for p in ("MD", "RB", "VB", "VBD", "VBZ"):
        pairs |= {(p, "B-VP"), (p, "I-VP")}
    pairs |= {("IN", "B-PP"), ("TO", "B-PP")}
    pairs |= {(p, OUTSIDE) for p in (",", "CC", "RB", ".")}
    # exception: NNP outside NPs
    pairs |= {("NNP", "B-VP"), ("NNP", "I-VP"), ("NNP", "B-PP"), ("NNP", OUTSIDE)}
    return composite_alphabet(pairs, "syntax")


def ner_alphabet(cfg: SynthConfig) -> LabelAlphabet:
    return bio_alphabet("ner", cfg.entity_types)


def generate(cfg: SynthConfig, n_sentences: int) -> Corpus:
    """``n_sentences`` fully labelled examples (ids ``"0"``, ``"1"``, ...)."""
    if n_sentences < 1:
        raise ValueError("n_sentences must be >= 1")
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    lex = _Lexicon(cfg, np.random.default_rng([cfg.seed, 1]))
    syn_a, ner_a = syntax_alphabet(cfg), ner_alphabet(cfg)
    examples = []
    for k in range(n_sentences):
        length = int(np.clip(1 + rng.poisson(cfg.mean_len - 1), 1, cfg.max_len))
        chunks, total, prev = [], 0, None
        while total < length:
            if prev == "PP" or rng.random() < cfg.np_rate:
                kind = "NP"
            else:
                kind = str(rng.choice(["VP", "PP", "O"], p=[0.5, 0.3, 0.2]))
                if prev == kind == "VP":
                    kind = "PP"
            ch = _np(cfg, rng) if kind == "NP" else _other(kind, cfg, rng)
            chunks.append(ch)
            total += len(ch.pos)
            prev = kind
        pos, chunk, ner = [], [], []
        for ch in chunks:
            pos += ch.pos
            chunk += _chunk_tags(ch)
            ner += ch.ner
        pos, chunk, ner = pos[:length], chunk[:length], ner[:length]
        words = []
        for p, tag in zip(pos, ner):
            etype = tag[2:] if tag != OUTSIDE else None
            words.append(lex.word(p, etype))
        examples.append(
            Example(
                Sentence(tuple(words), str(k)),
                Labeling(syn_a, tuple(zip(pos, chunk))),
                Labeling(ner_a, tuple(ner)),
            )
        )
    return Corpus(tuple(examples))


class Split(NamedTuple):
    d1: Corpus
    d2: Corpus
    unlab: Corpus
    test: Corpus
    dev: Corpus


def split(corpus: Corpus, sizes: dict, seed: int = 0, mode: str = "one-sided") -> Split:
    """Disjoint seeded split into d1 / d2 / unlab / test (/ dev) with roles attached.

    d1 keeps only y1, d2 only y2, test and dev keep both. ``mode="one-sided"``
    leaves y1 on the unlabeled part, ``"two-sided"`` strips it.
    """
    if mode not in ("one-sided", "two-sided"):
        raise ValueError(f"unknown split mode {mode!r}")
    names = ("d1", "d2", "unlab", "test", "dev")
    extra = set(sizes) - set(names)
    if extra:
        raise ValueError(f"unknown split names {sorted(extra)}")
    counts = [int(sizes.get(n, 0)) for n in names]
    if any(c < 0 for c in counts):
        raise ValueError("split sizes must be non-negative")
    if sum(counts) > len(corpus):
        raise ValueError(f"split sizes sum to {sum(counts)} but the corpus has {len(corpus)} examples")
    order = np.random.default_rng(seed).permutation(len(corpus))
    parts, at = [], 0
    for c in counts:
        parts.append([corpus.examples[i] for i in order[at : at + c]])
        at += c
    d1, d2, unlab, test, dev = parts
    return Split(
        Corpus(tuple(Example(e.sentence, e.y1, None) for e in d1), "labeled-1"),
        Corpus(tuple(Example(e.sentence, None, e.y2) for e in d2), "labeled-2"),
        Corpus(tuple(e.strip(keep_y1=mode == "one-sided") for e in unlab), "unlabeled"),
        Corpus(tuple(test), "test"),
        Corpus(tuple(dev), "test"),
    )
