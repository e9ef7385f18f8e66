"""Domain types, BIO span handling and CoNLL column I/O.

Task 1 is the syntactic task: every token carries a composite
``(pos, chunk)`` label which learners treat as a single atomic symbol.
Task 2 is named-entity recognition over a plain BIO alphabet.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

OUTSIDE = "O"
UNLABELED = "unlabeled"
ROLES = ("labeled-1", "labeled-2", UNLABELED, "test")
DEFAULT_ENTITY_TYPES = ("PER", "ORG", "LOC", "MISC")

# column index -> field; "token" is mandatory
DEFAULT_COLUMNS = {0: "token", 1: "pos", 2: "chunk", 3: "ner"}
FIELDS = ("token", "pos", "chunk", "ner")
MISSING = "_"  # column value of an absent labeling

Label = Hashable


class ConllError(ValueError):
    """Malformed CoNLL input; ``lineno`` is 1-based."""

    def __init__(self, message: str, lineno: int | None = None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


def bio_part(label: Label) -> str:
    """The BIO-coded component of a label: the label itself, or the chunk of a composite."""
    return label[1] if isinstance(label, tuple) else label


def is_bio_tag(tag: str) -> bool:
    return tag == OUTSIDE or (len(tag) > 2 and tag[:2] in ("B-", "I-"))


def can_follow(prev: str | None, tag: str) -> bool:
    """Whether BIO tag ``tag`` may follow ``prev`` (``None`` = sentence start)."""
    if not tag.startswith("I-"):
        return True
    return prev is not None and prev[2:] == tag[2:] and prev[:2] in ("B-", "I-")


@dataclass(frozen=True)
class LabelAlphabet:
    task_name: str
    labels: tuple
    bio_scheme: bool = False

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if len(labels) < 2:
            raise ValueError(f"alphabet {self.task_name!r} needs at least 2 labels")
        if len(set(labels)) != len(labels):
            raise ValueError(f"alphabet {self.task_name!r} has duplicate labels")
        if any(lab in ("", None) for lab in labels):
            raise ValueError("labels must be non-empty")
        if self.bio_scheme:
            if OUTSIDE not in labels:
                raise ValueError("BIO alphabet must contain 'O'")
            bad = [lab for lab in labels if not (isinstance(lab, str) and is_bio_tag(lab))]
            if bad:
                raise ValueError(f"not BIO labels: {bad}")
        if self.composite:
            bad = [lab for lab in labels if len(lab) != 2 or not is_bio_tag(lab[1])]
            if bad:
                raise ValueError(f"composite labels need a BIO chunk part: {bad}")

    def __len__(self):
        return len(self.labels)

    def __contains__(self, label):
        return label in self.index

    @cached_property
    def index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)}

    @property
    def composite(self) -> bool:
        return all(isinstance(lab, tuple) for lab in self.labels)

    @property
    def has_spans(self) -> bool:
        return self.bio_scheme or self.composite

    @cached_property
    def transition_mask(self) -> tuple[np.ndarray, np.ndarray]:
        """Boolean (start, transition) masks of label successions that keep BIO well-formed.

        Alphabets without span structure allow everything.
        """
        n = len(self.labels)
        if not self.has_spans:
            return np.ones(n, dtype=bool), np.ones((n, n), dtype=bool)
        tags = [bio_part(lab) for lab in self.labels]
        start = np.array([can_follow(None, t) for t in tags])
        trans = np.array([[can_follow(p, t) for t in tags] for p in tags])
        return start, trans


def bio_alphabet(task_name: str, types: Iterable[str] = DEFAULT_ENTITY_TYPES) -> LabelAlphabet:
    labels = [OUTSIDE]
    for t in types:
        labels += [f"B-{t}", f"I-{t}"]
    return LabelAlphabet(task_name, tuple(labels), bio_scheme=True)


NER_ALPHABET = bio_alphabet("ner")


def composite_alphabet(pairs: Iterable[tuple[str, str]], task_name: str = "syntax") -> LabelAlphabet:
    """Task-1 alphabet over the given (pos, chunk) pairs, in sorted order."""
    return LabelAlphabet(task_name, tuple(sorted(set(pairs))))


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[str, ...]
    id: str

    def __post_init__(self):
        tokens = tuple(self.tokens)
        object.__setattr__(self, "tokens", tokens)
        if not tokens:
            raise ValueError(f"sentence {self.id!r} is empty")
        for tok in tokens:
            if not tok or any(c in tok for c in "\t\n\r"):
                raise ValueError(f"bad token {tok!r} in sentence {self.id!r}")

    def __len__(self):
        return len(self.tokens)


@dataclass(frozen=True)
class Labeling:
    alphabet: LabelAlphabet
    labels: tuple

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        index = self.alphabet.index
        for lab in labels:
            if lab not in index:
                raise ValueError(f"label {lab!r} not in alphabet {self.alphabet.task_name!r}")
        if self.alphabet.has_spans:
            prev = None
            for i, lab in enumerate(labels):
                tag = bio_part(lab)
                if not can_follow(prev, tag):
                    raise ValueError(f"ill-formed BIO at position {i}: {prev} -> {tag}")
                prev = tag

    @classmethod
    def from_indices(cls, alphabet: LabelAlphabet, indices) -> "Labeling":
        return cls(alphabet, tuple(alphabet.labels[int(i)] for i in indices))

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    @property
    def indices(self) -> np.ndarray:
        index = self.alphabet.index
        return np.array([index[lab] for lab in self.labels], dtype=np.intp)

    def bio(self) -> list[str]:
        return [bio_part(lab) for lab in self.labels]


@dataclass(frozen=True)
class Example:
    sentence: Sentence
    y1: Labeling | None = None
    y2: Labeling | None = None

    def __post_init__(self):
        for name in ("y1", "y2"):
            lab = getattr(self, name)
            if lab is not None and len(lab) != len(self.sentence):
                raise ValueError(
                    f"{name} length {len(lab)} != sentence length {len(self.sentence)} "
                    f"(example {self.sentence.id!r})"
                )

    @property
    def id(self) -> str:
        return self.sentence.id

    def labeling(self, task: int) -> Labeling | None:
        return self.y1 if task == 1 else self.y2

    def with_labels(self, task: int, labeling: Labeling | None) -> "Example":
        if task == 1:
            return Example(self.sentence, labeling, self.y2)
        return Example(self.sentence, self.y1, labeling)

    def strip(self, keep_y1: bool = False) -> "Example":
        return Example(self.sentence, self.y1 if keep_y1 else None, None)


@dataclass(frozen=True)
class Corpus:
    examples: tuple[Example, ...] = ()
    role: str | None = None
    # BIO repairs made while parsing; metadata only
    repairs: int = field(default=0, compare=False)

    def __post_init__(self):
        examples = tuple(self.examples)
        object.__setattr__(self, "examples", examples)
        if self.role is not None and self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}")
        for ex in examples:
            check_role(ex, self.role)

    def __len__(self):
        return len(self.examples)

    def __iter__(self):
        return iter(self.examples)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Corpus(self.examples[i], self.role)
        return self.examples[i]

    def with_role(self, role: str | None) -> "Corpus":
        return Corpus(self.examples, role)

    def labelings(self, task: int) -> list[Labeling]:
        out = []
        for ex in self.examples:
            lab = ex.labeling(task)
            if lab is None:
                raise ValueError(f"example {ex.id!r} has no task-{task} labeling")
            out.append(lab)
        return out

    @property
    def sentences(self) -> list[Sentence]:
        return [ex.sentence for ex in self.examples]


def check_role(ex: Example, role: str | None) -> None:
    if role == "labeled-1" and ex.y1 is None:
        raise ValueError(f"labeled-1 example {ex.id!r} lacks y1")
    if role == "labeled-2" and ex.y2 is None:
        raise ValueError(f"labeled-2 example {ex.id!r} lacks y2")
    if role == UNLABELED and ex.y2 is not None:
        raise ValueError(f"unlabeled example {ex.id!r} carries y2")
    if role == "test" and ex.y1 is None and ex.y2 is None:
        raise ValueError(f"test example {ex.id!r} has no labeling")


@dataclass(frozen=True)
class Span:
    start: int
    end: int
    kind: str

    def __post_init__(self):
        if not 0 <= self.start < self.end:
            raise ValueError(f"bad span [{self.start}, {self.end})")


def extract_spans(labeling: Labeling | Sequence[str]) -> list[Span]:
    """Maximal ``B-X (I-X)*`` runs, left to right.

    Accepts a BIO or composite :class:`Labeling` (chunk part used), or a raw
    list of BIO tags.
    """
    if isinstance(labeling, Labeling):
        if not labeling.alphabet.has_spans:
            raise ValueError(f"alphabet {labeling.alphabet.task_name!r} is not BIO")
        tags = labeling.bio()
    else:
        tags = list(labeling)
    spans = []
    start = kind = None
    for i, tag in enumerate(tags):
        if start is not None and not (tag.startswith("I-") and tag[2:] == kind):
            spans.append(Span(start, i, kind))
            start = None
        if tag.startswith("B-") or (tag.startswith("I-") and start is None):
            start, kind = i, tag[2:]
    if start is not None:
        spans.append(Span(start, len(tags), kind))
    return spans


def spans_to_bio(spans: Iterable[Span], length: int) -> list[str]:
    tags = [OUTSIDE] * length
    for sp in spans:
        if sp.end > length:
            raise ValueError(f"span {sp} exceeds length {length}")
        tags[sp.start] = f"B-{sp.kind}"
        for i in range(sp.start + 1, sp.end):
            tags[i] = f"I-{sp.kind}"
    return tags


def repair_bio(tags: Sequence[str]) -> tuple[list[str], list[int]]:
    """Rewrite every I-X with an incompatible predecessor to B-X.

    Returns the repaired tags and the positions that changed.
    """
    out, fixed = [], []
    prev = None
    for i, tag in enumerate(tags):
        if not can_follow(prev, tag):
            tag = "B-" + tag[2:]
            fixed.append(i)
        out.append(tag)
        prev = tag
    return out, fixed


# --- CoNLL column files -----------------------------------------------------


def _check_columns(column_spec: Mapping[int, str]) -> dict[int, str]:
    spec = {int(k): v for k, v in column_spec.items()}
    fields = list(spec.values())
    unknown = set(fields) - set(FIELDS)
    if unknown:
        raise ValueError(f"unknown column fields {sorted(unknown)}")
    if "token" not in fields or len(set(fields)) != len(fields):
        raise ValueError("column spec needs exactly one 'token' column and no repeats")
    if ("pos" in fields) != ("chunk" in fields):
        raise ValueError("'pos' and 'chunk' columns come together")
    if sorted(spec) != list(range(len(spec))):
        raise ValueError("column indices must be 0..k-1")
    return spec


def parse_conll(
    text: str,
    column_spec: Mapping[int, str] = DEFAULT_COLUMNS,
    role: str | None = None,
    ner_alphabet: LabelAlphabet = NER_ALPHABET,
    syntax_alphabet: LabelAlphabet | None = None,
) -> Corpus:
    """Parse whitespace-separated CoNLL columns into a :class:`Corpus`.

    Blank lines separate sentences; ``-DOCSTART-`` lines are skipped and a
    ``# id = <id>`` comment names the following sentence (otherwise ids are
    the sentence's ordinal position). A labeling whose columns are ``_`` on
    every token of a sentence is absent (``None``). I-X tags with an incompatible
    predecessor are rewritten to B-X; the number of such rewrites is kept on
    ``Corpus.repairs``. When ``syntax_alphabet`` is None the task-1 alphabet is
    built from the (pos, chunk) pairs seen in the file.
    """
    spec = _check_columns(column_spec)
    ncol = len(spec)
    col = {v: k for k, v in spec.items()}

    blocks: list[tuple[str | None, list[tuple[int, list[str]]]]] = []
    rows: list[tuple[int, list[str]]] = []
    pending_id = None
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped:
            if rows:
                blocks.append((pending_id, rows))
                rows, pending_id = [], None
            continue
        if stripped.startswith("-DOCSTART-"):
            continue
        if stripped.startswith("#") and not rows:
            key, _, value = stripped[1:].partition("=")
            if key.strip() == "id" and value.strip():
                pending_id = value.strip()
                continue
        parts = stripped.split()
        if len(parts) != ncol:
            raise ConllError(f"expected {ncol} columns, found {len(parts)}", lineno)
        rows.append((lineno, parts))
    if rows:
        blocks.append((pending_id, rows))

    repairs = 0
    parsed = []
    for ordinal, (sid, rows) in enumerate(blocks):
        tokens = [parts[col["token"]] for _, parts in rows]
        y1 = y2 = None
        if "pos" in col and not _absent(rows, col["pos"], col["chunk"]):
            chunks = [parts[col["chunk"]] for _, parts in rows]
            for (lineno, _), tag in zip(rows, chunks):
                if not is_bio_tag(tag):
                    raise ConllError(f"unknown chunk label {tag!r}", lineno)
            chunks, fixed = repair_bio(chunks)
            repairs += len(fixed)
            y1 = [(parts[col["pos"]], c) for (_, parts), c in zip(rows, chunks)]
        if "ner" in col and not _absent(rows, col["ner"]):
            ner = [parts[col["ner"]] for _, parts in rows]
            for (lineno, _), tag in zip(rows, ner):
                if not is_bio_tag(tag) or tag not in ner_alphabet:
                    raise ConllError(f"unknown NER label {tag!r}", lineno)
            ner, fixed = repair_bio(ner)
            repairs += len(fixed)
            y2 = ner
        parsed.append((sid if sid is not None else str(ordinal), tokens, y1, y2, rows))

    if "pos" in col and syntax_alphabet is None and parsed:
        pairs = {lab for _, _, y1, _, _ in parsed if y1 is not None for lab in y1}
        if len(pairs) == 1:
            raise ConllError("only one (pos, chunk) pair in file; pass syntax_alphabet explicitly")
        if pairs:
            syntax_alphabet = composite_alphabet(pairs)

    examples = []
    for sid, tokens, y1, y2, rows in parsed:
        if y1 is not None:
            for (lineno, _), lab in zip(rows, y1):
                if lab not in syntax_alphabet:
                    raise ConllError(f"unknown syntax label {lab!r}", lineno)
        examples.append(
            Example(
                Sentence(tuple(tokens), sid),
                Labeling(syntax_alphabet, y1) if y1 is not None else None,
                Labeling(ner_alphabet, y2) if y2 is not None else None,
            )
        )
    return Corpus(tuple(examples), role, repairs=repairs)


def _absent(rows, *cols) -> bool:
    return all(parts[c] == MISSING for _, parts in rows for c in cols)


def write_conll(
    corpus: Corpus | Iterable[Example],
    column_spec: Mapping[int, str] = DEFAULT_COLUMNS,
    write_ids: bool = False,
) -> str:
    """Inverse of :func:`parse_conll`: single-space columns, a blank line after every sentence.

    Absent labelings are written as ``_`` columns.
    """
    spec = _check_columns(column_spec)
    fields = [spec[i] for i in range(len(spec))]
    out = []
    for ex in corpus:
        if write_ids:
            out.append(f"# id = {ex.id}\n")
        for i, tok in enumerate(ex.sentence.tokens):
            cells = []
            for f in fields:
                if f == "token":
                    cells.append(tok)
                elif f in ("pos", "chunk"):
                    cells.append(MISSING if ex.y1 is None else ex.y1.labels[i][f == "chunk"])
                else:
                    cells.append(MISSING if ex.y2 is None else ex.y2.labels[i])
            out.append(" ".join(cells) + "\n")
        out.append("\n")
    return "".join(out)


def read_conll(path, column_spec: Mapping[int, str] = DEFAULT_COLUMNS, **kwargs) -> Corpus:
    with open(path, encoding="utf-8") as fh:
        return parse_conll(fh.read(), column_spec, **kwargs)


def save_conll(corpus: Corpus, path, column_spec: Mapping[int, str] = DEFAULT_COLUMNS, **kwargs) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(write_conll(corpus, column_spec, **kwargs))
