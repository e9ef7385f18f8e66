import pytest
from conftest import GEORGE
from hypothesis import given
from hypothesis import strategies as st

from seqhints.core import (
    NER_ALPHABET,
    ConllError,
    Corpus,
    Example,
    Labeling,
    LabelAlphabet,
    Sentence,
    Span,
    composite_alphabet,
    extract_spans,
    parse_conll,
    repair_bio,
    spans_to_bio,
    write_conll,
)


def test_george_bush_block():
    corpus = parse_conll(GEORGE)
    assert len(corpus) == 1
    ex = corpus[0]
    assert ex.sentence.tokens == ("George", "Bush", "spoke", "to", "Congress", "today")
    assert ex.y1.labels == (
        ("NNP", "B-NP"), ("NNP", "I-NP"), ("VBD", "B-VP"), ("TO", "B-PP"), ("NNP", "B-NP"), ("NN", "B-NP"),
    )
    assert ex.y2.labels == ("B-PER", "I-PER", "O", "O", "B-ORG", "O")
    assert corpus.repairs == 0


def test_empty_file():
    assert len(parse_conll("")) == 0
    assert write_conll(Corpus(())) == ""


def test_repair_leading_inside_tag():
    text = "X NNP B-NP I-PER\nran VBD B-VP O\n\n"
    corpus = parse_conll(text)
    assert corpus[0].y2.labels == ("B-PER", "O")
    assert corpus.repairs == 1
    assert write_conll(corpus) == "X NNP B-NP B-PER\nran VBD B-VP O\n\n"


def test_round_trip_byte_for_byte():
    assert write_conll(parse_conll(GEORGE)) == GEORGE


def test_docstart_ids_and_ordinals():
    text = "-DOCSTART- -X- O O\n\n# id = first\n" + GEORGE + GEORGE
    corpus = parse_conll(text)
    assert [ex.id for ex in corpus] == ["first", "1"]
    again = parse_conll(write_conll(corpus, write_ids=True))
    assert [ex.id for ex in again] == ["first", "1"]


def test_absent_labeling_written_as_placeholder():
    ex = parse_conll(GEORGE)[0]
    stripped = Corpus((Example(ex.sentence, None, ex.y2),))
    text = write_conll(stripped)
    assert text.splitlines()[0] == "George _ _ B-PER"
    back = parse_conll(text)
    assert back[0].y1 is None and back[0].y2 == ex.y2


def test_bad_column_count_reports_line():
    with pytest.raises(ConllError, match="line 2"):
        parse_conll("a NN B-NP O\nb NN B-NP\n\n")


def test_unknown_ner_label():
    with pytest.raises(ConllError, match="unknown NER label"):
        parse_conll("a NN B-NP B-FOO\nb NN I-NP O\n\n")


def test_custom_columns():
    corpus = parse_conll("George B-PER\nBush I-PER\n\n", {0: "token", 1: "ner"})
    assert corpus[0].y1 is None
    assert corpus[0].y2.labels == ("B-PER", "I-PER")


def test_extract_spans_examples():
    assert extract_spans(["B-PER", "I-PER", "O", "O", "B-ORG", "O"]) == [Span(0, 2, "PER"), Span(4, 5, "ORG")]
    assert extract_spans(["O", "O", "O"]) == []
    chunks = ["B-NP", "I-NP", "B-VP", "B-PP", "B-NP", "B-NP"]
    got = [(s.start, s.end, s.kind) for s in extract_spans(chunks)]
    assert got == [(0, 2, "NP"), (2, 3, "VP"), (3, 4, "PP"), (4, 5, "NP"), (5, 6, "NP")]


def test_composite_spans_use_chunk_part():
    y1 = parse_conll(GEORGE)[0].y1
    assert [s.kind for s in extract_spans(y1)] == ["NP", "VP", "PP", "NP", "NP"]


def test_labeling_rejects_ill_formed():
    with pytest.raises(ValueError, match="ill-formed"):
        Labeling(NER_ALPHABET, ("O", "I-PER"))
    with pytest.raises(ValueError, match="not in alphabet"):
        Labeling(NER_ALPHABET, ("B-XYZ",))


def test_role_constraints():
    ex = parse_conll(GEORGE)[0]
    with pytest.raises(ValueError):
        Corpus((ex.strip(),), "labeled-2")
    with pytest.raises(ValueError):
        Corpus((ex,), "unlabeled")
    with pytest.raises(ValueError):
        Corpus((ex.strip(),), "test")
    assert len(Corpus((ex.strip(keep_y1=True),), "unlabeled")) == 1


def test_alphabet_validation():
    with pytest.raises(ValueError):
        LabelAlphabet("x", ("A",))
    with pytest.raises(ValueError):
        LabelAlphabet("x", ("A", "A"))
    alpha = composite_alphabet([("NN", "B-NP"), ("DT", "B-NP"), ("NN", "B-NP")])
    assert alpha.labels == (("DT", "B-NP"), ("NN", "B-NP"))


# --- properties ---------------------------------------------------------------

TYPES = ["PER", "ORG", "LOC", "MISC"]
CHUNKS = ["NP", "VP", "PP"]
POS = ["NN", "NNP", "VBD", "IN", "DT"]


@st.composite
def bio_tags(draw, kinds, n):
    tags = []
    for i in range(n):
        choice = draw(st.sampled_from(["O", "B", "I"]))
        if choice == "I" and tags and tags[-1] != "O":
            tags.append("I-" + tags[-1][2:])
        elif choice == "O":
            tags.append("O")
        else:
            tags.append("B-" + draw(st.sampled_from(kinds)))
    return tags


@st.composite
def examples(draw):
    n = draw(st.integers(1, 8))
    tokens = draw(st.lists(st.text("abcXYZ", min_size=1, max_size=5), min_size=n, max_size=n))
    ner = draw(bio_tags(TYPES, n))
    chunks = draw(bio_tags(CHUNKS, n))
    pos = draw(st.lists(st.sampled_from(POS), min_size=n, max_size=n))
    return tokens, list(zip(pos, chunks)), ner


ALL_PAIRS = composite_alphabet(
    [(p, c) for p in POS for c in ["O"] + [f"{b}-{k}" for k in CHUNKS for b in "BI"]]
)


@given(st.lists(examples(), max_size=5))
def test_parse_write_identity(rows):
    exs = []
    for i, (tokens, y1, ner) in enumerate(rows):
        exs.append(Example(Sentence(tokens, str(i)), Labeling(ALL_PAIRS, y1), Labeling(NER_ALPHABET, ner)))
    corpus = Corpus(tuple(exs))
    text = write_conll(corpus)
    back = parse_conll(text, syntax_alphabet=ALL_PAIRS)
    assert back == corpus
    assert write_conll(back) == text


@given(st.integers(1, 12).flatmap(lambda n: bio_tags(TYPES, n)))
def test_spans_reencode(tags):
    assert spans_to_bio(extract_spans(tags), len(tags)) == tags
    assert repair_bio(tags) == (tags, [])
