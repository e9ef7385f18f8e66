import inspect
import math

import numpy as np
import oracles
import pytest
from hypothesis import given
from hypothesis import strategies as st

from seqhints import _lattice
from seqhints.core import NER_ALPHABET, Corpus, Example, Labeling, LabelAlphabet, Sentence
from seqhints.hmm import (
    UNKNOWN,
    HmmLearner,
    HmmModel,
    confidence,
    dump_hmm,
    forward_log_prob,
    load_hmm,
    sequence_log_prob,
    train_hmm,
    viterbi_decode,
)

XY = LabelAlphabet("toy", ("X", "Y"))


def corpus(rows, alphabet=XY):
    return Corpus(tuple(
        Example(Sentence(words.split(), str(i)), None, Labeling(alphabet, labels))
        for i, (words, labels) in enumerate(rows)
    ))


def random_model(rng, labels=("X", "Y"), words=("a", "b", "c"), alphabet=None):
    alphabet = alphabet or LabelAlphabet("toy", labels)
    n, V = len(alphabet), len(words) + 1
    return HmmModel(
        alphabet,
        (UNKNOWN,) + tuple(words),
        rng.dirichlet(np.ones(n)),
        rng.dirichlet(np.ones(n), size=n),
        rng.uniform(0.05, 0.95, size=n),
        rng.dirichlet(np.ones(V), size=n),
    )


def test_defaults():
    params = inspect.signature(train_hmm).parameters
    assert params["alpha"].default == 0.001
    assert params["prune_threshold"].default == 1


def test_hand_counted_transition():
    alpha = 0.001
    model = train_hmm(corpus([("a b", ("X", "Y"))]), prune_threshold=0)
    assert model.transition[0, 1] == pytest.approx((1 + alpha) / (1 + 2 * alpha), abs=1e-15)
    # start: one X start, smoothed over two labels
    assert model.start[0] == pytest.approx((1 + alpha) / (1 + 2 * alpha), abs=1e-15)


def test_pruning_noop_when_every_word_is_frequent():
    rows = [("a b", ("X", "Y")), ("b a", ("Y", "X"))]
    m0 = train_hmm(corpus(rows), prune_threshold=0)
    m1 = train_hmm(corpus(rows), prune_threshold=1)
    assert m0.vocabulary == m1.vocabulary
    for name in ("start", "transition", "stop", "emission"):
        assert np.array_equal(getattr(m0, name), getattr(m1, name))


def test_rare_words_become_unknown():
    model = train_hmm(corpus([("a b a", ("X", "Y", "X"))]))
    assert model.vocabulary == (UNKNOWN, "a")
    assert list(model.word_ids(Sentence(("b", "zzz", "a"), "s"))) == [0, 0, 1]


def test_forced_path():
    model = HmmModel(
        XY, (UNKNOWN, "a"), np.array([0.5, 0.5]), np.full((2, 2), 0.5), np.array([0.5, 0.5]),
        np.array([[0.0, 1.0], [1.0, 0.0]]),
    )
    labels, _ = viterbi_decode(model, Sentence(("a", "a", "a"), "s"))
    assert labels.labels == ("X", "X", "X")


def test_single_token_unrolled():
    model = train_hmm(corpus([("a b", ("X", "Y")), ("a", ("X",))]), prune_threshold=0)
    s = Sentence(("a",), "s")
    expected = math.log(model.start[0]) + math.log(model.emission[0, 1]) + math.log(model.stop[0])
    assert sequence_log_prob(model, s, ("X",)) == pytest.approx(expected, abs=1e-12)


def test_viterbi_matches_enumeration_small():
    rng = np.random.default_rng(1)
    for _ in range(50):
        model = random_model(rng)
        sent = Sentence(tuple(rng.choice(["a", "b", "c", "d"], size=3)), "s")
        labels, score = viterbi_decode(model, sent)
        best, argmax, _ = oracles.brute_argmax(
            lambda seq: oracles.hmm_log_prob(model, sent.tokens, seq), ("X", "Y"), 3
        )
        assert score == pytest.approx(best, abs=1e-9)
        assert labels.labels in argmax
        assert sequence_log_prob(model, sent, labels) == pytest.approx(score, abs=1e-12)


def test_viterbi_respects_bio_on_ner_alphabet():
    rng = np.random.default_rng(2)
    for _ in range(5):
        model = random_model(rng, alphabet=NER_ALPHABET)
        sent = Sentence(("a", "b", "c"), "s")
        labels, score = viterbi_decode(model, sent)
        best, argmax, _ = oracles.brute_argmax(
            lambda seq: oracles.hmm_log_prob(model, sent.tokens, seq), NER_ALPHABET.labels, 3, bio=True
        )
        assert oracles.well_formed(labels.labels)
        assert score == pytest.approx(best, abs=1e-9)
        assert labels.labels in argmax


def test_forward_equals_enumeration():
    rng = np.random.default_rng(3)
    for n in (1, 2, 3):
        model = random_model(rng, labels=("X", "Y", "Z"))
        sent = Sentence(tuple(rng.choice(["a", "b", "c"], size=n)), "s")
        total = math.log(sum(
            math.exp(oracles.hmm_log_prob(model, sent.tokens, seq))
            for seq in oracles.all_labelings(("X", "Y", "Z"), n)
        ))
        assert forward_log_prob(model, sent) == pytest.approx(total, abs=1e-9)


def test_duplicating_a_sentence_raises_its_probability():
    rows = [("a b c", ("X", "Y", "X")), ("c b a", ("Y", "X", "Y"))]
    once = train_hmm(corpus(rows), prune_threshold=0)
    twice = train_hmm(corpus(rows + rows[:1]), prune_threshold=0)
    s = Sentence(("a", "b", "c"), "s")
    lab, _ = viterbi_decode(once, s)
    assert sequence_log_prob(twice, s, lab) >= sequence_log_prob(once, s, lab)


def test_weights_act_like_duplication():
    rows = [("a b c", ("X", "Y", "X")), ("c b a", ("Y", "X", "Y"))]
    dup = train_hmm(corpus(rows + rows[:1]), prune_threshold=0)
    weighted = train_hmm(corpus(rows), prune_threshold=0, weights=[2.0, 1.0])
    for name in ("start", "transition", "stop", "emission"):
        assert np.allclose(getattr(dup, name), getattr(weighted, name), atol=1e-15)


def test_training_errors():
    with pytest.raises(ValueError):
        train_hmm(Corpus(()))
    with pytest.raises(ValueError):
        train_hmm(corpus([("a", ("X",))]), alpha=0)


# --- confidence ---------------------------------------------------------------


def test_confidence_one_token_log2_margin():
    model = HmmModel(
        XY, (UNKNOWN, "a"), np.array([2 / 3, 1 / 3]), np.full((2, 2), 0.5), np.array([0.5, 0.5]),
        np.full((2, 2), 0.5),
    )
    assert confidence(model, Sentence(("a",), "s")) == pytest.approx(0.5, abs=1e-12)


def test_confidence_uniform_model_is_zero():
    model = HmmModel(
        XY, (UNKNOWN, "a"), np.full(2, 0.5), np.full((2, 2), 0.5), np.full(2, 0.5), np.full((2, 2), 0.5),
    )
    assert confidence(model, Sentence(("a", "a"), "s")) == 0.0


def test_confidence_without_second_path_is_one():
    start = np.array([0.0, -np.inf])
    trans = np.array([[0.0, -np.inf], [-np.inf, -np.inf]])
    emit = np.zeros((3, 2))
    best, second = _lattice.top2_scores(start, trans, emit, np.zeros(2))
    assert best == 0.0 and second == -np.inf
    assert _lattice.margin_confidence(best, second, 3) == 1.0


def test_decode_with_confidence_agrees():
    rng = np.random.default_rng(4)
    model = random_model(rng)
    s = Sentence(("a", "c", "b", "a"), "s")
    lab, conf = model.decode_with_confidence(s)
    assert lab == viterbi_decode(model, s)[0]
    assert conf == confidence(model, s)


def test_second_best_matches_enumeration():
    rng = np.random.default_rng(5)
    for _ in range(30):
        model = random_model(rng, labels=("X", "Y", "Z"))
        sent = Sentence(tuple(rng.choice(["a", "b", "c"], size=3)), "s")
        scores = sorted(
            (oracles.hmm_log_prob(model, sent.tokens, seq) for seq in oracles.all_labelings(("X", "Y", "Z"), 3)),
            reverse=True,
        )
        best, second = _lattice.top2_scores(*model.lattice(sent))
        assert best == pytest.approx(scores[0], abs=1e-9)
        assert second == pytest.approx(scores[1], abs=1e-9)


# --- serialisation ----------------------------------------------------------------


def test_dump_load_round_trip():
    model = train_hmm(corpus([("a b c", ("X", "Y", "X")), ("c b a", ("Y", "X", "Y"))]), prune_threshold=0)
    again = load_hmm(dump_hmm(model))
    assert again.vocabulary == model.vocabulary and again.alphabet == model.alphabet
    for name in ("start", "transition", "stop", "emission"):
        assert np.array_equal(getattr(again, name), getattr(model, name))
    assert dump_hmm(again) == dump_hmm(model)


def test_dump_load_composite_labels():
    from conftest import GEORGE
    from seqhints.core import parse_conll

    model = HmmLearner(1, parse_conll(GEORGE)[0].y1.alphabet).fit(list(parse_conll(GEORGE)))
    again = load_hmm(dump_hmm(model))
    assert again.alphabet.labels == model.alphabet.labels
    assert again.task == 1


# --- properties ---------------------------------------------------------------------

WORDS = ["a", "b", "c", "d"]


@st.composite
def toy_corpora(draw):
    rows = []
    for _ in range(draw(st.integers(1, 6))):
        n = draw(st.integers(1, 5))
        words = draw(st.lists(st.sampled_from(WORDS), min_size=n, max_size=n))
        labels = draw(st.lists(st.sampled_from(["X", "Y", "Z"]), min_size=n, max_size=n))
        rows.append((" ".join(words), tuple(labels)))
    return rows


XYZ = LabelAlphabet("toy", ("X", "Y", "Z"))


@given(toy_corpora(), st.sampled_from([0.001, 0.1, 1.0]), st.integers(0, 2))
def test_distributions_are_stochastic_and_positive(rows, alpha, prune):
    model = train_hmm(corpus(rows, XYZ), alpha=alpha, prune_threshold=prune)
    assert abs(model.start.sum() - 1) < 1e-9
    assert np.all(np.abs(model.transition.sum(axis=1) - 1) < 1e-9)
    assert np.all(np.abs(model.emission.sum(axis=1) - 1) < 1e-9)
    for table in (model.start, model.transition, model.stop, model.emission):
        assert np.all(table > 0)
    assert np.all(model.stop < 1)


@given(toy_corpora(), st.lists(st.sampled_from(WORDS + ["zz"]), min_size=1, max_size=6))
def test_confidence_deterministic_in_unit_interval(rows, words):
    model = train_hmm(corpus(rows, XYZ))
    s = Sentence(tuple(words), "s")
    c = confidence(model, s)
    assert 0.0 <= c < 1.0
    assert c == confidence(model, s)
