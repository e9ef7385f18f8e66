import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seqhints.constraints import check_full
from seqhints.synth import SynthConfig, generate, split, syntax_alphabet


def test_default_config_satisfies_constraint():
    corpus = generate(SynthConfig(seed=7), 1000)
    assert len(corpus) == 1000
    assert all(check_full(ex.y1, ex.y2) for ex in corpus)


def test_no_entities_regime():
    cfg = SynthConfig(entity_in_np_rate=0.0, exception_rate=0.0, nnp_in_np_rate=0.0, seed=3)
    corpus = generate(cfg, 300)
    assert all(set(ex.y2.labels) == {"O"} for ex in corpus)
    assert all(pos not in ("NNP", "NNPS") for ex in corpus for pos, _ in ex.y1.labels)


def test_impossible_config_rejected():
    with pytest.raises(ValueError):
        SynthConfig(entity_in_np_rate=0.0, exception_rate=0.0, nnp_in_np_rate=0.5)
    with pytest.raises(ValueError):
        SynthConfig(np_rate=1.5)
    with pytest.raises(ValueError):
        SynthConfig(vocab_size=5)
    with pytest.raises(ValueError):
        SynthConfig(mean_len=30, max_len=20)


def test_deterministic():
    a = generate(SynthConfig(seed=5), 200)
    b = generate(SynthConfig(seed=5), 200)
    c = generate(SynthConfig(seed=6), 200)
    assert a == b
    assert a != c


def test_mean_length():
    cfg = SynthConfig(seed=1)
    corpus = generate(cfg, 1000)
    mean = np.mean([len(ex.sentence) for ex in corpus])
    assert abs(mean - cfg.mean_len) <= 0.1 * cfg.mean_len
    assert max(len(ex.sentence) for ex in corpus) <= cfg.max_len


def test_exceptions_are_generated():
    corpus = generate(SynthConfig(exception_rate=0.2, seed=2), 300)
    outside = [
        (pos, chunk) for ex in corpus for pos, chunk in ex.y1.labels
        if pos in ("NNP", "NNPS") and not chunk.endswith("-NP")
    ]
    assert outside
    assert all(check_full(ex.y1, ex.y2) for ex in corpus)


def test_syntax_alphabet_covers_generated_pairs():
    cfg = SynthConfig(seed=4)
    alpha = syntax_alphabet(cfg)
    corpus = generate(cfg, 500)
    assert {lab for ex in corpus for lab in ex.y1.labels} <= set(alpha.labels)


def test_config_text_round_trip():
    cfg = SynthConfig(vocab_size=123, entity_types=("PER", "LOC"), seed=9)
    assert SynthConfig.from_text(cfg.to_text()) == cfg
    with pytest.raises(ValueError):
        SynthConfig.from_text("colour = blue\n")


def test_split_partition_and_roles():
    corpus = generate(SynthConfig(seed=0), 100)
    parts = split(corpus, {"d1": 20, "d2": 30, "unlab": 40, "test": 10}, seed=1)
    ids = [ex.id for part in parts for ex in part]
    assert sorted(ids, key=int) == [ex.id for ex in corpus]
    assert all(ex.y2 is None for ex in parts.d1) and parts.d1.role == "labeled-1"
    assert all(ex.y1 is None for ex in parts.d2) and parts.d2.role == "labeled-2"
    assert all(ex.y1 is not None and ex.y2 is None for ex in parts.unlab)
    assert all(ex.y1 is not None and ex.y2 is not None for ex in parts.test)
    two = split(corpus, {"unlab": 50}, seed=1, mode="two-sided")
    assert all(ex.y1 is None and ex.y2 is None for ex in two.unlab)


def test_split_errors():
    corpus = generate(SynthConfig(seed=0), 10)
    with pytest.raises(ValueError):
        split(corpus, {"d1": 8, "d2": 8})
    with pytest.raises(ValueError):
        split(corpus, {"train": 1})
    with pytest.raises(ValueError):
        split(corpus, {"d1": 1}, mode="sideways")


@settings(max_examples=15)
@given(
    st.floats(0, 1), st.floats(0, 1), st.floats(0.01, 1), st.floats(0, 0.3),
    st.integers(10, 200), st.integers(0, 10**6),
)
def test_generated_triples_always_compatible(np_rate, nnp_rate, ent_rate, exc_rate, vocab, seed):
    cfg = SynthConfig(
        vocab_size=vocab, np_rate=np_rate, nnp_in_np_rate=nnp_rate, entity_in_np_rate=ent_rate,
        exception_rate=exc_rate, mean_len=6, max_len=12, seed=seed,
    )
    for ex in generate(cfg, 40):
        assert check_full(ex.y1, ex.y2) == 1


@settings(max_examples=10)
@given(st.integers(0, 10**6), st.integers(1, 50))
def test_split_disjoint_and_seeded(seed, k):
    corpus = generate(SynthConfig(seed=0, mean_len=4, max_len=8), 60)
    sizes = {"d1": k // 2, "d2": k - k // 2, "unlab": 10}
    a, b = split(corpus, sizes, seed=seed), split(corpus, sizes, seed=seed)
    assert a == b
    ids = [ex.id for part in a for ex in part]
    assert len(ids) == len(set(ids)) == k + 10
