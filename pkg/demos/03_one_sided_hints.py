"""Self-labelled data filtered by gold syntax versus plain self-training.

Run: python3 demos/03_one_sided_hints.py  (about half a minute)
"""

from seqhints.constraints import make_constraint
from seqhints.core import NER_ALPHABET, Corpus
from seqhints.evaluation import span_f1
from seqhints.hmm import HmmLearner
from seqhints.synth import SynthConfig, generate, split
from seqhints.training import TrainConfig, one_sided_hints, self_train


def f1(model, test):
    return span_f1(test.labelings(2), [model.decode(ex.sentence)[0] for ex in test]).f1


parts = split(generate(SynthConfig(seed=4), 3100), {"d2": 100, "unlab": 2000, "test": 1000}, seed=4)
learner = HmmLearner(2, NER_ALPHABET)
print(f"baseline       F {f1(learner.fit(list(parts.d2)), parts.test):.3f}")

plain = Corpus(tuple(ex.strip() for ex in parts.unlab), "unlabeled")
st = self_train(learner, parts.d2, plain, TrainConfig(iterations=3, top_r=200, confidence_filter=True))
print(f"self-training  F {f1(st.model, parts.test):.3f}")

hints = one_sided_hints(learner, parts.d2, parts.unlab, make_constraint("full"), TrainConfig(iterations=3))
print(f"one-sided      F {f1(hints.model, parts.test):.3f}")
print("\nper-iteration trace of the hinted run:")
print(hints.trace_tsv())
