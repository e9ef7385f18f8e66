"""Two taggers teach each other through the compatibility rules.

Run: python3 demos/04_two_sided_hints.py  (about half a minute)
"""

from seqhints.constraints import make_constraint
from seqhints.core import NER_ALPHABET
from seqhints.evaluation import span_f1
from seqhints.hmm import HmmLearner
from seqhints.synth import SynthConfig, generate, split, syntax_alphabet
from seqhints.training import TrainConfig, two_sided_hints


def f1(model, test, task):
    return span_f1(test.labelings(task), [model.decode(ex.sentence)[0] for ex in test]).f1


sizes = {"d1": 1000, "d2": 100, "unlab": 5000, "test": 1000, "dev": 500}
parts = split(generate(SynthConfig(seed=7), sum(sizes.values())), sizes, seed=7, mode="two-sided")
l1, l2 = HmmLearner(1, syntax_alphabet(SynthConfig())), HmmLearner(2, NER_ALPHABET)
base1, base2 = f1(l1.fit(list(parts.d1)), parts.test, 1), f1(l2.fit(list(parts.d2)), parts.test, 2)

res = two_sided_hints(l1, l2, parts.d1, parts.d2, parts.unlab, make_constraint("full"),
                      TrainConfig.with_growth(50, iterations=10), dev=parts.dev)
print(f"syntax  F {base1:.3f} -> {f1(res.models[1], parts.test, 1):.3f}")
print(f"entity  F {base2:.3f} -> {f1(res.models[2], parts.test, 2):.3f}")
print(f"dev-selected iterations: {res.best_iteration}")
