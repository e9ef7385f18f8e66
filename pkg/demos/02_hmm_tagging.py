"""Train first-order taggers on synthetic data and compare them.

Run: python3 demos/02_hmm_tagging.py
"""

from seqhints.core import NER_ALPHABET
from seqhints.evaluation import mcnemar, span_f1
from seqhints.hmm import HmmLearner
from seqhints.perceptron import PerceptronLearner
from seqhints.synth import SynthConfig, generate, split

corpus = generate(SynthConfig(seed=1), 1400)
parts = split(corpus, {"d2": 400, "test": 1000}, seed=1)
gold = parts.test.labelings(2)

preds = {}
for name, learner in [("hmm", HmmLearner(2, NER_ALPHABET)), ("perceptron", PerceptronLearner(2, NER_ALPHABET, epochs=5))]:
    model = learner.fit(list(parts.d2))
    preds[name] = [model.decode(ex.sentence)[0] for ex in parts.test]
    r = span_f1(gold, preds[name])
    print(f"{name:10s} P {r.precision:.3f}  R {r.recall:.3f}  F {r.f1:.3f}")

sample = parts.test[0]
print("\n" + " ".join(f"{w}/{y}" for w, y in zip(sample.sentence.tokens, preds["hmm"][0].labels)))

test = mcnemar(preds["hmm"], preds["perceptron"], gold)
print(f"\nMcNemar b={test.b} c={test.c} p={test.p_value:.4g} ({test.method})")
