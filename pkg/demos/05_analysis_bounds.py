"""Discrimination of rule sets, weak usefulness, and the error bound on toy instances.

Run: python3 demos/05_analysis_bounds.py
"""

from fractions import Fraction

from seqhints.analysis import (
    ToyInstance,
    check_weakly_useful,
    discrimination,
    hamming_threshold,
    sample_premise_instance,
    verify_theorem1_bound,
)
from seqhints.constraints import make_constraint
from seqhints.core import NER_ALPHABET
from seqhints.hmm import HmmLearner
from seqhints.synth import SynthConfig, generate, split

parts = split(generate(SynthConfig(seed=2), 2500), {"d2": 100, "unlab": 2000, "test": 400}, seed=2)
h0 = HmmLearner(2, NER_ALPHABET).fit(list(parts.d2))

for kind in ("constant", "pos-only", "np-only", "full"):
    rep = discrimination(make_constraint(kind), parts.unlab, h0)
    print(f"{kind:9s} discrimination {rep.discrimination:.3f}")
print(f"hamming threshold at mean length {rep.mean_len:.1f}: {rep.thresholds['hamming']:.0f}"
      f" (for length 26 and 9 labels: {hamming_threshold(26, 9)})")

wu = check_weakly_useful(h0, parts.test, Fraction(1, 100))
print(f"\nweakly useful at 0.01: coverage {wu.coverage_ok}, indicative {wu.indicative_ok}")

# The bound on exact toy distributions. Without requiring that the rules
# admit the true label, small instances can break it.
inst = ToyInstance(("0", "1"), ((Fraction(1, 10), "1", "0"), (Fraction(9, 10), "0", "1")),
                   frozenset({"0"}), Fraction(1, 20))
r = verify_theorem1_bound(inst)
print(f"\ncounterexample: status {r.status}, left {r.left}, right {r.right}")

held = sum(verify_theorem1_bound(sample_premise_instance(s)).holds for s in range(100))
print(f"random premise-satisfying instances where the bound holds: {held}/100")
