"""Which entity labelings survive the compatibility rules for a tagged sentence?

Run: python3 demos/01_constraints_intro.py
"""

from seqhints.constraints import check_full, count_compatible, make_constraint
from seqhints.core import NER_ALPHABET

words = ["George", "Washington", "went", "to", "Washington", "yesterday"]
y1 = [("NNP", "B-NP"), ("NNP", "I-NP"), ("VBD", "B-VP"), ("TO", "B-PP"), ("NNP", "B-NP"), ("NN", "B-NP")]

candidates = {
    "entity spans a verb": ["B-PER", "I-PER", "I-PER", "O", "B-ORG", "O"],
    "drops a proper noun": ["B-PER", "I-PER", "O", "O", "O", "O"],
    "entity on a common noun": ["B-PER", "I-PER", "O", "O", "B-ORG", "I-ORG"],
    "plausible": ["B-PER", "I-PER", "O", "O", "B-ORG", "O"],
}

print(" ".join(f"{w}/{p}/{c}" for w, (p, c) in zip(words, y1)))
for name, y2 in candidates.items():
    print(f"  {check_full(y1, y2)}  {name:25s} {' '.join(y2)}")

# How much does each rule set prune the space of well-formed labelings?
for kind in ("constant", "pos-only", "np-only", "full"):
    print(f"{kind:9s} admits {count_compatible(y1, NER_ALPHABET, make_constraint(kind)):6d} labelings")
