"""
Grouping letters into pseudo-syllables
======================================

Each letter of a source word gets one of five labels: O (onset), N
(nucleus), Cd (coda), ON (an onset that opens a syllable of its own with an
inserted vowel) and X (dropped).  The labels decide how letters group into
syllables shaped like the target language's.
"""

from pseudosyl.phonology import load_resource, parse_pronunciation
from pseudosyl.pseudo_syllable import (
    best_ground_truth_labels,
    derive_ground_truth_labels,
    form_pseudo_syllables,
    generate_smoothed_contexts,
    pseudo_structure,
)

vie = load_resource("vietnamese")
word = vie.word("DISNEYLAND")
print(word.text, "letter classes:", "".join(word.classes))

# S opens a syllable of its own: its nucleus is the reserved @: placeholder,
# and the final D is dropped
labels = ["O", "N", "ON", "O", "N", "N", "O", "N", "Cd", "X"]
groups = form_pseudo_syllables(word, labels, vie)
print("pseudo-syllables:", " ".join(str(g) for g in groups))
print("structure:       ", pseudo_structure(groups))

# Training data only pairs words with pronunciations; the labels are searched
# for.  Every labeling whose grouping matches the target's syllable shapes is
# a candidate, ranked so that letters keep their natural role where possible
# and as few letters as possible are dropped (so D joins the coda here).
target = parse_pronunciation("d_< i 1 . s V: 1 . n e 1 . l a: n 1".split(), vie)
candidates = derive_ground_truth_labels(word, target, vie)
print(len(candidates), "labelings explain the pair; best:", best_ground_truth_labels(word, target, vie))

# The label model scores a letter from its neighbours.  Sparse windows are
# smoothed by swapping neighbours for their consonant/vowel class, then by
# backing off to the letter and finally to its class alone.
for ctx in generate_smoothed_contexts(("B", "E", "S"), ("C", "V", "C")):
    print(f"  order {ctx.order}: {' '.join(ctx.context)}")
