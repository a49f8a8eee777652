"""
The rule-based engine
=====================

The rule-based engine segments a word into vowel and consonant clusters,
assigns roles, maps each unit to phonemes with first-match rules and picks
tones from the phonemes.  Liquids at the head of a consonant cluster are
dropped and other stranded consonants get an inserted vowel.
"""

from pseudosyl.phonology import load_resource, serialize_pronunciation
from pseudosyl.symbolic import (
    assign_roles,
    load_ruleset,
    postprocess_vowels,
    segment_clusters,
    transliterate_symbolic,
)

yue = load_resource("cantonese")
rules = load_ruleset("cantonese")

# ALBANIA step by step
word = yue.word("ALBANIA")
clusters = segment_clusters(word)
print("clusters:", " ".join("".join(c.graphemes) for c in clusters))
roles = assign_roles(clusters, rules)
print("roles:   ", " ".join(str(s) for s in roles))
print("split:   ", " ".join(str(s) for s in postprocess_vowels(roles, rules)))


def show(text, ruleset=rules):
    p = transliterate_symbolic(yue.word(text), ruleset, yue)
    print(f"{text:<10} {' '.join(serialize_pronunciation(p))}")


# BOLT keeps both final consonants as extra syllables, FORD loses its R
for w in ["ALBANIA", "BOLT", "FORD", "GREENLAND", "DISNEYLAND"]:
    show(w)

# Some final-consonant readings are optional rules, off by default
show("BILL")
show("BILL", load_ruleset("cantonese", enable=["lr_coda"]))

# Syllables closed by p, t or k only ever take tone 1, 3 or 6
for rule in rules.tone_rules[:3]:
    conds = " & ".join(f"{k}={','.join(v)}" for k, v in rule.conditions)
    print(f"  {conds} -> {rule.tone}")
