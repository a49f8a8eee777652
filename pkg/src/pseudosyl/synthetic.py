"""Synthetic corpora: made-up English-looking names transliterated by a ruleset.

Real transliteration corpora are licensed, so experiments and tests run on
words assembled from common English syllable pieces, with targets produced by
the rule-based engine.  The generating rules are known exactly, which makes
learning curves on these corpora interpretable.
"""

from __future__ import annotations

import random

from .phonology import LanguageResource, load_resource, serialize_pronunciation
from .pipeline import CorpusEntry
from .symbolic import RuleSet, load_ruleset, transliterate_symbolic

ONSETS = ["", "", "B", "D", "F", "G", "H", "K", "L", "M", "N", "P", "R", "S", "T", "V", "W", "Z",
          "BR", "CR", "DR", "FR", "GR", "PR", "TR", "ST", "SP", "CL", "BL", "FL", "SL", "SH", "CH", "TH"]
VOWELS = ["A", "A", "E", "E", "I", "O", "O", "U", "EE", "OO", "AI", "EA", "OU", "AY", "IA"]
CODAS = ["", "", "", "", "N", "M", "T", "K", "D", "S", "L", "R", "ND", "NT", "RD", "LT", "ST", "CK"]


def random_word(rng: random.Random, max_syllables: int = 3, max_len: int = 10) -> str:
    while True:
        parts = []
        for _ in range(rng.randint(1, max_syllables)):
            parts.append(rng.choice(ONSETS) + rng.choice(VOWELS) + rng.choice(CODAS))
        word = "".join(parts)
        if 2 <= len(word) <= max_len:
            return word


def random_letters(rng: random.Random, resource: LanguageResource, max_len: int = 10) -> str:
    """Arbitrary letter strings (not name-like), for fuzzing."""
    letters = sorted(resource.grapheme_classes)
    return "".join(rng.choice(letters) for _ in range(rng.randint(1, max_len)))


def synthetic_corpus(size: int, seed: int = 0, resource: LanguageResource | None = None,
                     rules: RuleSet | None = None) -> list:
    """``size`` distinct words with rule-generated targets, reproducible from ``seed``."""
    resource = resource or load_resource("cantonese")
    rules = rules or load_ruleset(resource.name)
    rng = random.Random(seed)
    seen, out = set(), []
    while len(out) < size:
        w = random_word(rng)
        if w in seen:
            continue
        seen.add(w)
        p = transliterate_symbolic(resource.word(w), rules, resource)
        out.append(CorpusEntry(resource.word(w), tuple(serialize_pronunciation(p)), None, len(out) + 1))
    return out
