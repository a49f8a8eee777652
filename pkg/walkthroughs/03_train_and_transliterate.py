"""
Training the statistical engine
===============================

The statistical engine chains three models learned from (word,
pronunciation) pairs: letter labels, unit-to-phoneme mapping and tones.
Because the letters are grouped into well-formed syllables before any
phoneme is chosen, every output is a pronounceable Cantonese string.
"""

import tempfile
from pathlib import Path

from pseudosyl.phonology import load_resource, validate
from pseudosyl.pipeline import load_model, save_model, train_all
from pseudosyl.synthetic import synthetic_corpus

yue = load_resource("cantonese")

# Real loanword corpora are licensed; a synthetic one is generated from
# English-looking names and the rule-based engine
corpus = synthetic_corpus(200, seed=0)
for e in corpus[:5]:
    print(f"{e.word.text:<12} {' '.join(e.target)}")

model = train_all(corpus, yue)
print(f"trained on {model.trained_on} entries, skipped {len(model.skipped)}")
for word, reason in model.skipped[:3]:
    print("  skipped:", reason)

# Unseen words, including ones that look nothing like English
for w in ["GREENWOOD", "BRADFORD", "KLMNOP", "AEIOU", "X"]:
    out = model.transliterate(w)
    print(f"{w:<12} {' '.join(out):<40} valid={not validate(out, yue)}")

# Model files are plain JSON with the counts verbatim
with tempfile.TemporaryDirectory() as d:
    path = Path(d) / "model.json"
    save_model(model, path)
    again = load_model(path)
    print("reloaded model agrees:", again.transliterate("GREENWOOD") == model.transliterate("GREENWOOD"))
    print("model file size:", path.stat().st_size, "bytes")
