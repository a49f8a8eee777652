"""
Joint n-gram baseline and error rates
=====================================

The baseline cuts each training pair into aligned chunks of letters and
tokens and learns an n-gram model over the chunks.  Syllable delimiters and
tones are just tokens to it, so recombining chunks from different words can
produce strings no speaker could read.  The scoring functions make the
difference measurable.
"""

from pseudosyl.experiment import ExperimentPlan, run_experiment
from pseudosyl.metrics import score
from pseudosyl.phonology import load_resource, validate
from pseudosyl.pipeline import parse_corpus, train_engine, transliterate_entries
from pseudosyl.synthetic import synthetic_corpus

yue = load_resource("cantonese")

# A tiny corpus makes the failure easy to see
corpus = parse_corpus("BAN\tb aa n 1\nDO\td o 4\nKA\tk aa 3\nBANDO\tb aa n 1 . d o 4\n", yue)
joint = train_engine("joint", corpus, yue)
proposed = train_engine("proposed", corpus, yue)
for w in ["KADO", "DOBAN", "BANKA"]:
    j, p = joint.transliterate(w), proposed.transliterate(w)
    print(f"{w:<7} joint: {' '.join(j):<24} problems: {[v.kind for v in validate(j, yue)]}")
    print(f"{'':<7} proposed: {' '.join(p):<21} problems: {[v.kind for v in validate(p, yue)]}")

# Scores over a held-out set: token and string error rates, then syllable
# and per-unit rates over syllables of matching shape
data = synthetic_corpus(300, seed=1)
train, test = data[:250], data[250:]
for engine in ("proposed", "joint"):
    model = train_engine(engine, train, yue)
    print(f"\n{engine}")
    print(score(transliterate_entries(model, test), yue).summary(), end="")

# A small corpus-size sweep with a shared test set
plan = ExperimentPlan(sizes=(50, 100, 200), repartitions=2, test_size=100, seed=0)
print()
print(run_experiment(data, yue, plan, ["proposed", "symbolic"]).summary(), end="")
