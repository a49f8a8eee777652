"""Phonology-aware transliteration into syllabic, tonal target languages.

The main entry points:

* :func:`load_resource` and :func:`parse_pronunciation` for target phonology,
* :func:`train_all` for the statistical engine (letter grouping, unit
  mapping, tone assignment),
* :func:`transliterate_symbolic` for the rule-based engine,
* :func:`train_joint` / :func:`decode_joint` for the cosegment baseline,
* :func:`score` for error rates and :func:`run_experiment` for size sweeps.
"""

from .experiment import ExperimentPlan, run_experiment
from .joint import decode_joint, train_joint
from .metrics import align, score
from .phonology import (
    LanguageResource,
    Pronunciation,
    Syllable,
    load_resource,
    parse_pronunciation,
    serialize_pronunciation,
    structure_of,
    validate,
)
from .pipeline import Config, load_corpus, load_model, save_model, train_all
from .pseudo_syllable import decode_labels, derive_ground_truth_labels, form_pseudo_syllables
from .symbolic import load_ruleset, transliterate_symbolic

__version__ = "0.1.0"

__all__ = [
    "Config",
    "ExperimentPlan",
    "LanguageResource",
    "Pronunciation",
    "Syllable",
    "align",
    "decode_joint",
    "decode_labels",
    "derive_ground_truth_labels",
    "form_pseudo_syllables",
    "load_corpus",
    "load_model",
    "load_resource",
    "load_ruleset",
    "parse_pronunciation",
    "run_experiment",
    "save_model",
    "score",
    "serialize_pronunciation",
    "structure_of",
    "train_all",
    "train_joint",
    "transliterate_symbolic",
    "validate",
]
