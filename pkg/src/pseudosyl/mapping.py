"""Pseudo-syllable to phoneme mapping.

Each onset, nucleus and coda of a pseudo-syllable is mapped on its own to the
target phoneme group seen most often for it in training.  Counts are kept at
three levels of detail and consulted from the most specific down:

    (role, letters, source phonemes)
    (role, letters)
    (role, consonant/vowel pattern of the letters)

and finally the most frequent group of the role overall.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .phonology import (
    ROLES,
    LanguageResource,
    Pronunciation,
    SourceWord,
    Syllable,
    structure_of,
)
from .pseudo_syllable import PseudoSyllable, form_pseudo_syllables, pseudo_structure

EMPTY_SOURCE_PHONEME = "-"


class StructureMismatch(ValueError):
    pass


class EmptyTrainingPairs(ValueError):
    pass


class UnmappableUnit(ValueError):
    pass


@dataclass(frozen=True)
class UnitKey:
    role: str
    graphemes: str
    source_phoneme: str | None = None


def class_pattern(graphemes: str, resource: LanguageResource) -> str:
    if graphemes == resource.epenthetic_nucleus:
        return graphemes
    return "".join(resource.grapheme_class(g) for g in graphemes)


def _unit_source_phoneme(positions: Sequence[int], v: Sequence[str] | None) -> str | None:
    if v is None or not positions:
        return None
    parts = [v[i] for i in positions if v[i] != EMPTY_SOURCE_PHONEME]
    return "+".join(parts) if parts else EMPTY_SOURCE_PHONEME


def unit_keys(s: Sequence[PseudoSyllable], v: Sequence[str] | None = None) -> list:
    """UnitKey per present unit, syllable by syllable, in O, N, Cd order."""
    keys = []
    for ps in s:
        for role in ROLES:
            unit = ps.unit(role)
            if unit:
                keys.append(UnitKey(role, "".join(unit), _unit_source_phoneme(ps.positions(role), v)))
    return keys


def extract_unit_pairs(f: SourceWord, labels: Sequence[str], e: Pronunciation,
                       v: Sequence[str] | None = None, resource: LanguageResource | None = None) -> list:
    """Pair each pseudo-syllable unit with the phonemes of the same unit in ``e``."""
    if v is not None and len(v) != len(f):
        raise ValueError("source phonemes must give one token per letter")
    s = form_pseudo_syllables(f, labels, resource)
    if pseudo_structure(s) != structure_of(e):
        raise StructureMismatch(f"{f.text}: labels do not reproduce the target syllable structure")
    pairs = []
    for ps, syl in zip(s, e.syllables):
        for role in ROLES:
            unit = ps.unit(role)
            if unit:
                key = UnitKey(role, "".join(unit), _unit_source_phoneme(ps.positions(role), v))
                pairs.append((key, tuple(syl.unit(role))))
    return pairs


def _argmax(counter: Counter, ok) -> tuple | None:
    best = None
    for group, c in counter.items():
        if not ok(group):
            continue
        if best is None or c > best[0] or (c == best[0] and group < best[1]):
            best = (c, group)
    return None if best is None else best[1]


@dataclass
class MappingModel:
    """Unit-to-phoneme-group counts at three back-off levels plus per-role totals."""

    by_source: dict = field(default_factory=dict)    # (role, letters, v) -> Counter
    by_letters: dict = field(default_factory=dict)   # (role, letters) -> Counter
    by_pattern: dict = field(default_factory=dict)   # (role, pattern) -> Counter
    by_role: dict = field(default_factory=dict)      # role -> Counter

    def lookup(self, key: UnitKey, resource: LanguageResource, trace: list | None = None) -> tuple:
        ok = lambda group: resource.group_fits(group, key.role)  # noqa: E731
        levels = []
        if key.source_phoneme is not None:
            levels.append(("source", self.by_source.get((key.role, key.graphemes, key.source_phoneme))))
        levels.append(("letters", self.by_letters.get((key.role, key.graphemes))))
        levels.append(("pattern", self.by_pattern.get((key.role, class_pattern(key.graphemes, resource)))))
        levels.append(("role", self.by_role.get(key.role)))
        for name, counter in levels:
            if not counter:
                continue
            group = _argmax(counter, ok)
            if group is not None:
                if trace is not None:
                    trace.append(name)
                return group
        raise UnmappableUnit(f"no training data for role {key.role}")

    def to_dict(self) -> dict:
        def rows(table):
            return sorted([list(k) if isinstance(k, tuple) else [k], sorted([list(g), c] for g, c in ctr.items())]
                          for k, ctr in table.items())
        return {
            "by_source": rows(self.by_source),
            "by_letters": rows(self.by_letters),
            "by_pattern": rows(self.by_pattern),
            "by_role": rows(self.by_role),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MappingModel":
        def table(rows, scalar=False):
            return {(k[0] if scalar else tuple(k)): Counter({tuple(g): c for g, c in groups}) for k, groups in rows}
        return cls(table(d["by_source"]), table(d["by_letters"]), table(d["by_pattern"]),
                   table(d["by_role"], scalar=True))


def train_mapping(pairs: Iterable, resource: LanguageResource) -> MappingModel:
    """Accumulate counts from ``(UnitKey, phoneme group)`` pairs."""
    by_source, by_letters, by_pattern, by_role = (defaultdict(Counter) for _ in range(4))
    n = 0
    for key, group in pairs:
        group = tuple(group)
        if not resource.group_fits(group, key.role):
            raise ValueError(f"{' '.join(group)} cannot fill {key.role}")
        n += 1
        if key.source_phoneme is not None:
            by_source[(key.role, key.graphemes, key.source_phoneme)][group] += 1
        by_letters[(key.role, key.graphemes)][group] += 1
        by_pattern[(key.role, class_pattern(key.graphemes, resource))][group] += 1
        by_role[key.role][group] += 1
    if not n:
        raise EmptyTrainingPairs("no unit pairs to train on")
    return MappingModel(dict(by_source), dict(by_letters), dict(by_pattern), dict(by_role))


def map_units(s: Sequence[PseudoSyllable], model: MappingModel, resource: LanguageResource,
              v: Sequence[str] | None = None) -> Pronunciation:
    """Toneless pronunciation with one syllable per pseudo-syllable."""
    syllables = []
    for ps in s:
        units = {}
        for role in ROLES:
            unit = ps.unit(role)
            if unit:
                key = UnitKey(role, "".join(unit), _unit_source_phoneme(ps.positions(role), v))
                units[role] = model.lookup(key, resource)
            else:
                units[role] = ()
        syllables.append(Syllable(units["O"], units["N"], units["Cd"]))
    return Pronunciation(tuple(syllables))


class LetterAffinity:
    """How often a single letter sits in a unit mapped to a given phoneme group.

    Built from unit pairs; used to choose between equally cheap ground-truth
    labelings so that letters line up with the phonemes they usually spell.
    """

    def __init__(self, pairs: Iterable):
        self.counts: dict = defaultdict(Counter)
        for key, group in pairs:
            for letter in key.graphemes:
                self.counts[(letter, key.role)][tuple(group)] += 1

    def __call__(self, letter: str, role: str, group) -> float:
        row = self.counts.get((letter, role))
        if not row:
            return math.log(0.01)
        return math.log((row.get(tuple(group), 0) + 0.01) / (sum(row.values()) + 0.01))
