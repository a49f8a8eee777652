"""Rule-based transliteration.

Three passes over the source word:

1. syllable splitting: letters are cut into vowel and consonant clusters,
   clusters get onset/nucleus/coda roles (with vowel insertion and deletion
   where the target phonology forbids a cluster) and some vowel clusters are
   split across two syllables;
2. each unit is rewritten to phonemes by the first matching context rule;
3. each syllable gets a tone from the first matching tone rule.

Rule tables live in ruleset files (see ``data/*.rules``).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from fnmatch import fnmatchcase
from pathlib import Path
from typing import Sequence

from .phonology import (
    CODA,
    CONSONANT,
    NUCLEUS,
    ONSET,
    ROLES,
    VOWEL,
    LanguageResource,
    Pronunciation,
    SourceWord,
    Syllable,
)
from .pseudo_syllable import PseudoSyllable

BOUNDARY = "#"
EMPTY_UNIT = "-"


class RulesetError(ValueError):
    pass


class RuleGap(RulesetError):
    pass


@dataclass(frozen=True)
class ClusterSegment:
    kind: str  # CONSONANT or VOWEL
    graphemes: tuple


@dataclass(frozen=True)
class G2PRule:
    role: str
    pattern: str
    left: tuple
    right: tuple
    phonemes: tuple
    line: int = 0

    def matches(self, role: str, unit: str, left: Sequence[str], right: Sequence[str]) -> bool:
        if role != self.role:
            return False
        if unit == EMPTY_UNIT or self.pattern == EMPTY_UNIT:
            if unit != self.pattern:
                return False
        elif not fnmatchcase(unit, self.pattern):
            return False
        return _ctx_match(self.left, left[len(left) - len(self.left):] if self.left else ()) and \
            _ctx_match(self.right, right[:len(self.right)])


def _ctx_match(pattern: Sequence[str], units: Sequence[str]) -> bool:
    if len(units) < len(pattern):
        return False
    return all(fnmatchcase(u, p) for p, u in zip(pattern, units))


@dataclass(frozen=True)
class ToneRule:
    conditions: tuple  # (key, allowed values) pairs
    tone: int
    line: int = 0

    def matches(self, syl: Syllable, index: int, count: int, epenthetic: bool) -> bool:
        for key, values in self.conditions:
            if key == "pos":
                here = set()
                if index == 0:
                    here.add("initial")
                if index == count - 1:
                    here.add("final")
                if 0 < index < count - 1:
                    here.add("medial")
                if count == 1:
                    here.add("only")
                if not here & set(values):
                    return False
            elif key == "epenthetic":
                if epenthetic != (values[0] == "yes"):
                    return False
            else:
                unit = " ".join(syl.unit({"onset": ONSET, "nucleus": NUCLEUS, "coda": CODA}[key])) or EMPTY_UNIT
                if unit not in values:
                    return False
        return True


@dataclass
class RuleSet:
    name: str = "rules"
    liquids: frozenset = frozenset()
    coda_letters: frozenset = frozenset()
    nasal_letters: frozenset = frozenset()
    deletable: frozenset = frozenset()
    digraphs: tuple = ()
    collapse_doubles: bool = False
    g2p_rules: list = field(default_factory=list)
    vowel_splits: dict = field(default_factory=dict)
    tone_rules: list = field(default_factory=list)
    # option name -> letters epenthesized instead of deleted when word-final
    optional_codas: dict = field(default_factory=dict)
    enabled: frozenset = frozenset()

    def check_complete(self):
        for role in ROLES:
            if not any(r.role == role and r.pattern == "*" and all(p == "*" for p in r.left + r.right)
                       for r in self.g2p_rules):
                raise RuleGap(f"{self.name}: no catch-all g2p rule for role {role}")
        if not any(not r.conditions for r in self.tone_rules):
            raise RuleGap(f"{self.name}: no catch-all tone rule")

    def epenthesized_finals(self) -> frozenset:
        out = set()
        for name in self.enabled:
            if name not in self.optional_codas:
                raise RulesetError(f"unknown optional rule {name!r}")
            out |= self.optional_codas[name]
        return frozenset(out)

    def with_options(self, *names: str) -> "RuleSet":
        rs = dataclasses.replace(self, enabled=frozenset(names))
        rs.epenthesized_finals()
        return rs


# ---------------------------------------------------------------------------
# ruleset files


def parse_ruleset(text: str, name: str = "rules") -> RuleSet:
    rs = RuleSet(name=name)
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        # '#' doubles as the word-boundary symbol, so only whole-line and ' # ' comments
        line = raw.split(" # ", 1)[0].strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1]
            continue
        if section == "role":
            key, *vals = line.split()
            if key == "liquids":
                rs.liquids = frozenset(vals)
            elif key == "coda_letters":
                rs.coda_letters = frozenset(vals)
            elif key == "nasal_letters":
                rs.nasal_letters = frozenset(vals)
            elif key == "deletable":
                rs.deletable = frozenset(vals)
            elif key == "digraphs":
                rs.digraphs = tuple(sorted(vals, key=len, reverse=True))
            elif key == "collapse_doubles":
                rs.collapse_doubles = vals == ["yes"]
            else:
                raise RulesetError(f"line {lineno}: unknown role key {key!r}")
        elif section == "g2p":
            lhs, arrow, rhs = line.partition("->")
            parts = [p.strip() for p in lhs.split("|")]
            if not arrow or len(parts) != 4 or parts[0] not in ROLES:
                raise RulesetError(f"line {lineno}: expected 'role|pattern|left|right -> phonemes'")
            role, pattern, left, right = parts
            phonemes = tuple(p for p in rhs.split() if p != EMPTY_UNIT)
            if role == NUCLEUS and not phonemes:
                raise RulesetError(f"line {lineno}: a nucleus rule must produce phonemes")
            rs.g2p_rules.append(G2PRule(role, pattern, _ctx(left), _ctx(right), phonemes, lineno))
        elif section == "vowel_split":
            lhs, arrow, rhs = line.partition("->")
            halves = rhs.split()
            if not arrow or len(halves) != 2 or "".join(halves) != lhs.strip():
                raise RulesetError(f"line {lineno}: expected 'AB -> A B'")
            rs.vowel_splits[lhs.strip()] = tuple(halves)
        elif section == "tones":
            lhs, arrow, rhs = line.partition("->")
            if not arrow or not rhs.strip().isdigit():
                raise RulesetError(f"line {lineno}: expected 'predicate -> tone'")
            rs.tone_rules.append(ToneRule(_predicate(lhs.strip(), lineno), int(rhs), lineno))
        elif section == "optional":
            opt, *letters = line.split()
            rs.optional_codas[opt] = frozenset(letters)
        else:
            raise RulesetError(f"line {lineno}: declaration outside a known section")
    return rs


def _ctx(text: str) -> tuple:
    toks = tuple(text.split())
    return () if toks in ((), ("*",)) else toks


def _predicate(text: str, lineno: int) -> tuple:
    if text == "*":
        return ()
    out = []
    for term in text.split("&"):
        term = term.strip()
        if term == "epenthetic":
            out.append(("epenthetic", ("yes",)))
            continue
        key, eq, vals = term.partition("=")
        if not eq or key not in ("onset", "nucleus", "coda", "pos", "epenthetic"):
            raise RulesetError(f"line {lineno}: bad tone condition {term!r}")
        out.append((key, tuple(v.strip() for v in vals.split(","))))
    return tuple(out)


_DATA = Path(__file__).parent / "data"


def load_ruleset(path_or_name, enable: Sequence[str] = ()) -> RuleSet:
    path = Path(path_or_name)
    if not path.exists():
        shipped = _DATA / f"{path_or_name}.rules"
        if not shipped.exists():
            raise FileNotFoundError(path_or_name)
        path = shipped
    rs = parse_ruleset(path.read_text(encoding="utf-8"), name=path.stem)
    return rs.with_options(*enable) if enable else rs


# ---------------------------------------------------------------------------
# syllable splitting


def segment_clusters(f: SourceWord) -> list:
    """Maximal runs of same-class letters."""
    out = []
    for g, c in zip(f.graphemes, f.classes):
        if out and out[-1].kind == c:
            out[-1] = ClusterSegment(c, out[-1].graphemes + (g,))
        else:
            out.append(ClusterSegment(c, (g,)))
    return out


def _consonant_units(letters: tuple, rules: RuleSet) -> list:
    """Split a consonant cluster into units, keeping digraphs and doubled letters whole."""
    units, i = [], 0
    while i < len(letters):
        for dg in rules.digraphs:
            if tuple(dg) == letters[i:i + len(dg)]:
                units.append(tuple(dg))
                i += len(dg)
                break
        else:
            j = i + 1
            if rules.collapse_doubles:
                while j < len(letters) and letters[j] == letters[i]:
                    j += 1
            units.append(letters[i:j])
            i = j
    return units


@dataclass
class _Draft:
    onset: tuple = ()
    nucleus: tuple = ()
    coda: tuple = ()

    def freeze(self) -> PseudoSyllable:
        return PseudoSyllable(self.onset, self.nucleus, self.coda)


def assign_roles(segments: Sequence[ClusterSegment], rules: RuleSet, epenthetic: str = "@:") -> list:
    """Give every cluster a syllable role.

    Vowel clusters become nuclei.  A lone consonant between vowels is the
    next onset.  In a longer cluster the first consonant closes the previous
    syllable as its coda when it is a permitted coda letter, is dropped when
    it is a liquid, and otherwise gets an inserted vowel; the last consonant
    opens the next syllable and any in between get inserted vowels.  With no
    previous syllable every consonant but the last gets an inserted vowel;
    with no next syllable the trailing consonants get inserted vowels, except
    deletable letters right after a nasal coda.  A single word-final consonant
    becomes a coda if permitted and is dropped otherwise.
    """
    sylls: list = []
    pending: tuple = ()

    def keyof(unit):
        return "".join(g for i, g in enumerate(unit) if i == 0 or g != unit[i - 1])

    finals_epenthesized = rules.epenthesized_finals()

    def epenthesize(unit):
        sylls.append(_Draft(onset=unit, nucleus=(epenthetic,)))

    def handle_first(unit):
        key = keyof(unit)
        if key in rules.liquids:
            return
        if key in rules.coda_letters and sylls and not sylls[-1].coda and sylls[-1].nucleus != (epenthetic,):
            sylls[-1].coda = unit
            return
        epenthesize(unit)

    for idx, seg in enumerate(segments):
        has_prev = any(s.kind == VOWEL for s in segments[:idx])
        has_next = idx + 1 < len(segments)
        if seg.kind == VOWEL:
            sylls.append(_Draft(onset=pending, nucleus=seg.graphemes))
            pending = ()
            continue
        units = _consonant_units(seg.graphemes, rules)
        if not has_prev:
            for u in units[:-1]:
                epenthesize(u)
            if has_next:
                pending = units[-1]
            else:
                epenthesize(units[-1])
        elif has_next:
            if len(units) == 1:
                pending = units[0]
                continue
            handle_first(units[0])
            for u in units[1:-1]:
                epenthesize(u)
            pending = units[-1]
        else:
            if len(units) == 1:
                key = keyof(units[0])
                if key in finals_epenthesized:
                    epenthesize(units[0])
                elif key in rules.coda_letters:
                    sylls[-1].coda = units[0]
                continue
            handle_first(units[0])
            for u in units[1:]:
                key = keyof(u)
                last = sylls[-1]
                if key in rules.deletable and keyof(last.coda) in rules.nasal_letters:
                    continue
                epenthesize(u)
    return [s.freeze() for s in sylls]


def postprocess_vowels(s: Sequence[PseudoSyllable], rules: RuleSet) -> list:
    """Split listed vowel clusters over two syllables: <onset nucleus>, <nucleus coda>."""
    out = []
    for ps in s:
        halves = rules.vowel_splits.get("".join(ps.nucleus))
        if halves is None:
            out.append(ps)
            continue
        first, second = tuple(halves[0]), tuple(halves[1])
        out.append(PseudoSyllable(ps.onset, first, ()))
        out.append(PseudoSyllable((), second, ps.coda))
    return out


# ---------------------------------------------------------------------------
# mapping and tones


def _flat_units(s: Sequence[PseudoSyllable], collapse: bool = False) -> list:
    units = []
    for k, ps in enumerate(s):
        for role in ROLES:
            letters = ps.unit(role)
            if collapse and role != NUCLEUS:
                # a doubled consonant is matched as the single letter
                letters = tuple(g for i, g in enumerate(letters) if i == 0 or g != letters[i - 1])
            units.append((k, role, "".join(letters) or EMPTY_UNIT))
    return units


def map_symbolic(s: Sequence[PseudoSyllable], rules: RuleSet) -> list:
    """Rewrite every unit (including empty onsets and codas) with the first matching rule."""
    flat = _flat_units(s, rules.collapse_doubles)
    filled = [u for _, _, u in flat]
    out = [dict() for _ in s]
    for idx, (k, role, unit) in enumerate(flat):
        left = [BOUNDARY] + [u for u in filled[:idx] if u != EMPTY_UNIT]
        right = [u for u in filled[idx + 1:] if u != EMPTY_UNIT] + [BOUNDARY]
        for rule in rules.g2p_rules:
            if rule.matches(role, unit, left, right):
                out[k][role] = rule.phonemes
                break
        else:
            if unit != EMPTY_UNIT:
                raise RuleGap(f"no rule for {role} {unit}")
            out[k][role] = ()
    return [Syllable(d[ONSET], d[NUCLEUS], d[CODA]) for d in out]


def assign_symbolic_tones(syllables: Sequence[Syllable], s: Sequence[PseudoSyllable],
                          rules: RuleSet, epenthetic: str = "@:") -> list:
    out = []
    for k, syl in enumerate(syllables):
        ep = s[k].nucleus == (epenthetic,)
        for rule in rules.tone_rules:
            if rule.matches(syl, k, len(syllables), ep):
                out.append(syl.with_tone(rule.tone))
                break
        else:
            raise RuleGap("no tone rule matched")
    return out


def split_syllables(f: SourceWord, rules: RuleSet, epenthetic: str = "@:") -> list:
    return postprocess_vowels(assign_roles(segment_clusters(f), rules, epenthetic), rules)


def transliterate_symbolic(f: SourceWord, rules: RuleSet, resource: LanguageResource) -> Pronunciation:
    rules.check_complete()
    s = split_syllables(f, rules, resource.epenthetic_nucleus)
    if not s:
        # nothing pronounceable survived; insert a vowel after the first letter
        s = [PseudoSyllable((f.graphemes[0],), (resource.epenthetic_nucleus,), ())]
    syllables = map_symbolic(s, rules)
    return Pronunciation(tuple(assign_symbolic_tones(syllables, s, rules, resource.epenthetic_nucleus)))
