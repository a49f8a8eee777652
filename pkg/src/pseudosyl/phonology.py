"""Syllables, pronunciations and target-language resources.

A pronunciation is written as a flat token stream: phoneme symbols, one tone
numeral per syllable and ``.`` between syllables, e.g.::

    g aa k 3 . l i ng 4

Every syllable follows the template ``[onset] nucleus [coda] + tone``.  Which
phonemes may fill which slot is declared by a :class:`LanguageResource`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

ONSET, NUCLEUS, CODA = "O", "N", "Cd"
ROLES = (ONSET, NUCLEUS, CODA)
CONSONANT, VOWEL = "C", "V"
DELIMITER = "."


class PhonologyError(ValueError):
    """Base class for malformed pronunciations."""


class UnknownToken(PhonologyError):
    pass


class NoNucleus(PhonologyError):
    pass


class MissingTone(PhonologyError):
    pass


class MultipleTones(PhonologyError):
    pass


class RoleViolation(PhonologyError):
    pass


class UnknownGrapheme(ValueError):
    pass


class ResourceError(ValueError):
    pass


_VIOLATION_ERRORS = {
    "unknown_token": UnknownToken,
    "empty_syllable": NoNucleus,
    "no_nucleus": NoNucleus,
    "missing_tone": MissingTone,
    "multiple_tones": MultipleTones,
    "tone_range": RoleViolation,
    "role_violation": RoleViolation,
    "onset_cluster": RoleViolation,
    "coda_cluster": RoleViolation,
    "noncanonical": RoleViolation,
}


@dataclass(frozen=True)
class Violation:
    syllable: int
    kind: str
    message: str

    def __str__(self) -> str:
        return f"syllable {self.syllable + 1}: {self.kind}: {self.message}"


@dataclass(frozen=True)
class Phoneme:
    symbol: str
    allowed_roles: frozenset


@dataclass(frozen=True)
class SourceWord:
    """An uppercased grapheme sequence with the consonant/vowel class of each letter."""

    graphemes: tuple
    classes: tuple

    def __post_init__(self):
        if not self.graphemes:
            raise ValueError("a source word needs at least one grapheme")
        if len(self.graphemes) != len(self.classes):
            raise ValueError("graphemes and classes differ in length")

    def __len__(self) -> int:
        return len(self.graphemes)

    @property
    def text(self) -> str:
        return "".join(self.graphemes)


@dataclass(frozen=True)
class Syllable:
    onset: tuple = ()
    nucleus: tuple = ()
    coda: tuple = ()
    tone: int | None = None

    @property
    def structure(self) -> tuple:
        roles = []
        if self.onset:
            roles.append(ONSET)
        if self.nucleus:
            roles.append(NUCLEUS)
        if self.coda:
            roles.append(CODA)
        return tuple(roles)

    @property
    def phonemes(self) -> tuple:
        return self.onset + self.nucleus + self.coda

    def unit(self, role: str) -> tuple:
        return {ONSET: self.onset, NUCLEUS: self.nucleus, CODA: self.coda}[role]

    def with_tone(self, tone: int | None) -> "Syllable":
        return Syllable(self.onset, self.nucleus, self.coda, tone)

    def tokens(self) -> list:
        out = list(self.phonemes)
        if self.tone is not None:
            out.append(str(self.tone))
        return out


@dataclass(frozen=True)
class Pronunciation:
    syllables: tuple

    def __post_init__(self):
        object.__setattr__(self, "syllables", tuple(self.syllables))
        if not self.syllables:
            raise ValueError("a pronunciation needs at least one syllable")

    def __len__(self) -> int:
        return len(self.syllables)

    @property
    def tones(self) -> tuple:
        return tuple(s.tone for s in self.syllables)

    def with_tones(self, tones: Sequence[int | None]) -> "Pronunciation":
        if len(tones) != len(self.syllables):
            raise ValueError("one tone per syllable expected")
        return Pronunciation(tuple(s.with_tone(t) for s, t in zip(self.syllables, tones)))

    def without_tones(self) -> "Pronunciation":
        return self.with_tones([None] * len(self.syllables))

    def __str__(self) -> str:
        return " . ".join(" ".join(s.tokens()) for s in self.syllables)


@dataclass(frozen=True)
class LanguageResource:
    """Phoneme inventory with slot permissions, tone count and grapheme classes.

    ``max_onset`` and ``max_coda`` cap the number of phonemes a single onset or
    coda may hold (``None`` means unbounded).  Both shipped resources use 1.
    """

    name: str
    phonemes: dict
    tone_count: int
    grapheme_classes: dict
    epenthetic_nucleus: str = "@:"
    max_onset: int | None = None
    max_coda: int | None = None
    _role_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.tone_count < 1:
            raise ResourceError("tone count must be positive")
        for sym, ph in self.phonemes.items():
            if not ph.allowed_roles:
                raise ResourceError(f"phoneme {sym!r} has no allowed role")
            if not ph.allowed_roles <= set(ROLES):
                raise ResourceError(f"phoneme {sym!r} has unknown roles {set(ph.allowed_roles)}")
            if sym == DELIMITER or sym.isdigit():
                raise ResourceError(f"phoneme symbol {sym!r} collides with a delimiter or tone")
        if self.epenthetic_nucleus in self.phonemes:
            raise ResourceError("epenthetic token must not be a phoneme symbol")
        if self.epenthetic_nucleus in self.grapheme_classes:
            raise ResourceError("epenthetic token must not be a grapheme")
        for letter, cls in self.grapheme_classes.items():
            if cls not in (CONSONANT, VOWEL):
                raise ResourceError(f"grapheme {letter!r} has class {cls!r}")

    def roles_of(self, symbol: str) -> frozenset:
        return self.phonemes[symbol].allowed_roles

    def can_fill(self, symbol: str, role: str) -> bool:
        ph = self.phonemes.get(symbol)
        return ph is not None and role in ph.allowed_roles

    def group_fits(self, group: Sequence[str], role: str) -> bool:
        """True if the phoneme group may fill ``role`` on its own."""
        if not group or not all(self.can_fill(p, role) for p in group):
            return False
        cap = {ONSET: self.max_onset, CODA: self.max_coda}.get(role)
        return cap is None or len(group) <= cap

    def grapheme_class(self, letter: str) -> str:
        try:
            return self.grapheme_classes[letter]
        except KeyError:
            raise UnknownGrapheme(f"letter {letter!r} is not in the {self.name} grapheme table") from None

    def word(self, text: str) -> SourceWord:
        letters = tuple(text.strip().upper())
        if not letters:
            raise ValueError("empty source word")
        return SourceWord(letters, tuple(self.grapheme_class(c) for c in letters))

    def is_tone(self, token: str) -> bool:
        return token.isdigit()


# ---------------------------------------------------------------------------
# resource files


def _sections(text: str) -> dict:
    sections: dict = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"\[(\w+)\]", line)
        if m:
            current = sections.setdefault(m.group(1), [])
            continue
        if current is None:
            raise ResourceError(f"line {lineno}: declaration outside a section")
        current.append((lineno, line))
    return sections


def parse_resource(text: str, name: str = "resource") -> LanguageResource:
    sections = _sections(text)
    phonemes = {}
    for lineno, line in sections.get("phonemes", []):
        parts = line.split()
        if len(parts) != 2:
            raise ResourceError(f"line {lineno}: expected 'symbol role,role'")
        sym, roles = parts
        if sym in phonemes:
            raise ResourceError(f"line {lineno}: duplicate phoneme {sym!r}")
        phonemes[sym] = Phoneme(sym, frozenset(r for r in roles.split(",") if r))
    tone_count = None
    for lineno, line in sections.get("tones", []):
        key, _, value = line.partition(" ")
        if key != "count":
            raise ResourceError(f"line {lineno}: unknown tones key {key!r}")
        tone_count = int(value)
    if tone_count is None:
        raise ResourceError("missing [tones] count")
    classes = {}
    for lineno, line in sections.get("grapheme_classes", []):
        parts = line.split()
        if len(parts) != 2 or parts[1] not in (CONSONANT, VOWEL):
            raise ResourceError(f"line {lineno}: expected 'letter C|V'")
        classes[parts[0].upper()] = parts[1]
    special = {"epenthetic": "@:", "max_onset": None, "max_coda": None, "name": name}
    for lineno, line in sections.get("special", []):
        key, _, value = line.partition(" ")
        if key not in special:
            raise ResourceError(f"line {lineno}: unknown special key {key!r}")
        special[key] = value.strip()

    def cap(v):
        return None if v in (None, "", "none") else int(v)

    return LanguageResource(
        name=special["name"],
        phonemes=phonemes,
        tone_count=tone_count,
        grapheme_classes=classes,
        epenthetic_nucleus=special["epenthetic"],
        max_onset=cap(special["max_onset"]),
        max_coda=cap(special["max_coda"]),
    )


_DATA = Path(__file__).parent / "data"


def load_resource(path_or_name: str | Path) -> LanguageResource:
    """Load a resource file, or a shipped one by name (``cantonese``, ``vietnamese``)."""
    path = Path(path_or_name)
    if not path.exists():
        shipped = _DATA / f"{path_or_name}.res"
        if not shipped.exists():
            raise FileNotFoundError(path_or_name)
        path = shipped
    return parse_resource(path.read_text(encoding="utf-8"), name=path.stem)


# ---------------------------------------------------------------------------
# parsing and validation


def split_syllables(tokens: Sequence[str]) -> list:
    spans, cur = [], []
    for tok in tokens:
        if tok == DELIMITER:
            spans.append(cur)
            cur = []
        else:
            cur.append(tok)
    spans.append(cur)
    return spans


def _best_split(phones: Sequence[str], resource: LanguageResource, capped: bool = True):
    """Onset/nucleus/coda split with the longest nucleus, then the longest onset."""
    best = None
    n = len(phones)
    for i in range(n):
        onset = phones[:i]
        if not all(resource.can_fill(p, ONSET) for p in onset):
            break
        if capped and resource.max_onset is not None and i > resource.max_onset:
            break
        for j in range(i + 1, n + 1):
            if not resource.can_fill(phones[j - 1], NUCLEUS):
                break
            coda = phones[j:]
            if not all(resource.can_fill(p, CODA) for p in coda):
                continue
            if capped and resource.max_coda is not None and len(coda) > resource.max_coda:
                continue
            key = (j - i, i)
            if best is None or key > best[0]:
                best = (key, i, j)
    if best is None:
        return None
    _, i, j = best
    return tuple(phones[:i]), tuple(phones[i:j]), tuple(phones[j:])


def _analyze_syllable(idx: int, span: Sequence[str], resource: LanguageResource, require_tone: bool):
    violations = []
    if not span:
        return None, [Violation(idx, "empty_syllable", "no tokens between delimiters")]
    phones, tones = [], []
    for tok in span:
        if resource.is_tone(tok):
            tones.append(int(tok))
        elif tok in resource.phonemes:
            phones.append(tok)
        else:
            violations.append(Violation(idx, "unknown_token", f"{tok!r} is neither a phoneme nor a tone"))
    if len(tones) > 1:
        violations.append(Violation(idx, "multiple_tones", f"{len(tones)} tones"))
    elif not tones and require_tone:
        violations.append(Violation(idx, "missing_tone", "syllable carries no tone"))
    for t in tones:
        if not 1 <= t <= resource.tone_count:
            violations.append(Violation(idx, "tone_range", f"tone {t} outside 1..{resource.tone_count}"))
    split = None
    if not any(resource.can_fill(p, NUCLEUS) for p in phones):
        violations.append(Violation(idx, "no_nucleus", "no nucleus-capable phoneme"))
    else:
        split = _best_split(phones, resource)
        if split is None:
            loose = _best_split(phones, resource, capped=False)
            if loose is None:
                violations.append(Violation(idx, "role_violation", f"{' '.join(phones)} fits no [O]N[Cd] arrangement"))
            elif resource.max_onset is not None and len(loose[0]) > resource.max_onset:
                violations.append(Violation(idx, "onset_cluster", f"onset {' '.join(loose[0])}"))
            else:
                violations.append(Violation(idx, "coda_cluster", f"coda {' '.join(loose[2])}"))
    if violations:
        return None, violations
    onset, nucleus, coda = split
    return Syllable(onset, nucleus, coda, tones[0] if tones else None), []


def _analyze_tokens(tokens: Sequence[str], resource: LanguageResource, require_tones: bool = True):
    syllables, violations = [], []
    tokens = list(tokens)
    if not tokens:
        return None, [Violation(0, "empty_syllable", "empty pronunciation")]
    for idx, span in enumerate(split_syllables(tokens)):
        syl, v = _analyze_syllable(idx, span, resource, require_tones)
        violations.extend(v)
        syllables.append(syl)
    if violations:
        return None, violations
    return Pronunciation(tuple(syllables)), []


def parse_pronunciation(tokens: Sequence[str], resource: LanguageResource, require_tones: bool = True) -> Pronunciation:
    """Parse a token stream into role-annotated syllables.

    Raises the :class:`PhonologyError` subclass matching the first problem found.
    """
    pron, violations = _analyze_tokens(tokens, resource, require_tones)
    if violations:
        first = violations[0]
        raise _VIOLATION_ERRORS[first.kind](str(first))
    return pron


def serialize_pronunciation(p: Pronunciation, require_tones: bool = True) -> list:
    out = []
    for k, syl in enumerate(p.syllables):
        if syl.tone is None and require_tones:
            raise MissingTone(f"syllable {k + 1} has no tone")
        if k:
            out.append(DELIMITER)
        out.extend(syl.tokens())
    return out


def structure_of(p: Pronunciation) -> list:
    return [s.structure for s in p.syllables]


def validate(p, resource: LanguageResource, require_tones: bool = True) -> list:
    """Return the list of :class:`Violation` for a pronunciation or raw token list.

    An empty list means the input is a well-formed pronunciation under
    ``resource``.  Violations are returned, never raised.
    """
    if not isinstance(p, Pronunciation):
        return _analyze_tokens(list(p), resource, require_tones)[1]
    violations = []
    for idx, syl in enumerate(p.syllables):
        if not syl.nucleus:
            violations.append(Violation(idx, "no_nucleus", "empty nucleus"))
        for role in ROLES:
            for ph in syl.unit(role):
                if ph not in resource.phonemes:
                    violations.append(Violation(idx, "unknown_token", f"{ph!r} is not a phoneme"))
                elif not resource.can_fill(ph, role):
                    violations.append(Violation(idx, "role_violation", f"{ph} cannot fill {role}"))
        if resource.max_onset is not None and len(syl.onset) > resource.max_onset:
            violations.append(Violation(idx, "onset_cluster", f"onset {' '.join(syl.onset)}"))
        if resource.max_coda is not None and len(syl.coda) > resource.max_coda:
            violations.append(Violation(idx, "coda_cluster", f"coda {' '.join(syl.coda)}"))
        if syl.tone is None:
            if require_tones:
                violations.append(Violation(idx, "missing_tone", "syllable carries no tone"))
        elif not 1 <= syl.tone <= resource.tone_count:
            violations.append(Violation(idx, "tone_range", f"tone {syl.tone} outside 1..{resource.tone_count}"))
    if violations:
        return violations
    # roles must also be the ones a reader of the token stream would recover
    reparsed, _ = _analyze_tokens(serialize_pronunciation(p, require_tones=False), resource, require_tones)
    if reparsed != p:
        return [Violation(0, "noncanonical", "role assignment differs from the canonical parse")]
    return []


def is_valid(p, resource: LanguageResource, require_tones: bool = True) -> bool:
    return not validate(p, resource, require_tones)


def tokens_from_string(text: str) -> list:
    return text.split()


def format_tokens(tokens: Iterable[str]) -> str:
    return " ".join(tokens)
