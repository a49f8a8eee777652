"""Graphemic labels, pseudo-syllable formation and the smoothed label model.

Every source letter gets one of five labels:

    O   onset of a new pseudo-syllable
    N   nucleus (adjacent N letters share one nucleus)
    Cd  coda of the current pseudo-syllable
    ON  onset of a new pseudo-syllable whose nucleus is an inserted vowel
    X   letter is dropped

:func:`form_pseudo_syllables` turns a word plus labels into pseudo-syllables,
:func:`derive_ground_truth_labels` recovers labels from a training pair and
:class:`LabelModel` predicts labels for unseen words.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .phonology import (
    CODA,
    CONSONANT,
    NUCLEUS,
    ONSET,
    VOWEL,
    LanguageResource,
    Pronunciation,
    SourceWord,
    structure_of,
)

O, N, CD, ON, X = "O", "N", "Cd", "ON", "X"
LABELS = (O, N, CD, ON, X)
LABEL_INDEX = {lab: i for i, lab in enumerate(LABELS)}

BOUNDARY = "#"
BACKOFF = "_"
CLASS_TOKEN = {CONSONANT: "<C>", VOWEL: "<V>"}


class InvalidLabeling(ValueError):
    def __init__(self, position: int, reason: str):
        super().__init__(f"position {position}: {reason}")
        self.position = position
        self.reason = reason


class NoValidLabeling(ValueError):
    pass


class EmptyCorpus(ValueError):
    pass


@dataclass(frozen=True)
class PseudoSyllable:
    onset: tuple = ()
    nucleus: tuple = ()
    coda: tuple = ()
    # 0-based letter indices backing each unit; the inserted nucleus has none
    onset_pos: tuple = field(default=(), compare=False)
    nucleus_pos: tuple = field(default=(), compare=False)
    coda_pos: tuple = field(default=(), compare=False)

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

    def unit(self, role: str) -> tuple:
        return {ONSET: self.onset, NUCLEUS: self.nucleus, CODA: self.coda}[role]

    def positions(self, role: str) -> tuple:
        return {ONSET: self.onset_pos, NUCLEUS: self.nucleus_pos, CODA: self.coda_pos}[role]

    def __str__(self) -> str:
        parts = ["".join(u) for u in (self.onset, self.nucleus, self.coda) if u]
        return "{" + "|".join(parts) + "}"


# ---------------------------------------------------------------------------
# pseudo-syllable formation
#
# ``shape`` describes the open pseudo-syllable as (has_onset, has_nucleus,
# has_coda) or None when nothing is open.  The same transition drives the
# concrete builder, the ground-truth search and the decoder.

_FAIL = None


def _transition(shape, prev_n: bool, label: str):
    """Return (actions, new_shape, new_prev_n) or None if ``label`` is illegal here."""
    if label == X:
        return (), shape, prev_n
    if label in (O, ON):
        if shape is not None and not shape[1]:
            return _FAIL
        actions = ((("close",),) if shape is not None else ()) + (("open_onset",),)
        if label == ON:
            return actions + (("epenthesize",), ("close",)), None, False
        return actions, (True, False, False), False
    if label == N:
        if shape is not None and prev_n:
            return (("join_nucleus",),), shape, True
        if shape is not None and shape[0] and not shape[1]:
            return (("set_nucleus",),), (True, True, False), True
        actions = ((("close",),) if shape is not None else ()) + (("open_nucleus",),)
        return actions, (False, True, False), True
    if label == CD:
        if shape is None or not shape[1]:
            return _FAIL
        return (("coda",),), (shape[0], True, True), False
    raise ValueError(f"unknown label {label!r}")


def _closes(actions) -> int:
    return sum(1 for a in actions if a[0] == "close")


def form_pseudo_syllables(f: SourceWord, labels: Sequence[str], resource: LanguageResource | None = None) -> list:
    """Group letters into pseudo-syllables according to ``labels``.

    Raises :class:`InvalidLabeling` (1-based position) when the labels cannot
    yield well-formed ``[O]N[Cd]`` pseudo-syllables.
    """
    if len(labels) != len(f):
        raise ValueError(f"{len(labels)} labels for {len(f)} letters")
    epenthetic = resource.epenthetic_nucleus if resource is not None else "@:"
    out = []
    cur = None  # [onset, nucleus, coda, onset_pos, nucleus_pos, coda_pos]
    shape, prev_n = None, False
    for i, (g, lab) in enumerate(zip(f.graphemes, labels)):
        step = _transition(shape, prev_n, lab)
        if step is None:
            if lab == CD:
                raise InvalidLabeling(i + 1, "coda without an open syllable that has a nucleus")
            raise InvalidLabeling(i + 1, "previous syllable has no nucleus")
        actions, shape, prev_n = step
        for act in actions:
            kind = act[0]
            if kind == "close":
                out.append(PseudoSyllable(tuple(cur[0]), tuple(cur[1]), tuple(cur[2]),
                                          tuple(cur[3]), tuple(cur[4]), tuple(cur[5])))
                cur = None
            elif kind == "open_onset":
                cur = [[g], [], [], [i], [], []]
            elif kind == "open_nucleus":
                cur = [[], [g], [], [], [i], []]
            elif kind == "epenthesize":
                cur[1].append(epenthetic)
            elif kind in ("join_nucleus", "set_nucleus"):
                cur[1].append(g)
                cur[4].append(i)
            elif kind == "coda":
                cur[2].append(g)
                cur[5].append(i)
    if cur is not None:
        if not cur[1]:
            raise InvalidLabeling(len(f), "final syllable has no nucleus")
        out.append(PseudoSyllable(tuple(cur[0]), tuple(cur[1]), tuple(cur[2]),
                                  tuple(cur[3]), tuple(cur[4]), tuple(cur[5])))
    if not out:
        raise InvalidLabeling(len(f), "every letter is excluded")
    return out


def try_form(f: SourceWord, labels: Sequence[str], resource: LanguageResource | None = None):
    try:
        return form_pseudo_syllables(f, labels, resource)
    except InvalidLabeling:
        return None


def pseudo_structure(s: Sequence[PseudoSyllable]) -> list:
    return [p.structure for p in s]


# ---------------------------------------------------------------------------
# ground truth


def _min_letters(target_syllable: tuple) -> int:
    # ON alone yields [O, N]; a coda forces separate O/N letters
    if CODA in target_syllable:
        return len(target_syllable)
    return 1


def _structure_search(m: int, target: Sequence[tuple]):
    """Memoized feasibility over (position, closed count, open shape, prev_n)."""
    target = tuple(tuple(t) for t in target)
    k_total = len(target)
    suffix_need = [0] * (k_total + 1)
    for k in range(k_total - 1, -1, -1):
        suffix_need[k] = suffix_need[k + 1] + _min_letters(target[k])

    def shape_structure(shape):
        return tuple(r for r, present in zip((ONSET, NUCLEUS, CODA), shape) if present)

    def open_ok(closed, shape):
        if shape is None:
            return True
        if closed >= k_total:
            return False
        tgt = target[closed]
        if shape[0] != (ONSET in tgt):
            return False
        if shape[2] and CODA not in tgt:
            return False
        return True

    def need(closed, shape):
        if shape is None:
            return suffix_need[closed]
        tgt = target[closed]
        own = 0
        if not shape[1]:
            own += 1
        if CODA in tgt and not shape[2]:
            own += 1
        return own + suffix_need[closed + 1]

    def step(i, closed, shape, prev_n, label):
        """Advance one letter; None if the partial labeling can no longer match."""
        res = _transition(shape, prev_n, label)
        if res is None:
            return None
        actions, new_shape, new_prev = res
        cur_shape = shape
        for act in actions:
            if act[0] == "close":
                if cur_shape is None or closed >= k_total or shape_structure(cur_shape) != target[closed]:
                    return None
                closed += 1
                cur_shape = None
            elif act[0] == "open_onset":
                cur_shape = (True, False, False)
            elif act[0] == "open_nucleus":
                cur_shape = (False, True, False)
            elif act[0] == "epenthesize":
                cur_shape = (True, True, False)
        if not open_ok(closed, new_shape):
            return None
        if need(closed, new_shape) > m - (i + 1):
            return None
        return closed, new_shape, new_prev

    @lru_cache(maxsize=None)
    def feasible(i, closed, shape, prev_n):
        if i == m:
            if shape is None:
                return closed == k_total
            return (closed == k_total - 1 and shape[1]
                    and shape_structure(shape) == target[closed])
        for lab in LABELS:
            nxt = step(i, closed, shape, prev_n, lab)
            if nxt is not None and feasible(i + 1, *nxt):
                return True
        return False

    return step, feasible


def derive_ground_truth_labels(f: SourceWord, e: Pronunciation, resource: LanguageResource | None = None) -> list:
    """All label sequences whose pseudo-syllables share the syllable structure of ``e``.

    Depth-first over letters; a partial labeling is abandoned as soon as its
    pseudo-syllables are malformed or can no longer be completed to the
    target structure.  Results are ordered by :func:`labeling_rank`.
    """
    target = structure_of(e)
    m = len(f)
    step, feasible = _structure_search(m, target)
    results = []

    def dfs(i, state, prefix):
        if i == m:
            results.append(tuple(prefix))
            return
        for lab in LABELS:
            nxt = step(i, *state, lab)
            if nxt is None or not feasible(i + 1, *nxt):
                continue
            prefix.append(lab)
            dfs(i + 1, nxt, prefix)
            prefix.pop()

    if feasible(0, 0, None, False):
        dfs(0, (0, None, False), [])
    if not results:
        raise NoValidLabeling(f"{f.text} cannot be labeled to match {len(target)} syllables")
    results.sort(key=lambda labs: labeling_rank(labs, f.classes))
    return [list(r) for r in results]


def class_mismatch(label: str, cls: str) -> bool:
    """A vowel letter outside a nucleus, or a consonant letter inside one."""
    if label == X:
        return False
    return (label == N) != (cls == VOWEL)


def labeling_rank(labels: Sequence[str], classes: Sequence[str]) -> tuple:
    """Fewest letters used against their class, then fewest dropped letters,
    then fewest inserted nuclei, then label order."""
    return (sum(class_mismatch(lab, c) for lab, c in zip(labels, classes)),
            sum(1 for lab in labels if lab == X),
            sum(1 for lab in labels if lab == ON),
            tuple(LABEL_INDEX[lab] for lab in labels))


def best_ground_truth_labels(f: SourceWord, e: Pronunciation, resource: LanguageResource | None = None,
                             affinity=None) -> list:
    """First labeling under :func:`labeling_rank`, without enumerating the rest.

    ``affinity(letter, role, phonemes)`` optionally scores how well a letter
    fits the target unit it is grouped with; among labelings that tie on
    class mismatches, deletions and insertions, the highest total affinity
    then wins before label order is consulted.
    """
    target = structure_of(e)
    m = len(f)
    step, feasible = _structure_search(m, target)
    syllables = e.syllables

    def fit(i, lab, closed_after):
        if affinity is None or lab == X:
            return 0.0
        if lab == ON:
            k, role = closed_after - 1, ONSET
        else:
            k, role = closed_after, {O: ONSET, N: NUCLEUS, CD: CODA}[lab]
        return affinity(f.graphemes[i], role, syllables[k].unit(role))

    @lru_cache(maxsize=None)
    def best(i, closed, shape, prev_n):
        if i == m:
            return (0, 0, 0, 0.0, ())
        choice = None
        for lab in LABELS:
            nxt = step(i, closed, shape, prev_n, lab)
            if nxt is None or not feasible(i + 1, *nxt):
                continue
            mis, x, on, neg_fit, rest = best(i + 1, *nxt)
            cand = (mis + class_mismatch(lab, f.classes[i]), x + (lab == X), on + (lab == ON),
                    neg_fit - fit(i, lab, nxt[0]), (LABEL_INDEX[lab],) + rest)
            if choice is None or cand < choice:
                choice = cand
        return choice

    if not feasible(0, 0, None, False):
        raise NoValidLabeling(f"{f.text} cannot be labeled to match {len(target)} syllables")
    return [LABELS[i] for i in best(0, 0, None, False)[4]]


def brute_force_labelings(f: SourceWord, e: Pronunciation) -> list:
    """Unpruned enumeration of all 5**M labelings; for checking the search."""
    target = structure_of(e)
    out = []
    for labels in product(LABELS, repeat=len(f)):
        s = try_form(f, labels)
        if s is not None and pseudo_structure(s) == target:
            out.append(list(labels))
    out.sort(key=lambda labs: labeling_rank(labs, f.classes))
    return out


# ---------------------------------------------------------------------------
# smoothed contexts


@dataclass(frozen=True)
class SmoothedContext:
    context: tuple
    k: int
    t: int

    @property
    def order(self) -> int:
        return self.k + self.t


def generate_smoothed_contexts(window: Sequence[str], classes: Sequence[str | None]) -> list:
    """Smoothed variants of a centred letter window of odd length ``n + 1``.

    ``classes`` gives the consonant/vowel class per window slot (None for the
    boundary symbol, which is never smoothed).  For every ``0 <= k, t <= n/2``
    the ``t`` leftmost and ``k`` rightmost slots are replaced by their class.
    Then the window is shortened symmetrically, outer slots becoming ``_``,
    down to the class of the centre letter alone.  Back-off variants carry
    ``k + t = n + b`` for the b-th shortening step so their weight keeps
    decaying.  Duplicates keep their first (heaviest) occurrence.
    """
    size = len(window)
    if size % 2 != 1:
        raise ValueError("window length must be odd (n + 1 with n even)")
    half = size // 2

    def cls(j):
        c = classes[j]
        return window[j] if c is None else CLASS_TOKEN[c]

    variants = []
    for order in range(0, 2 * half + 1):
        for t in range(half, -1, -1):
            k = order - t
            if not 0 <= k <= half:
                continue
            ctx = tuple(
                window[j] if t <= j <= size - 1 - k else cls(j)
                for j in range(size)
            )
            variants.append(SmoothedContext(ctx, k, t))
    # back-off: shorten by one slot on each side, then the centre class alone
    for b in range(1, half + 1):
        ctx = tuple(
            BACKOFF if abs(j - half) > half - b else (window[j] if j == half else cls(j))
            for j in range(size)
        )
        order = 2 * half + b
        variants.append(SmoothedContext(ctx, (order + 1) // 2, order // 2))
    order = 3 * half + 1
    centre = tuple(BACKOFF if j != half else cls(j) for j in range(size))
    variants.append(SmoothedContext(centre, (order + 1) // 2, order // 2))

    seen, out = set(), []
    for v in variants:
        if v.context not in seen:
            seen.add(v.context)
            out.append(v)
    return out


def letter_window(f: SourceWord, i: int, n: int) -> tuple:
    half = n // 2
    symbols, classes = [], []
    for j in range(i - half, i + half + 1):
        if 0 <= j < len(f):
            symbols.append(f.graphemes[j])
            classes.append(f.classes[j])
        else:
            symbols.append(BOUNDARY)
            classes.append(None)
    return tuple(symbols), tuple(classes)


# ---------------------------------------------------------------------------
# label model


@dataclass
class LabelModel:
    """Label counts per smoothed context, scored with weights ``lam ** (k + t)``."""

    window: int = 4
    lam: float = 0.4
    counts: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.window < 0 or self.window % 2:
            raise ValueError("window must be a non-negative even number")
        if not 0 < self.lam < 1:
            raise ValueError("lambda must lie in (0, 1)")

    def weight(self, k: int, t: int) -> float:
        return self.lam ** (k + t)

    def contexts(self, f: SourceWord, i: int) -> list:
        return generate_smoothed_contexts(*letter_window(f, i, self.window))

    def scores(self, f: SourceWord, i: int) -> dict:
        q = dict.fromkeys(LABELS, 0.0)
        seen = False
        for sc in self.contexts(f, i):
            row = self.counts.get(sc.context)
            if not row:
                continue
            seen = True
            total = sum(row.values())
            w = self.weight(sc.k, sc.t)
            for lab, c in row.items():
                q[lab] += w * c / total
        if not seen:
            return dict.fromkeys(LABELS, 1.0 / len(LABELS))
        return q

    def to_dict(self) -> dict:
        return {
            "window": self.window,
            "lambda": self.lam,
            "counts": sorted(
                [list(ctx), {lab: row[lab] for lab in LABELS if row.get(lab)}]
                for ctx, row in self.counts.items()
            ),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LabelModel":
        counts = {tuple(ctx): Counter(row) for ctx, row in d["counts"]}
        return cls(window=d["window"], lam=d["lambda"], counts=counts)


def train_label_model(corpus: Iterable, window: int = 4, lam: float = 0.4) -> LabelModel:
    """Count labels for every smoothed context of every letter in ``corpus``.

    ``corpus`` yields ``(SourceWord, labels)`` pairs.
    """
    model = LabelModel(window=window, lam=lam)
    counts: dict = defaultdict(Counter)
    n_pairs = 0
    for f, labels in corpus:
        if len(labels) != len(f):
            raise ValueError(f"{f.text}: {len(labels)} labels for {len(f)} letters")
        n_pairs += 1
        for i, lab in enumerate(labels):
            for sc in model.contexts(f, i):
                counts[sc.context][lab] += 1
    if not n_pairs:
        raise EmptyCorpus("no labeled words to train on")
    model.counts = dict(counts)
    return model


def score_label(model: LabelModel, f: SourceWord, i: int, label: str) -> float:
    return model.scores(f, i)[label]


def fallback_labels(f: SourceWord) -> list:
    """Rule labeling used when the decoder finds no valid hypothesis.

    Vowels are nuclei, a consonant right before a vowel is an onset, a
    word-final consonant after a vowel is a coda, and any other consonant
    gets an inserted vowel.
    """
    cls = f.classes
    m = len(f)
    out = []
    for i, c in enumerate(cls):
        if c == VOWEL:
            out.append(N)
        elif i + 1 < m and cls[i + 1] == VOWEL:
            out.append(O)
        elif i == m - 1 and i > 0 and cls[i - 1] == VOWEL:
            out.append(CD)
        else:
            out.append(ON)
    return out


def _completable(shape, remaining: int) -> bool:
    return shape is None or shape[1] or remaining > 0


def decode_labels(f: SourceWord, model: LabelModel, resource: LanguageResource | None = None,
                  beam_width: int = 16) -> list:
    """Most probable well-formed labeling by left-to-right beam search.

    Hypotheses are ranked by the sum of log scores, ties broken by label
    order at the earliest differing letter.
    """
    if beam_width < 1:
        raise ValueError("beam width must be at least 1")
    m = len(f)
    table = [model.scores(f, i) for i in range(m)]
    # (neg_logprob, label indices, shape, prev_n)
    beam = [(0.0, (), None, False)]
    for i in range(m):
        expanded = []
        for neg, labs, shape, prev_n in beam:
            for lab in LABELS:
                q = table[i][lab]
                if q <= 0.0:
                    continue
                step = _transition(shape, prev_n, lab)
                if step is None:
                    continue
                _, new_shape, new_prev = step
                if not _completable(new_shape, m - i - 1):
                    continue
                expanded.append((neg - math.log(q), labs + (LABEL_INDEX[lab],), new_shape, new_prev))
        expanded.sort(key=lambda h: (h[0], h[1]))
        beam = expanded[:beam_width]
        if not beam:
            break
    skip = LABEL_INDEX[X]
    finals = [h for h in beam if (h[2] is None or h[2][1]) and any(j != skip for j in h[1])]
    if not finals:
        return fallback_labels(f)
    best = min(finals, key=lambda h: (h[0], h[1]))
    return [LABELS[j] for j in best[1]]


def labeling_log_score(model: LabelModel, f: SourceWord, labels: Sequence[str]) -> float:
    """Negative log score accumulated letter by letter, as the decoder does."""
    neg = 0.0
    for i, lab in enumerate(labels):
        q = model.scores(f, i)[lab]
        if q <= 0.0:
            return math.inf
        neg -= math.log(q)
    return neg


# ---------------------------------------------------------------------------
# label dumps


def format_label_dump(rows: Iterable) -> str:
    return "".join(f"{f.text}\t{','.join(labels)}\n" for f, labels in rows)


def parse_label_dump(text: str, resource: LanguageResource) -> list:
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        word, _, labels = line.partition("\t")
        labs = labels.strip().split(",")
        bad = [lab for lab in labs if lab not in LABEL_INDEX]
        if bad:
            raise ValueError(f"line {lineno}: unknown labels {bad}")
        rows.append((resource.word(word), labs))
    return rows
