"""Lexical tone assignment.

A tone sequence is scored as the product over syllables of

    p(tone_k | tone_{k-1}, (onset_k, nucleus_k, coda_k), tone_{k+1})

with a boundary symbol before the first and after the last syllable.  Each
factor backs off through progressively coarser contexts::

    (prev, O N Cd, next) -> (prev, O N Cd) -> (O N Cd) -> (N Cd) -> (Cd) -> uniform

and the best sequence is found exactly by dynamic programming over pairs of
adjacent tones.  Probabilities are exact rationals so ties are real ties.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable

from .phonology import Pronunciation, Syllable

BOUNDARY_TONE = 0
N_LEVELS = 5


class EmptyCorpus(ValueError):
    pass


def _phones(syl: Syllable) -> tuple:
    return (" ".join(syl.onset), " ".join(syl.nucleus), " ".join(syl.coda))


def context_keys(prev: int, phones: tuple, nxt: int) -> list:
    """Context keys from most to least specific."""
    o, n, cd = phones
    return [
        (prev, o, n, cd, nxt),
        (prev, o, n, cd),
        (o, n, cd),
        (n, cd),
        (cd,),
    ]


@dataclass
class ToneModel:
    tone_count: int
    alpha: Fraction = Fraction(1)
    # one table per back-off level: context key -> Counter(tone -> count)
    levels: list = field(default_factory=lambda: [dict() for _ in range(N_LEVELS)])

    def __post_init__(self):
        self.alpha = Fraction(self.alpha)
        self._cache: dict = {}

    @property
    def tones(self) -> range:
        return range(1, self.tone_count + 1)

    def distribution(self, prev: int, phones: tuple, nxt: int) -> dict:
        """Smoothed distribution over tones for one syllable context.

        Starting from uniform, each level from coarsest to finest mixes its
        relative frequencies with the coarser estimate:
        ``(c(ctx, t) + alpha * p_coarser(t)) / (c(ctx) + alpha)``.  Levels
        that never saw the context leave the estimate unchanged.
        """
        key = (prev, phones, nxt)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        dist = {t: Fraction(1, self.tone_count) for t in self.tones}
        keys = context_keys(prev, phones, nxt)
        for level in range(N_LEVELS - 1, -1, -1):
            row = self.levels[level].get(keys[level])
            if not row:
                continue
            total = sum(row.values())
            dist = {t: (row.get(t, 0) + self.alpha * dist[t]) / (total + self.alpha) for t in self.tones}
        self._cache[key] = dist
        return dist

    def factor(self, prev: int, phones: tuple, tone: int, nxt: int) -> Fraction:
        return self.distribution(prev, phones, nxt)[tone]

    def sequence_score(self, p: Pronunciation, tones) -> Fraction:
        phones = [_phones(s) for s in p.syllables]
        padded = [BOUNDARY_TONE, *tones, BOUNDARY_TONE]
        score = Fraction(1)
        for k, ph in enumerate(phones):
            score *= self.factor(padded[k], ph, padded[k + 1], padded[k + 2])
        return score

    def to_dict(self) -> dict:
        return {
            "tone_count": self.tone_count,
            "alpha": str(self.alpha),
            "levels": [
                sorted([list(ctx), sorted([t, c] for t, c in row.items())] for ctx, row in table.items())
                for table in self.levels
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ToneModel":
        levels = [
            {tuple(ctx): Counter({t: c for t, c in row}) for ctx, row in table}
            for table in d["levels"]
        ]
        return cls(tone_count=d["tone_count"], alpha=Fraction(d["alpha"]), levels=levels)


def train_tone_model(corpus: Iterable[Pronunciation], tone_count: int, alpha=Fraction(1)) -> ToneModel:
    """Count each syllable's tone under every back-off context."""
    tables = [defaultdict(Counter) for _ in range(N_LEVELS)]
    n = 0
    for p in corpus:
        tones = p.tones
        if any(t is None for t in tones):
            raise ValueError(f"{p}: every syllable needs a tone for training")
        n += 1
        padded = [BOUNDARY_TONE, *tones, BOUNDARY_TONE]
        for k, syl in enumerate(p.syllables):
            t = padded[k + 1]
            if not 1 <= t <= tone_count:
                raise ValueError(f"tone {t} outside 1..{tone_count}")
            for level, key in enumerate(context_keys(padded[k], _phones(syl), padded[k + 2])):
                tables[level][key][t] += 1
    if not n:
        raise EmptyCorpus("no pronunciations to train the tone model")
    return ToneModel(tone_count=tone_count, alpha=alpha, levels=[dict(t) for t in tables])


# exact products as unreduced (numerator, denominator) pairs; Fraction
# normalisation at every step would dominate the run time
def _mul(a, b):
    return (a[0] * b[0], a[1] * b[1])


def _gt(a, b) -> bool:
    return a[0] * b[1] > b[0] * a[1]


def assign_tones(p: Pronunciation, model: ToneModel) -> list:
    """Highest-scoring tone sequence; ties go to the smaller tone at the earliest syllable.

    ``best[k][(a, b)]`` is the best product of factors k..K-1 given tone a on
    syllable k-1 and tone b on syllable k.  Tones are then read off left to
    right, taking the smallest tone that reaches the optimum.
    """
    phones = [_phones(s) for s in p.syllables]
    K = len(phones)
    if K == 0:
        return []
    tones = list(model.tones)

    def f(prev, k, tone, nxt):
        fr = model.factor(prev, phones[k], tone, nxt)
        return (fr.numerator, fr.denominator)

    prevs = [BOUNDARY_TONE] + tones
    best = [None] * (K + 1)
    best[K] = None
    for k in range(K - 1, -1, -1):
        table = {}
        nexts = tones if k < K - 1 else [BOUNDARY_TONE]
        for a in (prevs if k > 0 else [BOUNDARY_TONE]):
            for b in tones:
                top = None
                for c in nexts:
                    val = f(a, k, b, c)
                    if k < K - 1:
                        val = _mul(val, best[k + 1][(b, c)])
                    if top is None or _gt(val, top):
                        top = val
                table[(a, b)] = top
        best[k] = table

    out = []
    prev = BOUNDARY_TONE
    # pick tone 1 by its full optimum, then follow the factor that links each pair
    top = None
    choice = None
    for b in tones:
        val = best[0][(BOUNDARY_TONE, b)]
        if top is None or _gt(val, top):
            top, choice = val, b
    out.append(choice)
    for k in range(1, K):
        a, b = prev, out[-1]
        target = best[k - 1][(a, b)]
        nexts = tones
        pick = None
        for c in nexts:
            val = _mul(f(a, k - 1, b, c), best[k][(b, c)])
            if not _gt(target, val):
                pick = c
                break
        out.append(pick)
        prev = b
    return out


def brute_force_tones(p: Pronunciation, model: ToneModel) -> list:
    """Exhaustive search over all tone sequences; for checking :func:`assign_tones`."""
    best, arg = None, None
    for seq in product(model.tones, repeat=len(p.syllables)):
        score = model.sequence_score(p, seq)
        if best is None or score > best:
            best, arg = score, list(seq)
    return arg
