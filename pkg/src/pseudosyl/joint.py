"""Joint source-channel n-gram baseline.

Letters and target tokens are cut into aligned chunks ("cosegments") and an
n-gram model is trained over the chunk sequences.  Decoding finds the best
chunk sequence whose letter sides spell the input word and emits the token
sides as they are.  No syllable structure or tone check is applied, which is
exactly why this model can produce unpronounceable output.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

BOS = ("<s>", ())
EOS = ("</s>", ())


class NoSegmentation(ValueError):
    pass


class NoPath(ValueError):
    pass


class EmptyCorpus(ValueError):
    pass


@dataclass(frozen=True)
class Caps:
    graphemes: int = 3
    tokens: int = 4

    def __post_init__(self):
        if self.graphemes < 1 or self.tokens < 1:
            raise ValueError("cosegment caps must be at least 1")


# a cosegment is (letters as a string, tokens as a tuple); at least one letter
Cosegment = tuple


def _tie_key(seg: Sequence[Cosegment]) -> tuple:
    """Shorter cosegments first, then lexicographic."""
    return tuple((len(g) + len(t), g, t) for g, t in seg)


def enumerate_segmentations(f: str, e: Sequence[str], caps: Caps = Caps()):
    """Every monotone segmentation of (f, e) within the caps."""
    e = tuple(e)

    def rec(i, j):
        if i == len(f) and j == len(e):
            yield ()
            return
        for g in range(1, min(caps.graphemes, len(f) - i) + 1):
            for t in range(0, min(caps.tokens, len(e) - j) + 1):
                head = (f[i:i + g], e[j:j + t])
                for rest in rec(i + g, j + t):
                    yield (head,) + rest

    yield from rec(0, 0)


def segment_log_likelihood(seg: Sequence[Cosegment], logp: dict) -> float:
    return sum(logp[c] for c in seg)


def best_segmentation(f: str, e: Sequence[str], logp: dict, caps: Caps = Caps()) -> list:
    """Most likely segmentation under unigram log-probabilities ``logp``.

    Cosegments missing from ``logp`` are not allowed.  Near-equal scores are
    resolved by :func:`_tie_key`.
    """
    e = tuple(e)
    M, N = len(f), len(e)
    # best[i][j]: best suffix segmentation from (i, j) as (score, key, path)
    best = [[None] * (N + 1) for _ in range(M + 1)]
    best[M][N] = (0.0, (), ())
    for i in range(M - 1, -1, -1):
        for j in range(N, -1, -1):
            top = None
            for g in range(1, min(caps.graphemes, M - i) + 1):
                for t in range(0, min(caps.tokens, N - j) + 1):
                    rest = best[i + g][j + t]
                    c = (f[i:i + g], e[j:j + t])
                    if rest is None or c not in logp:
                        continue
                    score = logp[c] + rest[0]
                    key = ((g + t, c[0], c[1]),) + rest[1]
                    cand = (score, key, (c,) + rest[2])
                    if top is None or _better(cand, top):
                        top = cand
            best[i][j] = top
    if best[0][0] is None:
        raise NoSegmentation(f"{f}: cannot be aligned to {' '.join(e)} within caps")
    return list(best[0][0][2])


def _better(a, b, tol=1e-9) -> bool:
    if a[0] > b[0] + tol:
        return True
    if a[0] < b[0] - tol:
        return False
    return a[1] < b[1]


def _cooccurrence_counts(pairs, caps: Caps) -> Counter:
    """How many training pairs each candidate cosegment could appear in."""
    counts = Counter()
    for f, e in pairs:
        seen = set()
        for i in range(len(f)):
            for g in range(1, min(caps.graphemes, len(f) - i) + 1):
                for j in range(len(e) + 1):
                    for t in range(0, min(caps.tokens, len(e) - j) + 1):
                        seen.add((f[i:i + g], tuple(e[j:j + t])))
        counts.update(seen)
    return counts


def _logp(counts: Counter) -> dict:
    total = sum(counts.values())
    return {c: math.log(n / total) for c, n in counts.items() if n > 0}


@dataclass
class AlignmentResult:
    segmentations: dict  # pair index -> list of cosegments
    skipped: list  # pair indices that could not be segmented
    history: list  # corpus log-likelihood after each re-segmentation


def derive_cosegments(pairs: Sequence[tuple], caps: Caps = Caps(), max_iter: int = 20) -> AlignmentResult:
    """Hard-EM alignment of (word, token list) pairs.

    The first pass scores cosegments by how many pairs they could occur in.
    Afterwards each pass re-segments every pair with unigram probabilities
    estimated from the previous segmentation, using only cosegments that
    segmentation contains, until nothing changes.  Each pass can only raise
    the corpus likelihood.
    """
    pairs = [(f, tuple(e)) for f, e in pairs]
    logp = _logp(_cooccurrence_counts(pairs, caps))
    segs, skipped = {}, []
    for idx, (f, e) in enumerate(pairs):
        try:
            segs[idx] = best_segmentation(f, e, logp, caps)
        except NoSegmentation:
            skipped.append(idx)
    history = []
    for _ in range(max_iter):
        counts = Counter(c for seg in segs.values() for c in seg)
        logp = _logp(counts)
        history.append(sum(segment_log_likelihood(s, logp) for s in segs.values()))
        new = {idx: best_segmentation(pairs[idx][0], pairs[idx][1], logp, caps) for idx in segs}
        if new == segs:
            break
        segs = new
    return AlignmentResult(segs, skipped, history)


@dataclass
class JointNgramModel:
    order: int = 2
    caps: Caps = field(default_factory=Caps)
    # counts[m][history tuple of length m][cosegment] for m = 0..order-1
    counts: list = field(default_factory=list)
    beta: float = 1.0

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be at least 1")
        self._cache: dict = {}
        self._totals = [{h: sum(row.values()) for h, row in table.items()} for table in self.counts]
        unigrams = self.counts[0].get((), Counter()) if self.counts else Counter()
        self.vocabulary = sorted(c for c in unigrams if c != EOS)
        self._by_letters = defaultdict(list)
        for c in self.vocabulary:
            self._by_letters[c[0]].append(c)

    def prob(self, c: Cosegment, history: tuple) -> float:
        """Recursive interpolation with the next shorter history, down to add-one unigrams."""
        history = tuple(history)[len(history) - (self.order - 1):] if self.order > 1 else ()
        key = (c, history)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if not history:
            row = self.counts[0].get((), Counter())
            V = len(self.vocabulary) + 1  # + end marker
            p = (row.get(c, 0) + 1) / (self._totals[0].get((), 0) + V)
        else:
            lower = self.prob(c, history[1:])
            m = len(history)
            row = self.counts[m].get(history)
            if row:
                p = (row.get(c, 0) + self.beta * lower) / (self._totals[m][history] + self.beta)
            else:
                p = lower
        self._cache[key] = p
        return p

    def log_prob(self, seg: Sequence[Cosegment]) -> float:
        hist = (BOS,) * (self.order - 1)
        total = 0.0
        for c in list(seg) + [EOS]:
            total += math.log(self.prob(c, hist))
            hist = (hist + (c,))[1:] if self.order > 1 else ()
        return total

    def candidates(self, f: str, i: int) -> list:
        out = []
        for g in range(1, min(self.caps.graphemes, len(f) - i) + 1):
            out.extend(self._by_letters.get(f[i:i + g], ()))
        return out

    def to_dict(self) -> dict:
        def enc(c):
            return [c[0], list(c[1])]
        return {
            "order": self.order,
            "caps": [self.caps.graphemes, self.caps.tokens],
            "beta": self.beta,
            "counts": [
                sorted([[enc(h) for h in hist], sorted([enc(c), n] for c, n in row.items())]
                       for hist, row in table.items())
                for table in self.counts
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "JointNgramModel":
        def dec(x):
            return (x[0], tuple(x[1]))
        counts = [
            {tuple(dec(h) for h in hist): Counter({dec(c): n for c, n in row}) for hist, row in table}
            for table in d["counts"]
        ]
        return cls(order=d["order"], caps=Caps(*d["caps"]), counts=counts, beta=d["beta"])


def train_joint(corpus: Iterable[tuple], order: int = 2, caps: Caps = Caps()):
    """Train on (word, target tokens) pairs; returns (model, skipped pair indices)."""
    pairs = [(f, tuple(e)) for f, e in corpus]
    if not pairs:
        raise EmptyCorpus("no training pairs")
    aligned = derive_cosegments(pairs, caps)
    if not aligned.segmentations:
        raise EmptyCorpus("no training pair could be segmented")
    counts = [defaultdict(Counter) for _ in range(order)]
    for idx in sorted(aligned.segmentations):
        seq = [BOS] * (order - 1) + aligned.segmentations[idx] + [EOS]
        for k in range(order - 1, len(seq)):
            for m in range(order):
                counts[m][tuple(seq[k - m:k])][seq[k]] += 1
    model = JointNgramModel(order=order, caps=caps, counts=[dict(t) for t in counts])
    return model, aligned.skipped


def decode_joint(f: str, model: JointNgramModel) -> list:
    """Viterbi over chunk sequences that spell ``f``; returns the target tokens."""
    return [tok for c in viterbi_segmentation(f, model) for tok in c[1]]


def viterbi_segmentation(f: str, model: JointNgramModel) -> list:
    start = (BOS,) * (model.order - 1)
    # chart[i]: history -> (score, path)
    chart = [dict() for _ in range(len(f) + 1)]
    chart[0][start] = (0.0, ())
    for i in range(len(f)):
        for hist in sorted(chart[i], key=_hist_key):
            score, path = chart[i][hist]
            for c in model.candidates(f, i):
                s = score + math.log(model.prob(c, hist))
                nh = (hist + (c,))[1:] if model.order > 1 else ()
                j = i + len(c[0])
                old = chart[j].get(nh)
                if old is None or s > old[0] + 1e-12:
                    chart[j][nh] = (s, path + (c,))
    best = None
    for hist in sorted(chart[len(f)], key=_hist_key):
        score, path = chart[len(f)][hist]
        s = score + math.log(model.prob(EOS, hist))
        if best is None or s > best[0] + 1e-12:
            best = (s, path)
    if best is None:
        raise NoPath(f"{f}: no cosegment path")
    return list(best[1])


def _hist_key(hist):
    return tuple((g, t) for g, t in hist)


def brute_force_decode(f: str, model: JointNgramModel):
    """Score every chunk path that spells ``f``; for checking :func:`viterbi_segmentation`."""
    def rec(i):
        if i == len(f):
            yield ()
            return
        for c in model.candidates(f, i):
            for rest in rec(i + len(c[0])):
                yield (c,) + rest

    best = None
    for path in rec(0):
        s = model.log_prob(path)
        if best is None or s > best[0] + 1e-12:
            best = (s, list(path))
    if best is None:
        raise NoPath(f)
    return best
