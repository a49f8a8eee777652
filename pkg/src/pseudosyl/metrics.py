"""Error rates for transliteration output.

* token error rate: edit operations over reference tokens (phonemes, tones
  and syllable delimiters all count as tokens);
* string error rate: share of outputs with at least one error;
* syllable error rate: the same edit count with whole syllables as tokens;
* onset / nucleus / coda / tone error rates over aligned syllable pairs that
  have the same number of units.

Rates keep their exact numerator and denominator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .phonology import (
    CODA,
    DELIMITER,
    NUCLEUS,
    ONSET,
    LanguageResource,
    PhonologyError,
    parse_pronunciation,
)

MATCH, SUB, DEL, INS = "match", "sub", "del", "ins"
# preference among equal-cost moves
_PREF = {MATCH: 0, SUB: 1, DEL: 2, INS: 3}


class EmptyTestSet(ValueError):
    pass


@dataclass(frozen=True)
class Alignment:
    ops: tuple  # (op, ref index or None, hyp index or None)

    @property
    def cost(self) -> int:
        return sum(op != MATCH for op, _, _ in self.ops)

    def counts(self) -> dict:
        out = {MATCH: 0, SUB: 0, DEL: 0, INS: 0}
        for op, _, _ in self.ops:
            out[op] += 1
        return out

    def apply(self, ref: Sequence, hyp: Sequence) -> list:
        """Replay the operations on ``ref``; yields ``hyp`` for a correct alignment."""
        out = []
        for op, i, j in self.ops:
            if op == MATCH:
                out.append(ref[i])
            elif op in (SUB, INS):
                out.append(hyp[j])
        return out


def align(ref: Sequence, hyp: Sequence) -> Alignment:
    """Minimum edit-cost alignment with unit costs.

    Among equally cheap alignments, moves are chosen from the start of the
    sequences preferring match, then substitution, deletion, insertion.
    """
    n, m = len(ref), len(hyp)
    # cost[i][j]: cost of aligning ref[i:] with hyp[j:]
    cost = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n, -1, -1):
        for j in range(m, -1, -1):
            if i == n:
                cost[i][j] = m - j
            elif j == m:
                cost[i][j] = n - i
            else:
                cost[i][j] = min(
                    cost[i + 1][j + 1] + (ref[i] != hyp[j]),
                    cost[i + 1][j] + 1,
                    cost[i][j + 1] + 1,
                )
    ops = []
    i = j = 0
    while i < n or j < m:
        moves = []
        if i < n and j < m:
            op = MATCH if ref[i] == hyp[j] else SUB
            moves.append((cost[i + 1][j + 1] + (op == SUB), _PREF[op], op))
        if i < n:
            moves.append((cost[i + 1][j] + 1, _PREF[DEL], DEL))
        if j < m:
            moves.append((cost[i][j + 1] + 1, _PREF[INS], INS))
        _, _, op = min(moves)
        if op in (MATCH, SUB):
            ops.append((op, i, j))
            i, j = i + 1, j + 1
        elif op == DEL:
            ops.append((op, i, None))
            i += 1
        else:
            ops.append((op, None, j))
            j += 1
    return Alignment(tuple(ops))


@dataclass(frozen=True)
class Rate:
    numer: int
    denom: int

    @property
    def value(self) -> float:
        return self.numer / self.denom if self.denom else float("nan")

    @property
    def exact(self) -> Fraction | None:
        return Fraction(self.numer, self.denom) if self.denom else None


def _check(pairs):
    if not pairs:
        raise EmptyTestSet("no (reference, hypothesis) pairs")


def ter(pairs: Sequence[tuple]) -> Rate:
    _check(pairs)
    return Rate(sum(align(r, h).cost for r, h in pairs), sum(len(r) for r, _ in pairs))


def ser(pairs: Sequence[tuple]) -> Rate:
    _check(pairs)
    return Rate(sum(list(r) != list(h) for r, h in pairs), len(pairs))


def split_syllable_tokens(tokens: Sequence[str]) -> list:
    """Token stream cut at delimiters; one tuple of tokens per syllable."""
    out, cur = [], []
    for tok in tokens:
        if tok == DELIMITER:
            out.append(tuple(cur))
            cur = []
        else:
            cur.append(tok)
    if cur or out:
        out.append(tuple(cur))
    return out


@dataclass(frozen=True)
class _Unparsed:
    """A hypothesis syllable that does not parse; never equal to a reference syllable."""
    tokens: tuple
    slot: int


def _syllable_units(tokens: tuple, resource: LanguageResource):
    """(onset, nucleus, coda, tone) of one syllable, or None if it does not parse."""
    try:
        p = parse_pronunciation(list(tokens), resource)
    except PhonologyError:
        return None
    if len(p.syllables) != 1:
        return None
    s = p.syllables[0]
    return (s.onset, s.nucleus, s.coda, s.tone)


def _syllable_seqs(ref, hyp, resource):
    r = split_syllable_tokens(ref)
    h = []
    for k, syl in enumerate(split_syllable_tokens(hyp)):
        h.append(syl if _syllable_units(syl, resource) is not None else _Unparsed(syl, k))
    return r, h


def syllable_er(pairs: Sequence[tuple], resource: LanguageResource) -> Rate:
    _check(pairs)
    errs = total = 0
    for ref, hyp in pairs:
        r, h = _syllable_seqs(ref, hyp, resource)
        errs += align(r, h).cost
        total += len(r)
    return Rate(errs, total)


@dataclass(frozen=True)
class UnitRates:
    onset: Rate
    nucleus: Rate
    coda: Rate
    tone: Rate


def _unit_count(units) -> int:
    return sum(bool(u) for u in units[:3])


def subsyllabic_er(pairs: Sequence[tuple], resource: LanguageResource) -> UnitRates:
    """Per-role error rates over aligned syllables with the same number of units.

    A role's denominator counts the compared syllable pairs in which either
    side has that role; tones are compared for every such pair.  Hypothesis
    syllables that do not parse are left out.
    """
    _check(pairs)
    num = {ONSET: 0, NUCLEUS: 0, CODA: 0, "T": 0}
    den = dict(num)
    for ref, hyp in pairs:
        r, h = _syllable_seqs(ref, hyp, resource)
        for op, i, j in align(r, h).ops:
            if op not in (MATCH, SUB) or isinstance(h[j], _Unparsed):
                continue
            ru = _syllable_units(r[i], resource)
            hu = _syllable_units(h[j], resource)
            if ru is None or hu is None or _unit_count(ru) != _unit_count(hu):
                continue
            for idx, role in enumerate((ONSET, NUCLEUS, CODA)):
                if ru[idx] or hu[idx]:
                    den[role] += 1
                    num[role] += ru[idx] != hu[idx]
            den["T"] += 1
            num["T"] += ru[3] != hu[3]
    return UnitRates(*(Rate(num[k], den[k]) for k in (ONSET, NUCLEUS, CODA, "T")))


METRICS = ("ter", "ser", "syllable_er", "onset_er", "nucleus_er", "coda_er", "tone_er")


@dataclass(frozen=True)
class ScoreReport:
    ter: Rate
    ser: Rate
    syllable_er: Rate
    onset_er: Rate
    nucleus_er: Rate
    coda_er: Rate
    tone_er: Rate

    def rows(self) -> list:
        return [(name, getattr(self, name)) for name in METRICS]

    def to_tsv(self) -> str:
        lines = []
        for name, rate in self.rows():
            lines.append(f"{name}\t{_fmt(rate.value)}\t{rate.numer}\t{rate.denom}")
        return "\n".join(lines) + "\n"

    def summary(self) -> str:
        lines = [f"{'metric':<12} {'rate':>8} {'errors':>8} {'total':>8}"]
        for name, rate in self.rows():
            pct = "n/a" if not rate.denom else f"{100 * rate.value:.2f}%"
            lines.append(f"{name:<12} {pct:>8} {rate.numer:>8} {rate.denom:>8}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {name: [rate.numer, rate.denom] for name, rate in self.rows()}


def _fmt(x: float) -> str:
    return "nan" if x != x else f"{x:.6f}"


def score(pairs: Sequence[tuple], resource: LanguageResource) -> ScoreReport:
    """Full report for (reference tokens, hypothesis tokens) pairs."""
    pairs = [(list(r), list(h)) for r, h in pairs]
    units = subsyllabic_er(pairs, resource)
    return ScoreReport(ter(pairs), ser(pairs), syllable_er(pairs, resource),
                       units.onset, units.nucleus, units.coda, units.tone)
