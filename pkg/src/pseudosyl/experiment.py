"""Corpus-size sweeps with repeated train/development/test partitions.

Two protocols are supported:

``fixed_test``
    A test set of ``test_size`` entries is drawn once and shared by every
    size.  Each sub-corpus of a given size is split ``train_fraction`` /
    rest into training and development data, ``repartitions`` times with
    disjoint development folds where the size allows it.
``cross_validation``
    Each sub-corpus is rotated ``repartitions`` times into test, development
    and training parts of ``test_fraction``, ``dev_fraction`` and the rest.

Sub-corpora are nested: the size-200 corpus contains the size-100 one.  The
development part only picks the label model's window and lambda from a
small grid.
"""

from __future__ import annotations

import dataclasses
import json
import math
import random
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

from .metrics import METRICS, ScoreReport, score
from .phonology import LanguageResource
from .pipeline import ENGINES, Config, ProposedModel, train_all, train_engine, transliterate_entries
from .symbolic import RuleSet

GRID_WINDOWS = (2, 4)
GRID_LAMBDAS = (0.2, 0.4, 0.6)


class PlanInfeasible(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentPlan:
    sizes: tuple = (100, 200, 300, 400, 500)
    train_fraction: float = 0.75
    repartitions: int = 4
    seed: int = 0
    protocol: str = "fixed_test"
    test_size: int = 100
    dev_fraction: float = 0.2
    test_fraction: float = 0.2
    tune: bool = True

    @classmethod
    def default_for(cls, resource_name: str) -> "ExperimentPlan":
        """Cantonese rotates 60/20/20 splits five times; other languages share one test set."""
        if resource_name == "cantonese":
            return cls(protocol="cross_validation", repartitions=5, dev_fraction=0.2, test_fraction=0.2)
        return cls()

    @classmethod
    def from_dict(cls, d: dict, base: "ExperimentPlan | None" = None) -> "ExperimentPlan":
        """Fields in ``d`` override ``base`` (the plain defaults when absent)."""
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise PlanInfeasible(f"unknown plan fields: {sorted(unknown)}")
        d = dict(d)
        if "sizes" in d:
            d["sizes"] = tuple(d["sizes"])
        return dataclasses.replace(base or cls(), **d)

    @classmethod
    def load(cls, path, base: "ExperimentPlan | None" = None) -> "ExperimentPlan":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")), base)

    def check(self, corpus_size: int) -> None:
        if not self.sizes:
            raise PlanInfeasible("no sizes given")
        if self.repartitions < 1:
            raise PlanInfeasible("need at least one repartition")
        if self.protocol == "fixed_test":
            if not 0 < self.train_fraction < 1:
                raise PlanInfeasible("train_fraction must lie in (0, 1)")
            if self.test_size < 1:
                raise PlanInfeasible("test_size must be positive")
            if self.test_size + max(self.sizes) > corpus_size:
                raise PlanInfeasible(
                    f"largest size {max(self.sizes)} plus test set {self.test_size} exceeds corpus of {corpus_size}")
            for s in self.sizes:
                if _fold(s, 1 - self.train_fraction) < 1 or s - _fold(s, 1 - self.train_fraction) < 1:
                    raise PlanInfeasible(f"size {s} is too small to split")
        elif self.protocol == "cross_validation":
            for frac in (self.dev_fraction, self.test_fraction):
                if not 0 < frac < 1:
                    raise PlanInfeasible("fractions must lie in (0, 1)")
            if self.dev_fraction + self.test_fraction >= 1:
                raise PlanInfeasible("development and test fractions leave no training data")
            if max(self.sizes) > corpus_size:
                raise PlanInfeasible(f"largest size {max(self.sizes)} exceeds corpus of {corpus_size}")
            for s in self.sizes:
                if min(_fold(s, self.test_fraction), _fold(s, self.dev_fraction)) < 1 or \
                        s - _fold(s, self.test_fraction) - _fold(s, self.dev_fraction) < 1:
                    raise PlanInfeasible(f"size {s} is too small to split")
        else:
            raise PlanInfeasible(f"unknown protocol {self.protocol!r}")
        if any(s < 1 for s in self.sizes):
            raise PlanInfeasible("sizes must be positive")


def _fold(size: int, frac: float) -> int:
    return int(round(size * frac))


@dataclass(frozen=True)
class Split:
    size: int
    repartition: int
    train: tuple  # corpus indices
    dev: tuple
    test: tuple


def make_splits(n: int, plan: ExperimentPlan) -> list:
    """All (size, repartition) splits as index tuples, reproducible from the seed."""
    plan.check(n)
    order = list(range(n))
    random.Random(plan.seed).shuffle(order)
    splits = []
    if plan.protocol == "fixed_test":
        test, pool = tuple(order[:plan.test_size]), order[plan.test_size:]
        for size in plan.sizes:
            sub = pool[:size]
            d = _fold(size, 1 - plan.train_fraction)
            for r in range(plan.repartitions):
                start = (r * d) % size
                rot = sub[start:] + sub[:start]
                splits.append(Split(size, r, tuple(rot[d:]), tuple(rot[:d]), test))
    else:
        for size in plan.sizes:
            sub = order[:size]
            tf, df = _fold(size, plan.test_fraction), _fold(size, plan.dev_fraction)
            for r in range(plan.repartitions):
                start = (r * tf) % size
                rot = sub[start:] + sub[:start]
                splits.append(Split(size, r, tuple(rot[tf + df:]), tuple(rot[tf:tf + df]), tuple(rot[:tf])))
    return splits


@dataclass
class Cell:
    size: int
    repartition: int
    engine: str
    report: ScoreReport
    skipped: int = 0
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"size": self.size, "repartition": self.repartition, "engine": self.engine,
                "skipped": self.skipped, "config": self.config, "scores": self.report.to_dict()}


def _ter(model, entries, resource) -> float:
    return score(transliterate_entries(model, entries), resource).ter.value


def tune_proposed(train, dev, resource: LanguageResource, base: Config = Config()) -> ProposedModel:
    """Train for each window, score each lambda on the development data, keep the best.

    Ties keep the earlier grid point (smaller window, then smaller lambda).
    """
    best = None
    for window in GRID_WINDOWS:
        model = train_all(train, resource, dataclasses.replace(base, window=window))
        for lam in GRID_LAMBDAS:
            cand = model.with_decoding(lam=lam)
            ter_dev = _ter(cand, dev, resource)
            if best is None or ter_dev < best[0]:
                best = (ter_dev, cand)
    return best[1]


@dataclass
class ExperimentResult:
    plan: ExperimentPlan
    cells: list

    def means(self) -> dict:
        """(size, engine) -> metric -> mean rate over repartitions (nan rates left out)."""
        groups: dict = {}
        for c in self.cells:
            groups.setdefault((c.size, c.engine), []).append(c)
        out = {}
        for key in sorted(groups):
            row = {}
            for metric in METRICS:
                vals = [getattr(c.report, metric).value for c in groups[key]]
                vals = [v for v in vals if not math.isnan(v)]
                row[metric] = sum(vals) / len(vals) if vals else float("nan")
            out[key] = row
        return out

    def to_tsv(self) -> str:
        lines = ["size\trepartition\tengine\tmetric\tvalue\tnumer\tdenom"]
        for c in sorted(self.cells, key=lambda c: (c.size, c.engine, c.repartition)):
            for metric, rate in c.report.rows():
                lines.append(f"{c.size}\t{c.repartition}\t{c.engine}\t{metric}\t{_num(rate.value)}"
                             f"\t{rate.numer}\t{rate.denom}")
        for (size, engine), row in self.means().items():
            for metric in METRICS:
                lines.append(f"{size}\tmean\t{engine}\t{metric}\t{_num(row[metric])}\t\t")
        return "\n".join(lines) + "\n"

    def summary(self) -> str:
        lines = [f"{'size':>6} {'engine':<9} " + " ".join(f"{m:>11}" for m in METRICS)]
        for (size, engine), row in self.means().items():
            lines.append(f"{size:>6} {engine:<9} " + " ".join(
                f"{'n/a' if math.isnan(row[m]) else f'{100 * row[m]:.2f}%':>11}" for m in METRICS))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        d = {"plan": asdict(self.plan), "cells": [c.to_dict() for c in
                                                   sorted(self.cells, key=lambda c: (c.size, c.engine, c.repartition))]}
        return json.dumps(d, sort_keys=True, indent=1) + "\n"


def _num(x: float) -> str:
    return "nan" if math.isnan(x) else f"{x:.6f}"


def run_experiment(corpus: Sequence, resource: LanguageResource, plan: ExperimentPlan,
                   engines: Sequence[str] = ("proposed",), config: Config = Config(),
                   ruleset: RuleSet | None = None) -> ExperimentResult:
    """Train and score every engine on every (size, repartition) split."""
    for e in engines:
        if e not in ENGINES:
            raise ValueError(f"unknown engine {e!r}")
    cells = []
    for split in make_splits(len(corpus), plan):
        train = [corpus[i] for i in split.train]
        dev = [corpus[i] for i in split.dev]
        test = [corpus[i] for i in split.test]
        for engine in engines:
            if engine == "proposed" and plan.tune and dev:
                model = tune_proposed(train, dev, resource, config)
            else:
                model = train_engine(engine, train, resource, config, ruleset)
            report = score(transliterate_entries(model, test), resource)
            used = {}
            if engine == "proposed":
                used = {"window": model.config.window, "lambda": model.config.lam}
            cells.append(Cell(split.size, split.repartition, engine, report,
                              len(getattr(model, "skipped", ())), used))
    return ExperimentResult(plan, cells)
