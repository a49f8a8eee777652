"""Corpora, model bundles and the three transliteration engines.

The proposed engine chains three trained models:

1. a label model that groups letters into pseudo-syllables,
2. a unit mapping model that turns each onset/nucleus/coda into phonemes,
3. a tone model.

``symbolic`` applies a hand-written ruleset and ``joint`` is the cosegment
n-gram baseline.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

from . import joint as joint_mod
from .mapping import LetterAffinity, MappingModel, extract_unit_pairs, map_units, train_mapping
from .phonology import (
    LanguageResource,
    PhonologyError,
    Pronunciation,
    SourceWord,
    UnknownGrapheme,
    load_resource,
    parse_pronunciation,
    serialize_pronunciation,
    tokens_from_string,
)
from .pseudo_syllable import (
    LabelModel,
    NoValidLabeling,
    best_ground_truth_labels,
    decode_labels,
    form_pseudo_syllables,
    train_label_model,
)
from .symbolic import RuleSet, load_ruleset, transliterate_symbolic
from .tones import ToneModel, assign_tones, train_tone_model

FORMAT_VERSION = 1
ENGINES = ("proposed", "symbolic", "joint")


class CorpusError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ParseError(CorpusError):
    pass


class TargetInvalid(CorpusError):
    pass


class EmptyCorpus(ValueError):
    pass


class AllEntriesSkipped(ValueError):
    pass


class ModelFormatError(ValueError):
    pass


# ---------------------------------------------------------------------------
# corpora


@dataclass(frozen=True)
class CorpusEntry:
    word: SourceWord
    target: tuple  # canonical target tokens
    source_phonemes: tuple | None = None
    line: int = field(default=0, compare=False)

    def pronunciation(self, resource: LanguageResource) -> Pronunciation:
        return parse_pronunciation(list(self.target), resource)


def parse_corpus_line(line: str, lineno: int, resource: LanguageResource) -> CorpusEntry:
    cols = line.rstrip("\n").split("\t")
    if len(cols) not in (2, 3) or not cols[0].strip() or not cols[1].strip():
        raise ParseError(lineno, "expected WORD<TAB>target tokens[<TAB>source phonemes]")
    try:
        word = resource.word(cols[0])
    except UnknownGrapheme as exc:
        raise ParseError(lineno, str(exc)) from None
    try:
        p = parse_pronunciation(tokens_from_string(cols[1]), resource)
    except PhonologyError as exc:
        raise TargetInvalid(lineno, str(exc)) from None
    v = None
    if len(cols) == 3:
        v = tuple(cols[2].split())
        if len(v) != len(word):
            raise ParseError(lineno, f"{len(v)} source phonemes for {len(word)} letters")
    return CorpusEntry(word, tuple(serialize_pronunciation(p)), v, lineno)


def parse_corpus(text: str, resource: LanguageResource) -> list:
    """Entries in file order; the first malformed line raises with its number."""
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        out.append(parse_corpus_line(line, lineno, resource))
    return out


def check_corpus(text: str, resource: LanguageResource) -> list:
    """Every problem in a corpus as (line number, message)."""
    problems = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        try:
            parse_corpus_line(line, lineno, resource)
        except CorpusError as exc:
            problems.append((lineno, str(exc)))
    return problems


def load_corpus(path, resource: LanguageResource) -> list:
    return parse_corpus(Path(path).read_text(encoding="utf-8"), resource)


def format_corpus(entries: Sequence[CorpusEntry]) -> str:
    lines = []
    for e in entries:
        cols = [e.word.text, " ".join(e.target)]
        if e.source_phonemes is not None:
            cols.append(" ".join(e.source_phonemes))
        lines.append("\t".join(cols))
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# configuration and bundles


@dataclass(frozen=True)
class Config:
    window: int = 4
    lam: float = 0.4
    beam: int = 16
    joint_order: int = 2
    max_graphemes: int = 3
    max_tokens: int = 4


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


@dataclass
class ProposedModel:
    resource: LanguageResource
    config: Config
    labels: LabelModel
    mapping: MappingModel
    tones: ToneModel
    skipped: list = field(default_factory=list)  # (word, reason)
    trained_on: int = 0

    engine = "proposed"

    def transliterate_word(self, f: SourceWord, v: Sequence[str] | None = None) -> Pronunciation:
        labels = decode_labels(f, self.labels, self.resource, self.config.beam)
        s = form_pseudo_syllables(f, labels, self.resource)
        bare = map_units(s, self.mapping, self.resource, v)
        return bare.with_tones(assign_tones(bare, self.tones))

    def transliterate(self, word: str, v: Sequence[str] | None = None) -> list:
        return serialize_pronunciation(self.transliterate_word(self.resource.word(word), v))

    def with_decoding(self, lam: float | None = None, beam: int | None = None) -> "ProposedModel":
        """Same counts, different scoring knobs (used for development tuning)."""
        cfg = dataclasses.replace(self.config, lam=self.config.lam if lam is None else lam,
                                  beam=self.config.beam if beam is None else beam)
        lm = LabelModel(window=self.labels.window, lam=cfg.lam, counts=self.labels.counts)
        return dataclasses.replace(self, config=cfg, labels=lm)

    def to_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "engine": self.engine,
            "resource": self.resource.name,
            "config": asdict(self.config),
            "trained_on": self.trained_on,
            "skipped": [list(s) for s in self.skipped],
            "label_model": self.labels.to_dict(),
            "mapping_model": self.mapping.to_dict(),
            "tone_model": self.tones.to_dict(),
        }

    def dumps(self) -> str:
        return _dump(self.to_dict())


@dataclass
class JointModel:
    resource: LanguageResource
    config: Config
    model: joint_mod.JointNgramModel
    skipped: list = field(default_factory=list)
    trained_on: int = 0

    engine = "joint"

    def transliterate(self, word: str, v=None) -> list:
        text = self.resource.word(word).text
        return joint_mod.decode_joint(text, self.model)

    def to_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "engine": self.engine,
            "resource": self.resource.name,
            "config": asdict(self.config),
            "trained_on": self.trained_on,
            "skipped": [list(s) for s in self.skipped],
            "joint_model": self.model.to_dict(),
        }

    def dumps(self) -> str:
        return _dump(self.to_dict())


@dataclass
class SymbolicModel:
    resource: LanguageResource
    rules: RuleSet

    engine = "symbolic"

    def transliterate(self, word: str, v=None) -> list:
        return serialize_pronunciation(transliterate_symbolic(self.resource.word(word), self.rules, self.resource))


def train_all(corpus: Sequence[CorpusEntry], resource: LanguageResource, config: Config = Config()) -> ProposedModel:
    """Train the label, mapping and tone models of the proposed engine.

    Entries whose letters cannot be grouped to match the target syllable
    structure are skipped and listed in the bundle.
    """
    if not corpus:
        raise EmptyCorpus("no training entries")
    prons = [entry.pronunciation(resource) for entry in corpus]
    affinity = None
    # the second pass re-labels with letter/phoneme affinities from the first
    for _ in range(2):
        labeled, pairs, skipped = [], [], []
        for entry, p in zip(corpus, prons):
            try:
                labels = best_ground_truth_labels(entry.word, p, resource, affinity)
            except NoValidLabeling as exc:
                skipped.append((entry.word.text, str(exc)))
                continue
            labeled.append((entry.word, labels))
            pairs.extend(extract_unit_pairs(entry.word, labels, p, entry.source_phonemes, resource))
        if not pairs:
            break
        affinity = LetterAffinity(pairs)
    if not labeled:
        raise AllEntriesSkipped(f"none of the {len(corpus)} entries could be labeled")
    return ProposedModel(
        resource=resource,
        config=config,
        labels=train_label_model(labeled, config.window, config.lam),
        mapping=train_mapping(pairs, resource),
        tones=train_tone_model(prons, resource.tone_count),
        skipped=skipped,
        trained_on=len(labeled),
    )


def train_joint_engine(corpus: Sequence[CorpusEntry], resource: LanguageResource,
                       config: Config = Config()) -> JointModel:
    if not corpus:
        raise EmptyCorpus("no training entries")
    caps = joint_mod.Caps(config.max_graphemes, config.max_tokens)
    pairs = [(e.word.text, e.target) for e in corpus]
    model, skipped = joint_mod.train_joint(pairs, config.joint_order, caps)
    return JointModel(resource, config, model,
                      skipped=[(pairs[i][0], "no segmentation within caps") for i in skipped],
                      trained_on=len(pairs) - len(skipped))


def train_engine(engine: str, corpus: Sequence[CorpusEntry], resource: LanguageResource,
                 config: Config = Config(), ruleset: RuleSet | None = None):
    if engine == "proposed":
        return train_all(corpus, resource, config)
    if engine == "joint":
        return train_joint_engine(corpus, resource, config)
    if engine == "symbolic":
        return SymbolicModel(resource, ruleset if ruleset is not None else load_ruleset(resource.name))
    raise ValueError(f"unknown engine {engine!r}")


# ---------------------------------------------------------------------------
# persistence


def model_from_dict(d: dict, resource: LanguageResource | None = None):
    if d.get("format_version") != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model format {d.get('format_version')!r}")
    if resource is None:
        resource = load_resource(d["resource"])
    elif resource.name != d["resource"]:
        raise ModelFormatError(f"model was trained for {d['resource']}, not {resource.name}")
    config = Config(**d["config"])
    skipped = [tuple(s) for s in d["skipped"]]
    if d["engine"] == "proposed":
        return ProposedModel(resource, config, LabelModel.from_dict(d["label_model"]),
                             MappingModel.from_dict(d["mapping_model"]),
                             ToneModel.from_dict(d["tone_model"]), skipped, d["trained_on"])
    if d["engine"] == "joint":
        return JointModel(resource, config, joint_mod.JointNgramModel.from_dict(d["joint_model"]),
                          skipped, d["trained_on"])
    raise ModelFormatError(f"unknown engine {d['engine']!r}")


def save_model(model, path) -> None:
    Path(path).write_text(model.dumps(), encoding="utf-8")


def load_model(path, resource: LanguageResource | None = None):
    return model_from_dict(json.loads(Path(path).read_text(encoding="utf-8")), resource)


def transliterate_entries(model, entries: Sequence[CorpusEntry]) -> list:
    """(reference tokens, hypothesis tokens) per entry; a joint NoPath gives an empty hypothesis."""
    out = []
    for e in entries:
        try:
            hyp = model.transliterate(e.word.text, e.source_phonemes)
        except joint_mod.NoPath:
            hyp = []
        out.append((list(e.target), list(hyp)))
    return out
