"""Command line interface.

Exit status: 0 success, 1 usage error, 2 bad input data, 3 infeasible
experiment plan.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import joint as joint_mod
from .experiment import ExperimentPlan, PlanInfeasible, run_experiment
from .metrics import score
from .phonology import PhonologyError, ResourceError, UnknownGrapheme, load_resource
from .pipeline import (
    AllEntriesSkipped,
    Config,
    CorpusError,
    EmptyCorpus,
    ModelFormatError,
    SymbolicModel,
    check_corpus,
    load_corpus,
    load_model,
    save_model,
    train_engine,
    transliterate_entries,
)
from .pseudo_syllable import NoValidLabeling, best_ground_truth_labels, format_label_dump
from .symbolic import RulesetError, load_ruleset
from .synthetic import synthetic_corpus

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_PLAN = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common(p):
    p.add_argument("--resource", default="cantonese",
                   help="language resource name (cantonese, vietnamese) or .res file")
    p.add_argument("--window", type=int, default=4, help="label model window (even)")
    p.add_argument("--lambda", dest="lam", type=float, default=0.4, help="context weight decay")
    p.add_argument("--beam", type=int, default=16, help="label decoder beam width")
    p.add_argument("--seed", type=int, default=None, help="random seed")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pseudosyl", description="Phonology-aware transliteration.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("train", help="train a model from a corpus")
    _add_common(p)
    p.add_argument("corpus")
    p.add_argument("--model", required=True, help="output model file")
    p.add_argument("--engine", choices=("proposed", "joint"), default="proposed")

    p = sub.add_parser("transliterate", help="transliterate words")
    _add_common(p)
    p.add_argument("words", nargs="*", help="words (read from stdin when absent)")
    p.add_argument("--engine", choices=("proposed", "symbolic", "joint"), default="proposed")
    p.add_argument("--model", help="trained model file (proposed, joint)")
    p.add_argument("--ruleset", help="ruleset file or name (symbolic)")
    p.add_argument("--enable", action="append", default=[], help="optional symbolic rule to switch on")

    p = sub.add_parser("evaluate", help="score an engine on a test corpus")
    _add_common(p)
    p.add_argument("corpus")
    p.add_argument("--engine", choices=("proposed", "symbolic", "joint"), default="proposed")
    p.add_argument("--model")
    p.add_argument("--ruleset")
    p.add_argument("--format", choices=("table", "tsv"), default="table")

    p = sub.add_parser("derive-labels", help="dump ground-truth letter labels of a corpus")
    _add_common(p)
    p.add_argument("corpus")

    p = sub.add_parser("experiment", help="corpus-size sweep")
    _add_common(p)
    p.add_argument("corpus", nargs="?", help="corpus file (omit with --synthetic)")
    p.add_argument("--plan", help="JSON experiment plan")
    p.add_argument("--engine", action="append", choices=("proposed", "symbolic", "joint"),
                   help="engine to run (repeatable; default proposed)")
    p.add_argument("--ruleset")
    p.add_argument("--synthetic", type=int, metavar="N", help="use an N-entry synthetic corpus")
    p.add_argument("--format", choices=("table", "tsv", "json"), default="table")

    p = sub.add_parser("validate-corpus", help="report malformed corpus lines")
    _add_common(p)
    p.add_argument("corpus")
    return parser


def _config(args) -> Config:
    return Config(window=args.window, lam=args.lam, beam=args.beam)


def _engine_model(args, resource):
    if args.engine == "symbolic":
        rules = load_ruleset(args.ruleset or resource.name, enable=getattr(args, "enable", ()))
        return SymbolicModel(resource, rules)
    if not args.model:
        raise UsageError(f"--model is required for the {args.engine} engine")
    model = load_model(args.model, resource)
    if model.engine != args.engine:
        raise UsageError(f"{args.model} holds a {model.engine} model, not {args.engine}")
    return model


def cmd_train(args, resource, out):
    corpus = load_corpus(args.corpus, resource)
    model = train_engine(args.engine, corpus, resource, _config(args))
    save_model(model, args.model)
    print(f"trained {args.engine} model on {model.trained_on} of {len(corpus)} entries "
          f"({len(model.skipped)} skipped) -> {args.model}", file=out)
    return EXIT_OK


def cmd_transliterate(args, resource, out):
    model = _engine_model(args, resource)
    words = args.words or [w for w in sys.stdin.read().split() if w]
    for w in words:
        try:
            tokens = model.transliterate(w)
        except joint_mod.NoPath:
            tokens = []
        print(f"{w.upper()}\t{' '.join(tokens)}", file=out)
    return EXIT_OK


def cmd_evaluate(args, resource, out):
    corpus = load_corpus(args.corpus, resource)
    model = _engine_model(args, resource)
    report = score(transliterate_entries(model, corpus), resource)
    out.write(report.to_tsv() if args.format == "tsv" else report.summary())
    return EXIT_OK


def cmd_derive_labels(args, resource, out):
    corpus = load_corpus(args.corpus, resource)
    rows, skipped = [], 0
    for e in corpus:
        try:
            rows.append((e.word, best_ground_truth_labels(e.word, e.pronunciation(resource), resource)))
        except NoValidLabeling as exc:
            skipped += 1
            print(f"line {e.line}: skipped: {exc}", file=sys.stderr)
    out.write(format_label_dump(rows))
    print(f"{len(rows)} labeled, {skipped} skipped", file=sys.stderr)
    return EXIT_OK


def cmd_experiment(args, resource, out):
    if args.synthetic:
        corpus = synthetic_corpus(args.synthetic, seed=args.seed or 0, resource=resource)
    elif args.corpus:
        corpus = load_corpus(args.corpus, resource)
    else:
        raise UsageError("give a corpus file or --synthetic N")
    plan = ExperimentPlan.default_for(resource.name)
    if args.plan:
        plan = ExperimentPlan.load(args.plan, plan)
    if args.seed is not None:
        plan = ExperimentPlan.from_dict({"seed": args.seed}, plan)
    rules = load_ruleset(args.ruleset) if args.ruleset else None
    result = run_experiment(corpus, resource, plan, args.engine or ["proposed"], _config(args), rules)
    out.write({"table": result.summary, "tsv": result.to_tsv, "json": result.to_json}[args.format]())
    return EXIT_OK


def cmd_validate_corpus(args, resource, out):
    problems = check_corpus(Path(args.corpus).read_text(encoding="utf-8"), resource)
    for _, msg in problems:
        print(msg, file=out)
    if problems:
        print(f"{len(problems)} problem line(s)", file=sys.stderr)
        return EXIT_DATA
    print("ok", file=out)
    return EXIT_OK


COMMANDS = {
    "train": cmd_train,
    "transliterate": cmd_transliterate,
    "evaluate": cmd_evaluate,
    "derive-labels": cmd_derive_labels,
    "experiment": cmd_experiment,
    "validate-corpus": cmd_validate_corpus,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    try:
        resource = load_resource(args.resource)
        return COMMANDS[args.command](args, resource, out)
    except UsageError as exc:
        print(f"pseudosyl: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PlanInfeasible as exc:
        print(f"pseudosyl: infeasible plan: {exc}", file=sys.stderr)
        return EXIT_PLAN
    except (CorpusError, PhonologyError, UnknownGrapheme, ResourceError, RulesetError, ModelFormatError,
            EmptyCorpus, AllEntriesSkipped, FileNotFoundError, json.JSONDecodeError, ValueError) as exc:
        print(f"pseudosyl: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
