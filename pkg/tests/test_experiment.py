import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pseudosyl.experiment import (
    ExperimentPlan,
    PlanInfeasible,
    make_splits,
    run_experiment,
)
from pseudosyl.synthetic import synthetic_corpus

from conftest import CANTONESE

CORPUS = synthetic_corpus(60, seed=21)
PLAN = ExperimentPlan(sizes=(20, 40), repartitions=2, test_size=20, seed=3)


@pytest.fixture(scope="module")
def result():
    return run_experiment(CORPUS, CANTONESE, PLAN, ["proposed", "symbolic", "joint"])


def test_one_cell_per_size_repartition_and_engine(result):
    keys = sorted((c.size, c.repartition, c.engine) for c in result.cells)
    assert len(keys) == 2 * 2 * 3 == len(set(keys))
    assert set(result.means()) == {(s, e) for s in (20, 40) for e in ("joint", "proposed", "symbolic")}


def test_reruns_are_identical(result):
    again = run_experiment(CORPUS, CANTONESE, PLAN, ["proposed", "symbolic", "joint"])
    assert again.to_json() == result.to_json()
    assert again.to_tsv() == result.to_tsv()


def test_symbolic_engine_reproduces_its_own_targets(result):
    # the synthetic targets come from the same rules
    assert all(c.report.ter.numer == 0 for c in result.cells if c.engine == "symbolic")


def test_more_data_helps_the_proposed_engine(result):
    means = result.means()
    assert means[(40, "proposed")]["ter"] <= means[(20, "proposed")]["ter"]


def test_reports_serialise(result):
    d = json.loads(result.to_json())
    assert d["plan"]["sizes"] == [20, 40] and len(d["cells"]) == 12
    header, *rows = result.to_tsv().splitlines()
    assert header.split("\t") == ["size", "repartition", "engine", "metric", "value", "numer", "denom"]
    assert sum(r.split("\t")[1] == "mean" for r in rows) == 2 * 3 * 7
    assert "proposed" in result.summary()


@settings(max_examples=40)
@given(st.integers(0, 1000), st.sampled_from(["fixed_test", "cross_validation"]),
       st.integers(1, 5), st.lists(st.integers(10, 40), min_size=1, max_size=3, unique=True))
def test_splits_are_disjoint(seed, protocol, reps, sizes):
    plan = ExperimentPlan(sizes=tuple(sizes), repartitions=reps, seed=seed, protocol=protocol, test_size=20)
    splits = make_splits(60, plan)
    assert len(splits) == len(sizes) * reps
    for sp in splits:
        parts = [set(sp.train), set(sp.dev), set(sp.test)]
        assert not (parts[0] & parts[1] or parts[0] & parts[2] or parts[1] & parts[2])
        assert sp.train and sp.dev and sp.test
        if protocol == "cross_validation":
            assert len(sp.train) + len(sp.dev) + len(sp.test) == sp.size
        else:
            assert len(sp.train) + len(sp.dev) == sp.size
    if protocol == "fixed_test":
        assert len({sp.test for sp in splits}) == 1


def test_sub_corpora_are_nested():
    plan = ExperimentPlan(sizes=(20, 40), repartitions=1, test_size=10)
    small, large = make_splits(60, plan)
    assert set(small.train + small.dev) <= set(large.train + large.dev)


def test_development_folds_rotate():
    plan = ExperimentPlan(sizes=(40,), repartitions=4, test_size=10)
    devs = [set(sp.dev) for sp in make_splits(60, plan)]
    assert all(not (a & b) for i, a in enumerate(devs) for b in devs[i + 1:])


@pytest.mark.parametrize("plan", [
    ExperimentPlan(sizes=(50,), test_size=20),
    ExperimentPlan(sizes=()),
    ExperimentPlan(sizes=(20,), repartitions=0, test_size=10),
    ExperimentPlan(sizes=(20,), train_fraction=1.0, test_size=10),
    ExperimentPlan(sizes=(2,), train_fraction=0.9, test_size=10),
    ExperimentPlan(sizes=(80,), protocol="cross_validation"),
    ExperimentPlan(sizes=(20,), protocol="cross_validation", dev_fraction=0.5, test_fraction=0.5),
    ExperimentPlan(sizes=(20,), protocol="bootstrap"),
])
def test_infeasible_plans(plan):
    with pytest.raises(PlanInfeasible):
        make_splits(60, plan)


def test_plan_files_override_defaults():
    base = ExperimentPlan.default_for("cantonese")
    assert (base.protocol, base.repartitions, base.dev_fraction, base.test_fraction) == \
        ("cross_validation", 5, 0.2, 0.2)
    assert ExperimentPlan.default_for("vietnamese").protocol == "fixed_test"
    plan = ExperimentPlan.from_dict({"sizes": [10, 20], "seed": 4}, base)
    assert plan.sizes == (10, 20) and plan.seed == 4 and plan.repartitions == 5
    with pytest.raises(PlanInfeasible):
        ExperimentPlan.from_dict({"colour": "red"})


def test_unknown_engine():
    with pytest.raises(ValueError):
        run_experiment(CORPUS, CANTONESE, PLAN, ["neural"])
