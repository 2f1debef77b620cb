"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The random corpus is drawn once with a fixed seed; every criterion then runs
its named oracle checks over the analyzed instances at the stated horizons and
tolerances. Zero violations are allowed anywhere.
"""

import time
from fractions import Fraction

import pytest

from syncmdp import analyze, decide_limit_sure, decide_sure, example_model
from syncmdp.checks import CheckContext, run_checks
from syncmdp.engine import check_consistency
from syncmdp.randgen import corpus

CORPUS_SEED = 20260810
CORPUS_COUNT = 500
EXAMPLE_MODELS = ("drain", "funnel", "loopback", "twophase")


def report(criterion, detail):
    print(f"ACCEPTANCE {criterion}: PASS ({detail})")


@pytest.fixture(scope="session")
def example_analyses():
    out = {}
    for name in EXAMPLE_MODELS:
        pm = example_model(name)
        out[name] = analyze(pm.mdp, pm.initial, pm.targets["target"])
    return out


@pytest.fixture(scope="session")
def corpus_analyses():
    instances = corpus(CORPUS_SEED, CORPUS_COUNT)
    return [analyze(inst.mdp, inst.initial, inst.target) for inst in instances]


@pytest.fixture(scope="session")
def all_analyses(example_analyses, corpus_analyses):
    return list(example_analyses.values()) + corpus_analyses


def _run(analyses, names, horizon=None, **kw):
    failures = []
    ran = 0
    for an in analyses:
        for result in run_checks(an, horizon=horizon, names=names, **kw):
            if result.status == "fail":
                failures.append((an, result))
            elif result.status == "pass":
                ran += 1
    return ran, failures


def test_criterion_1_example_regression():
    start = time.perf_counter()
    f2 = example_model("funnel")
    m2, t2, s2 = f2.mdp, f2.targets["target"], f2.initial.support()
    assert decide_limit_sure(m2, "eventually", t2, s2).answer is True
    an2 = analyze(m2, f2.initial, t2)
    assert an2.answer("eventually", "almost-sure") is False
    assert an2.answer("eventually", "sure") is False
    for mode in ("always", "weakly", "strongly"):
        assert an2.answer(mode, "sure") is False
        assert an2.answer(mode, "almost-sure") is False

    f3 = example_model("loopback")
    an3 = analyze(f3.mdp, f3.initial, f3.targets["target"])
    assert an3.answer("weakly", "almost-sure") is True

    f4 = example_model("twophase")
    m4, t4 = f4.mdp, f4.targets["target"]
    both = m4.support(["q1", "q3"])
    assert decide_limit_sure(m4, "eventually", t4, both).answer is False
    assert decide_sure(m4, "eventually", t4, m4.support(["q1"])).answer is True
    assert decide_sure(m4, "eventually", t4, m4.support(["q3"])).answer is True

    f1 = example_model("drain")
    an1 = analyze(f1.mdp, f1.initial, f1.targets["target"])
    for mode in ("always", "weakly", "strongly"):
        assert an1.answer(mode, "positive") is True
        assert an1.answer(mode, "bounded") is False
    assert an1.answer("eventually", "positive") is True
    assert an1.answer("eventually", "bounded") is True

    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"example regression took {elapsed:.2f}s"
    report("criterion-1 example-regression", f"{elapsed * 1000:.0f} ms")


def test_criterion_2_bound_soundness(all_analyses):
    names = {"reach-value-cap", "step-decay-cap", "eventually-isolation",
             "always-prefix-dip", "strongly-prefix-dip"}
    start = time.perf_counter()
    ran, failures = _run(all_analyses, names, horizon=50)
    elapsed = time.perf_counter() - start
    assert not failures, failures[:3]
    assert elapsed < 60.0, f"bound soundness took {elapsed:.1f}s"
    report("criterion-2 bound-soundness",
           f"{len(all_analyses)} instances, {ran} applicable checks, {elapsed:.1f} s")


def test_criterion_3_near_sync_counting(corpus_analyses):
    applicable = [an for an in corpus_analyses
                  if 2 <= an.mdp.n <= 4 and not an.answer("weakly", "almost-sure")]
    ran, failures = _run(applicable, {"near-sync-count-cap"}, horizon=50,
                         enum_depth=6)
    assert not failures, failures[:3]
    assert ran > 0, "corpus produced no almost-sure-weakly-no instances"
    report("criterion-3 near-sync-counting", f"{ran} instances, zero violations")


def test_criterion_4_freezing_guarantee(all_analyses):
    applicable = [an for an in all_analyses if an.answer("strongly", "bounded")]
    ran, failures = _run(applicable, {"freezing-lower-bound"})
    assert not failures, failures[:3]
    assert ran > 0, "corpus produced no bounded-strongly-yes instances"
    report("criterion-4 freezing-guarantee", f"{ran} instances, exact floor held")


def test_criterion_5_winning_mode_identities(all_analyses):
    # analyze() already gates these; re-assert explicitly over every matrix
    for an in all_analyses:
        assert check_consistency(an.verdicts) == []
        for mode in ("weakly", "strongly"):
            assert an.answer(mode, "limit-sure") == an.answer(mode, "almost-sure")
        assert an.answer("always", "sure") == an.answer("always", "almost-sure") \
            == an.answer("always", "limit-sure")
        assert an.answer("eventually", "positive") == an.answer("eventually", "bounded")
        assert an.answer("always", "bounded") == (
            an.answer("always", "positive") and an.answer("strongly", "bounded"))
    report("criterion-5 winning-mode-identities",
           f"{len(all_analyses)} verdict matrices, all identities hold")


def test_criterion_6_region_oracle(all_analyses):
    ran, failures = _run(all_analyses, {"region-dp-agreement"})
    assert not failures, failures[:3]
    assert ran == len(all_analyses)
    report("criterion-6 region-dp-agreement",
           f"{ran} instances at horizon 200, gap 2^-20")


def test_criterion_7_lasso_integrity(all_analyses):
    ran, failures = _run(all_analyses, {"lasso-integrity"})
    assert not failures, failures[:3]
    assert ran == len(all_analyses)
    report("criterion-7 lasso-integrity",
           f"{ran} instances, matrix powers agree, one extra period verified")
