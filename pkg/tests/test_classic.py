from fractions import Fraction

import pytest

from syncmdp import (Dist, SupportSet, decide_almost_sure, decide_limit_sure,
                     decide_sure, recheck_certificate, simulate,
                     synthesize_sure_eventually_strategy)
from syncmdp.model import GuardExceeded, Limits

from conftest import ABSORBING, build


def test_funnel_eventually_modes(funnel):
    m, t = funnel.mdp, funnel.targets["target"]
    s0 = funnel.initial.support()
    assert not decide_sure(m, "eventually", t, s0).answer
    assert not decide_almost_sure(m, "eventually", t, s0).answer
    v = decide_limit_sure(m, "eventually", t, s0)
    assert v.answer
    assert v.certificate["via"] == "product"
    assert v.certificate["r"] == 1 and v.certificate["k"] == 1
    assert set(v.certificate["R"].names(m.states)) == {"q1"}


def test_funnel_other_modes_all_no(funnel):
    m, t = funnel.mdp, funnel.targets["target"]
    s0 = funnel.initial.support()
    for mode in ("always", "weakly", "strongly"):
        assert not decide_sure(m, mode, t, s0).answer
        assert not decide_almost_sure(m, mode, t, s0).answer


def test_loopback_almost_sure_weakly(loopback):
    m, t = loopback.mdp, loopback.targets["target"]
    s0 = loopback.initial.support()
    v = decide_almost_sure(m, "weakly", t, s0)
    assert v.answer
    assert set(v.certificate["t_prime"].names(m.states)) == {"q2"}
    assert decide_limit_sure(m, "weakly", t, s0).answer


def test_twophase_eventually(twophase):
    m, t = twophase.mdp, twophase.targets["target"]
    v1 = decide_sure(m, "eventually", t, m.support(["q1"]))
    assert v1.answer and v1.certificate["k"] == 1
    v3 = decide_sure(m, "eventually", t, m.support(["q3"]))
    assert v3.answer and v3.certificate["k"] == 0
    both = m.support(["q1", "q3"])
    assert not decide_sure(m, "eventually", t, both).answer
    v = decide_limit_sure(m, "eventually", t, both)
    assert not v.answer
    assert set(v.certificate["failing_subsupport"].names(m.states)) == {"q1", "q3"}


def test_always_full_target_trivial(funnel, twophase):
    for pm in (funnel, twophase):
        m = pm.mdp
        assert decide_sure(m, "always", m.full_support(), pm.initial.support()).answer


def test_weakly_empty_target_no(funnel):
    m = funnel.mdp
    s0 = funnel.initial.support()
    assert not decide_almost_sure(m, "weakly", m.empty_support(), s0).answer
    assert not decide_sure(m, "weakly", m.empty_support(), s0).answer


def test_empty_target_all_modes_no(funnel):
    m = funnel.mdp
    s0 = funnel.initial.support()
    empty = m.empty_support()
    for mode in ("always", "eventually", "weakly", "strongly"):
        assert not decide_sure(m, mode, empty, s0).answer
        assert not decide_almost_sure(m, mode, empty, s0).answer
        assert not decide_limit_sure(m, mode, empty, s0).answer


def test_absorbing_dirac_all_limit_modes_yes():
    pm = build(ABSORBING)
    m, t, s0 = pm.mdp, pm.targets["target"], pm.initial.support()
    for mode in ("always", "eventually", "weakly", "strongly"):
        assert decide_limit_sure(m, mode, t, s0).answer


def test_twophase_sure_weakly_certificate(twophase):
    m, t = twophase.mdp, twophase.targets["target"]
    v = decide_sure(m, "weakly", t, m.support(["q1"]))
    assert v.answer
    cert = v.certificate
    assert set(cert["set"].names(m.states)) == {"q2", "q3"}
    assert cert["k"] == 1 and cert["r"] == 2
    assert recheck_certificate(m, v)


def test_countdown_strategy_twophase(twophase):
    m, t = twophase.mdp, twophase.targets["target"]
    s = synthesize_sure_eventually_strategy(m, t, m.support(["q1"]), 1)
    trace = simulate(m, s, Dist.dirac(m.n, m.state_index("q1")), 3)
    assert trace.dists[1].mass_in(t) == 1


def test_countdown_zero_steps(twophase):
    m, t = twophase.mdp, twophase.targets["target"]
    s = synthesize_sure_eventually_strategy(m, t, m.support(["q3"]), 0)
    trace = simulate(m, s, Dist.dirac(m.n, m.state_index("q3")), 2)
    assert trace.dists[0].mass_in(t) == 1


def test_countdown_holds_self_loop(funnel):
    m = funnel.mdp
    t = m.support(["q1"])
    s = synthesize_sure_eventually_strategy(m, t, t, 1)
    trace = simulate(m, s, Dist.dirac(m.n, m.state_index("q1")), 1)
    assert all(d.mass_in(t) == 1 for d in trace.dists)


def test_countdown_precondition(twophase):
    m, t = twophase.mdp, twophase.targets["target"]
    with pytest.raises(ValueError):
        synthesize_sure_eventually_strategy(m, t, m.support(["q0"]), 1)


def test_witnesses_simulate_correctly(funnel, twophase):
    # sure-always witness keeps the full mass inside the target forever
    m = funnel.mdp
    t = m.support(["q1", "q3"])
    v = decide_sure(m, "always", t, m.support(["q1"]))
    assert v.answer and v.witness is not None
    trace = simulate(m, v.witness, Dist.dirac(m.n, m.state_index("q1")), 10)
    assert all(d.mass_in(t) == 1 for d in trace.dists)

    # sure-weakly witness re-synchronizes every r steps
    m4, t4 = twophase.mdp, twophase.targets["target"]
    v = decide_sure(m4, "weakly", t4, m4.support(["q1"]))
    k, r = v.certificate["k"], v.certificate["r"]
    trace = simulate(m4, v.witness, Dist.dirac(m4.n, m4.state_index("q1")), k + 4 * r)
    for i in range(k, k + 4 * r + 1, r):
        assert trace.dists[i].mass_in(t4) == 1


def test_weakly_cycle_witness_with_approach_and_period():
    # two-step approach chain into a two-cycle, target on one side of the cycle
    pm = build({
        "states": ["s0", "s1", "c0", "c1"], "actions": ["a"],
        "transitions": [
            {"from": "s0", "action": "a", "to": "s1", "prob": "1"},
            {"from": "s1", "action": "a", "to": "c0", "prob": "1"},
            {"from": "c0", "action": "a", "to": "c1", "prob": "1"},
            {"from": "c1", "action": "a", "to": "c0", "prob": "1"},
        ],
        "initial": {"s0": "1"},
        "targets": {"goal": ["c0"]},
    })
    m, t = pm.mdp, pm.targets["goal"]
    v = decide_sure(m, "weakly", t, pm.initial.support())
    assert v.answer
    k, r = v.certificate["k"], v.certificate["r"]
    assert (k, r) == (2, 2)
    trace = simulate(m, v.witness, pm.initial, k + 3 * r)
    for i in range(k + 3 * r + 1):
        expected = 1 if (i >= k and (i - k) % r == 0) else 0
        assert trace.dists[i].mass_in(t) == expected, i


def test_sure_strongly_witness():
    pm = build({
        "states": ["s", "t"], "actions": ["a"],
        "transitions": [
            {"from": "s", "action": "a", "to": "t", "prob": "1"},
            {"from": "t", "action": "a", "to": "t", "prob": "1"},
        ],
        "initial": {"s": "1"},
        "targets": {"goal": ["t"]},
    })
    m, t = pm.mdp, pm.targets["goal"]
    v = decide_sure(m, "strongly", t, pm.initial.support())
    assert v.answer and v.witness is not None
    trace = simulate(m, v.witness, pm.initial, 6)
    assert all(trace.dists[i].mass_in(t) == 1 for i in range(m.n, 7))
    assert recheck_certificate(m, v)


def test_certificates_recheck_on_examples(drain, funnel, loopback, twophase):
    for pm in (drain, funnel, loopback, twophase):
        m, t, s0 = pm.mdp, pm.targets["target"], pm.initial.support()
        for mode in ("always", "eventually", "weakly", "strongly"):
            for decide in (decide_sure, decide_almost_sure, decide_limit_sure):
                assert recheck_certificate(m, decide(m, mode, t, s0))


def test_subset_search_guard(funnel):
    m = funnel.mdp
    limits = Limits(subset_width=0)
    with pytest.raises(GuardExceeded):
        decide_sure(m, "weakly", m.support(["q2"]), funnel.initial.support(),
                    limits=limits)


def test_support_only_dependence(funnel):
    # two distributions with equal support get identical verdicts
    m, t = funnel.mdp, funnel.targets["target"]
    s0 = m.support(["q0", "q1"])
    for mode in ("eventually", "weakly"):
        for decide in (decide_sure, decide_almost_sure, decide_limit_sure):
            assert decide(m, mode, t, s0).answer == decide(m, mode, t, s0).answer
    d_a = Dist(4, {0: Fraction(1, 4), 1: Fraction(3, 4)})
    d_b = Dist.uniform(4, [0, 1])
    assert d_a.support() == d_b.support() == s0
