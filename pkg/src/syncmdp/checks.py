"""Oracle cross-checks: every inequality and structural invariant the
verdicts imply, verified against exact simulation, backward induction, and
brute-force strategy enumeration. Nothing here shares code with the deciders.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .adversarial import (freezing_strategy, matrix_power_witness, post_image,
                          rows_image)
from .bounds import compute_bound
from .classic import recheck_certificate
from .model import BudgetExceeded, ONE, ZERO, uniform_strategy
from .oracle import (count_synchronized_positions, enumerate_pure_strategies,
                     max_mass_at_step, max_reach_values, simulate)
from .regions import almost_sure_reach_region

REGION_DP_HORIZON = 200
REGION_DP_GAP = Fraction(1, 1 << 20)


@dataclass
class CheckResult:
    name: str
    status: str            # "pass", "fail" or "skip"
    info: dict

    @property
    def ok(self):
        return self.status != "fail"


def _bound(verdict, kind):
    for b in verdict.bounds:
        if b.kind == kind:
            return b
    return None


DEFAULT_CHECK_BUDGET = 5000


class CheckContext:
    """Shared simulation artifacts for one analyzed instance."""

    def __init__(self, analysis, horizon=None, budget=DEFAULT_CHECK_BUDGET, enum_depth=6):
        self.analysis = analysis
        self.budget = budget
        self.enum_depth = enum_depth
        self.horizon = horizon if horizon is not None else max(50, 4 * analysis.switch)
        self._traces = None
        self._profile = None
        self._enumerated = None

    @property
    def traces(self):
        if self._traces is None:
            a = self.analysis
            strategies = {"uniform": uniform_strategy(a.mdp)}
            strategies["freezing"] = freezing_strategy(a.mdp, a.lasso, a.mec)
            for verdict in a.verdicts.values():
                w = verdict.witness
                if w is not None and w.label not in strategies:
                    strategies[w.label] = w
            self._traces = {label: simulate(a.mdp, s, a.initial, self.horizon)
                            for label, s in strategies.items()}
        return self._traces

    @property
    def profile(self):
        if self._profile is None:
            a = self.analysis
            self._profile = max_mass_at_step(a.mdp, a.target, a.initial, self.horizon)
        return self._profile


def check_lasso_integrity(ctx):
    """Lasso closure bounds, matrix-power agreement, and one extra period."""
    a = ctx.analysis
    lasso = a.lasso
    l, p = lasso.loop_start, lasso.period
    if l + p > 2 ** a.mdp.n:
        return CheckResult("lasso-integrity", "fail",
                           {"reason": f"closure {l}+{p} exceeds 2^n"})
    for i in range(l + p + 1):
        if rows_image(matrix_power_witness(a.mdp, i), a.s0) != lasso.at(i):
            return CheckResult("lasso-integrity", "fail",
                               {"reason": f"matrix power disagrees at step {i}"})
    cur = lasso.at(l)
    for j in range(2 * p + 1):
        if cur != lasso.at(l + j):
            return CheckResult("lasso-integrity", "fail",
                               {"reason": f"period broken at loop offset {j}"})
        cur = post_image(a.mdp, cur)
    tl = a.target_lasso
    k, r = tl.prefix_len, tl.period
    if k + r > 2 ** a.mdp.n:
        return CheckResult("lasso-integrity", "fail",
                           {"reason": "predecessor lasso exceeds 2^n"})
    for i in range(k, k + 3 * r + 1):
        if tl.at(i) != tl.at(i + r):
            return CheckResult("lasso-integrity", "fail",
                               {"reason": f"predecessor period broken at {i}"})
    return CheckResult("lasso-integrity", "pass", {"loop_start": l, "period": p,
                                                   "pre_k": k, "pre_r": r})


def check_step_decay_cap(ctx):
    """Not sure-eventually: optimal mass at step i stays below 1 - alpha0*alpha^i."""
    a = ctx.analysis
    if a.answer("eventually", "sure"):
        return CheckResult("step-decay-cap", "skip", {"reason": "sure eventually holds"})
    alpha_i = a.alpha0
    slack = None
    for i, v in enumerate(ctx.profile.values):
        if v > 1 - alpha_i:
            return CheckResult("step-decay-cap", "fail", {"step": i, "value": str(v)})
        gap = (1 - alpha_i) - v
        slack = gap if slack is None or gap < slack else slack
        alpha_i *= a.alpha
    return CheckResult("step-decay-cap", "pass",
                       {"horizon": ctx.horizon, "min_slack": str(slack)})


def check_eventually_isolation(ctx):
    """Not limit-sure eventually: the attached eps_eventually isolates the value."""
    a = ctx.analysis
    verdict = a.verdicts[("eventually", "limit-sure")]
    if verdict.answer:
        return CheckResult("eventually-isolation", "skip", {"reason": "limit-sure holds"})
    cert = _bound(verdict, "eps_eventually")
    if cert is None or cert.value is None:
        return CheckResult("eventually-isolation", "skip", {"reason": "no exact bound"})
    eps = cert.value
    worst = min((1 - v for v in ctx.profile.values), default=ONE)
    if any(v > 1 - eps for v in ctx.profile.values):
        return CheckResult("eventually-isolation", "fail", {"eps": str(eps)})
    return CheckResult("eventually-isolation", "pass",
                       {"eps_log10": cert.log10, "observed_gap": str(worst)})


def check_reach_value_cap(ctx):
    """Outside the almost-sure reach region the reach value is capped for good."""
    a = ctx.analysis
    region = almost_sure_reach_region(a.mdp, a.target)
    if a.s0 <= region:
        return CheckResult("reach-value-cap", "skip",
                           {"reason": "initial support is almost-sure for reach"})
    cap = compute_bound("lemma1_reach", a.mdp.n, a.mdp.action_count,
                        a.alpha, a.alpha0).value
    for i, v in enumerate(ctx.profile.values):
        if v > 1 - cap:
            return CheckResult("reach-value-cap", "fail", {"step": i, "value": str(v)})
    worst = min(1 - v for v in ctx.profile.values)
    return CheckResult("reach-value-cap", "pass",
                       {"cap": str(cap), "observed_gap": str(worst)})


def check_always_prefix_dip(ctx):
    """Not sure always: within the first n steps the optimum dips below 1 - eps_a.

    Note the per-strategy position guarantee does not imply this prefix form
    in general (different strategies may dip at different steps), so a failure
    here is reported with the full profile prefix for inspection.
    """
    a = ctx.analysis
    verdict = a.verdicts[("always", "sure")]
    if verdict.answer:
        return CheckResult("always-prefix-dip", "skip", {"reason": "sure always holds"})
    cert = _bound(verdict, "eps_always")
    if cert is None or cert.value is None:
        return CheckResult("always-prefix-dip", "skip", {"reason": "no exact bound"})
    prefix = ctx.profile.values[:a.mdp.n + 1]
    if min(prefix) <= 1 - cert.value:
        return CheckResult("always-prefix-dip", "pass", {"eps": str(cert.value)})
    return CheckResult("always-prefix-dip", "fail",
                       {"eps": str(cert.value), "prefix": [str(v) for v in prefix]})


def check_strongly_prefix_dip(ctx):
    """Not almost-sure strongly: same min-over-prefix form against eps_s."""
    a = ctx.analysis
    verdict = a.verdicts[("strongly", "almost-sure")]
    if verdict.answer:
        return CheckResult("strongly-prefix-dip", "skip",
                           {"reason": "almost-sure strongly holds"})
    cert = _bound(verdict, "eps_strongly")
    if cert is None or cert.value is None:
        return CheckResult("strongly-prefix-dip", "skip", {"reason": "no exact bound"})
    prefix = ctx.profile.values[:a.mdp.n + 1]
    if min(prefix) <= 1 - cert.value:
        return CheckResult("strongly-prefix-dip", "pass", {"eps": str(cert.value)})
    return CheckResult("strongly-prefix-dip", "fail",
                       {"eps": str(cert.value), "prefix": [str(v) for v in prefix]})


def _enumerated(ctx):
    """Pure-strategy traces at the deepest horizon the budget admits (n <= 4)."""
    if ctx._enumerated is not None:
        return ctx._enumerated
    a = ctx.analysis
    if a.mdp.n > 4:
        ctx._enumerated = (None, [])
        return ctx._enumerated
    h = ctx.enum_depth
    while h >= 0:
        try:
            ctx._enumerated = (h, [trace for _, trace in
                                   enumerate_pure_strategies(a.mdp, a.initial, h,
                                                             budget=ctx.budget)])
            return ctx._enumerated
        except BudgetExceeded:
            h -= 1
    ctx._enumerated = (None, [])
    return ctx._enumerated


def check_full_sync_count_cap(ctx):
    """Not sure weakly: any strategy is fully synchronized at most 2^n times."""
    a = ctx.analysis
    if a.answer("weakly", "sure"):
        return CheckResult("full-sync-count-cap", "skip", {"reason": "sure weakly holds"})
    cap = 2 ** a.mdp.n
    for label, trace in ctx.traces.items():
        count, _ = count_synchronized_positions(trace, a.target, ONE, strict=False)
        if count > cap:
            return CheckResult("full-sync-count-cap", "fail",
                               {"strategy": label, "count": count})
    depth, enumerated = _enumerated(ctx)
    for trace in enumerated:
        count, _ = count_synchronized_positions(trace, a.target, ONE, strict=False)
        if count > cap:
            return CheckResult("full-sync-count-cap", "fail",
                               {"strategy": trace.strategy_label, "count": count})
    return CheckResult("full-sync-count-cap", "pass",
                       {"cap": cap, "enumeration_depth": depth})


def check_near_sync_count_cap(ctx):
    """Not almost-sure weakly: at most 2^n strictly (1-eps_w)-synchronized steps."""
    a = ctx.analysis
    verdict = a.verdicts[("weakly", "almost-sure")]
    if verdict.answer:
        return CheckResult("near-sync-count-cap", "skip",
                           {"reason": "almost-sure weakly holds"})
    if a.mdp.n < 2:
        return CheckResult("near-sync-count-cap", "skip",
                           {"reason": "eps_weakly undefined for n=1"})
    cert = _bound(verdict, "eps_weakly")
    if cert is None or cert.value is None:
        return CheckResult("near-sync-count-cap", "skip", {"reason": "no exact bound"})
    threshold = 1 - cert.value
    cap = 2 ** a.mdp.n
    for label, trace in ctx.traces.items():
        count, _ = count_synchronized_positions(trace, a.target, threshold, strict=True)
        if count > cap:
            return CheckResult("near-sync-count-cap", "fail",
                               {"strategy": label, "count": count})
    depth, enumerated = _enumerated(ctx)
    for trace in enumerated:
        count, _ = count_synchronized_positions(trace, a.target, threshold, strict=True)
        if count > cap:
            return CheckResult("near-sync-count-cap", "fail",
                               {"strategy": trace.strategy_label, "count": count})
    return CheckResult("near-sync-count-cap", "pass",
                       {"cap": cap, "enumeration_depth": depth,
                        "enumerated": len(enumerated)})


def check_freezing_bound(ctx):
    """Bounded strongly: the freezing witness keeps the certified floor forever."""
    a = ctx.analysis
    verdict = a.verdicts[("strongly", "bounded")]
    if not verdict.answer:
        return CheckResult("freezing-lower-bound", "skip",
                           {"reason": "not bounded strongly"})
    cert = _bound(verdict, "eps_adversarial")
    nsteps = _bound(verdict, "N_adversarial")
    if cert is None or cert.value is None or nsteps is None:
        return CheckResult("freezing-lower-bound", "skip", {"reason": "no exact bound"})
    n_adv = nsteps.value
    h = a.switch + 3 * n_adv
    trace = simulate(a.mdp, freezing_strategy(a.mdp, a.lasso, a.mec), a.initial, h)
    start = a.switch + n_adv
    for i in range(start, h + 1):
        if trace.dists[i].mass_in(a.target) < cert.value:
            return CheckResult("freezing-lower-bound", "fail",
                               {"step": i, "mass": str(trace.dists[i].mass_in(a.target)),
                                "eps": str(cert.value)})
    return CheckResult("freezing-lower-bound", "pass",
                       {"from_step": start, "to_step": h, "eps_log10": cert.log10})


def check_positive_definition(ctx):
    """Positive verdicts match the definition on one extra lasso period of play."""
    a = ctx.analysis
    window = a.switch + a.lasso.period
    trace = simulate(a.mdp, uniform_strategy(a.mdp), a.initial, window)
    masses = [d.mass_in(a.target) for d in trace.dists]
    l = a.lasso.loop_start
    facts = {
        "eventually": any(v > 0 for v in masses),
        "always": all(v > 0 for v in masses),
        "weakly": any(v > 0 for v in masses[l:]),
        "strongly": all(v > 0 for v in masses[l:]),
    }
    for mode, expected in facts.items():
        if a.answer(mode, "positive") != expected:
            return CheckResult("positive-definition-sim", "fail",
                               {"mode": mode, "expected": expected})
    return CheckResult("positive-definition-sim", "pass", {"window": window})


def check_support_monotonicity(ctx):
    """Freezing refines uniform: supports shrink, and agree on the EC union late."""
    a = ctx.analysis
    uni = ctx.traces["uniform"]
    frz = ctx.traces["freezing"]
    union = a.mec.union
    for i in range(ctx.horizon + 1):
        su = uni.dists[i].support()
        sf = frz.dists[i].support()
        if not sf <= su:
            return CheckResult("support-monotonicity", "fail",
                               {"step": i, "reason": "freezing support escapes uniform"})
        if i >= a.switch and sf & union != su & union:
            return CheckResult("support-monotonicity", "fail",
                               {"step": i, "reason": "EC-intersection mismatch"})
    return CheckResult("support-monotonicity", "pass", {"switch": a.switch})


def check_region_dp(ctx):
    """The almost-sure reach region matches DP-limit classification per state."""
    a = ctx.analysis
    region = almost_sure_reach_region(a.mdp, a.target)
    reach = max_reach_values(a.mdp, a.target, REGION_DP_HORIZON)
    cap = a.alpha ** a.mdp.n
    for q in range(a.mdp.n):
        if q in region:
            if 1 - reach[q] >= REGION_DP_GAP:
                return CheckResult("region-dp-agreement", "fail",
                                   {"state": a.mdp.states[q],
                                    "reason": "winning state did not converge",
                                    "residual": str(1 - reach[q])})
        elif reach[q] > 1 - cap:
            return CheckResult("region-dp-agreement", "fail",
                               {"state": a.mdp.states[q],
                                "reason": "losing state beats the cap"})
    return CheckResult("region-dp-agreement", "pass",
                       {"horizon": REGION_DP_HORIZON, "region": list(region)})


def check_witness_soundness(ctx):
    """Each synthesized classic witness achieves exactly what its verdict claims."""
    a = ctx.analysis
    n = a.mdp.n

    v = a.verdicts[("eventually", "sure")]
    if v.answer and v.witness is not None:
        k = v.certificate["k"]
        trace = ctx.traces[v.witness.label]
        if trace.dists[k].mass_in(a.target) != 1:
            return CheckResult("witness-soundness", "fail",
                               {"mode": "sure eventually", "step": k})

    v = a.verdicts[("always", "sure")]
    if v.answer and v.witness is not None:
        trace = ctx.traces[v.witness.label]
        if any(d.mass_in(a.target) != 1 for d in trace.dists):
            return CheckResult("witness-soundness", "fail", {"mode": "sure always"})

    v = a.verdicts[("strongly", "sure")]
    if v.answer and v.witness is not None:
        trace = ctx.traces[v.witness.label]
        if any(trace.dists[i].mass_in(a.target) != 1
               for i in range(n, ctx.horizon + 1)):
            return CheckResult("witness-soundness", "fail", {"mode": "sure strongly"})

    v = a.verdicts[("weakly", "sure")]
    if v.answer and v.witness is not None:
        k, r = v.certificate["k"], v.certificate["r"]
        trace = ctx.traces[v.witness.label]
        for i in range(k, ctx.horizon + 1, r):
            if trace.dists[i].mass_in(a.target) != 1:
                return CheckResult("witness-soundness", "fail",
                                   {"mode": "sure weakly", "step": i})
    return CheckResult("witness-soundness", "pass", {})


def check_certificates(ctx):
    """Certificates re-verify from region primitives alone."""
    a = ctx.analysis
    for (mode, win), verdict in a.verdicts.items():
        if win in ("sure", "almost-sure", "limit-sure"):
            if not recheck_certificate(a.mdp, verdict):
                return CheckResult("certificate-recheck", "fail",
                                   {"mode": mode, "win": win})
    return CheckResult("certificate-recheck", "pass", {})


ALL_CHECKS = {
    "lasso-integrity": check_lasso_integrity,
    "step-decay-cap": check_step_decay_cap,
    "eventually-isolation": check_eventually_isolation,
    "reach-value-cap": check_reach_value_cap,
    "always-prefix-dip": check_always_prefix_dip,
    "strongly-prefix-dip": check_strongly_prefix_dip,
    "full-sync-count-cap": check_full_sync_count_cap,
    "near-sync-count-cap": check_near_sync_count_cap,
    "freezing-lower-bound": check_freezing_bound,
    "positive-definition-sim": check_positive_definition,
    "support-monotonicity": check_support_monotonicity,
    "region-dp-agreement": check_region_dp,
    "witness-soundness": check_witness_soundness,
    "certificate-recheck": check_certificates,
}


def run_checks(analysis, horizon=None, budget=DEFAULT_CHECK_BUDGET, enum_depth=6,
               names=None):
    """Run the invariant battery; budget blowups mark single checks as skipped."""
    ctx = CheckContext(analysis, horizon=horizon, budget=budget, enum_depth=enum_depth)
    results = []
    for name, fn in ALL_CHECKS.items():
        if names is not None and name not in names:
            continue
        try:
            result = fn(ctx)
        except BudgetExceeded as exc:
            result = CheckResult(name, "skip", {"reason": str(exc)})
        results.append(result)
    return results
